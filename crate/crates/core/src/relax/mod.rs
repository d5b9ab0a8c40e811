//! Helicity-constrained energy minimization by Picard iteration on the
//! Grad–Shafranov equation `−Lφ = μ²(φ − φ_∞)₊`.

mod gs;
mod orbit;
mod steiner;

pub use gs::{gs_solve_step, relative_residual, GsSolver, GS_RESIDUAL_TOL};
pub use orbit::{align_shift, orbit_distance, shift_z_fractional, OrbitComparison};
pub use steiner::steiner_symmetrize;

use std::fmt::Write as _;

use ndarray::Array2;
use rayon::prelude::*;

use crate::clebsch::{
    apply_gs_operator, energy, gen_helicity, l2_norm, weighted_excess_sq, ClebschField,
    HalfPlaneGrid,
};
use crate::error::{invalid, Error, Result};
use crate::fields::{helicity_constant_hc, FieldParams};

/// Initial bubble `a r² exp(−((z − z₀)² + r²)/σ²)` added to `φ_∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedBubble {
    pub z0: f64,
    pub sigma: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxConfig {
    pub target_h: f64,
    pub params: FieldParams,
    pub grid: HalfPlaneGrid,
    pub max_iters: usize,
    pub tol_phi: f64,
    pub tol_h: f64,
    pub omega: f64,
    /// Symmetrize every this many iterations; 0 disables.
    pub steiner_every: usize,
    pub seed: SeedBubble,
}

impl RelaxConfig {
    /// Defaults around the explicit solution: `target_h = h_C`, box
    /// `[−4R, 4R] × [0, 4R]`, seed of radius R centred at the origin.
    pub fn benchmark(params: FieldParams, nz: usize, nr: usize) -> Result<Self> {
        params.validate()?;
        let r = params.radius();
        Ok(Self {
            target_h: helicity_constant_hc(&params),
            params,
            grid: HalfPlaneGrid::centered(4.0 * r, 4.0 * r, nz, nr)?,
            max_iters: 500,
            tol_phi: 1e-8,
            tol_h: 1e-10,
            omega: 0.5,
            steiner_every: 0,
            seed: SeedBubble {
                z0: 0.0,
                sigma: r,
                amplitude: params.w,
            },
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !self.target_h.is_finite() {
            return Err(invalid("target_h must be finite"));
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be positive"));
        }
        if !(self.tol_phi > 0.0 && self.tol_h > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(invalid(format!("omega must lie in (0, 1], got {}", self.omega)));
        }
        if !(self.seed.sigma > 0.0 && self.seed.amplitude > 0.0 && self.seed.z0.is_finite()) {
            return Err(invalid("seed radius and amplitude must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxReport {
    pub field: ClebschField,
    pub params: FieldParams,
    pub mu: f64,
    pub energy_history: Vec<f64>,
    pub helicity_history: Vec<f64>,
    pub mu_history: Vec<f64>,
    /// Relative `L²(r⁻¹)` change of φ per iteration.
    pub change_history: Vec<f64>,
    /// `‖−Lφ − μ²(φ − φ_∞)₊‖ / ‖μ²(φ − φ_∞)₊‖` in `L²(r⁻¹)` over interior nodes.
    pub gs_residual: f64,
    pub converged: bool,
    pub iterations: usize,
    pub reseeds: usize,
    /// Iterations after the fifth whose energy exceeded the previous one.
    pub energy_increases: usize,
}

/// `(h̃, γ̃) = ((W/2)⁻² h, (W/2)⁻¹ γ)`.
pub fn scaling_reduce(h: f64, w: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(invalid(format!("W must be positive, got {w}")));
    }
    let s = 0.5 * w;
    Ok((h / (s * s), gamma / s))
}

/// `μ = h / (2 M₂)` with `M₂ = ∫ (φ − φ_∞)₊² r⁻² dx`.
pub fn recover_mu(phi: &Array2<f64>, grid: &HalfPlaneGrid, target_h: f64, params: &FieldParams) -> Result<f64> {
    if target_h == 0.0 {
        return Ok(0.0);
    }
    let m2 = weighted_excess_sq(phi, grid, params);
    if !(m2 > 0.0) {
        return Err(Error::DegenerateSupport);
    }
    Ok(target_h / (2.0 * m2))
}

fn excess(phi: &Array2<f64>, grid: &HalfPlaneGrid, params: &FieldParams) -> Array2<f64> {
    Array2::from_shape_fn(phi.dim(), |(i, j)| (phi[[i, j]] - params.phi_inf(grid.r(j))).max(0.0))
}

/// Relative Grad–Shafranov residual of `φ` for multiplier `μ`.
pub fn gs_residual(phi: &Array2<f64>, grid: &HalfPlaneGrid, mu: f64, params: &FieldParams) -> f64 {
    let rhs = excess(phi, grid, params) * (mu * mu);
    let mut res = apply_gs_operator(phi, grid);
    let (nz, nr) = grid.shape();
    for i in 0..nz {
        for j in 0..nr {
            res[[i, j]] = if grid.is_boundary(i, j) { 0.0 } else { -res[[i, j]] - rhs[[i, j]] };
        }
    }
    let den = l2_norm(&rhs, grid);
    let num = l2_norm(&res, grid);
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// Amplitude `t` of `t·w` at which the multiplier of `t·w` reproduces `t`,
/// i.e. `t = μ(t w)²`. Solved by bisection in `log t`.
fn consistent_amplitude(w: &Array2<f64>, grid: &HalfPlaneGrid, h: f64, params: &FieldParams) -> Result<f64> {
    let gap = |t: f64| -> f64 {
        let m2 = weighted_excess_sq(&(w * t), grid, params);
        if m2 > 0.0 {
            (h.abs() / (2.0 * m2)).ln() * 2.0 - t.ln()
        } else {
            f64::INFINITY
        }
    };
    // gap is decreasing in t; bracket the sign change
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let mut k = 0;
    while gap(hi) > 0.0 {
        hi *= 4.0;
        k += 1;
        if k > 200 {
            return Err(Error::DegenerateSupport);
        }
    }
    k = 0;
    while gap(lo) < 0.0 {
        lo *= 0.25;
        k += 1;
        if k > 200 {
            return Err(Error::DegenerateSupport);
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}

fn seed_phi(grid: &HalfPlaneGrid, params: &FieldParams, seed: &SeedBubble, amplitude: f64) -> Array2<f64> {
    let s2 = seed.sigma * seed.sigma;
    let mut phi = grid.sample(|z, r| {
        params.phi_inf(r) + amplitude * r * r * (-((z - seed.z0).powi(2) + r * r) / s2).exp()
    });
    for i in 0..grid.nz() {
        phi[[i, 0]] = 0.0;
    }
    phi
}

struct Picard {
    phi: Array2<f64>,
    mu: f64,
    energy: Vec<f64>,
    helicity: Vec<f64>,
    mus: Vec<f64>,
    changes: Vec<f64>,
    converged: bool,
}

fn picard(
    cfg: &RelaxConfig,
    solver: &GsSolver,
    params: &FieldParams,
    h: f64,
    mut phi: Array2<f64>,
) -> Result<Picard> {
    let grid = &cfg.grid;
    let mut out = Picard {
        phi: grid.zeros(),
        mu: 0.0,
        energy: Vec::new(),
        helicity: Vec::new(),
        mus: Vec::new(),
        changes: Vec::new(),
        converged: false,
    };
    // The seed carries φ_∞ outside the bubble, so the first update is undamped.
    let mut omega = 1.0;
    for k in 0..cfg.max_iters {
        let w = solver.solve(&excess(&phi, grid, params))?;
        let t = consistent_amplitude(&w, grid, h, params)?;
        let mut next = &phi * (1.0 - omega) + &w * (omega * t);
        if cfg.steiner_every > 0 && (k + 1) % cfg.steiner_every == 0 {
            next = steiner_symmetrize(&next);
        }
        omega = cfg.omega;
        let mu = recover_mu(&next, grid, h, params)?;
        let field = with_swirl(grid, &next, mu, params)?;
        let norm = l2_norm(&next, grid);
        let change = if k == 0 {
            1.0
        } else {
            l2_norm(&(&next - &phi), grid) / norm
        };
        out.energy.push(energy(&field));
        let hk = gen_helicity(&field, params);
        out.helicity.push(hk);
        out.mus.push(mu);
        out.changes.push(change);
        phi = next;
        out.mu = mu;
        if change <= cfg.tol_phi && (hk - h).abs() <= cfg.tol_h * h.abs() {
            out.converged = true;
            break;
        }
    }
    out.phi = phi;
    Ok(out)
}

fn with_swirl(grid: &HalfPlaneGrid, phi: &Array2<f64>, mu: f64, params: &FieldParams) -> Result<ClebschField> {
    let g = excess(phi, grid, params) * mu;
    ClebschField::new(*grid, phi.clone(), g)
}

/// Runs the constrained minimization. The iteration works at `W = 2` and the
/// result is rescaled to the requested `W`.
///
/// Each step solves `−L w = (φ_k − φ_∞)₊`, picks the amplitude `t` with
/// `t = μ(t w)²` so that the update is a fixed point in amplitude, and blends
/// `φ_{k+1} = (1 − ω)φ_k + ω t w`.
pub fn minimize(cfg: &RelaxConfig) -> Result<RelaxReport> {
    cfg.validate()?;
    let grid = cfg.grid;
    if cfg.target_h == 0.0 {
        return Ok(RelaxReport {
            field: ClebschField::zero(grid),
            params: cfg.params,
            mu: 0.0,
            energy_history: vec![],
            helicity_history: vec![],
            mu_history: vec![],
            change_history: vec![],
            gs_residual: 0.0,
            converged: true,
            iterations: 0,
            reseeds: 0,
            energy_increases: 0,
        });
    }
    let (h, gamma) = scaling_reduce(cfg.target_h, cfg.params.w, cfg.params.gamma)?;
    let scale = 0.5 * cfg.params.w;
    let inner = FieldParams::new(2.0, cfg.params.lambda, gamma)?;
    let solver = GsSolver::new(grid);

    let mut reseeds = 0;
    let run = loop {
        let amplitude = cfg.seed.amplitude / scale * 2f64.powi(reseeds as i32);
        let phi0 = seed_phi(&grid, &inner, &cfg.seed, amplitude);
        match picard(cfg, &solver, &inner, h, phi0) {
            Ok(r) => break r,
            Err(Error::DegenerateSupport) if reseeds < 3 => reseeds += 1,
            Err(e) => return Err(e),
        }
    };

    let residual = gs_residual(&run.phi, &grid, run.mu, &inner);
    let phi = run.phi * scale;
    let field = with_swirl(&grid, &phi, run.mu, &cfg.params)?;
    let s2 = scale * scale;
    let energy_history: Vec<f64> = run.energy.iter().map(|e| e * s2).collect();
    let energy_increases = energy_history
        .windows(2)
        .enumerate()
        .filter(|(k, w)| *k >= 5 && w[1] > w[0])
        .count();
    Ok(RelaxReport {
        field,
        params: cfg.params,
        mu: run.mu,
        iterations: energy_history.len(),
        energy_history,
        helicity_history: run.helicity.iter().map(|h| h * s2).collect(),
        mu_history: run.mus,
        change_history: run.changes,
        gs_residual: residual,
        converged: run.converged,
        reseeds,
        energy_increases,
    })
}

/// One point of the minimum curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub h: f64,
    pub energy: f64,
    pub converged: bool,
}

/// `I_h` for each `h`, the lowest energy over `restarts` seeds whose radii
/// are spread around the configured one. Entries run concurrently.
pub fn minimum_curve(h_values: &[f64], base: &RelaxConfig, restarts: usize) -> Result<Vec<CurvePoint>> {
    if h_values.contains(&0.0) {
        return Err(invalid("minimum curve entries must be nonzero"));
    }
    let restarts = restarts.max(1);
    h_values
        .par_iter()
        .map(|&h| {
            let mut best: Option<CurvePoint> = None;
            for k in 0..restarts {
                let mut cfg = base.clone();
                cfg.target_h = h;
                cfg.seed.sigma *= [1.0, 0.8, 1.25, 0.64, 1.5625][k % 5];
                let rep = minimize(&cfg)?;
                let e = rep.energy_history.last().copied().unwrap_or(0.0);
                let better = match best {
                    None => true,
                    Some(b) => (rep.converged && !b.converged) || (rep.converged == b.converged && e < b.energy),
                };
                if better {
                    best = Some(CurvePoint {
                        h,
                        energy: e,
                        converged: rep.converged,
                    });
                }
            }
            Ok(best.expect("at least one restart"))
        })
        .collect()
}

/// One line per iteration: `iteration energy H mu change`.
pub fn write_history(report: &RelaxReport) -> String {
    let mut s = String::new();
    for k in 0..report.iterations {
        let _ = writeln!(
            s,
            "{} {:.16e} {:.16e} {:.16e} {:.16e}",
            k + 1,
            report.energy_history[k],
            report.helicity_history[k],
            report.mu_history[k],
            report.change_history[k]
        );
    }
    s
}

/// `key = value` summary of a run.
pub fn write_summary(report: &RelaxReport, target_h: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "target_h = {:.16e}", target_h);
    let _ = writeln!(s, "converged = {}", report.converged);
    let _ = writeln!(s, "iterations = {}", report.iterations);
    let _ = writeln!(s, "reseeds = {}", report.reseeds);
    let _ = writeln!(s, "mu = {:.16e}", report.mu);
    let _ = writeln!(s, "energy = {:.16e}", report.energy_history.last().copied().unwrap_or(0.0));
    let _ = writeln!(s, "helicity = {:.16e}", gen_helicity(&report.field, &report.params));
    let _ = writeln!(s, "gs_residual = {:.16e}", report.gs_residual);
    let _ = writeln!(s, "energy_increases = {}", report.energy_increases);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_examples() {
        assert_eq!(scaling_reduce(3.0, 4.0, 1.0).unwrap(), (0.75, 0.5));
        assert_eq!(scaling_reduce(3.0, 2.0, 0.4).unwrap(), (3.0, 0.4));
        assert!(scaling_reduce(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn mu_basics() {
        let g = HalfPlaneGrid::centered(3.0, 3.0, 31, 16).unwrap();
        let p = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let phi = g.sample(|z, r| 2.0 * r * r * (-z * z - r * r).exp());
        assert_eq!(recover_mu(&phi, &g, 0.0, &p).unwrap(), 0.0);
        let a = recover_mu(&phi, &g, 1.5, &p).unwrap();
        let b = recover_mu(&phi, &g, 3.0, &p).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-15 * b.abs());
        assert!(matches!(recover_mu(&g.zeros(), &g, 1.0, &p), Err(Error::DegenerateSupport)));
    }

    #[test]
    fn constraint_exact_for_recovered_mu() {
        let g = HalfPlaneGrid::centered(3.0, 3.0, 31, 16).unwrap();
        let p = FieldParams::new(1.0, 1.0, 0.1).unwrap();
        let mut phi = g.sample(|z, r| 2.0 * r * r * (-z * z - r * r).exp());
        for i in 0..g.nz() {
            phi[[i, g.nr() - 1]] = 0.0;
        }
        phi.row_mut(0).fill(0.0);
        phi.row_mut(g.nz() - 1).fill(0.0);
        let mu = recover_mu(&phi, &g, -0.37, &p).unwrap();
        let f = with_swirl(&g, &phi, mu, &p).unwrap();
        assert!((gen_helicity(&f, &p) + 0.37).abs() < 1e-14);
    }

    #[test]
    fn zero_target() {
        let p = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let mut cfg = RelaxConfig::benchmark(p, 33, 17).unwrap();
        cfg.target_h = 0.0;
        let r = minimize(&cfg).unwrap();
        assert!(r.converged);
        assert_eq!(energy(&r.field), 0.0);
    }

    #[test]
    fn config_validation() {
        let p = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let base = RelaxConfig::benchmark(p, 33, 17).unwrap();
        let mut c = base.clone();
        c.omega = 0.0;
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.tol_phi = 0.0;
        assert!(c.validate().is_err());
        let mut c = base;
        c.seed.sigma = -1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn tiny_seed_is_degenerate() {
        let p = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let mut cfg = RelaxConfig::benchmark(p, 33, 17).unwrap();
        cfg.seed.amplitude = 1e-300;
        assert!(matches!(minimize(&cfg), Err(Error::DegenerateSupport)));
    }

    #[test]
    fn coarse_benchmark_converges() {
        let p = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let cfg = RelaxConfig::benchmark(p, 65, 33).unwrap();
        let r = minimize(&cfg).unwrap();
        assert!(r.converged, "{:?}", &r.change_history[r.change_history.len().saturating_sub(5)..]);
        assert!((r.mu - 1.0).abs() < 0.05, "{}", r.mu);
        let min = r.field.phi().iter().fold(0.0f64, |m, v| m.min(*v));
        let max = r.field.phi().iter().fold(0.0f64, |m, v| m.max(*v));
        assert!(min >= -1e-10 * max);
        let h = gen_helicity(&r.field, &p);
        assert!((h - cfg.target_h).abs() <= 1e-10 * cfg.target_h.abs());
    }
}

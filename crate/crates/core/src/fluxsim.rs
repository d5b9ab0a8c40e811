//! Resistive transport of Clebsch potentials by a prescribed swirl-free flow,
//! with running balance sheets for generalized helicity and mean-square
//! potential.
//!
//! With `Φ = φ − φ_∞` the evolution is `∂_tΦ + u·∇Φ = μLΦ` and
//! `∂_tG + u·∇G = μLG`; since `φ_∞` is steady, `φ` receives the same increment
//! as `Φ`. Boundary nodes are frozen.

use std::f64::consts::PI;
use std::fmt::Write as _;

use ndarray::Array2;
use rayon::prelude::*;

use crate::clebsch::{
    apply_gs_operator, d_dr, d_dz, field_components, gen_helicity, mean_square_potential,
    poloidal_components, ClebschField, HalfPlaneGrid,
};
use crate::error::{invalid, Error, Result};
use crate::fields::FieldParams;

/// Axisymmetric swirl-free velocity `(u_z, u_r)` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Velocity {
    pub uz: Array2<f64>,
    pub ur: Array2<f64>,
}

impl Velocity {
    pub fn zero(grid: &HalfPlaneGrid) -> Self {
        Self {
            uz: grid.zeros(),
            ur: grid.zeros(),
        }
    }

    pub fn max_speed(&self) -> f64 {
        self.uz
            .iter()
            .zip(self.ur.iter())
            .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)))
    }
}

/// `u_z = (1/r)∂_rψ`, `u_r = −(1/r)∂_zψ`; on the axis `u_r = 0` and `u_z` is
/// taken from the even fit of `ψ/r²`. `ψ` should vanish on the axis and box.
pub fn velocity_from_stream(psi: &Array2<f64>, grid: &HalfPlaneGrid) -> Result<Velocity> {
    if psi.dim() != grid.shape() {
        return Err(invalid("stream function shape does not match grid"));
    }
    let (uz, ur) = poloidal_components(psi, grid);
    Ok(Velocity { uz, ur })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: FieldParams,
    pub mu: f64,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub stream_psi: Array2<f64>,
    pub initial: ClebschField,
    /// Number of trace samples including `t = 0` and `t_end`.
    pub n_samples: usize,
    /// Optional cap on the time step below the stability limit.
    pub dt_max: Option<f64>,
}

impl SimConfig {
    pub fn new(params: FieldParams, initial: ClebschField, mu: f64, t_end: f64) -> Self {
        let grid = *initial.grid();
        Self {
            params,
            mu,
            t_end,
            cfl_safety: 0.5,
            stream_psi: grid.zeros(),
            initial,
            n_samples: 11,
            dt_max: None,
        }
    }

    pub fn grid(&self) -> &HalfPlaneGrid {
        self.initial.grid()
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(invalid(format!("resistivity must be nonnegative, got {}", self.mu)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(invalid("t_end must be positive"));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety < 1.0) {
            return Err(invalid(format!("cfl_safety must lie in (0, 1), got {}", self.cfl_safety)));
        }
        if self.n_samples < 2 {
            return Err(invalid("need at least two samples"));
        }
        if let Some(d) = self.dt_max {
            if !(d > 0.0) {
                return Err(invalid("dt_max must be positive"));
            }
        }
        if self.stream_psi.dim() != self.grid().shape() {
            return Err(invalid("stream function shape does not match grid"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimTrace {
    pub times: Vec<f64>,
    pub h_series: Vec<f64>,
    pub m_series: Vec<f64>,
    pub helicity_dissipation_accum: Vec<f64>,
    pub msp_dissipation_accum: Vec<f64>,
    pub balance_residual_h: Vec<f64>,
    pub balance_residual_m: Vec<f64>,
    /// Half-plane area of `{Φ > 0}`.
    pub positive_area: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
}

/// Largest stable step `min(h/max|u|, h²/(4μ))` (before the safety factor).
pub fn stability_limit(grid: &HalfPlaneGrid, vel: &Velocity, mu: f64) -> f64 {
    let h = grid.hz().min(grid.hr());
    let umax = vel.max_speed();
    let adv = if umax > 0.0 { h / umax } else { f64::INFINITY };
    let diff = if mu > 0.0 { h * h / (4.0 * mu) } else { f64::INFINITY };
    adv.min(diff)
}

fn increment(a: &Array2<f64>, lap: &Array2<f64>, vel: &Velocity, grid: &HalfPlaneGrid, dt: f64, mu: f64) -> Array2<f64> {
    let (nz, nr) = grid.shape();
    let (hz, hr) = (grid.hz(), grid.hr());
    let mut out = Array2::zeros((nz, nr));
    for i in 1..nz - 1 {
        for j in 1..nr - 1 {
            let uz = vel.uz[[i, j]];
            let ur = vel.ur[[i, j]];
            let az = if uz > 0.0 {
                (a[[i, j]] - a[[i - 1, j]]) / hz
            } else {
                (a[[i + 1, j]] - a[[i, j]]) / hz
            };
            let ar = if ur > 0.0 {
                (a[[i, j]] - a[[i, j - 1]]) / hr
            } else {
                (a[[i, j + 1]] - a[[i, j]]) / hr
            };
            out[[i, j]] = dt * (mu * lap[[i, j]] - uz * az - ur * ar);
        }
    }
    out
}

/// One explicit step: first-order upwind advection plus centred diffusion.
pub fn step(state: &ClebschField, params: &FieldParams, vel: &Velocity, dt: f64, mu: f64) -> Result<ClebschField> {
    let grid = *state.grid();
    let limit = stability_limit(&grid, vel, mu);
    if !(dt > 0.0) || dt > limit {
        return Err(Error::Cfl { dt, limit });
    }
    let phi_total = state.phi() - &grid.sample(|_, r| params.phi_inf(r));
    let dphi = increment(&phi_total, &apply_gs_operator(&phi_total, &grid), vel, &grid, dt, mu);
    let dg = increment(state.g(), &apply_gs_operator(state.g(), &grid), vel, &grid, dt, mu);
    ClebschField::from_samples(grid, state.phi() + &dphi, state.g() + &dg)
}

/// `2μ ∫ ∇×B·B 1(Φ > 0) dx` with `B = b + B_∞` rebuilt from the potentials.
pub fn helicity_dissipation(field: &ClebschField, params: &FieldParams, mu: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let grid = field.grid();
    let c = field_components(field);
    let bz = &c.bz - params.w;
    let (hz, hr) = (grid.hz(), grid.hr());
    let dz_br = d_dz(&c.br, hz);
    let dr_bz = d_dr(&bz, hr);
    let dz_bt = d_dz(&c.btheta, hz);
    let dr_g = d_dr(field.g(), hr);
    let phi = field.phi();
    let integral = grid.integrate(|i, j| {
        let r = grid.r(j);
        if j == 0 || phi[[i, j]] - params.phi_inf(r) <= 0.0 {
            return 0.0;
        }
        let curl_t = dz_br[[i, j]] - dr_bz[[i, j]];
        let curl_z = dr_g[[i, j]] / r;
        let curl_r = -dz_bt[[i, j]];
        (curl_z * bz[[i, j]] + curl_r * c.br[[i, j]] + curl_t * c.btheta[[i, j]]) * r
    });
    2.0 * mu * 2.0 * PI * integral
}

/// `2μ ∫ |∇Φ₊|² dx`.
pub fn msp_dissipation(field: &ClebschField, params: &FieldParams, mu: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let grid = field.grid();
    let plus = Array2::from_shape_fn(grid.shape(), |(i, j)| {
        (field.phi()[[i, j]] - params.phi_inf(grid.r(j))).max(0.0)
    });
    let dz = d_dz(&plus, grid.hz());
    let dr = d_dr(&plus, grid.hr());
    let integral = grid.integrate(|i, j| (dz[[i, j]].powi(2) + dr[[i, j]].powi(2)) * grid.r(j));
    2.0 * mu * 2.0 * PI * integral
}

fn positive_area(field: &ClebschField, params: &FieldParams) -> f64 {
    let grid = field.grid();
    grid.integrate(|i, j| {
        if field.phi()[[i, j]] > params.phi_inf(grid.r(j)) {
            1.0
        } else {
            0.0
        }
    })
}

/// Time step used by [`run`]: the stability limit times the safety factor,
/// capped by `dt_max`, then shortened so every sample interval holds a whole
/// number of steps.
pub fn time_step(cfg: &SimConfig, vel: &Velocity) -> (f64, usize) {
    let mut dt = cfg.cfl_safety * stability_limit(cfg.grid(), vel, cfg.mu);
    if let Some(d) = cfg.dt_max {
        dt = dt.min(d);
    }
    let interval = cfg.t_end / (cfg.n_samples - 1) as f64;
    let per = if dt.is_finite() { (interval / dt).ceil().max(1.0) as usize } else { 1 };
    (interval / per as f64, per)
}

pub fn run(cfg: &SimConfig) -> Result<SimTrace> {
    cfg.validate()?;
    let grid = *cfg.grid();
    let vel = velocity_from_stream(&cfg.stream_psi, &grid)?;
    let (dt, per) = time_step(cfg, &vel);
    let p = &cfg.params;
    let mut state = cfg.initial.clone();
    let mut tr = SimTrace {
        dt,
        ..Default::default()
    };
    let h0 = gen_helicity(&state, p);
    let m0 = mean_square_potential(&state, p);
    let (mut acc_h, mut acc_m) = (0.0, 0.0);
    let mut dh = helicity_dissipation(&state, p, cfg.mu);
    let mut dm = msp_dissipation(&state, p, cfg.mu);
    let record = |t: f64, s: &ClebschField, acc_h: f64, acc_m: f64, tr: &mut SimTrace| {
        let h = gen_helicity(s, p);
        let m = mean_square_potential(s, p);
        tr.times.push(t);
        tr.h_series.push(h);
        tr.m_series.push(m);
        tr.helicity_dissipation_accum.push(acc_h);
        tr.msp_dissipation_accum.push(acc_m);
        tr.balance_residual_h.push(h + acc_h - h0);
        tr.balance_residual_m.push(m + acc_m - m0);
        tr.positive_area.push(positive_area(s, p));
    };
    record(0.0, &state, 0.0, 0.0, &mut tr);
    let mut n = 0usize;
    for k in 1..cfg.n_samples {
        for _ in 0..per {
            state = step(&state, p, &vel, dt, cfg.mu)?;
            n += 1;
            let dh_new = helicity_dissipation(&state, p, cfg.mu);
            let dm_new = msp_dissipation(&state, p, cfg.mu);
            acc_h += 0.5 * dt * (dh + dh_new);
            acc_m += 0.5 * dt * (dm + dm_new);
            dh = dh_new;
            dm = dm_new;
        }
        let t = if k == cfg.n_samples - 1 { cfg.t_end } else { n as f64 * dt };
        record(t, &state, acc_h, acc_m, &mut tr);
    }
    tr.steps = n;
    Ok(tr)
}

/// Helicity drift of one scan entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftPoint {
    pub mu: f64,
    /// `sup_t |H(t) − H(0)|` over the trace samples.
    pub drift: f64,
}

/// Runs `base` once per resistivity with a common time step (the most
/// restrictive one in the list) and returns the helicity drifts.
pub fn drift_scan(base: &SimConfig, mu_list: &[f64]) -> Result<Vec<DriftPoint>> {
    if mu_list.iter().any(|m| !(*m >= 0.0)) {
        return Err(invalid("resistivities must be nonnegative"));
    }
    let vel = velocity_from_stream(&base.stream_psi, base.grid())?;
    let dt = mu_list
        .iter()
        .map(|&mu| {
            let mut c = base.clone();
            c.mu = mu;
            time_step(&c, &vel).0
        })
        .fold(f64::INFINITY, f64::min);
    mu_list
        .par_iter()
        .map(|&mu| {
            let mut cfg = base.clone();
            cfg.mu = mu;
            cfg.dt_max = Some(dt);
            let tr = run(&cfg)?;
            let h0 = tr.h_series[0];
            let drift = tr.h_series.iter().fold(0.0f64, |m, h| m.max((h - h0).abs()));
            Ok(DriftPoint { mu, drift })
        })
        .collect()
}

/// One line per sample: `t H M dissH_accum dissM_accum resH resM`.
pub fn write_trace(tr: &SimTrace) -> String {
    let mut s = String::new();
    for k in 0..tr.times.len() {
        let _ = writeln!(
            s,
            "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
            tr.times[k],
            tr.h_series[k],
            tr.m_series[k],
            tr.helicity_dissipation_accum[k],
            tr.msp_dissipation_accum[k],
            tr.balance_residual_h[k],
            tr.balance_residual_m[k]
        );
    }
    s
}

/// Smooth ring-shaped stream function `a r² exp(−(z² + (r − r₀)²)/s²)`,
/// zeroed on the box boundary.
pub fn ring_stream(grid: &HalfPlaneGrid, a: f64, r0: f64, s: f64) -> Array2<f64> {
    let mut psi = grid.sample(|z, r| a * r * r * (-(z * z + (r - r0).powi(2)) / (s * s)).exp());
    let (nz, nr) = grid.shape();
    for i in 0..nz {
        psi[[i, 0]] = 0.0;
        psi[[i, nr - 1]] = 0.0;
    }
    for j in 0..nr {
        psi[[0, j]] = 0.0;
        psi[[nz - 1, j]] = 0.0;
    }
    psi
}

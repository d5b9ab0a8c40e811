use std::f64::consts::PI;
use std::sync::OnceLock;

use ndarray::Array2;
use rayon::prelude::*;

use super::HalfPlaneGrid;
use crate::quad::GaussLegendre;

const SMALL_S: f64 = 1e-8;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(64))
}

fn log_asymptote(s: f64) -> f64 {
    -0.5 * s.ln() + 8f64.ln() - 2.0
}

/// `F(s) = ∫_0^π cos θ / √(2(1 − cos θ) + s) dθ`.
///
/// On `[0, π/2]` the substitution `2 sin(θ/2) = √s sinh u` removes the
/// logarithmic peak at θ = 0; `[π/2, π]` is integrated directly. Both pieces
/// use 64-node Gauss–Legendre. Below `s = 1e-8` the log asymptote is returned.
pub fn green_f(s: f64) -> f64 {
    if s < SMALL_S {
        return log_asymptote(s.max(f64::MIN_POSITIVE));
    }
    let gl = rule();
    let rs = s.sqrt();
    let u_max = (2f64.sqrt() / rs).asinh();
    let near = gl.integrate(
        |u| {
            let half = (0.5 * rs * u.sinh()).min(1.0).asin();
            (2.0 * half).cos() / half.cos()
        },
        0.0,
        u_max,
    );
    let far = gl.integrate(
        |t| t.cos() / (2.0 * (1.0 - t.cos()) + s).sqrt(),
        0.5 * PI,
        PI,
    );
    near + far
}

/// Mean of `ln(x² + y²)` over `[−a, a] × [−b, b]`.
fn mean_log_rect(a: f64, b: f64) -> f64 {
    (a * a + b * b).ln() - 3.0 + (a / b) * (b / a).atan() + (b / a) * (a / b).atan()
}

/// `η = ∬ 𝒢(z, r, z', r') G(z', r')/r' dz' dr'` with the trapezoid rule over
/// source nodes. The coincident node uses the cell average of the log
/// asymptote. `η = 0` on the axis.
pub fn vector_potential_eta(g: &Array2<f64>, grid: &HalfPlaneGrid) -> Array2<f64> {
    let (nz, nr) = grid.shape();
    let sources: Vec<(f64, f64, f64)> = (0..nz)
        .flat_map(|i| (1..nr).map(move |j| (i, j)))
        .filter(|&(i, j)| g[[i, j]] != 0.0)
        .map(|(i, j)| {
            let r = grid.r(j);
            (grid.z(i), r, grid.wz(i) * grid.wr(j) * g[[i, j]] / r)
        })
        .collect();
    let mut out = Array2::zeros((nz, nr));
    let values: Vec<f64> = (0..nz * nr)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / nr, k % nr);
            if j == 0 {
                return 0.0;
            }
            let (z, r) = (grid.z(i), grid.r(j));
            let mut acc = 0.0;
            for &(zs, rs, w) in &sources {
                let dz = z - zs;
                let dr = r - rs;
                let rr = r * rs;
                let d2 = dz * dz + dr * dr;
                let f = if d2 == 0.0 {
                    let a = 0.5 * grid.wz(i);
                    let b = 0.5 * grid.wr(j);
                    -0.5 * (mean_log_rect(a, b) - rr.ln()) + 8f64.ln() - 2.0
                } else {
                    green_f(d2 / rr)
                };
                acc += w * rr.sqrt() * f;
            }
            acc / (2.0 * PI)
        })
        .collect();
    for (k, v) in values.into_iter().enumerate() {
        out[[k / nr, k % nr]] = v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clebsch::{apply_gs_operator, l2_norm};

    /// Complete elliptic integrals K(k), E(k) by the arithmetic-geometric mean.
    fn elliptic_ke(k2: f64) -> (f64, f64) {
        let mut a = 1.0f64;
        let mut b = (1.0 - k2).sqrt();
        let mut c2_sum = 0.5 * k2;
        let mut p = 0.5;
        for _ in 0..40 {
            let an = 0.5 * (a + b);
            let c = 0.5 * (a - b);
            b = (a * b).sqrt();
            a = an;
            p *= 2.0;
            c2_sum += p * c * c;
            if c.abs() < 1e-17 {
                break;
            }
        }
        let k = PI / (2.0 * a);
        (k, k * (1.0 - c2_sum))
    }

    fn f_elliptic(s: f64) -> f64 {
        let (k, e) = elliptic_ke(4.0 / (4.0 + s));
        ((2.0 + s) * k - (4.0 + s) * e) / (4.0 + s).sqrt()
    }

    #[test]
    fn f_matches_elliptic_form() {
        for &s in &[1e-7, 1e-5, 1e-3, 0.05, 0.5, 1.0, 3.0, 10.0, 100.0, 1e3] {
            let (a, b) = (green_f(s), f_elliptic(s));
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "s = {s}: {a} vs {b}");
        }
    }

    #[test]
    fn f_asymptotics() {
        let s = 1e-9;
        assert!((green_f(s) - log_asymptote(s)).abs() < 1e-6);
        let ratio = green_f(100.0) / green_f(400.0);
        assert!((ratio / 8.0 - 1.0).abs() < 0.15, "{ratio}");
        // continuity across the switch
        assert!((green_f(1.01e-8) - log_asymptote(1.01e-8)).abs() < 1e-6);
    }

    #[test]
    fn mean_log_rect_quadrature() {
        let (a, b) = (0.3, 0.7);
        let n = 400;
        let mut acc = 0.0;
        for p in 0..n {
            for q in 0..n {
                let x = -a + (p as f64 + 0.5) * 2.0 * a / n as f64;
                let y = -b + (q as f64 + 0.5) * 2.0 * b / n as f64;
                acc += (x * x + y * y).ln();
            }
        }
        acc /= (n * n) as f64;
        assert!((acc - mean_log_rect(a, b)).abs() < 1e-4);
    }

    #[test]
    fn zero_source() {
        let g = HalfPlaneGrid::new(-1.0, 1.0, 1.0, 9, 9).unwrap();
        assert!(vector_potential_eta(&g.zeros(), &g).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn inverts_operator() {
        let bump = |z: f64, r: f64| r * r * (-4.0 * (z * z + (r - 1.0).powi(2))).exp();
        let mut res = Vec::new();
        for n in [10usize, 20, 40] {
            let grid = HalfPlaneGrid::new(-2.0, 2.0, 2.5, 8 * n / 5 + 1, n + 1).unwrap();
            let mut g = grid.sample(bump);
            for i in 0..grid.nz() {
                g[[i, grid.nr() - 1]] = 0.0;
                g[[i, 0]] = 0.0;
            }
            let eta = vector_potential_eta(&g, &grid);
            let mut r = apply_gs_operator(&eta, &grid);
            for i in 1..grid.nz() - 1 {
                for j in 1..grid.nr() - 1 {
                    r[[i, j]] = -r[[i, j]] - g[[i, j]];
                }
            }
            res.push(l2_norm(&r, &grid) / l2_norm(&g, &grid));
        }
        assert!(res[2] < 0.05, "{res:?}");
        let order = (res[1] / res[2]).log2();
        assert!(order >= 1.0, "{res:?}");
    }
}

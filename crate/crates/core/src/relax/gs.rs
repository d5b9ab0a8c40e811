use std::f64::consts::PI;

use ndarray::Array2;
use rayon::prelude::*;

use crate::clebsch::{apply_gs_operator, HalfPlaneGrid};
use crate::error::{invalid, Error, Result};

/// Required relative residual of a direct solve.
pub const GS_RESIDUAL_TOL: f64 = 1e-10;

/// Direct solver for `−L φ = f` with homogeneous Dirichlet data on the axis
/// and the box. A discrete sine transform diagonalizes the z-direction; each
/// sine mode is then a tridiagonal system in r, factored once.
#[derive(Debug, Clone)]
pub struct GsSolver {
    grid: HalfPlaneGrid,
    /// `sin(π k i / (nz − 1))` for interior `i, k ∈ 1..nz−1`.
    sines: Array2<f64>,
    /// Per mode: modified diagonal and upper multipliers of the Thomas sweep.
    factors: Vec<(Vec<f64>, Vec<f64>)>,
    sub: Vec<f64>,
}

impl GsSolver {
    pub fn new(grid: HalfPlaneGrid) -> Self {
        let (nz, nr) = grid.shape();
        let (n, m) = (nz - 2, nr - 2);
        let (hz, hr) = (grid.hz(), grid.hr());
        let sines = Array2::from_shape_fn((n, n), |(i, k)| {
            (PI * ((i + 1) * (k + 1)) as f64 / (nz - 1) as f64).sin()
        });
        let sub: Vec<f64> = (1..=m)
            .map(|j| -1.0 / (hr * hr) - 1.0 / (2.0 * grid.r(j) * hr))
            .collect();
        let sup: Vec<f64> = (1..=m)
            .map(|j| -1.0 / (hr * hr) + 1.0 / (2.0 * grid.r(j) * hr))
            .collect();
        let factors = (1..=n)
            .map(|k| {
                let s = (PI * k as f64 / (2.0 * (nz - 1) as f64)).sin();
                let lam = 4.0 * s * s / (hz * hz);
                let diag = 2.0 / (hr * hr) + lam;
                let mut d = vec![0.0; m];
                let mut c = vec![0.0; m];
                d[0] = diag;
                c[0] = sup[0] / d[0];
                for j in 1..m {
                    d[j] = diag - sub[j] * c[j - 1];
                    c[j] = sup[j] / d[j];
                }
                (d, c)
            })
            .collect();
        Self {
            grid,
            sines,
            factors,
            sub,
        }
    }

    pub fn grid(&self) -> &HalfPlaneGrid {
        &self.grid
    }

    /// Solves `−L φ = rhs` at interior nodes; boundary values of `rhs` are ignored.
    pub fn solve(&self, rhs: &Array2<f64>) -> Result<Array2<f64>> {
        let (nz, nr) = self.grid.shape();
        if rhs.dim() != (nz, nr) {
            return Err(invalid(format!("rhs shape {:?} does not match grid", rhs.dim())));
        }
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(invalid("rhs must be finite"));
        }
        let (n, m) = (nz - 2, nr - 2);
        let interior = rhs.slice(ndarray::s![1..nz - 1, 1..nr - 1]);
        // forward transform in z: modes × radial nodes
        let hat = self.sines.dot(&interior);
        let cols: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|k| {
                let (d, c) = &self.factors[k];
                let mut y = vec![0.0; m];
                y[0] = hat[[k, 0]] / d[0];
                for j in 1..m {
                    y[j] = (hat[[k, j]] - self.sub[j] * y[j - 1]) / d[j];
                }
                for j in (0..m - 1).rev() {
                    y[j] -= c[j] * y[j + 1];
                }
                y
            })
            .collect();
        let sol_hat = Array2::from_shape_fn((n, m), |(k, j)| cols[k][j]);
        let inner = self.sines.dot(&sol_hat) * (2.0 / (nz - 1) as f64);
        let mut phi = Array2::zeros((nz, nr));
        phi.slice_mut(ndarray::s![1..nz - 1, 1..nr - 1]).assign(&inner);

        let res = relative_residual(&phi, rhs, &self.grid);
        if !(res <= GS_RESIDUAL_TOL) {
            return Err(Error::SolverNonConvergence { residual: res });
        }
        Ok(phi)
    }
}

/// `‖−Lφ − rhs‖ / ‖rhs‖` over interior nodes (max norm); 0 when both vanish.
pub fn relative_residual(phi: &Array2<f64>, rhs: &Array2<f64>, grid: &HalfPlaneGrid) -> f64 {
    let lphi = apply_gs_operator(phi, grid);
    let (nz, nr) = grid.shape();
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for i in 1..nz - 1 {
        for j in 1..nr - 1 {
            num = num.max((-lphi[[i, j]] - rhs[[i, j]]).abs());
            den = den.max(rhs[[i, j]].abs());
        }
    }
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// One-shot convenience wrapper around [`GsSolver`].
pub fn gs_solve_step(rhs: &Array2<f64>, grid: &HalfPlaneGrid) -> Result<Array2<f64>> {
    GsSolver::new(*grid).solve(rhs)
}

use std::f64::consts::PI;

use ndarray::Array2;

use super::functionals::grad_sq_over_r;
use super::{d_dr, d_dz, ClebschField};

/// Half-plane norms of `φ` next to the ℝ⁵ norms of `ϕ = φ/r²`, the latter
/// already divided by the isometry constants so that matching pairs agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryNorms {
    /// `‖φ‖_{L¹(ℝ³)} = 2π ∬ |φ| r`.
    pub l1: f64,
    /// `‖ϕ‖_{L¹(ℝ⁵)} / π`.
    pub l1_5d: f64,
    /// `‖φ‖_{L²(ℝ²₊; r⁻¹)}`.
    pub l2: f64,
    /// `‖ϕ‖_{L²(ℝ⁵)} / (√2 π)`.
    pub l2_5d: f64,
    /// `∬ |∇φ|²/r`.
    pub dirichlet: f64,
    /// `‖∇ϕ‖²_{L²(ℝ⁵)} / (2π²)`.
    pub dirichlet_5d: f64,
}

/// Evaluates both sides of the 5-D isometries. The ℝ⁵ side works on `ϕ`
/// directly, with its axis value from the even fit through the first two
/// off-axis rows.
pub fn lift_to_5d_norms(field: &ClebschField) -> IsometryNorms {
    let grid = field.grid();
    let phi = field.phi();
    let (nz, nr) = grid.shape();
    let (r1, r2) = (grid.r(1), grid.r(2));
    let lifted = Array2::from_shape_fn((nz, nr), |(i, j)| {
        if j == 0 {
            let q1 = phi[[i, 1]] / (r1 * r1);
            let q2 = phi[[i, 2]] / (r2 * r2);
            (4.0 * q1 - q2) / 3.0
        } else {
            phi[[i, j]] / grid.r(j).powi(2)
        }
    });
    let measure5 = 2.0 * PI * PI;
    let l1 = 2.0 * PI * grid.integrate(|i, j| phi[[i, j]].abs() * grid.r(j));
    let l1_5d = measure5 * grid.integrate(|i, j| lifted[[i, j]].abs() * grid.r(j).powi(3)) / PI;
    let l2 = super::l2_norm(phi, grid);
    let l2_5d = (measure5 * grid.integrate(|i, j| lifted[[i, j]].powi(2) * grid.r(j).powi(3)))
        .sqrt()
        / (2f64.sqrt() * PI);
    let dz = d_dz(&lifted, grid.hz());
    let dr = d_dr(&lifted, grid.hr());
    let dirichlet_5d = grid.integrate(|i, j| {
        (dz[[i, j]].powi(2) + dr[[i, j]].powi(2)) * grid.r(j).powi(3)
    });
    IsometryNorms {
        l1,
        l1_5d,
        l2,
        l2_5d,
        dirichlet: grad_sq_over_r(phi, grid),
        dirichlet_5d,
    }
}

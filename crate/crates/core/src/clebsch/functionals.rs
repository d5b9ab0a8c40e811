use std::f64::consts::PI;

use ndarray::Array2;

use super::{d_dr, d_dz, ClebschField, HalfPlaneGrid};
use crate::fields::FieldParams;

/// Energy, generalized helicity and generalized mean-square potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Functionals {
    pub e: f64,
    pub h: f64,
    pub m: f64,
}

pub fn functionals(field: &ClebschField, params: &FieldParams) -> Functionals {
    Functionals {
        e: energy(field),
        h: gen_helicity(field, params),
        m: mean_square_potential(field, params),
    }
}

/// `∬ |∇a|²/r dz dr` with node-centred gradients; the axis row contributes 0.
pub(crate) fn grad_sq_over_r(a: &Array2<f64>, grid: &HalfPlaneGrid) -> f64 {
    let dz = d_dz(a, grid.hz());
    let dr = d_dr(a, grid.hr());
    grid.integrate(|i, j| {
        if j == 0 {
            0.0
        } else {
            (dz[[i, j]].powi(2) + dr[[i, j]].powi(2)) / grid.r(j)
        }
    })
}

/// `π ∬ (|∇φ|² + G²)/r dz dr`, i.e. `½∫|b|² dx`.
pub fn energy(field: &ClebschField) -> f64 {
    let grid = field.grid();
    let g = field.g();
    let swirl = grid.integrate(|i, j| {
        if j == 0 {
            0.0
        } else {
            g[[i, j]].powi(2) / grid.r(j)
        }
    });
    PI * (grad_sq_over_r(field.phi(), grid) + swirl)
}

#[inline]
fn excess(field: &ClebschField, params: &FieldParams, i: usize, j: usize) -> f64 {
    (field.phi()[[i, j]] - params.phi_inf(field.grid().r(j))).max(0.0)
}

/// `4π ∬ (φ − φ_∞)₊ G / r dz dr`.
pub fn gen_helicity(field: &ClebschField, params: &FieldParams) -> f64 {
    let grid = field.grid();
    let g = field.g();
    4.0 * PI
        * grid.integrate(|i, j| {
            if j == 0 {
                0.0
            } else {
                excess(field, params, i, j) * g[[i, j]] / grid.r(j)
            }
        })
}

/// `∫ (φ − φ_∞)₊² dx = 2π ∬ (φ − φ_∞)₊² r dz dr`.
pub fn mean_square_potential(field: &ClebschField, params: &FieldParams) -> f64 {
    let grid = field.grid();
    2.0 * PI * grid.integrate(|i, j| excess(field, params, i, j).powi(2) * grid.r(j))
}

/// `∫ (φ − φ_∞)₊² / r² dx = 2π ∬ (φ − φ_∞)₊² / r dz dr`.
pub fn weighted_mean_square_potential(field: &ClebschField, params: &FieldParams) -> f64 {
    weighted_excess_sq(field.phi(), field.grid(), params)
}

pub(crate) fn weighted_excess_sq(phi: &Array2<f64>, grid: &HalfPlaneGrid, params: &FieldParams) -> f64 {
    2.0 * PI
        * grid.integrate(|i, j| {
            if j == 0 {
                0.0
            } else {
                (phi[[i, j]] - params.phi_inf(grid.r(j))).max(0.0).powi(2) / grid.r(j)
            }
        })
}

/// Lebesgue measure in ℝ³ of `{φ > φ_∞}`.
pub fn positive_volume(field: &ClebschField, params: &FieldParams) -> f64 {
    let grid = field.grid();
    2.0 * PI
        * grid.integrate(|i, j| {
            if excess(field, params, i, j) > 0.0 {
                grid.r(j)
            } else {
                0.0
            }
        })
}

/// `(∬ a² / r dz dr)^{1/2}`.
pub fn l2_norm(a: &Array2<f64>, grid: &HalfPlaneGrid) -> f64 {
    grid.integrate(|i, j| if j == 0 { 0.0 } else { a[[i, j]].powi(2) / grid.r(j) })
        .sqrt()
}

/// `(∬ |a|^p r^{-q} dz dr)^{1/p}` with the axis row dropped.
pub fn weighted_l2_norm(a: &Array2<f64>, grid: &HalfPlaneGrid, p: f64, q: f64) -> f64 {
    grid.integrate(|i, j| {
        if j == 0 {
            0.0
        } else {
            a[[i, j]].abs().powf(p) * grid.r(j).powf(-q)
        }
    })
    .powf(1.0 / p)
}

/// Edge-based weighted Dirichlet energy `∬ |∇a|²/r` of the zero extension of
/// `a` beyond the z-ends: squared differences along each grid edge, z-edges
/// weighted by the row radius, r-edges by the midpoint radius. Row-wise
/// symmetric decreasing rearrangement of a nonnegative `a` never increases it.
pub fn dirichlet_energy(a: &Array2<f64>, grid: &HalfPlaneGrid) -> f64 {
    let (nz, nr) = grid.shape();
    let (hz, hr) = (grid.hz(), grid.hr());
    let mut total = 0.0;
    for j in 1..nr {
        let wz = grid.wr(j) / (hz * grid.r(j));
        let mut row = a[[0, j]].powi(2) + a[[nz - 1, j]].powi(2);
        for i in 0..nz - 1 {
            row += (a[[i + 1, j]] - a[[i, j]]).powi(2);
        }
        total += wz * row;
    }
    for j in 0..nr - 1 {
        let wr = hz / (hr * 0.5 * (grid.r(j) + grid.r(j + 1)));
        let mut row = 0.0;
        for i in 0..nz {
            row += (a[[i, j + 1]] - a[[i, j]]).powi(2);
        }
        total += wr * row;
    }
    total
}

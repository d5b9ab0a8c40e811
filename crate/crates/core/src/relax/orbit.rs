use ndarray::Array2;

use crate::clebsch::{l2_norm, ClebschField};
use crate::error::{invalid, Result};
use crate::fields::FieldParams;

/// Outcome of aligning two fields along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitComparison {
    /// Shift applied to the reference, in cells (positive moves it to larger z).
    pub shift_cells: f64,
    /// Same shift in length units.
    pub shift: f64,
    /// `‖(φ_a − φ_∞) − T(φ_b − φ_∞)‖ / ‖φ_b − φ_∞‖` in `L²(r⁻¹)`: distance
    /// of the total flux functions.
    pub distance: f64,
    /// `‖φ_a − T φ_b‖ / ‖φ_b‖`: the same numerator against the perturbation
    /// flux alone, which is dominated by the truncated dipole tail.
    pub perturbation_distance: f64,
}

/// `∫ (φ − φ_∞)₊ dr` per z-node.
fn profile(field: &ClebschField, params: &FieldParams) -> Vec<f64> {
    let g = field.grid();
    (0..g.nz())
        .map(|i| {
            (0..g.nr())
                .map(|j| g.wr(j) * (field.phi()[[i, j]] - params.phi_inf(g.r(j))).max(0.0))
                .sum()
        })
        .collect()
}

/// Shift (in cells) that best maps `b` onto `a`: argmax of the discrete
/// cross-correlation of the positive-part profiles, refined by a parabola
/// through the peak and its neighbours.
pub fn align_shift(a: &ClebschField, pa: &FieldParams, b: &ClebschField, pb: &FieldParams) -> f64 {
    let (pa, pb) = (profile(a, pa), profile(b, pb));
    let n = pa.len() as isize;
    let corr = |k: isize| -> f64 {
        (0..n)
            .filter(|&i| i - k >= 0 && i - k < n)
            .map(|i| pa[i as usize] * pb[(i - k) as usize])
            .sum()
    };
    let mut best = (0isize, f64::NEG_INFINITY);
    for k in -(n - 1)..n {
        let c = corr(k);
        // ties resolve towards the smallest |k|
        if c > best.1 || (c == best.1 && k.abs() < best.0.abs()) {
            best = (k, c);
        }
    }
    if best.1 <= 0.0 {
        return 0.0;
    }
    let k = best.0;
    let (cm, c0, cp) = (corr(k - 1), best.1, corr(k + 1));
    let denom = cm - 2.0 * c0 + cp;
    let delta = if denom < 0.0 { 0.5 * (cm - cp) / denom } else { 0.0 };
    let delta = if delta.abs() < 1e-9 { 0.0 } else { delta.clamp(-0.5, 0.5) };
    k as f64 + delta
}

/// Rows of `a` moved by `s` cells towards larger z, linear interpolation
/// between rows, zero outside the grid.
pub fn shift_z_fractional(a: &Array2<f64>, s: f64) -> Array2<f64> {
    let (nz, nr) = a.dim();
    let mut out = Array2::zeros((nz, nr));
    for i in 0..nz {
        let x = i as f64 - s;
        let i0 = x.floor();
        let t = x - i0;
        let i0 = i0 as isize;
        for (idx, w) in [(i0, 1.0 - t), (i0 + 1, t)] {
            if w == 0.0 || idx < 0 || idx >= nz as isize {
                continue;
            }
            for j in 0..nr {
                out[[i, j]] += w * a[[idx as usize, j]];
            }
        }
    }
    out
}

/// Aligns `reference` onto `candidate` and returns the relative distance of
/// the total flux functions `φ − φ_∞`. Only the perturbation `φ` is shifted,
/// so `φ_∞` cancels in the numerator.
pub fn orbit_distance(
    candidate: &ClebschField,
    pc: &FieldParams,
    reference: &ClebschField,
    pr: &FieldParams,
) -> Result<OrbitComparison> {
    if candidate.grid() != reference.grid() {
        return Err(invalid("orbit comparison needs fields on the same grid"));
    }
    let grid = candidate.grid();
    let s = align_shift(candidate, pc, reference, pr);
    let shifted = shift_z_fractional(reference.phi(), s);
    let diff = l2_norm(&(candidate.phi() - &shifted), grid);
    let total = grid.sample(|_, r| -pr.phi_inf(r)) + reference.phi();
    let ratio = |norm: f64| {
        if norm > 0.0 {
            diff / norm
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    };
    Ok(OrbitComparison {
        shift_cells: s,
        shift: s * grid.hz(),
        distance: ratio(l2_norm(&total, grid)),
        perturbation_distance: ratio(l2_norm(reference.phi(), grid)),
    })
}

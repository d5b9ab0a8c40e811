//! Clebsch potentials `(φ, G)` of axisymmetric solenoidal fields
//! `b = ∇×(φ∇θ) + G∇θ` sampled on a truncated half-plane grid.

mod dump;
mod functionals;
mod green;
pub mod inequalities;
mod lift;

pub use dump::{read_dump, read_dump_str, write_dump, write_dump_string};
pub(crate) use functionals::weighted_excess_sq;
pub use functionals::{
    dirichlet_energy, energy, functionals, gen_helicity, l2_norm, mean_square_potential,
    positive_volume, weighted_l2_norm, weighted_mean_square_potential, Functionals,
};
pub use green::{green_f, vector_potential_eta};
pub use lift::{lift_to_5d_norms, IsometryNorms};

use ndarray::Array2;

use crate::error::{invalid, Error, Result};

/// Uniform node grid on `[z_min, z_max] × [0, r_max]`; row `j = 0` is the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlaneGrid {
    z_min: f64,
    z_max: f64,
    r_max: f64,
    nz: usize,
    nr: usize,
}

impl HalfPlaneGrid {
    pub fn new(z_min: f64, z_max: f64, r_max: f64, nz: usize, nr: usize) -> Result<Self> {
        if nz < 4 || nr < 4 {
            return Err(invalid(format!(
                "grid needs at least 4 nodes per direction, got {nz} x {nr}"
            )));
        }
        if !(z_min.is_finite() && z_max.is_finite() && z_max > z_min) {
            return Err(invalid(format!("bad z extent [{z_min}, {z_max}]")));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(invalid(format!("r_max must be positive, got {r_max}")));
        }
        Ok(Self {
            z_min,
            z_max,
            r_max,
            nz,
            nr,
        })
    }

    /// Box `[-half_width, half_width] × [0, r_max]`.
    pub fn centered(half_width: f64, r_max: f64, nz: usize, nr: usize) -> Result<Self> {
        Self::new(-half_width, half_width, r_max, nz, nr)
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }
    pub fn z_max(&self) -> f64 {
        self.z_max
    }
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn nz(&self) -> usize {
        self.nz
    }
    pub fn nr(&self) -> usize {
        self.nr
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.nz, self.nr)
    }
    pub fn hz(&self) -> f64 {
        (self.z_max - self.z_min) / (self.nz - 1) as f64
    }
    pub fn hr(&self) -> f64 {
        self.r_max / (self.nr - 1) as f64
    }
    #[inline]
    pub fn z(&self, i: usize) -> f64 {
        self.z_min + i as f64 * self.hz()
    }
    #[inline]
    pub fn r(&self, j: usize) -> f64 {
        j as f64 * self.hr()
    }

    /// Trapezoid weight of node `i` along z.
    #[inline]
    pub fn wz(&self, i: usize) -> f64 {
        if i == 0 || i == self.nz - 1 {
            0.5 * self.hz()
        } else {
            self.hz()
        }
    }

    /// Trapezoid weight of node `j` along r.
    #[inline]
    pub fn wr(&self, j: usize) -> f64 {
        if j == 0 || j == self.nr - 1 {
            0.5 * self.hr()
        } else {
            self.hr()
        }
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nz - 1 || j == self.nr - 1
    }

    pub fn zeros(&self) -> Array2<f64> {
        Array2::zeros((self.nz, self.nr))
    }

    /// Samples `f(z, r)` at every node.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Array2<f64> {
        Array2::from_shape_fn((self.nz, self.nr), |(i, j)| f(self.z(i), self.r(j)))
    }

    /// Trapezoid sum `Σ w_i w_j f(i, j)` over all nodes, in row order.
    pub fn integrate<F: Fn(usize, usize) -> f64>(&self, f: F) -> f64 {
        let mut total = 0.0;
        for i in 0..self.nz {
            let mut row = 0.0;
            for j in 0..self.nr {
                row += self.wr(j) * f(i, j);
            }
            total += self.wz(i) * row;
        }
        total
    }

    /// Same grid with each direction refined by `factor` (node spacing / factor).
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            nz: (self.nz - 1) * factor + 1,
            nr: (self.nr - 1) * factor + 1,
            ..*self
        }
    }

    fn check_shape(&self, a: &Array2<f64>, what: &str) -> Result<()> {
        if a.dim() != (self.nz, self.nr) {
            return Err(invalid(format!(
                "{what} has shape {:?}, grid is {} x {}",
                a.dim(),
                self.nz,
                self.nr
            )));
        }
        Ok(())
    }
}

/// Clebsch potentials on a grid.
///
/// The axis row always carries `φ = G = 0`. Fields built with
/// [`ClebschField::new`] additionally vanish on the outer box boundary;
/// [`ClebschField::from_samples`] keeps whatever boundary values were sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct ClebschField {
    grid: HalfPlaneGrid,
    phi: Array2<f64>,
    g: Array2<f64>,
}

impl ClebschField {
    /// Strict constructor: finite values, zero trace on the axis and on the box.
    pub fn new(grid: HalfPlaneGrid, phi: Array2<f64>, g: Array2<f64>) -> Result<Self> {
        let f = Self::from_samples(grid, phi, g)?;
        if !f.is_truncated() {
            return Err(invalid("phi must vanish on the outer box boundary"));
        }
        Ok(f)
    }

    /// Relaxed constructor: finite values and zero trace on the axis only.
    pub fn from_samples(grid: HalfPlaneGrid, phi: Array2<f64>, g: Array2<f64>) -> Result<Self> {
        grid.check_shape(&phi, "phi")?;
        grid.check_shape(&g, "G")?;
        if phi.iter().chain(g.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("Clebsch potentials must be finite"));
        }
        for i in 0..grid.nz {
            if phi[[i, 0]] != 0.0 || g[[i, 0]] != 0.0 {
                return Err(invalid(format!(
                    "potentials must vanish on the axis (node {i})"
                )));
            }
        }
        Ok(Self { grid, phi, g })
    }

    /// Zero potentials.
    pub fn zero(grid: HalfPlaneGrid) -> Self {
        Self {
            grid,
            phi: grid.zeros(),
            g: grid.zeros(),
        }
    }

    /// Samples `φ(z, r)` and `G(z, r)`; the axis row is set to zero.
    pub fn sample<P, Q>(grid: HalfPlaneGrid, phi: P, g: Q) -> Result<Self>
    where
        P: Fn(f64, f64) -> f64,
        Q: Fn(f64, f64) -> f64,
    {
        let mut p = grid.sample(phi);
        let mut q = grid.sample(g);
        p.column_mut(0).fill(0.0);
        q.column_mut(0).fill(0.0);
        Self::from_samples(grid, p, q)
    }

    /// `φ = Φ_C + W r²/2`, `G = G_C` from the explicit solution (no truncation).
    pub fn chandrasekhar(grid: HalfPlaneGrid, params: &crate::fields::FieldParams) -> Result<Self> {
        let c = crate::fields::Chandrasekhar::new(*params);
        Self::sample(
            grid,
            |z, r| c.phi(z, r) + 0.5 * params.w * r * r,
            |z, r| c.swirl(z, r),
        )
    }

    pub fn grid(&self) -> &HalfPlaneGrid {
        &self.grid
    }
    pub fn phi(&self) -> &Array2<f64> {
        &self.phi
    }
    pub fn g(&self) -> &Array2<f64> {
        &self.g
    }
    pub fn into_parts(self) -> (HalfPlaneGrid, Array2<f64>, Array2<f64>) {
        (self.grid, self.phi, self.g)
    }

    /// True when `φ` vanishes on the whole outer boundary.
    pub fn is_truncated(&self) -> bool {
        let (nz, nr) = self.grid.shape();
        (0..nz).all(|i| self.phi[[i, nr - 1]] == 0.0)
            && (0..nr).all(|j| self.phi[[0, j]] == 0.0 && self.phi[[nz - 1, j]] == 0.0)
    }

    /// Same field with `G` negated.
    pub fn with_negated_swirl(&self) -> Self {
        Self {
            grid: self.grid,
            phi: self.phi.clone(),
            g: -&self.g,
        }
    }

    /// Both potentials multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            phi: &self.phi * s,
            g: &self.g * s,
        }
    }

    /// Shifts both potentials by `k` nodes along z (positive `k` moves features
    /// towards larger z), filling vacated nodes with zero.
    pub fn shifted_z(&self, k: isize) -> Self {
        Self {
            grid: self.grid,
            phi: shift_rows(&self.phi, k),
            g: shift_rows(&self.g, k),
        }
    }

    /// `self − other` on the same grid.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(invalid("fields live on different grids"));
        }
        Ok(Self {
            grid: self.grid,
            phi: &self.phi - &other.phi,
            g: &self.g - &other.g,
        })
    }
}

pub(crate) fn shift_rows(a: &Array2<f64>, k: isize) -> Array2<f64> {
    let (nz, nr) = a.dim();
    let mut out = Array2::zeros((nz, nr));
    for i in 0..nz {
        let src = i as isize - k;
        if src >= 0 && (src as usize) < nz {
            for j in 0..nr {
                out[[i, j]] = a[[src as usize, j]];
            }
        }
    }
    out
}

/// Centred first derivative along z, second-order one-sided at the ends.
pub(crate) fn d_dz(a: &Array2<f64>, hz: f64) -> Array2<f64> {
    let (nz, nr) = a.dim();
    Array2::from_shape_fn((nz, nr), |(i, j)| {
        if i == 0 {
            (-3.0 * a[[0, j]] + 4.0 * a[[1, j]] - a[[2, j]]) / (2.0 * hz)
        } else if i == nz - 1 {
            (3.0 * a[[i, j]] - 4.0 * a[[i - 1, j]] + a[[i - 2, j]]) / (2.0 * hz)
        } else {
            (a[[i + 1, j]] - a[[i - 1, j]]) / (2.0 * hz)
        }
    })
}

/// Centred first derivative along r, second-order one-sided at the ends.
pub(crate) fn d_dr(a: &Array2<f64>, hr: f64) -> Array2<f64> {
    let (nz, nr) = a.dim();
    Array2::from_shape_fn((nz, nr), |(i, j)| {
        if j == 0 {
            (-3.0 * a[[i, 0]] + 4.0 * a[[i, 1]] - a[[i, 2]]) / (2.0 * hr)
        } else if j == nr - 1 {
            (3.0 * a[[i, j]] - 4.0 * a[[i, j - 1]] + a[[i, j - 2]]) / (2.0 * hr)
        } else {
            (a[[i, j + 1]] - a[[i, j - 1]]) / (2.0 * hr)
        }
    })
}

/// `((1/r)∂_r ψ, −(1/r)∂_z ψ)` for a flux-like function vanishing like r² on
/// the axis. Axis values: radial part 0, axial part `2 lim ψ/r²` from the even
/// fit `ψ/r² ≈ c₀ + c₂ r²` through the first two off-axis rows.
pub(crate) fn poloidal_components(psi: &Array2<f64>, grid: &HalfPlaneGrid) -> (Array2<f64>, Array2<f64>) {
    let (nz, nr) = grid.shape();
    let dr = d_dr(psi, grid.hr());
    let dz = d_dz(psi, grid.hz());
    let mut bz = Array2::zeros((nz, nr));
    let mut br = Array2::zeros((nz, nr));
    let (r1, r2) = (grid.r(1), grid.r(2));
    for i in 0..nz {
        let q1 = psi[[i, 1]] / (r1 * r1);
        let q2 = psi[[i, 2]] / (r2 * r2);
        bz[[i, 0]] = 2.0 * (4.0 * q1 - q2) / 3.0;
        for j in 1..nr {
            let r = grid.r(j);
            bz[[i, j]] = dr[[i, j]] / r;
            br[[i, j]] = -dz[[i, j]] / r;
        }
    }
    (bz, br)
}

/// `L a = ∂_z² a + ∂_r² a − (1/r)∂_r a` at interior nodes, zero elsewhere.
pub fn apply_gs_operator(a: &Array2<f64>, grid: &HalfPlaneGrid) -> Array2<f64> {
    let (nz, nr) = grid.shape();
    let (hz, hr) = (grid.hz(), grid.hr());
    let mut out = Array2::zeros((nz, nr));
    for i in 1..nz - 1 {
        for j in 1..nr - 1 {
            let r = grid.r(j);
            out[[i, j]] = (a[[i + 1, j]] - 2.0 * a[[i, j]] + a[[i - 1, j]]) / (hz * hz)
                + (a[[i, j + 1]] - 2.0 * a[[i, j]] + a[[i, j - 1]]) / (hr * hr)
                - (a[[i, j + 1]] - a[[i, j - 1]]) / (2.0 * hr * r);
        }
    }
    out
}

/// Vector components `(b_z, b_r, b_θ)` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Components {
    pub bz: Array2<f64>,
    pub br: Array2<f64>,
    pub btheta: Array2<f64>,
}

/// `b = ∇×(φ∇θ) + G∇θ` at every node.
pub fn field_components(field: &ClebschField) -> Components {
    let grid = field.grid;
    let (bz, br) = poloidal_components(&field.phi, &grid);
    let btheta = Array2::from_shape_fn(grid.shape(), |(i, j)| {
        if j == 0 {
            0.0
        } else {
            field.g[[i, j]] / grid.r(j)
        }
    });
    Components { bz, br, btheta }
}

/// Weighted-L² norms of the divergence `(1/r)∂_r(r b_r) + ∂_z b_z` and of its
/// two terms, over interior nodes with the volume measure.
pub fn divergence_norms(bz: &Array2<f64>, br: &Array2<f64>, grid: &HalfPlaneGrid) -> (f64, f64) {
    let (nz, nr) = grid.shape();
    let (hz, hr) = (grid.hz(), grid.hr());
    let mut div2 = 0.0;
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    for i in 1..nz - 1 {
        for j in 1..nr - 1 {
            let r = grid.r(j);
            let radial = (grid.r(j + 1) * br[[i, j + 1]] - grid.r(j - 1) * br[[i, j - 1]]) / (2.0 * hr * r);
            let axial = (bz[[i + 1, j]] - bz[[i - 1, j]]) / (2.0 * hz);
            let d = radial + axial;
            div2 += d * d * r;
            t1 += radial * radial * r;
            t2 += axial * axial * r;
        }
    }
    let scale = 2.0 * std::f64::consts::PI * hz * hr;
    ((div2 * scale).sqrt(), (t1 * scale).sqrt() + (t2 * scale).sqrt())
}

/// Default bound on the relative divergence accepted by [`clebsch_from_components`].
pub const DIVERGENCE_TOL: f64 = 1e-2;

/// Recovers potentials from vector components: `G = r b_θ` and
/// `φ(z, r) = ∫_0^r r' b_z(z, r') dr'` (cumulative trapezoid per column).
///
/// The relative divergence `‖div b‖ / (‖radial term‖ + ‖axial term‖)` must not
/// exceed `div_tol`.
pub fn clebsch_from_components(
    bz: &Array2<f64>,
    br: &Array2<f64>,
    btheta: &Array2<f64>,
    grid: &HalfPlaneGrid,
    div_tol: f64,
) -> Result<ClebschField> {
    grid.check_shape(bz, "b_z")?;
    grid.check_shape(br, "b_r")?;
    grid.check_shape(btheta, "b_theta")?;
    let (div, scale) = divergence_norms(bz, br, grid);
    let rel = if scale > 0.0 { div / scale } else { 0.0 };
    if rel > div_tol {
        return Err(Error::Inconsistent {
            norm: "relative weighted-L2 divergence",
            value: rel,
            tol: div_tol,
        });
    }
    let (nz, nr) = grid.shape();
    let hr = grid.hr();
    let mut phi = Array2::zeros((nz, nr));
    let mut g = Array2::zeros((nz, nr));
    for i in 0..nz {
        let mut acc = 0.0;
        for j in 1..nr {
            let (ra, rb) = (grid.r(j - 1), grid.r(j));
            acc += 0.5 * hr * (ra * bz[[i, j - 1]] + rb * bz[[i, j]]);
            phi[[i, j]] = acc;
            g[[i, j]] = rb * btheta[[i, j]];
        }
    }
    ClebschField::from_samples(*grid, phi, g)
}

//! Analytic force-free fields: the Chandrasekhar nonlinear solution with a
//! ball-supported current in a uniform background, its helicity constant, and
//! the Lundquist linear field. Also a grid residual for `∇×U = fU`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::clebsch::HalfPlaneGrid;
use crate::error::{invalid, Result};
use crate::quad::adaptive_simpson;
use crate::specfun::{bessel_j, c32, j32_scaled, j52_at_c32, j52_scaled, BesselOrder};

/// Far-field strength `W`, current strength `lambda` and gauge `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub w: f64,
    pub lambda: f64,
    pub gamma: f64,
}

impl FieldParams {
    pub fn new(w: f64, lambda: f64, gamma: f64) -> Result<Self> {
        let p = Self { w, lambda, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w.is_finite() && self.w > 0.0) {
            return Err(invalid(format!("W must be positive, got {}", self.w)));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(invalid(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(invalid(format!(
                "gamma must be non-negative, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Radius of the current-carrying ball, `R = c_{3/2} λ^{-1/2}`.
    pub fn radius(&self) -> f64 {
        c32() / self.lambda.sqrt()
    }

    /// Far-field flux function `φ_∞ = W r²/2 + γ`.
    #[inline]
    pub fn phi_inf(&self, r: f64) -> f64 {
        0.5 * self.w * r * r + self.gamma
    }

    /// Same parameters with another far-field strength.
    pub fn with_w(&self, w: f64) -> Self {
        Self { w, ..*self }
    }
}

/// Components `(v_z, v_r, v_θ)` of an axisymmetric vector at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CylindricalVector {
    pub z: f64,
    pub r: f64,
    pub theta: f64,
}

impl CylindricalVector {
    pub fn new(z: f64, r: f64, theta: f64) -> Self {
        Self { z, r, theta }
    }

    pub fn norm(&self) -> f64 {
        (self.z * self.z + self.r * self.r + self.theta * self.theta).sqrt()
    }
}

/// The explicit Chandrasekhar solution for fixed parameters.
///
/// Inside the ball `ρ < R` the flux is `A r² g(κρ)` with `g(x) = J_{3/2}(x)/x^{3/2}`,
/// `κ = λ^{1/2}` and `A = (3/2) W c^{1/2} / J_{5/2}(c)`; outside it is the
/// potential flow `-(W/2) r² (1 - R³/ρ³)`.
#[derive(Debug, Clone, Copy)]
pub struct Chandrasekhar {
    params: FieldParams,
    kappa: f64,
    amp: f64,
    radius: f64,
}

impl Chandrasekhar {
    pub fn new(params: FieldParams) -> Self {
        let c = c32();
        Self {
            params,
            kappa: params.lambda.sqrt(),
            amp: 1.5 * params.w * c.sqrt() / j52_at_c32(),
            radius: params.radius(),
        }
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn phi(&self, z: f64, r: f64) -> f64 {
        let rho = z.hypot(r);
        let w = self.params.w;
        if rho < self.radius {
            self.amp * r * r * j32_scaled(self.kappa * rho)
        } else {
            let q = self.radius / rho;
            -0.5 * w * r * r * (1.0 - q * q * q)
        }
    }

    pub fn swirl(&self, z: f64, r: f64) -> f64 {
        self.kappa * self.phi(z, r).max(0.0)
    }

    /// Force-free factor `f_C = λ^{1/2} 1_{(0,∞)}(Φ_C)`.
    pub fn factor(&self, z: f64, r: f64) -> f64 {
        if self.phi(z, r) > 0.0 {
            self.kappa
        } else {
            0.0
        }
    }

    /// `U_C = ∇×(Φ_C∇θ) + G_C∇θ` with analytic derivatives.
    pub fn field(&self, z: f64, r: f64) -> CylindricalVector {
        let rho = z.hypot(r);
        let w = self.params.w;
        if rho < self.radius {
            let k = self.kappa;
            let x = k * rho;
            let g = j32_scaled(x);
            // d/dx g = -x J_{5/2}(x)/x^{5/2}
            let q = j52_scaled(x);
            let uz = 2.0 * self.amp * g - self.amp * k * k * r * r * q;
            let ur = self.amp * k * k * r * z * q;
            let ut = k * self.amp * r * g;
            CylindricalVector::new(uz, ur, ut)
        } else {
            let r3 = self.radius.powi(3);
            let rho2 = rho * rho;
            let rho5 = rho2 * rho2 * rho;
            let uz = -w + 0.5 * w * r3 * (2.0 / (rho2 * rho) - 3.0 * r * r / rho5);
            let ur = 1.5 * w * r3 * r * z / rho5;
            CylindricalVector::new(uz, ur, 0.0)
        }
    }
}

/// Flux function `Φ_C(z, r)` of the explicit solution.
pub fn phi_c(z: f64, r: f64, params: &FieldParams) -> f64 {
    Chandrasekhar::new(*params).phi(z, r)
}

/// Swirl potential `G_C = λ^{1/2} Φ_{C,+}`.
pub fn g_c(z: f64, r: f64, params: &FieldParams) -> f64 {
    Chandrasekhar::new(*params).swirl(z, r)
}

/// Field `U_C` at `(z, r)`.
pub fn u_c(z: f64, r: f64, params: &FieldParams) -> CylindricalVector {
    Chandrasekhar::new(*params).field(z, r)
}

/// Helicity constant `h_C = (W/λ)² 12π c / J_{5/2}(c)² ∫_0^c ρ J_{3/2}(ρ)² dρ`.
pub fn helicity_constant_hc(params: &FieldParams) -> f64 {
    let c = c32();
    let j52 = j52_at_c32();
    let integral = adaptive_simpson(
        |rho| {
            let j = bessel_j(BesselOrder::ThreeHalves, rho).unwrap_or(0.0);
            rho * j * j
        },
        0.0,
        c,
        1e-13,
    );
    let s = params.w / params.lambda;
    s * s * 12.0 * PI * c / (j52 * j52) * integral
}

/// Lundquist field `J_0(fr) e_z + J_1(fr) e_θ`.
pub fn lundquist_field(f: f64, r: f64) -> CylindricalVector {
    let x = f * r;
    let j0 = bessel_j(BesselOrder::Zero, x).unwrap_or(f64::NAN);
    let j1 = bessel_j(BesselOrder::One, x).unwrap_or(f64::NAN);
    CylindricalVector::new(j0, 0.0, j1)
}

/// Nodes whose `|distance(z, r)| < half_width` are left out of a residual.
pub struct Band {
    distance: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    half_width: f64,
}

impl Band {
    pub fn new<D>(distance: D, half_width: f64) -> Self
    where
        D: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            distance: Box::new(distance),
            half_width,
        }
    }

    /// Band around the sphere `ρ = radius` centred on the origin.
    pub fn sphere(radius: f64, half_width: f64) -> Self {
        Self::new(move |z, r| z.hypot(r) - radius, half_width)
    }

    fn excludes(&self, z: f64, r: f64) -> bool {
        (self.distance)(z, r).abs() < self.half_width
    }
}

/// Weighted-L² (volume measure) norm of the centred-difference residual
/// `∇×U − fU` over interior nodes.
pub fn forcefree_residual<F, S>(
    field: F,
    factor: S,
    grid: &HalfPlaneGrid,
    band: Option<&Band>,
) -> Result<f64>
where
    F: Fn(f64, f64) -> CylindricalVector + Sync,
    S: Fn(f64, f64) -> f64 + Sync,
{
    if grid.nz() < 4 || grid.nr() < 4 {
        return Err(invalid("forcefree_residual needs at least 4 nodes per direction"));
    }
    let (nz, nr) = (grid.nz(), grid.nr());
    let samples: Vec<Vec<CylindricalVector>> = (0..nz)
        .into_par_iter()
        .map(|i| (0..nr).map(|j| field(grid.z(i), grid.r(j))).collect())
        .collect();
    let (hz, hr) = (grid.hz(), grid.hr());
    let rows: Vec<f64> = (1..nz - 1)
        .into_par_iter()
        .map(|i| {
            let z = grid.z(i);
            let mut acc = 0.0;
            for j in 1..nr - 1 {
                let r = grid.r(j);
                if band.is_some_and(|b| b.excludes(z, r)) {
                    continue;
                }
                let u = samples[i][j];
                let (up, um) = (samples[i + 1][j], samples[i - 1][j]);
                let (vp, vm) = (samples[i][j + 1], samples[i][j - 1]);
                let curl_z = (grid.r(j + 1) * vp.theta - grid.r(j - 1) * vm.theta) / (2.0 * hr * r);
                let curl_r = -(up.theta - um.theta) / (2.0 * hz);
                let curl_t = (up.r - um.r) / (2.0 * hz) - (vp.z - vm.z) / (2.0 * hr);
                let f = factor(z, r);
                let rz = curl_z - f * u.z;
                let rr = curl_r - f * u.r;
                let rt = curl_t - f * u.theta;
                acc += (rz * rz + rr * rr + rt * rt) * r;
            }
            acc
        })
        .collect();
    let total: f64 = rows.iter().sum();
    Ok((2.0 * PI * total * hz * hr).sqrt())
}

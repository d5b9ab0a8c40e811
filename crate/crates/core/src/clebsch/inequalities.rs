//! Seeded random Clebsch pairs and the empirical constants of the functional
//! inequalities they satisfy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::functionals::grad_sq_over_r;
use super::{energy, gen_helicity, mean_square_potential, positive_volume, weighted_l2_norm};
use super::{ClebschField, HalfPlaneGrid};
use crate::error::Result;
use crate::fields::FieldParams;

/// `A r² P(z, r) exp(−a((z − z₀)² + r²))` with a quadratic `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub amplitude: f64,
    pub coeffs: [f64; 6],
    pub width: f64,
    pub z0: f64,
}

impl Profile {
    pub fn random<R: Rng>(rng: &mut R, amplitude: f64) -> Self {
        let mut coeffs = [0.0; 6];
        coeffs[0] = rng.random_range(0.5..1.5);
        for c in coeffs.iter_mut().skip(1) {
            *c = rng.random_range(-0.5..0.5);
        }
        Self {
            amplitude,
            coeffs,
            width: rng.random_range(1.0..2.0),
            z0: rng.random_range(-1.0..1.0),
        }
    }

    pub fn eval(&self, z: f64, r: f64) -> f64 {
        let c = &self.coeffs;
        let dz = z - self.z0;
        let p = c[0] + c[1] * dz + c[2] * r + c[3] * dz * dz + c[4] * dz * r + c[5] * r * r;
        self.amplitude * r * r * p * (-self.width * (dz * dz + r * r)).exp()
    }
}

/// A random pair `(φ, G)` described independently of any grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomPair {
    pub phi: Profile,
    pub g: Profile,
}

impl RandomPair {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let a = rng.random_range(2.0..20.0);
        let b = rng.random_range(-3.0..3.0);
        Self {
            phi: Profile::random(rng, a),
            g: Profile::random(rng, b),
        }
    }

    /// Samples the pair and zeroes the box boundary.
    pub fn sample(&self, grid: HalfPlaneGrid) -> Result<ClebschField> {
        self.sample_mixed(grid, None)
    }

    /// Samples `self + t·other`.
    pub fn sample_mixed(&self, grid: HalfPlaneGrid, other: Option<(&RandomPair, f64)>) -> Result<ClebschField> {
        let eval = |p: &Profile, q: Option<(&Profile, f64)>, z: f64, r: f64| {
            p.eval(z, r) + q.map_or(0.0, |(q, t)| t * q.eval(z, r))
        };
        let mut phi = grid.sample(|z, r| eval(&self.phi, other.map(|(o, t)| (&o.phi, t)), z, r));
        let mut g = grid.sample(|z, r| eval(&self.g, other.map(|(o, t)| (&o.g, t)), z, r));
        let (nz, nr) = grid.shape();
        for a in [&mut phi, &mut g] {
            for i in 0..nz {
                a[[i, 0]] = 0.0;
                a[[i, nr - 1]] = 0.0;
            }
            for j in 0..nr {
                a[[0, j]] = 0.0;
                a[[nz - 1, j]] = 0.0;
            }
        }
        ClebschField::new(grid, phi, g)
    }
}

/// Seeded corpus of `n` pairs.
pub fn random_corpus(seed: u64, n: usize) -> Vec<RandomPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| RandomPair::random(&mut rng)).collect()
}

/// Maxima of the inequality ratios over a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InequalityRatios {
    /// `‖φ‖_{L⁴(r⁻⁴)} / ‖∇φ‖_{L²(r⁻¹)}`.
    pub sobolev: f64,
    /// `|{φ > φ_∞}| / ‖∇φ‖²_{L²(r⁻¹)}`.
    pub measure: f64,
    /// `|H| / ‖b‖^{8/3}`.
    pub helicity: f64,
    /// `M / ‖b‖^{14/3}`.
    pub mean_square: f64,
    /// `|H₁ − H₂| / (max ‖bᵢ‖^{5/3} · ‖b₁ − b₂‖)`.
    pub lipschitz: f64,
}

impl InequalityRatios {
    pub fn as_array(&self) -> [(&'static str, f64); 5] {
        [
            ("sobolev_p4", self.sobolev),
            ("measure", self.measure),
            ("helicity_arnold", self.helicity),
            ("mean_square_arnold", self.mean_square),
            ("helicity_lipschitz", self.lipschitz),
        ]
    }
}

/// Ratios over `corpus` sampled on `grid`, with `φ_∞ = r²` (W = 2, γ = 0).
/// Lipschitz pairs are `(b_k, b_k + t_k b_{k+1})` with seeded `t_k ∈ [0.01, 1]`.
pub fn inequality_ratios(corpus: &[RandomPair], grid: HalfPlaneGrid, seed: u64) -> Result<InequalityRatios> {
    let params = FieldParams::new(2.0, 1.0, 0.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = InequalityRatios::default();
    let bnorm = |f: &ClebschField| (2.0 * energy(f)).sqrt();
    for (k, pair) in corpus.iter().enumerate() {
        let f = pair.sample(grid)?;
        let grad = grad_sq_over_r(f.phi(), &grid);
        let b = bnorm(&f);
        if grad > 0.0 {
            out.sobolev = out.sobolev.max(weighted_l2_norm(f.phi(), &grid, 4.0, 4.0) / grad.sqrt());
            out.measure = out.measure.max(positive_volume(&f, &params) / grad);
        }
        let h1 = gen_helicity(&f, &params);
        if b > 0.0 {
            out.helicity = out.helicity.max(h1.abs() / b.powf(8.0 / 3.0));
            out.mean_square = out
                .mean_square
                .max(mean_square_potential(&f, &params) / b.powf(14.0 / 3.0));
        }
        let other = &corpus[(k + 1) % corpus.len()];
        let t = rng.random_range(0.01..1.0);
        let f2 = pair.sample_mixed(grid, Some((other, t)))?;
        let diff = bnorm(&f.difference(&f2)?);
        if diff > 0.0 {
            let h2 = gen_helicity(&f2, &params);
            let bmax = b.max(bnorm(&f2));
            out.lipschitz = out.lipschitz.max((h1 - h2).abs() / (bmax.powf(5.0 / 3.0) * diff));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        assert_eq!(random_corpus(7, 5), random_corpus(7, 5));
        assert_ne!(random_corpus(7, 5), random_corpus(8, 5));
    }

    #[test]
    fn samples_satisfy_invariants() {
        let grid = HalfPlaneGrid::centered(4.0, 4.0, 41, 21).unwrap();
        for p in random_corpus(1, 10) {
            let f = p.sample(grid).unwrap();
            assert!(f.is_truncated());
        }
    }

    #[test]
    fn ratios_finite_and_stable() {
        let corpus = random_corpus(42, 40);
        let coarse = inequality_ratios(&corpus, HalfPlaneGrid::centered(4.0, 4.0, 81, 41).unwrap(), 42).unwrap();
        let fine = inequality_ratios(&corpus, HalfPlaneGrid::centered(4.0, 4.0, 161, 81).unwrap(), 42).unwrap();
        for ((name, a), (_, b)) in coarse.as_array().into_iter().zip(fine.as_array()) {
            assert!(a.is_finite() && a > 0.0, "{name}: {a}");
            assert!(b / a < 2.0 && a / b < 2.0, "{name}: {a} vs {b}");
        }
    }
}

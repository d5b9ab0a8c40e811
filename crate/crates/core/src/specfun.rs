//! Bessel functions of the first kind for the handful of orders the explicit
//! solutions need, and their first positive zeros.
//!
//! Half-integer orders use the elementary closed forms. Integer orders use the
//! ascending series for small arguments, Miller's backward recurrence in the
//! transition region and the Hankel asymptotic expansion for large arguments.

use std::f64::consts::{FRAC_2_PI, PI};
use std::sync::OnceLock;

use crate::error::{invalid, Result};

/// Bessel orders representable by this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BesselOrder {
    Zero,
    One,
    Half,
    ThreeHalves,
    FiveHalves,
}

impl BesselOrder {
    /// Maps a numeric order onto the supported set.
    pub fn from_value(nu: f64) -> Result<Self> {
        match nu {
            v if v == 0.0 => Ok(Self::Zero),
            v if v == 1.0 => Ok(Self::One),
            v if v == 0.5 => Ok(Self::Half),
            v if v == 1.5 => Ok(Self::ThreeHalves),
            v if v == 2.5 => Ok(Self::FiveHalves),
            _ => Err(invalid(format!("unsupported Bessel order {nu}"))),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::One => 1.0,
            Self::Half => 0.5,
            Self::ThreeHalves => 1.5,
            Self::FiveHalves => 2.5,
        }
    }

    fn is_half_integer(self) -> bool {
        matches!(self, Self::Half | Self::ThreeHalves | Self::FiveHalves)
    }
}

/// Below this argument the half-integer closed forms switch to a Taylor expansion.
const SMALL_X: f64 = 1e-4;

/// `J_order(x)`.
///
/// Half-integer orders require `x >= 0` (the value at 0 is the limit 0);
/// integer orders accept any finite `x`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(invalid(format!("non-finite Bessel argument {x}")));
    }
    if order.is_half_integer() {
        if x < 0.0 {
            return Err(invalid(format!(
                "half-integer Bessel order needs x >= 0, got {x}"
            )));
        }
        return Ok(half_integer(order, x));
    }
    Ok(match order {
        BesselOrder::Zero => j0(x),
        BesselOrder::One => j1(x),
        _ => unreachable!(),
    })
}

fn half_integer(order: BesselOrder, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x < SMALL_X {
        let nu = order.value();
        let y = 0.25 * x * x;
        let lead = (0.5 * x).powf(nu) / gamma_half_integer_plus_one(nu);
        return lead * (1.0 - y / (nu + 1.0) + y * y / (2.0 * (nu + 1.0) * (nu + 2.0)));
    }
    let pre = (FRAC_2_PI / x).sqrt();
    let (s, c) = x.sin_cos();
    match order {
        BesselOrder::Half => pre * s,
        BesselOrder::ThreeHalves => pre * (s / x - c),
        BesselOrder::FiveHalves => pre * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x),
        _ => unreachable!(),
    }
}

/// Γ(ν + 1) for ν ∈ {1/2, 3/2, 5/2}.
fn gamma_half_integer_plus_one(nu: f64) -> f64 {
    let mut g = PI.sqrt() * 0.5; // Γ(3/2)
    let mut k = 0.5;
    while k < nu {
        k += 1.0;
        g *= k;
    }
    g
}

/// `J_{3/2}(x) / x^{3/2}`, smooth and even in `x`.
pub fn j32_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        scaled_series(1.5, x)
    } else {
        half_integer(BesselOrder::ThreeHalves, x) / x.powf(1.5)
    }
}

/// `J_{5/2}(x) / x^{5/2}`, smooth and even in `x`.
pub fn j52_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        scaled_series(2.5, x)
    } else {
        half_integer(BesselOrder::FiveHalves, x) / x.powf(2.5)
    }
}

/// Ascending series of `J_ν(x) / x^ν` for half-integer ν.
fn scaled_series(nu: f64, x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0 / (2f64.powf(nu) * gamma_half_integer_plus_one(nu));
    let mut sum = term;
    for m in 1..20 {
        let mf = m as f64;
        term *= -y / (mf * (mf + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 8.0 {
        integer_series(0, ax)
    } else if ax < 25.0 {
        miller(ax).0
    } else {
        hankel(0, ax)
    }
}

fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 8.0 {
        integer_series(1, ax)
    } else if ax < 25.0 {
        miller(ax).1
    } else {
        hankel(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn integer_series(n: u32, x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = (0.5 * x).powi(n as i32);
    let mut sum = term;
    for m in 1..60 {
        let mf = m as f64;
        term *= -y / (mf * (mf + n as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence normalised by `J_0 + 2 Σ J_{2k} = 1`.
fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x as usize + 40) / 2);
    let mut jp1 = 0.0;
    let mut j = 1e-30;
    let mut norm = 0.0;
    let mut out0 = 0.0;
    let mut out1 = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            out1 *= 1e-250;
        }
        // j now holds J_{k-1}
        match k - 1 {
            0 => out0 = j,
            1 => out1 = j,
            m if m % 2 == 0 => norm += 2.0 * j,
            _ => {}
        }
    }
    norm += out0;
    (out0 / norm, out1 / norm)
}

/// Hankel asymptotic expansion for large `x`.
fn hankel(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n * n) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut k = 1;
    loop {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if k % 2 == 1 {
            q += if (k / 2) % 2 == 0 { term } else { -term };
        } else {
            p += if (k / 2) % 2 == 0 { term } else { -term };
        }
        if term.abs() < 1e-17 || k > 40 {
            break;
        }
        k += 1;
    }
    let chi = x - (0.5 * n as f64 + 0.25) * PI;
    (FRAC_2_PI / x).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Default tolerance on the bracket width for [`first_positive_root`].
pub const ROOT_TOL: f64 = 1e-14;

/// Smallest positive zero of `J_order` for order 1 or 3/2.
pub fn first_positive_root(order: BesselOrder) -> Result<f64> {
    first_positive_root_with_tol(order, ROOT_TOL)
}

/// Same as [`first_positive_root`] with an explicit bracket tolerance.
pub fn first_positive_root_with_tol(order: BesselOrder, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid("root tolerance must be positive"));
    }
    let f = |x: f64| bessel_j(order, x).expect("finite positive argument");
    let (mut lo, mut hi) = match order {
        BesselOrder::ThreeHalves => (4.0, 5.0),
        BesselOrder::One => {
            let mut a = 0.25;
            loop {
                let b = a + 0.25;
                if f(a) * f(b) <= 0.0 {
                    break (a, b);
                }
                a = b;
            }
        }
        _ => {
            return Err(invalid(format!(
                "first_positive_root supports orders 1 and 3/2, got {}",
                order.value()
            )))
        }
    };
    let mut flo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // Secant polish inside the final bracket.
    let fhi = f(hi);
    let x = if fhi != flo {
        lo - flo * (hi - lo) / (fhi - flo)
    } else {
        0.5 * (lo + hi)
    };
    Ok(x.clamp(lo, hi))
}

/// First positive zero of `J_{3/2}`, `c_{3/2} ≈ 4.4934`.
pub fn c32() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| first_positive_root(BesselOrder::ThreeHalves).expect("bracket [4, 5]"))
}

/// `J_{5/2}(c_{3/2})`.
pub fn j52_at_c32() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| half_integer(BesselOrder::FiveHalves, c32()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use BesselOrder::*;

    /// Independent ascending power series of J_ν for half-integer ν, 30 terms.
    fn series_oracle(nu: f64, x: f64) -> f64 {
        // Γ(ν+1) by Lanczos-free recursion from Γ(1/2) = √π.
        let mut gamma = PI.sqrt();
        let mut k = 0.5;
        while k < nu + 1.0 - 1e-12 {
            gamma *= k;
            k += 1.0;
        }
        let mut sum = 0.0;
        let mut fact = 1.0;
        let mut g = gamma;
        for m in 0..30 {
            if m > 0 {
                fact *= m as f64;
                g *= nu + m as f64;
            }
            sum += (-1f64).powi(m) * (0.5 * x).powf(2.0 * m as f64 + nu) / (fact * g);
        }
        sum
    }

    /// Bessel's integral, J_n(x) = (1/π) ∫_0^π cos(nτ − x sin τ) dτ, by the
    /// trapezoid rule (exponentially convergent for periodic integrands).
    fn integral_oracle(n: i32, x: f64) -> f64 {
        let m = 2000;
        let h = PI / m as f64;
        let mut s = 0.0;
        for k in 0..=m {
            let t = k as f64 * h;
            let w = if k == 0 || k == m { 0.5 } else { 1.0 };
            s += w * (n as f64 * t - x * t.sin()).cos();
        }
        s * h / PI
    }

    #[test]
    fn j32_vanishes_at_c32() {
        let c = c32();
        assert!(bessel_j(ThreeHalves, c).unwrap().abs() < 1e-10);
    }

    #[test]
    fn j_half_vanishes_at_pi() {
        assert!(bessel_j(Half, PI).unwrap().abs() < 1e-12);
    }

    #[test]
    fn j32_matches_power_series() {
        let v = bessel_j(ThreeHalves, 1.0).unwrap();
        assert!((v - series_oracle(1.5, 1.0)).abs() < 1e-12);
        for &x in &[1e-6, 5e-5, 0.3, 2.0, 7.5] {
            for (o, nu) in [(Half, 0.5), (ThreeHalves, 1.5), (FiveHalves, 2.5)] {
                let v = bessel_j(o, x).unwrap();
                let r = series_oracle(nu, x);
                assert!((v - r).abs() <= 1e-12 * r.abs().max(1e-3), "{nu} {x} {v} {r}");
            }
        }
    }

    #[test]
    fn integer_orders_match_bessel_integral() {
        for &x in &[0.0, 0.1, 1.0, 3.7, 7.99, 8.01, 12.0, 24.9, 25.1, 40.0, 123.4] {
            for n in 0..2 {
                let o = if n == 0 { Zero } else { One };
                let v = bessel_j(o, x).unwrap();
                let r = integral_oracle(n, x);
                assert!((v - r).abs() < 1e-12, "J{n}({x}) = {v} vs {r}");
            }
        }
        assert!((bessel_j(One, -2.0).unwrap() + bessel_j(One, 2.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn recurrence_between_half_orders() {
        let mut x = 0.05;
        while x <= 50.0 {
            let j12 = bessel_j(Half, x).unwrap();
            let j32 = bessel_j(ThreeHalves, x).unwrap();
            let j52 = bessel_j(FiveHalves, x).unwrap();
            let rhs = 3.0 / x * j32 - j12;
            let scale = j52.abs().max(j12.abs()).max(1e-300);
            assert!((j52 - rhs).abs() <= 1e-10 * scale, "x = {x}");
            x += 0.05;
        }
    }

    #[test]
    fn derivative_identity_by_finite_differences() {
        let h = 1e-5;
        let mut x = 0.1;
        while x <= 20.0 {
            let f = |t: f64| t.powf(-1.5) * bessel_j(ThreeHalves, t).unwrap();
            let fd = (f(x + h) - f(x - h)) / (2.0 * h);
            let exact = -x.powf(-1.5) * bessel_j(FiveHalves, x).unwrap();
            assert!((fd - exact).abs() < 1e-6, "x = {x}");
            x += 0.1;
        }
    }

    #[test]
    fn scaled_forms_are_continuous_across_branch() {
        for &x in &[0.999_999, 1.0, 1.000_001] {
            let a = j32_scaled(x);
            let b = series_oracle(1.5, x) / x.powf(1.5);
            assert!((a - b).abs() < 1e-13);
            let a = j52_scaled(x);
            let b = series_oracle(2.5, x) / x.powf(2.5);
            assert!((a - b).abs() < 1e-13);
        }
        assert!((j32_scaled(0.0) - (2.0 / PI).sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn root_of_j32() {
        let c = first_positive_root(ThreeHalves).unwrap();
        assert!((c - 4.4934).abs() < 1e-3);
        assert!(c > 4.49 && c < 4.50);
        let f = |x| bessel_j(ThreeHalves, x).unwrap();
        assert!(f(c - 1e-6) * f(c + 1e-6) < 0.0);
        // tan x = x characterisation of the zero
        assert!((c.tan() - c).abs() < 1e-9);
        let tight = first_positive_root_with_tol(ThreeHalves, 1e-15).unwrap();
        assert!((tight - c).abs() < 1e-12);
    }

    #[test]
    fn root_of_j1() {
        let c = first_positive_root(One).unwrap();
        assert!(c > 3.0 && c < 4.5);
        assert!(bessel_j(One, c).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn unsupported_inputs() {
        assert!(BesselOrder::from_value(2.0).is_err());
        assert_eq!(BesselOrder::from_value(1.5).unwrap(), ThreeHalves);
        assert!(bessel_j(Zero, f64::NAN).is_err());
        assert!(bessel_j(ThreeHalves, f64::INFINITY).is_err());
        assert!(bessel_j(ThreeHalves, -1.0).is_err());
        assert!(first_positive_root(Zero).is_err());
    }
}

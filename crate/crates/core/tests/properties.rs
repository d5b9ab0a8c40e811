use ndarray::Array2;
use proptest::prelude::*;

use forcefree::clebsch::{
    dirichlet_energy, functionals, gen_helicity, read_dump_str, write_dump_string, ClebschField,
    HalfPlaneGrid,
};
use forcefree::fields::FieldParams;
use forcefree::relax::{orbit_distance, scaling_reduce, steiner_symmetrize, GsSolver};

fn grid() -> HalfPlaneGrid {
    HalfPlaneGrid::centered(4.0, 3.0, 61, 31).unwrap()
}

/// `A r² exp(−a((z − z₀)² + r²))` for φ and `B r² exp(−b(...))` for G.
fn bump_pair(amp: f64, a: f64, z0: f64, b_amp: f64, b: f64) -> ClebschField {
    ClebschField::sample(
        grid(),
        move |z, r| amp * r * r * (-a * ((z - z0).powi(2) + r * r)).exp(),
        move |z, r| b_amp * r * r * (-b * ((z - z0).powi(2) + r * r)).exp(),
    )
    .unwrap()
}

/// Bump of radius `s` with compact support, `r² (1 − ρ²/s²)₊³`.
fn compact_pair(amp: f64, s: f64, b_amp: f64) -> ClebschField {
    let cap = move |z: f64, r: f64| r * r * (1.0 - (z * z + r * r) / (s * s)).max(0.0).powi(3);
    ClebschField::sample(grid(), move |z, r| amp * cap(z, r), move |z, r| b_amp * cap(z, r)).unwrap()
}

fn nonneg_array(nz: usize, nr: usize) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0..10.0f64], nz * nr)
        .prop_map(move |v| Array2::from_shape_vec((nz, nr), v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn helicity_flips_sign_exactly(
        amp in 0.5..8.0f64, a in 0.5..3.0f64, z0 in -1.0..1.0f64,
        b_amp in -5.0..5.0f64, b in 0.5..3.0f64, w in 0.1..2.0f64, gamma in 0.0..0.2f64,
    ) {
        let f = bump_pair(amp, a, z0, b_amp, b);
        let p = FieldParams::new(w, 1.0, gamma).unwrap();
        let h = gen_helicity(&f, &p);
        prop_assert_eq!(gen_helicity(&f.with_negated_swirl(), &p), -h);
    }

    #[test]
    fn functionals_translation_invariant(
        amp in 0.5..8.0f64, s in 0.5..2.5f64, b_amp in -5.0..5.0f64, k in -8isize..8,
    ) {
        let f = compact_pair(amp, s, b_amp);
        let p = FieldParams::new(0.5, 1.0, 0.0).unwrap();
        let (x, y) = (functionals(&f, &p), functionals(&f.shifted_z(k), &p));
        for (u, v) in [(x.e, y.e), (x.h, y.h), (x.m, y.m)] {
            prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1e-300), "{} vs {}", u, v);
        }
    }

    #[test]
    fn steiner_preserves_rows_and_lowers_energy(phi in nonneg_array(14, 9)) {
        let g = HalfPlaneGrid::new(-1.0, 1.5, 2.0, 14, 9).unwrap();
        let sym = steiner_symmetrize(&phi);
        for j in 0..9 {
            let mut a = phi.column(j).to_vec();
            let mut b = sym.column(j).to_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }
        let (e0, e1) = (dirichlet_energy(&phi, &g), dirichlet_energy(&sym, &g));
        prop_assert!(e1 <= e0 * (1.0 + 1e-6) + 1e-300, "{} > {}", e1, e0);
        prop_assert_eq!(steiner_symmetrize(&sym), sym);
    }

    #[test]
    fn dump_round_trip_is_byte_exact(
        vals in prop::collection::vec(-1e6..1e6f64, 2 * 9 * 7),
        w in 0.01..10.0f64, lambda in 0.01..50.0f64, gamma in 0.0..3.0f64,
    ) {
        let g = HalfPlaneGrid::new(-1.3, 2.7, 1.9, 9, 7).unwrap();
        let mut phi = Array2::from_shape_vec((9, 7), vals[..63].to_vec()).unwrap();
        let mut gg = Array2::from_shape_vec((9, 7), vals[63..].to_vec()).unwrap();
        phi.column_mut(0).fill(0.0);
        gg.column_mut(0).fill(0.0);
        let f = ClebschField::from_samples(g, phi, gg).unwrap();
        let p = FieldParams::new(w, lambda, gamma).unwrap();
        let text = write_dump_string(&f, &p);
        let (back, bp) = read_dump_str(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(bp, p);
        prop_assert_eq!(write_dump_string(&back, &bp), text);
    }

    #[test]
    fn gs_solve_is_linear(
        x in prop::collection::vec(-1.0..1.0f64, 17 * 13),
        y in prop::collection::vec(-1.0..1.0f64, 17 * 13),
        a in -3.0..3.0f64, b in -3.0..3.0f64,
    ) {
        let g = HalfPlaneGrid::new(-1.0, 1.0, 1.5, 17, 13).unwrap();
        let x = Array2::from_shape_vec((17, 13), x).unwrap();
        let y = Array2::from_shape_vec((17, 13), y).unwrap();
        let s = GsSolver::new(g);
        let lhs = s.solve(&(&x * a + &y * b)).unwrap();
        let rhs = s.solve(&x).unwrap() * a + s.solve(&y).unwrap() * b;
        let scale = rhs.iter().chain(lhs.iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
        let err = (&lhs - &rhs).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(err <= 1e-10 * scale, "{}", err / scale);
    }

    #[test]
    fn scaling_reduce_inverts(h in -1e3..1e3f64, w in 0.01..10.0f64, gamma in 0.0..5.0f64) {
        let (ht, gt) = scaling_reduce(h, w, gamma).unwrap();
        let s = 0.5 * w;
        prop_assert!((ht * s * s - h).abs() <= 1e-12 * h.abs().max(1.0));
        prop_assert!((gt * s - gamma).abs() <= 1e-12 * gamma.max(1.0));
    }

    #[test]
    fn integer_shift_is_recovered(amp in 1.0..5.0f64, a in 1.0..3.0f64, k in -10isize..10) {
        let f = bump_pair(amp, a, 0.0, 0.0, 1.0);
        let p = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let cmp = orbit_distance(&f.shifted_z(k), &p, &f, &p).unwrap();
        prop_assert_eq!(cmp.shift_cells, k as f64);
        prop_assert!(cmp.distance <= 1e-12);
    }
}

use forcefree::clebsch::{ClebschField, HalfPlaneGrid};
use forcefree::error::Error;
use forcefree::fields::FieldParams;
use forcefree::fluxsim::{
    drift_scan, ring_stream, run, stability_limit, step, velocity_from_stream, SimConfig,
};

fn params() -> FieldParams {
    FieldParams::new(2.0, 1.0, 0.0).unwrap()
}

fn bump(g: HalfPlaneGrid, z0: f64) -> ClebschField {
    ClebschField::sample(
        g,
        move |z, r| r * r * (1.0 + 2.0 * (-2.0 * ((z - z0).powi(2) + r * r)).exp()),
        move |z, r| r * r * (-2.0 * ((z - z0).powi(2) + r * r)).exp(),
    )
    .unwrap()
}

#[test]
fn frozen_state_without_flow_or_resistivity() {
    let g = HalfPlaneGrid::centered(3.0, 3.0, 49, 25).unwrap();
    let p = params();
    let f = ClebschField::chandrasekhar(g, &p).unwrap();
    let tr = run(&SimConfig::new(p, f, 0.0, 1.0)).unwrap();
    assert!(tr.h_series.iter().all(|h| *h == tr.h_series[0]));
    assert!(tr.m_series.iter().all(|m| *m == tr.m_series[0]));
    assert!(tr.balance_residual_h.iter().chain(&tr.balance_residual_m).all(|r| *r == 0.0));
}

#[test]
fn mean_square_balance_refines() {
    let lambda = forcefree::specfun::c32().powi(2);
    let p = FieldParams::new(2.0, lambda, 0.0).unwrap();
    let mut rel = Vec::new();
    for n in [16usize, 32] {
        let g = HalfPlaneGrid::centered(3.0, 3.0, 6 * n + 1, 3 * n + 1).unwrap();
        let mut cfg = SimConfig::new(p, ClebschField::chandrasekhar(g, &p).unwrap(), 1e-3, 1.0);
        cfg.dt_max = Some(0.5 / n as f64);
        let tr = run(&cfg).unwrap();
        let last = tr.times.len() - 1;
        rel.push(tr.balance_residual_m[last].abs() / tr.m_series[0]);
        assert!(tr.balance_residual_h[last].abs() / tr.h_series[0] <= 2e-2);
        assert!(tr.msp_dissipation_accum.windows(2).all(|w| w[1] >= w[0]));
    }
    assert!(rel[1] <= 1e-2, "{rel:?}");
    assert!((rel[0] / rel[1]).log2() >= 0.9, "{rel:?}");
}

#[test]
fn helicity_invariant_under_joint_translation() {
    let g = HalfPlaneGrid::centered(4.0, 3.0, 81, 31).unwrap();
    let p = params();
    let k = 6isize;
    let base = bump(g, 0.0);
    let shifted = bump(g, k as f64 * g.hz());
    let psi = ring_stream(&g, 0.3, 1.0, 0.5);
    let mut psi_shifted = g.zeros();
    let nz = g.nz() as isize;
    for i in 0..nz {
        if (0..nz).contains(&(i - k)) {
            for j in 0..g.nr() {
                psi_shifted[[i as usize, j]] = psi[[(i - k) as usize, j]];
            }
        }
    }
    let mut a = SimConfig::new(p, base, 1e-3, 0.5);
    a.stream_psi = psi;
    let mut b = SimConfig::new(p, shifted, 1e-3, 0.5);
    b.stream_psi = psi_shifted;
    let (ta, tb) = (run(&a).unwrap(), run(&b).unwrap());
    for (x, y) in ta.h_series.iter().zip(&tb.h_series) {
        assert!(((x - y) / x).abs() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn pure_advection_keeps_extrema() {
    let g = HalfPlaneGrid::centered(3.0, 3.0, 61, 31).unwrap();
    let p = params();
    let vel = velocity_from_stream(&ring_stream(&g, 0.5, 1.0, 0.7), &g).unwrap();
    let dt = 0.5 * stability_limit(&g, &vel, 0.0);
    let excess = |f: &ClebschField| {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..g.nz() {
            for j in 0..g.nr() {
                let v = f.phi()[[i, j]] - p.phi_inf(g.r(j));
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    };
    let mut s = bump(g, 0.0);
    let (lo0, hi0) = excess(&s);
    for _ in 0..100 {
        s = step(&s, &p, &vel, dt, 0.0).unwrap();
        let (lo, hi) = excess(&s);
        assert!(lo >= lo0 - 1e-12 && hi <= hi0 + 1e-12, "{lo} {hi}");
    }
}

#[test]
fn step_rejects_unstable_dt() {
    let g = HalfPlaneGrid::centered(3.0, 3.0, 31, 16).unwrap();
    let p = params();
    let vel = velocity_from_stream(&ring_stream(&g, 0.5, 1.0, 0.7), &g).unwrap();
    let limit = stability_limit(&g, &vel, 1e-2);
    let err = step(&bump(g, 0.0), &p, &vel, 2.0 * limit, 1e-2).unwrap_err();
    assert!(matches!(err, Error::Cfl { .. }));
}

#[test]
fn drift_bounded_by_square_root_law() {
    let g = HalfPlaneGrid::centered(3.0, 3.0, 6 * 32 + 1, 3 * 32 + 1).unwrap();
    let lambda = forcefree::specfun::c32().powi(2);
    let p = FieldParams::new(2.0, lambda, 0.0).unwrap();
    let mut cfg = SimConfig::new(p, ClebschField::chandrasekhar(g, &p).unwrap(), 0.0, 1.0);
    cfg.stream_psi = ring_stream(&g, 0.5, 1.0, 0.7);
    let scan = drift_scan(&cfg, &[0.0, 1e-2, 1e-3, 1e-4]).unwrap();
    let base = scan[0].drift;
    assert!(scan[3].drift < scan[1].drift);
    let ratios: Vec<f64> = scan[1..].iter().map(|d| (d.drift - base).abs() / d.mu.sqrt()).collect();
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(max / min <= 10.0, "{ratios:?}");
}

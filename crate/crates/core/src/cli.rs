//! Command-line front end: TOML configuration, the five subcommands and their
//! text reports.
//!
//! Exit codes: 0 when every check of the subcommand passes, 1 when a check
//! fails (non-converged relaxation, failed property, orbit distance above
//! tolerance), 2 on configuration, parse or I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::clebsch::inequalities::{inequality_ratios, random_corpus};
use crate::clebsch::{
    dirichlet_energy, functionals, gen_helicity, lift_to_5d_norms, read_dump,
    read_dump_str, write_dump, write_dump_string, ClebschField, HalfPlaneGrid,
};
use crate::error::{Error, Result};
use crate::fields::{
    forcefree_residual, helicity_constant_hc, lundquist_field, phi_c, Band, Chandrasekhar,
    FieldParams,
};
use crate::fluxsim::{drift_scan, ring_stream, run, write_trace, SimConfig};
use crate::relax::{
    minimize, orbit_distance, recover_mu, relative_residual, steiner_symmetrize, write_history,
    write_summary, GsSolver, RelaxConfig, SeedBubble,
};
use crate::specfun::{bessel_j, c32, BesselOrder};

#[derive(Debug, Parser)]
#[command(name = "forcefree", version, about = "Axisymmetric nonlinear force-free fields")]
pub struct Cli {
    /// TOML configuration file; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `[output] dir`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for all randomness (overrides the top-level `seed` key).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the explicit solution and report its constants.
    Eval,
    /// Relax to the helicity-constrained energy minimizer.
    Relax,
    /// Resistive flux transport with balance-law accounting.
    Sim,
    /// Run the property suite.
    Verify,
    /// Align two field dumps in z and report their distance.
    OrbitCompare { dump_a: PathBuf, dump_b: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsSection {
    #[serde(rename = "W")]
    pub w: f64,
    pub lambda: f64,
    pub gamma: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        Self {
            w: 1.0,
            lambda: 1.0,
            gamma: 0.0,
        }
    }
}

/// Box `[−half_width, half_width] × [0, r_max]`; both default to 4R, which
/// keeps the truncation bias of the benchmark near 1%.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub nz: usize,
    pub nr: usize,
    pub half_width: Option<f64>,
    pub r_max: Option<f64>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            nz: 129,
            nr: 65,
            half_width: None,
            r_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RelaxSection {
    /// Defaults to `h_C`.
    pub target_h: Option<f64>,
    pub max_iters: usize,
    pub tol_phi: f64,
    pub tol_h: f64,
    pub omega: f64,
    pub steiner_every: usize,
    pub seed_z0: f64,
    /// Defaults to R.
    pub seed_sigma: Option<f64>,
    /// Defaults to W.
    pub seed_amplitude: Option<f64>,
    /// Largest accepted orbit distance in `orbit-compare`.
    pub orbit_tolerance: f64,
}

impl Default for RelaxSection {
    fn default() -> Self {
        Self {
            target_h: None,
            max_iters: 500,
            tol_phi: 1e-8,
            tol_h: 1e-10,
            omega: 0.5,
            steiner_every: 0,
            seed_z0: 0.0,
            seed_sigma: None,
            seed_amplitude: None,
            orbit_tolerance: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub mu: f64,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub n_samples: usize,
    pub dt_max: Option<f64>,
    /// Amplitude of the ring stream function; 0 gives u = 0.
    pub stream_amplitude: f64,
    /// Ring radius, defaults to R.
    pub stream_r0: Option<f64>,
    /// Ring width, defaults to 0.7 R.
    pub stream_width: Option<f64>,
    /// Resistivities for a drift scan; empty skips the scan.
    pub drift_mu: Vec<f64>,
    /// Initial field dump; the explicit solution on the configured grid when
    /// omitted. A dump brings its own grid and parameters.
    pub initial: Option<PathBuf>,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            mu: 1e-3,
            t_end: 1.0,
            cfl_safety: 0.5,
            n_samples: 11,
            dt_max: None,
            stream_amplitude: 0.0,
            stream_r0: None,
            stream_width: None,
            drift_mu: Vec::new(),
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    /// Also dump the Lundquist field `J_0(fr) e_z + J_1(fr) e_θ` in `eval`.
    pub lundquist_f: Option<f64>,
}

/// Parsed configuration. Unknown sections or keys are rejected.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub params: ParamsSection,
    pub grid: GridSection,
    pub relax: RelaxSection,
    pub sim: SimSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.field_params()?;
        self.grid()?;
        if self.relax.orbit_tolerance.is_nan() || self.relax.orbit_tolerance < 0.0 {
            return Err(Error::Config("orbit_tolerance must be nonnegative".into()));
        }
        if self.sim.drift_mu.iter().any(|m| !(*m >= 0.0 && m.is_finite())) {
            return Err(Error::Config("drift_mu entries must be nonnegative".into()));
        }
        if let Some(f) = self.output.lundquist_f {
            if !f.is_finite() {
                return Err(Error::Config("lundquist_f must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn field_params(&self) -> Result<FieldParams> {
        FieldParams::new(self.params.w, self.params.lambda, self.params.gamma)
    }

    pub fn grid(&self) -> Result<HalfPlaneGrid> {
        let r = self.field_params()?.radius();
        HalfPlaneGrid::centered(
            self.grid.half_width.unwrap_or(4.0 * r),
            self.grid.r_max.unwrap_or(4.0 * r),
            self.grid.nz,
            self.grid.nr,
        )
    }

    pub fn relax_config(&self) -> Result<RelaxConfig> {
        let params = self.field_params()?;
        let mut cfg = RelaxConfig::benchmark(params, self.grid.nz, self.grid.nr)?;
        let r = &self.relax;
        cfg.grid = self.grid()?;
        if let Some(h) = r.target_h {
            cfg.target_h = h;
        }
        cfg.max_iters = r.max_iters;
        cfg.tol_phi = r.tol_phi;
        cfg.tol_h = r.tol_h;
        cfg.omega = r.omega;
        cfg.steiner_every = r.steiner_every;
        cfg.seed = SeedBubble {
            z0: r.seed_z0,
            sigma: r.seed_sigma.unwrap_or(params.radius()),
            amplitude: r.seed_amplitude.unwrap_or(params.w),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let (initial, params) = match &self.sim.initial {
            Some(path) => read_dump(path)?,
            None => {
                let p = self.field_params()?;
                (ClebschField::chandrasekhar(self.grid()?, &p)?, p)
            }
        };
        let grid = *initial.grid();
        let s = &self.sim;
        let mut cfg = SimConfig::new(params, initial, s.mu, s.t_end);
        cfg.cfl_safety = s.cfl_safety;
        cfg.n_samples = s.n_samples;
        cfg.dt_max = s.dt_max;
        if s.stream_amplitude != 0.0 {
            let r = params.radius();
            cfg.stream_psi = ring_stream(
                &grid,
                s.stream_amplitude,
                s.stream_r0.unwrap_or(r),
                s.stream_width.unwrap_or(0.7 * r),
            );
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Resolved run context shared by the subcommands.
pub struct Context {
    pub config: RunConfig,
    pub out: PathBuf,
    pub quiet: bool,
}

impl Context {
    fn say(&self, text: &str) {
        if !self.quiet {
            print!("{text}");
        }
    }

    fn out_path(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out)?;
        Ok(self.out.join(name))
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.out_path(name)?;
        fs::write(&path, text)?;
        Ok(path)
    }
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let ctx = Context {
        config,
        out,
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Eval => cmd_eval(&ctx),
        Command::Relax => cmd_relax(&ctx),
        Command::Sim => cmd_sim(&ctx),
        Command::Verify => cmd_verify(&ctx),
        Command::OrbitCompare { dump_a, dump_b } => cmd_orbit_compare(&ctx, dump_a, dump_b),
    }
}

fn kv(s: &mut String, key: &str, v: f64) {
    let _ = writeln!(s, "{key} = {v:.16e}");
}

/// Writes `chandrasekhar.dump` and `eval_report.txt` (plus `lundquist.dump`
/// when requested).
pub fn cmd_eval(ctx: &Context) -> Result<i32> {
    let params = ctx.config.field_params()?;
    let grid = ctx.config.grid()?;
    let field = ClebschField::chandrasekhar(grid, &params)?;
    write_dump(ctx.out_path("chandrasekhar.dump")?, &field, &params)?;
    let hc = helicity_constant_hc(&params);
    let f = functionals(&field, &params);
    let mut s = String::new();
    kv(&mut s, "W", params.w);
    kv(&mut s, "lambda", params.lambda);
    kv(&mut s, "gamma", params.gamma);
    kv(&mut s, "c32", c32());
    kv(&mut s, "R", params.radius());
    kv(&mut s, "h_C", hc);
    kv(&mut s, "energy", f.e);
    kv(&mut s, "helicity", f.h);
    kv(&mut s, "mean_square_potential", f.m);
    kv(&mut s, "helicity_rel_error", ((f.h - hc) / hc).abs());
    if let Some(fl) = ctx.config.output.lundquist_f {
        let lq = lundquist_clebsch(grid, fl)?;
        write_dump(ctx.out_path("lundquist.dump")?, &lq, &params)?;
        kv(&mut s, "lundquist_f", fl);
    }
    ctx.write("eval_report.txt", &s)?;
    ctx.say(&s);
    Ok(0)
}

/// Clebsch pair of the Lundquist field: `φ = r J_1(fr)/f`, `G = r J_1(fr)`.
fn lundquist_clebsch(grid: HalfPlaneGrid, f: f64) -> Result<ClebschField> {
    ClebschField::sample(
        grid,
        |_, r| {
            if f == 0.0 {
                0.5 * r * r
            } else {
                r * lundquist_field(f, r).theta / f
            }
        },
        |_, r| r * lundquist_field(f, r).theta,
    )
}

/// Writes `relax.dump`, `relax_history.txt` and `relax_report.txt`. Exit 1
/// when the iteration did not converge.
pub fn cmd_relax(ctx: &Context) -> Result<i32> {
    let cfg = ctx.config.relax_config()?;
    let report = match minimize(&cfg) {
        Ok(r) => r,
        Err(Error::DegenerateSupport) => {
            eprintln!("error: {}", Error::DegenerateSupport);
            return Ok(1);
        }
        Err(e) => return Err(e),
    };
    write_dump(ctx.out_path("relax.dump")?, &report.field, &report.params)?;
    ctx.write("relax_history.txt", &write_history(&report))?;
    let mut s = write_summary(&report, cfg.target_h);
    let analytic = ClebschField::chandrasekhar(cfg.grid, &cfg.params)?;
    let orbit = orbit_distance(&report.field, &report.params, &analytic, &cfg.params)?;
    kv(&mut s, "orbit_shift", orbit.shift);
    kv(&mut s, "orbit_distance", orbit.distance);
    kv(&mut s, "orbit_perturbation_distance", orbit.perturbation_distance);
    ctx.write("relax_report.txt", &s)?;
    ctx.say(&s);
    Ok(if report.converged { 0 } else { 1 })
}

/// Writes `sim_trace.txt`, `sim_report.txt` and, with a non-empty
/// `drift_mu`, `drift_scan.txt` (`mu drift` per line).
pub fn cmd_sim(ctx: &Context) -> Result<i32> {
    let cfg = ctx.config.sim_config()?;
    let tr = run(&cfg)?;
    ctx.write("sim_trace.txt", &write_trace(&tr))?;
    let last = tr.times.len() - 1;
    let mut s = String::new();
    kv(&mut s, "mu", cfg.mu);
    kv(&mut s, "t_end", cfg.t_end);
    kv(&mut s, "dt", tr.dt);
    let _ = writeln!(s, "steps = {}", tr.steps);
    kv(&mut s, "H0", tr.h_series[0]);
    kv(&mut s, "M0", tr.m_series[0]);
    kv(&mut s, "balance_residual_H", tr.balance_residual_h[last]);
    kv(&mut s, "balance_residual_M", tr.balance_residual_m[last]);
    kv(&mut s, "positive_area_initial", tr.positive_area[0]);
    kv(&mut s, "positive_area_final", tr.positive_area[last]);
    if !ctx.config.sim.drift_mu.is_empty() {
        let scan = drift_scan(&cfg, &ctx.config.sim.drift_mu)?;
        let mut d = String::new();
        for p in &scan {
            let _ = writeln!(d, "{:.16e} {:.16e}", p.mu, p.drift);
        }
        ctx.write("drift_scan.txt", &d)?;
        let _ = writeln!(s, "drift_scan_rows = {}", scan.len());
    }
    ctx.write("sim_report.txt", &s)?;
    ctx.say(&s);
    Ok(0)
}

/// One property of the verification suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, bound: f64) -> Self {
        Self {
            name,
            value,
            bound,
            pass: value <= bound,
        }
    }

    fn at_least(name: &'static str, value: f64, bound: f64) -> Self {
        Self {
            name,
            value,
            bound,
            pass: value >= bound,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Empirical orders `log2(e_k / e_{k+1})` for halving mesh widths; the
/// smallest is returned.
fn min_order(errs: &[f64]) -> f64 {
    errs.windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .fold(f64::INFINITY, f64::min)
}

/// The property suite behind `verify`. Random properties draw from
/// `ChaCha8` streams seeded by `seed`.
pub fn verify_suite(params: &FieldParams, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let c = c32();

    checks.push(Check::at_most("root_c32", (c - 4.4934).abs(), 1e-3));
    checks.push(Check::at_most(
        "j32_vanishes_at_root",
        bessel_j(BesselOrder::ThreeHalves, c)?.abs(),
        1e-12,
    ));
    let mut rec = 0.0f64;
    for x in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let lhs = bessel_j(BesselOrder::Half, x)? + bessel_j(BesselOrder::FiveHalves, x)?;
        let rhs = 3.0 / x * bessel_j(BesselOrder::ThreeHalves, x)?;
        rec = rec.max((lhs - rhs).abs());
    }
    checks.push(Check::at_most("bessel_recurrence", rec, 1e-12));

    let r = params.radius();
    let fb = (0..64)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / 63.0;
            phi_c(r * t.cos(), r * t.sin(), params).abs()
        })
        .fold(0.0f64, f64::max);
    checks.push(Check::at_most("flux_vanishes_on_sphere", fb / (params.w * r * r), 1e-10));

    let ch = Chandrasekhar::new(*params);
    let mut banded = Vec::new();
    let mut lq = Vec::new();
    for n in [32usize, 64, 128] {
        let g = HalfPlaneGrid::centered(4.0 * r, 4.0 * r, 2 * n + 1, n + 1)?;
        let band = Band::sphere(r, 3.0 * g.hr());
        banded.push(forcefree_residual(|z, x| ch.field(z, x), |z, x| ch.factor(z, x), &g, Some(&band))?);
        let gl = HalfPlaneGrid::new(-1.0, 1.0, 3.0, n / 2 + 1, n + 1)?;
        lq.push(forcefree_residual(|_, x| lundquist_field(2.0, x), |_, _| 2.0, &gl, None)?);
    }
    checks.push(Check::at_least("forcefree_residual_order", min_order(&banded), 1.0));
    checks.push(Check::at_least("lundquist_residual_order", min_order(&lq), 1.9));

    let p0 = FieldParams::new(params.w, params.lambda, 0.0)?;
    let g = HalfPlaneGrid::centered(4.0 * r, 4.0 * r, 513, 257)?;
    let analytic = ClebschField::chandrasekhar(g, &p0)?;
    let hc = helicity_constant_hc(&p0);
    checks.push(Check::at_most("helicity_constant", rel(gen_helicity(&analytic, &p0), hc), 1e-2));
    let mu = recover_mu(analytic.phi(), &g, hc, &p0)?;
    checks.push(Check::at_most("multiplier_identity", rel(mu, p0.lambda.sqrt()), 2e-2));

    let rp = FieldParams::new(2.0, 1.0, 0.0)?;
    let rg = HalfPlaneGrid::centered(4.0, 4.0, 81, 41)?;
    let corpus = random_corpus(seed, 200);
    let mut flips = 0usize;
    let mut translation = 0.0f64;
    for (k, pair) in corpus.iter().enumerate() {
        let f = pair.sample(rg)?;
        let h = gen_helicity(&f, &rp);
        if gen_helicity(&f.with_negated_swirl(), &rp) != -h {
            flips += 1;
        }
        if k < 20 {
            let a = functionals(&f, &rp);
            let b = functionals(&f.shifted_z(3), &rp);
            for (x, y) in [(a.e, b.e), (a.h, b.h), (a.m, b.m)] {
                if x != 0.0 {
                    translation = translation.max(rel(y, x));
                }
            }
        }
    }
    checks.push(Check::at_most("helicity_sign_flip_failures", flips as f64, 0.0));
    checks.push(Check::at_most("translation_invariance", translation, 1e-6));

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x57e1);
    let sg = HalfPlaneGrid::new(-2.0, 2.0, 2.0, 24, 12)?;
    let (mut multiset, mut increase) = (0usize, 0.0f64);
    for _ in 0..100 {
        let density: f64 = rng.random_range(0.2..1.0);
        let phi = Array2::from_shape_fn(sg.shape(), |_| {
            if rng.random::<f64>() < density {
                rng.random::<f64>()
            } else {
                0.0
            }
        });
        let sym = steiner_symmetrize(&phi);
        for j in 0..sg.nr() {
            let mut a: Vec<f64> = phi.column(j).to_vec();
            let mut b: Vec<f64> = sym.column(j).to_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            if a != b {
                multiset += 1;
            }
        }
        let (e0, e1) = (dirichlet_energy(&phi, &sg), dirichlet_energy(&sym, &sg));
        if e0 > 0.0 {
            increase = increase.max((e1 - e0) / e0);
        }
    }
    checks.push(Check::at_most("steiner_multiset_failures", multiset as f64, 0.0));
    checks.push(Check::at_most("steiner_energy_increase", increase, 1e-6));

    let dump_params = FieldParams::new(params.w, params.lambda, params.gamma)?;
    let small = ClebschField::chandrasekhar(HalfPlaneGrid::centered(4.0 * r, 4.0 * r, 33, 17)?, &dump_params)?;
    let text = write_dump_string(&small, &dump_params);
    let (back, bp) = read_dump_str(&text)?;
    let same = write_dump_string(&back, &bp) == text && back == small;
    checks.push(Check::at_most("dump_round_trip_failures", if same { 0.0 } else { 1.0 }, 0.0));

    let gg = HalfPlaneGrid::new(-1.5, 1.5, 2.0, 65, 43)?;
    let rhs = Array2::from_shape_fn(gg.shape(), |_| rng.random::<f64>() - 0.5);
    let sol = GsSolver::new(gg).solve(&rhs)?;
    checks.push(Check::at_most("gs_solver_residual", relative_residual(&sol, &rhs, &gg), 1e-10));

    let ig = HalfPlaneGrid::new(-5.0, 5.0, 5.0, 201, 101)?;
    let bump = ClebschField::sample(ig, |z, x| x * x * (-z * z - x * x).exp(), |_, _| 0.0)?;
    let n = lift_to_5d_norms(&bump);
    let iso = rel(n.l1_5d, n.l1).max(rel(n.l2_5d, n.l2)).max(rel(n.dirichlet_5d, n.dirichlet));
    checks.push(Check::at_most("isometries", iso, 1e-2));

    let corpus = random_corpus(seed, 40);
    let coarse = inequality_ratios(&corpus, HalfPlaneGrid::centered(4.0, 4.0, 81, 41)?, seed)?;
    let fine = inequality_ratios(&corpus, HalfPlaneGrid::centered(4.0, 4.0, 161, 81)?, seed)?;
    let mut spread = 0.0f64;
    for ((_, a), (_, b)) in coarse.as_array().into_iter().zip(fine.as_array()) {
        let s = if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            (a / b).max(b / a)
        } else {
            f64::INFINITY
        };
        spread = spread.max(s);
    }
    checks.push(Check::at_most("inequality_constants_stable", spread, 2.0));

    Ok(checks)
}

/// Prints `PASS|FAIL name value bound` per property and writes
/// `verify_report.txt`. Exit 1 if any property fails.
pub fn cmd_verify(ctx: &Context) -> Result<i32> {
    let params = ctx.config.field_params()?;
    let checks = verify_suite(&params, ctx.config.seed)?;
    let mut s = String::new();
    for c in &checks {
        let _ = writeln!(
            s,
            "{} {} {:.16e} {:.16e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.bound
        );
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(s, "failed = {failed}");
    ctx.write("verify_report.txt", &s)?;
    ctx.say(&s);
    Ok(if failed == 0 { 0 } else { 1 })
}

/// Aligns `dump_b` onto `dump_a` and writes `orbit_report.txt`. Exit 1 when
/// the distance exceeds `[relax] orbit_tolerance`.
pub fn cmd_orbit_compare(ctx: &Context, dump_a: &Path, dump_b: &Path) -> Result<i32> {
    let (a, pa) = read_dump(dump_a)?;
    let (b, pb) = read_dump(dump_b)?;
    let cmp = orbit_distance(&a, &pa, &b, &pb)?;
    let tol = ctx.config.relax.orbit_tolerance;
    let mut s = String::new();
    kv(&mut s, "shift_cells", cmp.shift_cells);
    kv(&mut s, "shift", cmp.shift);
    kv(&mut s, "distance", cmp.distance);
    kv(&mut s, "perturbation_distance", cmp.perturbation_distance);
    kv(&mut s, "tolerance", tol);
    let pass = cmp.distance <= tol;
    let _ = writeln!(s, "pass = {pass}");
    ctx.write("orbit_report.txt", &s)?;
    ctx.say(&s);
    Ok(if pass { 0 } else { 1 })
}

//! Command-line front end: single knots, sweeps and external gluing files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot_diagram::{build_two_bridge, essential_corners, sweep_twist_vectors, OpenDiagram, TwistVector};
use crate::numerics::{canonical_sign, rel_pm, C64};
use crate::oneloop::{
    compare, gluing_residuals, one_loop, reduce_variables, refine_shapes, shapes_from_x, solve_shapes,
    verify_hessian_identity, verify_normalizer_identity, ShapeSolution,
};
use crate::potential::{build_potential, critical_system, normalizers, ot_invariant, solve_geometric, SeedPolicy};
use crate::triangulation::{
    collapse, explicit_flattening, gluing_data, octahedral_decomposition, solve_flattening, GluingFile,
};

#[derive(Debug, Parser)]
#[command(name = "twobridge", version, about = "1-loop and Ohtsuki-Takata invariants of hyperbolic 2-bridge knots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute τ and ω for one knot, or τ for a gluing-data file.
    Compute(ComputeArgs),
    /// Compare τ and ω for every 2-bridge knot up to a crossing number.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["twists", "fraction", "gluing"])))]
pub struct ComputeArgs {
    /// Twist vector, e.g. 4,2.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub twists: Option<Vec<i64>>,
    /// Fraction p/q.
    #[arg(long)]
    pub fraction: Option<String>,
    /// Gluing-data JSON file.
    #[arg(long)]
    pub gluing: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Include the labeled diagram in the report.
    #[arg(long)]
    pub dump_diagram: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(4..))]
    pub max_crossings: u32,
    /// Write the reports as a JSON array.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub json: bool,
    /// Run the determinant identities and counting checks.
    #[arg(long)]
    pub verify: bool,
    /// Relative tolerance for τ = ±ω and the checks.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Record wall-clock timings (makes the output nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Input {
    Twists(Vec<i64>),
    Fraction(i64, i64),
    Gluing(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: Input,
    pub tol: f64,
    pub seed: u64,
    pub json: bool,
    pub verify: bool,
    pub dump_diagram: bool,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(input: Input) -> Self {
        RunConfig { input, tol: 1e-9, seed: 0, json: false, verify: false, dump_diagram: false, timings: false }
    }

    fn with_common(input: Input, c: &CommonArgs) -> Self {
        RunConfig { tol: c.tol, seed: c.seed, json: c.json, verify: c.verify, timings: c.timings, ..Self::new(input) }
    }
}

pub fn parse_fraction(s: &str) -> Result<(i64, i64)> {
    let (p, q) = s.split_once('/').ok_or_else(|| Error::InvalidTwist(format!("fraction {s:?} is not p/q")))?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::InvalidTwist(format!("bad integer {t:?}")));
    Ok((parse(p)?, parse(q)?))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub crossings: Option<usize>,
    pub variables: Option<usize>,
    pub tetrahedra: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub knot: String,
    pub twists: Option<Vec<i64>>,
    pub fraction: Option<(i64, i64)>,
    pub mirror: bool,
    pub tau: Option<C64>,
    pub omega: Option<C64>,
    pub sign: Option<i8>,
    pub discrepancy: Option<f64>,
    pub relative: Option<f64>,
    pub pass: Option<bool>,
    pub volume: Option<f64>,
    pub counts: Counts,
    pub residuals: BTreeMap<String, f64>,
    /// Residuals that must stay below the tolerance under --verify.
    pub checks_pass: Option<bool>,
    pub timings_ms: Option<BTreeMap<String, f64>>,
    pub diagram: Option<serde_json::Value>,
    pub error: Option<String>,
}

impl Report {
    fn empty(knot: String) -> Self {
        Report {
            knot,
            twists: None,
            fraction: None,
            mirror: false,
            tau: None,
            omega: None,
            sign: None,
            discrepancy: None,
            relative: None,
            pass: None,
            volume: None,
            counts: Counts::default(),
            residuals: BTreeMap::new(),
            checks_pass: None,
            timings_ms: None,
            diagram: None,
            error: None,
        }
    }

    /// False if the comparison or a verified check failed.
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.pass != Some(false) && self.checks_pass != Some(false)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn text(&self) -> String {
        let mut out = format!("knot {}", self.knot);
        if self.mirror {
            out.push_str(" (mirror image)");
        }
        out.push('\n');
        if let Some(e) = &self.error {
            out.push_str(&format!("  error: {e}\n"));
            return out;
        }
        let fmt = |z: C64| format!("{:+.9} {:+.9}i", z.re, z.im);
        if let Some(t) = self.tau {
            out.push_str(&format!("  tau    = {}  (or {})\n", fmt(t), fmt(-t)));
        }
        if let Some(w) = self.omega {
            out.push_str(&format!("  omega  = {}  (or {})\n", fmt(w), fmt(-w)));
        }
        if let (Some(s), Some(d), Some(r)) = (self.sign, self.discrepancy, self.relative) {
            let verdict = if self.pass == Some(true) { "pass" } else { "FAIL" };
            out.push_str(&format!("  tau = {s:+}·omega, discrepancy {d:.3e} (relative {r:.3e}) {verdict}\n"));
        }
        if let Some(v) = self.volume {
            out.push_str(&format!("  volume = {v:.9}\n"));
        }
        let c = &self.counts;
        if let (Some(n), Some(k)) = (c.crossings, c.variables) {
            out.push_str(&format!("  crossings {n}, variables {k}, "));
        } else {
            out.push_str("  ");
        }
        out.push_str(&format!("tetrahedra {}, edges {}\n", c.tetrahedra, c.edges));
        for (k, v) in &self.residuals {
            out.push_str(&format!("  {k:<28} {v:.3e}\n"));
        }
        if let Some(p) = self.checks_pass {
            out.push_str(&format!("  checks {}\n", if p { "pass" } else { "FAIL" }));
        }
        if let Some(t) = &self.timings_ms {
            for (k, v) in t {
                out.push_str(&format!("  time {k:<12} {v:.2} ms\n"));
            }
        }
        out
    }
}

struct Clock {
    on: bool,
    last: Instant,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    fn new(on: bool) -> Self {
        Clock { on, last: Instant::now(), laps: BTreeMap::new() }
    }

    fn lap(&mut self, name: &str) {
        if self.on {
            let now = Instant::now();
            self.laps.insert(name.to_string(), (now - self.last).as_secs_f64() * 1e3);
            self.last = now;
        }
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.on.then_some(self.laps)
    }
}

/// Residual names checked against the tolerance under --verify.
const CONTRACT_CHECKS: [&str; 11] = [
    "critical_equations",
    "gluing_equations",
    "elimination_steps",
    "elimination_chain",
    "hessian_identity",
    "reduced_equations",
    "normalizer_identity",
    "end_shapes",
    "flattening_independence",
    "replaced_row_independence",
    "quad_type_independence",
];

fn diagram_for(input: &Input) -> Result<(OpenDiagram, bool)> {
    match input {
        Input::Twists(t) => {
            let d = build_two_bridge(&TwistVector::new(t.clone())?)?;
            let m = d.mirror;
            Ok((d, m))
        }
        Input::Fraction(p, q) => {
            let (tv, mirror) = TwistVector::from_fraction(*p, *q)?;
            let d = build_two_bridge(&tv)?;
            let m = mirror != d.mirror;
            Ok((d, m))
        }
        Input::Gluing(_) => Err(Error::Internal("gluing input has no diagram".into())),
    }
}

/// Both pipelines for one knot.
pub fn cmd_compute(config: &RunConfig) -> Result<Report> {
    if let Input::Gluing(path) = &config.input {
        return cmd_from_gluing(path, config);
    }
    let mut clock = Clock::new(config.timings);
    let (d, mirror) = diagram_for(&config.input)?;
    let knot = match &config.input {
        Input::Twists(t) => format!("{t:?}"),
        Input::Fraction(p, q) => format!("{p}/{q}"),
        Input::Gluing(_) => unreachable!(),
    };
    let mut report = Report::empty(knot);
    report.twists = Some(d.twists.clone());
    report.fraction = Some(d.fraction);
    report.mirror = mirror;
    if config.dump_diagram {
        report.diagram = Some(serde_json::from_str(&d.to_json()).expect("diagram JSON parses"));
    }
    clock.lap("diagram");

    let v = build_potential(&d.corners)?;
    let sys = critical_system(&v);
    let policy = SeedPolicy { seed: config.seed, ..SeedPolicy::default() };
    let sol = solve_geometric(&sys, &policy)?;
    let norms = normalizers(&d);
    let ot = ot_invariant(&v, &norms, &sol)?;
    clock.lap("potential");

    let oc = octahedral_decomposition(&d)?;
    let tri = collapse(&oc, &d)?;
    let gd = gluing_data(&tri, &d)?;
    let ex = explicit_flattening(&tri, &d)?;
    let corners = essential_corners(&d);
    let zs = shapes_from_x(&sol.x, &corners)?;
    let ol = one_loop(&gd, &ex.flattening, &zs)?;
    clock.lap("triangulation");

    let (tau, omega) = if mirror { (ol.tau.conj(), ot.omega.conj()) } else { (ol.tau, ot.omega) };
    let (tau, omega) = (canonical_sign(tau), canonical_sign(omega));
    let cmp = compare(tau, omega);
    report.tau = Some(tau);
    report.omega = Some(omega);
    report.sign = Some(cmp.sign);
    report.discrepancy = Some(cmp.discrepancy);
    report.relative = Some(cmp.relative);
    report.pass = Some(cmp.relative <= config.tol);
    report.volume = Some(sol.volume);
    report.counts = Counts {
        crossings: Some(d.n_crossings()),
        variables: Some(d.n_vars),
        tetrahedra: tri.n_tets(),
        edges: tri.edges.len(),
    };

    if config.verify {
        let r = &mut report.residuals;
        r.insert("critical_equations".into(), sys.max_residual(&sol.x));
        r.insert("gluing_equations".into(), gluing_residuals(&gd, &zs).into_iter().fold(0.0, f64::max));
        let red = reduce_variables(&gd, &zs, &tri)?;
        r.insert("elimination_steps".into(), red.steps.iter().map(|s| s.residual).fold(0.0, f64::max));
        r.insert("elimination_chain".into(), red.chain_residual);
        let hc = verify_hessian_identity(&v, &sol.x, &red, &gd, &zs, &corners);
        r.insert("hessian_identity".into(), hc.residual);
        r.insert("reduced_equations".into(), hc.equation_residual);
        r.insert("free_shape_unimodularity".into(), (hc.exponent_det.abs() - 1).abs() as f64);
        let nc = verify_normalizer_identity(&norms, &sol.x, &ex.base, &ex.transfer, &zs, &tri, &corners);
        r.insert("normalizer_identity".into(), nc.residual);
        if nc.end_residual.is_finite() {
            r.insert("end_shapes".into(), nc.end_residual);
        }
        r.insert("crossing_triples".into(), nc.crossing_residual);
        r.insert("base_flattening_normalizer".into(), nc.base_residual);
        if let Some(alt) = &ex.alternate_transfer {
            r.insert("transfer_choice".into(), rel_pm(zs.zeta_power(alt), zs.zeta_power(&ex.transfer)));
        }
        let solved = solve_flattening(&gd)?;
        r.insert("flattening_independence".into(), rel_pm(one_loop(&gd, &solved, &zs)?.tau, ol.tau));
        let rows = (0..gd.n)
            .filter_map(|row| one_loop(&gd.with_replaced_row(row), &ex.flattening, &zs).ok())
            .map(|o| rel_pm(o.tau, ol.tau))
            .fold(0.0, f64::max);
        r.insert("replaced_row_independence".into(), rows);
        let every_other: Vec<usize> = (0..gd.n).step_by(2).collect();
        let retagged_z: Vec<C64> =
            zs.z.iter()
                .enumerate()
                .map(|(j, &z)| if j % 2 == 0 { C64::new(1.0, 0.0) / (C64::new(1.0, 0.0) - z) } else { z })
                .collect();
        let t3 =
            one_loop(&gd.retag(&every_other), &ex.flattening.retag(&every_other), &ShapeSolution::new(retagged_z)?)?
                .tau;
        r.insert("quad_type_independence".into(), rel_pm(t3, ol.tau));
        r.insert("orientation_reversal".into(), rel_pm(ot.omega, ot.omega_reversed));
        let failed_tallies =
            tri.tally.checks(d.n_crossings(), tri.n_tets(), tri.edges.len()).iter().filter(|(_, p, o)| p != o).count();
        let ess = d.essential_corners().count();
        r.insert("counting_failures".into(), (failed_tallies + usize::from(ess != tri.n_tets())) as f64);
        let ok = CONTRACT_CHECKS.iter().all(|k| r.get(*k).is_none_or(|v| *v <= config.tol))
            && r["counting_failures"] == 0.0
            && r["free_shape_unimodularity"] == 0.0;
        report.checks_pass = Some(ok);
        clock.lap("verify");
    }
    report.timings_ms = clock.finish();
    Ok(report)
}

/// τ of an external triangulation.
pub fn cmd_from_gluing(path: &Path, config: &RunConfig) -> Result<Report> {
    gluing_report(&GluingFile::read(path)?, &path.display().to_string(), config)
}

/// τ of parsed gluing data, reported under `name`.
pub fn gluing_report(file: &GluingFile, name: &str, config: &RunConfig) -> Result<Report> {
    let mut clock = Clock::new(config.timings);
    let gd = file.gluing_data()?;
    let zs = match file.shapes() {
        Some(z) => refine_shapes(&gd, &z)?,
        None => solve_shapes(&gd, config.seed, 200)?,
    };
    let fl = match &file.flattening {
        Some(fl) if gd.is_flattening(fl) => fl.clone(),
        Some(_) => return Err(Error::Schema("flattening does not satisfy the flattening equations".into())),
        None => solve_flattening(&gd)?,
    };
    let ol = one_loop(&gd, &fl, &zs)?;
    clock.lap("one_loop");
    let mut report = Report::empty(name.to_string());
    report.tau = Some(canonical_sign(ol.tau));
    report.volume = Some(zs.volume().abs());
    report.counts = Counts { crossings: None, variables: None, tetrahedra: gd.n, edges: gd.n };
    if config.verify {
        let r = &mut report.residuals;
        r.insert("gluing_equations".into(), gluing_residuals(&gd, &zs).into_iter().fold(0.0, f64::max));
        let solved = solve_flattening(&gd)?;
        r.insert("flattening_independence".into(), rel_pm(one_loop(&gd, &solved, &zs)?.tau, ol.tau));
        let rows = (0..gd.n)
            .filter_map(|row| one_loop(&gd.with_replaced_row(row), &fl, &zs).ok())
            .map(|o| rel_pm(o.tau, ol.tau))
            .fold(0.0, f64::max);
        r.insert("replaced_row_independence".into(), rows);
        report.checks_pass = Some(r.values().all(|v| *v <= config.tol));
        clock.lap("verify");
    }
    report.timings_ms = clock.finish();
    Ok(report)
}

/// One report per sweep twist vector, in enumeration order.
pub fn cmd_sweep(max_crossings: usize, out_path: Option<&Path>, config: &RunConfig) -> Result<Vec<Report>> {
    let vectors = sweep_twist_vectors(max_crossings);
    let reports: Vec<Report> = vectors
        .par_iter()
        .map(|tv| {
            let cfg = RunConfig { input: Input::Twists(tv.entries().to_vec()), ..config.clone() };
            cmd_compute(&cfg).unwrap_or_else(|e| {
                let mut r = Report::empty(format!("{:?}", tv.entries()));
                r.twists = Some(tv.entries().to_vec());
                r.error = Some(e.to_string());
                r
            })
        })
        .collect();
    if let Some(p) = out_path {
        std::fs::write(p, serde_json::to_string_pretty(&reports).expect("reports serialize"))?;
    }
    Ok(reports)
}

pub fn sweep_summary(reports: &[Report]) -> String {
    let worst = reports.iter().filter_map(|r| r.relative).fold(0.0, f64::max);
    let failed = reports.iter().filter(|r| !r.ok()).count();
    format!("{} knots, {} failed, max relative discrepancy {:.3e}", reports.len(), failed, worst)
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Compute(args) => {
            let input = if let Some(t) = args.twists {
                Input::Twists(t)
            } else if let Some(f) = args.fraction {
                match parse_fraction(&f) {
                    Ok((p, q)) => Input::Fraction(p, q),
                    Err(e) => return fail(&e),
                }
            } else {
                Input::Gluing(args.gluing.expect("clap enforces one input"))
            };
            let config = RunConfig { dump_diagram: args.dump_diagram, ..RunConfig::with_common(input, &args.common) };
            match cmd_compute(&config) {
                Ok(r) => {
                    if config.json {
                        emit(&format!("{}\n", r.to_json()));
                    } else {
                        emit(&r.text());
                    }
                    if r.ok() {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => fail(&e),
            }
        }
        Command::Sweep(args) => {
            let config = RunConfig::with_common(Input::Twists(Vec::new()), &args.common);
            match cmd_sweep(args.max_crossings as usize, args.out.as_deref(), &config) {
                Ok(reports) => {
                    if config.json {
                        emit(&format!("{}\n", serde_json::to_string_pretty(&reports).expect("reports serialize")));
                    } else {
                        for r in &reports {
                            match (r.tau, r.relative, &r.error) {
                                (Some(t), Some(rel), None) => emit(&format!(
                                    "{:<24} tau {:+.6} {:+.6}i  rel {:.2e}  {}\n",
                                    r.knot,
                                    t.re,
                                    t.im,
                                    rel,
                                    if r.ok() { "ok" } else { "FAIL" }
                                )),
                                (_, _, e) => emit(&format!("{:<24} error {}\n", r.knot, e.as_deref().unwrap_or("?"))),
                            }
                        }
                    }
                    eprintln!("{}", sweep_summary(&reports));
                    if reports.iter().all(Report::ok) {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => fail(&e),
            }
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

//! Acceptance run: one pass/fail line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use twobridge::cli::{cmd_compute, cmd_from_gluing, Input, RunConfig};
use twobridge::knot_diagram::{build_two_bridge, essential_corners, sweep_twist_vectors, TwistVector};
use twobridge::numerics::{bloch_wigner, li2, rel_pm};
use twobridge::oneloop::{
    compare, one_loop, reduce_variables, shapes_from_x, verify_hessian_identity, verify_normalizer_identity,
};
use twobridge::potential::{build_potential, critical_system, normalizers, ot_invariant, solve_geometric, SeedPolicy};
use twobridge::triangulation::{
    collapse, explicit_flattening, gluing_data, octahedral_decomposition, solve_flattening,
};

const TAU_61: C64 = C64::new(0.487465, 1.738045);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within_pm(z: C64, target: C64, tol: f64) -> (bool, f64) {
    let d = (z - target).norm().min((z + target).norm());
    (d <= tol, d)
}

/// Everything the sweep criteria need from one knot.
#[derive(Default)]
struct Instance {
    twists: Vec<i64>,
    error: Option<String>,
    relative: f64,
    counting: bool,
    predicted: i64,
    n_tets: usize,
    flattening_exact: bool,
    base_matches: bool,
    step_ratio: f64,
    hessian: f64,
    normalizer: f64,
    end_product: f64,
    flattening_swap: f64,
    row_swap: f64,
}

fn examine(tv: &TwistVector) -> Instance {
    let mut inst = Instance { twists: tv.entries().to_vec(), ..Default::default() };
    if let Err(e) = examine_into(tv, &mut inst) {
        inst.error = Some(e.to_string());
    }
    inst
}

fn examine_into(tv: &TwistVector, inst: &mut Instance) -> twobridge::Result<()> {
    let d = build_two_bridge(tv)?;
    let v = build_potential(&d.corners)?;
    let sol = solve_geometric(&critical_system(&v), &SeedPolicy::default())?;
    let norms = normalizers(&d);
    let ot = ot_invariant(&v, &norms, &sol)?;
    let oc = octahedral_decomposition(&d)?;
    let tri = collapse(&oc, &d)?;
    let gd = gluing_data(&tri, &d)?;
    let ex = explicit_flattening(&tri, &d)?;
    let corners = essential_corners(&d);
    let zs = shapes_from_x(&sol.x, &corners)?;
    let ol = one_loop(&gd, &ex.flattening, &zs)?;
    inst.relative = compare(ol.tau, ot.omega).relative;

    let n = d.n_crossings();
    inst.n_tets = tri.n_tets();
    inst.predicted = tri.tally.predicted_tets(n);
    inst.counting = tri.tally.holds(n, tri.n_tets(), tri.edges.len())
        && inst.predicted == tri.n_tets() as i64
        && tri.n_tets() == tri.edges.len()
        && tri.n_tets() == d.essential_corners().count();

    inst.flattening_exact = gd.is_flattening(&ex.flattening);
    inst.base_matches = ex.base_pairing == ex.expected_base;

    let red = reduce_variables(&gd, &zs, &tri)?;
    inst.step_ratio = red.steps.iter().map(|s| s.residual).fold(0.0, f64::max);
    inst.hessian = verify_hessian_identity(&v, &sol.x, &red, &gd, &zs, &corners).residual;
    let nc = verify_normalizer_identity(&norms, &sol.x, &ex.base, &ex.transfer, &zs, &tri, &corners);
    inst.normalizer = nc.residual;
    inst.end_product = nc.end_residual;

    let solved = solve_flattening(&gd)?;
    inst.flattening_swap = rel_pm(one_loop(&gd, &solved, &zs)?.tau, ol.tau);
    inst.row_swap = (0..gd.n)
        .filter(|&row| row != gd.replaced_row)
        .map(|row| one_loop(&gd.with_replaced_row(row), &ex.flattening, &zs).map(|o| rel_pm(o.tau, ol.tau)))
        .collect::<twobridge::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(())
}

/// Worst value of a field over the sweep, with NaN counting as failure.
fn worst(sweep: &[Instance], f: impl Fn(&Instance) -> f64) -> (f64, Vec<i64>) {
    let mut best = (0.0, Vec::new());
    for i in sweep {
        let v = f(i);
        if v.is_nan() || v > best.0 {
            best = (if v.is_nan() { f64::INFINITY } else { v }, i.twists.clone());
        }
    }
    best
}

fn sweep_check(sweep: &[Instance], tol: f64, f: impl Fn(&Instance) -> f64) -> Outcome {
    let (w, at) = worst(sweep, f);
    outcome(w <= tol, format!("worst {w:.2e} at {at:?} over {} knots", sweep.len()))
}

/// Clausen Cl2(π/3) from the period-6 pattern of sin(nπ/3).
fn clausen_pi_3() -> f64 {
    let m_max = 200_000;
    let head: f64 = (0..m_max)
        .rev()
        .map(|m| {
            let u = 6.0 * m as f64 + 3.0;
            1.0 / (u - 2.0).powi(2) + 1.0 / (u - 1.0).powi(2) - 1.0 / (u + 1.0).powi(2) - 1.0 / (u + 2.0).powi(2)
        })
        .sum();
    // Terms behave like 12/u^3, so the tail is 1/(6M)^2 up to O(M^-4).
    let tail = 1.0 / (6.0 * m_max as f64).powi(2);
    3f64.sqrt() / 2.0 * (head + tail)
}

fn main() {
    let started = Instant::now();
    let mut failures = 0;
    let mut line = |k: usize, name: &str, o: Outcome| {
        println!("[{}] criterion {k:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failures += 1;
        }
    };

    // 1
    let t = Instant::now();
    let r = cmd_compute(&RunConfig::new(Input::Twists(vec![4, 2])));
    let dt = t.elapsed();
    line(
        1,
        "6_1 Ohtsuki-Takata value",
        match r.as_ref().ok().and_then(|r| r.omega) {
            Some(w) => {
                let (ok, d) = within_pm(w, TAU_61, 1e-5);
                outcome(ok && dt < Duration::from_secs(1), format!("omega {w:.6}, off by {d:.1e}, {dt:.2?}"))
            }
            None => outcome(false, format!("{:?}", r.err())),
        },
    );

    // 2
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/six_one.json");
    let t = Instant::now();
    let r = cmd_from_gluing(&fixture, &RunConfig::new(Input::Gluing(fixture.clone())));
    let dt = t.elapsed();
    line(
        2,
        "6_1 one-loop from fixture",
        match r.as_ref().ok().and_then(|r| r.tau) {
            Some(tau) => {
                let (ok, d) = within_pm(tau, TAU_61, 1e-5);
                outcome(ok && dt < Duration::from_millis(100), format!("tau {tau:.6}, off by {d:.1e}, {dt:.2?}"))
            }
            None => outcome(false, format!("{:?}", r.err())),
        },
    );

    // 3
    let expected = [C64::new(0.895123, -1.552491), C64::new(-1.504108, -1.226851), C64::new(-0.677958, -0.157779)];
    let geo = build_two_bridge(&TwistVector::new(vec![4, 2]).unwrap())
        .and_then(|d| build_potential(&d.corners))
        .and_then(|v| solve_geometric(&critical_system(&v), &SeedPolicy::default()));
    line(
        3,
        "6_1 geometric solution",
        match geo {
            Ok(sol) => {
                let off = |conj: bool| {
                    sol.x
                        .iter()
                        .zip(&expected)
                        .map(|(x, e)| (if conj { x.conj() } else { *x } - e).norm())
                        .fold(0.0, f64::max)
                };
                let d = off(false).min(off(true));
                let ok = sol.x.len() == 3 && d <= 1e-5 && sol.residual < 1e-12;
                outcome(ok, format!("max coordinate error {d:.1e}, residual {:.1e}", sol.residual))
            }
            Err(e) => outcome(false, e.to_string()),
        },
    );

    let t = Instant::now();
    let vectors = sweep_twist_vectors(8);
    let sweep: Vec<Instance> = vectors.par_iter().map(examine).collect();
    let sweep_time = t.elapsed();
    let errors: Vec<_> = sweep.iter().filter_map(|i| i.error.as_ref().map(|e| (&i.twists, e))).collect();
    for (tw, e) in &errors {
        println!("  sweep error on {tw:?}: {e}");
    }
    let clean = errors.is_empty();

    // 4
    let mut o = sweep_check(&sweep, 1e-9, |i| if i.error.is_some() { f64::NAN } else { i.relative });
    o.pass &= clean && sweep_time < Duration::from_secs(60);
    o.detail.push_str(&format!(", {sweep_time:.2?} with all checks"));
    line(4, "tau = ±omega on the sweep", o);

    // 5
    let bad: Vec<_> = sweep.iter().filter(|i| !i.counting).map(|i| (i.twists.clone(), i.n_tets, i.predicted)).collect();
    line(5, "counting identities", outcome(clean && bad.is_empty(), format!("{} mismatches {bad:?}", bad.len())));

    // 6
    let bad: Vec<_> =
        sweep.iter().filter(|i| !(i.flattening_exact && i.base_matches)).map(|i| i.twists.clone()).collect();
    line(6, "explicit flattening", outcome(clean && bad.is_empty(), format!("{} failures {bad:?}", bad.len())));

    // 7
    let mut o = sweep_check(&sweep, 1e-9, |i| i.step_ratio);
    o.pass &= clean;
    line(7, "elimination determinant ratios", o);

    // 8
    let mut o = sweep_check(&sweep, 1e-9, |i| i.hessian);
    o.pass &= clean;
    line(8, "Hessian determinant identity", o);

    // 9
    let main = sweep_check(&sweep, 1e-9, |i| i.normalizer);
    let end = sweep_check(&sweep, 1e-9, |i| i.end_product);
    line(
        9,
        "normalizer identity",
        outcome(clean && main.pass && end.pass, format!("main {}; end product {}", main.detail, end.detail)),
    );

    // 10
    let fl = sweep_check(&sweep, 1e-9, |i| i.flattening_swap);
    let rows = sweep_check(&sweep, 1e-9, |i| i.row_swap);
    line(
        10,
        "flattening and replaced-row independence",
        outcome(clean && fl.pass && rows.pass, format!("flattening {}; rows {}", fl.detail, rows.detail)),
    );

    // 11
    let li = [
        (C64::new(0.0, 0.0), 0.0),
        (C64::new(1.0, 0.0), PI * PI / 6.0),
        (C64::new(0.5, 0.0), PI * PI / 12.0 - 2f64.ln().powi(2) / 2.0),
    ];
    let li_err = li.iter().map(|(z, v)| (li2(*z).unwrap() - v).norm()).fold(0.0, f64::max);
    let probes = [C64::new(0.3, 0.7), C64::new(-1.2, 0.4), C64::new(2.5, -1.1), C64::new(0.5, 3.0)];
    let anti = probes
        .iter()
        .map(|z| {
            let d = bloch_wigner(*z).unwrap();
            (d + bloch_wigner(z.conj()).unwrap()).abs().max((d + bloch_wigner(1.0 / z).unwrap()).abs())
        })
        .fold(0.0, f64::max);
    let cl = clausen_pi_3();
    let d_hex = bloch_wigner(C64::from_polar(1.0, PI / 3.0)).unwrap();
    let series_err = (d_hex - cl).abs();
    let vol = cmd_compute(&RunConfig::new(Input::Twists(vec![2, 2]))).ok().and_then(|r| r.volume).unwrap_or(f64::NAN);
    let vol_err = (vol - 2.029883).abs().max((vol - 2.0 * cl).abs());
    line(
        11,
        "numerics kernels",
        outcome(
            li_err <= 1e-13 && anti <= 1e-10 && series_err <= 1e-10 && vol_err <= 1e-6,
            format!("Li2 {li_err:.1e}, antisymmetry {anti:.1e}, D vs series {series_err:.1e}, 4_1 volume {vol:.7}"),
        ),
    );

    println!("acceptance: {} failing, {:.2?}", failures, started.elapsed());
    if failures > 0 {
        std::process::exit(1);
    }
}

//! Acceptance battery on the reference surface.
//!
//! Runs as a plain binary so the per-criterion lines always show up in
//! `cargo test` output. Exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schottky_gem::config::RunConfig;
use schottky_gem::gem::{select_basis, SpanningTheta};
use schottky_gem::poincare::{BersSeries, SeriesConfig, Surface};
use schottky_gem::schottky::{reference_surface, HandleParams, SchottkyParams};
use schottky_gem::suites::{FullReport, Session, Suite};
use schottky_gem::variation::{period_matrix, rauch_check};
use schottky_gem::C64;

struct Outcome {
    ok: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            ok: true,
            lines: Vec::new(),
        }
    }

    /// `value ≤ tol`
    fn below(&mut self, what: &str, value: f64, tol: f64) {
        let ok = value <= tol;
        self.ok &= ok;
        self.lines.push(format!("{what} = {value:.3e} (< {tol:e}){}", flag(ok)));
    }

    fn at_least(&mut self, what: &str, value: f64, tol: f64) {
        let ok = value >= tol;
        self.ok &= ok;
        self.lines.push(format!("{what} = {value:.3e} (>= {tol:e}){}", flag(ok)));
    }

    fn equal(&mut self, what: &str, value: usize, want: usize) {
        let ok = value == want;
        self.ok &= ok;
        self.lines.push(format!("{what} = {value} (== {want}){}", flag(ok)));
    }

    fn truth(&mut self, what: &str, ok: bool) {
        self.ok &= ok;
        self.lines.push(format!("{what}: {ok}{}", flag(ok)));
    }

    fn error(&mut self, what: &str, err: impl std::fmt::Display) {
        self.ok = false;
        self.lines.push(format!("{what}: error: {err}"));
    }

    /// A named check from a suite report, compared against `tol` here
    /// rather than against the threshold stored in the report.
    fn reported(&mut self, report: &FullReport, suite: Suite, name: &str, tol: f64) {
        let Some(s) = report.suites.iter().find(|s| s.suite == suite) else {
            return self.error(name, format!("suite {suite} missing"));
        };
        if let Some(e) = &s.error {
            return self.error(name, format!("suite {suite}: {e}"));
        }
        match s.checks.iter().find(|c| c.name == name) {
            Some(c) => self.below(name, c.value, tol),
            None => self.error(name, "check missing"),
        }
    }

    fn report_value(&mut self, report: &FullReport, suite: Suite, name: &str) -> Option<f64> {
        let v = report
            .suites
            .iter()
            .find(|s| s.suite == suite)
            .and_then(|s| s.checks.iter().find(|c| c.name == name))
            .map(|c| c.value);
        if v.is_none() {
            self.error(name, format!("missing from {suite}"));
        }
        v
    }
}

fn flag(ok: bool) -> &'static str {
    if ok {
        ""
    } else {
        "  <-- FAIL"
    }
}

fn reference_config() -> RunConfig {
    let mut cfg = RunConfig::new(reference_surface());
    cfg.n = 2;
    cfg.max_len = 10;
    cfg.samples = 3;
    cfg.h = 1e-5;
    cfg.seed = 0;
    cfg
}

fn full_run(threads: usize) -> (FullReport, f64) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let t = Instant::now();
    let report = pool.install(|| Session::new(reference_config()).unwrap().run_all(&Suite::ALL));
    (report, t.elapsed().as_secs_f64())
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let p = reference_surface();
    out.truth("S* validates", p.validate().is_valid());

    let mut round: f64 = 0.0;
    for h in p.handles() {
        match h.to_classical().and_then(|k| HandleParams::from_classical(&k)) {
            Ok(b) => {
                round = round
                    .max((b.w_plus - h.w_plus).norm())
                    .max((b.w_minus - h.w_minus).norm())
                    .max((b.rho - h.rho).norm());
            }
            Err(e) => return Outcome { ok: false, lines: vec![format!("round trip: {e}")] },
        }
    }
    out.below("classical round trip", round, 1e-10);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut sewing: f64 = 0.0;
    for h in p.handles() {
        let m = h.map().unwrap();
        for _ in 0..200 {
            let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            if (z - h.w_plus).norm() < 1e-3 {
                continue;
            }
            let lhs = (m.apply_c(z) - h.w_minus) * (z - h.w_plus);
            sewing = sewing.max((lhs - h.rho).norm());
        }
    }
    out.below("sewing identity", sewing, 1e-12);
    out
}

fn criterion_4(session: &Session) -> Outcome {
    let mut out = Outcome::new();
    match session.gem() {
        Ok(gem) => {
            let sel = gem.selection();
            out.equal("rank (g,N)=(2,2)", sel.rank, 3);
            out.at_least("gap (2,2)", sel.gap, 1e6);
        }
        Err(e) => out.error("rank (2,2)", e),
    }

    let nodes = session.config().nodes;
    let three = BersSeries::new(session.surface().clone(), 3).and_then(|b| select_basis(&SpanningTheta::new(b), nodes));
    match three {
        Ok(sel) => {
            out.equal("rank (g,N)=(2,3)", sel.rank, 5);
            out.at_least("gap (2,3)", sel.gap, 1e6);
        }
        Err(e) => out.error("rank (2,3)", e),
    }

    let genus3 = SchottkyParams::new(vec![
        HandleParams::new(c(-6.0, 0.0), c(-2.0, 0.0), c(0.09, 0.0)),
        HandleParams::new(c(2.0, 0.0), c(6.0, 0.0), c(0.09, 0.0)),
        HandleParams::new(c(0.0, -4.0), c(0.0, 4.0), c(0.09, 0.0)),
    ])
    .and_then(|p| Surface::new(p, SeriesConfig::default().with_max_len(7)))
    .and_then(|s| BersSeries::new(s, 2))
    .and_then(|b| select_basis(&SpanningTheta::new(b), nodes));
    match genus3 {
        Ok(sel) => {
            out.equal("rank (g,N)=(3,2) at L=7", sel.rank, 6);
            out.at_least("gap (3,2)", sel.gap, 1e6);
        }
        Err(e) => out.error("rank (3,2)", e),
    }
    out
}

fn criterion_8(report: &FullReport) -> Outcome {
    let mut out = Outcome::new();
    let (wp, wm, rho) = (c(-2.0, 0.0), c(2.0, 0.0), c(0.25, 0.0));
    // fixed points of z -> w_- + rho/(z - w_+) solve (z - w_-)(z - w_+) = rho
    let disc = ((wp + wm) * (wp + wm) - 4.0 * (wp * wm - rho)).sqrt();
    let q = [(wp + wm + disc) / 2.0, (wp + wm - disc) / 2.0]
        .into_iter()
        .map(|z| -rho / ((z - wp) * (z - wp)))
        .min_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    let want = q.ln() / c(0.0, 2.0 * PI);
    let omega = SchottkyParams::new(vec![HandleParams::new(wp, wm, rho)])
        .and_then(|p| Surface::new(p, SeriesConfig::default().with_max_len(20)))
        .and_then(|s| period_matrix(&s));
    match omega {
        Ok(pm) => {
            let d = pm.omega[0][0] - want;
            out.below("genus one |Omega - log q/2pi i| mod Z", c(d.re - d.re.round(), d.im).norm(), 1e-8);
        }
        Err(e) => out.error("genus one", e),
    }
    out.reported(report, Suite::Rauch, "omega_symmetry_error", 1e-7);
    out.reported(report, Suite::Rauch, "omega_transport_error", 1e-6);
    out
}

fn criterion_9(session: &Session, report: &FullReport) -> Outcome {
    let mut out = Outcome::new();
    out.reported(report, Suite::Rauch, "rauch_max_rel_error", 1e-4);
    out.reported(report, Suite::Rauch, "gem_shift_invariance_max_rel", 1e-6);
    let xs = session.x_samples();
    let errs = session
        .gem2()
        .and_then(|gem| Ok((rauch_check(gem, &xs, 0.02)?, rauch_check(gem, &xs, 0.01)?)));
    match errs {
        Ok((coarse, fine)) => {
            let ratio = coarse.max_rel_error / fine.max_rel_error;
            out.lines.push(format!(
                "error at h=0.02: {:.3e}, at h=0.01: {:.3e}",
                coarse.max_rel_error, fine.max_rel_error
            ));
            let ok = (3.0..=5.0).contains(&ratio);
            out.ok &= ok;
            out.lines.push(format!("halving ratio = {ratio:.3} (in [3, 5]){}", flag(ok)));
        }
        Err(e) => out.error("O(h^2) decay", e),
    }
    out
}

fn main() -> ExitCode {
    let total = Instant::now();
    let (report, wide_time) = full_run(4);
    let (serial, serial_time) = full_run(1);
    let session = Session::new(reference_config()).unwrap();

    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "Schottky validity and conversions", criterion_1()));

    let mut o = Outcome::new();
    o.reported(&report, Suite::Cocycle, "cocycle_law_max_rel", 1e-10);
    o.reported(&report, Suite::Cocycle, "inverse_rule_max_rel", 1e-10);
    o.reported(&report, Suite::Coboundary, "canonical_decomposition_max_rel", 1e-10);
    o.reported(&report, Suite::Coboundary, "coboundary_definition_max_rel", 1e-10);
    results.push((2, "cocycle algebra", o));

    let mut o = Outcome::new();
    o.reported(&report, Suite::Quasiperiod, "bers_x_periodicity_max_rel", 1e-6);
    o.reported(&report, Suite::Residue, "bers_residue_error", 1e-8);
    if let Some(v) = o.report_value(&report, Suite::Residue, "bers_shells_monotone") {
        o.truth("shell decay monotone", v == 1.0);
    }
    results.push((3, "Bers series structure", o));

    results.push((4, "dimension counts", criterion_4(&session)));

    let mut o = Outcome::new();
    o.reported(&report, Suite::Canonical, "duality_max_error", 1e-8);
    o.reported(&report, Suite::Canonical, "dual_coboundary_pairing_max", 1e-8);
    o.reported(&report, Suite::Coboundary, "spanning_coboundary_pairing_max", 1e-8);
    results.push((5, "duality and annihilation", o));

    let mut o = Outcome::new();
    o.reported(&report, Suite::Canonical, "canonical_moment_max", 1e-8);
    o.reported(&report, Suite::Gemcont, "global_sum_in_domain_max", 1e-8);
    o.reported(&report, Suite::Canonical, "quasi_period_match_on_J", 1e-7);
    o.reported(&report, Suite::Canonical, "quasi_period_off_J", 1e-7);
    o.reported(&report, Suite::Gemcont, "group_element_pairing_max_rel", 1e-7);
    results.push((6, "canonical GEM", o));

    let mut o = Outcome::new();
    o.reported(&report, Suite::Residue, "third_kind_residue_y_error", 1e-8);
    o.reported(&report, Suite::Residue, "third_kind_residue_0_error", 1e-8);
    o.reported(&report, Suite::NuNorm, "nu_base_point_max_diff", 1e-8);
    o.reported(&report, Suite::NuNorm, "nu_normalization_max_error", 1e-8);
    results.push((7, "third kind and nu", o));

    results.push((8, "period matrix", criterion_8(&report)));
    results.push((9, "Rauch", criterion_9(&session, &report)));

    let mut o = Outcome::new();
    o.reported(&report, Suite::Rauch, "derivative_identity_max_rel", 1e-6);
    o.reported(&report, Suite::Rauch, "puncture_covariance_max_rel", 1e-5);
    results.push((10, "punctured operator", o));

    let mut o = Outcome::new();
    o.truth("payloads identical with 4 and 1 workers", report.payload() == serial.payload());
    results.push((11, "determinism", o));

    let mut all = true;
    for (n, name, out) in &results {
        all &= out.ok;
        println!("criterion {n:>2} {}: {name}", if out.ok { "PASS" } else { "FAIL" });
        for l in &out.lines {
            println!("    {l}");
        }
    }
    let slowest = report
        .suites
        .iter()
        .map(|s| (s.wall_time_s, s.suite))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    if let Some((t, s)) = slowest {
        println!("timing: slowest suite {s} {t:.1} s; battery {wide_time:.1} s (4 workers), {serial_time:.1} s (1 worker)");
    }
    println!("acceptance total {:.1} s", total.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

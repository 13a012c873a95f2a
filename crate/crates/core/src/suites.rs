//! Property suites: each runs a family of numerical checks against the
//! tolerances in a [`RunConfig`] and reports every residual.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::contour::{weighted_sum, CircleContour, HandleContours};
use crate::eichler::{node_radius, Cocycle, PolyForm};
use crate::error::{Error, Result};
use crate::gem::{dimension, quasi_periods, CanonicalGem, QuasiProbe, SpanningTheta};
use crate::moebius::Moebius;
use crate::poincare::{BersSeries, NuForms, Surface, ThirdKind, TwoPointForm};
use crate::schottky::{GroupWord, SchottkyParams};
use crate::variation::{
    default_samples, moduli_gradient, nabla_punctured_apply, omega_function, period_matrix,
    rauch_check, sl2_apply, sl2_apply_fixed_points, PathPlan, PeriodMatrix,
};
use crate::{C64, TWO_PI_I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Cocycle,
    Coboundary,
    Residue,
    Quasiperiod,
    Canonical,
    Gemcont,
    NuNorm,
    Rauch,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Cocycle,
        Suite::Coboundary,
        Suite::Residue,
        Suite::Quasiperiod,
        Suite::Canonical,
        Suite::Gemcont,
        Suite::NuNorm,
        Suite::Rauch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cocycle => "cocycle",
            Suite::Coboundary => "coboundary",
            Suite::Residue => "residue",
            Suite::Quasiperiod => "quasiperiod",
            Suite::Canonical => "canonical",
            Suite::Gemcont => "gemcont",
            Suite::NuNorm => "nu-norm",
            Suite::Rauch => "rauch",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How a check's value is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// `value ≤ threshold`
    Max,
    /// `value ≥ threshold`
    Min,
    /// `value == threshold`
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub notes: Vec<String>,
    pub seed: u64,
    pub wall_time_s: f64,
    pub config: RunConfig,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// The report as JSON with the timing field removed.
    pub fn payload(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(m) = v.as_object_mut() {
            m.remove("wall_time_s");
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullReport {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl FullReport {
    pub fn payload(&self) -> serde_json::Value {
        serde_json::json!({
            "passed": self.passed,
            "suites": self.suites.iter().map(SuiteReport::payload).collect::<Vec<_>>(),
        })
    }
}

#[derive(Default)]
struct Recorder {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Recorder {
    fn push(&mut self, name: impl Into<String>, value: f64, threshold: f64, bound: Bound) {
        let passed = match bound {
            Bound::Max => value <= threshold,
            Bound::Min => value >= threshold,
            Bound::Equal => value == threshold,
        };
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold,
            bound,
            passed,
        });
    }

    fn max(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.push(name, value, tol, Bound::Max);
    }

    fn min(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.push(name, value, tol, Bound::Min);
    }

    fn equal(&mut self, name: impl Into<String>, value: f64, expected: f64) {
        self.push(name, value, expected, Bound::Equal);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn cached<T>(cell: &OnceLock<std::result::Result<T, String>>, f: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(|| f().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Dependency(e.clone()))
}

/// GEM values and dual-basis values at the pairing nodes, shared by the
/// `canonical` and `gemcont` suites.
pub struct GemSamples {
    pub contours: HandleContours,
    /// `y`-grid in the fundamental domain followed by the points of
    /// [`inner_points`].
    pub ys: Vec<C64>,
    pub grid_len: usize,
    pub psi: Vec<Vec<C64>>,
    pub dual: Vec<Vec<C64>>,
}

/// Shared state of one run: the surface and lazily built forms.
pub struct Session {
    cfg: RunConfig,
    surface: Surface,
    bers: OnceLock<std::result::Result<BersSeries, String>>,
    gem: OnceLock<std::result::Result<CanonicalGem, String>>,
    gem2: OnceLock<std::result::Result<CanonicalGem, String>>,
    samples: OnceLock<std::result::Result<GemSamples, String>>,
}

impl Session {
    /// Fails (as a configuration problem) when the surface is invalid or its
    /// words cannot be enumerated.
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.check()?;
        let surface = cfg.build_surface()?;
        Ok(Self {
            cfg,
            surface,
            bers: OnceLock::new(),
            gem: OnceLock::new(),
            gem2: OnceLock::new(),
            samples: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn bers(&self) -> Result<&BersSeries> {
        cached(&self.bers, || BersSeries::new(self.surface.clone(), self.cfg.n))
    }

    pub fn gem(&self) -> Result<&CanonicalGem> {
        cached(&self.gem, || {
            CanonicalGem::build(self.surface.clone(), self.cfg.n, &self.cfg.gem_options())
        })
    }

    /// The weight-two canonical GEM used by moduli variation.
    pub fn gem2(&self) -> Result<&CanonicalGem> {
        if self.cfg.n == 2 {
            return self.gem();
        }
        cached(&self.gem2, || {
            let opts = crate::gem::GemOptions {
                j_override: None,
                ..self.cfg.gem_options()
            };
            CanonicalGem::build(self.surface.clone(), 2, &opts)
        })
    }

    pub fn gem_samples(&self) -> Result<&GemSamples> {
        cached(&self.samples, || {
            let gem = self.gem()?;
            let contours = HandleContours::new(self.surface.params(), self.cfg.nodes)?;
            let mut ys = y_grid(&self.surface, 5);
            let grid_len = ys.len();
            ys.extend(inner_points(self.surface.params()));
            let rows: Vec<(Vec<C64>, Vec<C64>)> = contours
                .nodes
                .par_iter()
                .map(|n| gem.values_and_dual(n.z, &ys))
                .collect::<Result<_>>()?;
            let (psi, dual) = rows.into_iter().unzip();
            Ok(GemSamples {
                contours,
                ys,
                grid_len,
                psi,
                dual,
            })
        })
    }

    pub fn x_samples(&self) -> Vec<C64> {
        default_samples(&self.surface, self.cfg.samples)
    }

    /// Punctures from the config, or one default point.
    pub fn punctures(&self) -> Vec<C64> {
        if self.cfg.punctures.is_empty() {
            vec![y_grid(&self.surface, 7)[3]]
        } else {
            self.cfg.punctures.clone()
        }
    }

    pub fn run(&self, suite: Suite) -> SuiteReport {
        let start = Instant::now();
        let mut rec = Recorder::default();
        let outcome = match suite {
            Suite::Cocycle => cocycle(self, &mut rec),
            Suite::Coboundary => coboundary(self, &mut rec),
            Suite::Residue => residue(self, &mut rec),
            Suite::Quasiperiod => quasiperiod(self, &mut rec),
            Suite::Canonical => canonical(self, &mut rec),
            Suite::Gemcont => gemcont(self, &mut rec),
            Suite::NuNorm => nu_norm(self, &mut rec),
            Suite::Rauch => rauch(self, &mut rec),
        };
        let error = outcome.err().map(|e| e.to_string());
        let passed = error.is_none() && rec.checks.iter().all(|c| c.passed);
        SuiteReport {
            suite,
            passed,
            checks: rec.checks,
            error,
            notes: rec.notes,
            seed: self.cfg.seed,
            wall_time_s: start.elapsed().as_secs_f64(),
            config: self.cfg.clone(),
        }
    }

    pub fn run_all(&self, suites: &[Suite]) -> FullReport {
        let suites: Vec<SuiteReport> = suites.iter().map(|&s| self.run(s)).collect();
        FullReport {
            passed: suites.iter().all(|s| s.passed),
            suites,
        }
    }
}

/// `count` points on a circle of radius `0.35·clearance` around the probe
/// point.
pub fn y_grid(surface: &Surface, count: usize) -> Vec<C64> {
    let c = surface.probe();
    let r = 0.35 * surface.params().clearance(c);
    (0..count)
        .map(|k| c + C64::from_polar(r, 0.3 + 2.0 * PI * k as f64 / count as f64))
        .collect()
}

/// One point inside `Δ_1` and one inside `Δ_{-g}`.
pub fn inner_points(p: &SchottkyParams) -> Vec<C64> {
    let d1 = p.disc(1);
    let dg = p.disc(-(p.genus() as i32));
    vec![
        d1.center + C64::from_polar(0.5 * d1.radius, 0.7),
        dg.center + C64::from_polar(0.3 * dg.radius, -1.0),
    ]
}

fn random_word(rng: &mut ChaCha8Rng, genus: usize, max_len: usize) -> GroupWord {
    let len = rng.gen_range(1..=max_len);
    let mut w: Vec<i32> = Vec::with_capacity(len);
    while w.len() < len {
        let a = rng.gen_range(1..=genus as i32);
        let l = if rng.gen_bool(0.5) { a } else { -a };
        if w.last() != Some(&-l) {
            w.push(l);
        }
    }
    GroupWord(w)
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> PolyForm {
    let coeffs: Vec<C64> = (0..2 * n - 1)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    PolyForm::new(n, &coeffs).expect("2N-1 coefficients")
}

fn monomials(n: usize) -> Vec<PolyForm> {
    (0..2 * n - 1)
        .map(|k| PolyForm::monomial(n, k).expect("k ≤ 2N-2"))
        .collect()
}

fn max_norm(it: impl IntoIterator<Item = C64>) -> f64 {
    it.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn cocycle(s: &Session, rec: &mut Recorder) -> Result<()> {
    let p = s.surface.params();
    let n = s.cfg.n;
    let tol = &s.cfg.tolerances;
    let radius = node_radius(p);
    let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.seed);
    let xi = Cocycle::from_generator_values(p, (0..p.genus()).map(|_| random_poly(&mut rng, n)).collect())?;
    let (mut law, mut inverse, mut action): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let w1 = random_word(&mut rng, p.genus(), 4);
        let w2 = random_word(&mut rng, p.genus(), 4);
        let (m1, m2) = (p.word_map(&w1), p.word_map(&w2));
        let prod = GroupWord::reduced(w1.letters().iter().chain(w2.letters()).copied());
        let (x1, x2) = (xi.eval(&w1)?, xi.eval(&w2)?);
        let lhs = xi.eval(&prod)?;
        let rhs = &x1.pullback(&m2, radius)? + &x2;
        let scale = x1.pullback_scale(&m2).max(x2.max_abs()).max(lhs.max_abs()).max(1.0);
        law = law.max(lhs.coeff_distance(&rhs) / scale);

        let x1_inv = xi.eval(&w1.inverse())?;
        let back = &x1.pullback(&m1.inverse(), radius)? + &x1_inv;
        let scale = x1.pullback_scale(&m1.inverse()).max(x1_inv.max_abs()).max(1.0);
        inverse = inverse.max(back.max_abs() / scale);

        let poly = random_poly(&mut rng, n);
        let once = poly.pullback(&p.word_map(&prod), radius)?;
        let first = poly.pullback(&m1, radius)?;
        let twice = first.pullback(&m2, radius)?;
        let scale = first.pullback_scale(&m2).max(once.max_abs()).max(1.0);
        action = action.max(once.coeff_distance(&twice) / scale);
    }
    rec.max("cocycle_law_max_rel", law, tol.cocycle);
    rec.max("inverse_rule_max_rel", inverse, tol.cocycle);
    rec.max("pullback_action_max_rel", action, tol.pullback_law);
    Ok(())
}

fn coboundary(s: &Session, rec: &mut Recorder) -> Result<()> {
    let p = s.surface.params();
    let n = s.cfg.n;
    let tol = &s.cfg.tolerances;
    let radius = node_radius(p);
    let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.seed ^ 0xC0B0);
    let words: Vec<GroupWord> = (0..20).map(|_| random_word(&mut rng, p.genus(), 3)).collect();
    let mut decomposition: f64 = 0.0;
    let mut definition: f64 = 0.0;
    for poly in monomials(n) {
        let xi = Cocycle::coboundary(p, &poly)?;
        let recon = Cocycle::from_canonical_coeffs(p, n, &xi.canonical_coeffs(p))?;
        for w in &words {
            let (v, scale) = xi.eval_with_scale(w)?;
            decomposition = decomposition.max(v.rel_distance(&recon.eval(w)?));
            let direct = &poly.pullback(&p.word_map(w), radius)? - &poly;
            definition = definition.max(v.coeff_distance(&direct) / scale.max(1.0));
        }
    }
    rec.max("canonical_decomposition_max_rel", decomposition, tol.coboundary_decomposition);
    rec.max("coboundary_definition_max_rel", definition, tol.coboundary_decomposition);

    let span = SpanningTheta::new(s.bers()?.clone());
    let contours = HandleContours::new(p, s.cfg.nodes)?;
    let values: Vec<Vec<C64>> = contours
        .nodes
        .par_iter()
        .map(|node| span.values(node.z))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for poly in monomials(n) {
        let xi = Cocycle::coboundary(p, &poly)?;
        for m in 0..span.count() {
            let col: Vec<C64> = values.iter().map(|v| v[m]).collect();
            worst = worst.max(contours.pairing(&col, &xi).norm());
        }
    }
    rec.max("spanning_coboundary_pairing_max", worst, tol.annihilation);
    Ok(())
}

fn residue_of<F: Fn(C64) -> Result<C64> + Sync>(center: C64, radius: f64, f: F) -> Result<C64> {
    Ok(CircleContour::new(center, radius, 64)?.integral(f)? / TWO_PI_I)
}

fn residue(s: &Session, rec: &mut Recorder) -> Result<()> {
    let tol = &s.cfg.tolerances;
    let bers = s.bers()?;
    let shells = bers.certify()?;
    rec.max("bers_last_shell_relative", shells.last_relative, s.cfg.shell_tol);
    rec.equal("bers_shells_monotone", shells.monotone as u8 as f64, 1.0);
    let y = y_grid(&s.surface, 5)[0];
    let r = residue_of(y, 0.05, |x| bers.value(x, y))?;
    rec.max("bers_residue_error", (r - 1.0).norm(), tol.residue);

    if s.surface.params().in_fundamental_domain(C64::new(0.0, 0.0)) && y.norm() > 0.2 {
        let third = ThirdKind::new(s.surface.clone())?;
        let at_y = residue_of(y, 0.05, |x| third.value(x, y))?;
        let at_0 = residue_of(C64::new(0.0, 0.0), 0.05, |x| third.value(x, y))?;
        rec.max("third_kind_residue_y_error", (at_y - 1.0).norm(), tol.residue);
        rec.max("third_kind_residue_0_error", (at_0 + 1.0).norm(), tol.residue);
    } else {
        rec.note("third-kind residues skipped: 0 is not in the fundamental domain");
    }
    Ok(())
}

fn quasiperiod(s: &Session, rec: &mut Recorder) -> Result<()> {
    let tol = &s.cfg.tolerances;
    let n = s.cfg.n as i32;
    let p = s.surface.params();
    let bers = s.bers()?;
    let xs = s.x_samples();
    let y = y_grid(&s.surface, 5)[1];
    let g1 = p.generator(1);

    let mut periodic: f64 = 0.0;
    for &x in &xs {
        let (gx, d) = g1.apply_with_deriv(x);
        let base = bers.value(x, y)?;
        let moved = bers.value(gx, y)? * d.powi(n);
        periodic = periodic.max((moved - base).norm() / base.norm().max(1.0));
    }
    rec.max("bers_x_periodicity_max_rel", periodic, tol.periodicity);

    let probe = QuasiProbe::new(&s.surface, s.cfg.n);
    let mut fit: f64 = 0.0;
    for &x in &xs {
        for q in quasi_periods(bers, &probe, x)? {
            fit = fit.max(q.residual);
        }
    }
    rec.max("bers_quasi_period_fit_residual", fit, tol.quasi_period_fit);

    let span = SpanningTheta::new(bers.clone());
    let small = CircleContour::new(xs[0], 0.1 * p.clearance(xs[0]), 64)?;
    let nodes = small.nodes();
    let vals: Vec<Vec<C64>> = nodes.par_iter().map(|nd| span.values(nd.z)).collect::<Result<_>>()?;
    let holo = (0..span.count())
        .map(|m| {
            let col: Vec<C64> = vals.iter().map(|v| v[m]).collect();
            weighted_sum(&nodes, &col).norm()
        })
        .fold(0.0, f64::max);
    rec.max("spanning_small_circle_integral_max", holo, tol.holomorphy);

    let mut cov: f64 = 0.0;
    for &x in &xs {
        let (gx, d) = g1.apply_with_deriv(x);
        let here = span.values(x)?;
        let there = span.values(gx)?;
        let scale = max_norm(here.iter().copied()).max(1.0);
        for (h, t) in here.iter().zip(&there) {
            cov = cov.max((t * d.powi(n) - h).norm() / scale);
        }
    }
    rec.max("spanning_covariance_max_rel", cov, tol.periodicity);
    Ok(())
}

fn canonical(s: &Session, rec: &mut Recorder) -> Result<()> {
    let tol = &s.cfg.tolerances;
    let p = s.surface.params();
    let n = s.cfg.n;
    let gem = s.gem()?;
    let sel = gem.selection();
    let d = dimension(p.genus(), n);
    rec.equal("pairing_rank", sel.rank as f64, d as f64);
    rec.min("singular_value_gap", sel.gap, tol.rank_gap);
    rec.note(format!("J = {:?}", sel.j));

    let smp = s.gem_samples()?;
    let j = gem.j();
    let mut duality: f64 = 0.0;
    for (col, &(b, l)) in j.iter().enumerate() {
        let xi = Cocycle::canonical(p, n, b, l)?;
        for row in 0..j.len() {
            let vals: Vec<C64> = smp.dual.iter().map(|v| v[row]).collect();
            let want = if row == col { 1.0 } else { 0.0 };
            duality = duality.max((smp.contours.pairing(&vals, &xi) - want).norm());
        }
    }
    rec.max("duality_max_error", duality, tol.duality);

    let mut annihilation: f64 = 0.0;
    for poly in monomials(n) {
        let xi = Cocycle::coboundary(p, &poly)?;
        for row in 0..j.len() {
            let vals: Vec<C64> = smp.dual.iter().map(|v| v[row]).collect();
            annihilation = annihilation.max(smp.contours.pairing(&vals, &xi).norm());
        }
    }
    rec.max("dual_coboundary_pairing_max", annihilation, tol.annihilation);

    let mut normalization: f64 = 0.0;
    for &(b, l) in j {
        for k in 0..smp.grid_len {
            let vals: Vec<C64> = smp.psi.iter().map(|v| v[k]).collect();
            normalization = normalization.max(smp.contours.moment(&vals, b, l).norm());
        }
    }
    rec.max("canonical_moment_max", normalization, tol.normalization);

    let mut matched: f64 = 0.0;
    let mut off: f64 = 0.0;
    for &x in &s.x_samples() {
        let dual = gem.dual_values(x)?;
        let scale = max_norm(dual.iter().copied()).max(1.0);
        for q in quasi_periods(gem, gem.probe(), x)? {
            for (k, c) in q.coeffs.iter().enumerate() {
                match gem.j_position(q.a, k) {
                    Some(pos) => matched = matched.max((c + dual[pos]).norm() / scale),
                    None => off = off.max(c.norm() / scale),
                }
            }
        }
    }
    rec.max("quasi_period_match_on_J", matched, tol.quasi_period_match);
    rec.max("quasi_period_off_J", off, tol.quasi_period_match);

    let y = smp.ys[0];
    let r = residue_of(y, 0.05, |x| gem.value(x, y))?;
    rec.max("canonical_residue_error", (r - 1.0).norm(), tol.residue);

    let dim = gem.family_dimension();
    let expected = (2 * n - 1) * d;
    let exact = gem.shifted(&vec![C64::new(0.0, 0.0); dim]).is_ok()
        && gem.shifted(&vec![C64::new(0.0, 0.0); dim - 1]).is_err()
        && gem.shifted(&vec![C64::new(0.0, 0.0); dim + 1]).is_err();
    rec.equal("gem_family_dimension", dim as f64, expected as f64);
    rec.equal("gem_family_parameterization", exact as u8 as f64, 1.0);
    Ok(())
}

fn gemcont(s: &Session, rec: &mut Recorder) -> Result<()> {
    let tol = &s.cfg.tolerances;
    let p = s.surface.params();
    let n = s.cfg.n;
    let gem = s.gem()?;
    let smp = s.gem_samples()?;
    let mut global: f64 = 0.0;
    let mut element: f64 = 0.0;
    for &(a, k) in gem.j() {
        let xi = Cocycle::canonical(p, n, a, k)?;
        for (i, &y) in smp.ys.iter().enumerate() {
            let vals: Vec<C64> = smp.psi.iter().map(|v| v[i]).collect();
            let got = smp.contours.pairing(&vals, &xi);
            if i < smp.grid_len {
                global = global.max(got.norm());
            } else {
                let (lambda, _) = p.reduce(y)?;
                let want = xi.eval(&lambda)?.eval(y);
                element = element.max((got - want).norm() / want.norm().max(1.0));
            }
        }
    }
    rec.max("global_sum_in_domain_max", global, tol.global_sum);
    rec.max("group_element_pairing_max_rel", element, tol.group_element);
    Ok(())
}

fn nu_norm(s: &Session, rec: &mut Recorder) -> Result<()> {
    let tol = &s.cfg.tolerances;
    let p = s.surface.params();
    let g = p.genus();
    let nu = NuForms::new(s.surface.clone())?;
    let contours = HandleContours::new(p, s.cfg.nodes)?;
    let vals: Vec<Vec<C64>> = contours.nodes.par_iter().map(|nd| nu.values(nd.z)).collect::<Result<_>>()?;
    let mut norm: f64 = 0.0;
    for b in 1..=g {
        for a in 0..g {
            let col: Vec<C64> = vals.iter().map(|v| v[a]).collect();
            let want = if a + 1 == b { 1.0 } else { 0.0 };
            norm = norm.max((contours.moment(&col, b, 0) - want).norm());
        }
    }
    rec.max("nu_normalization_max_error", norm, tol.nu_normalization);

    let c = s.surface.probe();
    let other = NuForms::with_base(s.surface.clone(), c + C64::from_polar(0.4 * p.clearance(c), 2.0))?;
    let xs = default_samples(&s.surface, 10);
    let mut base: f64 = 0.0;
    for &x in &xs {
        let (u, v) = (nu.values(x)?, other.values(x)?);
        base = base.max(max_norm(u.iter().zip(&v).map(|(a, b)| a - b)));
    }
    rec.max("nu_base_point_max_diff", base, tol.base_point);

    let small = CircleContour::new(xs[1], 0.1 * p.clearance(xs[1]), 64)?;
    let nodes = small.nodes();
    let sv: Vec<Vec<C64>> = nodes.par_iter().map(|nd| nu.values(nd.z)).collect::<Result<_>>()?;
    let holo = (0..g)
        .map(|a| {
            let col: Vec<C64> = sv.iter().map(|v| v[a]).collect();
            weighted_sum(&nodes, &col).norm()
        })
        .fold(0.0, f64::max);
    rec.max("nu_small_circle_integral_max", holo, tol.holomorphy);
    Ok(())
}

/// Distance with real parts compared modulo integers.
pub fn distance_mod_integers(a: C64, b: C64) -> f64 {
    let d = a - b;
    C64::new(d.re - d.re.round(), d.im).norm()
}

/// A fixed Möbius map used for transport-invariance checks.
pub fn transport_map() -> Moebius {
    Moebius::new(
        C64::new(1.1, 0.2),
        C64::new(0.3, -0.4),
        C64::new(0.01, 0.02),
        C64::new(0.95, -0.1),
    )
    .expect("non-degenerate")
}

/// Fixed coefficients for the GEM-shift comparison: `(2N-1)·d` values.
pub fn shift_coefficients(len: usize) -> Vec<C64> {
    (0..len)
        .map(|k| C64::from_polar(0.1 * (1 + k % 5) as f64, 0.9 * k as f64))
        .collect()
}

fn omega_diff(a: &PeriodMatrix, b: &PeriodMatrix) -> f64 {
    a.flat()
        .iter()
        .zip(b.flat())
        .map(|(u, v)| distance_mod_integers(*u, v))
        .fold(0.0, f64::max)
}

fn rauch(s: &Session, rec: &mut Recorder) -> Result<()> {
    let tol = &s.cfg.tolerances;
    let p = s.surface.params();
    let g = p.genus();
    let h = s.cfg.h;

    let pm = period_matrix(&s.surface)?;
    rec.max("omega_symmetry_error", pm.symmetry_error, tol.symmetry);
    if g == 1 {
        let q = p.handle(1).to_classical()?.q;
        let want = q.ln() / TWO_PI_I;
        rec.max("genus_one_log_q_error", distance_mod_integers(pm.omega[0][0], want), tol.genus_one);
    }
    let moved = s.surface.with_params(p.transport(&transport_map())?)?;
    rec.max("omega_transport_error", omega_diff(&pm, &period_matrix(&moved)?), tol.transport);

    let plan = PathPlan::new(p)?;
    let omega = omega_function(&s.surface, &plan);
    let mut lp: f64 = 0.0;
    for poly in monomials(2) {
        lp = lp.max(max_norm(sl2_apply(p, &poly, &omega, h)?));
    }
    rec.max("sl2_annihilates_omega_max", lp, tol.sl2);
    let poly = PolyForm::new(2, &[C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.7, 0.0)])?;
    let by_cocycle = sl2_apply(p, &poly, &omega, h)?;
    let by_points = sl2_apply_fixed_points(p, &poly, &omega, h)?;
    rec.max(
        "sl2_two_forms_max_diff",
        max_norm(by_cocycle.iter().zip(&by_points).map(|(a, b)| a - b)),
        tol.sl2,
    );

    // derivative identity on random words
    let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.seed ^ 0xD43);
    let words: Vec<GroupWord> = (0..5).map(|_| random_word(&mut rng, g, 3)).collect();
    let z = s.x_samples()[0];
    let images = |q: &SchottkyParams| Ok(words.iter().map(|w| q.word_map(w).apply_c(z)).collect());
    let grad = moduli_gradient(p, &images, h)?;
    let mut ident: f64 = 0.0;
    for a in 1..=g {
        for l in 0..3 {
            let xi = Cocycle::canonical(p, 2, a, l)?;
            for (i, w) in words.iter().enumerate() {
                let want = -xi.eval(w)?.eval(z) * p.word_map(w).deriv(z)?;
                let got = grad.values[a - 1][l][i];
                ident = ident.max((got - want).norm() / want.norm().max(1.0));
            }
        }
    }
    rec.max("derivative_identity_max_rel", ident, tol.derivative_identity);

    let gem = s.gem2()?;
    let xs = s.x_samples();
    let report = rauch_check(gem, &xs, h)?;
    rec.max("rauch_max_rel_error", report.max_rel_error, tol.rauch);
    let shifted = gem.shifted(&shift_coefficients(gem.family_dimension()))?;
    let other = rauch_check(&shifted, &xs, h)?;
    let mut inv: f64 = 0.0;
    for (u, v) in report.samples.iter().zip(&other.samples) {
        for (a, b) in u.lhs.iter().zip(&v.lhs) {
            inv = inv.max((a - b).norm() / a.norm());
        }
    }
    rec.max("gem_shift_invariance_max_rel", inv, tol.gem_invariance);

    let ys = s.punctures();
    let x = xs[0];
    let mut cov: f64 = 0.0;
    for a in 1..=g as i32 {
        for k in 0..ys.len() {
            let f = move |q: &SchottkyParams, y: &[C64]| Ok(q.generator(a).apply_c(y[k]));
            let got = nabla_punctured_apply(gem, &ys, &f, x, h)?;
            let want = gem.value(x, p.generator(a).apply_c(ys[k]))?;
            cov = cov.max((got - want).norm() / want.norm());
        }
    }
    rec.max("puncture_covariance_max_rel", cov, tol.covariance);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::reference_surface;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn modulo_integer_distance() {
        assert!(distance_mod_integers(C64::new(0.5, 1.0), C64::new(-0.5, 1.0)) < 1e-15);
        assert!((distance_mod_integers(C64::new(0.25, 0.0), C64::new(0.0, 0.0)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cocycle_suite_passes_on_reference() {
        let s = Session::new(RunConfig::new(reference_surface())).unwrap();
        let r = s.run(Suite::Cocycle);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.checks.len(), 3);
    }
}

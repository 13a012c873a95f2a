//! Truncated Poincaré series over a Schottky group: the Bers kernel, the
//! differential of the third kind and the normalized holomorphic 1-forms.
//!
//! Every series is a sum over the words of a [`WordTree`]. For a point `x`
//! the orbit `γx` and derivatives `γ'x` are generated once, shell by shell,
//! and then reused for any number of second arguments `y`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schottky::{GroupWord, SchottkyParams, WordTree, DEFAULT_WORD_CAP};
use crate::sum::KahanSum;
use crate::C64;

/// `|γx - y|` below this is reported as a pole.
pub const POLE_TOL: f64 = 1e-12;
/// Limit points closer than this are considered equal.
pub const LIMIT_POINT_SEPARATION: f64 = 1e-6;
/// Relative distance below which an orbit point is taken to coincide with a
/// limit point.
const LIMIT_ROUNDING: f64 = 8.0 * f64::EPSILON;
/// Longest word scanned for limit points.
pub const LIMIT_POINT_MAX_LEN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesConfig {
    /// Word-length truncation `L`.
    pub max_len: usize,
    /// Certified runs need the last shell below this, relative to the
    /// largest shell.
    pub shell_tol: f64,
    pub cap: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            max_len: 10,
            shell_tol: 1e-12,
            cap: DEFAULT_WORD_CAP,
        }
    }
}

impl SeriesConfig {
    pub fn with_max_len(self, max_len: usize) -> Self {
        Self { max_len, ..self }
    }
}

/// A valid surface with its truncated word tree and a probe point in the
/// fundamental domain.
#[derive(Debug, Clone)]
pub struct Surface {
    params: SchottkyParams,
    tree: Arc<WordTree>,
    cfg: SeriesConfig,
    probe: C64,
}

/// Images `γx` and derivatives `γ'x` of one point, in word-tree order.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub img: Vec<C64>,
    pub der: Vec<C64>,
}

impl Surface {
    pub fn new(params: SchottkyParams, cfg: SeriesConfig) -> Result<Self> {
        let report = params.validate();
        if !report.is_valid() {
            return Err(Error::InvalidParams(report));
        }
        let tree = Arc::new(WordTree::new(params.genus(), cfg.max_len, cfg.cap)?);
        let probe = probe_point(&params);
        Ok(Self {
            params,
            tree,
            cfg,
            probe,
        })
    }

    /// Same truncation on new parameters of the same genus, sharing the
    /// word tree.
    pub fn with_params(&self, params: SchottkyParams) -> Result<Self> {
        if params.genus() != self.params.genus() {
            return Surface::new(params, self.cfg);
        }
        let report = params.validate();
        if !report.is_valid() {
            return Err(Error::InvalidParams(report));
        }
        let probe = probe_point(&params);
        Ok(Self {
            params,
            tree: Arc::clone(&self.tree),
            cfg: self.cfg,
            probe,
        })
    }

    pub fn params(&self) -> &SchottkyParams {
        &self.params
    }

    pub fn genus(&self) -> usize {
        self.params.genus()
    }

    pub fn tree(&self) -> &WordTree {
        &self.tree
    }

    pub fn config(&self) -> &SeriesConfig {
        &self.cfg
    }

    /// A point of the fundamental domain well away from every circle.
    pub fn probe(&self) -> C64 {
        self.probe
    }

    pub fn orbit(&self, x: C64) -> Result<Orbit> {
        let n = self.tree.len();
        let mut img = Vec::with_capacity(n);
        let mut der = Vec::with_capacity(n);
        img.push(x);
        der.push(C64::new(1.0, 0.0));
        for i in 1..n {
            let (l, t) = self.tree.link(i);
            let (z, d) = self.params.generator(l).apply_with_deriv(img[t]);
            img.push(z);
            der.push(d * der[t]);
        }
        if img.iter().chain(&der).any(|z| !z.is_finite()) {
            return Err(Error::Pole { re: x.re, im: x.im });
        }
        Ok(Orbit { img, der })
    }
}

/// Centroid of the circle centers when it is well inside the fundamental
/// domain, otherwise the first point of a deterministic ring search whose
/// clearance is at least the largest radius.
pub fn probe_point(p: &SchottkyParams) -> C64 {
    let discs = p.discs();
    let centroid = discs.iter().map(|d| d.center).sum::<C64>() / discs.len() as f64;
    let rmax = discs.iter().map(|d| d.radius).fold(0.0, f64::max);
    if p.clearance(centroid) >= rmax {
        return centroid;
    }
    let mut best = (centroid, p.clearance(centroid));
    for ring in 1..=64 {
        let s = ring as f64 * 0.5 * rmax;
        for k in 0..16 {
            let z = centroid + C64::from_polar(s, std::f64::consts::PI * k as f64 / 8.0);
            let c = p.clearance(z);
            if c >= rmax {
                return z;
            }
            if c > best.1 {
                best = (z, c);
            }
        }
    }
    best.0
}

/// Distinct limit points `A_j` with the words whose attracting fixed points
/// they are.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitPointSet {
    pub points: Vec<C64>,
    pub words: Vec<GroupWord>,
}

/// Attracting fixed points of `γ_1, …, γ_g` followed by words of length
/// `2..=4` in enumeration order, skipping near-duplicates.
pub fn limit_points(p: &SchottkyParams, n: usize) -> Result<LimitPointSet> {
    let mut set = LimitPointSet {
        points: Vec::with_capacity(n),
        words: Vec::with_capacity(n),
    };
    if n == 0 {
        return Ok(set);
    }
    let g = p.genus();
    let generators = (1..=g as i32).map(|a| GroupWord(vec![a]));
    let tree = WordTree::new(g, LIMIT_POINT_MAX_LEN, DEFAULT_WORD_CAP)?;
    let longer = (2..=LIMIT_POINT_MAX_LEN).flat_map(|len| tree.shell(len)).map(|i| tree.word(i));
    for word in generators.chain(longer) {
        let Some(z) = p.attracting_point(&word)?.finite() else {
            continue;
        };
        if set
            .points
            .iter()
            .any(|q| (q - z).norm() <= LIMIT_POINT_SEPARATION)
        {
            continue;
        }
        set.points.push(z);
        set.words.push(word);
        if set.points.len() == n {
            return Ok(set);
        }
    }
    Err(Error::InsufficientLimitPoints {
        found: set.points.len(),
        wanted: n,
    })
}

/// A form of weight `N` in `x` and `1 - N` in `y`, given by its coefficient
/// in the global coordinate.
pub trait TwoPointForm: Send + Sync {
    fn surface(&self) -> &Surface;
    fn weight(&self) -> usize;
    /// Values at `(x, y)` for every `y` in `ys`.
    fn values(&self, x: C64, ys: &[C64]) -> Result<Vec<C64>>;

    fn value(&self, x: C64, y: C64) -> Result<C64> {
        Ok(self.values(x, &[y])?[0])
    }
}

/// A form of weight `N` in one variable.
pub trait OnePointForm: Send + Sync {
    fn weight(&self) -> usize;
    fn value(&self, x: C64) -> Result<C64>;
}

impl<F: OnePointForm + ?Sized> OnePointForm for &F {
    fn weight(&self) -> usize {
        (**self).weight()
    }
    fn value(&self, x: C64) -> Result<C64> {
        (**self).value(x)
    }
}

#[inline(always)]
fn pole_check(d: C64, y: C64) -> Result<()> {
    if d.norm_sqr() < POLE_TOL * POLE_TOL {
        Err(Error::Pole { re: y.re, im: y.im })
    } else {
        Ok(())
    }
}

/// Sums `Σ_i coeff(i) / (γ_i x - y)` for every `y`, shell by shell with
/// compensation. `coeff` sees the orbit point and derivative.
fn cauchy_sums<F>(s: &Surface, orbit: &Orbit, ys: &[C64], coeff: F) -> Result<Vec<C64>>
where
    F: Fn(C64, C64) -> C64,
{
    let tree = s.tree();
    let mut totals = vec![KahanSum::new(); ys.len()];
    let mut shell = vec![KahanSum::new(); ys.len()];
    for len in 0..=tree.max_len() {
        shell.iter_mut().for_each(|k| *k = KahanSum::new());
        for i in tree.shell(len) {
            let z = orbit.img[i];
            let c = coeff(z, orbit.der[i]);
            for (acc, &y) in shell.iter_mut().zip(ys) {
                let d = z - y;
                pole_check(d, y)?;
                acc.add(c / d);
            }
        }
        for (t, sh) in totals.iter_mut().zip(&shell) {
            t.add(sh.value());
        }
    }
    Ok(totals.iter().map(|t| t.value()).collect())
}

/// Largest term magnitude per word length for one `(x, y)` pair, with a
/// decay verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellReport {
    pub x: C64,
    pub y: C64,
    pub magnitudes: Vec<f64>,
    /// Last shell relative to the largest shell.
    pub last_relative: f64,
    pub shell_tol: f64,
    pub certified: bool,
    /// Strictly decreasing for lengths `>= 2`.
    pub monotone: bool,
}

impl ShellReport {
    fn new(s: &Surface, x: C64, y: C64, magnitudes: Vec<f64>) -> Self {
        let max = magnitudes.iter().copied().fold(0.0, f64::max);
        let last = magnitudes.last().copied().unwrap_or(0.0);
        let last_relative = if max > 0.0 { last / max } else { 0.0 };
        let monotone = magnitudes
            .iter()
            .skip(2)
            .zip(magnitudes.iter().skip(3))
            .all(|(a, b)| b < a);
        Self {
            x,
            y,
            last_relative,
            shell_tol: s.cfg.shell_tol,
            certified: s.cfg.max_len >= 1 && last_relative <= s.cfg.shell_tol,
            monotone,
            magnitudes,
        }
    }

    /// Fails unless the truncation is certified.
    pub fn require_certified(&self) -> Result<()> {
        if self.certified {
            Ok(())
        } else {
            Err(Error::Residual {
                what: "series tail (last shell)",
                residual: self.last_relative,
                tolerance: self.shell_tol,
            })
        }
    }
}

fn shell_magnitudes<F>(s: &Surface, orbit: &Orbit, term: F) -> Vec<f64>
where
    F: Fn(C64, C64) -> C64,
{
    let tree = s.tree();
    (0..=tree.max_len())
        .map(|len| {
            tree.shell(len)
                .map(|i| term(orbit.img[i], orbit.der[i]).norm())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Default probe pair: the probe point and a point at half its clearance.
pub fn probe_pair(s: &Surface) -> (C64, C64) {
    let x = s.probe();
    let y = x + C64::new(0.5 * s.params().clearance(x), 0.0);
    (x, y)
}

/// The Bers kernel `Σ_γ (γ'x)^N/(γx - y) · Π_j (y - A_j)/(γx - A_j)`.
#[derive(Debug, Clone)]
pub struct BersSeries {
    surface: Surface,
    n: usize,
    limit: LimitPointSet,
}

impl BersSeries {
    pub fn new(surface: Surface, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("weight N must be >= 2, got {n}")));
        }
        let limit = limit_points(surface.params(), 2 * n - 1)?;
        Self::with_limit_points(surface, n, limit)
    }

    pub fn with_limit_points(surface: Surface, n: usize, limit: LimitPointSet) -> Result<Self> {
        if limit.points.len() != 2 * n - 1 {
            return Err(Error::Config(format!(
                "{} limit points given, weight {n} needs {}",
                limit.points.len(),
                2 * n - 1
            )));
        }
        Ok(Self { surface, n, limit })
    }

    pub fn limit_points(&self) -> &LimitPointSet {
        &self.limit
    }

    /// `(γ'x)^N / Π_j (γx - A_j)`. Orbit points of long words can round onto
    /// an `A_j`; the distance is then floored at the rounding level, where
    /// the true term is far below the series tail.
    fn coefficient(&self, z: C64, d: C64) -> C64 {
        let den: C64 = self
            .limit
            .points
            .iter()
            .map(|a| {
                let diff = z - a;
                let floor = LIMIT_ROUNDING * (1.0 + a.norm());
                if diff.norm() < floor {
                    C64::new(floor, 0.0)
                } else {
                    diff
                }
            })
            .product();
        d.powu(self.n as u32) / den
    }

    fn prefactor(&self, y: C64) -> C64 {
        self.limit.points.iter().map(|a| y - a).product()
    }

    pub fn shell_report(&self, x: C64, y: C64) -> Result<ShellReport> {
        let orbit = self.surface.orbit(x)?;
        let pre = self.prefactor(y);
        let mags = shell_magnitudes(&self.surface, &orbit, |z, d| {
            self.coefficient(z, d) * pre / (z - y)
        });
        Ok(ShellReport::new(&self.surface, x, y, mags))
    }

    /// Shell report at [`probe_pair`].
    pub fn certify(&self) -> Result<ShellReport> {
        let (x, y) = probe_pair(&self.surface);
        self.shell_report(x, y)
    }
}

impl TwoPointForm for BersSeries {
    fn surface(&self) -> &Surface {
        &self.surface
    }

    fn weight(&self) -> usize {
        self.n
    }

    fn values(&self, x: C64, ys: &[C64]) -> Result<Vec<C64>> {
        let orbit = self.surface.orbit(x)?;
        let sums = cauchy_sums(&self.surface, &orbit, ys, |z, d| self.coefficient(z, d))?;
        Ok(sums
            .into_iter()
            .zip(ys)
            .map(|(s, &y)| s * self.prefactor(y))
            .collect())
    }
}

/// The differential of the third kind `ω_{y-0}(x) = Σ_γ γ'x (1/(γx - y) - 1/γx)`,
/// with residue `+1` at `x = y` and `-1` at `x = 0`.
#[derive(Debug, Clone)]
pub struct ThirdKind {
    surface: Surface,
}

impl ThirdKind {
    pub fn new(surface: Surface) -> Result<Self> {
        if !surface.params().in_fundamental_domain(C64::new(0.0, 0.0)) {
            return Err(Error::Config(
                "the differential of the third kind needs 0 in the fundamental domain".into(),
            ));
        }
        Ok(Self { surface })
    }

    pub fn shell_report(&self, x: C64, y: C64) -> Result<ShellReport> {
        let orbit = self.surface.orbit(x)?;
        let mags = shell_magnitudes(&self.surface, &orbit, |z, d| d * (1.0 / (z - y) - 1.0 / z));
        Ok(ShellReport::new(&self.surface, x, y, mags))
    }
}

impl TwoPointForm for ThirdKind {
    fn surface(&self) -> &Surface {
        &self.surface
    }

    fn weight(&self) -> usize {
        1
    }

    fn values(&self, x: C64, ys: &[C64]) -> Result<Vec<C64>> {
        let orbit = self.surface.orbit(x)?;
        let mut with_zero = ys.to_vec();
        with_zero.push(C64::new(0.0, 0.0));
        let sums = cauchy_sums(&self.surface, &orbit, &with_zero, |_, d| d)?;
        let at_zero = sums[ys.len()];
        Ok(sums[..ys.len()].iter().map(|s| s - at_zero).collect())
    }
}

/// The holomorphic 1-forms `ν_a(x) = ω_{y₀-0}(x) - ω_{γ_a y₀-0}(x)`, all
/// handles at once. The two reference poles at `0` cancel, so the sum is
/// taken directly as `Σ_γ γ'x (1/(γx - y₀) - 1/(γx - γ_a y₀))`.
#[derive(Debug, Clone)]
pub struct NuForms {
    surface: Surface,
    base: C64,
    /// `y₀` followed by `γ_a y₀`, `a = 1..g`.
    poles: Vec<C64>,
}

impl NuForms {
    /// Uses the surface's probe point as base point.
    pub fn new(surface: Surface) -> Result<Self> {
        let base = surface.probe();
        Self::with_base(surface, base)
    }

    pub fn with_base(surface: Surface, base: C64) -> Result<Self> {
        if !surface.params().in_fundamental_domain(base) {
            return Err(Error::Config(format!(
                "base point {base} is not in the fundamental domain"
            )));
        }
        let mut poles = vec![base];
        for a in 1..=surface.genus() as i32 {
            poles.push(surface.params().generator(a).apply_c(base));
        }
        Ok(Self {
            surface,
            base,
            poles,
        })
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn base(&self) -> C64 {
        self.base
    }

    /// `(ν_1(x), …, ν_g(x))`.
    pub fn values(&self, x: C64) -> Result<Vec<C64>> {
        let orbit = self.surface.orbit(x)?;
        let sums = cauchy_sums(&self.surface, &orbit, &self.poles, |_, d| d)?;
        Ok(sums[1..].iter().map(|s| sums[0] - s).collect())
    }

    /// `ν_a` as a standalone form.
    pub fn component(&self, a: usize) -> Nu<'_> {
        Nu { forms: self, a }
    }
}

/// One normalized 1-form `ν_a`.
#[derive(Debug, Clone, Copy)]
pub struct Nu<'a> {
    forms: &'a NuForms,
    a: usize,
}

impl OnePointForm for Nu<'_> {
    fn weight(&self) -> usize {
        1
    }

    fn value(&self, x: C64) -> Result<C64> {
        Ok(self.forms.values(x)?[self.a - 1])
    }
}

/// A two-point form with the second point frozen.
pub struct Frozen<'a, F: TwoPointForm + ?Sized> {
    pub form: &'a F,
    pub y: C64,
}

impl<F: TwoPointForm + ?Sized> OnePointForm for Frozen<'_, F> {
    fn weight(&self) -> usize {
        self.form.weight()
    }

    fn value(&self, x: C64) -> Result<C64> {
        self.form.value(x, self.y)
    }
}

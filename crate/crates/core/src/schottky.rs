//! Marked Schottky groups in the `(w_a, w_{-a}, rho_a)` parametrization.
//!
//! Generator `a` acts by `z ↦ w_{-a} + rho_a/(z - w_a)` and exchanges the
//! isometric circles `C_a = {|z - w_a| = |rho_a|^{1/2}}` and `C_{-a}`. Letters
//! of group words are nonzero integers in `±1..=±g`; letter `-a` stands for
//! the inverse generator. Circles are traversed counterclockwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{Moebius, Point};
use crate::C64;

/// Tolerance for "on a circle" in [`SchottkyParams::reduce`].
pub const BOUNDARY_EPS: f64 = 1e-9;
/// Iteration bound for [`SchottkyParams::reduce`].
pub const REDUCE_MAX_ITER: usize = 200;
/// [`SchottkyParams::reduce`] gives up once the propagated rounding error of
/// the image exceeds this, which happens for points on or near the limit set.
pub const REDUCE_UNCERTAINTY_TOL: f64 = 1e-6;
/// Default cap on enumerated words.
pub const DEFAULT_WORD_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandleParams {
    pub w_plus: C64,
    pub w_minus: C64,
    pub rho: C64,
}

/// Fixed points and multiplier of a handle generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalHandle {
    /// Repelling fixed point `W_a`.
    pub w_plus: C64,
    /// Attracting fixed point `W_{-a}`.
    pub w_minus: C64,
    pub q: C64,
}

impl HandleParams {
    pub fn new(w_plus: C64, w_minus: C64, rho: C64) -> Self {
        Self {
            w_plus,
            w_minus,
            rho,
        }
    }

    pub fn radius(&self) -> f64 {
        self.rho.norm().sqrt()
    }

    pub fn map(&self) -> Result<Moebius> {
        Moebius::handle(self.w_plus, self.w_minus, self.rho)
    }

    pub fn from_classical(h: &ClassicalHandle) -> Result<Self> {
        if h.w_plus == h.w_minus {
            return Err(Error::InvalidClassical("coincident fixed points"));
        }
        let one = C64::new(1.0, 0.0);
        if (h.q - one).norm() == 0.0 {
            return Err(Error::DegenerateMultiplier);
        }
        let qn = h.q.norm();
        if !(qn > 0.0 && qn < 1.0) {
            return Err(Error::InvalidClassical("need 0 < |q| < 1"));
        }
        let omq = one - h.q;
        let diff = h.w_plus - h.w_minus;
        Ok(Self {
            w_plus: (h.w_plus - h.q * h.w_minus) / omq,
            w_minus: (h.w_minus - h.q * h.w_plus) / omq,
            rho: -h.q * diff * diff / (omq * omq),
        })
    }

    pub fn to_classical(&self) -> Result<ClassicalHandle> {
        let fp = self.map()?.fixed_points()?;
        // a handle never fixes ∞ since c = (-rho)^{-1/2} != 0
        let finite = |p: Point| p.finite().ok_or(Error::InvalidClassical("fixed point at ∞"));
        Ok(ClassicalHandle {
            w_plus: finite(fp.repelling)?,
            w_minus: finite(fp.attracting)?,
            q: fp.multiplier,
        })
    }
}

/// A closed disc bounded by an isometric circle, tagged with its letter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub letter: i32,
    pub center: C64,
    pub radius: f64,
}

impl Disc {
    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Signed distance from `z` to the circle, positive outside.
    pub fn clearance(&self, z: C64) -> f64 {
        (z - self.center).norm() - self.radius
    }
}

/// One violated disjointness constraint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub circles: (i32, i32),
    pub center_gap: f64,
    pub radius_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub zero_rho: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.zero_rho.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for a in &self.zero_rho {
            write!(f, "rho_{a} = 0; ")?;
        }
        for v in &self.violations {
            write!(
                f,
                "C_{} and C_{} overlap (gap {:.6} <= {:.6}); ",
                v.circles.0, v.circles.1, v.center_gap, v.radius_sum
            )?;
        }
        Ok(())
    }
}

/// Parameters of a marked Schottky group of genus `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchottkyParams {
    handles: Vec<HandleParams>,
    generators: Vec<Moebius>,
}

#[derive(Serialize, Deserialize)]
struct SurfaceDoc {
    genus: usize,
    handles: Vec<HandleParams>,
}

impl Serialize for SchottkyParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SurfaceDoc {
            genus: self.genus(),
            handles: self.handles.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SchottkyParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = SurfaceDoc::deserialize(d)?;
        if doc.genus != doc.handles.len() {
            return Err(D::Error::custom(format!(
                "genus {} but {} handles",
                doc.genus,
                doc.handles.len()
            )));
        }
        SchottkyParams::new(doc.handles).map_err(D::Error::custom)
    }
}

impl SchottkyParams {
    /// Builds the generators; does not check disc disjointness (see
    /// [`validate`](Self::validate) and [`new_valid`](Self::new_valid)).
    pub fn new(handles: Vec<HandleParams>) -> Result<Self> {
        if handles.is_empty() {
            return Err(Error::Config("at least one handle is required".into()));
        }
        let mut generators = Vec::with_capacity(2 * handles.len());
        for h in &handles {
            let m = h.map()?;
            generators.push(m);
            generators.push(m.inverse());
        }
        Ok(Self {
            handles,
            generators,
        })
    }

    pub fn new_valid(handles: Vec<HandleParams>) -> Result<Self> {
        let p = Self::new(handles)?;
        let report = p.validate();
        if !report.is_valid() {
            return Err(Error::InvalidParams(report));
        }
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface serializes")
    }

    pub fn genus(&self) -> usize {
        self.handles.len()
    }

    pub fn handles(&self) -> &[HandleParams] {
        &self.handles
    }

    /// Handle `a` in `1..=g`.
    pub fn handle(&self, a: usize) -> &HandleParams {
        &self.handles[a - 1]
    }

    /// Generator for a letter `±a`.
    #[inline]
    pub fn generator(&self, letter: i32) -> &Moebius {
        &self.generators[letter_index(letter)]
    }

    /// Center `w_{letter}`.
    pub fn center(&self, letter: i32) -> C64 {
        let h = self.handle(letter.unsigned_abs() as usize);
        if letter > 0 {
            h.w_plus
        } else {
            h.w_minus
        }
    }

    pub fn disc(&self, letter: i32) -> Disc {
        Disc {
            letter,
            center: self.center(letter),
            radius: self.handle(letter.unsigned_abs() as usize).radius(),
        }
    }

    /// All `2g` discs in letter order `1, -1, 2, -2, …`.
    pub fn discs(&self) -> Vec<Disc> {
        letters(self.genus()).map(|l| self.disc(l)).collect()
    }

    /// Distance from `z` to the nearest isometric circle, negative inside a disc.
    pub fn clearance(&self, z: C64) -> f64 {
        self.discs()
            .iter()
            .map(|d| d.clearance(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Strict exterior of all closed discs.
    pub fn in_fundamental_domain(&self, z: C64) -> bool {
        self.clearance(z) > BOUNDARY_EPS
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (i, h) in self.handles.iter().enumerate() {
            if h.rho == C64::new(0.0, 0.0) {
                report.zero_rho.push(i + 1);
            }
        }
        let discs = self.discs();
        for (i, u) in discs.iter().enumerate() {
            for v in &discs[i + 1..] {
                let gap = (u.center - v.center).norm();
                let sum = u.radius + v.radius;
                if gap <= sum {
                    report.violations.push(Violation {
                        circles: (u.letter, v.letter),
                        center_gap: gap,
                        radius_sum: sum,
                    });
                }
            }
        }
        report
    }

    /// Minimum over disc pairs of `gap - radius_sum`.
    pub fn min_separation(&self) -> f64 {
        let discs = self.discs();
        let mut best = f64::INFINITY;
        for (i, u) in discs.iter().enumerate() {
            for v in &discs[i + 1..] {
                best = best.min((u.center - v.center).norm() - u.radius - v.radius);
            }
        }
        best
    }

    /// Returns `(λ, λy)` with `λy` strictly exterior to every disc.
    pub fn reduce(&self, y: C64) -> Result<(GroupWord, C64)> {
        let discs = self.discs();
        let mut z = y;
        let mut word: Vec<i32> = Vec::new();
        let mut uncertainty = f64::EPSILON * y.norm();
        for iter in 0..REDUCE_MAX_ITER {
            if uncertainty > REDUCE_UNCERTAINTY_TOL {
                return Err(Error::NonTermination(iter));
            }
            let mut inside = None;
            for d in &discs {
                let c = d.clearance(z);
                if c.abs() < BOUNDARY_EPS {
                    return Err(Error::BoundaryAmbiguity {
                        circle: d.letter,
                        eps: BOUNDARY_EPS,
                    });
                }
                if c < 0.0 {
                    inside = Some(d.letter);
                    break;
                }
            }
            match inside {
                None => return Ok((GroupWord(word), z)),
                Some(l) => {
                    let (next, d) = self.generator(l).apply_with_deriv(z);
                    z = next;
                    uncertainty = uncertainty * d.norm() + f64::EPSILON * z.norm();
                    word.insert(0, l);
                }
            }
        }
        Err(Error::NonTermination(REDUCE_MAX_ITER))
    }

    /// Conjugates every generator by `m`, i.e. `γ_a ↦ m γ_a m⁻¹`.
    pub fn transport(&self, m: &Moebius) -> Result<Self> {
        let (a, b, c, d) = (m.a, m.b, m.c, m.d);
        let handles = self
            .handles
            .iter()
            .map(|h| {
                let cp = c * h.w_plus + d;
                let cm = c * h.w_minus + d;
                let den = cp * cm - h.rho * c * c;
                HandleParams {
                    w_plus: ((a * h.w_plus + b) * cm - h.rho * a * c) / den,
                    w_minus: ((a * h.w_minus + b) * cp - h.rho * a * c) / den,
                    rho: h.rho / (den * den),
                }
            })
            .collect();
        Self::new_valid(handles)
    }

    /// Copy with one handle replaced.
    pub fn with_handle(&self, a: usize, h: HandleParams) -> Result<Self> {
        let mut handles = self.handles.clone();
        handles[a - 1] = h;
        Self::new(handles)
    }

    /// Composed map of a word.
    pub fn word_map(&self, word: &GroupWord) -> Moebius {
        word.0
            .iter()
            .fold(Moebius::IDENTITY, |acc, &l| acc.compose(self.generator(l)))
    }

    /// Attracting fixed point of a word's map.
    pub fn attracting_point(&self, word: &GroupWord) -> Result<Point> {
        Ok(self.word_map(word).fixed_points()?.attracting)
    }
}

/// Index into generator tables: `1 → 0, -1 → 1, 2 → 2, -2 → 3, …`.
#[inline]
pub fn letter_index(letter: i32) -> usize {
    debug_assert!(letter != 0);
    2 * (letter.unsigned_abs() as usize - 1) + usize::from(letter < 0)
}

/// Letters in enumeration order `1, -1, 2, -2, …`.
pub fn letters(genus: usize) -> impl Iterator<Item = i32> + Clone {
    (1..=genus as i32).flat_map(|a| [a, -a])
}

/// A reduced word in the generators; letter `-a` is the inverse of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroupWord(pub Vec<i32>);

impl GroupWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduced(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|&l| l != 0) && self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &GroupWord) -> Self {
        Self::reduced(self.0.iter().chain(&other.0).copied())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub word: GroupWord,
    pub map: Moebius,
}

/// Reduced words up to a maximal length, ordered by length and then
/// lexicographically in the letter order `1 < -1 < 2 < -2 < …`.
///
/// Only the combinatorics are stored: word `i >= 1` is `ℓ·w` with first
/// letter `ℓ` and suffix `w` at a smaller index. The map of `ℓ·w` is
/// `γ_ℓ ∘ map(w)`, so orbit points `γx` follow from the suffix's orbit point
/// with one Möbius application each. The tree depends only on `(g, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WordTree {
    genus: usize,
    first: Vec<i32>,
    tail: Vec<u32>,
    shell_starts: Vec<usize>,
}

/// Number of reduced words of length exactly `len`.
pub fn shell_size(genus: usize, len: usize) -> usize {
    if len == 0 {
        1
    } else {
        let base = 2 * genus - 1;
        (2 * genus).saturating_mul(base.saturating_pow(len as u32 - 1))
    }
}

/// Number of reduced words of length `0..=max_len`, saturating.
pub fn word_count(genus: usize, max_len: usize) -> usize {
    (0..=max_len).fold(0usize, |acc, l| acc.saturating_add(shell_size(genus, l)))
}

impl WordTree {
    pub fn new(genus: usize, max_len: usize, cap: usize) -> Result<Self> {
        let count = word_count(genus, max_len);
        if count > cap {
            return Err(Error::Capacity { count, cap });
        }
        let mut first = Vec::with_capacity(count);
        let mut tail = Vec::with_capacity(count);
        let mut shell_starts = vec![0usize];
        first.push(0);
        tail.push(0);
        for len in 1..=max_len {
            let prev = shell_starts[len - 1]..first.len();
            shell_starts.push(first.len());
            for l in letters(genus) {
                for w in prev.clone() {
                    if first[w] == -l {
                        continue;
                    }
                    first.push(l);
                    tail.push(w as u32);
                }
            }
        }
        shell_starts.push(first.len());
        Ok(Self {
            genus,
            first,
            tail,
            shell_starts,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.shell_starts.len() - 2
    }

    /// Index range of words of length `len`.
    pub fn shell(&self, len: usize) -> std::ops::Range<usize> {
        self.shell_starts[len]..self.shell_starts[len + 1]
    }

    /// `(first letter, suffix index)` of word `i >= 1`.
    #[inline(always)]
    pub fn link(&self, i: usize) -> (i32, usize) {
        (self.first[i], self.tail[i] as usize)
    }

    pub fn word(&self, mut i: usize) -> GroupWord {
        let mut letters = Vec::new();
        while i != 0 {
            letters.push(self.first[i]);
            i = self.tail[i] as usize;
        }
        GroupWord(letters)
    }
}

/// A [`WordTree`] together with the composed map of every word.
#[derive(Debug, Clone)]
pub struct Enumeration {
    tree: WordTree,
    maps: Vec<Moebius>,
}

impl Enumeration {
    pub fn new(p: &SchottkyParams, max_len: usize, cap: usize) -> Result<Self> {
        let tree = WordTree::new(p.genus(), max_len, cap)?;
        let mut maps = Vec::with_capacity(tree.len());
        maps.push(Moebius::IDENTITY);
        for i in 1..tree.len() {
            let (l, t) = tree.link(i);
            let m = p.generator(l).compose(&maps[t]);
            maps.push(m);
        }
        Ok(Self { tree, maps })
    }

    pub fn tree(&self) -> &WordTree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, i: usize) -> &Moebius {
        &self.maps[i]
    }

    pub fn maps(&self) -> &[Moebius] {
        &self.maps
    }

    pub fn word(&self, i: usize) -> GroupWord {
        self.tree.word(i)
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.len())
            .map(|i| GroupElement {
                word: self.word(i),
                map: self.maps[i],
            })
            .collect()
    }
}

/// Convenience wrapper returning materialized elements.
pub fn enumerate(p: &SchottkyParams, max_len: usize) -> Result<Vec<GroupElement>> {
    Ok(Enumeration::new(p, max_len, DEFAULT_WORD_CAP)?.elements())
}

/// The reference genus-two surface used throughout the tests.
pub fn reference_surface() -> SchottkyParams {
    let c = |re: f64| C64::new(re, 0.0);
    SchottkyParams::new_valid(vec![
        HandleParams::new(c(-6.0), c(-2.0), c(0.09)),
        HandleParams::new(c(2.0), c(6.0), c(0.09)),
    ])
    .expect("reference surface is valid")
}

/// Genus-one surface with a single handle `(-2, 2, 0.25)`.
pub fn single_handle_surface() -> SchottkyParams {
    let c = |re: f64| C64::new(re, 0.0);
    SchottkyParams::new_valid(vec![HandleParams::new(c(-2.0), c(2.0), c(0.25))])
        .expect("single handle surface is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn classical_conversion_matches_hand_values() {
        let h = HandleParams::from_classical(&ClassicalHandle {
            w_plus: c(1.0, 0.0),
            w_minus: c(-1.0, 0.0),
            q: c(0.25, 0.0),
        })
        .unwrap();
        assert!((h.w_plus - c(5.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((h.w_minus - c(-5.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((h.rho - c(-16.0 / 9.0, 0.0)).norm() < 1e-15);

        let back = h.to_classical().unwrap();
        assert!((back.w_plus - c(1.0, 0.0)).norm() < 1e-10);
        assert!((back.w_minus - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((back.q - c(0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn small_q_limit() {
        let h = HandleParams::from_classical(&ClassicalHandle {
            w_plus: c(1.0, 2.0),
            w_minus: c(-3.0, 0.5),
            q: c(1e-14, 0.0),
        })
        .unwrap();
        assert!((h.w_plus - c(1.0, 2.0)).norm() < 1e-12);
        assert!(h.rho.norm() < 1e-12);
    }

    #[test]
    fn degenerate_multiplier() {
        let r = HandleParams::from_classical(&ClassicalHandle {
            w_plus: c(1.0, 0.0),
            w_minus: c(-1.0, 0.0),
            q: c(1.0, 0.0),
        });
        assert!(matches!(r, Err(Error::DegenerateMultiplier)));
    }

    #[test]
    fn validation_examples() {
        assert!(reference_surface().validate().is_valid());
        assert!(single_handle_surface().validate().is_valid());
        let bad = SchottkyParams::new(vec![
            HandleParams::new(c(0.0, 0.0), c(1.0, 0.0), c(0.09, 0.0)),
            HandleParams::new(c(0.5, 0.0), c(5.0, 0.0), c(0.09, 0.0)),
        ])
        .unwrap();
        let report = bad.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.circles == (1, 2) && (v.center_gap - 0.5).abs() < 1e-15));
    }

    #[test]
    fn enumeration_counts_and_order() {
        let p = reference_surface();
        assert_eq!(enumerate(&p, 1).unwrap().len(), 5);
        let e = Enumeration::new(&p, 2, 100).unwrap();
        assert_eq!(e.len(), 17);
        let words: Vec<GroupWord> = (0..e.len()).map(|i| e.word(i)).collect();
        assert_eq!(words[1], GroupWord(vec![1]));
        assert_eq!(words[2], GroupWord(vec![-1]));
        assert_eq!(words[5], GroupWord(vec![1, 1]));
        assert_eq!(words[6], GroupWord(vec![1, 2]));
        assert_eq!(words[7], GroupWord(vec![1, -2]));
        assert!(words.iter().all(|w| w.is_reduced()));
        assert!(!words.contains(&GroupWord(vec![1, -1])));
        for (i, w) in words.iter().enumerate() {
            assert!(e.map(i).projective_distance(&p.word_map(w)) < 1e-12);
        }
        assert!(matches!(
            Enumeration::new(&p, 5, 100),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn reduce_examples() {
        let p = reference_surface();
        let (w, img) = p.reduce(c(0.0, 0.0)).unwrap();
        assert!(w.is_empty());
        assert_eq!(img, c(0.0, 0.0));

        let y = c(-6.0 + 0.1, 0.0);
        let (w, img) = p.reduce(y).unwrap();
        assert!(!w.is_empty());
        assert!(p.in_fundamental_domain(img));
        assert!((p.word_map(&w).apply_c(y) - img).norm() < 1e-12);

        let fixed = p.handle(1).to_classical().unwrap().w_plus;
        assert!(matches!(p.reduce(fixed), Err(Error::NonTermination(_))));

        let on_circle = c(-6.0 + 0.3, 0.0);
        assert!(matches!(
            p.reduce(on_circle),
            Err(Error::BoundaryAmbiguity { .. })
        ));
    }

    #[test]
    fn surface_json_round_trip_uses_documented_fields() {
        let p = reference_surface();
        let text = p.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["genus"], 2);
        assert_eq!(v["handles"][0]["w_plus"][0], -6.0);
        assert_eq!(v["handles"][1]["rho"][1], 0.0);
        assert_eq!(SchottkyParams::from_json(&text).unwrap(), p);
        let bad = r#"{"genus": 3, "handles": [{"w_plus":[0,0],"w_minus":[4,0],"rho":[0.1,0]}]}"#;
        assert!(SchottkyParams::from_json(bad).is_err());
    }
}

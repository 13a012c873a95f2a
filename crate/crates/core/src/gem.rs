//! Quasi-periods, the spanning set of holomorphic `N`-differentials, basis
//! selection through contour pairings, the dual basis and the canonical GEM
//! form.
//!
//! For a two-point form `Ψ` of weights `(N, 1 - N)` the quasi-period along
//! handle `a` is
//!
//! ```text
//! Δ_a(x, y) = Ψ(x, γ_a y)(γ_a'y)^{1-N} - Ψ(x, y) = Σ_k c_{a,k}(x) (y - w_a)^k,
//! ```
//!
//! a polynomial of degree `≤ 2N - 2` in `y`. For the Bers kernel the
//! coefficients `Θ_{a,k} = c_{a,k}` are holomorphic `N`-differentials spanning
//! a space of dimension `d_N = (g - 1)(2N - 1)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::contour::{HandleContours, DEFAULT_NODES, DOUBLING_TOL};
use crate::eichler::{Cocycle, PolyForm};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::poincare::{BersSeries, OnePointForm, Surface, TwoPointForm};
use crate::C64;

/// Held-out residual gate for polynomial fits in `y`.
pub const FIT_RESIDUAL_TOL: f64 = 1e-8;
/// Minimum ratio `σ_{d-1}/σ_d` of the pairing matrix.
pub const RANK_GAP_MIN: f64 = 1e6;
/// Points closer than this fraction of the probe radius to a probe node use
/// the inner probe circle.
const PROBE_NODE_CLEARANCE: f64 = 0.2;
const HELD_OUT: usize = 2;

/// `d_N = (g - 1)(2N - 1)`.
pub fn dimension(genus: usize, n: usize) -> usize {
    (genus.saturating_sub(1)) * (2 * n - 1)
}

/// Flat index of `(a, k)`, `a` in `1..=g`, `k` in `0..2N-1`.
pub fn flat_index(n: usize, a: usize, k: usize) -> usize {
    (a - 1) * (2 * n - 1) + k
}

pub fn unflatten(n: usize, s: usize) -> (usize, usize) {
    (s / (2 * n - 1) + 1, s % (2 * n - 1))
}

/// `2N - 1` interpolation nodes on a circle plus two held-out nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeCircle {
    pub center: C64,
    pub radius: f64,
    fit: Vec<C64>,
    held: Vec<C64>,
}

impl ProbeCircle {
    fn new(center: C64, radius: f64, n: usize) -> Self {
        let count = 2 * n - 1;
        let fit = linalg::circle_nodes(center, radius, count);
        let held = (0..HELD_OUT)
            .map(|j| {
                let t = std::f64::consts::PI * (2 * j + 1) as f64 / count as f64;
                center + C64::from_polar(radius, t)
            })
            .collect();
        Self {
            center,
            radius,
            fit,
            held,
        }
    }

    /// Fit nodes followed by held-out nodes.
    pub fn nodes(&self) -> Vec<C64> {
        self.fit.iter().chain(&self.held).copied().collect()
    }

    fn min_distance(&self, x: C64) -> f64 {
        self.fit
            .iter()
            .chain(&self.held)
            .map(|y| (y - x).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Fits `values` (fit nodes then held-out nodes) by a polynomial in
    /// `(y - center)`; returns the monomial form and the relative held-out
    /// residual.
    fn fit(&self, n: usize, values: &[C64]) -> Result<(PolyForm, f64)> {
        let count = self.fit.len();
        let coeffs = linalg::circle_fit(&values[..count], self.radius);
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let residual = self
            .held
            .iter()
            .zip(&values[count..])
            .map(|(&y, v)| (linalg::shifted_eval(&coeffs, self.center, y) - v).norm())
            .fold(0.0, f64::max);
        let rel = if scale > 0.0 { residual / scale } else { 0.0 };
        Ok((PolyForm::from_shifted(n, self.center, &coeffs)?, rel))
    }
}

/// The pair of probe circles used for quasi-periods: an outer circle at half
/// the probe point's clearance and an inner one at `0.4` of that radius.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiProbe {
    pub outer: ProbeCircle,
    pub inner: ProbeCircle,
}

impl QuasiProbe {
    pub fn new(surface: &Surface, n: usize) -> Self {
        let c = surface.probe();
        let r = 0.5 * surface.params().clearance(c);
        Self {
            outer: ProbeCircle::new(c, r, n),
            inner: ProbeCircle::new(c, 0.4 * r, n),
        }
    }

    pub fn for_point(&self, x: C64) -> &ProbeCircle {
        if self.outer.min_distance(x) < PROBE_NODE_CLEARANCE * self.outer.radius {
            &self.inner
        } else {
            &self.outer
        }
    }
}

/// Quasi-period coefficients `c_{a,k}(x)` in the basis `(y - w_a)^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiPeriod {
    pub a: usize,
    pub coeffs: Vec<C64>,
    /// Relative held-out residual of the polynomial fit.
    pub residual: f64,
}

/// The `y` points at which a two-point form must be known to extract all
/// quasi-periods at one `x`: the probe nodes, then their images under
/// `γ_1, …, γ_g`.
pub fn quasi_period_points(surface: &Surface, probe: &ProbeCircle) -> Vec<C64> {
    let base = probe.nodes();
    let mut ys = base.clone();
    for a in 1..=surface.genus() as i32 {
        let m = surface.params().generator(a);
        ys.extend(base.iter().map(|&y| m.apply_c(y)));
    }
    ys
}

/// Quasi-periods for every handle from form values at
/// [`quasi_period_points`]. Does not apply the residual gate.
pub fn quasi_periods_from_values(
    surface: &Surface,
    n: usize,
    probe: &ProbeCircle,
    values: &[C64],
) -> Result<Vec<QuasiPeriod>> {
    let base = probe.nodes();
    let m = base.len();
    let exponent = 1 - n as i32;
    (1..=surface.genus())
        .map(|a| {
            let gen = surface.params().generator(a as i32);
            let delta: Vec<C64> = base
                .iter()
                .enumerate()
                .map(|(j, &y)| {
                    let (_, d) = gen.apply_with_deriv(y);
                    values[a * m + j] * d.powi(exponent) - values[j]
                })
                .collect();
            let (poly, residual) = probe.fit(n, &delta)?;
            Ok(QuasiPeriod {
                a,
                coeffs: poly.to_shifted(surface.params().handle(a).w_plus),
                residual,
            })
        })
        .collect()
}

fn check_fit(what: &'static str, residual: f64) -> Result<()> {
    if residual > FIT_RESIDUAL_TOL {
        Err(Error::Residual {
            what,
            residual,
            tolerance: FIT_RESIDUAL_TOL,
        })
    } else {
        Ok(())
    }
}

/// Quasi-periods of `form` at `x` for all handles, gated on the fit residual.
pub fn quasi_periods<F: TwoPointForm + ?Sized>(
    form: &F,
    probe: &QuasiProbe,
    x: C64,
) -> Result<Vec<QuasiPeriod>> {
    let circle = probe.for_point(x);
    let ys = quasi_period_points(form.surface(), circle);
    let values = form.values(x, &ys)?;
    let qp = quasi_periods_from_values(form.surface(), form.weight(), circle, &values)?;
    for q in &qp {
        check_fit("quasi-period polynomial fit", q.residual)?;
    }
    Ok(qp)
}

/// Flattens quasi-periods into the spanning values `Θ_{a,k}`.
fn flatten(qp: &[QuasiPeriod]) -> Vec<C64> {
    qp.iter().flat_map(|q| q.coeffs.iter().copied()).collect()
}

/// The spanning family `Θ_{a,k}(x)`, the quasi-period coefficients of the Bers
/// kernel, indexed by [`flat_index`].
#[derive(Debug, Clone)]
pub struct SpanningTheta {
    bers: BersSeries,
    probe: QuasiProbe,
}

impl SpanningTheta {
    pub fn new(bers: BersSeries) -> Self {
        let probe = QuasiProbe::new(bers.surface(), bers.weight());
        Self { bers, probe }
    }

    pub fn bers(&self) -> &BersSeries {
        &self.bers
    }

    pub fn probe(&self) -> &QuasiProbe {
        &self.probe
    }

    pub fn count(&self) -> usize {
        self.bers.surface().genus() * (2 * self.bers.weight() - 1)
    }

    /// All `g(2N - 1)` values at `x`.
    pub fn values(&self, x: C64) -> Result<Vec<C64>> {
        Ok(flatten(&quasi_periods(&self.bers, &self.probe, x)?))
    }

    /// One member `Θ_{a,k}` as a standalone form.
    pub fn member(&self, a: usize, k: usize) -> ThetaMember<'_> {
        ThetaMember {
            theta: self,
            index: flat_index(self.bers.weight(), a, k),
        }
    }
}

pub struct ThetaMember<'a> {
    theta: &'a SpanningTheta,
    index: usize,
}

impl OnePointForm for ThetaMember<'_> {
    fn weight(&self) -> usize {
        self.theta.bers.weight()
    }

    fn value(&self, x: C64) -> Result<C64> {
        Ok(self.theta.values(x)?[self.index])
    }
}

/// Contour data gathered in one pass over the isometric circles: every
/// `Θ_s` and the Bers kernel at the outer probe nodes.
#[derive(Debug, Clone)]
struct ContourSamples {
    contours: HandleContours,
    theta: Vec<Vec<C64>>,
    psi_probe: Vec<Vec<C64>>,
}

fn sample_contours(span: &SpanningTheta, n_nodes: usize) -> Result<ContourSamples> {
    let surface = span.bers.surface();
    let n = span.bers.weight();
    let contours = HandleContours::new(surface.params(), n_nodes)?;
    let circle = &span.probe.outer;
    let ys = quasi_period_points(surface, circle);
    let m = circle.nodes().len();
    let rows: Vec<(Vec<C64>, Vec<C64>)> = contours
        .nodes
        .par_iter()
        .map(|node| {
            if circle.min_distance(node.z) < PROBE_NODE_CLEARANCE * circle.radius {
                return Err(Error::Config(
                    "probe circle passes too close to an isometric circle".into(),
                ));
            }
            let values = span.bers.values(node.z, &ys)?;
            let qp = quasi_periods_from_values(surface, n, circle, &values)?;
            for q in &qp {
                check_fit("quasi-period polynomial fit", q.residual)?;
            }
            Ok((flatten(&qp), values[..m].to_vec()))
        })
        .collect::<Result<_>>()?;
    let count = span.count();
    let theta = (0..count)
        .map(|s| rows.iter().map(|r| r.0[s]).collect())
        .collect();
    let psi_probe = (0..m).map(|j| rows.iter().map(|r| r.1[j]).collect()).collect();
    Ok(ContourSamples {
        contours,
        theta,
        psi_probe,
    })
}

impl ContourSamples {
    /// Pairing matrix `M_{s,(b,l)} = (1/2πi)∮_{C_b} Θ_s (z - w_b)^l dz`.
    fn pairing_matrix(&self, n: usize) -> CMatrix {
        let count = self.theta.len();
        CMatrix::from_fn(count, count, |s, col| {
            let (b, l) = unflatten(n, col);
            self.contours.moment(&self.theta[s], b, l)
        })
    }

    /// Moments `(1/2πi)∮_{C_b} Ψ(x, y_j)(x - w_b)^l dx` at each probe node.
    fn probe_moments(&self, b: usize, l: usize) -> Vec<C64> {
        self.psi_probe
            .iter()
            .map(|v| self.contours.moment(v, b, l))
            .collect()
    }

    fn halved(&self) -> Result<ContourSamples> {
        let (contours, keep) = self.contours.halved()?;
        let pick = |v: &Vec<C64>| keep.iter().map(|&i| v[i]).collect::<Vec<C64>>();
        Ok(ContourSamples {
            contours,
            theta: self.theta.iter().map(pick).collect(),
            psi_probe: self.psi_probe.iter().map(pick).collect(),
        })
    }
}

fn max_rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Outcome of the rank test and pivot selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisSelection {
    pub n: usize,
    pub genus: usize,
    /// Selected cocycle indices `(a, k)`.
    #[serde(rename = "J")]
    pub j: Vec<(usize, usize)>,
    /// Selected spanning forms `Θ_{a,k}` (the pivot rows).
    pub rows: Vec<(usize, usize)>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub gap: f64,
    /// Relative change of the pairing matrix between `n` and `2n` nodes.
    pub doubling_residual: f64,
    #[serde(skip)]
    pub matrix: CMatrix,
}

impl BasisSelection {
    fn from_matrix(genus: usize, n: usize, matrix: CMatrix, doubling_residual: f64) -> Result<Self> {
        let d = dimension(genus, n);
        let report = linalg::rank_report(&matrix, d);
        if report.rank != d || report.gap < RANK_GAP_MIN {
            return Err(Error::RankMismatch {
                found: report.rank,
                expected: d,
                gap: report.gap,
            });
        }
        let j = linalg::pivot_columns(&matrix, d)
            .into_iter()
            .map(|c| unflatten(n, c))
            .collect();
        let rows = linalg::pivot_columns(&matrix.transpose(), d)
            .into_iter()
            .map(|r| unflatten(n, r))
            .collect();
        Ok(Self {
            n,
            genus,
            j,
            rows,
            singular_values: report.singular_values,
            rank: report.rank,
            gap: report.gap,
            doubling_residual,
            matrix,
        })
    }

    pub fn dimension(&self) -> usize {
        self.j.len()
    }

    /// `M_{RJ}`.
    fn sub_matrix(&self, j: &[(usize, usize)]) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(self.rows.len(), j.len(), |r, c| {
            let (a, k) = self.rows[r];
            let (b, l) = j[c];
            self.matrix[(flat_index(n, a, k), flat_index(n, b, l))]
        })
    }
}

/// Builds the pairing matrix of the spanning family against all canonical
/// cocycles (with the node-doubling gate) and selects a basis.
pub fn select_basis(span: &SpanningTheta, n_nodes: usize) -> Result<BasisSelection> {
    let fine = sample_contours(span, 2 * n_nodes)?;
    let coarse = fine.halved()?;
    let n = span.bers.weight();
    let m_fine = fine.pairing_matrix(n);
    let m_coarse = coarse.pairing_matrix(n);
    let doubling = max_rel_diff(&m_coarse, &m_fine);
    gate_doubling("pairing matrix", doubling)?;
    BasisSelection::from_matrix(span.bers.surface().genus(), n, m_fine, doubling)
}

fn gate_doubling(what: &'static str, residual: f64) -> Result<()> {
    if residual > DOUBLING_TOL {
        Err(Error::Residual {
            what,
            residual,
            tolerance: DOUBLING_TOL,
        })
    } else {
        Ok(())
    }
}

/// Options for [`CanonicalGem::build`].
#[derive(Debug, Clone, PartialEq)]
pub struct GemOptions {
    pub n_nodes: usize,
    /// Replaces the pivoted choice of `J` when set.
    pub j_override: Option<Vec<(usize, usize)>>,
}

impl Default for GemOptions {
    fn default() -> Self {
        Self {
            n_nodes: DEFAULT_NODES,
            j_override: None,
        }
    }
}

/// `Ψ^can(x, y) = Ψ^Bers(x, y) - Σ_{(b,l)∈J} Φ^∨_{bl}(x) P_{bl}(y)`, whose
/// quasi-periods are the canonical cocycles on `J`.
#[derive(Debug, Clone)]
pub struct CanonicalGem {
    span: SpanningTheta,
    selection: BasisSelection,
    j: Vec<(usize, usize)>,
    /// `Φ^∨_r = Σ_s dual[(r, s)] Θ_{rows[s]}`.
    dual: CMatrix,
    condition: f64,
    /// `P_r`, one per element of `J`.
    corrections: Vec<PolyForm>,
    correction_residual: f64,
}

impl CanonicalGem {
    pub fn build(surface: Surface, n: usize, opts: &GemOptions) -> Result<Self> {
        let bers = BersSeries::new(surface, n)?;
        bers.certify()?.require_certified()?;
        let span = SpanningTheta::new(bers);
        let fine = sample_contours(&span, 2 * opts.n_nodes)?;
        let coarse = fine.halved()?;
        let m_fine = fine.pairing_matrix(n);
        let doubling_m = max_rel_diff(&coarse.pairing_matrix(n), &m_fine);
        gate_doubling("pairing matrix", doubling_m)?;
        let selection =
            BasisSelection::from_matrix(span.bers.surface().genus(), n, m_fine, doubling_m)?;
        let j = match &opts.j_override {
            Some(j) => validate_j(&selection, j)?,
            None => selection.j.clone(),
        };
        let (dual, condition) = linalg::inverse_checked(&selection.sub_matrix(&j))?;

        let circle = span.probe.outer.clone();
        let mut corrections = Vec::with_capacity(j.len());
        let mut correction_residual: f64 = 0.0;
        let mut doubling_p: f64 = 0.0;
        for &(b, l) in &j {
            let values = fine.probe_moments(b, l);
            let coarse_values = coarse.probe_moments(b, l);
            let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
            for (u, v) in coarse_values.iter().zip(&values) {
                doubling_p = doubling_p.max((u - v).norm() / scale);
            }
            let (poly, residual) = circle.fit(n, &values)?;
            correction_residual = correction_residual.max(residual);
            corrections.push(poly);
        }
        gate_doubling("correction moments", doubling_p)?;
        check_fit("correction polynomial fit", correction_residual)?;
        Ok(Self {
            span,
            selection,
            j,
            dual,
            condition,
            corrections,
            correction_residual,
        })
    }

    pub fn bers(&self) -> &BersSeries {
        &self.span.bers
    }

    pub fn spanning(&self) -> &SpanningTheta {
        &self.span
    }

    pub fn selection(&self) -> &BasisSelection {
        &self.selection
    }

    /// The index set `J` in use.
    pub fn j(&self) -> &[(usize, usize)] {
        &self.j
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn corrections(&self) -> &[PolyForm] {
        &self.corrections
    }

    pub fn correction_residual(&self) -> f64 {
        self.correction_residual
    }

    pub fn probe(&self) -> &QuasiProbe {
        &self.span.probe
    }

    /// Position of `(a, k)` in `J`.
    pub fn j_position(&self, a: usize, k: usize) -> Option<usize> {
        self.j.iter().position(|&p| p == (a, k))
    }

    fn dual_from_theta(&self, theta: &[C64]) -> Vec<C64> {
        let n = self.span.bers.weight();
        (0..self.j.len())
            .map(|r| {
                self.selection
                    .rows
                    .iter()
                    .enumerate()
                    .map(|(s, &(a, k))| self.dual[(r, s)] * theta[flat_index(n, a, k)])
                    .sum()
            })
            .collect()
    }

    /// `Φ^∨_r(x)` for every `r` in `J`.
    pub fn dual_values(&self, x: C64) -> Result<Vec<C64>> {
        Ok(self.dual_from_theta(&self.span.values(x)?))
    }

    /// `Φ^∨_{(a,k)}` as a standalone form.
    pub fn dual_member(&self, a: usize, k: usize) -> Result<DualMember<'_>> {
        let index = self
            .j_position(a, k)
            .ok_or_else(|| Error::Index(format!("({a}, {k}) is not in J")))?;
        Ok(DualMember { gem: self, index })
    }

    /// Number of free coefficients in `Σ_{r∈J} Φ^∨_r(x) Q_r(y)`.
    pub fn family_dimension(&self) -> usize {
        (2 * self.span.bers.weight() - 1) * self.j.len()
    }

    /// The GEM form `Ψ^can - Σ_{r∈J} Φ^∨_r(x) Q_r(y)` with the monomial
    /// coefficients of all `Q_r` concatenated in `J` order.
    pub fn shifted(&self, coeffs: &[C64]) -> Result<ShiftedGem<'_>> {
        let n = self.span.bers.weight();
        if coeffs.len() != self.family_dimension() {
            return Err(Error::Config(format!(
                "GEM family takes {} coefficients, got {}",
                self.family_dimension(),
                coeffs.len()
            )));
        }
        let polys = coeffs
            .chunks(2 * n - 1)
            .map(|c| PolyForm::new(n, c))
            .collect::<Result<_>>()?;
        Ok(ShiftedGem { gem: self, polys })
    }

    /// Values of `Ψ^can` together with `Φ^∨(x)`.
    pub fn values_and_dual(&self, x: C64, ys: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
        let surface = self.span.bers.surface();
        let n = self.span.bers.weight();
        let circle = self.span.probe.for_point(x);
        let mut all = ys.to_vec();
        all.extend(quasi_period_points(surface, circle));
        let values = self.span.bers.values(x, &all)?;
        let qp = quasi_periods_from_values(surface, n, circle, &values[ys.len()..])?;
        for q in &qp {
            check_fit("quasi-period polynomial fit", q.residual)?;
        }
        let dual = self.dual_from_theta(&flatten(&qp));
        let out = ys
            .iter()
            .zip(&values)
            .map(|(&y, &v)| {
                v - dual
                    .iter()
                    .zip(&self.corrections)
                    .map(|(d, p)| d * p.eval(y))
                    .sum::<C64>()
            })
            .collect();
        Ok((out, dual))
    }
}

fn validate_j(sel: &BasisSelection, j: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    if j.len() != sel.dimension() {
        return Err(Error::Config(format!(
            "J override has {} entries, expected {}",
            j.len(),
            sel.dimension()
        )));
    }
    for (i, &(a, k)) in j.iter().enumerate() {
        if a == 0 || a > sel.genus || k > 2 * sel.n - 2 {
            return Err(Error::Index(format!("J entry ({a}, {k}) out of range")));
        }
        if j[..i].contains(&(a, k)) {
            return Err(Error::Index(format!("J entry ({a}, {k}) repeated")));
        }
    }
    Ok(j.to_vec())
}

impl TwoPointForm for CanonicalGem {
    fn surface(&self) -> &Surface {
        self.span.bers.surface()
    }

    fn weight(&self) -> usize {
        self.span.bers.weight()
    }

    fn values(&self, x: C64, ys: &[C64]) -> Result<Vec<C64>> {
        Ok(self.values_and_dual(x, ys)?.0)
    }
}

pub struct DualMember<'a> {
    gem: &'a CanonicalGem,
    index: usize,
}

impl OnePointForm for DualMember<'_> {
    fn weight(&self) -> usize {
        self.gem.weight()
    }

    fn value(&self, x: C64) -> Result<C64> {
        Ok(self.gem.dual_values(x)?[self.index])
    }
}

/// A member of the GEM family over a canonical GEM form.
pub struct ShiftedGem<'a> {
    gem: &'a CanonicalGem,
    polys: Vec<PolyForm>,
}

impl TwoPointForm for ShiftedGem<'_> {
    fn surface(&self) -> &Surface {
        self.gem.surface()
    }

    fn weight(&self) -> usize {
        self.gem.weight()
    }

    fn values(&self, x: C64, ys: &[C64]) -> Result<Vec<C64>> {
        let (values, dual) = self.gem.values_and_dual(x, ys)?;
        Ok(ys
            .iter()
            .zip(values)
            .map(|(&y, v)| {
                v - dual
                    .iter()
                    .zip(&self.polys)
                    .map(|(d, q)| d * q.eval(y))
                    .sum::<C64>()
            })
            .collect())
    }
}

/// `(1/2πi) ∮_{C_b} Ψ(x, y)(x - w_b)^l dx` for each `y`, with the
/// node-doubling gate.
pub fn contour_moments<F: TwoPointForm + ?Sized>(
    form: &F,
    ys: &[C64],
    b: usize,
    l: usize,
    n_nodes: usize,
) -> Result<Vec<C64>> {
    let contours = HandleContours::new(form.surface().params(), 2 * n_nodes)?;
    let range = contours.range(b);
    let rows: Vec<Vec<C64>> = contours.nodes[range.clone()]
        .par_iter()
        .map(|node| form.values(node.z, ys))
        .collect::<Result<_>>()?;
    let w = contours.circles[b - 1].center;
    (0..ys.len())
        .map(|k| {
            let nodes = &contours.nodes[range.clone()];
            let values: Vec<C64> = rows
                .iter()
                .zip(nodes)
                .map(|(r, node)| r[k] * (node.z - w).powu(l as u32))
                .collect();
            let (coarse, fine) = crate::contour::doubled_sums(nodes, &values);
            crate::contour::doubling_gate("contour moment", coarse, fine)
                .map(|v| v / crate::TWO_PI_I)
        })
        .collect()
}

/// `(1/2πi) Σ_a ∮_{C_a} Ψ(·, y) Ξ[γ_a]` for each `y`.
pub fn cocycle_pairing<F: TwoPointForm + ?Sized>(
    form: &F,
    ys: &[C64],
    xi: &Cocycle,
    n_nodes: usize,
) -> Result<Vec<C64>> {
    let contours = HandleContours::new(form.surface().params(), n_nodes)?;
    let rows: Vec<Vec<C64>> = contours
        .nodes
        .par_iter()
        .map(|node| form.values(node.z, ys))
        .collect::<Result<_>>()?;
    Ok((0..ys.len())
        .map(|k| {
            let col: Vec<C64> = rows.iter().map(|r| r[k]).collect();
            contours.pairing(&col, xi)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(dimension(2, 2), 3);
        assert_eq!(dimension(2, 3), 5);
        assert_eq!(dimension(3, 2), 6);
        for s in 0..9 {
            let (a, k) = unflatten(3, s);
            assert_eq!(flat_index(3, a, k), s);
        }
    }
}

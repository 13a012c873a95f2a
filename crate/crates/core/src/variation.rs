//! Moduli variation for `N = 2`: the tangent basis `∂_{a,ℓ}`, the operator
//! `∇(x) = Σ Θ_a(x, ℓ) ∂_{a,ℓ}`, `sl₂` fields, the punctured operator, period
//! matrices and Rauch's formula `2πi ∇Ω_{ab}(x) = ν_a(x) ν_b(x)`.
//!
//! Tangent directions on the parameters `(w_a, w_{-a}, ρ_a)`:
//!
//! * `∂_{a,0} = ∂_{w_a}`
//! * `∂_{a,1} = ρ_a ∂_{ρ_a}`
//! * `∂_{a,2} = ρ_a ∂_{w_{-a}}`
//!
//! Derivatives are central differences along these vectors.

use rayon::prelude::*;
use serde::Serialize;

use crate::contour::segment_nodes;
use crate::eichler::{Cocycle, PolyForm};
use crate::error::{Error, Result};
use crate::gem::{quasi_periods, QuasiProbe};
use crate::poincare::{NuForms, Surface, TwoPointForm};
use crate::schottky::{ClassicalHandle, HandleParams, SchottkyParams};
use crate::sum::KahanSum;
use crate::{C64, TWO_PI_I};

pub const DEFAULT_STEP: f64 = 1e-5;
/// Gauss–Legendre nodes per path leg.
pub const GL_NODES: usize = 64;
/// β-paths stay at least this fraction of a radius outside foreign discs.
pub const PATH_CLEARANCE: f64 = 0.1;
/// Agreement required between `GL_NODES` and `2·GL_NODES` per leg.
pub const PERIOD_DOUBLING_TOL: f64 = 1e-10;

/// Names of the three tangent directions of a handle.
pub const DIRECTION_NAMES: [&str; 3] = ["w_a", "rho_a d/drho_a", "rho_a d/dw_-a"];

/// `p + t·∂_{a,ℓ}`, unvalidated.
pub fn tangent_step(p: &SchottkyParams, a: usize, l: usize, t: C64) -> Result<SchottkyParams> {
    let h = *p.handle(a);
    let moved = match l {
        0 => HandleParams {
            w_plus: h.w_plus + t,
            ..h
        },
        1 => HandleParams {
            rho: h.rho + t * h.rho,
            ..h
        },
        2 => HandleParams {
            w_minus: h.w_minus + t * h.rho,
            ..h
        },
        _ => return Err(Error::Index(format!("tangent direction {l} out of range"))),
    };
    p.with_handle(a, moved)
}

fn perturbed(p: &SchottkyParams, a: usize, l: usize, t: f64) -> Result<SchottkyParams> {
    let q = tangent_step(p, a, l, C64::new(t, 0.0))?;
    if !q.validate().is_valid() {
        return Err(Error::InvalidPerturbation {
            direction: format!("handle {a}, {}", DIRECTION_NAMES[l]),
        });
    }
    Ok(q)
}

/// Central differences of a vector-valued moduli function along every
/// `∂_{a,ℓ}`: `values[a-1][ℓ]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliGradient {
    pub h: f64,
    pub values: Vec<[Vec<C64>; 3]>,
}

impl ModuliGradient {
    /// `Σ_{a,ℓ} t_{a,ℓ} D_{a,ℓ} f`.
    pub fn contract(&self, t: &[[C64; 3]]) -> Vec<C64> {
        let len = self.values.first().map_or(0, |v| v[0].len());
        (0..len)
            .map(|k| {
                let mut acc = KahanSum::new();
                for (row, ta) in self.values.iter().zip(t) {
                    for l in 0..3 {
                        acc.add(ta[l] * row[l][k]);
                    }
                }
                acc.value()
            })
            .collect()
    }
}

/// `p + t·Σ v_{a,ℓ} ∂_{a,ℓ}`, unvalidated.
pub fn tangent_vector_step(p: &SchottkyParams, v: &[[C64; 3]], t: C64) -> Result<SchottkyParams> {
    if v.len() != p.genus() {
        return Err(Error::Index(format!(
            "tangent vector has {} handles, surface has {}",
            v.len(),
            p.genus()
        )));
    }
    let handles = p
        .handles()
        .iter()
        .zip(v)
        .map(|(h, c)| HandleParams {
            w_plus: h.w_plus + t * c[0],
            rho: h.rho + t * c[1] * h.rho,
            w_minus: h.w_minus + t * c[2] * h.rho,
        })
        .collect();
    SchottkyParams::new(handles)
}

/// Central difference of a holomorphic moduli function along the complex
/// tangent vector `Σ v_{a,ℓ} ∂_{a,ℓ}`.
pub fn directional_derivative<F>(p: &SchottkyParams, v: &[[C64; 3]], f: &F, h: f64) -> Result<Vec<C64>>
where
    F: Fn(&SchottkyParams) -> Result<Vec<C64>> + Sync,
{
    let eval = |t: f64| -> Result<Vec<C64>> {
        let q = tangent_vector_step(p, v, C64::new(t, 0.0))?;
        if !q.validate().is_valid() {
            return Err(Error::InvalidPerturbation {
                direction: "combined tangent vector".into(),
            });
        }
        f(&q)
    };
    let (up, down) = rayon::join(|| eval(h), || eval(-h));
    let (up, down) = (up?, down?);
    Ok(up.iter().zip(&down).map(|(u, d)| (u - d) / (2.0 * h)).collect())
}

/// Evaluates `f` at `p ± h·∂_{a,ℓ}` for every direction (concurrently) and
/// forms central differences.
pub fn moduli_gradient<F>(p: &SchottkyParams, f: &F, h: f64) -> Result<ModuliGradient>
where
    F: Fn(&SchottkyParams) -> Result<Vec<C64>> + Sync,
{
    let g = p.genus();
    let jobs: Vec<(usize, usize, f64)> = (1..=g)
        .flat_map(|a| (0..3).flat_map(move |l| [(a, l, h), (a, l, -h)]))
        .collect();
    let evals: Vec<Vec<C64>> = jobs
        .par_iter()
        .map(|&(a, l, t)| f(&perturbed(p, a, l, t)?))
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(g);
    for a in 0..g {
        let dir = |l: usize| -> Vec<C64> {
            let i = 2 * (3 * a + l);
            evals[i]
                .iter()
                .zip(&evals[i + 1])
                .map(|(u, v)| (u - v) / (2.0 * h))
                .collect()
        };
        values.push([dir(0), dir(1), dir(2)]);
    }
    Ok(ModuliGradient { h, values })
}

/// `Θ_a(x, ℓ)` with `Ψ(x, y) - Ψ(x, γ_a y)(γ_a'y)^{-1} = Σ_ℓ Θ_a(x, ℓ)(y - w_a)^ℓ`,
/// the negated quasi-period coefficients.
pub fn theta2<F: TwoPointForm + ?Sized>(form: &F, x: C64) -> Result<Vec<[C64; 3]>> {
    if form.weight() != 2 {
        return Err(Error::Config(format!(
            "moduli variation needs weight 2, got {}",
            form.weight()
        )));
    }
    let probe = QuasiProbe::new(form.surface(), 2);
    Ok(quasi_periods(form, &probe, x)?
        .into_iter()
        .map(|q| [-q.coeffs[0], -q.coeffs[1], -q.coeffs[2]])
        .collect())
}

/// `∇(x) f` for a holomorphic vector-valued moduli function.
pub fn nabla_apply<F, Fm>(form: &F, f: &Fm, x: C64, h: f64) -> Result<Vec<C64>>
where
    F: TwoPointForm + ?Sized,
    Fm: Fn(&SchottkyParams) -> Result<Vec<C64>> + Sync,
{
    let theta = theta2(form, x)?;
    directional_derivative(form.surface().params(), &theta, f, h)
}

/// Coefficients `-p_{a,ℓ}` of `L_P = -Σ p_{a,ℓ} ∂_{a,ℓ}`, where
/// `P|_{γ_a} - P = Σ_ℓ p_{a,ℓ}(z - w_a)^ℓ`.
pub fn sl2_coefficients(p: &SchottkyParams, poly: &PolyForm) -> Result<Vec<[C64; 3]>> {
    if poly.weight() != 2 {
        return Err(Error::Config("sl2 fields need a weight-2 polynomial".into()));
    }
    let xi = Cocycle::coboundary(p, poly)?;
    Ok(xi
        .canonical_coeffs(p)
        .into_iter()
        .map(|c| [-c[0], -c[1], -c[2]])
        .collect())
}

/// `L_P f = -Σ_{a,ℓ} p_{a,ℓ} D_{a,ℓ} f`, as one directional difference.
pub fn sl2_apply<Fm>(p: &SchottkyParams, poly: &PolyForm, f: &Fm, h: f64) -> Result<Vec<C64>>
where
    Fm: Fn(&SchottkyParams) -> Result<Vec<C64>> + Sync,
{
    directional_derivative(p, &sl2_coefficients(p, poly)?, f, h)
}

/// Moves one classical fixed point (`letter > 0`: repelling `W_a`, else the
/// attracting `W_{-a}`) keeping the other and the multiplier.
fn move_fixed_point(p: &SchottkyParams, letter: i32, t: f64) -> Result<SchottkyParams> {
    let a = letter.unsigned_abs() as usize;
    let c = p.handle(a).to_classical()?;
    let moved = if letter > 0 {
        ClassicalHandle {
            w_plus: c.w_plus + t,
            ..c
        }
    } else {
        ClassicalHandle {
            w_minus: c.w_minus + t,
            ..c
        }
    };
    let q = p.with_handle(a, HandleParams::from_classical(&moved)?)?;
    if !q.validate().is_valid() {
        return Err(Error::InvalidPerturbation {
            direction: format!("fixed point W_{letter}"),
        });
    }
    Ok(q)
}

/// `L_P f = Σ_{a = ±1..±g} p(W_a) ∂_{W_a} f` in classical coordinates.
pub fn sl2_apply_fixed_points<Fm>(
    p: &SchottkyParams,
    poly: &PolyForm,
    f: &Fm,
    h: f64,
) -> Result<Vec<C64>>
where
    Fm: Fn(&SchottkyParams) -> Result<Vec<C64>> + Sync,
{
    let letters: Vec<i32> = crate::schottky::letters(p.genus()).collect();
    let terms: Vec<Vec<C64>> = letters
        .par_iter()
        .map(|&l| {
            let up = f(&move_fixed_point(p, l, h)?)?;
            let down = f(&move_fixed_point(p, l, -h)?)?;
            let c = p.handle(l.unsigned_abs() as usize).to_classical()?;
            let w = if l > 0 { c.w_plus } else { c.w_minus };
            let weight = poly.eval(w) / (2.0 * h);
            Ok(up.iter().zip(&down).map(|(u, d)| (u - d) * weight).collect())
        })
        .collect::<Result<_>>()?;
    let len = terms.first().map_or(0, Vec::len);
    Ok((0..len)
        .map(|k| terms.iter().map(|t| t[k]).collect::<KahanSum>().value())
        .collect())
}

/// `∇^{(n)}(x) f = ∇(x) f + Σ_k Ψ(x, y_k) ∂_{y_k} f` for a function of the
/// moduli and the punctures `y_1..y_n`.
pub fn nabla_punctured_apply<F, Fm>(
    form: &F,
    punctures: &[C64],
    f: &Fm,
    x: C64,
    h: f64,
) -> Result<C64>
where
    F: TwoPointForm + ?Sized,
    Fm: Fn(&SchottkyParams, &[C64]) -> Result<C64> + Sync,
{
    for (i, &y) in punctures.iter().enumerate() {
        for (j, &z) in punctures[..i].iter().enumerate() {
            if (y - z).norm() < crate::poincare::POLE_TOL {
                return Err(Error::CoincidentPunctures(j, i));
            }
        }
        if (y - x).norm() < crate::poincare::POLE_TOL {
            return Err(Error::Pole { re: x.re, im: x.im });
        }
    }
    let p = form.surface().params();
    let moduli = |q: &SchottkyParams| Ok(vec![f(q, punctures)?]);
    let mut total = nabla_apply(form, &moduli, x, h)?[0];
    let psi = form.values(x, punctures)?;
    for (k, &y) in punctures.iter().enumerate() {
        let mut up = punctures.to_vec();
        let mut down = punctures.to_vec();
        up[k] = y + h;
        down[k] = y - h;
        let d = (f(p, &up)? - f(p, &down)?) / (2.0 * h);
        total += psi[k] * d;
    }
    Ok(total)
}

/// How a β-path runs between its endpoints `z₀ → z₁`: straight or via one
/// extra vertex
/// `z₀ + t(z₁ - z₀) + i s(z₁ - z₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Route {
    Straight,
    Detour { t: f64, s: f64 },
}

const DETOUR_T: [f64; 9] = [0.5, 0.25, 0.75, 0.0, 1.0, -0.25, 1.25, -0.5, 1.5];
const DETOUR_S: [f64; 10] = [0.1, -0.1, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.0, -1.0];

/// A polyline from `γ_b z₀ ∈ C_{-b}` back to `z₀ ∈ C_b`, with `z₀` the point
/// of `C_b` nearest `C_{-b}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaPath {
    pub b: usize,
    pub route: Route,
    pub vertices: Vec<C64>,
}

impl BetaPath {
    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

fn endpoints(p: &SchottkyParams, b: usize) -> (C64, C64) {
    let h = p.handle(b);
    let dir = h.w_minus - h.w_plus;
    let z0 = h.w_plus + dir / dir.norm() * h.radius();
    (p.generator(b as i32).apply_c(z0), z0)
}

fn route_vertices(z0: C64, z1: C64, route: Route) -> Vec<C64> {
    match route {
        Route::Straight => vec![z0, z1],
        Route::Detour { t, s } => {
            let d = z1 - z0;
            vec![z0, z0 + d * t + C64::new(0.0, s) * d, z1]
        }
    }
}

fn segment_distance(c: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let t = ((c - a) * d.conj()).re / d.norm_sqr();
    (c - (a + d * t.clamp(0.0, 1.0))).norm()
}

/// Every leg must keep `(1 + PATH_CLEARANCE)·r` from foreign discs, leave the
/// starting disc outward and enter the final disc from outside.
fn path_clear(p: &SchottkyParams, b: usize, vertices: &[C64]) -> bool {
    let start = p.disc(-(b as i32));
    let end = p.disc(b as i32);
    let legs = vertices.len() - 1;
    for (i, w) in vertices.windows(2).enumerate() {
        let (a, z) = (w[0], w[1]);
        if (z - a).norm() == 0.0 {
            return false;
        }
        for d in p.discs() {
            let first_at_start = i == 0 && d.letter == start.letter;
            let last_at_end = i + 1 == legs && d.letter == end.letter;
            if first_at_start && ((z - a) * (a - d.center).conj()).re <= 0.0 {
                return false;
            }
            if last_at_end && ((a - z) * (z - d.center).conj()).re <= 0.0 {
                return false;
            }
            if first_at_start || last_at_end {
                continue;
            }
            if segment_distance(d.center, a, z) < (1.0 + PATH_CLEARANCE) * d.radius {
                return false;
            }
        }
    }
    true
}

/// Route choice per handle, fixed on a base surface and reused under small
/// perturbations so that finite differences follow one homotopy class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathPlan {
    pub routes: Vec<Route>,
}

impl PathPlan {
    pub fn new(p: &SchottkyParams) -> Result<Self> {
        let routes = (1..=p.genus())
            .map(|b| {
                let (z0, z1) = endpoints(p, b);
                if path_clear(p, b, &route_vertices(z0, z1, Route::Straight)) {
                    return Ok(Route::Straight);
                }
                let mut best: Option<(f64, Route)> = None;
                for &t in &DETOUR_T {
                    for &s in &DETOUR_S {
                        let route = Route::Detour { t, s };
                        let v = route_vertices(z0, z1, route);
                        if !path_clear(p, b, &v) {
                            continue;
                        }
                        let len = (v[1] - v[0]).norm() + (v[2] - v[1]).norm();
                        if best.is_none_or(|(l, _)| len < l) {
                            best = Some((len, route));
                        }
                    }
                }
                best.map(|(_, r)| r).ok_or(Error::PathBlocked(b))
            })
            .collect::<Result<_>>()?;
        Ok(Self { routes })
    }

    pub fn paths(&self, p: &SchottkyParams) -> Result<Vec<BetaPath>> {
        self.routes
            .iter()
            .enumerate()
            .map(|(i, &route)| {
                let b = i + 1;
                let (z0, z1) = endpoints(p, b);
                let vertices = route_vertices(z0, z1, route);
                if !path_clear(p, b, &vertices) {
                    return Err(Error::PathBlocked(b));
                }
                Ok(BetaPath { b, route, vertices })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodMatrix {
    /// `omega[a][b] = (1/2πi) ∫_{β_b} ν_a`; diagonal real parts are defined
    /// modulo integers.
    pub omega: Vec<Vec<C64>>,
    pub symmetry_error: f64,
    /// Largest change between `GL_NODES` and `2·GL_NODES` per leg (zero when
    /// the gate was skipped).
    pub doubling_residual: f64,
    pub paths: Vec<BetaPath>,
}

impl PeriodMatrix {
    pub fn genus(&self) -> usize {
        self.omega.len()
    }

    pub fn flat(&self) -> Vec<C64> {
        self.omega.iter().flatten().copied().collect()
    }
}

fn path_integrals(nu: &NuForms, path: &BetaPath, nodes_per_leg: usize) -> Result<Vec<C64>> {
    let nodes: Vec<_> = path
        .vertices
        .windows(2)
        .flat_map(|w| segment_nodes(w[0], w[1], nodes_per_leg))
        .collect();
    let values: Vec<Vec<C64>> = nodes
        .par_iter()
        .map(|n| nu.values(n.z))
        .collect::<Result<_>>()?;
    let g = nu.surface().genus();
    Ok((0..g)
        .map(|a| {
            nodes
                .iter()
                .zip(&values)
                .map(|(n, v)| v[a] * n.dz)
                .collect::<KahanSum>()
                .value()
                / TWO_PI_I
        })
        .collect())
}

/// `Ω_{ab} = (1/2πi) ∫_{β_b} ν_a` along routes from `plan`. With `gate`, each
/// integral is also computed with doubled nodes and must agree to
/// [`PERIOD_DOUBLING_TOL`].
pub fn period_matrix_with(surface: &Surface, plan: &PathPlan, gate: bool) -> Result<PeriodMatrix> {
    let p = surface.params();
    let paths = plan.paths(p)?;
    let nu = NuForms::new(surface.clone())?;
    let g = p.genus();
    let mut omega = vec![vec![C64::new(0.0, 0.0); g]; g];
    let mut doubling: f64 = 0.0;
    for path in &paths {
        let col = path_integrals(&nu, path, GL_NODES)?;
        if gate {
            let fine = path_integrals(&nu, path, 2 * GL_NODES)?;
            for (u, v) in col.iter().zip(&fine) {
                doubling = doubling.max((u - v).norm() / v.norm().max(1.0));
            }
        }
        for a in 0..g {
            omega[a][path.b - 1] = col[a];
        }
    }
    if doubling > PERIOD_DOUBLING_TOL {
        return Err(Error::Residual {
            what: "period integral node doubling",
            residual: doubling,
            tolerance: PERIOD_DOUBLING_TOL,
        });
    }
    let mut symmetry_error: f64 = 0.0;
    for a in 0..g {
        for b in 0..a {
            symmetry_error = symmetry_error.max((omega[a][b] - omega[b][a]).norm());
        }
    }
    Ok(PeriodMatrix {
        omega,
        symmetry_error,
        doubling_residual: doubling,
        paths,
    })
}

/// Period matrix with routes planned on the surface itself and the doubling
/// gate on.
pub fn period_matrix(surface: &Surface) -> Result<PeriodMatrix> {
    let plan = PathPlan::new(surface.params())?;
    period_matrix_with(surface, &plan, true)
}

/// `p ↦ Ω(p)` flattened row-major, with routes frozen to `plan` and the
/// truncation of `base`.
pub fn omega_function<'a>(
    base: &'a Surface,
    plan: &'a PathPlan,
) -> impl Fn(&SchottkyParams) -> Result<Vec<C64>> + Sync + 'a {
    move |q: &SchottkyParams| {
        let s = base.with_params(q.clone())?;
        Ok(period_matrix_with(&s, plan, false)?.flat())
    }
}

/// Per-sample Rauch comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RauchSample {
    pub x: C64,
    /// `2πi ∇Ω_{ab}(x)`, row-major.
    pub lhs: Vec<C64>,
    /// `ν_a(x) ν_b(x)`, row-major.
    pub rhs: Vec<C64>,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RauchReport {
    pub h: f64,
    pub max_len: usize,
    pub samples: Vec<RauchSample>,
    pub max_rel_error: f64,
}

/// Compares `2πi ∇(x)Ω`, with `∇(x)` built from the quasi-periods of `form`,
/// against `ν_a(x) ν_b(x)`.
pub fn rauch_check<F: TwoPointForm + ?Sized>(form: &F, xs: &[C64], h: f64) -> Result<RauchReport> {
    let surface = form.surface();
    let nu = NuForms::new(surface.clone())?;
    let plan = PathPlan::new(surface.params())?;
    let omega = omega_function(surface, &plan);
    let g = surface.genus();
    let samples = xs
        .iter()
        .map(|&x| {
            let lhs: Vec<C64> = nabla_apply(form, &omega, x, h)?
                .into_iter()
                .map(|v| v * TWO_PI_I)
                .collect();
            let n = nu.values(x)?;
            let rhs: Vec<C64> = (0..g)
                .flat_map(|a| (0..g).map(move |b| (a, b)))
                .map(|(a, b)| n[a] * n[b])
                .collect();
            let max_rel_error = lhs
                .iter()
                .zip(&rhs)
                .map(|(l, r)| (l - r).norm() / r.norm())
                .fold(0.0, f64::max);
            Ok(RauchSample {
                x,
                lhs,
                rhs,
                max_rel_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_rel_error = samples.iter().map(|s| s.max_rel_error).fold(0.0, f64::max);
    Ok(RauchReport {
        h,
        max_len: surface.config().max_len,
        samples,
        max_rel_error,
    })
}

/// Deterministic sample points in the fundamental domain: the probe point
/// shifted by fractions of its clearance.
pub fn default_samples(surface: &Surface, count: usize) -> Vec<C64> {
    let c = surface.probe();
    let r = 0.6 * surface.params().clearance(c);
    (0..count)
        .map(|k| c + C64::from_polar(r * (0.3 + 0.5 * k as f64 / count.max(1) as f64), 0.7 + 2.1 * k as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::reference_surface;

    #[test]
    fn tangent_steps_scale_by_rho() {
        let p = reference_surface();
        let t = C64::new(0.01, 0.0);
        let q = tangent_step(&p, 1, 1, t).unwrap();
        assert!((q.handle(1).rho - p.handle(1).rho * 1.01).norm() < 1e-15);
        let q = tangent_step(&p, 2, 2, t).unwrap();
        assert!((q.handle(2).w_minus - (p.handle(2).w_minus + 0.01 * p.handle(2).rho)).norm() < 1e-15);
        assert!(tangent_step(&p, 1, 3, t).is_err());
    }

    #[test]
    fn constant_function_has_zero_gradient() {
        let p = reference_surface();
        let g = moduli_gradient(&p, &|_: &SchottkyParams| Ok(vec![C64::new(3.0, 1.0)]), 1e-5).unwrap();
        let t = vec![[C64::new(1.0, 2.0); 3]; 2];
        assert_eq!(g.contract(&t)[0], C64::new(0.0, 0.0));
    }

    #[test]
    fn reference_paths_detour_around_companion_disc() {
        let p = reference_surface();
        let plan = PathPlan::new(&p).unwrap();
        let paths = plan.paths(&p).unwrap();
        assert_eq!(paths.len(), 2);
        for path in &paths {
            assert!(matches!(path.route, Route::Detour { .. }));
            assert!(path_clear(&p, path.b, &path.vertices));
        }
    }
}

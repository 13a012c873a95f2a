//! Weight `1 - N` polynomial forms and Eichler cocycles.
//!
//! A [`PolyForm`] stores `p(z)` for `P(z) = p(z) dz^{1-N}` in the monomial
//! basis; the shifted basis `(z - w)^k` is reached through
//! [`PolyForm::to_shifted`] and [`PolyForm::from_shifted`]. Cocycles are
//! determined by their values on the generators and extended to words with
//! `Ξ[γλ] = Ξ[γ]|_λ + Ξ[λ]`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::moebius::Moebius;
use crate::schottky::{letters, GroupWord, SchottkyParams};
use crate::C64;

/// Relative residual allowed at the held-out interpolation node.
pub const PULLBACK_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyForm {
    n: usize,
    coeffs: Vec<C64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl PolyForm {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "weight N must be positive");
        Self {
            n,
            coeffs: vec![C64::new(0.0, 0.0); 2 * n - 1],
        }
    }

    /// Takes monomial coefficients `p_0..p_{2N-2}`; shorter input is padded.
    pub fn new(n: usize, coeffs: &[C64]) -> Result<Self> {
        let mut p = Self::zero(n);
        if coeffs.len() > p.coeffs.len() {
            return Err(Error::Index(format!(
                "{} coefficients for weight {n} (degree <= {})",
                coeffs.len(),
                2 * n - 2
            )));
        }
        p.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(p)
    }

    pub fn monomial(n: usize, k: usize) -> Result<Self> {
        let mut p = Self::zero(n);
        *p.coeffs
            .get_mut(k)
            .ok_or_else(|| Error::Index(format!("monomial z^{k} at weight {n}")))? =
            C64::new(1.0, 0.0);
        Ok(p)
    }

    /// `Σ_k s_k (z - center)^k` expanded into monomials.
    pub fn from_shifted(n: usize, center: C64, shifted: &[C64]) -> Result<Self> {
        let mut p = Self::zero(n);
        if shifted.len() > p.coeffs.len() {
            return Err(Error::Index("too many shifted coefficients".into()));
        }
        for (k, &s) in shifted.iter().enumerate() {
            // (z - c)^k = Σ_j C(k,j) z^j (-c)^{k-j}
            for j in 0..=k {
                p.coeffs[j] += s * binomial(k, j) * (-center).powu((k - j) as u32);
            }
        }
        Ok(p)
    }

    /// Coefficients `s_k` with `p(z) = Σ_k s_k (z - center)^k`.
    pub fn to_shifted(&self, center: C64) -> Vec<C64> {
        // s_k = Σ_{j>=k} C(j,k) p_j c^{j-k}
        (0..self.coeffs.len())
            .map(|k| {
                (k..self.coeffs.len())
                    .map(|j| self.coeffs[j] * binomial(j, k) * center.powu((j - k) as u32))
                    .sum()
            })
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference.
    pub fn coeff_distance(&self, other: &PolyForm) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient difference relative to `max(1, |self|)`.
    pub fn rel_distance(&self, other: &PolyForm) -> f64 {
        self.coeff_distance(other) / self.max_abs().max(other.max_abs()).max(1.0)
    }

    /// Coefficient of `P|_M`, i.e. `p(Mz)(M'z)^{1-N}`, evaluated without
    /// division as `Σ_k p_k (az+b)^k (cz+d)^{2N-2-k}`.
    pub fn pullback_value(&self, m: &Moebius, z: C64) -> C64 {
        let num = m.a * z + m.b;
        let den = m.c * z + m.d;
        let deg = self.coeffs.len() - 1;
        let mut acc = C64::new(0.0, 0.0);
        let mut num_pow = C64::new(1.0, 0.0);
        for (k, &p) in self.coeffs.iter().enumerate() {
            acc += p * num_pow * den.powu((deg - k) as u32);
            num_pow *= num;
        }
        acc
    }

    /// `|P|·‖M‖^{2N-2}`, a bound on the magnitudes combined in `P|_M`.
    pub fn pullback_scale(&self, m: &Moebius) -> f64 {
        let entry = [m.a, m.b, m.c, m.d].iter().map(|z| z.norm()).fold(0.0, f64::max);
        self.max_abs() * entry.powi(self.coeffs.len() as i32 - 1)
    }

    /// `Σ_k |p_k| |az+b|^k |cz+d|^{2N-2-k}`, the rounding scale of
    /// [`pullback_value`](Self::pullback_value).
    fn pullback_magnitude(&self, m: &Moebius, z: C64) -> f64 {
        let num = (m.a * z + m.b).norm();
        let den = (m.c * z + m.d).norm();
        let deg = self.coeffs.len() - 1;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, p)| p.norm() * num.powi(k as i32) * den.powi((deg - k) as i32))
            .sum()
    }

    /// `P|_M` recovered by interpolation at `2N - 1` equispaced nodes on the
    /// circle `|z| = radius`, checked at one held-out node.
    pub fn pullback(&self, m: &Moebius, radius: f64) -> Result<PolyForm> {
        let count = self.coeffs.len();
        let node = |t: f64| C64::from_polar(radius, t);
        let values: Vec<C64> = (0..count)
            .map(|j| self.pullback_value(m, node(2.0 * PI * j as f64 / count as f64)))
            .collect();
        let mut out = Self::zero(self.n);
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            let s: C64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / count as f64))
                .sum();
            *c = s / (count as f64 * radius.powi(k as i32));
        }
        let held_out = node(PI / count as f64 + 0.25);
        let expect = self.pullback_value(m, held_out);
        let scale = (0..count)
            .map(|j| node(2.0 * PI * j as f64 / count as f64))
            .chain([held_out])
            .map(|z| self.pullback_magnitude(m, z))
            .fold(0.0, f64::max);
        let residual = (out.eval(held_out) - expect).norm();
        if residual > PULLBACK_RESIDUAL_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Residual {
                what: "polynomial pullback",
                residual: residual / scale,
                tolerance: PULLBACK_RESIDUAL_TOL,
            });
        }
        Ok(out)
    }

    fn zip_with(&self, other: &PolyForm, f: impl Fn(C64, C64) -> C64) -> PolyForm {
        assert_eq!(self.n, other.n, "weight mismatch");
        PolyForm {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &PolyForm {
    type Output = PolyForm;
    fn add(self, rhs: &PolyForm) -> PolyForm {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PolyForm {
    type Output = PolyForm;
    fn sub(self, rhs: &PolyForm) -> PolyForm {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &PolyForm {
    type Output = PolyForm;
    fn neg(self) -> PolyForm {
        PolyForm {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<C64> for &PolyForm {
    type Output = PolyForm;
    fn mul(self, s: C64) -> PolyForm {
        PolyForm {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// Interpolation radius `2 max|w| + 2` for a surface.
pub fn node_radius(p: &SchottkyParams) -> f64 {
    let wmax = p
        .handles()
        .iter()
        .flat_map(|h| [h.w_plus.norm(), h.w_minus.norm()])
        .fold(0.0, f64::max);
    2.0 * wmax + 2.0
}

/// An Eichler 1-cocycle, stored as its values on `γ_1..γ_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    n: usize,
    values: Vec<PolyForm>,
    generators: Vec<Moebius>,
    radius: f64,
}

impl Cocycle {
    pub fn from_generator_values(p: &SchottkyParams, values: Vec<PolyForm>) -> Result<Self> {
        if values.len() != p.genus() {
            return Err(Error::Index(format!(
                "{} generator values for genus {}",
                values.len(),
                p.genus()
            )));
        }
        let n = values[0].weight();
        if values.iter().any(|v| v.weight() != n) {
            return Err(Error::Index("mixed weights in cocycle".into()));
        }
        Ok(Self {
            n,
            values,
            generators: letters(p.genus()).map(|l| *p.generator(l)).collect(),
            radius: node_radius(p),
        })
    }

    pub fn zero(p: &SchottkyParams, n: usize) -> Self {
        Self::from_generator_values(p, vec![PolyForm::zero(n); p.genus()]).expect("valid shape")
    }

    /// `Ξ_{ak}` with `Ξ_{ak}[γ_b](z) = δ_{ab} (z - w_a)^k`.
    pub fn canonical(p: &SchottkyParams, n: usize, a: usize, k: usize) -> Result<Self> {
        if a == 0 || a > p.genus() {
            return Err(Error::Index(format!("handle {a} for genus {}", p.genus())));
        }
        if k > 2 * n - 2 {
            return Err(Error::Index(format!("k = {k} exceeds 2N-2 = {}", 2 * n - 2)));
        }
        let mut shifted = vec![C64::new(0.0, 0.0); k + 1];
        shifted[k] = C64::new(1.0, 0.0);
        let mut values = vec![PolyForm::zero(n); p.genus()];
        values[a - 1] = PolyForm::from_shifted(n, p.handle(a).w_plus, &shifted)?;
        Self::from_generator_values(p, values)
    }

    /// Coboundary `Ξ_P[γ] = P|_γ - P`.
    pub fn coboundary(p: &SchottkyParams, poly: &PolyForm) -> Result<Self> {
        let radius = node_radius(p);
        let values = (1..=p.genus() as i32)
            .map(|a| Ok(&poly.pullback(p.generator(a), radius)? - poly))
            .collect::<Result<Vec<_>>>()?;
        Self::from_generator_values(p, values)
    }

    /// `Σ_{a,k} coeffs[a][k] Ξ_{ak}`.
    pub fn from_canonical_coeffs(p: &SchottkyParams, n: usize, coeffs: &[Vec<C64>]) -> Result<Self> {
        let values = coeffs
            .iter()
            .enumerate()
            .map(|(i, s)| PolyForm::from_shifted(n, p.handle(i + 1).w_plus, s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_generator_values(p, values)
    }

    /// Coefficients `p_{ak}` of the expansion in the canonical basis.
    pub fn canonical_coeffs(&self, p: &SchottkyParams) -> Vec<Vec<C64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v.to_shifted(p.handle(i + 1).w_plus))
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.n
    }

    /// `Ξ[γ_a]` for `a` in `1..=g`.
    pub fn generator_value(&self, a: usize) -> &PolyForm {
        &self.values[a - 1]
    }

    fn letter_value(&self, letter: i32) -> Result<PolyForm> {
        let a = letter.unsigned_abs() as usize;
        let v = &self.values[a - 1];
        if letter > 0 {
            Ok(v.clone())
        } else {
            // Ξ[γ⁻¹] = -Ξ[γ]|_{γ⁻¹}
            let inv = &self.generators[2 * (a - 1) + 1];
            Ok(-&v.pullback(inv, self.radius)?)
        }
    }

    /// Value on a reduced word.
    pub fn eval(&self, word: &GroupWord) -> Result<PolyForm> {
        Ok(self.eval_with_scale(word)?.0)
    }

    /// Value on a reduced word together with the largest magnitude
    /// `|P|·‖M‖^{2N-2}` passed through a pullback along the way; rounding
    /// error in the value is relative to this scale.
    pub fn eval_with_scale(&self, word: &GroupWord) -> Result<(PolyForm, f64)> {
        let mut acc = PolyForm::zero(self.n);
        let mut scale: f64 = 0.0;
        for &l in word.letters() {
            let g = &self.generators[crate::schottky::letter_index(l)];
            scale = scale.max(acc.pullback_scale(g));
            if l < 0 {
                let a = l.unsigned_abs() as usize;
                scale = scale.max(self.values[a - 1].pullback_scale(g));
            }
            acc = &acc.pullback(g, self.radius)? + &self.letter_value(l)?;
        }
        let scale = scale.max(acc.max_abs());
        Ok((acc, scale))
    }

    pub fn add(&self, other: &Cocycle) -> Cocycle {
        Cocycle {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: C64) -> Cocycle {
        Cocycle {
            values: self.values.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::reference_surface;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn shifted_basis_round_trip() {
        let p = PolyForm::new(3, &[c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0), c(2.0, 0.0), c(0.1, -0.1)])
            .unwrap();
        let center = c(-6.0, 0.5);
        let s = p.to_shifted(center);
        let back = PolyForm::from_shifted(3, center, &s).unwrap();
        assert!(p.rel_distance(&back) < 1e-13);
        let z = c(0.3, -0.7);
        let direct: C64 = s.iter().enumerate().map(|(k, sk)| sk * (z - center).powu(k as u32)).sum();
        assert!((direct - p.eval(z)).norm() < 1e-11);
    }

    #[test]
    fn pullback_by_identity_is_noop() {
        let p = PolyForm::new(2, &[c(1.0, 0.0), c(2.0, -1.0), c(0.5, 0.5)]).unwrap();
        assert!(p.pullback(&Moebius::IDENTITY, 14.0).unwrap().rel_distance(&p) < 1e-12);
    }

    #[test]
    fn pullback_of_constant_by_handle() {
        // (γ'z)^{-1} = -(z - w)²/rho
        let (w, wm, rho) = (c(-6.0, 0.0), c(-2.0, 0.0), c(0.09, 0.0));
        let m = Moebius::handle(w, wm, rho).unwrap();
        let one = PolyForm::monomial(2, 0).unwrap();
        let pb = one.pullback(&m, 14.0).unwrap();
        let expect = PolyForm::from_shifted(2, w, &[c(0.0, 0.0), c(0.0, 0.0), -rho.inv()]).unwrap();
        assert!(pb.rel_distance(&expect) < 1e-13);
    }

    #[test]
    fn canonical_cocycle_values() {
        let p = reference_surface();
        let x = Cocycle::canonical(&p, 2, 1, 0).unwrap();
        assert_eq!(x.generator_value(2).max_abs(), 0.0);
        let x12 = Cocycle::canonical(&p, 2, 1, 2).unwrap();
        let w1 = p.handle(1).w_plus;
        let expect = [w1 * w1, -2.0 * w1, c(1.0, 0.0)];
        for (a, b) in x12.generator_value(1).coeffs().iter().zip(expect) {
            assert!((a - b).norm() < 1e-14);
        }
        let inv = x12.eval(&GroupWord(vec![-1])).unwrap();
        let direct = -&x12.generator_value(1).pullback(&p.generator(-1).clone(), node_radius(&p)).unwrap();
        assert!(inv.rel_distance(&direct) < 1e-12);
        assert!(Cocycle::canonical(&p, 2, 3, 0).is_err());
        assert!(Cocycle::canonical(&p, 2, 1, 3).is_err());
    }

    #[test]
    fn cocycle_identity_and_inverse_pair() {
        let p = reference_surface();
        let x = Cocycle::canonical(&p, 2, 1, 1).unwrap();
        assert_eq!(x.eval(&GroupWord::identity()).unwrap().max_abs(), 0.0);
        // the two construction rules force Ξ[γ γ⁻¹] = 0 even unreduced
        let g = x.eval(&GroupWord(vec![1])).unwrap();
        let gi = x.eval(&GroupWord(vec![-1])).unwrap();
        let both = &g.pullback(p.generator(-1), node_radius(&p)).unwrap() + &gi;
        assert!(both.max_abs() < 1e-11);
    }

    #[test]
    fn coboundary_of_zero_and_of_constant() {
        let p = reference_surface();
        let zero = Cocycle::coboundary(&p, &PolyForm::zero(2)).unwrap();
        assert!(zero.generator_value(1).max_abs() == 0.0);
        let one = PolyForm::monomial(2, 0).unwrap();
        let cb = Cocycle::coboundary(&p, &one).unwrap();
        for a in 1..=2 {
            let h = p.handle(a);
            let expect = &PolyForm::from_shifted(2, h.w_plus, &[c(0.0, 0.0), c(0.0, 0.0), -h.rho.inv()])
                .unwrap()
                - &one;
            assert!(cb.generator_value(a).rel_distance(&expect) < 1e-12);
        }
    }
}

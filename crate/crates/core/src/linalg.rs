//! Small dense complex linear algebra: singular values, rank-revealing column
//! pivoting, gated inversion and polynomial fitting on circles.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

pub type CMatrix = DMatrix<C64>;

/// Inversions with a larger 2-norm condition number are rejected.
pub const MAX_CONDITION: f64 = 1e10;

/// Singular values in decreasing order.
///
/// Non-finite input yields all-NaN output rather than an endless iteration.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let k = m.nrows().min(m.ncols());
    if m.iter().any(|z| !z.is_finite()) {
        return vec![f64::NAN; k];
    }
    let Some(svd) = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, 10_000) else {
        return vec![f64::NAN; k];
    };
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Singular values below this fraction of the largest count as zero.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Rank diagnostics of a matrix against an expected rank `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub singular_values: Vec<f64>,
    /// Number of singular values above `RANK_REL_TOL · σ_max`.
    pub rank: usize,
    /// `σ_{r-1}/σ_r` at the expected rank (∞ when `σ_r` is exactly zero or
    /// `r` is full).
    pub gap: f64,
}

pub fn rank_report(m: &CMatrix, expected: usize) -> RankReport {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&v| v > RANK_REL_TOL * smax).count();
    let gap = if expected == 0 || expected >= s.len() || s[expected] == 0.0 {
        f64::INFINITY
    } else {
        s[expected - 1] / s[expected]
    };
    RankReport {
        gap,
        rank,
        singular_values: s,
    }
}

/// Column order chosen by Gram–Schmidt with column pivoting: at each step the
/// remaining column with the largest residual norm is taken. Returns the
/// first `k` picks.
pub fn pivot_columns(m: &CMatrix, k: usize) -> Vec<usize> {
    let mut cols: Vec<Vec<C64>> = (0..m.ncols())
        .map(|j| m.column(j).iter().copied().collect())
        .collect();
    let mut remaining: Vec<usize> = (0..m.ncols()).collect();
    let mut picked = Vec::with_capacity(k);
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..k.min(m.ncols()) {
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &j)| (pos, norm(&cols[j])))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let j = remaining.remove(pos);
        let nj = norm(&cols[j]);
        picked.push(j);
        if nj == 0.0 {
            continue;
        }
        let q: Vec<C64> = cols[j].iter().map(|z| z / nj).collect();
        for &other in &remaining {
            // two passes keep the residuals orthogonal in floating point
            for _ in 0..2 {
                let proj: C64 = q.iter().zip(&cols[other]).map(|(a, b)| a.conj() * b).sum();
                for (c, qi) in cols[other].iter_mut().zip(&q) {
                    *c -= proj * qi;
                }
            }
        }
    }
    picked
}

/// Inverse together with its 2-norm condition number; fails above
/// [`MAX_CONDITION`].
pub fn inverse_checked(m: &CMatrix) -> Result<(CMatrix, f64)> {
    let s = singular_values(m);
    let cond = match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    };
    if !(cond <= MAX_CONDITION) {
        return Err(Error::IllConditioned(cond));
    }
    let inv = m
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::IllConditioned(f64::INFINITY))?;
    Ok((inv, cond))
}

/// The `n` interpolation nodes `center + radius·e^{2πij/n}`.
pub fn circle_nodes(center: C64, radius: f64, n: usize) -> Vec<C64> {
    (0..n)
        .map(|j| center + C64::from_polar(radius, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

/// Coefficients `c_k` of the polynomial `Σ c_k (z - center)^k` of degree
/// `< n` interpolating `values` at [`circle_nodes`]`(center, radius, n)`.
pub fn circle_fit(values: &[C64], radius: f64) -> Vec<C64> {
    let n = values.len();
    (0..n)
        .map(|k| {
            let s: C64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * ((j * k) % n) as f64 / n as f64))
                .sum();
            s / (n as f64 * radius.powi(k as i32))
        })
        .collect()
}

/// Evaluates `Σ c_k (z - center)^k`.
pub fn shifted_eval(coeffs: &[C64], center: C64, z: C64) -> C64 {
    let t = z - center;
    coeffs
        .iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &c| acc * t + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rank_of_outer_product_sum() {
        let u = [c(1.0, 0.0), c(2.0, 1.0), c(0.0, -1.0), c(3.0, 0.5)];
        let v = [c(0.5, 0.5), c(-1.0, 0.0), c(2.0, 2.0), c(1.0, -3.0)];
        let w = [c(0.0, 1.0), c(1.0, 1.0), c(-2.0, 0.0), c(0.3, 0.0)];
        let m = CMatrix::from_fn(4, 4, |i, j| u[i] * v[j] + w[i] * u[j]);
        let r = rank_report(&m, 2);
        assert_eq!(r.rank, 2);
        assert!(r.gap > 1e10);
    }

    #[test]
    fn pivots_pick_independent_columns() {
        // column 1 duplicates column 0
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(2.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 1.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.5, 0.0),
            ],
        );
        let p = pivot_columns(&m, 2);
        assert!(p.contains(&2));
        assert!(p.contains(&0) ^ p.contains(&1));
    }

    #[test]
    fn inverse_gate() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let (inv, cond) = inverse_checked(&m).unwrap();
        assert!((&m * &inv - CMatrix::identity(2, 2)).norm() < 1e-14);
        assert!(cond > 1.0);
        let sing = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        assert!(matches!(inverse_checked(&sing), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn circle_fit_recovers_polynomial() {
        let coeffs = [c(1.0, -1.0), c(0.5, 0.0), c(0.0, 2.0)];
        let center = c(0.3, 0.1);
        let nodes = circle_nodes(center, 0.7, 3);
        let values: Vec<C64> = nodes.iter().map(|&z| shifted_eval(&coeffs, center, z)).collect();
        let fit = circle_fit(&values, 0.7);
        for (a, b) in fit.iter().zip(coeffs) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}

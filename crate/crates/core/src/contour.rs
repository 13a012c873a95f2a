//! Trapezoid quadrature on circles, Gauss–Legendre quadrature on segments, and
//! the pairing between `N`-forms and cocycles.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::eichler::Cocycle;
use crate::error::{Error, Result};
use crate::schottky::SchottkyParams;
use crate::sum::KahanSum;
use crate::{C64, TWO_PI_I};

pub const DEFAULT_NODES: usize = 256;
/// Maximum allowed change between the `n`- and `2n`-node rules.
pub const DOUBLING_TOL: f64 = 1e-10;

/// A counterclockwise circle `center + radius·scale·e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleContour {
    pub center: C64,
    pub radius: f64,
    pub n_nodes: usize,
    pub scale: f64,
}

/// A quadrature node and its weight `dz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub z: C64,
    pub dz: C64,
}

impl CircleContour {
    pub fn new(center: C64, radius: f64, n_nodes: usize) -> Result<Self> {
        Self {
            center,
            radius,
            n_nodes,
            scale: 1.0,
        }
        .checked()
    }

    /// The isometric circle `C_letter`.
    pub fn isometric(p: &SchottkyParams, letter: i32, n_nodes: usize) -> Result<Self> {
        let d = p.disc(letter);
        Self::new(d.center, d.radius, n_nodes)
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        Self { scale, ..self }.checked()
    }

    pub fn with_nodes(self, n_nodes: usize) -> Result<Self> {
        Self { n_nodes, ..self }.checked()
    }

    fn checked(self) -> Result<Self> {
        if !(self.radius * self.scale > 0.0) {
            return Err(Error::Config(format!(
                "contour radius must be positive, got {}",
                self.radius * self.scale
            )));
        }
        if self.n_nodes < 16 || !self.n_nodes.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "contour node count must be even and >= 16, got {}",
                self.n_nodes
            )));
        }
        Ok(self)
    }

    pub fn effective_radius(&self) -> f64 {
        self.radius * self.scale
    }

    pub fn nodes(&self) -> Vec<Node> {
        let r = self.effective_radius();
        let h = 2.0 * PI / self.n_nodes as f64;
        (0..self.n_nodes)
            .map(|j| {
                let e = C64::from_polar(r, h * j as f64);
                Node {
                    z: self.center + e,
                    dz: C64::new(0.0, h) * e,
                }
            })
            .collect()
    }

    /// `∮ f(z) dz`.
    pub fn integral<F>(&self, f: F) -> Result<C64>
    where
        F: Fn(C64) -> Result<C64> + Sync,
    {
        let nodes = self.nodes();
        let values = eval_nodes(&nodes, &f)?;
        Ok(weighted_sum(&nodes, &values))
    }

    /// `∮ f(z) dz` with `n` and with `2n` nodes, from a single `2n`-node pass.
    pub fn integral_doubled<F>(&self, f: F) -> Result<(C64, C64)>
    where
        F: Fn(C64) -> Result<C64> + Sync,
    {
        let fine = self.with_nodes(2 * self.n_nodes)?;
        let nodes = fine.nodes();
        let values = eval_nodes(&nodes, &f)?;
        Ok(doubled_sums(&nodes, &values))
    }
}

fn eval_nodes<F>(nodes: &[Node], f: &F) -> Result<Vec<C64>>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    nodes.par_iter().map(|n| f(n.z)).collect()
}

/// `Σ values_j dz_j` in node order.
pub fn weighted_sum(nodes: &[Node], values: &[C64]) -> C64 {
    nodes
        .iter()
        .zip(values)
        .map(|(n, v)| v * n.dz)
        .collect::<KahanSum>()
        .value()
}

/// Given values on a `2n`-node circle, returns the `n`-node (even nodes,
/// doubled weights) and `2n`-node trapezoid sums.
pub fn doubled_sums(nodes: &[Node], values: &[C64]) -> (C64, C64) {
    let coarse = nodes
        .iter()
        .zip(values)
        .step_by(2)
        .map(|(n, v)| v * n.dz * 2.0)
        .collect::<KahanSum>()
        .value();
    (coarse, weighted_sum(nodes, values))
}

/// Fails unless the two rules agree to [`DOUBLING_TOL`] relative to
/// `max(1, |fine|)`.
pub fn doubling_gate(what: &'static str, coarse: C64, fine: C64) -> Result<C64> {
    let residual = (coarse - fine).norm() / fine.norm().max(1.0);
    if residual > DOUBLING_TOL {
        return Err(Error::Residual {
            what,
            residual,
            tolerance: DOUBLING_TOL,
        });
    }
    Ok(fine)
}

/// The isometric circles `C_1..C_g` sharing one node count, with all nodes
/// flattened handle by handle.
#[derive(Debug, Clone)]
pub struct HandleContours {
    pub circles: Vec<CircleContour>,
    pub nodes: Vec<Node>,
}

impl HandleContours {
    pub fn new(p: &SchottkyParams, n_nodes: usize) -> Result<Self> {
        let circles = (1..=p.genus() as i32)
            .map(|a| CircleContour::isometric(p, a, n_nodes))
            .collect::<Result<Vec<_>>>()?;
        let nodes = circles.iter().flat_map(|c| c.nodes()).collect();
        Ok(Self { circles, nodes })
    }

    pub fn n_nodes(&self) -> usize {
        self.circles[0].n_nodes
    }

    /// Node index range of circle `C_a`.
    pub fn range(&self, a: usize) -> std::ops::Range<usize> {
        let n = self.n_nodes();
        (a - 1) * n..a * n
    }

    pub fn points(&self) -> Vec<C64> {
        self.nodes.iter().map(|n| n.z).collect()
    }

    /// `(1/2πi) Σ_a ∮_{C_a} Θ(z) Ξ[γ_a](z) dz` given `Θ` at every node.
    pub fn pairing(&self, theta: &[C64], xi: &Cocycle) -> C64 {
        let mut acc = KahanSum::new();
        for a in 1..=self.circles.len() {
            let poly = xi.generator_value(a);
            let r = self.range(a);
            acc.add(
                self.nodes[r.clone()]
                    .iter()
                    .zip(&theta[r])
                    .map(|(n, t)| t * poly.eval(n.z) * n.dz)
                    .collect::<KahanSum>()
                    .value(),
            );
        }
        acc.value() / TWO_PI_I
    }

    /// `(1/2πi) ∮_{C_a} f(z) (z - w_a)^k dz` given `f` at every node.
    pub fn moment(&self, values: &[C64], a: usize, k: usize) -> C64 {
        let w = self.circles[a - 1].center;
        let r = self.range(a);
        self.nodes[r.clone()]
            .iter()
            .zip(&values[r])
            .map(|(n, v)| v * (n.z - w).powu(k as u32) * n.dz)
            .collect::<KahanSum>()
            .value()
            / TWO_PI_I
    }

    /// The same quantities on the even-indexed half of the nodes, i.e. the
    /// rule with half as many nodes.
    pub fn halved(&self) -> Result<(HandleContours, Vec<usize>)> {
        let n = self.n_nodes();
        let circles = self
            .circles
            .iter()
            .map(|c| c.with_nodes(n / 2))
            .collect::<Result<Vec<_>>>()?;
        let nodes = circles.iter().flat_map(|c| c.nodes()).collect();
        let keep = (0..self.nodes.len()).step_by(2).collect();
        Ok((HandleContours { circles, nodes }, keep))
    }
}

/// `(1/2πi) Σ_a ∮_{C_a} Θ Ξ[γ_a]` for a form given as a closure.
pub fn pairing<F>(p: &SchottkyParams, theta: F, xi: &Cocycle, n_nodes: usize) -> Result<C64>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    let contours = HandleContours::new(p, n_nodes)?;
    let values: Vec<C64> = contours
        .nodes
        .par_iter()
        .map(|n| theta(n.z))
        .collect::<Result<_>>()?;
    Ok(contours.pairing(&values, xi))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n <= 1 { 1.0 } else { p0 };
            dp = n as f64 * (t * pn - pm) / (t * t - 1.0);
            let step = pn / dp;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre nodes on the segment `[a, b]` with weights `dz`.
pub fn segment_nodes(a: C64, b: C64, n: usize) -> Vec<Node> {
    let (x, w) = gauss_legendre(n);
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    x.iter()
        .zip(&w)
        .map(|(&t, &wt)| Node {
            z: mid + half * t,
            dz: half * wt,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cauchy_integral_and_orientation() {
        let center = c(-6.0, 0.5);
        let k = CircleContour::new(center, 0.3, 64).unwrap();
        let v = k.integral(|z| Ok((z - center).inv())).unwrap();
        assert!((v - TWO_PI_I).norm() < 1e-12);
        for m in 0..5 {
            let v = k.integral(|z| Ok((z - center).powu(m))).unwrap();
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_node_counts() {
        assert!(CircleContour::new(c(0.0, 0.0), 1.0, 15).is_err());
        assert!(CircleContour::new(c(0.0, 0.0), 1.0, 17).is_err());
        assert!(CircleContour::new(c(0.0, 0.0), 0.0, 64).is_err());
    }

    #[test]
    fn doubled_rule_matches_separate_runs() {
        let k = CircleContour::new(c(1.0, 0.0), 0.5, 32).unwrap();
        let f = |z: C64| Ok((z - 1.2).exp() / (z - 3.0));
        let (coarse, fine) = k.integral_doubled(f).unwrap();
        let direct = k.integral(f).unwrap();
        assert!((coarse - direct).norm() < 1e-14);
        assert!(doubling_gate("test", coarse, fine).is_ok());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 64] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}");
            let deg = 2 * n - 1;
            let integral: f64 = x.iter().zip(&w).map(|(t, wt)| wt * t.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((integral - exact).abs() < 1e-13, "n = {n}");
        }
        let nodes = segment_nodes(c(0.0, 0.0), c(1.0, 1.0), 8);
        let v: C64 = nodes.iter().map(|n| n.z * n.z * n.dz).sum();
        let exact = c(1.0, 1.0).powu(3) / 3.0;
        assert!((v - exact).norm() < 1e-14);
    }
}

//! Compensated accumulation of complex values.
//!
//! All series in this crate are summed with [`KahanSum`] in a fixed order so
//! that results do not depend on how work is split across threads.

use crate::C64;

#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: C64,
    comp: C64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: C64) {
        self.sum.re = kahan_step(self.sum.re, &mut self.comp.re, value.re);
        self.sum.im = kahan_step(self.sum.im, &mut self.comp.im, value.im);
    }

    #[inline]
    pub fn value(&self) -> C64 {
        self.sum
    }
}

#[inline(always)]
fn kahan_step(sum: f64, comp: &mut f64, value: f64) -> f64 {
    let y = value - *comp;
    let t = sum + y;
    *comp = (t - sum) - y;
    t
}

impl Extend<C64> for KahanSum {
    fn extend<I: IntoIterator<Item = C64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<C64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Sums in iteration order with compensation.
pub fn kahan_sum<I: IntoIterator<Item = C64>>(iter: I) -> C64 {
    iter.into_iter().collect::<KahanSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let mut terms = vec![C64::new(1.0, 2.0)];
        terms.extend(std::iter::repeat_n(C64::new(1e-16, 2e-16), 10_000));
        let naive: C64 = terms.iter().sum();
        let comp = kahan_sum(terms.iter().copied());
        assert_eq!(naive, C64::new(1.0, 2.0));
        assert!((comp.re - (1.0 + 1e-12)).abs() < 1e-15);
        assert!((comp.im - (2.0 + 2e-12)).abs() < 1e-15);
    }
}

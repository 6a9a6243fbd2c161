use std::iter::Sum;
use std::ops::AddAssign;

use super::Real;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
pub struct NeumaierSum<F> {
    sum: F,
    compensation: F,
}

impl<F: Real> Default for NeumaierSum<F> {
    fn default() -> Self {
        Self {
            sum: F::zero(),
            compensation: F::zero(),
        }
    }
}

impl<F: Real> NeumaierSum<F> {
    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> F {
        self.sum + self.compensation
    }
}

impl<F: Real> AddAssign<F> for NeumaierSum<F> {
    fn add_assign(&mut self, x: F) {
        self.add(x);
    }
}

impl<F: Real> Sum<F> for NeumaierSum<F> {
    fn sum<I: Iterator<Item = F>>(iter: I) -> Self {
        let mut acc = Self::default();
        iter.for_each(|x| acc.add(x));
        acc
    }
}

//! Order-fixed sample statistics for Monte Carlo estimates.

use serde::{Deserialize, Serialize};

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl MeanEstimate {
    pub fn exact(value: f64) -> Self {
        MeanEstimate { mean: value, std_error: 0.0, samples: 0 }
    }

    /// Half-width of the two-sided 95% normal confidence interval.
    pub fn ci95(&self) -> f64 {
        1.96 * self.std_error
    }
}

/// Running sums with Neumaier compensation. Results depend only on the order
/// of `push` calls, so callers feed samples in index order.
#[derive(Debug, Clone, Default)]
pub struct Accumulator {
    n: usize,
    sum: Compensated,
    sum_sq: Compensated,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        self.sum.value() / self.n as f64
    }

    /// Mean and standard error of the mean; `None` when empty.
    pub fn estimate(&self) -> Option<MeanEstimate> {
        if self.n == 0 {
            return None;
        }
        let n = self.n as f64;
        let mean = self.sum.value() / n;
        let std_error = if self.n > 1 {
            let var = ((self.sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Some(MeanEstimate { mean, std_error, samples: self.n })
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_error() {
        let mut acc = Accumulator::new();
        for x in [1.0, 2.0, 3.0, 4.0] {
            acc.push(x);
        }
        let e = acc.estimate().unwrap();
        assert_eq!(e.mean, 2.5);
        // sample variance 5/3
        assert!((e.std_error - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(Accumulator::new().estimate().is_none());
    }

    #[test]
    fn compensation_recovers_small_terms() {
        let mut acc = Accumulator::new();
        acc.push(1e16);
        for _ in 0..1000 {
            acc.push(1.0);
        }
        acc.push(-1e16);
        assert_eq!(acc.mean() * 1002.0, 1000.0);
    }
}

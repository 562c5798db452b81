//! Float helpers on top of `libm` (no `std` float intrinsics here).

pub(crate) use libm::{cosh, exp, log, log1p, sqrt, tanh};

/// `ln(1 + e^x)` without overflow.
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + log1p(exp(-x))
    } else {
        log1p(exp(x))
    }
}

/// Log of a single bond factor `exp(k s) / (2 cosh k)` for `s = +1` and `s = -1`.
pub(crate) fn bond_log_factors(k: f64) -> (f64, f64) {
    let norm = softplus(-2.0 * k);
    (-norm, -2.0 * k - norm)
}

/// Streaming `log(sum(exp(x_i)))` that rescales whenever a new maximum shows up.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    pub(crate) const fn new() -> Self {
        Self { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    pub(crate) fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * exp(self.max - x) + 1.0;
            self.max = x;
        } else {
            self.sum += exp(x - self.max);
        }
    }

    pub(crate) fn value(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + log(self.sum)
        }
    }
}

pub(crate) fn ln2() -> f64 {
    core::f64::consts::LN_2
}

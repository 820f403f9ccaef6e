//! Log-space arithmetic.
//!
//! Weights such as `exp(1/(1-r))` and the coefficients they induce overflow
//! `f64` long before the interesting scales are reached, so magnitudes are
//! carried as natural logarithms and combined with max-shifted sums. Sums
//! run in slice order, which keeps results bit-reproducible.

use core::f64::consts::LN_2;

/// `log(sum exp(x_i))`; `-inf` for an empty or all-zero input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return max;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let mut acc = 0.0;
    for &x in xs {
        acc += libm::exp(x - max);
    }
    max + libm::log(acc)
}

/// `log(exp(a) + exp(b))`.
pub fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}

/// A real number stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// -1, 0 or 1.
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0.0, ln_abs: f64::NEG_INFINITY };

    pub fn new(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog { sign: if sign > 0.0 { 1.0 } else { -1.0 }, ln_abs }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog::new(x, libm::log(libm::fabs(x)))
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * libm::exp(self.ln_abs)
        }
    }

    /// Multiplies by `exp(ln_factor)`.
    pub fn scale(self, ln_factor: f64) -> Self {
        SignedLog::new(self.sign, self.ln_abs + ln_factor)
    }

    /// Sum of signed terms, shifted by the largest magnitude.
    pub fn sum(terms: &[SignedLog]) -> SignedLog {
        let max = terms
            .iter()
            .filter(|t| t.sign != 0.0)
            .map(|t| t.ln_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let mut acc = 0.0;
        for t in terms {
            if t.sign != 0.0 {
                acc += t.sign * libm::exp(t.ln_abs - max);
            }
        }
        if acc == 0.0 {
            Self::ZERO
        } else {
            SignedLog::new(acc, max + libm::log(libm::fabs(acc)))
        }
    }
}

/// `ln r` for `r = 1 - 2^e`, `e <= 0`. Exact to rounding even when `2^e`
/// underflows.
pub fn ln_r_from_log2_depth(e: f64) -> f64 {
    if e >= 0.0 {
        return f64::NEG_INFINITY;
    }
    libm::log1p(-libm::exp2(e))
}

/// `ln(-ln r)` for `r = 1 - 2^e`, i.e. the log of the hyperbolic distance
/// scale. Stays finite for `e` far below the subnormal range.
pub fn ln_neg_ln_r(e: f64) -> f64 {
    if e >= 0.0 {
        return f64::INFINITY;
    }
    if e > -30.0 {
        return libm::log(-libm::log1p(-libm::exp2(e)));
    }
    // -ln(1-t) = t (1 + t/2 + t^2/3 + ...)
    let t = libm::exp2(e);
    e * LN_2 + libm::log1p(t / 2.0 + t * t / 3.0)
}

/// `ln r` from `ln s` where `r = 1 - s`.
pub fn ln_r_from_ln_s(ln_s: f64) -> f64 {
    libm::log(-libm::expm1(ln_s))
}

/// `ln s` from `ln r` where `s = 1 - r`.
pub fn ln_s_from_ln_r(ln_r: f64) -> f64 {
    libm::log(-libm::expm1(ln_r))
}

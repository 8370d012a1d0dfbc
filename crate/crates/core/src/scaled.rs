//! Overflow-safe floating point values for long polynomial recurrences.
//!
//! A [`ScaledReal`] stores a signed mantissa in `[1,2)` (or exactly 0)
//! together with a power-of-two exponent, so recurrences can run to orders
//! of 10^4 without overflowing f64.

/// A real number `sign * mantissa * 2^exponent` with `mantissa in [1,2)` or 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledReal {
    mantissa: f64,
    exponent: i64,
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        mantissa: 0.0,
        exponent: 0,
    };

    /// Build from an unnormalized mantissa and an extra power-of-two offset.
    pub fn new(value: f64, exponent_offset: i64) -> Self {
        if value == 0.0 {
            return Self::ZERO;
        }
        let (m, e) = frexp(value);
        // frexp yields |m| in [0.5, 1); shift to [1, 2).
        ScaledReal {
            mantissa: m * 2.0,
            exponent: e - 1 + exponent_offset,
        }
    }

    pub fn from_f64(value: f64) -> Self {
        Self::new(value, 0)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// Convert back to f64, saturating to `inf`/0 outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        if self.exponent > 1100 {
            return f64::INFINITY * self.mantissa.signum();
        }
        if self.exponent < -1140 {
            return 0.0;
        }
        ldexp(self.mantissa, self.exponent)
    }

    /// Natural log of the absolute value; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.mantissa == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.exponent as f64 * std::f64::consts::LN_2
        }
    }

    /// Ratio `self / other` as f64 (exponents cancel before conversion).
    pub fn ratio(&self, other: &ScaledReal) -> f64 {
        if other.mantissa == 0.0 {
            return f64::NAN;
        }
        if self.mantissa == 0.0 {
            return 0.0;
        }
        let e = self.exponent - other.exponent;
        ldexp(self.mantissa / other.mantissa, e)
    }
}

/// Decompose a finite nonzero f64 into `(m, e)` with `|m| in [0.5,1)`, `x = m 2^e`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x != 0.0);
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // Subnormal: scale up first.
        let scaled = x * 2f64.powi(64);
        let (m, e) = frexp(scaled);
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, e)
}

/// `m * 2^e` with exponent handled in up to three steps to avoid overflow.
fn ldexp(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

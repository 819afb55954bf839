use std::cmp::Ordering;
use std::ops::{Mul, Neg};

/// A real number held as `sign * exp(ln_magnitude)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    sign: i8,
    ln_magnitude: f64,
}

impl SignedLogValue {
    pub const ZERO: SignedLogValue = SignedLogValue {
        sign: 0,
        ln_magnitude: f64::NEG_INFINITY,
    };

    /// `sign` is clamped to {-1, 0, +1}.
    pub fn new(sign: i8, ln_magnitude: f64) -> Self {
        if sign == 0 || ln_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLogValue {
                sign: sign.signum(),
                ln_magnitude,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLogValue {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_magnitude: x.abs().ln(),
            }
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn ln_magnitude(self) -> f64 {
        self.ln_magnitude
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Underflows to exact zero below `exp(-745)`.
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.sign as f64 * self.ln_magnitude.exp()
        }
    }
}

impl Mul for SignedLogValue {
    type Output = SignedLogValue;

    fn mul(self, rhs: Self) -> Self {
        SignedLogValue::new(self.sign * rhs.sign, self.ln_magnitude + rhs.ln_magnitude)
    }
}

impl Neg for SignedLogValue {
    type Output = SignedLogValue;

    fn neg(self) -> Self {
        SignedLogValue {
            sign: -self.sign,
            ln_magnitude: self.ln_magnitude,
        }
    }
}

/// Sum of signed-log terms, smallest magnitude first, with Neumaier compensation.
///
/// Terms are rescaled by the largest magnitude so that the partial sums never
/// overflow; the result is returned in signed-log form.
pub fn compensated_sum(terms: &mut [SignedLogValue]) -> SignedLogValue {
    terms.sort_by(|a, b| {
        a.ln_magnitude
            .partial_cmp(&b.ln_magnitude)
            .unwrap_or(Ordering::Equal)
    });
    let Some(scale) = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.ln_magnitude)
        .next_back()
    else {
        return SignedLogValue::ZERO;
    };
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let x = t.sign as f64 * (t.ln_magnitude - scale).exp();
        let s = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - s) + x;
        } else {
            comp += (x - s) + sum;
        }
        sum = s;
    }
    let total = sum + comp;
    let scaled = SignedLogValue::from_f64(total);
    SignedLogValue::new(scaled.sign, scaled.ln_magnitude + scale)
}

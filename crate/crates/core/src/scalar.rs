use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

/// Floating point type the estimators are written against.
///
/// Implemented for `f32` and `f64`. Description lengths are in bits, so
/// every logarithm goes through [`Float::log2`].
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Tolerance used when checking that a pair model is normalized.
    fn stochastic_tolerance() -> Self;

    /// Significant decimal digits needed to round-trip a value.
    const ROUND_TRIP_DIGITS: usize;

    #[inline]
    fn from_count(k: u64) -> Self {
        Self::from_u64(k).expect("count representable as a float")
    }

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable as a float")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// `k * -log2(p)` with `0 * log 0 = 0`.
    #[inline]
    fn code_length(k: u64, p: Self) -> Self {
        if k == 0 {
            Self::zero()
        } else {
            -Self::from_count(k) * p.log2()
        }
    }
}

impl Scalar for f64 {
    fn stochastic_tolerance() -> Self {
        1e-9
    }
    const ROUND_TRIP_DIGITS: usize = 17;
}

impl Scalar for f32 {
    fn stochastic_tolerance() -> Self {
        1e-4
    }
    const ROUND_TRIP_DIGITS: usize = 9;
}

/// Formats with enough significant digits to parse back bit-exactly.
pub fn format_exact<T: Scalar>(x: T) -> String {
    if x.is_infinite() {
        return if x > T::zero() {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    format!("{:.*e}", T::ROUND_TRIP_DIGITS - 1, x)
}

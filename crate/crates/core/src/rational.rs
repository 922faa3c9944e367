//! Exact rational arithmetic used for ε, c and every guarantee check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational.
pub type Q = BigRational;

pub fn int(v: impl Into<BigInt>) -> Q {
    Q::from_integer(v.into())
}

pub fn ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"1/4"` or a plain decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Option<Q> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Q::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole: BigInt = if whole_abs.is_empty() {
            BigInt::zero()
        } else {
            whole_abs.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().ok()?;
        let value = Q::new(whole * &scale + frac, scale);
        return Some(if negative { -value } else { value });
    }
    text.parse::<BigInt>().ok().map(Q::from_integer)
}

/// Renders as `num/den`, or just `num` for integers.
pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders as `num/den` even for integers (CSV columns).
pub fn format_fraction(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn ceil_u64(q: &Q) -> u64 {
    debug_assert!(!q.is_negative());
    q.ceil().to_integer().to_u64().expect("value fits in u64")
}

pub fn floor_u64(q: &Q) -> u64 {
    debug_assert!(!q.is_negative());
    q.floor().to_integer().to_u64().expect("value fits in u64")
}

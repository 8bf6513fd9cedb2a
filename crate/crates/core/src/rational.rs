//! Exact rational scalars and the integer-vector helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Integer vector (weights, characters, one-parameter subgroups).
pub type IntVector = Vec<i64>;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn to_rational_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn dot_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Canonical `p/q` rendering; integers render without a denominator.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(value: &Rational) -> i32 {
    if value.is_zero() {
        0
    } else if value.is_positive() {
        1
    } else {
        -1
    }
}

/// Clears denominators and divides out the content, keeping the direction.
/// Returns `None` for the zero vector or when an entry exceeds `i64`.
pub fn primitive_integer(v: &[Rational]) -> Option<IntVector> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let gcd = scaled
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    scaled.iter().map(|x| (x / &gcd).to_i64()).collect()
}

pub fn primitive_int(v: &[i64]) -> Option<IntVector> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        None
    } else {
        Some(v.iter().map(|x| x / g).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_rational("1/2"), Some(ratio(1, 2)));
        assert_eq!(parse_rational(" -6/4 "), Some(ratio(-3, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&int(-3)), "-3");
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive_integer(&[ratio(-1, 2), ratio(-1, 2)]), Some(vec![-1, -1]));
        assert_eq!(primitive_integer(&[int(4), int(6)]), Some(vec![2, 3]));
        assert_eq!(primitive_integer(&[int(0), ratio(-3, 7)]), Some(vec![0, -1]));
        assert_eq!(primitive_integer(&[int(0), int(0)]), None);
        assert_eq!(primitive_int(&[0, -6, 9]), Some(vec![0, -2, 3]));
    }
}

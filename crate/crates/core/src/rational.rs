//! Exact rational arithmetic, floor/fractional-part calculus for Q-divisor
//! coefficients, and closed-form cohomology of line bundles on P1 and P2.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer used throughout the crate.
pub type IBig = BigInt;

/// Exact fraction of arbitrary-precision integers. Always stored reduced
/// with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("malformed rational `{0}`: expected `num` or `num/den`")]
    ParseRational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("cohomology degree {0} out of range (expected 0, 1, or 2)")]
    CohomDegree(i64),
}

/// Shorthand for a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integral rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Parses `"num/den"` or `"num"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, ArithError> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| ArithError::ParseRational(s.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from(parse_int(s)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(ArithError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Renders a rational as `"num/den"` (or `"num"` when integral).
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Greatest integer below: `floor_part(q) <= q < floor_part(q) + 1`.
pub fn floor_part(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Fractional part `q - floor(q)`, always in `[0, 1)`.
pub fn frac_part(q: &Rational) -> Rational {
    q - q.floor()
}

/// Recognises standard coefficients: returns `m >= 1` when `q = (m-1)/m`.
pub fn is_standard(q: &Rational) -> Option<BigInt> {
    // (m-1)/m = 1 - 1/m, so q is standard iff 1 - q is a unit fraction.
    let one = Rational::one();
    if q.is_negative() || *q >= one {
        return None;
    }
    let rest = one - q;
    if rest.numer().is_one() {
        Some(rest.denom().clone())
    } else {
        None
    }
}

/// The two projective spaces whose line-bundle cohomology we need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjSpace {
    P1,
    P2,
}

/// `h^0(P1, O(d))`.
pub fn h0_p1(d: i64) -> u64 {
    if d >= 0 {
        (d + 1) as u64
    } else {
        0
    }
}

/// `h^0(P2, O(d))`.
pub fn h0_p2(d: i64) -> u64 {
    if d >= 0 {
        ((d + 1) * (d + 2) / 2) as u64
    } else {
        0
    }
}

/// Exact `h^i` of a line bundle of the given degree on P1 or P2.
///
/// On P1: `h^1(O(d)) = h^0(O(-2-d))` and `h^2 = 0`. On P2: `h^1 = 0` and
/// `h^2(O(d)) = h^0(O(-3-d))`.
pub fn h_line_bundle(space: ProjSpace, degree: i64, cohom_degree: i64) -> Result<u64, ArithError> {
    if !(0..=2).contains(&cohom_degree) {
        return Err(ArithError::CohomDegree(cohom_degree));
    }
    Ok(match (space, cohom_degree) {
        (ProjSpace::P1, 0) => h0_p1(degree),
        (ProjSpace::P1, 1) => h0_p1(-2 - degree),
        (ProjSpace::P1, 2) => 0,
        (ProjSpace::P2, 0) => h0_p2(degree),
        (ProjSpace::P2, 1) => 0,
        (ProjSpace::P2, 2) => h0_p2(-3 - degree),
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn floor_examples() {
        assert_eq!(floor_part(&rat(246, 7)), BigInt::from(35));
        assert_eq!(floor_part(&rat_int(0)), BigInt::from(0));
        assert_eq!(floor_part(&rat(-1, 2)), BigInt::from(-1));
    }

    #[test]
    fn standard_examples() {
        assert_eq!(is_standard(&rat(40, 41)), Some(BigInt::from(41)));
        assert_eq!(is_standard(&rat_int(0)), Some(BigInt::from(1)));
        assert_eq!(is_standard(&rat(3, 5)), None);
        assert_eq!(is_standard(&rat_int(1)), None);
        assert_eq!(is_standard(&rat(-1, 2)), None);
    }

    #[test]
    fn standard_family_round_trip() {
        for m in 1..=1_000_000i64 {
            assert_eq!(is_standard(&rat(m - 1, m)), Some(BigInt::from(m)));
        }
    }

    #[test]
    fn line_bundle_examples() {
        assert_eq!(h_line_bundle(ProjSpace::P2, 0, 0).unwrap(), 1);
        for i in 0..=2 {
            assert_eq!(h_line_bundle(ProjSpace::P2, -1, i).unwrap(), 0);
        }
        assert_eq!(h_line_bundle(ProjSpace::P1, -1, 1).unwrap(), 0);
        assert_eq!(h_line_bundle(ProjSpace::P2, -4, 2).unwrap(), 3);
        assert_eq!(h_line_bundle(ProjSpace::P2, -3, 2).unwrap(), 1);
        assert!(h_line_bundle(ProjSpace::P2, 0, 3).is_err());
    }

    #[test]
    fn serre_duality_p2() {
        for d in -12..=12i64 {
            assert_eq!(
                h_line_bundle(ProjSpace::P2, d, 2).unwrap(),
                h_line_bundle(ProjSpace::P2, -3 - d, 0).unwrap()
            );
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("40/41").unwrap(), rat(40, 41));
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert_eq!(parse_rational("2/-4").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-1, 2)), "-1/2");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    proptest! {
        #[test]
        fn floor_plus_frac_is_identity(n in -10_000i64..10_000, d in 1i64..500) {
            let q = rat(n, d);
            let f = frac_part(&q);
            prop_assert!(f >= Rational::zero() && f < Rational::one());
            prop_assert_eq!(Rational::from(floor_part(&q)) + f, q);
        }

        #[test]
        fn parse_format_round_trip(n in -100_000i64..100_000, d in 1i64..10_000) {
            let q = rat(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }
}

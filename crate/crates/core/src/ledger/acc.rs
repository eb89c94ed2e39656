//! Boundary-coefficient arithmetic: the exhaustive check that no curve
//! boundary summing to two can use a coefficient strictly between the
//! threshold and one, and the componentwise floor inequality behind the
//! large-characteristic vanishing.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::rational::{floor_part, frac_part, is_standard, rat, rat_int, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AccError {
    #[error("grid denominator must be >= 6, got {0}")]
    GridTooSmall(u64),
    #[error("threshold must lie in (0, 1)")]
    BadThreshold,
    #[error("coefficient {0} is not standard")]
    NotStandard(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Result of the exhaustive boundary enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccReport {
    /// All multisets (non-decreasing) of admissible values summing to 2.
    pub solutions: Vec<Vec<Rational>>,
    /// No solution uses a value in the open interval `(threshold, 1)`.
    pub none_in_open_interval: bool,
    /// Largest denominator bound certified by the run.
    pub grid_denominator: u64,
}

/// Enumerates all multisets of values from
/// `{(m-1)/m : 2 <= m <= grid} U {k/grid in [threshold, 1)}`
/// that sum exactly to 2 with all values < 1, and verifies that none of
/// them contains a value in the open interval `(threshold, 1)`.
pub fn curve_acc_enumerate(threshold: &Rational, grid: u64) -> Result<AccReport, AccError> {
    if grid < 6 {
        return Err(AccError::GridTooSmall(grid));
    }
    if !threshold.is_positive() || *threshold >= Rational::one() {
        return Err(AccError::BadThreshold);
    }
    let mut pool: Vec<Rational> = Vec::new();
    for m in 2..=grid {
        pool.push(rat(m as i64 - 1, m as i64));
    }
    for k in 1..grid {
        let v = rat(k as i64, grid as i64);
        if &v >= threshold {
            pool.push(v);
        }
    }
    pool.sort();
    pool.dedup();

    let target = rat_int(2);
    let mut solutions: Vec<Vec<Rational>> = Vec::new();
    let mut stack: Vec<Rational> = Vec::new();
    // non-decreasing multisets; the pool minimum bounds the depth
    fn extend(
        pool: &[Rational],
        from: usize,
        remaining: &Rational,
        stack: &mut Vec<Rational>,
        solutions: &mut Vec<Vec<Rational>>,
    ) {
        if remaining.is_zero() {
            if !stack.is_empty() {
                solutions.push(stack.clone());
            }
            return;
        }
        for (i, v) in pool.iter().enumerate().skip(from) {
            if v > remaining {
                break;
            }
            stack.push(v.clone());
            extend(pool, i, &(remaining - v), stack, solutions);
            stack.pop();
        }
    }
    extend(&pool, 0, &target, &mut stack, &mut solutions);
    solutions.sort();

    let none_in_open_interval = solutions
        .iter()
        .all(|sol| sol.iter().all(|v| v <= threshold || *v >= Rational::one()));
    Ok(AccReport {
        solutions,
        none_in_open_interval,
        grid_denominator: grid,
    })
}

/// Componentwise report for the large-characteristic vanishing at a
/// standard boundary: for each coefficient `(d-1)/d` the floor inequality
/// `1 + floor(p^l (d-1)/d) <= 1 + p^l (d-1)/d - 1/d` (equivalently the
/// fractional part of `p^l (d-1)/d` is at least `1/d`), plus the degree
/// `deg(K + Delta_red + floor(p^l (K + Delta)))` on the rank-one plane
/// model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingReport {
    pub per_component_ok: Vec<bool>,
    pub p2_degree: BigInt,
}

pub fn vanishing_42_check(
    coeffs: &[Rational],
    p: u64,
    l: u32,
) -> Result<VanishingReport, AccError> {
    if !crate::witt::is_prime(p) {
        return Err(AccError::NotPrime(p));
    }
    let mut p_pow = Rational::one();
    for _ in 0..l {
        p_pow *= rat_int(p as i64);
    }
    let mut per_component_ok = Vec::with_capacity(coeffs.len());
    let mut floor_sum = BigInt::zero();
    let mut reduced_components = BigInt::zero();
    for c in coeffs {
        let d = is_standard(c).ok_or_else(|| {
            AccError::NotStandard(crate::rational::format_rational(c))
        })?;
        let scaled = &p_pow * c;
        floor_sum += floor_part(&scaled);
        if d.is_one() {
            // a denominator-one coefficient is zero: no component at all,
            // the inequality is vacuous
            per_component_ok.push(true);
            continue;
        }
        reduced_components += 1;
        let inv_d = Rational::new(BigInt::one(), d);
        per_component_ok.push(frac_part(&scaled) >= inv_d);
    }
    // deg K = -3; Delta_red contributes one per actual component
    let p_pow_int = floor_part(&p_pow);
    let p2_degree = BigInt::from(-3) + reduced_components + (BigInt::from(-3) * p_pow_int + floor_sum);
    Ok(VanishingReport {
        per_component_ok,
        p2_degree,
    })
}

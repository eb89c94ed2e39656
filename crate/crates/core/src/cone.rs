//! Toric data for orbifold cones over Q-divisors: cone rays, Cartier
//! tests, Q-factorial indices, differents, the reflexive-power congruence
//! witness, and section-ring dimension series.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{floor_part, h0_p1, h0_p2, rat_int, ProjSpace, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConeError {
    #[error("component {0}: numerator and denominator must be coprime with 0 <= l < d")]
    BadComponent(usize),
    #[error("{0} is not a common denominator of the divisor")]
    NotCommonDenominator(i64),
    #[error("(d, l) = ({0}, {1}) must satisfy gcd(d, l) = 1, d >= 1, 0 <= l < d")]
    BadPair(i64, i64),
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(i64, i64),
    #[error("degree bound must be >= 0")]
    BadRange,
}

/// Fractional divisor `sum (l_i/d_i) H_i` on affine n-space supported on
/// the coordinate hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalDivisorOnAn {
    /// `(l_i, d_i)` per hyperplane, coprime with `0 <= l_i < d_i`.
    pub components: Vec<(i64, i64)>,
}

impl FractionalDivisorOnAn {
    pub fn new(components: Vec<(i64, i64)>) -> Result<Self, ConeError> {
        for (i, (l, d)) in components.iter().enumerate() {
            if *d < 1 || *l < 0 || l >= d || l.gcd(d) != 1 {
                return Err(ConeError::BadComponent(i));
            }
        }
        Ok(FractionalDivisorOnAn { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        let (l, d) = self.components[i];
        Rational::new(BigInt::from(l), BigInt::from(d))
    }
}

/// Rays of a full-dimensional simplicial cone in a rank-(n+1) lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricConeData {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
}

/// Cone over the divisor: rays `u_i = d_i e_i + l_i e_{n+1}` together with
/// `e_{n+1}`. Each `u_i` is primitive because `gcd(d_i, l_i) = 1`.
pub fn cone_rays(divisor: &FractionalDivisorOnAn) -> ToricConeData {
    let n = divisor.dim();
    let mut rays = Vec::with_capacity(n + 1);
    for (i, (l, d)) in divisor.components.iter().enumerate() {
        let mut u = vec![0i64; n + 1];
        u[i] = *d;
        u[n] = *l;
        rays.push(u);
    }
    let mut last = vec![0i64; n + 1];
    last[n] = 1;
    rays.push(last);
    ToricConeData { rank: n + 1, rays }
}

pub fn ray_is_primitive(ray: &[i64]) -> bool {
    let g = ray.iter().fold(0i64, |acc, x| acc.gcd(x));
    g == 1
}

/// Verifies the decomposition `v_d = sum (d a_i - floor(d a_i)) e_i +
/// (d/d0) v_{d0}` as an identity of rational vectors, where
/// `v_d = -sum floor(d a_i) e_i + d e_{n+1}`.
pub fn tau_decomposition_check(
    divisor: &FractionalDivisorOnAn,
    d: u64,
    d0: u64,
) -> Result<bool, ConeError> {
    let n = divisor.dim();
    if d0 == 0 {
        return Err(ConeError::NotCommonDenominator(0));
    }
    for i in 0..n {
        let scaled = rat_int(d0 as i64) * divisor.coefficient(i);
        if !scaled.is_integer() {
            return Err(ConeError::NotCommonDenominator(d0 as i64));
        }
    }
    let v = |k: u64| -> Vec<Rational> {
        let mut out: Vec<Rational> = (0..n)
            .map(|i| -Rational::from(floor_part(&(rat_int(k as i64) * divisor.coefficient(i)))))
            .collect();
        out.push(rat_int(k as i64));
        out
    };
    let vd = v(d);
    let vd0 = v(d0);
    let scale = Rational::new(BigInt::from(d), BigInt::from(d0));
    for i in 0..=n {
        let frac = if i < n {
            let da = rat_int(d as i64) * divisor.coefficient(i);
            &da - Rational::from(floor_part(&da))
        } else {
            Rational::zero()
        };
        if vd[i] != frac + &scale * &vd0[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cartier test on the index-`d` cone surface: the torus-invariant divisor
/// `a1 D1 + a2 D2` is Cartier iff `d` divides `a1 - l * a2`.
pub fn cartier_test(a1: i64, a2: i64, d: i64, l: i64) -> Result<bool, ConeError> {
    if d < 1 || l < 0 || (d > 1 && (l >= d || l.gcd(&d) != 1)) || (d == 1 && l != 0) {
        return Err(ConeError::BadPair(d, l));
    }
    Ok((a1 - l * a2).rem_euclid(d) == 0)
}

/// Least `N >= 1` making every torus-invariant divisor `N`-Cartier,
/// certified by brute force over the `d^2` residue classes.
pub fn q_factorial_index_toric(d: i64, l: i64) -> Result<i64, ConeError> {
    if d < 1 || l < 0 || (d > 1 && (l >= d || l.gcd(&d) != 1)) || (d == 1 && l != 0) {
        return Err(ConeError::BadPair(d, l));
    }
    'outer: for n in 1..=d {
        for a1 in 0..d {
            for a2 in 0..d {
                if !cartier_test(n * a1, n * a2, d, l)? {
                    continue 'outer;
                }
            }
        }
        return Ok(n);
    }
    unreachable!("N = d always passes")
}

/// Different coefficients `(d_i - 1)/d_i` per component.
pub fn different(components: &[(i64, i64)]) -> Result<Vec<Rational>, ConeError> {
    components
        .iter()
        .map(|(d, l)| {
            if *d < 1 || (*d > 1 && (l >= d || *l < 1 || l.gcd(d) != 1)) || (*d == 1 && *l != 0) {
                Err(ConeError::BadPair(*d, *l))
            } else {
                Ok(Rational::new(BigInt::from(d - 1), BigInt::from(*d)))
            }
        })
        .collect()
}

/// Splits `d` into `d_1 + ... + d_q` satisfying the floor identity
/// `sum_i floor((b-1)/b + d_i a/b) = floor(q (b-1)/b + d a/b)`,
/// by the congruence method: pick `x, y` with
/// `(b-1) + a x = q(b-1) + d a (mod b)` and `(b-1) + a y = 0 (mod b)`,
/// then `d_1 = d - (q-1) y` and `d_i = y` for `i >= 2`.
pub fn reflexive_power_witness(a: i64, b: i64, q: i64, d: i64) -> Result<Vec<i64>, ConeError> {
    if b < 1 || q < 1 {
        return Err(ConeError::BadPair(b, q));
    }
    if a.gcd(&b) != 1 {
        return Err(ConeError::NotCoprime(a, b));
    }
    if q == 1 {
        return Ok(vec![d]);
    }
    let solve = |target: i64| -> i64 {
        // smallest non-negative x with a x = target (mod b); exists since
        // gcd(a, b) = 1
        (0..b)
            .find(|x| (a * x - target).rem_euclid(b) == 0)
            .expect("a is invertible mod b")
    };
    let y = solve(-(b - 1));
    let d1 = d - (q - 1) * y;
    let mut out = vec![d1];
    out.extend(std::iter::repeat_n(y, (q - 1) as usize));
    Ok(out)
}

/// The floor identity the witness must satisfy.
pub fn floor_identity_holds(a: i64, b: i64, q: i64, d: i64, parts: &[i64]) -> bool {
    if parts.iter().sum::<i64>() != d {
        return false;
    }
    let term = |di: i64| -> BigInt {
        floor_part(&(Rational::new(BigInt::from(b - 1), BigInt::from(b))
            + Rational::new(BigInt::from(di * a), BigInt::from(b))))
    };
    let lhs: BigInt = parts.iter().map(|&di| term(di)).sum();
    let rhs = floor_part(
        &(Rational::new(BigInt::from(q * (b - 1)), BigInt::from(b))
            + Rational::new(BigInt::from(d * a), BigInt::from(b))),
    );
    lhs == rhs
}

/// An ample Q-divisor on P1 or P2 given by components with a degree and a
/// rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveQDivisor {
    pub space: ProjSpace,
    /// `(degree of the prime divisor, coefficient)`.
    pub components: Vec<(i64, Rational)>,
}

impl ProjectiveQDivisor {
    /// Degree of the rounded-down multiple `floor(t * D)`.
    fn floor_degree(&self, t: &Rational) -> i64 {
        self.components
            .iter()
            .map(|(deg, c)| {
                let scaled = t * c;
                floor_part(&scaled).to_i64().expect("small degree") * deg
            })
            .sum()
    }

    fn h0(&self, degree: i64) -> u64 {
        match self.space {
            ProjSpace::P1 => h0_p1(degree),
            ProjSpace::P2 => h0_p2(degree),
        }
    }

    /// Standard-coefficient hull `D' = sum (d_i - 1)/d_i D_i` read off the
    /// component denominators.
    pub fn standard_hull(&self) -> Vec<(i64, Rational)> {
        self.components
            .iter()
            .map(|(deg, c)| {
                let d = c.denom().clone();
                (*deg, Rational::new(&d - BigInt::one(), d))
            })
            .collect()
    }
}

/// Dimensions `dim R_d = h^0(X, O(floor(d D)))` of the section ring for
/// `d = 0..=d_max`.
pub fn section_ring_dims(divisor: &ProjectiveQDivisor, d_max: i64) -> Result<Vec<u64>, ConeError> {
    if d_max < 0 {
        return Err(ConeError::BadRange);
    }
    Ok((0..=d_max)
        .map(|d| {
            let deg = divisor.floor_degree(&rat_int(d));
            divisor.h0(deg)
        })
        .collect())
}

/// Graded dimensions of the `q`-pluricanonical module of the section ring:
/// `h^0(X, O(floor(q(K_X + D') + d D)))` for `d` in the given range, with
/// `K_{P1} = -2 . point` and `K_{P2} = -3 . line`.
pub fn canonical_module_dims(
    divisor: &ProjectiveQDivisor,
    q: i64,
    d_range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<(i64, u64)>, ConeError> {
    if q < 1 {
        return Err(ConeError::BadRange);
    }
    let k_deg: i64 = match divisor.space {
        ProjSpace::P1 => -2,
        ProjSpace::P2 => -3,
    };
    let hull = divisor.standard_hull();
    let mut out = Vec::new();
    for d in d_range {
        // the canonical part is integral, so it floors componentfree
        let mut deg = q * k_deg;
        for ((cdeg, coeff), (_, hull_coeff)) in divisor.components.iter().zip(&hull) {
            let fractional = rat_int(q) * hull_coeff + rat_int(d) * coeff;
            deg += floor_part(&fractional).to_i64().expect("small degree") * cdeg;
        }
        out.push((d, divisor.h0(deg)));
    }
    Ok(out)
}

//! Truncated Witt vectors W_n over arbitrary coefficient rings of
//! characteristic p, driven by universal addition and multiplication
//! polynomials solved once per (p, n) from the ghost equations.

pub mod battery;
pub mod poly;
pub mod rings;

use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;
use poly::IntPoly;
use rings::{CoeffRing, Homogeneity, IntegerRing};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WittError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("level must be >= 1")]
    BadLevel,
    #[error("vector length {0} does not match level {1}")]
    LengthMismatch(usize, usize),
    #[error("restriction level {0} exceeds {1}")]
    BadRestriction(usize, usize),
    #[error("coefficient ring carries no grading")]
    Ungraded,
}

fn bigpow(p: u64, e: usize) -> BigInt {
    (0..e).fold(BigInt::one(), |acc, _| acc * BigInt::from(p))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Universal sum and product polynomials for W_n at the prime p, in the
/// 2n variables x_0..x_{n-1}, y_0..y_{n-1}.
///
/// They are characterised by the ghost identities
/// `w_m(S_0..S_m) = w_m(x) + w_m(y)` and `w_m(P_0..P_m) = w_m(x) w_m(y)`
/// with `w_m(z) = sum_i p^i z_i^{p^(m-i)}`; solving for `S_m`/`P_m`
/// requires an exact division by `p^m` at each level, which is asserted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittPolyCache {
    pub p: u64,
    pub n: usize,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
}

impl WittPolyCache {
    pub fn build(p: u64, n: usize) -> Result<Self, WittError> {
        if !is_prime(p) {
            return Err(WittError::NotPrime(p));
        }
        if n == 0 {
            return Err(WittError::BadLevel);
        }
        let nvars = 2 * n;
        let x = |i: usize| IntPoly::var(nvars, i);
        let y = |i: usize| IntPoly::var(nvars, n + i);
        let ghost = |vars: &dyn Fn(usize) -> IntPoly, m: usize| -> IntPoly {
            let mut w = IntPoly::zero(nvars);
            let mut p_pow = BigInt::one();
            for i in 0..=m {
                let e = p.pow((m - i) as u32);
                w = w.add(&vars(i).pow(e).scale(&p_pow));
                p_pow *= BigInt::from(p);
            }
            w
        };

        let mut sum: Vec<IntPoly> = Vec::with_capacity(n);
        let mut prod: Vec<IntPoly> = Vec::with_capacity(n);
        for m in 0..n {
            let gx = ghost(&x, m);
            let gy = ghost(&y, m);
            let mut s_target = gx.add(&gy);
            let mut p_target = gx.mul(&gy);
            let mut p_pow = BigInt::one();
            for (i, (si, pi)) in sum.iter().zip(prod.iter()).enumerate() {
                let e = p.pow((m - i) as u32);
                s_target = s_target.sub(&si.pow(e).scale(&p_pow));
                p_target = p_target.sub(&pi.pow(e).scale(&p_pow));
                p_pow *= BigInt::from(p);
            }
            sum.push(s_target.div_exact(&p_pow));
            prod.push(p_target.div_exact(&p_pow));
        }
        Ok(WittPolyCache { p, n, sum, prod })
    }
}

/// A truncated Witt vector: the entries (a_0, ..., a_{n-1}) over one
/// coefficient ring.
#[derive(Debug, Clone, PartialEq)]
pub struct WittVec<E> {
    pub entries: Vec<E>,
}

impl<E> WittVec<E> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// W_n over a fixed coefficient ring, owning the polynomial cache.
pub struct WittRing<R: CoeffRing> {
    pub ring: R,
    cache: WittPolyCache,
}

impl<R: CoeffRing> WittRing<R> {
    pub fn new(p: u64, n: usize, ring: R) -> Result<Self, WittError> {
        Ok(WittRing {
            ring,
            cache: WittPolyCache::build(p, n)?,
        })
    }

    pub fn with_cache(cache: WittPolyCache, ring: R) -> Self {
        WittRing { ring, cache }
    }

    pub fn p(&self) -> u64 {
        self.cache.p
    }

    pub fn level(&self) -> usize {
        self.cache.n
    }

    pub fn cache(&self) -> &WittPolyCache {
        &self.cache
    }

    pub fn vec(&self, entries: Vec<R::Elem>) -> Result<WittVec<R::Elem>, WittError> {
        if entries.len() != self.level() {
            return Err(WittError::LengthMismatch(entries.len(), self.level()));
        }
        Ok(WittVec { entries })
    }

    pub fn zero(&self) -> WittVec<R::Elem> {
        WittVec {
            entries: (0..self.level()).map(|_| self.ring.zero()).collect(),
        }
    }

    /// Teichmueller lift (x, 0, ..., 0).
    pub fn teichmuller(&self, x: R::Elem) -> WittVec<R::Elem> {
        let mut entries = vec![x];
        entries.extend((1..self.level()).map(|_| self.ring.zero()));
        WittVec { entries }
    }

    fn args(&self, a: &WittVec<R::Elem>, b: &WittVec<R::Elem>) -> Vec<R::Elem> {
        let mut args = a.entries.clone();
        args.extend(b.entries.iter().cloned());
        args
    }

    pub fn add(&self, a: &WittVec<R::Elem>, b: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        let args = self.args(a, b);
        WittVec {
            entries: self
                .cache
                .sum
                .iter()
                .map(|s| s.eval(&self.ring, &args))
                .collect(),
        }
    }

    pub fn mul(&self, a: &WittVec<R::Elem>, b: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        let args = self.args(a, b);
        WittVec {
            entries: self
                .cache
                .prod
                .iter()
                .map(|s| s.eval(&self.ring, &args))
                .collect(),
        }
    }

    /// Frobenius: entrywise p-th power (the coefficient rings here have
    /// characteristic p, where this is the Witt Frobenius).
    pub fn frobenius(&self, a: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        WittVec {
            entries: a
                .entries
                .iter()
                .map(|x| self.ring.pow(x, self.p()))
                .collect(),
        }
    }

    /// Verschiebung in the fixed-length convention: prepend a zero and
    /// drop the last entry (the self-map V of W_n).
    pub fn verschiebung_fixed(&self, a: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        let mut entries = vec![self.ring.zero()];
        entries.extend(a.entries[..self.level() - 1].iter().cloned());
        WittVec { entries }
    }

    /// Length-increasing Verschiebung W_n -> W_{n+1}: prepend a zero.
    pub fn verschiebung_extend(&self, a: &WittVec<R::Elem>) -> WittVec<R::Elem> {
        let mut entries = vec![self.ring.zero()];
        entries.extend(a.entries.iter().cloned());
        WittVec { entries }
    }

    /// Restriction W_n -> W_m: truncate the tail.
    pub fn restrict(&self, a: &WittVec<R::Elem>, m: usize) -> Result<WittVec<R::Elem>, WittError> {
        if m > a.len() {
            return Err(WittError::BadRestriction(m, a.len()));
        }
        Ok(WittVec {
            entries: a.entries[..m].to_vec(),
        })
    }

    /// Multiplication by the integer k >= 0 via iterated Witt addition.
    pub fn mul_int(&self, a: &WittVec<R::Elem>, k: u64) -> WittVec<R::Elem> {
        let mut acc = self.zero();
        for _ in 0..k {
            acc = self.add(&acc, a);
        }
        acc
    }

    pub fn eq(&self, a: &WittVec<R::Elem>, b: &WittVec<R::Elem>) -> bool {
        // entries are stored canonically in every ring here
        a.len() == b.len() && a.entries.iter().zip(&b.entries).all(|(x, y)| x == y)
    }

    /// The degree e such that entry i is homogeneous of degree p^i * e
    /// for all i; `Homogeneity::Zero` for the zero vector.
    pub fn homogeneous_degree(
        &self,
        a: &WittVec<R::Elem>,
    ) -> Result<Homogeneity, WittError> {
        let mut candidate: Option<Rational> = None;
        let mut all_zero = true;
        for (i, entry) in a.entries.iter().enumerate() {
            let h = self.ring.homogeneity(entry).ok_or(WittError::Ungraded)?;
            match h {
                Homogeneity::Zero => continue,
                Homogeneity::Mixed => return Ok(Homogeneity::Mixed),
                Homogeneity::Homogeneous(d) => {
                    all_zero = false;
                    // entry i must sit in degree p^i * e
                    let scale = Rational::from(bigpow(self.p(), i));
                    let e = d / scale;
                    match &candidate {
                        None => candidate = Some(e),
                        Some(c) if *c == e => {}
                        Some(_) => return Ok(Homogeneity::Mixed),
                    }
                }
            }
        }
        if all_zero {
            Ok(Homogeneity::Zero)
        } else {
            Ok(Homogeneity::Homogeneous(candidate.expect("non-zero entry")))
        }
    }
}

/// Ghost components `w_m(a) = sum_i p^i a_i^(p^(m-i))` of an integer
/// Witt vector.
pub fn ghost_components(p: u64, a: &WittVec<BigInt>) -> Vec<BigInt> {
    let ring = IntegerRing;
    (0..a.len())
        .map(|m| {
            let mut w = BigInt::zero();
            let mut p_pow = BigInt::one();
            for i in 0..=m {
                let e = p.pow((m - i) as u32);
                w += &p_pow * ring.pow(&a.entries[i], e);
                p_pow *= BigInt::from(p);
            }
            w
        })
        .collect()
}

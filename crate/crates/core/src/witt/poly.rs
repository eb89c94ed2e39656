//! Sparse multivariate polynomials over the integers, just enough for
//! solving the ghost equations that define the universal Witt sum and
//! product polynomials.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use super::rings::CoeffRing;

/// Integer polynomial in a fixed number of variables. Keys are exponent
/// vectors of that length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = IntPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0u32; nvars];
        exps[i] = 1;
        let mut p = IntPoly::zero(nvars);
        p.terms.insert(exps, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, exps: Vec<u32>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u64) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::constant(self.nvars, BigInt::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division by an integer; every coefficient must be divisible.
    pub fn div_exact(&self, d: &BigInt) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(d);
                    assert!(r.is_zero(), "non-exact division in ghost solve");
                    (e.clone(), q)
                })
                .collect(),
        }
    }

    /// Evaluates in an arbitrary coefficient ring, mapping integer
    /// coefficients through the ring.
    pub fn eval<R: CoeffRing>(&self, ring: &R, args: &[R::Elem]) -> R::Elem {
        debug_assert_eq!(args.len(), self.nvars);
        // power tables per variable, up to the maximal exponent used
        let mut max_exp = vec![0u32; self.nvars];
        for e in self.terms.keys() {
            for (m, x) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(*x);
            }
        }
        let tables: Vec<Vec<R::Elem>> = (0..self.nvars)
            .map(|v| {
                let mut t = Vec::with_capacity(max_exp[v] as usize + 1);
                t.push(ring.one());
                for e in 1..=max_exp[v] as usize {
                    let next = ring.mul(&t[e - 1], &args[v]);
                    t.push(next);
                }
                t
            })
            .collect();
        let mut acc = ring.zero();
        for (exps, coeff) in &self.terms {
            let mut term = ring.from_bigint(coeff);
            for (v, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = ring.mul(&term, &tables[v][e as usize]);
                }
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::super::rings::IntegerRing;
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let x = IntPoly::var(2, 0);
        let y = IntPoly::var(2, 1);
        let sq = x.add(&y).pow(2);
        assert_eq!(sq.terms.len(), 3);
        let ring = IntegerRing;
        let v = sq.eval(&ring, &[BigInt::from(3), BigInt::from(4)]);
        assert_eq!(v, BigInt::from(49));

        let diff = sq.sub(&x.mul(&x)).sub(&y.mul(&y));
        let half = diff.div_exact(&BigInt::from(2));
        assert_eq!(half, x.mul(&y));
    }
}

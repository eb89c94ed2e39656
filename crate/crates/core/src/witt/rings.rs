//! Minimal coefficient-ring interface for the Witt engine: one trait
//! serving the integers (ghost checks), prime fields, and weighted-graded
//! polynomial algebras over a prime field.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Homogeneity report for an element of a graded ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero element is homogeneous of every degree.
    Zero,
    Homogeneous(Rational),
    Mixed,
}

/// What the Witt engine needs of a coefficient ring: exact arithmetic,
/// equality, and optionally a grading.
pub trait CoeffRing {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Degree bookkeeping; `None` when the ring carries no grading.
    fn homogeneity(&self, _a: &Self::Elem) -> Option<Homogeneity> {
        None
    }
}

/// The integers; used for ghost-component oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegerRing;

impl CoeffRing for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::from(1)
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
}

/// The field with `p` elements, `p` a (small) prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        PrimeField { p }
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        r.to_u64().expect("residue fits")
    }
}

impl CoeffRing for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        self.reduce_bigint(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
}

/// A polynomial over `F_p`, stored sparsely; exponent vectors follow the
/// ring's variable list.
pub type GradedPolyElem = BTreeMap<Vec<u32>, u64>;

/// `F_p[x_1, ..., x_k]` with a rational weight attached to each variable.
/// This is the graded coefficient ring used for the graded Witt structure.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPolyRing {
    pub p: u64,
    pub vars: Vec<String>,
    pub weights: Vec<Rational>,
}

impl WeightedPolyRing {
    pub fn new(p: u64, vars: Vec<(String, Rational)>) -> Self {
        let (names, weights) = vars.into_iter().unzip();
        WeightedPolyRing {
            p,
            vars: names,
            weights,
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn monomial(&self, coeff: u64, exps: Vec<u32>) -> GradedPolyElem {
        let mut m = BTreeMap::new();
        let c = coeff % self.p;
        if c != 0 {
            m.insert(exps, c);
        }
        m
    }

    pub fn var(&self, name: &str) -> Option<GradedPolyElem> {
        let i = self.var_index(name)?;
        let mut exps = vec![0u32; self.vars.len()];
        exps[i] = 1;
        Some(self.monomial(1, exps))
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> Rational {
        exps.iter()
            .zip(&self.weights)
            .map(|(e, w)| Rational::from(BigInt::from(*e)) * w)
            .sum()
    }

    pub fn format(&self, a: &GradedPolyElem) -> String {
        if a.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (exps, c) in a {
            let mut factors = Vec::new();
            if *c != 1 || exps.iter().all(|e| *e == 0) {
                factors.push(c.to_string());
            }
            for (v, e) in self.vars.iter().zip(exps) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl CoeffRing for WeightedPolyRing {
    type Elem = GradedPolyElem;

    fn zero(&self) -> GradedPolyElem {
        BTreeMap::new()
    }

    fn one(&self) -> GradedPolyElem {
        self.monomial(1, vec![0; self.vars.len()])
    }

    fn from_bigint(&self, n: &BigInt) -> GradedPolyElem {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        self.monomial(
            r.to_u64().expect("residue fits"),
            vec![0; self.vars.len()],
        )
    }

    fn add(&self, a: &GradedPolyElem, b: &GradedPolyElem) -> GradedPolyElem {
        let mut out = a.clone();
        for (e, c) in b {
            let entry = out.entry(e.clone()).or_insert(0);
            *entry = (*entry + c) % self.p;
            if *entry == 0 {
                out.remove(e);
            }
        }
        out
    }

    fn mul(&self, a: &GradedPolyElem, b: &GradedPolyElem) -> GradedPolyElem {
        let mut out: GradedPolyElem = BTreeMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.entry(exps).or_insert(0);
                *entry =
                    ((*entry as u128 + *ca as u128 * *cb as u128) % self.p as u128) as u64;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn is_zero(&self, a: &GradedPolyElem) -> bool {
        a.is_empty()
    }

    fn homogeneity(&self, a: &GradedPolyElem) -> Option<Homogeneity> {
        let mut degrees = a.keys().map(|e| self.weighted_degree(e));
        Some(match degrees.next() {
            None => Homogeneity::Zero,
            Some(d0) => {
                if degrees.all(|d| d == d0) {
                    Homogeneity::Homogeneous(d0)
                } else {
                    Homogeneity::Mixed
                }
            }
        })
    }
}

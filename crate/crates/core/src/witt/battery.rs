//! Deterministic property batteries over the Witt engine: ghost
//! homomorphism checks on random integer lifts, exhaustive ring axioms on
//! W_n(F_p), and grading closure on monomial samples.

use num::bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rings::{CoeffRing, Homogeneity, IntegerRing, PrimeField, WeightedPolyRing};
use super::{ghost_components, WittRing, WittVec};
use crate::rational::{rat, rat_int, Rational};

/// Checks `ghost(a + b) = ghost(a) + ghost(b)` and `ghost(a b) =
/// ghost(a) ghost(b)` on `count` random integer tuples with entries in
/// `[-6, 6]`.
pub fn ghost_battery(p: u64, n: usize, count: usize, seed: u64) -> Result<(), String> {
    let w = WittRing::new(p, n, IntegerRing).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ n as u64);
    for trial in 0..count {
        let sample = |rng: &mut ChaCha8Rng| -> WittVec<BigInt> {
            WittVec {
                entries: (0..n).map(|_| BigInt::from(rng.random_range(-6i64..=6))).collect(),
            }
        };
        let a = sample(&mut rng);
        let b = sample(&mut rng);
        let ga = ghost_components(p, &a);
        let gb = ghost_components(p, &b);
        let gs = ghost_components(p, &w.add(&a, &b));
        let gp = ghost_components(p, &w.mul(&a, &b));
        for m in 0..n {
            if gs[m] != &ga[m] + &gb[m] {
                return Err(format!(
                    "ghost additivity fails at p={p} n={n} trial={trial} component={m}"
                ));
            }
            if gp[m] != &ga[m] * &gb[m] {
                return Err(format!(
                    "ghost multiplicativity fails at p={p} n={n} trial={trial} component={m}"
                ));
            }
        }
    }
    Ok(())
}

/// Exhaustive ring axioms on W_n(F_p): commutativity, associativity and
/// distributivity over all triples, plus the identities.
pub fn ring_axioms_exhaustive(p: u64, n: usize) -> Result<(), String> {
    let w = WittRing::new(p, n, PrimeField::new(p)).map_err(|e| e.to_string())?;
    let mut all: Vec<WittVec<u64>> = Vec::new();
    let total = p.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut entries = Vec::with_capacity(n);
        for _ in 0..n {
            entries.push(c % p);
            c /= p;
        }
        all.push(WittVec { entries });
    }
    let zero = w.zero();
    let one = w.teichmuller(1 % p);
    for a in &all {
        if !w.eq(&w.add(a, &zero), a) {
            return Err(format!("additive identity fails at p={p} n={n}"));
        }
        if !w.eq(&w.mul(a, &one), a) {
            return Err(format!("multiplicative identity fails at p={p} n={n}"));
        }
        for b in &all {
            if !w.eq(&w.add(a, b), &w.add(b, a)) {
                return Err(format!("addition not commutative at p={p} n={n}"));
            }
            if !w.eq(&w.mul(a, b), &w.mul(b, a)) {
                return Err(format!("multiplication not commutative at p={p} n={n}"));
            }
            for c in &all {
                let assoc_add = w.eq(&w.add(&w.add(a, b), c), &w.add(a, &w.add(b, c)));
                let assoc_mul = w.eq(&w.mul(&w.mul(a, b), c), &w.mul(a, &w.mul(b, c)));
                let distrib = w.eq(
                    &w.mul(a, &w.add(b, c)),
                    &w.add(&w.mul(a, b), &w.mul(a, c)),
                );
                if !(assoc_add && assoc_mul && distrib) {
                    return Err(format!("ring axiom fails at p={p} n={n}"));
                }
            }
        }
    }
    Ok(())
}

fn expect_degree(
    w: &WittRing<WeightedPolyRing>,
    v: &WittVec<<WeightedPolyRing as CoeffRing>::Elem>,
    want: &Rational,
    what: &str,
) -> Result<(), String> {
    match w.homogeneous_degree(v).map_err(|e| e.to_string())? {
        Homogeneity::Homogeneous(d) if d == *want => Ok(()),
        Homogeneity::Zero => Ok(()),
        other => Err(format!("{what}: expected degree {want}, got {other:?}")),
    }
}

/// Grading battery on monomial samples over F_p[x, t]: products add
/// degrees, sums of equal degree stay homogeneous, Frobenius multiplies
/// the degree by p, Verschiebung divides it, restriction preserves it.
pub fn grading_battery(p: u64, n: usize) -> Result<(), String> {
    let ring = WeightedPolyRing::new(
        p,
        vec![("x".into(), rat_int(1)), ("t".into(), rat(1, 2))],
    );
    let w = WittRing::new(p, n, ring.clone()).map_err(|e| e.to_string())?;
    let x = ring.var("x").unwrap();
    let t = ring.var("t").unwrap();

    // homogeneous samples: entry i carries degree p^i * e
    let mut samples: Vec<(WittVec<_>, Rational)> = Vec::new();
    for (base, e) in [(x.clone(), rat_int(1)), (t.clone(), rat(1, 2))] {
        let entries: Vec<_> = (0..n)
            .map(|i| ring.pow(&base, p.pow(i as u32)))
            .collect();
        samples.push((WittVec { entries }, e));
    }
    // a two-variable sample of degree 3/2
    let xt = ring.mul(&x, &t);
    let entries: Vec<_> = (0..n).map(|i| ring.pow(&xt, p.pow(i as u32))).collect();
    samples.push((WittVec { entries }, rat(3, 2)));

    for (v, e) in &samples {
        expect_degree(&w, v, e, "sample")?;
        for (u, e2) in &samples {
            let prod = w.mul(v, u);
            expect_degree(&w, &prod, &(e + e2), "product")?;
            if e == e2 {
                let sum = w.add(v, u);
                expect_degree(&w, &sum, e, "equal-degree sum")?;
            }
        }
        let f = w.frobenius(v);
        expect_degree(&w, &f, &(Rational::from(BigInt::from(p)) * e), "frobenius")?;
        // fixed-length V shifts entry i to i+1: degree e becomes e / p
        let v_shift = w.verschiebung_fixed(v);
        expect_degree(
            &w,
            &v_shift,
            &(e / Rational::from(BigInt::from(p))),
            "verschiebung",
        )?;
        let r = w.restrict(v, n - 1).map_err(|e| e.to_string())?;
        if n > 1 {
            let wr = WittRing::new(p, n - 1, ring.clone()).map_err(|e| e.to_string())?;
            expect_degree(&wr, &r, e, "restriction")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batteries_smoke() {
        ghost_battery(2, 3, 25, 7).unwrap();
        ghost_battery(3, 2, 25, 7).unwrap();
        ring_axioms_exhaustive(2, 2).unwrap();
        grading_battery(2, 3).unwrap();
        grading_battery(3, 2).unwrap();
    }
}

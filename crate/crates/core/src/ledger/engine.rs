//! Fact-propagation engine over long exact sequences of sheaf cohomology
//! on the plane with four marked lines.
//!
//! Three rule schemas drive propagation: zero-neighbour isomorphism (a
//! term flanked by zeros is isomorphic to its neighbour, and a term
//! between two zeros vanishes), left-exactness of global sections (the
//! boundary cases of the same schema), and Euler-characteristic closure
//! (surfaces have no cohomology above degree two, so a single unknown in
//! a sequence is forced by the alternating sum). Split sequences satisfy
//! the stronger additivity rule in every degree. The one step no local
//! rule can reach, the comparison of the boundary and cycle towers in
//! equal twist, is a scripted derivation whose premises are asserted
//! against the current fact set.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use super::sheaf::{fact_name, FactKey, Sheaf};
use super::DelPezzoCase;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("conflicting facts for {key}: {existing} [{existing_reason}] vs {new} [{new_reason}]")]
    Conflict {
        key: String,
        existing: BigInt,
        existing_reason: String,
        new: BigInt,
        new_reason: String,
    },
    #[error("underdetermined: no derivation reaches {0}")]
    Underdetermined(String),
    #[error("exactness audit failed for `{rule}`: {detail}")]
    AuditFailure { rule: String, detail: String },
    #[error("scripted step `{step}` failed: {detail}")]
    ScriptAssertion { step: String, detail: String },
    #[error("negative dimension forced for {0}")]
    NegativeDimension(String),
}

/// A known dimension with its derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub dim: BigInt,
    pub reason: String,
    pub deps: Vec<FactKey>,
}

/// An instantiated short exact sequence `0 -> A -> B -> C -> 0`.
#[derive(Debug, Clone)]
struct Rule {
    name: String,
    a: Sheaf,
    b: Sheaf,
    c: Sheaf,
    /// Split sequences satisfy `h^i(B) = h^i(A) + h^i(C)` in every degree.
    split: bool,
}

impl Rule {
    /// The nine cohomology terms of the induced long exact sequence, in
    /// chain order, bounded by zeros on both sides.
    fn terms(&self) -> [FactKey; 9] {
        [
            (self.a.clone(), 0),
            (self.b.clone(), 0),
            (self.c.clone(), 0),
            (self.a.clone(), 1),
            (self.b.clone(), 1),
            (self.c.clone(), 1),
            (self.a.clone(), 2),
            (self.b.clone(), 2),
            (self.c.clone(), 2),
        ]
    }
}

/// The dimension ledger for one case: facts, their derivations, and the
/// instantiated sequences that produced them.
pub struct DimLedger {
    pub case: DelPezzoCase,
    pub m_max: u32,
    /// `t_k = deg floor(p^k D)` for `k = 0..=m_max+1`.
    twists: Vec<BigInt>,
    facts: BTreeMap<FactKey, Fact>,
    rules: Vec<Rule>,
    /// For each level m, the recorded comparison isomorphism between the
    /// boundary- and cycle-tower `h^1` at twist `p^m D`.
    comparison_iso: BTreeMap<u32, String>,
    /// Scripted steps whose premises were not met; the ledger stays
    /// valid but the affected facts remain underived.
    stalls: Vec<String>,
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn h0_line(d: &BigInt) -> BigInt {
    if d.is_negative() {
        BigInt::zero()
    } else {
        (d + 1) * (d + 2) / 2
    }
}

fn h0_p1_line(d: &BigInt) -> BigInt {
    if d.is_negative() {
        BigInt::zero()
    } else {
        d + 1
    }
}

impl DimLedger {
    /// Runs the full derivation for a case: instantiates the rules,
    /// installs the closed-form facts, propagates to a fixed point,
    /// performs the scripted tower comparisons up to `m_max`, and audits
    /// every fully known sequence.
    pub fn run(case: &DelPezzoCase, m_max: u32) -> Result<Self, LedgerError> {
        let k_max = m_max + 1;
        let twists: Vec<BigInt> = (0..=k_max).map(|k| case.floor_p_degree(k)).collect();
        let mut ledger = DimLedger {
            case: case.clone(),
            m_max,
            twists,
            facts: BTreeMap::new(),
            rules: Vec::new(),
            comparison_iso: BTreeMap::new(),
            stalls: Vec::new(),
        };
        ledger.build_rules(m_max, k_max);
        ledger.install_closed_forms(m_max, k_max)?;
        ledger.propagate()?;
        for m in 1..=m_max {
            if let Some(stall) = ledger.tower_comparison(m)? {
                ledger.stalls.push(stall);
                break;
            }
            ledger.propagate()?;
        }
        ledger.audit()?;
        Ok(ledger)
    }

    /// Scripted steps that could not run because their premises were not
    /// derivable for this case.
    pub fn stalls(&self) -> &[String] {
        &self.stalls
    }

    pub fn twist_degree(&self, k: u32) -> &BigInt {
        &self.twists[k as usize]
    }

    fn build_rules(&mut self, m_max: u32, k_max: u32) {
        let t = |k: u32| self.twists[k as usize].clone();
        // residue sequences 0 -> Omega1 -> Omega1log -> (+)O_L -> 0 at the
        // twist degrees that occur
        let mut residue_degrees: BTreeSet<BigInt> = (0..=k_max).map(t).collect();
        residue_degrees.insert(big(0));
        for d in residue_degrees {
            self.rules.push(Rule {
                name: format!("residue sequence at degree {d}"),
                a: Sheaf::Omega1(d.clone()),
                b: Sheaf::Omega1Log(d.clone()),
                c: Sheaf::QuadP1(d),
                split: false,
            });
        }
        // frobenius quotient sequences
        // 0 -> O(t_k) -> O(t_{k+1}) -> B_1(p^{k+1} D) -> 0,
        // split for k >= 1 by the splitting axiom for the fractional
        // boundary (the pair with the fractional-part divisor is globally
        // F-regular, so the relevant inclusion of line bundles splits)
        for k in 0..k_max {
            self.rules.push(Rule {
                name: format!("frobenius quotient sequence at level 1, twist p^{}D", k + 1),
                a: Sheaf::Line(t(k)),
                b: Sheaf::Line(t(k + 1)),
                c: Sheaf::BOmega1 { m: 1, n: k + 1 },
                split: k >= 1,
            });
        }
        // cartier kernel sequences 0 -> B_m -> Z_m -> Omega1log -> 0
        for m in 1..=m_max {
            for n in m..=k_max {
                self.rules.push(Rule {
                    name: format!("cartier kernel sequence (m={m}, twist p^{n}D)"),
                    a: Sheaf::BOmega1 { m, n },
                    b: Sheaf::ZOmega1 { m, n },
                    c: Sheaf::Omega1Log(t(n - m)),
                    split: false,
                });
            }
        }
        // cartier towers 0 -> B_1 -> B_m -> B_{m-1} -> 0 and the cycle
        // analogue
        for m in 2..=m_max {
            for n in m..=k_max {
                self.rules.push(Rule {
                    name: format!("cartier tower, boundary side (m={m}, twist p^{n}D)"),
                    a: Sheaf::BOmega1 { m: 1, n },
                    b: Sheaf::BOmega1 { m, n },
                    c: Sheaf::BOmega1 { m: m - 1, n: n - 1 },
                    split: false,
                });
                self.rules.push(Rule {
                    name: format!("cartier tower, cycle side (m={m}, twist p^{n}D)"),
                    a: Sheaf::BOmega1 { m: 1, n },
                    b: Sheaf::ZOmega1 { m, n },
                    c: Sheaf::ZOmega1 { m: m - 1, n: n - 1 },
                    split: false,
                });
            }
        }
        // frobenius closure sequences 0 -> Z_m -> Z_{m-1} -> B_1Omega2 -> 0
        for m in 1..=m_max {
            for n in m..=k_max {
                let middle = if m == 1 {
                    Sheaf::Omega1Log(t(n))
                } else {
                    Sheaf::ZOmega1 { m: m - 1, n }
                };
                self.rules.push(Rule {
                    name: format!("frobenius closure sequence (m={m}, twist p^{n}D)"),
                    a: Sheaf::ZOmega1 { m, n },
                    b: middle,
                    c: Sheaf::B1Omega2 { n: n - m + 1 },
                    split: false,
                });
            }
        }
        // top-form quotient sequences: the cycle sheaf of top forms is the
        // pushforward of the twisted log canonical bundle, a line bundle
        // of degree 1 + t
        for k in 0..k_max {
            self.rules.push(Rule {
                name: format!("top-form quotient sequence (twist p^{}D)", k + 1),
                a: Sheaf::B1Omega2 { n: k + 1 },
                b: Sheaf::Line(&t(k + 1) + 1),
                c: Sheaf::Line(&t(k) + 1),
                split: false,
            });
        }
    }

    fn install_closed_forms(&mut self, m_max: u32, _k_max: u32) -> Result<(), LedgerError> {
        // every line-bundle and restriction term referenced by a rule
        let mut line_degrees: BTreeSet<BigInt> = BTreeSet::new();
        let mut quad_degrees: BTreeSet<BigInt> = BTreeSet::new();
        let mut omega1_degrees: BTreeSet<BigInt> = BTreeSet::new();
        for rule in &self.rules {
            for s in [&rule.a, &rule.b, &rule.c] {
                match s {
                    Sheaf::Line(d) => {
                        line_degrees.insert(d.clone());
                    }
                    Sheaf::QuadP1(d) => {
                        quad_degrees.insert(d.clone());
                    }
                    Sheaf::Omega1(d) => {
                        omega1_degrees.insert(d.clone());
                    }
                    _ => {}
                }
            }
        }
        for j in 0..=m_max as i64 {
            omega1_degrees.insert(big(-j));
        }
        for d in line_degrees {
            self.install_line(&d)?;
        }
        for d in quad_degrees {
            let reason = format!("closed form: four disjoint degree-{d} line bundles on lines");
            self.install((Sheaf::QuadP1(d.clone()), 0), big(4) * h0_p1_line(&d), &reason, vec![])?;
            self.install(
                (Sheaf::QuadP1(d.clone()), 1),
                big(4) * h0_p1_line(&(big(-2) - &d)),
                &reason,
                vec![],
            )?;
            self.install((Sheaf::QuadP1(d), 2), BigInt::zero(), &reason, vec![])?;
        }
        for d in omega1_degrees {
            self.install_omega1(&d)?;
        }
        Ok(())
    }

    fn install_line(&mut self, d: &BigInt) -> Result<(), LedgerError> {
        let reason = format!("closed form for O({d}) on the plane");
        self.install((Sheaf::Line(d.clone()), 0), h0_line(d), &reason, vec![])?;
        self.install((Sheaf::Line(d.clone()), 1), BigInt::zero(), &reason, vec![])?;
        self.install(
            (Sheaf::Line(d.clone()), 2),
            h0_line(&(big(-3) - d)),
            &reason,
            vec![],
        )?;
        Ok(())
    }

    fn install_omega1(&mut self, d: &BigInt) -> Result<(), LedgerError> {
        let reason = format!("twisted cotangent dims at degree {d} from the rank-3 presentation");
        if !d.is_positive() {
            self.install((Sheaf::Omega1(d.clone()), 0), BigInt::zero(), &reason, vec![])?;
            let h1 = if d.is_zero() { BigInt::one() } else { BigInt::zero() };
            self.install((Sheaf::Omega1(d.clone()), 1), h1, &reason, vec![])?;
        }
        let h2 = big(3) * h0_line(&(big(-2) - d)) - h0_line(&(big(-3) - d));
        if h2.is_negative() {
            return Err(LedgerError::NegativeDimension(format!("Omega1({d}) h^2")));
        }
        self.install((Sheaf::Omega1(d.clone()), 2), h2, &reason, vec![])?;
        Ok(())
    }

    fn install(
        &mut self,
        key: FactKey,
        dim: BigInt,
        reason: &str,
        deps: Vec<FactKey>,
    ) -> Result<bool, LedgerError> {
        if dim.is_negative() {
            return Err(LedgerError::NegativeDimension(fact_name(&key)));
        }
        match self.facts.get(&key) {
            Some(existing) => {
                if existing.dim == dim {
                    Ok(false)
                } else {
                    Err(LedgerError::Conflict {
                        key: fact_name(&key),
                        existing: existing.dim.clone(),
                        existing_reason: existing.reason.clone(),
                        new: dim,
                        new_reason: reason.to_string(),
                    })
                }
            }
            None => {
                self.facts.insert(
                    key,
                    Fact {
                        dim,
                        reason: reason.to_string(),
                        deps,
                    },
                );
                Ok(true)
            }
        }
    }

    pub fn dim(&self, sheaf: &Sheaf, i: u8) -> Option<&BigInt> {
        self.facts.get(&(sheaf.clone(), i)).map(|f| &f.dim)
    }

    pub fn fact(&self, sheaf: &Sheaf, i: u8) -> Option<&Fact> {
        self.facts.get(&(sheaf.clone(), i))
    }

    pub fn require(&self, sheaf: &Sheaf, i: u8) -> Result<&Fact, LedgerError> {
        self.fact(sheaf, i)
            .ok_or_else(|| LedgerError::Underdetermined(fact_name(&(sheaf.clone(), i))))
    }

    fn dims_of(&self, keys: &[FactKey; 9]) -> Vec<Option<BigInt>> {
        keys.iter()
            .map(|k| self.facts.get(k).map(|f| f.dim.clone()))
            .collect()
    }

    /// One propagation pass; returns whether anything new was derived.
    fn propagate_once(&mut self) -> Result<bool, LedgerError> {
        let mut changed = false;
        let rules = self.rules.clone();
        for rule in &rules {
            let keys = rule.terms();
            let mut dims = self.dims_of(&keys);

            if rule.split {
                // h^i(B) = h^i(A) + h^i(C) in every degree
                for i in 0..3usize {
                    let (ia, ib, ic) = (3 * i, 3 * i + 1, 3 * i + 2);
                    let positions = [ia, ib, ic];
                    let known = positions.iter().filter(|&&p| dims[p].is_some()).count();
                    if known == 2 {
                        let (target, value, used) = if dims[ib].is_none() {
                            (
                                ib,
                                dims[ia].clone().unwrap() + dims[ic].clone().unwrap(),
                                vec![keys[ia].clone(), keys[ic].clone()],
                            )
                        } else if dims[ia].is_none() {
                            (
                                ia,
                                dims[ib].clone().unwrap() - dims[ic].clone().unwrap(),
                                vec![keys[ib].clone(), keys[ic].clone()],
                            )
                        } else {
                            (
                                ic,
                                dims[ib].clone().unwrap() - dims[ia].clone().unwrap(),
                                vec![keys[ib].clone(), keys[ia].clone()],
                            )
                        };
                        let reason = format!(
                            "split additivity in degree {i} of [{}] (frobenius splitting axiom \
                             for the fractional boundary)",
                            rule.name
                        );
                        if self.install(keys[target].clone(), value, &reason, used)? {
                            changed = true;
                            dims = self.dims_of(&keys);
                        }
                    }
                }
            }

            let get = |dims: &Vec<Option<BigInt>>, j: isize| -> Option<BigInt> {
                if !(0..9).contains(&j) {
                    Some(BigInt::zero())
                } else {
                    dims[j as usize].clone()
                }
            };
            let is_zero = |dims: &Vec<Option<BigInt>>, j: isize| -> bool {
                get(dims, j).is_some_and(|d| d.is_zero())
            };

            // zero sandwich: a term between two zeros vanishes (covers
            // left-exactness of global sections at the boundary)
            for j in 0..9isize {
                if dims[j as usize].is_none() && is_zero(&dims, j - 1) && is_zero(&dims, j + 1) {
                    let mut deps = Vec::new();
                    for d in [j - 1, j + 1] {
                        if (0..9).contains(&d) {
                            deps.push(keys[d as usize].clone());
                        }
                    }
                    let reason = format!(
                        "zero neighbours force {} = 0 in [{}]",
                        fact_name(&keys[j as usize]),
                        rule.name
                    );
                    if self.install(keys[j as usize].clone(), BigInt::zero(), &reason, deps)? {
                        changed = true;
                        dims = self.dims_of(&keys);
                    }
                }
            }

            // zero-neighbour isomorphism: if the terms flanking a pair are
            // zero, the connecting map between the pair is an isomorphism
            for j in 0..8isize {
                if is_zero(&dims, j - 1) && is_zero(&dims, j + 2) {
                    let (u, v) = (j as usize, j as usize + 1);
                    let (src, dst) = match (dims[u].is_some(), dims[v].is_some()) {
                        (true, false) => (u, v),
                        (false, true) => (v, u),
                        _ => continue,
                    };
                    let mut deps = vec![keys[src].clone()];
                    for d in [j - 1, j + 2] {
                        if (0..9).contains(&d) {
                            deps.push(keys[d as usize].clone());
                        }
                    }
                    let reason = format!(
                        "zero-neighbour isomorphism {} = {} in [{}]",
                        fact_name(&keys[dst]),
                        fact_name(&keys[src]),
                        rule.name
                    );
                    let value = dims[src].clone().unwrap();
                    if self.install(keys[dst].clone(), value, &reason, deps)? {
                        changed = true;
                        dims = self.dims_of(&keys);
                    }
                }
            }

            // Euler closure: no cohomology above degree two, so a single
            // unknown term is forced by the alternating sum
            let unknown: Vec<usize> = (0..9).filter(|&j| dims[j].is_none()).collect();
            if unknown.len() == 1 {
                let j = unknown[0];
                let mut signed = BigInt::zero();
                let mut deps = Vec::new();
                for (i, d) in dims.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let v = d.clone().unwrap();
                    if i % 2 == 0 {
                        signed += &v;
                    } else {
                        signed -= &v;
                    }
                    deps.push(keys[i].clone());
                }
                let value = if j % 2 == 0 { -signed } else { signed };
                if value.is_negative() {
                    return Err(LedgerError::AuditFailure {
                        rule: rule.name.clone(),
                        detail: format!(
                            "alternating sum forces a negative dimension for {}",
                            fact_name(&keys[j])
                        ),
                    });
                }
                let reason = format!(
                    "Euler-characteristic closure of [{}] (no cohomology above degree 2)",
                    rule.name
                );
                if self.install(keys[j].clone(), value, &reason, deps)? {
                    changed = true;
                }
            }
        }
        Ok(changed)
    }

    fn propagate(&mut self) -> Result<(), LedgerError> {
        while self.propagate_once()? {}
        Ok(())
    }

    /// The scripted derivation comparing the boundary and cycle towers at
    /// twist `p^m D`: each premise is asserted against the current facts,
    /// and the conclusion `h^1(B_m(p^m D)) = h^1(Z_m(p^m D))` is recorded
    /// with the comparison isomorphism. Returns a stall note (and derives
    /// nothing) when a premise is missing or has an unexpected value.
    fn tower_comparison(&mut self, m: u32) -> Result<Option<String>, LedgerError> {
        let step = format!("tower comparison at level {m}");
        let assert_dim = |ledger: &Self, s: Sheaf, i: u8, want: i64| -> Result<FactKey, String> {
            let key = (s.clone(), i);
            match ledger.fact(&s, i) {
                None => Err(format!(
                    "{step}: premise {} is not yet derived",
                    fact_name(&key)
                )),
                Some(fact) if fact.dim != big(want) => Err(format!(
                    "{step}: premise {} = {} but the chase expects {want}",
                    fact_name(&key),
                    fact.dim
                )),
                Some(_) => Ok(key),
            }
        };

        if m == 1 {
            // injectivity: the boundary sheaf includes into the cycle
            // sheaf with quotient the log cotangent sheaf, whose global
            // sections vanish; equal one-dimensional h^1 upgrades the
            // injection to an isomorphism
            let d0 = self.twists[0].clone();
            let premises = (|| -> Result<(FactKey, FactKey, FactKey), String> {
                Ok((
                    assert_dim(self, Sheaf::Omega1Log(d0), 0, 0)?,
                    assert_dim(self, Sheaf::BOmega1 { m: 1, n: 1 }, 1, 1)?,
                    assert_dim(self, Sheaf::ZOmega1 { m: 1, n: 1 }, 1, 1)?,
                ))
            })();
            let (p1, p2, p3) = match premises {
                Ok(p) => p,
                Err(stall) => return Ok(Some(stall)),
            };
            self.comparison_iso.insert(
                1,
                format!(
                    "h^1 comparison at level 1 is an isomorphism: the inclusion of the boundary \
                     sheaf is injective on h^1 because {} = 0, and both sides have h^1 = 1 \
                     (premises: {}, {}, {})",
                    fact_name(&p1),
                    fact_name(&p1),
                    fact_name(&p2),
                    fact_name(&p3)
                ),
            );
            return Ok(None);
        }

        // five-term comparison between the boundary- and cycle-tower
        // sequences at (m, twist p^m D); premises:
        //   h^0 of both level-(m-1) sheaves vanish (their comparison is
        //   an isomorphism of zero spaces),
        //   the kernel term has h^1 = 0,
        //   the level-(m-1) comparison is an isomorphism (induction),
        // so the five lemma upgrades the middle map to an isomorphism.
        let premises = (|| -> Result<(FactKey, FactKey, FactKey), String> {
            Ok((
                assert_dim(self, Sheaf::BOmega1 { m: m - 1, n: m - 1 }, 0, 0)?,
                assert_dim(self, Sheaf::ZOmega1 { m: m - 1, n: m - 1 }, 0, 0)?,
                assert_dim(self, Sheaf::BOmega1 { m: 1, n: m }, 1, 0)?,
            ))
        })();
        let (p1, p2, p3) = match premises {
            Ok(p) => p,
            Err(stall) => return Ok(Some(stall)),
        };
        let Some(prev) = self.comparison_iso.get(&(m - 1)).cloned() else {
            return Ok(Some(format!(
                "{step}: level {} comparison not established",
                m - 1
            )));
        };
        let Some(z_fact) = self.dim(&Sheaf::ZOmega1 { m, n: m }, 1).cloned() else {
            return Ok(Some(format!(
                "{step}: h^1 of the cycle sheaf at level {m} is not derived; the comparison \
                 has nothing to transport"
            )));
        };
        let deps = vec![
            p1,
            p2,
            p3,
            (Sheaf::ZOmega1 { m, n: m }, 1),
            (Sheaf::BOmega1 { m: m - 1, n: m - 1 }, 1),
        ];
        let reason = format!(
            "five-term comparison of the boundary and cycle towers at level {m}: h^0 premises \
             vanish, the kernel h^1 vanishes, and the level-{} comparison is an isomorphism, \
             so h^1(B) = h^1(Z) here",
            m - 1
        );
        self.install((Sheaf::BOmega1 { m, n: m }, 1), z_fact, &reason, deps)?;
        self.comparison_iso.insert(
            m,
            format!("h^1 comparison at level {m} is an isomorphism (five-term comparison; {prev})"),
        );
        Ok(None)
    }

    /// Exactness audit over every fully known sequence: ranks along the
    /// chain must be non-negative and close at zero, which subsumes the
    /// alternating-sum identity.
    pub fn audit(&self) -> Result<(), LedgerError> {
        for rule in &self.rules {
            let keys = rule.terms();
            let dims = self.dims_of(&keys);
            if dims.iter().any(|d| d.is_none()) {
                continue;
            }
            let mut rank = BigInt::zero();
            for (i, d) in dims.iter().enumerate() {
                rank = d.clone().unwrap() - rank;
                if rank.is_negative() {
                    return Err(LedgerError::AuditFailure {
                        rule: rule.name.clone(),
                        detail: format!("rank chain goes negative at position {i}"),
                    });
                }
            }
            if !rank.is_zero() {
                return Err(LedgerError::AuditFailure {
                    rule: rule.name.clone(),
                    detail: "rank chain does not close at zero".to_string(),
                });
            }
            if rule.split {
                for i in 0..3usize {
                    let a = dims[3 * i].clone().unwrap();
                    let b = dims[3 * i + 1].clone().unwrap();
                    let c = dims[3 * i + 2].clone().unwrap();
                    if b != a + c {
                        return Err(LedgerError::AuditFailure {
                            rule: rule.name.clone(),
                            detail: format!("split additivity fails in degree {i}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Transitive derivation chain for a fact, dependencies first.
    pub fn derivation_chain(&self, sheaf: &Sheaf, i: u8) -> Vec<String> {
        let mut seen: BTreeSet<FactKey> = BTreeSet::new();
        let mut out = Vec::new();
        self.chain_rec(&(sheaf.clone(), i), &mut seen, &mut out);
        out
    }

    fn chain_rec(&self, key: &FactKey, seen: &mut BTreeSet<FactKey>, out: &mut Vec<String>) {
        if !seen.insert(key.clone()) {
            return;
        }
        if let Some(fact) = self.facts.get(key) {
            for dep in &fact.deps {
                self.chain_rec(dep, seen, out);
            }
            out.push(format!("{} = {}  [{}]", fact_name(key), fact.dim, fact.reason));
        } else {
            out.push(format!("{} = ?  [underdetermined]", fact_name(key)));
        }
    }

    /// Every tabulated entry for this case, as
    /// `(description, expected, actual)` rows; `actual` is `None` when
    /// propagation stalled.
    pub fn table_report(&self) -> Vec<TableRow> {
        let mut rows = Vec::new();
        let mut push = |desc: String, sheaf: Sheaf, i: u8, expected: i64| {
            rows.push(TableRow {
                description: desc,
                expected: big(expected),
                actual: self.dim(&sheaf, i).cloned(),
                sheaf,
                cohom_degree: i,
            });
        };
        let m_max = self.m_max;
        let k_max = m_max + 1;
        for j in 0..=m_max as i64 {
            push(
                format!("h^0(Omega1(-{j}))"),
                Sheaf::Omega1(big(-j)),
                0,
                0,
            );
            push(
                format!("h^1(Omega1(-{j}))"),
                Sheaf::Omega1(big(-j)),
                1,
                if j == 0 { 1 } else { 0 },
            );
        }
        for n in 0..=k_max {
            let d = self.twists[n as usize].clone();
            push(
                format!("h^0(Omega1(p^{n}D))"),
                Sheaf::Omega1(d.clone()),
                0,
                0,
            );
            push(
                format!("h^0(Omega1log(p^{n}D))"),
                Sheaf::Omega1Log(d),
                0,
                0,
            );
        }
        let d1 = self.twists[1].clone();
        push(
            "h^1(Omega1log(pD))".to_string(),
            Sheaf::Omega1Log(d1.clone()),
            1,
            0,
        );
        push("h^2(Omega1log(pD))".to_string(), Sheaf::Omega1Log(d1), 2, 0);
        for m in 1..=m_max {
            for n in m..=k_max {
                push(
                    format!("h^0(B{m}Omega1log(p^{n}D))"),
                    Sheaf::BOmega1 { m, n },
                    0,
                    0,
                );
                push(
                    format!("h^0(Z{m}Omega1log(p^{n}D))"),
                    Sheaf::ZOmega1 { m, n },
                    0,
                    0,
                );
            }
            push(
                format!("h^1(B{m}Omega1log(p^{m}D))"),
                Sheaf::BOmega1 { m, n: m },
                1,
                1,
            );
            push(
                format!("h^1(B{m}Omega1log(p^{}D))", m + 1),
                Sheaf::BOmega1 { m, n: m + 1 },
                1,
                0,
            );
            push(
                format!("h^1(Z{m}Omega1log(p^{m}D))"),
                Sheaf::ZOmega1 { m, n: m },
                1,
                1,
            );
            push(
                format!("h^1(Z{m}Omega1log(p^{}D))", m + 1),
                Sheaf::ZOmega1 { m, n: m + 1 },
                1,
                0,
            );
        }
        for n in 2..=k_max {
            push(
                format!("h^1(B1Omega1log(p^{n}D))"),
                Sheaf::BOmega1 { m: 1, n },
                1,
                0,
            );
        }
        push(
            "h^0(B1Omega2log(pD))".to_string(),
            Sheaf::B1Omega2 { n: 1 },
            0,
            1,
        );
        for n in 2..=k_max {
            push(
                format!("h^0(B1Omega2log(p^{n}D))"),
                Sheaf::B1Omega2 { n },
                0,
                0,
            );
        }
        rows
    }

    /// The non-quasi-F-split certificate: true when the level-one
    /// connecting map is forced to be nonzero and every tower comparison
    /// up to `m_max` is an isomorphism.
    pub fn verdict(&self) -> Result<Verdict, LedgerError> {
        let mut chain = Vec::new();
        let t1 = self.twists[1].clone();
        // the level-one extension has middle term the pushforward of
        // O(pD); h^1 of that line bundle vanishing makes the connecting
        // map injective
        let q1 = self.require(&Sheaf::Line(t1.clone()), 1)?;
        if !q1.dim.is_zero() {
            return Ok(Verdict {
                certified: false,
                m_max: self.m_max,
                chain: vec![format!(
                    "h^1(O({t1})) = {} != 0: the connecting map out of h^1 of the boundary \
                     sheaf need not be injective",
                    q1.dim
                )],
            });
        }
        chain.push(format!(
            "h^1(O({t1})) = 0, so the connecting map from h^1 of the level-1 boundary sheaf \
             into h^2(O(D)) is injective"
        ));
        let b1 = self.require(&Sheaf::BOmega1 { m: 1, n: 1 }, 1)?;
        if b1.dim != big(1) {
            return Ok(Verdict {
                certified: false,
                m_max: self.m_max,
                chain: vec![format!(
                    "h^1(B1Omega1log(pD)) = {}: the level-1 obstruction class vanishes or is \
                     not one-dimensional, the mechanism does not apply",
                    b1.dim
                )],
            });
        }
        chain.push(
            "h^1(B1Omega1log(pD)) = 1, so the level-1 connecting map is nonzero".to_string(),
        );
        for m in 1..self.m_max {
            let kernel = self.require(&Sheaf::BOmega1 { m: 1, n: m + 1 }, 1)?;
            if !kernel.dim.is_zero() {
                return Ok(Verdict {
                    certified: false,
                    m_max: self.m_max,
                    chain: vec![format!(
                        "h^1(B1Omega1log(p^{}D)) = {} != 0: the tower map at level {m} need \
                         not be injective",
                        m + 1,
                        kernel.dim
                    )],
                });
            }
            let upper = self.require(&Sheaf::BOmega1 { m: m + 1, n: m + 1 }, 1)?;
            let lower = self.require(&Sheaf::BOmega1 { m, n: m }, 1)?;
            if upper.dim != big(1) || lower.dim != big(1) {
                return Err(LedgerError::Underdetermined(format!(
                    "tower h^1 at levels {m}/{} are not both one-dimensional",
                    m + 1
                )));
            }
            chain.push(format!(
                "h^1(B1Omega1log(p^{}D)) = 0 and h^1 at levels {} and {m} are both \
                 one-dimensional, so the tower map h^1(B{}) -> h^1(B{m}) is an isomorphism",
                m + 1,
                m + 1,
                m + 1
            ));
        }
        chain.push(format!(
            "connecting maps at every level up to {} are nonzero: not m-quasi-F-split for any \
             m <= {}",
            self.m_max, self.m_max
        ));
        Ok(Verdict {
            certified: true,
            m_max: self.m_max,
            chain,
        })
    }

    pub fn facts_len(&self) -> usize {
        self.facts.len()
    }
}

/// One tabulated entry with its expected and derived dimensions.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub description: String,
    pub sheaf: Sheaf,
    pub cohom_degree: u8,
    pub expected: BigInt,
    pub actual: Option<BigInt>,
}

impl TableRow {
    pub fn ok(&self) -> bool {
        self.actual.as_ref() == Some(&self.expected)
    }
}

/// The certificate returned by the verdict: whether the case is certified
/// not quasi-F-split up to the requested level, with the fact chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub certified: bool,
    pub m_max: u32,
    pub chain: Vec<String>,
}

/// Dimensions of the four base families at one integer twist, as far as
/// they are determined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseDims {
    pub line: [BigInt; 3],
    pub omega1: [Option<BigInt>; 3],
    pub omega1_log: [Option<BigInt>; 3],
    /// The twisted log canonical bundle is the line bundle of degree
    /// `1 + n`.
    pub omega2_log: [BigInt; 3],
}

/// Closed-form and residue-derived dimensions at integer twist `n`.
pub fn base_dims(n: i64) -> BaseDims {
    let d = big(n);
    let line = [
        h0_line(&d),
        BigInt::zero(),
        h0_line(&(big(-3) - &d)),
    ];
    let omega2_deg = &d + 1;
    let omega2_log = [
        h0_line(&omega2_deg),
        BigInt::zero(),
        h0_line(&(big(-3) - &omega2_deg)),
    ];
    let omega1: [Option<BigInt>; 3] = [
        if n <= 0 { Some(BigInt::zero()) } else { None },
        match n {
            0 => Some(BigInt::one()),
            _ if n < 0 => Some(BigInt::zero()),
            _ => None,
        },
        Some(big(3) * h0_line(&(big(-2) - &d)) - h0_line(&(big(-3) - &d))),
    ];
    // residue sequence: 0 -> Omega1(n) -> Omega1log(n) -> (+)O_L(n) -> 0
    let quad = [
        big(4) * h0_p1_line(&d),
        big(4) * h0_p1_line(&(big(-2) - &d)),
        BigInt::zero(),
    ];
    let mut omega1_log: [Option<BigInt>; 3] = [None, None, None];
    // h^0: sandwiched whenever both outer h^0 vanish
    if omega1[0] == Some(BigInt::zero()) && quad[0].is_zero() {
        omega1_log[0] = Some(BigInt::zero());
    }
    // h^1 and h^2 close when the restriction terms vanish degreewise
    if quad[0].is_zero() && quad[1].is_zero() {
        if let (Some(h1), h2) = (omega1[1].clone(), omega1[2].clone()) {
            omega1_log[1] = Some(h1);
            omega1_log[2] = h2;
        }
    }
    BaseDims {
        line,
        omega1,
        omega1_log,
        omega2_log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::DelPezzoCase;
    use crate::rational::rat_int;

    #[test]
    fn case_v_core_facts() {
        let case = DelPezzoCase::fixture("v").unwrap();
        let ledger = DimLedger::run(&case, 3).unwrap();
        assert_eq!(ledger.dim(&Sheaf::B1Omega2 { n: 1 }, 0), Some(&big(1)));
        assert_eq!(
            ledger.dim(&Sheaf::BOmega1 { m: 1, n: 1 }, 1),
            Some(&big(1))
        );
        assert_eq!(
            ledger.dim(&Sheaf::ZOmega1 { m: 2, n: 2 }, 1),
            Some(&big(1))
        );
        assert_eq!(
            ledger.dim(&Sheaf::BOmega1 { m: 2, n: 3 }, 1),
            Some(&big(0))
        );
        // the distinct twist keeps the vanishing of the top-form sheaf
        assert_eq!(ledger.dim(&Sheaf::B1Omega2 { n: 2 }, 0), Some(&big(0)));
        let rows = ledger.table_report();
        for row in &rows {
            assert!(row.ok(), "row fails: {}", row.description);
        }
    }

    #[test]
    fn all_cases_table_small() {
        for label in DelPezzoCase::fixture_labels() {
            let case = DelPezzoCase::fixture(label).unwrap();
            let ledger = DimLedger::run(&case, 2).unwrap();
            for row in ledger.table_report() {
                assert!(row.ok(), "case {label}: row fails: {}", row.description);
            }
        }
    }

    #[test]
    fn verdict_case_v() {
        let case = DelPezzoCase::fixture("v").unwrap();
        let ledger = DimLedger::run(&case, 3).unwrap();
        let verdict = ledger.verdict().unwrap();
        assert!(verdict.certified);
        assert!(verdict.chain.iter().any(|s| s.contains("injective")));
        assert!(verdict.chain.iter().any(|s| s.contains("isomorphism")));
    }

    #[test]
    fn verdict_zero_boundary_not_certified() {
        // zero boundary in characteristic 43: the mechanism's premises
        // fail (no one-dimensional obstruction class), the script stalls,
        // and the verdict is inconclusive rather than certified
        let case = DelPezzoCase::new(
            43,
            [rat_int(0), rat_int(0), rat_int(0), rat_int(0)],
        )
        .unwrap();
        let ledger = DimLedger::run(&case, 2).unwrap();
        assert!(!ledger.stalls().is_empty());
        match ledger.verdict() {
            Ok(v) => assert!(!v.certified),
            Err(LedgerError::Underdetermined(_)) => {}
            Err(e) => panic!("unexpected error: {e}"),
        }
    }

    #[test]
    fn derivation_chains_are_nonempty() {
        let case = DelPezzoCase::fixture("v").unwrap();
        let ledger = DimLedger::run(&case, 2).unwrap();
        let chain = ledger.derivation_chain(&Sheaf::BOmega1 { m: 2, n: 2 }, 1);
        assert!(chain.len() > 3);
        assert!(chain.last().unwrap().contains("B2Omega1log"));
    }

    #[test]
    fn base_dims_examples() {
        let b = base_dims(0);
        assert_eq!(b.omega1[1], Some(big(1)));
        let b = base_dims(-1);
        assert_eq!(b.omega1_log, [Some(big(0)), Some(big(0)), Some(big(0))]);
        let b = base_dims(-3);
        // h^2(Omega1(-3)) = 3 h^0(O(1)) - h^0(O(0)) = 8
        assert_eq!(b.omega1[2], Some(big(8)));
        // the log canonical twist: O(-3 + 1) has no sections
        assert_eq!(b.omega2_log[0], big(0));
        let b = base_dims(-4);
        assert_eq!(b.omega2_log[0], big(0));
        assert_eq!(b.line[2], h0_line(&big(1)));
    }
}

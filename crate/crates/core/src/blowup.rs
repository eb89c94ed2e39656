//! Stepwise blowup engine for curve germs with standard coefficients.
//!
//! A germ is modelled combinatorially: analytic branches carry a declared
//! multiplicity sequence, pairwise local intersection numbers live at the
//! focus, and tangency with exceptional curves is derived from the contact
//! bookkeeping (the strict transform of a branch meets the new exceptional
//! curve at a single point with contact equal to the old multiplicity).

use std::collections::BTreeMap;
use std::collections::VecDeque;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{DualGraph, GraphError, Vertex};
use crate::rational::{format_rational, parse_rational, rat_int, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum BlowupError {
    #[error("nothing to blow up: configuration is log smooth")]
    NothingToBlowUp,
    #[error("klt violated: exceptional coefficient {0} >= 1")]
    KltViolated(String),
    #[error("no termination within budget of {0} steps")]
    BudgetExceeded(u64),
    #[error("branch `{0}`: declared data is inconsistent ({1})")]
    InvalidGerm(String, String),
    #[error("negative exceptional coefficient {0} outside the special-point pattern")]
    UnsupportedConfiguration(String),
    #[error("cusp chain length must be >= 1")]
    BadChainLength,
    #[error("invalid germ JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One curve tracked by the engine: an input branch or a created
/// exceptional curve.
#[derive(Debug, Clone, PartialEq)]
struct Curve {
    id: String,
    coefficient: Rational,
    /// Remaining multiplicity sequence; empty means smooth from now on.
    mults: VecDeque<u64>,
    /// Running self-intersection. Meaningless for input branches of a germ
    /// (they start at a declared value, 0 by default) but exact for
    /// exceptional curves.
    self_int: i64,
    exceptional: bool,
}

impl Curve {
    fn head_mult(&self) -> u64 {
        self.mults.front().copied().unwrap_or(1)
    }
}

/// A point of the current configuration that still needs attention:
/// the curves through it. Pairwise contact is read off the global edge map.
type Cluster = Vec<usize>;

/// A curve-germ configuration at a focus point, evolving under blowups.
#[derive(Debug, Clone, PartialEq)]
pub struct GermState {
    curves: Vec<Curve>,
    /// Current pairwise local intersection numbers, keyed `(i, j)`, `i < j`.
    contacts: BTreeMap<(usize, usize), u64>,
    /// Non-log-smooth points awaiting blowups, depth first.
    foci: VecDeque<Cluster>,
    steps: u64,
    /// Set when the germ is a single branch of coefficient 1/2; only such
    /// germs may terminate in a special point.
    half_single_branch: bool,
    /// Exceptional curves in creation order with their coefficients.
    history: Vec<(String, Rational)>,
}

/// Input description of one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSpec {
    pub id: String,
    pub coefficient: Rational,
    /// Multiplicity sequence at the focus and its infinitely near points;
    /// an empty list is a smooth branch.
    pub mults: Vec<u64>,
    /// Self-intersection to seed the emitted dual graph with.
    pub self_int: i64,
}

impl BranchSpec {
    pub fn smooth(id: &str, coefficient: Rational) -> Self {
        BranchSpec {
            id: id.to_string(),
            coefficient,
            mults: vec![],
            self_int: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    EffectiveLogResolution,
    SpecialPoint,
}

/// Result of running the engine to completion (or to the special-point
/// stopping pattern).
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionOutcome {
    pub kind: OutcomeKind,
    pub graph: DualGraph,
    /// Blowup depth of the cusp for a special point; `None` otherwise.
    pub n: Option<u64>,
    pub steps: u64,
}

impl GermState {
    /// Builds the initial state: all branches pass through the focus.
    /// Undeclared pairwise intersections default to the product of the
    /// branch multiplicities (transverse position).
    pub fn new(
        branches: Vec<BranchSpec>,
        intersections: &[(&str, &str, u64)],
    ) -> Result<Self, BlowupError> {
        let half_single_branch =
            branches.len() == 1 && branches[0].coefficient == parse_rational("1/2").unwrap();
        let mut curves = Vec::with_capacity(branches.len());
        let mut index = BTreeMap::new();
        for b in branches {
            for (k, m) in b.mults.iter().enumerate() {
                if *m == 0 || (k + 1 < b.mults.len() && *m == 1) {
                    return Err(BlowupError::InvalidGerm(
                        b.id.clone(),
                        "multiplicity sequence entries must be >= 1 with 1 only terminal"
                            .to_string(),
                    ));
                }
                if k > 0 && *m > b.mults[k - 1] {
                    return Err(BlowupError::InvalidGerm(
                        b.id.clone(),
                        "multiplicity sequence must be non-increasing".to_string(),
                    ));
                }
            }
            if b.coefficient <= Rational::zero() || b.coefficient >= Rational::one() {
                return Err(BlowupError::InvalidGerm(
                    b.id.clone(),
                    "coefficient must lie in (0, 1)".to_string(),
                ));
            }
            if index.insert(b.id.clone(), curves.len()).is_some() {
                return Err(BlowupError::InvalidGerm(b.id, "duplicate id".to_string()));
            }
            curves.push(Curve {
                id: b.id,
                coefficient: b.coefficient,
                mults: b.mults.into_iter().filter(|m| *m > 1).collect(),
                self_int: b.self_int,
                exceptional: false,
            });
        }
        let mut contacts = BTreeMap::new();
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                contacts.insert((i, j), curves[i].head_mult() * curves[j].head_mult());
            }
        }
        for (a, b, m) in intersections {
            let ia = *index
                .get(*a)
                .ok_or_else(|| BlowupError::InvalidGerm(a.to_string(), "unknown id".into()))?;
            let ib = *index
                .get(*b)
                .ok_or_else(|| BlowupError::InvalidGerm(b.to_string(), "unknown id".into()))?;
            let key = (ia.min(ib), ia.max(ib));
            let floor = curves[ia].head_mult() * curves[ib].head_mult();
            if *m < floor {
                return Err(BlowupError::InvalidGerm(
                    a.to_string(),
                    format!("local intersection {m} below multiplicity product {floor}"),
                ));
            }
            contacts.insert(key, *m);
        }
        let root: Cluster = (0..curves.len()).collect();
        let mut state = GermState {
            curves,
            contacts,
            foci: VecDeque::new(),
            steps: 0,
            half_single_branch,
            history: Vec::new(),
        };
        if !state.cluster_log_smooth(&root) {
            state.foci.push_back(root);
        }
        Ok(state)
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn exceptional_history(&self) -> &[(String, Rational)] {
        &self.history
    }

    pub fn is_log_smooth(&self) -> bool {
        self.foci.is_empty()
    }

    fn contact(&self, i: usize, j: usize) -> u64 {
        if i == j {
            return 0;
        }
        *self.contacts.get(&(i.min(j), i.max(j))).unwrap_or(&0)
    }

    /// A point is log smooth when at most two smooth curves pass through it
    /// and, if two, they meet transversally.
    fn cluster_log_smooth(&self, cluster: &Cluster) -> bool {
        match cluster.len() {
            0 => true,
            1 => self.curves[cluster[0]].head_mult() == 1,
            2 => {
                let (i, j) = (cluster[0], cluster[1]);
                self.curves[i].head_mult() == 1
                    && self.curves[j].head_mult() == 1
                    && self.contact(i, j) <= 1
            }
            _ => false,
        }
    }

    /// The coefficient the next exceptional curve would receive:
    /// `-1 + mult_x(boundary)`.
    fn next_coefficient(&self, cluster: &Cluster) -> Rational {
        let mut b = -Rational::one();
        for &i in cluster {
            b += &self.curves[i].coefficient * rat_int(self.curves[i].head_mult() as i64);
        }
        b
    }

    fn is_special_pattern(&self, cluster: &Cluster) -> bool {
        if !self.half_single_branch || cluster.len() != 2 {
            return false;
        }
        let (i, j) = (cluster[0], cluster[1]);
        let (branch, exc) = if self.curves[i].exceptional { (j, i) } else { (i, j) };
        !self.curves[branch].exceptional
            && self.curves[exc].exceptional
            && self.curves[exc].coefficient.is_zero()
            && self.curves[branch].head_mult() == 1
            && self.curves[exc].head_mult() == 1
            && self.contact(branch, exc) == 2
    }

    /// Blows up the current focus. Appends the exceptional curve, drops
    /// local intersection numbers by the product of multiplicities, and
    /// queues whichever points of the new configuration are still not
    /// log smooth.
    pub fn blowup_step(&mut self) -> Result<(), BlowupError> {
        let cluster = self
            .foci
            .pop_front()
            .ok_or(BlowupError::NothingToBlowUp)?;
        let b = self.next_coefficient(&cluster);
        if b >= Rational::one() {
            return Err(BlowupError::KltViolated(format_rational(&b)));
        }
        if b.is_negative() {
            // the special-point pattern is reported by `at_special_point`;
            // stepping past it (or any other negative case) is refused
            return Err(BlowupError::UnsupportedConfiguration(format_rational(&b)));
        }

        let e_index = self.curves.len();
        let e_id = format!("E{}", self.history.len() + 1);
        self.history.push((e_id.clone(), b.clone()));
        // store a non-negative exceptional coefficient only; the boundary
        // role of E in later multiplicity counts uses this value
        self.curves.push(Curve {
            id: e_id,
            coefficient: b,
            mults: VecDeque::new(),
            self_int: -1,
            exceptional: true,
        });

        let mults: BTreeMap<usize, u64> = cluster
            .iter()
            .map(|&i| (i, self.curves[i].head_mult()))
            .collect();
        for (&i, &m) in &mults {
            // strict transform: one blowup consumes one entry of the
            // multiplicity sequence and costs m^2 of self-intersection
            self.curves[i].mults.pop_front();
            self.curves[i].self_int -= (m * m) as i64;
            self.contacts.insert((i, e_index), m);
        }
        for a in 0..cluster.len() {
            for bidx in a + 1..cluster.len() {
                let (i, j) = (cluster[a].min(cluster[bidx]), cluster[a].max(cluster[bidx]));
                let drop = mults[&i] * mults[&j];
                let cur = self.contact(i, j);
                if cur < drop {
                    return Err(BlowupError::InvalidGerm(
                        self.curves[i].id.clone(),
                        format!("intersection {cur} cannot drop by {drop}"),
                    ));
                }
                self.contacts.insert((i, j), cur - drop);
            }
        }
        self.steps += 1;

        // group the cluster by residual intersections: positive residual
        // means the strict transforms still share a point of E
        let mut groups: Vec<Cluster> = Vec::new();
        let mut assigned: BTreeMap<usize, usize> = BTreeMap::new();
        for &i in &cluster {
            let g = match cluster
                .iter()
                .filter(|&&j| j != i && assigned.contains_key(&j))
                .find(|&&j| self.contact(i, j) > 0)
            {
                Some(&j) => assigned[&j],
                None => {
                    groups.push(Vec::new());
                    groups.len() - 1
                }
            };
            groups[g].push(i);
            assigned.insert(i, g);
        }
        // merge transitively (a ~ c through b found later)
        loop {
            let mut merged = false;
            'outer: for a in 0..groups.len() {
                for b2 in a + 1..groups.len() {
                    let touch = groups[a]
                        .iter()
                        .any(|&i| groups[b2].iter().any(|&j| self.contact(i, j) > 0));
                    if touch {
                        let moved = groups.remove(b2);
                        groups[a].extend(moved);
                        merged = true;
                        break 'outer;
                    }
                }
            }
            if !merged {
                break;
            }
        }

        let mut new_foci = Vec::new();
        for mut g in groups {
            g.sort_unstable();
            g.push(e_index);
            if !self.cluster_log_smooth(&g) {
                new_foci.push(g);
            }
        }
        // depth first: finish the cascade over this point before siblings
        for f in new_foci.into_iter().rev() {
            self.foci.push_front(f);
        }
        Ok(())
    }

    /// Whether the current focus is the special-point stopping pattern:
    /// the strict transform of the half-coefficient branch has become
    /// smooth and tangent to a zero-coefficient exceptional curve.
    pub fn at_special_point(&self) -> bool {
        self.foci
            .front()
            .is_some_and(|c| self.is_special_pattern(c))
    }

    /// Snapshot of the configuration as a dual graph.
    pub fn to_graph(&self) -> DualGraph {
        let vertices: Vec<Vertex> = self
            .curves
            .iter()
            .map(|c| Vertex {
                id: c.id.clone(),
                self_intersection: c.self_int,
                genus: 0,
                boundary_coefficient: if c.exceptional {
                    Rational::zero()
                } else {
                    c.coefficient.clone()
                },
                exceptional: c.exceptional,
            })
            .collect();
        let mut edges = Vec::new();
        for (&(i, j), &m) in &self.contacts {
            if m > 0 {
                edges.push((self.curves[i].id.clone(), self.curves[j].id.clone(), m));
            }
        }
        let borrowed: Vec<(&str, &str, u64)> = edges
            .iter()
            .map(|(a, b, m)| (a.as_str(), b.as_str(), *m))
            .collect();
        DualGraph::new(vertices, &borrowed).expect("engine state is a valid graph")
    }

    /// Runs blowups until the configuration is log smooth, the special
    /// pattern is reached, or the budget runs out.
    pub fn resolve(mut self, max_steps: u64) -> Result<ResolutionOutcome, BlowupError> {
        loop {
            if self.at_special_point() {
                return Ok(ResolutionOutcome {
                    kind: OutcomeKind::SpecialPoint,
                    n: Some(self.steps),
                    graph: self.to_graph(),
                    steps: self.steps,
                });
            }
            if self.foci.is_empty() {
                return Ok(ResolutionOutcome {
                    kind: OutcomeKind::EffectiveLogResolution,
                    n: None,
                    graph: self.to_graph(),
                    steps: self.steps,
                });
            }
            if self.steps >= max_steps {
                return Err(BlowupError::BudgetExceeded(max_steps));
            }
            self.blowup_step()?;
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let branches: Vec<serde_json::Value> = self
            .curves
            .iter()
            .map(|c| {
                serde_json::json!({
                    "id": c.id,
                    "coeff": format_rational(&c.coefficient),
                    "mults": c.mults.iter().copied().collect::<Vec<u64>>(),
                    "self_int": c.self_int,
                    "exceptional": c.exceptional,
                })
            })
            .collect();
        let intersections: Vec<serde_json::Value> = self
            .contacts
            .iter()
            .filter(|(_, m)| **m > 0)
            .map(|(&(i, j), m)| serde_json::json!([self.curves[i].id, self.curves[j].id, m]))
            .collect();
        serde_json::json!({
            "branches": branches,
            "intersections": intersections,
            "steps": self.steps,
        })
    }

    /// Parses the input schema: `branches` with ids, coefficients and
    /// multiplicity sequences, plus declared pairwise `intersections`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, BlowupError> {
        let err = |m: &str| BlowupError::Json(m.to_string());
        let bs = value
            .get("branches")
            .and_then(|v| v.as_array())
            .ok_or_else(|| err("missing `branches` array"))?;
        let mut branches = Vec::with_capacity(bs.len());
        for b in bs {
            let id = b
                .get("id")
                .and_then(|x| x.as_str())
                .ok_or_else(|| err("branch missing `id`"))?;
            let coeff = b
                .get("coeff")
                .and_then(|x| x.as_str())
                .ok_or_else(|| err("branch missing `coeff` string"))?;
            let coeff = parse_rational(coeff).map_err(|e| BlowupError::Json(e.to_string()))?;
            let mults = match b.get("mults") {
                None => vec![],
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| err("`mults` must be an array"))?
                    .iter()
                    .map(|x| x.as_u64().ok_or_else(|| err("`mults` entries")))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let self_int = b.get("self_int").and_then(|x| x.as_i64()).unwrap_or(0);
            branches.push(BranchSpec {
                id: id.to_string(),
                coefficient: coeff,
                mults,
                self_int,
            });
        }
        let mut intersections = Vec::new();
        if let Some(es) = value.get("intersections") {
            for e in es.as_array().ok_or_else(|| err("`intersections`"))? {
                let t = e.as_array().ok_or_else(|| err("intersection triple"))?;
                if t.len() != 3 {
                    return Err(err("intersection must be [a, b, mult]"));
                }
                intersections.push((
                    t[0].as_str().ok_or_else(|| err("endpoint"))?.to_string(),
                    t[1].as_str().ok_or_else(|| err("endpoint"))?.to_string(),
                    t[2].as_u64().ok_or_else(|| err("multiplicity"))?,
                ));
            }
        }
        let borrowed: Vec<(&str, &str, u64)> = intersections
            .iter()
            .map(|(a, b, m)| (a.as_str(), b.as_str(), *m))
            .collect();
        GermState::new(branches, &borrowed)
    }
}

pub fn outcome_to_json(o: &ResolutionOutcome) -> serde_json::Value {
    serde_json::json!({
        "kind": match o.kind {
            OutcomeKind::EffectiveLogResolution => "effective_log_resolution",
            OutcomeKind::SpecialPoint => "special_point",
        },
        "n": o.n,
        "type": o.n.map(|n| 2 * n + 1),
        "steps": o.steps,
        "graph": o.graph.to_json(),
    })
}

/// The germ of the cusp family: a single branch of coefficient 1/2 whose
/// singularity needs `n` blowups.
pub fn cusp_germ(n: u64) -> Result<GermState, BlowupError> {
    if n == 0 {
        return Err(BlowupError::BadChainLength);
    }
    GermState::new(
        vec![BranchSpec {
            id: "C".to_string(),
            coefficient: parse_rational("1/2").unwrap(),
            mults: vec![2; n as usize],
            self_int: 0,
        }],
        &[],
    )
}

/// The full log resolution of the cusp germ of depth `n`: the chain
/// `E_1 - ... - E_n` (self-intersections -2 ending in -3), a -2 curve
/// `E_{n+1}`, and a -1 curve `E_{n+2}` meeting `C`, `E_{n+1}` and `E_n`,
/// with boundary coefficient 1/2 on `C`.
pub fn cusp_log_resolution(n: u64) -> Result<DualGraph, BlowupError> {
    if n == 0 {
        return Err(BlowupError::BadChainLength);
    }
    let n = n as usize;
    let mut vertices = Vec::with_capacity(n + 3);
    for i in 1..=n {
        let self_int = if i == n { -3 } else { -2 };
        vertices.push(Vertex::exceptional(&format!("E{i}"), self_int));
    }
    vertices.push(Vertex::exceptional(&format!("E{}", n + 1), -2));
    vertices.push(Vertex::exceptional(&format!("E{}", n + 2), -1));
    vertices.push(Vertex::boundary("C", 0, parse_rational("1/2").unwrap()));

    let mut edges: Vec<(String, String, u64)> = Vec::new();
    for i in 1..n {
        edges.push((format!("E{i}"), format!("E{}", i + 1), 1));
    }
    let last = format!("E{}", n + 2);
    edges.push((last.clone(), "C".to_string(), 1));
    edges.push((last.clone(), format!("E{}", n + 1), 1));
    edges.push((last, format!("E{n}"), 1));
    let borrowed: Vec<(&str, &str, u64)> = edges
        .iter()
        .map(|(a, b, m)| (a.as_str(), b.as_str(), *m))
        .collect();
    Ok(DualGraph::new(vertices, &borrowed)?)
}

/// Reference coefficients `(0, ..., 0, -1/2, -1)` carried by the cusp log
/// resolution, indexed like its exceptional curves.
pub fn cusp_reference_coefficients(n: u64) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n as usize];
    out.push(parse_rational("-1/2").unwrap());
    out.push(parse_rational("-1").unwrap());
    out
}

//! Dual graphs of curve configurations on surfaces: exact intersection
//! matrices, fraction-free determinants, negative-definiteness tests,
//! discrepancy solving, Q-factorial indices and differents.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("self-edge on `{0}`: self-intersections live on the vertex")]
    SelfEdge(String),
    #[error("empty vertex subset")]
    EmptySubset,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("degenerate configuration: exceptional intersection matrix is singular")]
    SingularSystem,
    #[error("exceptional intersection matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("graph has no exceptional vertices")]
    NoExceptional,
    #[error("type must be an odd integer >= 3, got {0}")]
    BadSpecialType(i64),
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

/// A curve in the configuration: self-intersection, genus, its coefficient
/// in the boundary divisor, and whether it is exceptional for the morphism
/// under consideration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub self_intersection: i64,
    pub genus: u64,
    pub boundary_coefficient: Rational,
    pub exceptional: bool,
}

impl Vertex {
    pub fn exceptional(id: &str, self_intersection: i64) -> Self {
        Vertex {
            id: id.to_string(),
            self_intersection,
            genus: 0,
            boundary_coefficient: Rational::zero(),
            exceptional: true,
        }
    }

    pub fn boundary(id: &str, self_intersection: i64, coeff: Rational) -> Self {
        Vertex {
            id: id.to_string(),
            self_intersection,
            genus: 0,
            boundary_coefficient: coeff,
            exceptional: false,
        }
    }
}

/// Dual graph of a curve configuration. Vertices are curves, edges carry
/// intersection multiplicities. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    /// Symmetric edge map keyed by index pairs `(i, j)` with `i < j`.
    edges: BTreeMap<(usize, usize), u64>,
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: &[(&str, &str, u64)]) -> Result<Self, GraphError> {
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
        }
        let mut edge_map = BTreeMap::new();
        for (a, b, mult) in edges {
            if *mult == 0 {
                continue;
            }
            let ia = *index
                .get(*a)
                .ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let ib = *index
                .get(*b)
                .ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            if ia == ib {
                return Err(GraphError::SelfEdge(a.to_string()));
            }
            let key = (ia.min(ib), ia.max(ib));
            *edge_map.entry(key).or_insert(0) += *mult;
        }
        Ok(DualGraph {
            vertices,
            edges: edge_map,
        })
    }

    /// A chain of rational curves with the given self-intersections and a
    /// single transverse crossing between consecutive curves.
    pub fn chain(self_intersections: &[i64]) -> Self {
        let vertices: Vec<Vertex> = self_intersections
            .iter()
            .enumerate()
            .map(|(i, s)| Vertex::exceptional(&format!("E{}", i + 1), *s))
            .collect();
        let mut edges = BTreeMap::new();
        for i in 1..vertices.len() {
            edges.insert((i - 1, i), 1);
        }
        DualGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_ids(&self) -> Vec<&str> {
        self.vertices.iter().map(|v| v.id.as_str()).collect()
    }

    fn index_of(&self, id: &str) -> Result<usize, GraphError> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, a: &str, b: &str) -> Result<u64, GraphError> {
        let ia = self.index_of(a)?;
        let ib = self.index_of(b)?;
        if ia == ib {
            return Ok(0);
        }
        Ok(*self.edges.get(&(ia.min(ib), ia.max(ib))).unwrap_or(&0))
    }

    /// Intersection matrix `(E_i . E_j)` over the given vertex subset, rows
    /// in subset order. Diagonal entries are self-intersections.
    pub fn intersection_matrix(&self, subset: &[&str]) -> Result<IntersectionMatrix, GraphError> {
        if subset.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        let idx: Vec<usize> = subset
            .iter()
            .map(|id| self.index_of(id))
            .collect::<Result<_, _>>()?;
        let n = idx.len();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                m[r][c] = if i == j {
                    BigInt::from(self.vertices[i].self_intersection)
                } else {
                    BigInt::from(*self.edges.get(&(i.min(j), i.max(j))).unwrap_or(&0))
                };
            }
        }
        Ok(IntersectionMatrix { entries: m })
    }

    pub fn exceptional_ids(&self) -> Vec<&str> {
        self.vertices
            .iter()
            .filter(|v| v.exceptional)
            .map(|v| v.id.as_str())
            .collect()
    }

    /// Solves for the coefficients `c_i` on the exceptional curves that make
    /// `K + (boundary) + sum c_i E_i` intersect every exceptional curve
    /// trivially. Exceptional curves are rational unless a genus is set.
    pub fn solve_discrepancies(&self) -> Result<DiscrepancySolution, GraphError> {
        let exc = self.exceptional_ids();
        if exc.is_empty() {
            return Err(GraphError::NoExceptional);
        }
        let a = self.intersection_matrix(&exc)?;
        let n = exc.len();
        // rhs_i = -( K.E_i + sum_over_boundary coeff * (C.E_i) )
        // with K.E_i = -E_i^2 - 2 + 2g_i by adjunction.
        let mut rhs = Vec::with_capacity(n);
        for id in &exc {
            let i = self.index_of(id)?;
            let v = &self.vertices[i];
            let k_dot = Rational::from(BigInt::from(
                -v.self_intersection - 2 + 2 * v.genus as i64,
            ));
            let mut boundary_dot = Rational::zero();
            for (j, w) in self.vertices.iter().enumerate() {
                if w.exceptional || w.boundary_coefficient.is_zero() || i == j {
                    continue;
                }
                let mult = *self.edges.get(&(i.min(j), i.max(j))).unwrap_or(&0);
                boundary_dot += &w.boundary_coefficient * Rational::from(BigInt::from(mult));
            }
            rhs.push(-(k_dot + boundary_dot));
        }
        let coeffs = a.solve(&rhs)?;
        let klt = coeffs.iter().all(|c| *c < Rational::one());
        let lc = coeffs.iter().all(|c| *c <= Rational::one());
        Ok(DiscrepancySolution {
            coefficients: exc
                .iter()
                .map(|s| s.to_string())
                .zip(coeffs)
                .collect(),
            klt,
            lc,
        })
    }

    /// Residual check: `(K + boundary + sum c_i E_i) . E` for the exceptional
    /// curve `id`, given solved coefficients. Zero for a valid solution.
    pub fn pairing_residual(
        &self,
        coefficients: &[(String, Rational)],
        id: &str,
    ) -> Result<Rational, GraphError> {
        let i = self.index_of(id)?;
        let v = &self.vertices[i];
        let mut total = Rational::from(BigInt::from(
            -v.self_intersection - 2 + 2 * v.genus as i64,
        ));
        for (j, w) in self.vertices.iter().enumerate() {
            let pairing = if i == j {
                BigInt::from(v.self_intersection)
            } else {
                BigInt::from(*self.edges.get(&(i.min(j), i.max(j))).unwrap_or(&0))
            };
            let coeff = if w.exceptional {
                coefficients
                    .iter()
                    .find(|(cid, _)| cid == &w.id)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(Rational::zero)
            } else {
                w.boundary_coefficient.clone()
            };
            total += coeff * Rational::from(pairing);
        }
        Ok(total)
    }

    /// `|det|` of the exceptional intersection matrix; errors unless that
    /// matrix is negative definite.
    pub fn q_factorial_index(&self) -> Result<BigInt, GraphError> {
        let exc = self.exceptional_ids();
        if exc.is_empty() {
            return Err(GraphError::NoExceptional);
        }
        let m = self.intersection_matrix(&exc)?;
        if !m.is_negative_definite()? {
            return Err(GraphError::NotNegativeDefinite);
        }
        Ok(m.determinant().abs())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|v| {
                serde_json::json!({
                    "id": v.id,
                    "self_int": v.self_intersection,
                    "genus": v.genus,
                    "coeff": format_rational(&v.boundary_coefficient),
                    "exceptional": v.exceptional,
                })
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|(&(i, j), m)| {
                serde_json::json!([self.vertices[i].id, self.vertices[j].id, m])
            })
            .collect();
        serde_json::json!({ "vertices": vertices, "edges": edges })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, GraphError> {
        let err = |m: &str| GraphError::Json(m.to_string());
        let vs = value
            .get("vertices")
            .and_then(|v| v.as_array())
            .ok_or_else(|| err("missing `vertices` array"))?;
        let mut vertices = Vec::with_capacity(vs.len());
        for v in vs {
            let id = v
                .get("id")
                .and_then(|x| x.as_str())
                .ok_or_else(|| err("vertex missing `id`"))?;
            let self_int = v
                .get("self_int")
                .and_then(|x| x.as_i64())
                .ok_or_else(|| err("vertex missing integer `self_int`"))?;
            let genus = v.get("genus").and_then(|x| x.as_u64()).unwrap_or(0);
            let coeff = match v.get("coeff") {
                None => Rational::zero(),
                Some(c) => {
                    let s = c
                        .as_str()
                        .ok_or_else(|| err("`coeff` must be a \"num/den\" string"))?;
                    parse_rational(s).map_err(|e| GraphError::Json(e.to_string()))?
                }
            };
            let exceptional = v
                .get("exceptional")
                .and_then(|x| x.as_bool())
                .unwrap_or(false);
            vertices.push(Vertex {
                id: id.to_string(),
                self_intersection: self_int,
                genus,
                boundary_coefficient: coeff,
                exceptional,
            });
        }
        let es = value
            .get("edges")
            .and_then(|v| v.as_array())
            .ok_or_else(|| err("missing `edges` array"))?;
        let mut edges = Vec::with_capacity(es.len());
        for e in es {
            let t = e.as_array().ok_or_else(|| err("edge must be a triple"))?;
            if t.len() != 3 {
                return Err(err("edge must be [a, b, mult]"));
            }
            let a = t[0].as_str().ok_or_else(|| err("edge endpoint"))?;
            let b = t[1].as_str().ok_or_else(|| err("edge endpoint"))?;
            let m = t[2].as_u64().ok_or_else(|| err("edge multiplicity"))?;
            edges.push((a.to_string(), b.to_string(), m));
        }
        let borrowed: Vec<(&str, &str, u64)> = edges
            .iter()
            .map(|(a, b, m)| (a.as_str(), b.as_str(), *m))
            .collect();
        DualGraph::new(vertices, &borrowed)
    }
}

/// Solved exceptional coefficients together with the klt/lc verdicts for
/// the induced pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancySolution {
    /// `(id, c_i)` in exceptional-vertex order. The discrepancy of `E_i`
    /// is `-c_i`.
    pub coefficients: Vec<(String, Rational)>,
    /// All `c_i < 1`.
    pub klt: bool,
    /// All `c_i <= 1`.
    pub lc: bool,
}

/// Square symmetric integer matrix, row order following the vertex subset
/// it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    entries: Vec<Vec<BigInt>>,
}

impl IntersectionMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, GraphError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GraphError::NotSquare);
        }
        Ok(IntersectionMatrix {
            entries: rows
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn negated(&self) -> IntersectionMatrix {
        IntersectionMatrix {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination. The empty
    /// matrix has determinant 1.
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(&self.entries)
    }

    /// Leading principal minor of order `k` (`k = 0` gives 1).
    pub fn leading_minor(&self, k: usize) -> BigInt {
        let sub: Vec<Vec<BigInt>> = self.entries[..k]
            .iter()
            .map(|r| r[..k].to_vec())
            .collect();
        bareiss_determinant(&sub)
    }

    /// Sylvester test: true iff all leading principal minors of `-M` are
    /// positive. Requires symmetry.
    pub fn is_negative_definite(&self) -> Result<bool, GraphError> {
        if !self.is_symmetric() {
            return Err(GraphError::NotSymmetric);
        }
        let neg = self.negated();
        Ok((1..=self.size()).all(|k| neg.leading_minor(k).is_positive()))
    }

    /// Exact solve of `M x = rhs` by Gaussian elimination over the
    /// rationals. Errors on a singular matrix.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>, GraphError> {
        let n = self.size();
        if rhs.len() != n {
            return Err(GraphError::NotSquare);
        }
        let mut a: Vec<Vec<Rational>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| Rational::from(x.clone())).collect())
            .collect();
        let mut b: Vec<Rational> = rhs.to_vec();
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(GraphError::SingularSystem)?;
            a.swap(col, pivot_row);
            b.swap(col, pivot_row);
            let pivot = a[col][col].clone();
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &pivot;
                for c in col..n {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= sub;
                }
                let sub = factor * &b[col];
                b[r] -= sub;
            }
        }
        Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
    }
}

fn bareiss_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // division is exact in the Bareiss scheme
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Adjunction coefficient `(d_Q - 1)/d_Q` of the different at an index-`d_Q`
/// point of the boundary curve.
pub fn different_coefficient(dq: &BigInt) -> Rational {
    Rational::new(dq - BigInt::one(), dq.clone())
}

/// Arithmetic genus from `(K + C) . C = 2 p_a - 2`: callers pass `K.C` and
/// `C^2` and check integrality themselves.
pub fn arithmetic_genus(kc: &Rational, c2: &Rational) -> Rational {
    (kc + c2 + Rational::from(BigInt::from(2))) / Rational::from(BigInt::from(2))
}

/// Bound data for a special point of type `a = 2n + 1` in characteristic
/// `p`: its blowup depth, the induced lower bound on the arithmetic genus,
/// whether that bound exceeds the liftability threshold 18, and whether `p`
/// divides the resolution determinant `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialPointGate {
    pub n: i64,
    pub pa_lower_bound: i64,
    pub exceeds_18: bool,
    pub det_divisible_by_p: bool,
}

pub fn special_point_liftability_gate(a: i64, p: i64) -> Result<SpecialPointGate, GraphError> {
    if a < 3 || a % 2 == 0 {
        return Err(GraphError::BadSpecialType(a));
    }
    let n = (a - 1) / 2;
    Ok(SpecialPointGate {
        n,
        pa_lower_bound: n,
        exceeds_18: n > 18,
        det_divisible_by_p: a % p == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;

    fn two_chain() -> IntersectionMatrix {
        IntersectionMatrix::from_rows(vec![vec![-2, 1], vec![1, -2]]).unwrap()
    }

    #[test]
    fn intersection_matrix_examples() {
        let g = DualGraph::chain(&[-2, -2]);
        let m = g.intersection_matrix(&["E1", "E2"]).unwrap();
        assert_eq!(m, two_chain());

        let g = DualGraph::chain(&[-5]);
        let m = g.intersection_matrix(&["E1"]).unwrap();
        assert_eq!(*m.entry(0, 0), BigInt::from(-5));

        assert!(g.intersection_matrix(&["bogus"]).is_err());
        assert!(g.intersection_matrix(&[]).is_err());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(two_chain().determinant(), BigInt::from(3));
        // -3,-2 chain: first entry -3, tridiagonal ones
        let m =
            IntersectionMatrix::from_rows(vec![vec![-3, 1], vec![1, -2]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(5));
        let empty = IntersectionMatrix::from_rows(vec![]).unwrap();
        assert_eq!(empty.determinant(), BigInt::one());
    }

    #[test]
    fn chain_determinant_recurrences() {
        // det A_n = (-1)^n (n+1) for the (-2)-chain, and
        // (-1)^n (2n+1) when the first self-intersection is -3.
        for n in 1..=50usize {
            let mut plain = vec![-2i64; n];
            let det = DualGraph::chain(&plain)
                .intersection_matrix(&(1..=n).map(|i| format!("E{i}")).collect::<Vec<_>>()
                    .iter().map(|s| s.as_str()).collect::<Vec<_>>())
                .unwrap()
                .determinant();
            let expect = BigInt::from(if n % 2 == 0 { n as i64 + 1 } else { -(n as i64 + 1) });
            assert_eq!(det, expect, "plain chain n={n}");

            plain[0] = -3;
            let det = DualGraph::chain(&plain)
                .intersection_matrix(&(1..=n).map(|i| format!("E{i}")).collect::<Vec<_>>()
                    .iter().map(|s| s.as_str()).collect::<Vec<_>>())
                .unwrap()
                .determinant();
            let expect =
                BigInt::from(if n % 2 == 0 { 2 * n as i64 + 1 } else { -(2 * n as i64 + 1) });
            assert_eq!(det, expect, "steep chain n={n}");
        }
    }

    #[test]
    fn negative_definite_examples() {
        assert!(two_chain().is_negative_definite().unwrap());
        let zero = IntersectionMatrix::from_rows(vec![vec![0]]).unwrap();
        assert!(!zero.is_negative_definite().unwrap());
        let degenerate =
            IntersectionMatrix::from_rows(vec![vec![-2, 2], vec![2, -2]]).unwrap();
        assert!(!degenerate.is_negative_definite().unwrap());
        let asym = IntersectionMatrix::from_rows(vec![vec![-2, 1], vec![0, -2]]).unwrap();
        assert!(asym.is_negative_definite().is_err());
    }

    /// Brute-force oracle: negative definite iff every principal minor of
    /// order k has sign (-1)^k, over all index subsets.
    fn negdef_oracle(m: &IntersectionMatrix) -> bool {
        let n = m.size();
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub: Vec<Vec<BigInt>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| m.entry(i, j).clone()).collect())
                .collect();
            let det = bareiss_determinant(&sub);
            let want_positive = idx.len() % 2 == 0;
            if det.is_zero()
                || (want_positive && det.is_negative())
                || (!want_positive && det.is_positive())
            {
                return false;
            }
        }
        true
    }

    #[test]
    fn negative_definite_matches_brute_force() {
        // all symmetric integer matrices with entries in [-4, 2], size <= 3,
        // plus a sampled sweep in size 4
        for n in 1..=3usize {
            let slots = n * (n + 1) / 2;
            let vals: Vec<i64> = (-4..=2).collect();
            let mut counters = vec![0usize; slots];
            'matrices: loop {
                let mut m = vec![vec![0i64; n]; n];
                let mut t = 0;
                for i in 0..n {
                    for j in i..n {
                        m[i][j] = vals[counters[t]];
                        m[j][i] = vals[counters[t]];
                        t += 1;
                    }
                }
                let im = IntersectionMatrix::from_rows(m).unwrap();
                assert_eq!(im.is_negative_definite().unwrap(), negdef_oracle(&im));
                // odometer
                let mut k = 0;
                loop {
                    if k == slots {
                        break 'matrices;
                    }
                    counters[k] += 1;
                    if counters[k] < vals.len() {
                        break;
                    }
                    counters[k] = 0;
                    k += 1;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn negdef_matches_oracle_size4(seed in proptest::collection::vec(-4i64..=2, 10)) {
            let mut m = vec![vec![0i64; 4]; 4];
            let mut t = 0;
            for i in 0..4 {
                for j in i..4 {
                    m[i][j] = seed[t];
                    m[j][i] = seed[t];
                    t += 1;
                }
            }
            let im = IntersectionMatrix::from_rows(m).unwrap();
            prop_assert_eq!(im.is_negative_definite().unwrap(), negdef_oracle(&im));
        }
    }

    #[test]
    fn discrepancy_single_vertex() {
        // one exceptional curve of self-intersection -m and boundary (1/2)C
        // crossing it once: the 1x1 system (-m)c = -(m - 2 + 1/2)
        for m in 2..=6i64 {
            let g = DualGraph::new(
                vec![
                    Vertex::exceptional("E", -m),
                    Vertex::boundary("C", 0, rat(1, 2)),
                ],
                &[("E", "C", 1)],
            )
            .unwrap();
            let sol = g.solve_discrepancies().unwrap();
            assert_eq!(sol.coefficients[0].1, rat(2 * m - 3, 2 * m));
            assert!(sol.klt);
            let residual = g.pairing_residual(&sol.coefficients, "E").unwrap();
            assert!(residual.is_zero());
        }
        // m = 2 gives 1/4, i.e. 1 - b for b = (2 - 1/2)/2 = 3/4
        let g = DualGraph::new(
            vec![
                Vertex::exceptional("E", -2),
                Vertex::boundary("C", 0, rat(1, 2)),
            ],
            &[("E", "C", 1)],
        )
        .unwrap();
        let sol = g.solve_discrepancies().unwrap();
        assert_eq!(sol.coefficients[0].1, rat(1, 4));
    }

    #[test]
    fn discrepancy_crepant_chain() {
        let g = DualGraph::chain(&[-2, -2, -2, -2]);
        let sol = g.solve_discrepancies().unwrap();
        assert!(sol.coefficients.iter().all(|(_, c)| c.is_zero()));
        assert!(sol.klt && sol.lc);
    }

    #[test]
    fn discrepancy_singular_configuration() {
        let g = DualGraph::new(
            vec![
                Vertex::exceptional("E1", -2),
                Vertex::exceptional("E2", -2),
            ],
            &[("E1", "E2", 2)],
        )
        .unwrap();
        assert_eq!(g.solve_discrepancies(), Err(GraphError::SingularSystem));
    }

    #[test]
    fn q_factorial_index_examples() {
        let g = DualGraph::chain(&[-2]);
        assert_eq!(g.q_factorial_index().unwrap(), BigInt::from(2));
        let g = DualGraph::chain(&[-3]);
        assert_eq!(g.q_factorial_index().unwrap(), BigInt::from(3));
        let mut steep = vec![-2i64; 3];
        steep[0] = -3;
        let g = DualGraph::chain(&steep);
        assert_eq!(g.q_factorial_index().unwrap(), BigInt::from(7));
        let g = DualGraph::chain(&[0]);
        assert_eq!(g.q_factorial_index(), Err(GraphError::NotNegativeDefinite));
    }

    #[test]
    fn different_examples() {
        assert_eq!(different_coefficient(&BigInt::from(2)), rat(1, 2));
        assert_eq!(different_coefficient(&BigInt::from(1)), rat_int(0));
        assert_eq!(different_coefficient(&BigInt::from(7)), rat(6, 7));
    }

    /// Continued-fraction expansion `d/l = a_1 - 1/(a_2 - ...)`, `a_i >= 2`.
    fn hj_chain(mut d: i64, mut l: i64) -> Vec<i64> {
        let mut out = Vec::new();
        while l > 0 {
            let a = (d + l - 1) / l;
            out.push(-a);
            let next_l = a * l - d;
            d = l;
            l = next_l;
        }
        out
    }

    #[test]
    fn different_of_index_from_resolution_chains() {
        // the minimal-resolution chain of the index-d cyclic point has
        // |det| = d, and the different coefficient there is (d-1)/d
        for d in 2..=30i64 {
            for l in 1..d {
                if num::integer::gcd(d, l) != 1 {
                    continue;
                }
                let g = DualGraph::chain(&hj_chain(d, l));
                let dq = g.q_factorial_index().unwrap();
                assert_eq!(dq, BigInt::from(d), "(d, l) = ({d}, {l})");
                assert_eq!(different_coefficient(&dq), rat(d - 1, d));
            }
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(arithmetic_genus(&rat_int(-3), &rat_int(1)), rat_int(0));
        // (K + C).C = 40 means K.C + C^2 = 40 - C^2 + C^2; use kc + c2 = 40
        assert_eq!(arithmetic_genus(&rat_int(38), &rat_int(2)), rat_int(21));
        assert_eq!(arithmetic_genus(&rat_int(-2), &rat_int(0)), rat_int(0));
    }

    #[test]
    fn liftability_gate_examples() {
        let g = special_point_liftability_gate(43, 43).unwrap();
        assert_eq!((g.n, g.exceeds_18, g.det_divisible_by_p), (21, true, true));
        let g = special_point_liftability_gate(3, 41).unwrap();
        assert_eq!((g.n, g.exceeds_18, g.det_divisible_by_p), (1, false, false));
        let g = special_point_liftability_gate(41, 41).unwrap();
        assert_eq!((g.n, g.exceeds_18, g.det_divisible_by_p), (20, true, true));
        assert!(special_point_liftability_gate(4, 5).is_err());
        assert!(special_point_liftability_gate(1, 5).is_err());
    }

    #[test]
    fn graph_json_round_trip() {
        let g = DualGraph::new(
            vec![
                Vertex::exceptional("E1", -3),
                Vertex::boundary("C", -1, rat(1, 2)),
            ],
            &[("E1", "C", 2)],
        )
        .unwrap();
        let j = g.to_json();
        let back = DualGraph::from_json(&j).unwrap();
        assert_eq!(g, back);
    }
}

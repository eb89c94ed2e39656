//! `qfsplit`: exact-arithmetic verification of quasi-F-split obstructions
//! for boundary pairs on the projective plane, plus the supporting dual
//! graph, blowup, toric-cone and Witt-vector calculators.

mod polyparse;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num::bigint::BigInt;
use serde_json::{json, Value};

use qfsplit_core::blowup::{cusp_germ, cusp_log_resolution, outcome_to_json, GermState};
use qfsplit_core::cone::{
    cartier_test, cone_rays, different, floor_identity_holds, q_factorial_index_toric,
    reflexive_power_witness, section_ring_dims, canonical_module_dims, FractionalDivisorOnAn,
    ProjectiveQDivisor,
};
use qfsplit_core::graph::DualGraph;
use qfsplit_core::ledger::{
    curve_acc_enumerate, search_candidates, vanishing_42_check, DelPezzoCase, DimLedger,
    LedgerError, Sheaf,
};
use qfsplit_core::rational::{format_rational, parse_rational, ProjSpace, Rational};
use qfsplit_core::witt::rings::{CoeffRing, Homogeneity, WeightedPolyRing};
use qfsplit_core::witt::{ghost_components, WittRing, WittVec};

#[derive(Parser)]
#[command(
    name = "qfsplit",
    about = "Exact arithmetic for quasi-F-split obstructions on the projective plane",
    version
)]
struct Cli {
    /// Emit the full machine-readable result instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree arithmetic, dimension tables, verdicts, and the candidate
    /// search for the four-line boundary pairs.
    Delpezzo {
        #[command(subcommand)]
        cmd: DelpezzoCmd,
    },
    /// Boundary-coefficient enumeration and the large-characteristic
    /// vanishing check.
    Acc {
        #[command(subcommand)]
        cmd: AccCmd,
    },
    /// Resolve the depth-n cusp germ or a germ description from JSON.
    CuspResolve(CuspResolveArgs),
    /// Intersection-matrix calculus on dual graphs.
    Dualgraph {
        #[command(subcommand)]
        cmd: DualgraphCmd,
    },
    /// Toric orbifold-cone data.
    Cone {
        #[command(subcommand)]
        cmd: ConeCmd,
    },
    /// Truncated Witt vector arithmetic.
    Witt {
        #[command(subcommand)]
        cmd: WittCmd,
    },
    /// Run the full verification battery; exits nonzero if any check fails.
    ReproducePaper {
        /// Tower depth for the dimension tables and verdicts.
        #[arg(long, default_value_t = 10)]
        mmax: u32,
    },
}

#[derive(Args)]
struct CaseSelect {
    /// Fixture label (i, ii, iii, iv, v).
    #[arg(long, conflicts_with_all = ["p", "coeffs"])]
    case: Option<String>,
    /// Characteristic, used with --coeffs.
    #[arg(long, requires = "coeffs")]
    p: Option<u64>,
    /// Four standard coefficients, e.g. 1/2,2/3,6/7,40/41.
    #[arg(long, requires = "p", value_delimiter = ',')]
    coeffs: Option<Vec<String>>,
}

impl CaseSelect {
    fn resolve(&self) -> Result<DelPezzoCase> {
        if let Some(label) = &self.case {
            return Ok(DelPezzoCase::fixture(label)?);
        }
        let (Some(p), Some(coeffs)) = (self.p, &self.coeffs) else {
            bail!("select a case with --case LABEL or with --p P --coeffs a,b,c,d");
        };
        if coeffs.len() != 4 {
            bail!("expected exactly four coefficients, got {}", coeffs.len());
        }
        let parsed: Vec<Rational> = coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(|e| anyhow!(e)))
            .collect::<Result<_>>()?;
        let arr: [Rational; 4] = parsed.try_into().expect("length checked");
        Ok(DelPezzoCase::new(p, arr)?)
    }
}

#[derive(Subcommand)]
enum DelpezzoCmd {
    /// Exact anti-canonical degree and the first Frobenius floor degree.
    Verify(CaseSelect),
    /// Derive and print the full dimension table up to --mmax.
    Table1 {
        #[command(flatten)]
        case: CaseSelect,
        #[arg(long, default_value_t = 10)]
        mmax: u32,
    },
    /// The non-quasi-F-split certificate with its fact chain.
    Verdict {
        #[command(flatten)]
        case: CaseSelect,
        #[arg(long, default_value_t = 10)]
        mmax: u32,
        /// Print the transitive derivation chain of the key facts.
        #[arg(long)]
        emit_derivation: bool,
    },
    /// Exhaustive candidate search over primes and coefficient tuples.
    Search {
        #[arg(long)]
        pmax: u64,
        #[arg(long)]
        mbound: u64,
    },
}

#[derive(Subcommand)]
enum AccCmd {
    /// Enumerate boundary multisets summing to 2 and check the gap.
    Enumerate {
        /// Threshold of the extra interval [low, 1].
        #[arg(long, default_value = "5/6")]
        low: String,
        /// Grid denominator discretising the interval.
        #[arg(long, default_value_t = 42)]
        grid: u64,
    },
    /// Componentwise floor inequality and the plane degree report.
    Vanishing {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',')]
        coeffs: Vec<String>,
        #[arg(long, default_value_t = 1)]
        ell: u32,
    },
}

#[derive(Args)]
struct CuspResolveArgs {
    /// Cusp depth: build the full log-resolution dual graph directly.
    #[arg(long, conflicts_with = "germ")]
    n: Option<u64>,
    /// Run the blowup engine on this germ JSON file instead.
    #[arg(long)]
    germ: Option<String>,
    /// Write the resulting dual graph JSON here.
    #[arg(long)]
    emit_graph: Option<String>,
    #[arg(long, default_value_t = 1000)]
    max_steps: u64,
}

#[derive(Args)]
struct GraphSource {
    /// Chain of self-intersections, e.g. -2,-2,-3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "graph")]
    chain: Option<Vec<i64>>,
    /// Dual graph JSON file.
    #[arg(long)]
    graph: Option<String>,
}

impl GraphSource {
    fn resolve(&self) -> Result<DualGraph> {
        if let Some(chain) = &self.chain {
            return Ok(DualGraph::chain(chain));
        }
        let Some(path) = &self.graph else {
            bail!("provide --chain or --graph");
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading graph file {path}"))?;
        let value: Value = serde_json::from_str(&text).context("graph file is not JSON")?;
        Ok(DualGraph::from_json(&value)?)
    }
}

#[derive(Subcommand)]
enum DualgraphCmd {
    /// Exact determinant of the intersection matrix.
    Det {
        #[command(flatten)]
        src: GraphSource,
        /// Restrict to these vertex ids (default: all vertices).
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
    },
    /// Negative-definiteness of the intersection matrix.
    Negdef {
        #[command(flatten)]
        src: GraphSource,
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
    },
    /// Solve for the exceptional coefficients and report klt/lc flags.
    Discrepancy {
        #[command(flatten)]
        src: GraphSource,
    },
    /// Q-factorial index: |det| of the exceptional intersection matrix.
    Index {
        #[command(flatten)]
        src: GraphSource,
    },
}

#[derive(Subcommand)]
enum ConeCmd {
    /// Rays of the cone over a fractional divisor on affine space.
    Rays {
        /// Components as fractions l/d, e.g. 1/2,2/3.
        #[arg(long, value_delimiter = ',')]
        divisor: Vec<String>,
    },
    /// Q-factorial index of the index-(d,l) cone surface by brute force.
    Index {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        l: i64,
    },
    /// Different coefficients (d-1)/d per component.
    Different {
        #[arg(long, value_delimiter = ',')]
        divisor: Vec<String>,
    },
    /// Reflexive-power witness for the floor identity.
    Witness {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        d: i64,
    },
    /// Section-ring dimensions (and optionally pluricanonical ones).
    Hilbert {
        /// P1 or P2.
        #[arg(long)]
        space: String,
        /// Components as deg:coeff pairs, e.g. 1:1/2,1:2/3.
        #[arg(long, value_delimiter = ',')]
        divisor: Vec<String>,
        #[arg(long, default_value_t = 10)]
        dmax: i64,
        /// Also report the q-pluricanonical module dimensions.
        #[arg(long)]
        canonical_q: Option<i64>,
    },
}

#[derive(Args)]
struct WittCommon {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    /// Variables of the coefficient ring, with optional weights:
    /// x=1,t=1/2 (weights default to 1).
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

impl WittCommon {
    fn ring(&self) -> Result<WeightedPolyRing> {
        let mut vars = Vec::new();
        for spec in self.vars.clone().unwrap_or_else(|| vec!["x".to_string()]) {
            let (name, weight) = match spec.split_once('=') {
                None => (spec.clone(), Rational::from(BigInt::from(1))),
                Some((n, w)) => (n.to_string(), parse_rational(w).map_err(|e| anyhow!(e))?),
            };
            vars.push((name, weight));
        }
        Ok(WeightedPolyRing::new(self.p, vars))
    }

    fn parse_entries(
        &self,
        ring: &WeightedPolyRing,
        raw: &str,
    ) -> Result<Vec<<WeightedPolyRing as CoeffRing>::Elem>> {
        let entries: Vec<_> = raw
            .split(',')
            .map(|s| polyparse::parse_poly(ring, s))
            .collect::<Result<_>>()?;
        if entries.len() != self.n {
            bail!("expected {} entries, got {}", self.n, entries.len());
        }
        Ok(entries)
    }
}

#[derive(Subcommand)]
enum WittCmd {
    /// Witt sum of two vectors with polynomial entries.
    Add {
        #[command(flatten)]
        common: WittCommon,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Witt product of two vectors with polynomial entries.
    Mul {
        #[command(flatten)]
        common: WittCommon,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Frobenius (entrywise p-th power).
    Frob {
        #[command(flatten)]
        common: WittCommon,
        #[arg(long)]
        a: String,
    },
    /// Ghost components of an integer vector.
    Ghost {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        /// Integer entries, e.g. 1,1,0.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
    },
    /// Homogeneous degree of a vector over a weighted polynomial ring.
    Grade {
        #[command(flatten)]
        common: WittCommon,
        #[arg(long)]
        a: String,
    },
}

/// Wire format shared by every subcommand.
struct CommandResult {
    status: &'static str,
    payload: Value,
    citations: Vec<&'static str>,
    human: String,
    check_failed: bool,
}

impl CommandResult {
    fn ok(payload: Value, citations: Vec<&'static str>, human: String) -> Self {
        CommandResult {
            status: "ok",
            payload,
            citations,
            human,
            check_failed: false,
        }
    }
}

fn emit(result: &CommandResult, json_mode: bool) {
    if json_mode {
        let doc = json!({
            "status": result.status,
            "payload": result.payload,
            "citations": result.citations,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("{}", result.human.trim_end());
    }
}

fn rational_list(values: &[Rational]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|v| Value::String(format_rational(v)))
            .collect(),
    )
}

fn case_json(case: &DelPezzoCase) -> Value {
    json!({
        "p": case.p,
        "coeffs": rational_list(&case.coefficients),
    })
}

fn parse_fraction_pairs(specs: &[String]) -> Result<Vec<(i64, i64)>> {
    // a component l/d, stored as (l, d)
    specs
        .iter()
        .map(|s| {
            let q = parse_rational(s).map_err(|e| anyhow!(e))?;
            let l: i64 = q
                .numer()
                .try_into()
                .map_err(|_| anyhow!("numerator too large in {s}"))?;
            let d: i64 = q
                .denom()
                .try_into()
                .map_err(|_| anyhow!("denominator too large in {s}"))?;
            Ok((l, d))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<CommandResult> {
    match &cli.command {
        Command::Delpezzo { cmd } => run_delpezzo(cmd),
        Command::Acc { cmd } => run_acc(cmd),
        Command::CuspResolve(args) => run_cusp(args),
        Command::Dualgraph { cmd } => run_dualgraph(cmd),
        Command::Cone { cmd } => run_cone(cmd),
        Command::Witt { cmd } => run_witt(cmd),
        Command::ReproducePaper { mmax } => run_reproduce(*mmax),
    }
}

fn run_delpezzo(cmd: &DelpezzoCmd) -> Result<CommandResult> {
    match cmd {
        DelpezzoCmd::Verify(select) => {
            let case = select.resolve()?;
            let report = case.verify_ldp();
            let floor1 = case.floor_p_degree(1);
            let human = format!(
                "p = {}  coefficients = {}\ndeg(K + Delta) = {}  (anti-ample: {})\ndeg floor(p(K + Delta)) = {}",
                case.p,
                case.coefficients
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", "),
                format_rational(&report.deg_k_plus_delta),
                report.ample,
                floor1
            );
            Ok(CommandResult::ok(
                json!({
                    "case": case_json(&case),
                    "deg_k_plus_delta": format_rational(&report.deg_k_plus_delta),
                    "ample": report.ample,
                    "floor_p_degree": floor1.to_string(),
                }),
                vec!["exact fraction arithmetic", "componentwise floor degrees"],
                human,
            ))
        }
        DelpezzoCmd::Table1 { case, mmax } => {
            let case = case.resolve()?;
            let ledger = DimLedger::run(&case, *mmax)?;
            let rows = ledger.table_report();
            let all_ok = rows.iter().all(|r| r.ok());
            let mut human = format!(
                "{:<34} {:>9} {:>9}  ok\n",
                "entry", "expected", "derived"
            );
            for row in &rows {
                human.push_str(&format!(
                    "{:<34} {:>9} {:>9}  {}\n",
                    row.description,
                    row.expected.to_string(),
                    row.actual
                        .as_ref()
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| "?".to_string()),
                    if row.ok() { "yes" } else { "NO" }
                ));
            }
            human.push_str(&format!("all rows hold: {all_ok}"));
            let payload = json!({
                "case": case_json(&case),
                "m_max": mmax,
                "rows": rows.iter().map(|r| json!({
                    "entry": r.description,
                    "expected": r.expected.to_string(),
                    "derived": r.actual.as_ref().map(|d| d.to_string()),
                    "ok": r.ok(),
                })).collect::<Vec<_>>(),
                "all_ok": all_ok,
            });
            Ok(CommandResult {
                status: if all_ok { "ok" } else { "inconclusive" },
                payload,
                citations: ledger_citations(),
                human,
                check_failed: !all_ok,
            })
        }
        DelpezzoCmd::Verdict {
            case,
            mmax,
            emit_derivation,
        } => {
            let case = case.resolve()?;
            let ledger = DimLedger::run(&case, *mmax)?;
            match ledger.verdict() {
                Ok(verdict) => {
                    let mut human = format!(
                        "not quasi-F-split up to level {}: {}\n",
                        verdict.m_max, verdict.certified
                    );
                    for line in &verdict.chain {
                        human.push_str(&format!("  - {line}\n"));
                    }
                    let mut payload = json!({
                        "case": case_json(&case),
                        "m_max": verdict.m_max,
                        "certified_not_quasi_f_split": verdict.certified,
                        "chain": verdict.chain,
                    });
                    if *emit_derivation {
                        let mut derivation =
                            ledger.derivation_chain(&Sheaf::BOmega1 { m: 1, n: 1 }, 1);
                        if *mmax >= 1 {
                            derivation.extend(ledger.derivation_chain(
                                &Sheaf::BOmega1 { m: *mmax, n: *mmax },
                                1,
                            ));
                        }
                        for line in &derivation {
                            human.push_str(&format!("    {line}\n"));
                        }
                        payload["derivation"] = json!(derivation);
                    }
                    Ok(CommandResult {
                        status: if verdict.certified { "ok" } else { "inconclusive" },
                        payload,
                        citations: ledger_citations(),
                        human,
                        check_failed: !verdict.certified,
                    })
                }
                Err(LedgerError::Underdetermined(what)) => Ok(CommandResult {
                    status: "inconclusive",
                    payload: json!({
                        "case": case_json(&case),
                        "missing": what,
                        "stalls": ledger.stalls(),
                    }),
                    citations: ledger_citations(),
                    human: format!(
                        "inconclusive: {what}\nstalled steps:\n{}",
                        ledger.stalls().join("\n")
                    ),
                    check_failed: true,
                }),
                Err(e) => Err(e.into()),
            }
        }
        DelpezzoCmd::Search { pmax, mbound } => {
            let hits = search_candidates(*pmax, *mbound);
            let mut human = format!(
                "{} raw candidates (degree filters only; run `delpezzo verdict` to certify)\n",
                hits.len()
            );
            for hit in &hits {
                human.push_str(&format!(
                    "  candidate - verdict unknown: p = {:<3} coefficients {}\n",
                    hit.p,
                    hit.coefficients
                        .iter()
                        .map(format_rational)
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
            }
            Ok(CommandResult::ok(
                json!({
                    "p_max": pmax,
                    "m_bound": mbound,
                    "candidates": hits.iter().map(|h| json!({
                        "status": "candidate - verdict unknown",
                        "p": h.p,
                        "coeffs": rational_list(&h.coefficients),
                    })).collect::<Vec<_>>(),
                }),
                vec![
                    "exhaustive enumeration over standard tuples",
                    "componentwise floor degrees",
                ],
                human,
            ))
        }
    }
}

fn ledger_citations() -> Vec<&'static str> {
    vec![
        "closed-form line-bundle dims on the plane",
        "residue sequence",
        "frobenius quotient sequence",
        "cartier kernel sequence",
        "cartier tower sequences",
        "frobenius closure sequence",
        "top-form quotient sequence",
        "frobenius splitting axiom for the fractional boundary",
        "five-term tower comparison",
    ]
}

fn run_acc(cmd: &AccCmd) -> Result<CommandResult> {
    match cmd {
        AccCmd::Enumerate { low, grid } => {
            let threshold = parse_rational(low).map_err(|e| anyhow!(e))?;
            let report = curve_acc_enumerate(&threshold, *grid)?;
            let human = format!(
                "{} boundary multisets sum to 2 (grid denominator {});\nno value in ({}, 1): {}",
                report.solutions.len(),
                report.grid_denominator,
                format_rational(&threshold),
                report.none_in_open_interval
            );
            Ok(CommandResult {
                status: "ok",
                payload: json!({
                    "threshold": format_rational(&threshold),
                    "grid_denominator": report.grid_denominator,
                    "solutions": report.solutions.iter().map(|s| rational_list(s)).collect::<Vec<_>>(),
                    "none_in_open_interval": report.none_in_open_interval,
                }),
                citations: vec!["exhaustive multiset enumeration"],
                human,
                check_failed: !report.none_in_open_interval,
            })
        }
        AccCmd::Vanishing { p, coeffs, ell } => {
            let parsed: Vec<Rational> = coeffs
                .iter()
                .map(|s| parse_rational(s).map_err(|e| anyhow!(e)))
                .collect::<Result<_>>()?;
            let report = vanishing_42_check(&parsed, *p, *ell)?;
            let human = format!(
                "componentwise floor inequality: {:?}\nplane degree deg(K + Delta_red + floor(p^l(K + Delta))) = {}",
                report.per_component_ok, report.p2_degree
            );
            Ok(CommandResult::ok(
                json!({
                    "p": p,
                    "ell": ell,
                    "coeffs": rational_list(&parsed),
                    "per_component_ok": report.per_component_ok,
                    "p2_degree": report.p2_degree.to_string(),
                }),
                vec!["componentwise floor inequality"],
                human,
            ))
        }
    }
}

fn run_cusp(args: &CuspResolveArgs) -> Result<CommandResult> {
    let (payload, human, graph_json) = if let Some(n) = args.n {
        let graph = cusp_log_resolution(n)?;
        let gjson = graph.to_json();
        // cross-check: the engine's germ reaches the same special point
        let outcome = cusp_germ(n)?.resolve(4 * n + 16)?;
        let human = format!(
            "cusp depth {n}: full log resolution has {} curves; engine verdict: special point of type {}",
            graph.vertices().len(),
            2 * n + 1
        );
        (
            json!({
                "n": n,
                "type": 2 * n + 1,
                "graph": gjson.clone(),
                "engine_outcome": outcome_to_json(&outcome),
            }),
            human,
            gjson,
        )
    } else if let Some(path) = &args.germ {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading germ file {path}"))?;
        let value: Value = serde_json::from_str(&text).context("germ file is not JSON")?;
        let germ = GermState::from_json(&value)?;
        let outcome = germ.resolve(args.max_steps)?;
        let ojson = outcome_to_json(&outcome);
        let human = format!(
            "germ resolved in {} steps: {}",
            outcome.steps,
            ojson["kind"].as_str().unwrap_or("?")
        );
        let graph_json = ojson["graph"].clone();
        (ojson, human, graph_json)
    } else {
        bail!("provide --n N or --germ FILE");
    };
    if let Some(path) = &args.emit_graph {
        std::fs::write(path, serde_json::to_string_pretty(&graph_json)?)
            .with_context(|| format!("writing {path}"))?;
    }
    Ok(CommandResult::ok(
        payload,
        vec!["stepwise blowup bookkeeping"],
        human,
    ))
}

fn run_dualgraph(cmd: &DualgraphCmd) -> Result<CommandResult> {
    let matrix_of = |src: &GraphSource, subset: &Option<Vec<String>>| -> Result<_> {
        let graph = src.resolve()?;
        let ids: Vec<String> = match subset {
            Some(s) => s.clone(),
            None => graph.vertex_ids().iter().map(|s| s.to_string()).collect(),
        };
        let refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
        let m = graph.intersection_matrix(&refs)?;
        Ok((graph, m))
    };
    match cmd {
        DualgraphCmd::Det { src, subset } => {
            let (_, m) = matrix_of(src, subset)?;
            let det = m.determinant();
            Ok(CommandResult::ok(
                json!({ "det": det.to_string(), "size": m.size() }),
                vec!["fraction-free elimination"],
                format!("det = {det}"),
            ))
        }
        DualgraphCmd::Negdef { src, subset } => {
            let (_, m) = matrix_of(src, subset)?;
            let nd = m.is_negative_definite()?;
            Ok(CommandResult::ok(
                json!({ "negative_definite": nd }),
                vec!["leading principal minors"],
                format!("negative definite: {nd}"),
            ))
        }
        DualgraphCmd::Discrepancy { src } => {
            let graph = src.resolve()?;
            let sol = graph.solve_discrepancies()?;
            let mut human = String::new();
            for (id, c) in &sol.coefficients {
                human.push_str(&format!("{id}: {}\n", format_rational(c)));
            }
            human.push_str(&format!("klt: {}  lc: {}", sol.klt, sol.lc));
            Ok(CommandResult::ok(
                json!({
                    "coefficients": sol.coefficients.iter().map(|(id, c)| json!({
                        "id": id, "coeff": format_rational(c),
                    })).collect::<Vec<_>>(),
                    "klt": sol.klt,
                    "lc": sol.lc,
                }),
                vec!["exact linear solve over the rationals"],
                human,
            ))
        }
        DualgraphCmd::Index { src } => {
            let graph = src.resolve()?;
            let index = graph.q_factorial_index()?;
            Ok(CommandResult::ok(
                json!({ "q_factorial_index": index.to_string() }),
                vec!["fraction-free elimination", "leading principal minors"],
                format!("Q-factorial index = {index}"),
            ))
        }
    }
}

fn run_cone(cmd: &ConeCmd) -> Result<CommandResult> {
    match cmd {
        ConeCmd::Rays { divisor } => {
            let pairs = parse_fraction_pairs(divisor)?;
            let data = FractionalDivisorOnAn::new(pairs)?;
            let rays = cone_rays(&data);
            Ok(CommandResult::ok(
                json!({ "rank": rays.rank, "rays": rays.rays }),
                vec!["lattice ray construction"],
                format!("rays: {:?}", rays.rays),
            ))
        }
        ConeCmd::Index { d, l } => {
            let idx = q_factorial_index_toric(*d, *l)?;
            let gamma_cartier = cartier_test(1, 0, *d, *l)?;
            Ok(CommandResult::ok(
                json!({ "d": d, "l": l, "q_factorial_index": idx,
                        "unit_divisor_cartier": gamma_cartier }),
                vec!["brute force over residue classes"],
                format!("Q-factorial index = {idx}"),
            ))
        }
        ConeCmd::Different { divisor } => {
            let pairs = parse_fraction_pairs(divisor)?;
            // (l, d) input, the different needs (d, l)
            let swapped: Vec<(i64, i64)> = pairs.iter().map(|(l, d)| (*d, *l)).collect();
            let coeffs = different(&swapped)?;
            Ok(CommandResult::ok(
                json!({ "coefficients": rational_list(&coeffs) }),
                vec!["adjunction coefficient (d-1)/d"],
                format!(
                    "different: {}",
                    coeffs
                        .iter()
                        .map(format_rational)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ))
        }
        ConeCmd::Witness { a, b, q, d } => {
            let parts = reflexive_power_witness(*a, *b, *q, *d)?;
            let holds = floor_identity_holds(*a, *b, *q, *d, &parts);
            Ok(CommandResult {
                status: if holds { "ok" } else { "error" },
                payload: json!({ "parts": parts, "identity_holds": holds }),
                citations: vec!["congruence construction"],
                human: format!("witness parts: {parts:?} (identity holds: {holds})"),
                check_failed: !holds,
            })
        }
        ConeCmd::Hilbert {
            space,
            divisor,
            dmax,
            canonical_q,
        } => {
            let space = match space.to_uppercase().as_str() {
                "P1" => ProjSpace::P1,
                "P2" => ProjSpace::P2,
                other => bail!("unknown space `{other}` (expected P1 or P2)"),
            };
            let mut components = Vec::new();
            for spec in divisor {
                let (deg, coeff) = spec
                    .split_once(':')
                    .ok_or_else(|| anyhow!("component `{spec}` must be deg:coeff"))?;
                components.push((
                    deg.trim().parse::<i64>().context("component degree")?,
                    parse_rational(coeff).map_err(|e| anyhow!(e))?,
                ));
            }
            let div = ProjectiveQDivisor { space, components };
            let dims = section_ring_dims(&div, *dmax)?;
            let mut payload = json!({ "dims": dims });
            let mut human = format!("section ring dims (d = 0..{dmax}): {dims:?}");
            if let Some(q) = canonical_q {
                let cdims = canonical_module_dims(&div, *q, 0..=*dmax)?;
                human.push_str(&format!("\npluricanonical (q = {q}): {cdims:?}"));
                payload["canonical_dims"] = json!(cdims
                    .iter()
                    .map(|(d, h)| json!([d, h]))
                    .collect::<Vec<_>>());
            }
            Ok(CommandResult::ok(
                payload,
                vec!["closed-form section counts"],
                human,
            ))
        }
    }
}

fn run_witt(cmd: &WittCmd) -> Result<CommandResult> {
    match cmd {
        WittCmd::Add { common, a, b } | WittCmd::Mul { common, a, b } => {
            let is_add = matches!(cmd, WittCmd::Add { .. });
            let ring = common.ring()?;
            let w = WittRing::new(common.p, common.n, ring.clone())?;
            let va = WittVec {
                entries: common.parse_entries(&ring, a)?,
            };
            let vb = WittVec {
                entries: common.parse_entries(&ring, b)?,
            };
            let out = if is_add { w.add(&va, &vb) } else { w.mul(&va, &vb) };
            let rendered: Vec<String> = out.entries.iter().map(|e| ring.format(e)).collect();
            Ok(CommandResult::ok(
                json!({ "entries": rendered }),
                vec!["universal ghost-solved polynomials"],
                format!("({})", rendered.join(", ")),
            ))
        }
        WittCmd::Frob { common, a } => {
            let ring = common.ring()?;
            let w = WittRing::new(common.p, common.n, ring.clone())?;
            let va = WittVec {
                entries: common.parse_entries(&ring, a)?,
            };
            let out = w.frobenius(&va);
            let rendered: Vec<String> = out.entries.iter().map(|e| ring.format(e)).collect();
            Ok(CommandResult::ok(
                json!({ "entries": rendered }),
                vec!["entrywise p-th power"],
                format!("({})", rendered.join(", ")),
            ))
        }
        WittCmd::Ghost { p, n, a } => {
            if a.len() != *n {
                bail!("expected {n} entries, got {}", a.len());
            }
            if !qfsplit_core::witt::is_prime(*p) {
                bail!("{p} is not prime");
            }
            let vec = WittVec {
                entries: a.iter().map(|x| BigInt::from(*x)).collect(),
            };
            let ghost = ghost_components(*p, &vec);
            let rendered: Vec<String> = ghost.iter().map(|g| g.to_string()).collect();
            Ok(CommandResult::ok(
                json!({ "ghost": rendered }),
                vec!["ghost component evaluation"],
                format!("({})", rendered.join(", ")),
            ))
        }
        WittCmd::Grade { common, a } => {
            let ring = common.ring()?;
            let w = WittRing::new(common.p, common.n, ring.clone())?;
            let va = WittVec {
                entries: common.parse_entries(&ring, a)?,
            };
            let (label, value) = match w.homogeneous_degree(&va)? {
                Homogeneity::Zero => ("any".to_string(), Value::Null),
                Homogeneity::Homogeneous(d) => {
                    ("homogeneous".to_string(), Value::String(format_rational(&d)))
                }
                Homogeneity::Mixed => ("mixed".to_string(), Value::Null),
            };
            Ok(CommandResult::ok(
                json!({ "grading": label, "degree": value }),
                vec!["entrywise weighted degrees"],
                format!("grading: {label} {value}"),
            ))
        }
    }
}

fn run_reproduce(mmax: u32) -> Result<CommandResult> {
    let mut lines: Vec<(String, bool)> = Vec::new();
    let mut push = |name: String, ok: bool| lines.push((name, ok));

    // five-case degree arithmetic, tables and verdicts
    for label in DelPezzoCase::fixture_labels() {
        let case = DelPezzoCase::fixture(label)?;
        let report = case.verify_ldp();
        let p = case.p as i64;
        let deg_ok = report.ample
            && report.deg_k_plus_delta
                == qfsplit_core::rational::rat(-1, p * (p + 1))
            && case.floor_p_degree(1) == BigInt::from(-1);
        push(format!("case {label}: degree arithmetic"), deg_ok);
        let ledger = DimLedger::run(&case, mmax)?;
        let table_ok = ledger.table_report().iter().all(|r| r.ok());
        push(format!("case {label}: dimension table (m <= {mmax})"), table_ok);
        let verdict_ok = matches!(ledger.verdict(), Ok(v) if v.certified);
        push(format!("case {label}: non-quasi-F-split verdict"), verdict_ok);
    }

    // cusp chains
    let mut cusp_ok = true;
    for n in 1..=30u64 {
        let graph = cusp_log_resolution(n)?;
        let sol = graph.solve_discrepancies()?;
        let expected = qfsplit_core::blowup::cusp_reference_coefficients(n);
        cusp_ok &= sol
            .coefficients
            .iter()
            .map(|(_, c)| c)
            .eq(expected.iter());
        let ids: Vec<String> = (1..=n).map(|i| format!("E{i}")).collect();
        let refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
        let det = graph.intersection_matrix(&refs)?.determinant();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        cusp_ok &= det == BigInt::from(sign * (2 * n as i64 + 1));
        let plain = DualGraph::chain(&vec![-2; n as usize]);
        let pids: Vec<String> = (1..=n).map(|i| format!("E{i}")).collect();
        let prefs: Vec<&str> = pids.iter().map(|s| s.as_str()).collect();
        let pdet = plain.intersection_matrix(&prefs)?.determinant();
        cusp_ok &= pdet == BigInt::from(sign * (n as i64 + 1));
    }
    push("cusp chains n = 1..30: coefficients and determinants".to_string(), cusp_ok);

    // toric sweep
    let mut toric_ok = true;
    for d in 1..=30i64 {
        for l in 0..d.max(1) {
            if num::integer::gcd(d, l) != 1 || (d > 1 && l == 0) {
                continue;
            }
            toric_ok &= q_factorial_index_toric(d, l)? == d;
            if l >= 1 {
                toric_ok &= different(&[(d, l)])?[0]
                    == qfsplit_core::rational::rat(d - 1, d);
            }
        }
    }
    push("toric index sweep d <= 30".to_string(), toric_ok);

    let mut witness_ok = true;
    for b in 1..=12i64 {
        for a in 1..=b {
            if num::integer::gcd(a, b) != 1 {
                continue;
            }
            for q in 1..=6i64 {
                for d in 0..b {
                    let w = reflexive_power_witness(a, b, q, d)?;
                    witness_ok &= floor_identity_holds(a, b, q, d, &w);
                }
            }
        }
    }
    push("reflexive-power witnesses (b <= 12, q <= 6)".to_string(), witness_ok);

    // witt battery
    let mut witt_ok = true;
    for p in [2u64, 3, 5] {
        for n in 1..=4usize {
            witt_ok &= qfsplit_core::witt::battery::ghost_battery(p, n, 1000, 0x5eed).is_ok();
        }
    }
    for p in [2u64, 3] {
        for n in 1..=3usize {
            witt_ok &= qfsplit_core::witt::battery::ring_axioms_exhaustive(p, n).is_ok();
        }
    }
    witt_ok &= qfsplit_core::witt::battery::grading_battery(2, 3).is_ok();
    witt_ok &= qfsplit_core::witt::battery::grading_battery(3, 3).is_ok();
    push("witt ghost/ring/grading battery".to_string(), witt_ok);

    // boundary enumeration
    let acc = curve_acc_enumerate(&qfsplit_core::rational::rat(5, 6), 42)?;
    push(
        "boundary enumeration: no coefficient in (5/6, 1)".to_string(),
        acc.none_in_open_interval,
    );

    let all_ok = lines.iter().all(|(_, ok)| *ok);
    let mut human = String::new();
    for (name, ok) in &lines {
        human.push_str(&format!("[{}] {name}\n", if *ok { "pass" } else { "FAIL" }));
    }
    human.push_str(&format!(
        "overall: {}",
        if all_ok { "all checks passed" } else { "FAILURES present" }
    ));
    Ok(CommandResult {
        status: if all_ok { "ok" } else { "error" },
        payload: json!({
            "checks": lines.iter().map(|(name, ok)| json!({
                "name": name, "ok": ok,
            })).collect::<Vec<_>>(),
            "all_ok": all_ok,
        }),
        citations: ledger_citations(),
        human,
        check_failed: !all_ok,
    })
}

fn main() -> ExitCode {
    // QFS_THREADS caps internal data parallelism
    if let Ok(threads) = std::env::var("QFS_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(result) => {
            emit(&result, cli.json);
            if result.check_failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            if cli.json {
                let doc = json!({
                    "status": "error",
                    "payload": { "code": "internal_error", "message": format!("{err:#}") },
                    "citations": [],
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            eprintln!("error: {err:#}");
            ExitCode::from(3)
        }
    }
}

//! The aggregate four-case report: every number is produced by a library
//! call, assembled single-threaded, and rendered with stable ordering.

use num_bigint::BigInt;
use plumbline_core::blowdown::{blowdown_report, BlowdownReport, EnhancedForm};
use plumbline_core::charvec::{initial_vectors, LSpaceConclusion, SpincClass};
use plumbline_core::diagram::{parse_pd, Diagram};
use plumbline_core::fixtures;
use plumbline_core::invariants::{
    jones, knot_determinant, qa_certificate, validate_certificate, QACertificate,
};
use plumbline_core::kh::{
    ingest_table, is_hthin, reduced_rank_bound, thin_sigma, z2_lspace_verdict, KhTable, Z2Verdict,
};
use plumbline_core::linalg::Rational;
use plumbline_core::poly::LaurentPolynomial;
use serde_json::{json, Map, Value};

/// Knot, plumbing graph, and (optionally) an enhanced form over its boundary.
struct CaseSpec {
    knot: &'static str,
    graph: &'static str,
    ball: Option<&'static str>,
}

const CASES: [CaseSpec; 4] = [
    CaseSpec { knot: "8_20", graph: "w1", ball: Some("a1") },
    CaseSpec { knot: "9_46", graph: "w2", ball: None },
    CaseSpec { knot: "10_137", graph: "w3", ball: Some("a3") },
    CaseSpec { knot: "10_140", graph: "w4", ball: None },
];

/// Root summary of a quasi-alternating certificate search on the mirror.
pub struct QASummary {
    pub found: bool,
    pub root_triple: Option<(BigInt, BigInt, BigInt)>,
    pub revalidates: Option<bool>,
}

/// Everything the report prints for one knot/graph pair.
pub struct PaperCase {
    pub knot: String,
    pub graph: String,
    pub h: BigInt,
    pub initial_count: usize,
    pub good: Vec<Vec<i64>>,
    pub classes: Vec<SpincClass>,
    pub lspace_q: LSpaceConclusion,
    pub good_count: usize,
    pub bad_vertex_count: usize,
    pub det: BigInt,
    pub sigma: i64,
    pub hthin: bool,
    pub rank_bound: BigInt,
    pub z2: Z2Verdict,
    pub jones: LaurentPolynomial,
    pub expected_t: BigInt,
    pub d_zero_count: usize,
    pub discrepancy: bool,
    pub extenders: Option<Vec<Vec<i64>>>,
    pub congruence: Option<(Vec<BigInt>, BigInt)>,
    pub qa: QASummary,
}

fn load_graph(name: &str) -> Result<plumbline_core::plumbing::WeightedGraph, String> {
    let text = fixtures::lookup(name).ok_or_else(|| format!("no bundled graph {name}"))?;
    plumbline_core::plumbing::WeightedGraph::parse(text).map_err(|e| e.to_string())
}

fn load_pd(name: &str) -> Result<Diagram, String> {
    let text = fixtures::lookup(name).ok_or_else(|| format!("no bundled diagram {name}"))?;
    parse_pd(text).map_err(|e| e.to_string())
}

fn load_kh(name: &str) -> Result<KhTable, String> {
    let text = fixtures::lookup(name).ok_or_else(|| format!("no bundled table {name}"))?;
    ingest_table(text).map_err(|e| e.to_string())
}

fn qa_summary(d: &Diagram, depth: usize) -> Result<QASummary, String> {
    let mirror = d.mirror().map_err(|e| e.to_string())?;
    let cert = qa_certificate(&mirror, depth).map_err(|e| e.to_string())?;
    match cert {
        None => Ok(QASummary { found: false, root_triple: None, revalidates: None }),
        Some(cert) => {
            let revalidates = validate_certificate(&mirror, &cert).map_err(|e| e.to_string())?;
            let root_triple = match &cert {
                QACertificate::Resolution { determinant, det_zero, det_one, .. } => {
                    Some((determinant.clone(), det_zero.clone(), det_one.clone()))
                }
                _ => None,
            };
            Ok(QASummary { found: true, root_triple, revalidates: Some(revalidates) })
        }
    }
}

/// Builds all four cases. Heavy enumeration happens inside library calls;
/// assembly order is fixed by the case table.
pub fn paper_cases(budget: u64, depth: usize) -> Result<Vec<PaperCase>, String> {
    let mut out = Vec::with_capacity(CASES.len());
    for spec in &CASES {
        let g = load_graph(spec.graph)?;
        let d = load_pd(&format!("{}.pd", spec.knot))?;
        let table = load_kh(&format!("{}.kh.json", spec.knot))?;
        let form = match spec.ball {
            None => None,
            Some(name) => {
                let text =
                    fixtures::lookup(name).ok_or_else(|| format!("no bundled form {name}"))?;
                Some(EnhancedForm::parse(text).map_err(|e| e.to_string())?)
            }
        };
        let BlowdownReport { h, lspace, d_zero_classes, expected_t, discrepancy, extension } =
            blowdown_report(&g, form.as_ref(), budget).map_err(|e| e.to_string())?;
        let good =
            plumbline_core::charvec::good_vectors(&g, budget).map_err(|e| e.to_string())?;
        let dinv =
            plumbline_core::charvec::d_invariants(&g, budget).map_err(|e| e.to_string())?;
        let det = knot_determinant(&d).map_err(|e| e.to_string())?;
        let j = jones(&d).map_err(|e| e.to_string())?;
        if &j != table.jones() {
            return Err(format!("{}: stored jones disagrees with the diagram", spec.knot));
        }
        let sigma = thin_sigma(&table, Some(&d)).map_err(|e| e.to_string())?;
        let hthin = is_hthin(&table, sigma);
        let rank_bound = reduced_rank_bound(&j);
        let z2 = z2_lspace_verdict(&det, &rank_bound, hthin).map_err(|e| e.to_string())?;
        let qa = qa_summary(&d, depth)?;
        out.push(PaperCase {
            knot: spec.knot.to_string(),
            graph: spec.graph.to_string(),
            h,
            initial_count: initial_vectors(&g).len(),
            good,
            classes: dinv.classes,
            lspace_q: lspace.conclusion,
            good_count: lspace.good_count,
            bad_vertex_count: lspace.bad_vertex_count,
            det,
            sigma,
            hthin,
            rank_bound,
            z2,
            jones: j,
            expected_t,
            d_zero_count: d_zero_classes.len(),
            discrepancy,
            extenders: extension.as_ref().map(|e| e.extenders.clone()),
            congruence: extension
                .and_then(|e| e.congruence)
                .map(|c| (c.coefficients, c.modulus)),
            qa,
        });
    }
    Ok(out)
}

pub fn vector_str(v: &[i64]) -> String {
    let body = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("({body})")
}

pub fn rational_str(r: &Rational) -> String {
    // BigRational renders reduced `p/q`, omitting a denominator of one
    r.to_string()
}

fn congruence_str(coeffs: &[BigInt], modulus: &BigInt) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        use num_traits::Zero;
        if c.is_zero() {
            continue;
        }
        let c_str = if c == &BigInt::from(1) { String::new() } else { c.to_string() };
        terms.push(format!("{c_str}a{}", i + 1));
    }
    let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    format!("{lhs} = 0 (mod {modulus})")
}

pub fn render_text(cases: &[PaperCase]) -> String {
    let mut out = String::new();
    for c in cases {
        out.push_str(&format!("== {} / {} ==\n", c.knot, c.graph));
        out.push_str(&format!("h: {}\n", c.h));
        let q = match c.lspace_q {
            LSpaceConclusion::LSpace => {
                format!("true ({} = {})", c.good_count, c.h)
            }
            LSpaceConclusion::Inconclusive => {
                format!("inconclusive (good {}, h {})", c.good_count, c.h)
            }
        };
        out.push_str(&format!("L-space (Q): {q}\n"));
        let z2 = match c.z2 {
            Z2Verdict::Confirmed => format!("confirmed ({} = {})", c.det, c.rank_bound),
            Z2Verdict::Inconclusive => {
                format!("inconclusive (det {}, bound {})", c.det, c.rank_bound)
            }
        };
        out.push_str(&format!("L-space (Z2): {z2}\n"));
        out.push_str(&format!("jones: {}\n", c.jones));
        out.push_str(&format!(
            "good vectors ({} of {}):\n",
            c.good.len(),
            c.initial_count
        ));
        for v in &c.good {
            out.push_str(&format!("  {}\n", vector_str(v)));
        }
        out.push_str("d-table:\n");
        for class in &c.classes {
            let d = class
                .d_value
                .as_ref()
                .map(rational_str)
                .unwrap_or_else(|| "?".to_string());
            out.push_str(&format!("  d{} = {}\n", vector_str(&class.representative), d));
        }
        out.push_str(&format!("expected t: {}\n", c.expected_t));
        out.push_str(&format!("d = 0 classes: {}\n", c.d_zero_count));
        out.push_str(&format!("discrepancy: {}\n", c.discrepancy));
        match &c.extenders {
            None => out.push_str("extenders: no form bundled\n"),
            Some(list) => {
                out.push_str(&format!("extenders ({}):\n", list.len()));
                for v in list {
                    out.push_str(&format!("  {}\n", vector_str(v)));
                }
            }
        }
        if let Some((coeffs, modulus)) = &c.congruence {
            out.push_str(&format!("congruence: {}\n", congruence_str(coeffs, modulus)));
        }
        match (&c.qa.found, &c.qa.root_triple) {
            (true, Some((det, d0, d1))) => {
                let ok = c.qa.revalidates == Some(true);
                out.push_str(&format!(
                    "qa (mirror): root ({det}, {d0}, {d1}), revalidates {ok}\n"
                ));
            }
            (true, None) => out.push_str("qa (mirror): leaf certificate\n"),
            (false, _) => out.push_str("qa (mirror): none within depth\n"),
        }
        out.push('\n');
    }
    out
}

pub fn bigint_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub fn render_json(cases: &[PaperCase]) -> Value {
    let case_values: Vec<Value> = cases
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("knot".into(), json!(c.knot));
            m.insert("graph".into(), json!(c.graph));
            m.insert("h".into(), bigint_value(&c.h));
            m.insert(
                "lspace_q".into(),
                json!(matches!(c.lspace_q, LSpaceConclusion::LSpace)),
            );
            m.insert("good_count".into(), json!(c.good_count));
            m.insert("bad_vertices".into(), json!(c.bad_vertex_count));
            m.insert("initial_count".into(), json!(c.initial_count));
            m.insert(
                "good_vectors".into(),
                json!(c.good.iter().map(|v| json!(v)).collect::<Vec<_>>()),
            );
            m.insert(
                "d_table".into(),
                Value::Array(
                    c.classes
                        .iter()
                        .map(|class| {
                            let mut row = Map::new();
                            row.insert(
                                "representative".into(),
                                json!(class.representative),
                            );
                            row.insert(
                                "d".into(),
                                match &class.d_value {
                                    Some(d) => json!(rational_str(d)),
                                    None => Value::Null,
                                },
                            );
                            row.insert("members".into(), json!(class.members.len()));
                            Value::Object(row)
                        })
                        .collect(),
                ),
            );
            m.insert("det".into(), bigint_value(&c.det));
            m.insert("sigma".into(), json!(c.sigma));
            m.insert("hthin".into(), json!(c.hthin));
            m.insert("rank_bound".into(), bigint_value(&c.rank_bound));
            m.insert("lspace_z2".into(), json!(matches!(c.z2, Z2Verdict::Confirmed)));
            m.insert(
                "jones".into(),
                Value::Object(
                    c.jones
                        .to_json_map()
                        .into_iter()
                        .map(|(k, v)| (k, json!(v.parse::<i64>().unwrap())))
                        .collect(),
                ),
            );
            m.insert("expected_t".into(), bigint_value(&c.expected_t));
            m.insert("d_zero_classes".into(), json!(c.d_zero_count));
            m.insert("discrepancy".into(), json!(c.discrepancy));
            m.insert(
                "extenders".into(),
                match &c.extenders {
                    None => Value::Null,
                    Some(list) => json!(list.iter().map(|v| json!(v)).collect::<Vec<_>>()),
                },
            );
            m.insert(
                "congruence".into(),
                match &c.congruence {
                    None => Value::Null,
                    Some((coeffs, modulus)) => {
                        let mut cm = Map::new();
                        cm.insert(
                            "coefficients".into(),
                            Value::Array(coeffs.iter().map(bigint_value).collect()),
                        );
                        cm.insert("modulus".into(), bigint_value(modulus));
                        Value::Object(cm)
                    }
                },
            );
            let mut qa = Map::new();
            qa.insert("found".into(), json!(c.qa.found));
            qa.insert(
                "root".into(),
                match &c.qa.root_triple {
                    None => Value::Null,
                    Some((det, d0, d1)) => Value::Array(vec![
                        bigint_value(det),
                        bigint_value(d0),
                        bigint_value(d1),
                    ]),
                },
            );
            qa.insert(
                "revalidates".into(),
                match c.qa.revalidates {
                    None => Value::Null,
                    Some(b) => json!(b),
                },
            );
            m.insert("qa_mirror".into(), Value::Object(qa));
            Value::Object(m)
        })
        .collect();
    let mut top = Map::new();
    top.insert("schema".into(), json!(1));
    top.insert("cases".into(), Value::Array(case_values));
    Value::Object(top)
}

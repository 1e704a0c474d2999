//! Command-line front end: plumbing-graph analysis, rational-ball blowdown
//! eligibility, knot invariants, homology-table checks, and the aggregate
//! four-case report.

mod report;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use plumbline_core::blowdown::{blowdown_report, EnhancedForm};
use plumbline_core::charvec::{
    d_invariants, initial_vectors, lspace_verdict, LSpaceConclusion, DEFAULT_BUDGET,
};
use plumbline_core::diagram::{parse_pd, Diagram};
use plumbline_core::fixtures;
use plumbline_core::invariants::{
    jones, knot_determinant, qa_certificate, signature_gl, validate_certificate, QACertificate,
};
use plumbline_core::kh::{
    ingest_table, is_hthin, mirror_table, reduced_rank_bound, thin_sigma, z2_lspace_verdict,
    KhTable, Z2Verdict,
};
use plumbline_core::plumbing::WeightedGraph;
use report::{bigint_value, rational_str, vector_str};
use serde_json::{json, Map, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plumbline")]
#[command(about = "L-space checks and rational blow-down bookkeeping for plumbed manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Plumbing-graph analysis
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Rational-ball eligibility for a plumbing boundary
    Blowdown(BlowdownArgs),
    /// Knot-diagram invariants
    Knot {
        #[command(subcommand)]
        action: KnotAction,
    },
    /// Bigraded homology-table checks
    Kh {
        #[command(subcommand)]
        action: KhAction,
    },
    /// Aggregate reports
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file (bundled fixture names also resolve)
    #[arg(long)]
    graph: String,
    /// Evaluation budget for vector enumeration
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum GraphAction {
    /// Vertex, homology, and good-vector summary
    Analyze(GraphArgs),
    /// L-space verdict from the good-vector count
    Lspace(GraphArgs),
    /// d-invariants per spin^c class
    Dinv(GraphArgs),
}

#[derive(Args)]
struct BlowdownArgs {
    /// Graph file (bundled fixture names also resolve)
    #[arg(long)]
    graph: String,
    /// Enhanced intersection form over the same boundary
    #[arg(long)]
    ball: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PdArgs {
    /// Planar diagram file (bundled fixture names also resolve)
    #[arg(long)]
    pd: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct QaArgs {
    #[arg(long)]
    pd: String,
    /// Resolution depth for the certificate search
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum KnotAction {
    /// Determinant of the branched double cover
    Det(PdArgs),
    /// Jones polynomial, unknot normalized to 1
    Jones(PdArgs),
    /// Signature via the corrected Goeritz count
    Signature(PdArgs),
    /// Quasi-alternating certificate search
    Qa(QaArgs),
}

#[derive(Args)]
struct KhArgs {
    /// Homology table file (bundled fixture names also resolve)
    #[arg(long)]
    kh: String,
    /// Optional diagram; its signature must match the table metadata
    #[arg(long)]
    pd: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum KhAction {
    /// Two-diagonal support check
    Thin(KhArgs),
    /// Z2 L-space verdict from determinant vs rank bound
    Z2(KhArgs),
    /// Mirror transform of the table
    Mirror(KhArgs),
}

#[derive(Args)]
struct PaperArgs {
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Certificate search depth
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ReportAction {
    /// The full four-case report
    Paper(PaperArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

/// Reads a path from disk, falling back to the bundled fixture of that name.
fn load(path: &str) -> Result<String, String> {
    if std::path::Path::new(path).is_file() {
        return std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"));
    }
    fixtures::lookup(path)
        .map(str::to_string)
        .ok_or_else(|| format!("{path}: no such file or bundled fixture"))
}

fn load_graph(path: &str) -> Result<WeightedGraph, String> {
    WeightedGraph::parse(&load(path)?).map_err(|e| format!("{path}: {e}"))
}

fn load_pd(path: &str) -> Result<Diagram, String> {
    parse_pd(&load(path)?).map_err(|e| format!("{path}: {e}"))
}

fn load_kh(path: &str) -> Result<KhTable, String> {
    ingest_table(&load(path)?).map_err(|e| format!("{path}: {e}"))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn lspace_line(good: usize, h: &BigInt, conclusion: LSpaceConclusion) -> String {
    match conclusion {
        LSpaceConclusion::LSpace => format!("L-space: true ({good} = {h})"),
        LSpaceConclusion::Inconclusive => {
            format!("L-space: inconclusive (good {good}, h {h})")
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Commands::Graph { action } => match action {
            GraphAction::Analyze(args) => graph_analyze(&args),
            GraphAction::Lspace(args) => graph_lspace(&args),
            GraphAction::Dinv(args) => graph_dinv(&args),
        },
        Commands::Blowdown(args) => blowdown_cmd(&args),
        Commands::Knot { action } => match action {
            KnotAction::Det(args) => knot_det(&args),
            KnotAction::Jones(args) => knot_jones(&args),
            KnotAction::Signature(args) => knot_signature(&args),
            KnotAction::Qa(args) => knot_qa(&args),
        },
        Commands::Kh { action } => match action {
            KhAction::Thin(args) => kh_thin(&args),
            KhAction::Z2(args) => kh_z2(&args),
            KhAction::Mirror(args) => kh_mirror(&args),
        },
        Commands::Report { action } => match action {
            ReportAction::Paper(args) => report_paper(&args),
        },
    }
}

fn graph_analyze(args: &GraphArgs) -> Result<(), String> {
    let g = load_graph(&args.graph)?;
    let h = g.h1_order().map_err(|e| e.to_string())?;
    let verdict = lspace_verdict(&g, args.budget).map_err(|e| e.to_string())?;
    let initial = initial_vectors(&g).len();
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("vertices".into(), json!(g.len()));
        m.insert("h".into(), bigint_value(&h));
        m.insert("initial_vectors".into(), json!(initial));
        m.insert("good_vectors".into(), json!(verdict.good_count));
        m.insert("bad_vertices".into(), json!(verdict.bad_vertex_count));
        m.insert(
            "lspace".into(),
            json!(matches!(verdict.conclusion, LSpaceConclusion::LSpace)),
        );
        print_json(&Value::Object(m));
    } else {
        println!("vertices: {}", g.len());
        println!("h: {h}");
        println!("initial vectors: {initial}");
        println!("good vectors: {}", verdict.good_count);
        println!("bad vertices: {}", verdict.bad_vertex_count);
        println!("{}", lspace_line(verdict.good_count, &h, verdict.conclusion));
    }
    Ok(())
}

fn graph_lspace(args: &GraphArgs) -> Result<(), String> {
    let g = load_graph(&args.graph)?;
    let verdict = lspace_verdict(&g, args.budget).map_err(|e| e.to_string())?;
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("h".into(), bigint_value(&verdict.h));
        m.insert("good_vectors".into(), json!(verdict.good_count));
        m.insert("bad_vertices".into(), json!(verdict.bad_vertex_count));
        m.insert(
            "lspace".into(),
            json!(matches!(verdict.conclusion, LSpaceConclusion::LSpace)),
        );
        print_json(&Value::Object(m));
    } else {
        println!("{}", lspace_line(verdict.good_count, &verdict.h, verdict.conclusion));
    }
    Ok(())
}

fn graph_dinv(args: &GraphArgs) -> Result<(), String> {
    let g = load_graph(&args.graph)?;
    let inv = d_invariants(&g, args.budget).map_err(|e| e.to_string())?;
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("h".into(), bigint_value(&inv.h));
        m.insert("good_vectors".into(), json!(inv.good_count));
        m.insert("complete".into(), json!(inv.complete));
        m.insert(
            "classes".into(),
            Value::Array(
                inv.classes
                    .iter()
                    .map(|c| {
                        let mut row = Map::new();
                        row.insert("representative".into(), json!(c.representative));
                        row.insert(
                            "d".into(),
                            c.d_value.as_ref().map(|d| json!(rational_str(d))).unwrap_or(Value::Null),
                        );
                        row.insert("members".into(), json!(c.members.len()));
                        Value::Object(row)
                    })
                    .collect(),
            ),
        );
        print_json(&Value::Object(m));
    } else {
        println!("h: {}", inv.h);
        println!("complete: {}", inv.complete);
        for c in &inv.classes {
            let d = c.d_value.as_ref().map(rational_str).unwrap_or_else(|| "?".into());
            println!("d{} = {}", vector_str(&c.representative), d);
        }
    }
    Ok(())
}

fn blowdown_cmd(args: &BlowdownArgs) -> Result<(), String> {
    let g = load_graph(&args.graph)?;
    let form = match &args.ball {
        None => None,
        Some(path) => Some(EnhancedForm::parse(&load(path)?).map_err(|e| format!("{path}: {e}"))?),
    };
    let rep = blowdown_report(&g, form.as_ref(), args.budget).map_err(|e| e.to_string())?;
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("h".into(), bigint_value(&rep.h));
        m.insert(
            "lspace".into(),
            json!(matches!(rep.lspace.conclusion, LSpaceConclusion::LSpace)),
        );
        m.insert("expected_t".into(), bigint_value(&rep.expected_t));
        m.insert("d_zero_classes".into(), json!(rep.d_zero_classes.len()));
        m.insert("discrepancy".into(), json!(rep.discrepancy));
        m.insert(
            "extenders".into(),
            match &rep.extension {
                None => Value::Null,
                Some(e) => json!(e.extenders),
            },
        );
        print_json(&Value::Object(m));
    } else {
        println!("h: {}", rep.h);
        println!(
            "{}",
            lspace_line(rep.lspace.good_count, &rep.lspace.h, rep.lspace.conclusion)
        );
        println!("expected t: {}", rep.expected_t);
        println!("d = 0 classes: {}", rep.d_zero_classes.len());
        println!("discrepancy: {}", rep.discrepancy);
        if let Some(e) = &rep.extension {
            println!("extenders: {}", e.extenders.len());
            for v in &e.extenders {
                println!("  {}", vector_str(v));
            }
        }
    }
    Ok(())
}

fn knot_det(args: &PdArgs) -> Result<(), String> {
    let d = load_pd(&args.pd)?;
    let det = knot_determinant(&d).map_err(|e| e.to_string())?;
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("det".into(), bigint_value(&det));
        print_json(&Value::Object(m));
    } else {
        println!("det: {det}");
    }
    Ok(())
}

fn knot_jones(args: &PdArgs) -> Result<(), String> {
    let d = load_pd(&args.pd)?;
    let j = jones(&d).map_err(|e| e.to_string())?;
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert(
            "jones".into(),
            Value::Object(
                j.to_json_map()
                    .into_iter()
                    .map(|(k, v)| (k, json!(v.parse::<i64>().unwrap())))
                    .collect(),
            ),
        );
        print_json(&Value::Object(m));
    } else {
        println!("jones: {j}");
    }
    Ok(())
}

fn knot_signature(args: &PdArgs) -> Result<(), String> {
    let d = load_pd(&args.pd)?;
    let sigma = signature_gl(&d).map_err(|e| e.to_string())?;
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("signature".into(), json!(sigma));
        print_json(&Value::Object(m));
    } else {
        println!("signature: {sigma}");
    }
    Ok(())
}

fn knot_qa(args: &QaArgs) -> Result<(), String> {
    let d = load_pd(&args.pd)?;
    let cert = qa_certificate(&d, args.depth).map_err(|e| e.to_string())?;
    match cert {
        None => {
            if args.json {
                let mut m = Map::new();
                m.insert("schema".into(), json!(1));
                m.insert("found".into(), json!(false));
                m.insert("depth".into(), json!(args.depth));
                print_json(&Value::Object(m));
            } else {
                println!("certificate: none within depth {}", args.depth);
            }
        }
        Some(cert) => {
            let ok = validate_certificate(&d, &cert).map_err(|e| e.to_string())?;
            let root = match &cert {
                QACertificate::Resolution { crossing, determinant, det_zero, det_one, .. } => {
                    Some((*crossing, determinant.clone(), det_zero.clone(), det_one.clone()))
                }
                _ => None,
            };
            if args.json {
                let mut m = Map::new();
                m.insert("schema".into(), json!(1));
                m.insert("found".into(), json!(true));
                m.insert("depth".into(), json!(args.depth));
                m.insert("revalidates".into(), json!(ok));
                m.insert(
                    "root".into(),
                    match &root {
                        None => Value::Null,
                        Some((crossing, det, d0, d1)) => {
                            let mut r = Map::new();
                            r.insert("crossing".into(), json!(crossing));
                            r.insert("det".into(), bigint_value(det));
                            r.insert("det_zero".into(), bigint_value(d0));
                            r.insert("det_one".into(), bigint_value(d1));
                            Value::Object(r)
                        }
                    },
                );
                print_json(&Value::Object(m));
            } else {
                match root {
                    Some((crossing, det, d0, d1)) => {
                        println!("certificate: found");
                        println!("root: crossing {crossing}, det {det} = {d0} + {d1}");
                    }
                    None => println!("certificate: leaf (already alternating or trivial)"),
                }
                println!("revalidates: {ok}");
            }
        }
    }
    Ok(())
}

fn kh_table_with_sigma(args: &KhArgs) -> Result<(KhTable, i64), String> {
    let table = load_kh(&args.kh)?;
    let diagram = match &args.pd {
        None => None,
        Some(path) => Some(load_pd(path)?),
    };
    let sigma = thin_sigma(&table, diagram.as_ref()).map_err(|e| e.to_string())?;
    Ok((table, sigma))
}

fn kh_thin(args: &KhArgs) -> Result<(), String> {
    let (table, sigma) = kh_table_with_sigma(args)?;
    let thin = is_hthin(&table, sigma);
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("knot".into(), json!(table.knot()));
        m.insert("sigma".into(), json!(sigma));
        m.insert("hthin".into(), json!(thin));
        print_json(&Value::Object(m));
    } else {
        println!("H-thin: {thin} (sigma {sigma})");
    }
    Ok(())
}

fn kh_z2(args: &KhArgs) -> Result<(), String> {
    let (table, sigma) = kh_table_with_sigma(args)?;
    let thin = is_hthin(&table, sigma);
    let bound = reduced_rank_bound(table.jones());
    let verdict = z2_lspace_verdict(table.det(), &bound, thin).map_err(|e| e.to_string())?;
    if args.json {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("knot".into(), json!(table.knot()));
        m.insert("det".into(), bigint_value(table.det()));
        m.insert("rank_bound".into(), bigint_value(&bound));
        m.insert("hthin".into(), json!(thin));
        m.insert("confirmed".into(), json!(matches!(verdict, Z2Verdict::Confirmed)));
        print_json(&Value::Object(m));
    } else {
        match verdict {
            Z2Verdict::Confirmed => {
                println!("Z2 L-space: confirmed ({} = {})", table.det(), bound)
            }
            Z2Verdict::Inconclusive => println!(
                "Z2 L-space: inconclusive (det {}, bound {}, thin {})",
                table.det(),
                bound,
                thin
            ),
        }
    }
    Ok(())
}

fn kh_mirror(args: &KhArgs) -> Result<(), String> {
    let table = load_kh(&args.kh)?;
    let m = mirror_table(&table);
    if args.json {
        let mut top = Map::new();
        top.insert("schema".into(), json!(1));
        top.insert("knot".into(), json!(m.knot()));
        top.insert("sigma".into(), json!(m.sigma()));
        top.insert(
            "groups".into(),
            Value::Array(
                m.groups()
                    .iter()
                    .map(|g| {
                        let mut row = Map::new();
                        row.insert("i".into(), json!(g.i));
                        row.insert("j".into(), json!(g.j));
                        row.insert("rank".into(), json!(g.rank));
                        row.insert("torsion".into(), json!(g.torsion));
                        Value::Object(row)
                    })
                    .collect(),
            ),
        );
        print_json(&Value::Object(top));
    } else {
        println!("mirror of {} (sigma {}):", table.knot(), m.sigma());
        for g in m.groups() {
            let torsion = if g.torsion.is_empty() {
                String::new()
            } else {
                format!(
                    ", torsion {}",
                    g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
                )
            };
            println!("  ({}, {}): rank {}{}", g.i, g.j, g.rank, torsion);
        }
    }
    Ok(())
}

fn report_paper(args: &PaperArgs) -> Result<(), String> {
    let cases = report::paper_cases(args.budget, args.depth)?;
    if args.json {
        print_json(&report::render_json(&cases));
    } else {
        print!("{}", report::render_text(&cases));
    }
    Ok(())
}

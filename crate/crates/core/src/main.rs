use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use zw::normalform::{bent_nf_to_term, nf_of_state, nf_to_term, normalize, BentNormalForm};
use zw::qudit::{self, QParams};
use zw::rules::{axiom_instances, check_rule, derived_instances, load_catalogue, Bounds, RuleReport};
use zw::semantics::{interpret, MapJson, SparseMap};
use zw::{BigInt, GaussianRational, Scalar, Term, Zn, ZwError};

#[derive(Parser, Debug)]
#[command(name = "zw", about = "Evaluate, normalise and check ZW-calculus diagrams")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Coefficient ring: Z, Z/<n> (2 <= n <= 16), Qi or C.
    #[arg(long, global = true, default_value = "Z")]
    ring: String,

    /// Dimension of the wires.
    #[arg(long, global = true, default_value_t = 2)]
    d: usize,

    /// Comparison tolerance for the approximate complex ring.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    #[arg(long, global = true, default_value_t = 4)]
    max_arity: usize,

    #[arg(long, global = true, default_value_t = 3)]
    max_nm: usize,

    /// Comma-separated label samples for rule schemas.
    #[arg(long, global = true, default_value = "0,1,-1,2,-2,i,1+i")]
    labels: String,

    /// Write JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Interpret a term as a sparse map.
    Eval { term: String },
    /// Normal form of a term and the diagram rebuilt from it.
    Normalize { term: String },
    /// Check the axiom catalogue, or the records of a catalogue file.
    CheckAxioms {
        #[arg(long)]
        catalogue: Option<String>,
    },
    /// Check the derived rules and lemma schemas.
    CheckDerived,
    /// Check the qudit laws for `--d`.
    CheckQudit,
    /// Build a diagram for a JSON state (`-` reads stdin).
    Universal { state: String },
    /// Compare normalisation with direct interpretation.
    Roundtrip { term: String },
}

struct Outcome {
    json: serde_json::Value,
    table: Vec<String>,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.ring.as_str() {
        "Z" => run::<BigInt>(&cli),
        "Qi" => run::<GaussianRational>(&cli),
        "C" => run::<Complex64>(&cli),
        r => match r.strip_prefix("Z/").and_then(|n| n.parse::<u64>().ok()) {
            Some(2) => run::<Zn<2>>(&cli),
            Some(3) => run::<Zn<3>>(&cli),
            Some(4) => run::<Zn<4>>(&cli),
            Some(5) => run::<Zn<5>>(&cli),
            Some(6) => run::<Zn<6>>(&cli),
            Some(7) => run::<Zn<7>>(&cli),
            Some(8) => run::<Zn<8>>(&cli),
            Some(9) => run::<Zn<9>>(&cli),
            Some(10) => run::<Zn<10>>(&cli),
            Some(11) => run::<Zn<11>>(&cli),
            Some(12) => run::<Zn<12>>(&cli),
            Some(13) => run::<Zn<13>>(&cli),
            Some(14) => run::<Zn<14>>(&cli),
            Some(15) => run::<Zn<15>>(&cli),
            Some(16) => run::<Zn<16>>(&cli),
            _ => Err(ZwError::Input(format!("unknown ring `{r}`; use Z, Z/<2..16>, Qi or C"))),
        },
    };
    match result {
        Ok(o) => {
            for line in &o.table {
                eprintln!("{line}");
            }
            let text = serde_json::to_string_pretty(&o.json).expect("serialisable");
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text + "\n").map_err(|e| e.to_string()),
                None => {
                    println!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_input(arg: &str) -> Result<String, ZwError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| ZwError::Input(e.to_string()))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| ZwError::Input(format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn bounds(cli: &Cli) -> Bounds {
    Bounds {
        max_spider_arity: cli.max_arity,
        max_nm: cli.max_nm,
        label_samples: cli.labels.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
    }
}

fn is_complex<S: Scalar>() -> bool {
    !S::descriptor().is_exact()
}

fn summarize(mut reports: Vec<RuleReport>) -> Outcome {
    reports.sort_by(|a, b| (&a.name, &a.params).cmp(&(&b.name, &b.params)));
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    let json = json!({
        "total": reports.len(),
        "passed": reports.len() - failed.len(),
        "failed": failed.iter().map(|r| json!({
            "name": r.name, "params": r.params, "witness": r.witness, "error": r.error
        })).collect::<Vec<_>>(),
    });
    let mut table: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
    table.push(format!("{} of {} checks passed", reports.len() - failed.len(), reports.len()));
    Outcome { json, table, ok: failed.is_empty() }
}

fn run<S: Scalar>(cli: &Cli) -> Result<Outcome, ZwError> {
    let tol = if is_complex::<S>() { cli.tol } else { 0.0 };
    match &cli.verb {
        Verb::Eval { term } => {
            let t = Term::<S>::parse(&read_input(term)?)?;
            let m = interpret(&t, cli.d)?;
            Ok(Outcome { json: serde_json::to_value(m.to_json()).expect("json"), table: vec![], ok: true })
        }
        Verb::Normalize { term } => {
            let t = Term::<S>::parse(&read_input(term)?)?;
            let b = if is_complex::<S>() {
                BentNormalForm::of_map(&interpret(&t, cli.d)?)?
            } else {
                if cli.d != 2 {
                    return Err(ZwError::Unsupported { op: "normalize", ring: format!("d={}", cli.d) });
                }
                normalize(&t)?
            };
            let rebuilt = if cli.d == 2 { Some(bent_nf_to_term(&b)?.render()) } else { None };
            let json = json!({ "inputs": b.n_in, "outputs": b.n_out, "nf": b.nf.to_json(), "term": rebuilt });
            Ok(Outcome { json, table: vec![], ok: true })
        }
        Verb::CheckAxioms { catalogue } => {
            let instances = match catalogue {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| ZwError::Input(format!("{path}: {e}")))?;
                    load_catalogue::<S>(&text, &bounds(cli).labels::<S>())?
                }
                None => axiom_instances::<S>(&bounds(cli))?,
            };
            Ok(summarize(instances.iter().map(check_rule).collect()))
        }
        Verb::CheckDerived => Ok(summarize(derived_instances::<S>(&bounds(cli))?.iter().map(check_rule).collect())),
        Verb::CheckQudit => {
            if !is_complex::<S>() {
                return Err(ZwError::Unsupported { op: "check-qudit", ring: S::descriptor().to_string() });
            }
            let p = QParams::new(cli.d, cli.tol)?;
            let mut reports = qudit::check_structure(&p)?;
            reports.extend(qudit::check_bialgebra(&p)?);
            reports.push(qudit::check_commutation(&p)?);
            for n in 0..cli.d {
                for j in 0..=n {
                    for k in 0..=n {
                        let ok = qudit::check_q_vandermonde(&p, n, j, k)?;
                        reports.push(RuleReport {
                            name: "q-vandermonde".into(),
                            params: format!("d={},n={n},j={j},k={k}", cli.d),
                            pass: ok,
                            witness: (!ok).then(|| "sides differ".into()),
                            error: None,
                        });
                    }
                }
            }
            reports.push(qudit::check_bosonic(8, cli.tol)?);
            Ok(summarize(reports))
        }
        Verb::Universal { state } => {
            let j: MapJson = serde_json::from_str(&read_input(state)?).map_err(|e| ZwError::Input(e.to_string()))?;
            let m = SparseMap::<S>::from_json(&j)?;
            if m.n_in != 0 {
                return Err(ZwError::Input("universal expects a state (\"in\": 0)".into()));
            }
            if is_complex::<S>() {
                // approximate ring: always the qudit construction
                let c = SparseMap::<Complex64>::from_json(&j)?;
                let p = QParams::new(c.d, cli.tol)?;
                let u = qudit::qudit_universal_nf(&c, &p)?;
                let back = qudit::interpret(&u.term, &p)?;
                let ok = back.equals(&c, 10.0 * cli.tol);
                let json = json!({ "term": u.term.render(), "nf": u.nf.to_json(), "k": u.k, "roundtrip": ok });
                return Ok(Outcome {
                    json,
                    table: vec![format!("round trip: {}", if ok { "pass" } else { "FAIL" })],
                    ok,
                });
            }
            if m.d != 2 {
                return Err(ZwError::Unsupported {
                    op: "universal",
                    ring: format!("{} at d={}", S::descriptor(), m.d),
                });
            }
            let nf = nf_of_state(&m)?;
            let t = nf_to_term(&nf)?;
            let ok = interpret(&t, 2)?.equals(&m, tol);
            let json = json!({ "term": t.render(), "nf": nf.to_json(), "roundtrip": ok });
            Ok(Outcome { json, table: vec![format!("round trip: {}", if ok { "pass" } else { "FAIL" })], ok })
        }
        Verb::Roundtrip { term } => {
            let t = Term::<S>::parse(&read_input(term)?)?;
            let direct = interpret(&t, 2)?;
            let normal = normalize(&t)?;
            let ok = normal.map()?.equals(&direct, tol) && normal.nf == nf_of_state(&direct.bend())?;
            let json = json!({ "term": t.render(), "nf": normal.nf.to_json(), "equal": ok });
            Ok(Outcome { json, table: vec![format!("roundtrip: {}", if ok { "pass" } else { "FAIL" })], ok })
        }
    }
}

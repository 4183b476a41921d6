use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use treeshift::cpc::CpcDoc;
use treeshift::decision::{count_blocks, enumerate_blocks, essential_core, extend_pattern, is_empty};
use treeshift::entropy::{entropy_estimate_with, DEFAULT_MAX_HEIGHT};
use treeshift::mixing::{check_property, connect_through, hierarchy_report, Budgets, Property, Status};
use treeshift::pattern::PatternDoc;
use treeshift::periodic::{check_periodic, search_periodic, sibling_distinct_certificate, PeriodicSearch};
use treeshift::shift::{apply_block_map, image_blocks, recode_to_vertex, ShiftDoc};
use treeshift::{fixtures, Alphabet, CompletePrefixCode, Error, Pattern, TreeShift};

const EXIT_VALIDATION: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "tsd", version, about = "Tree-shift decision tools")]
struct Cli {
    /// Exit with status 2 when a check ends UNKNOWN.
    #[arg(long, global = true)]
    strict: bool,
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    #[arg(long, default_value_t = 4)]
    height: usize,
    #[arg(long, default_value_t = 16)]
    cpc_leaves: usize,
    #[arg(long, default_value_t = 31)]
    pattern_nodes: usize,
    /// Allow the gluing code to depend on the block height.
    #[arg(long)]
    per_n: bool,
    #[arg(long, default_value_t = 1024)]
    closure_cap: usize,
}

impl BudgetArgs {
    fn budgets(&self) -> Budgets {
        Budgets {
            height: self.height,
            cpc_leaves: self.cpc_leaves,
            pattern_nodes: self.pattern_nodes,
            per_n: self.per_n,
            closure_cap: self.closure_cap,
        }
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Parse a shift, pattern or code file and print its canonical form.
    Validate {
        file: PathBuf,
        /// Print only the canonical document.
        #[arg(long)]
        emit: bool,
    },
    /// Decide emptiness.
    Empty {
        shift: PathBuf,
        #[arg(long, default_value_t = 2)]
        witness_height: usize,
    },
    /// Essential core with its deletion trace.
    Core { shift: PathBuf },
    /// Count (and optionally list) the blocks of one height.
    Blocks {
        shift: PathBuf,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// Extend a pattern to a block of the given height.
    Extend {
        shift: PathBuf,
        pattern: PathBuf,
        #[arg(long)]
        height: usize,
    },
    /// Entropy estimates as CSV rows followed by a JSON summary.
    Entropy {
        shift: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_HEIGHT)]
        max_height: usize,
        #[arg(long, default_value_t = 0)]
        exact_until: usize,
    },
    /// Connect u and v through an explicit complete prefix code.
    Glue { shift: PathBuf, u: PathBuf, v: PathBuf, code: PathBuf },
    /// Check one mixing property within budgets.
    Check {
        shift: PathBuf,
        #[arg(long)]
        property: String,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Run every property check and report implication violations.
    Hierarchy {
        shift: PathBuf,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Search periodic points over codes with at most K leaves.
    Periodic {
        shift: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_leaves: usize,
    },
    /// Sibling-distinctness aperiodicity certificate.
    AperiodicCert { shift: PathBuf },
    /// Higher-block recoding into a vertex shift.
    Recode { shift: PathBuf },
    /// Image blocks of a sofic image, or the image of one block.
    Factor {
        shift: PathBuf,
        #[arg(long, default_value_t = 2)]
        height: usize,
        /// Block of the base shift to map.
        #[arg(long)]
        block: Option<PathBuf>,
    },
    /// Random one-step shift document.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 3)]
        symbols: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
    },
}

struct Outcome {
    payload: Value,
    fingerprint: Option<String>,
    bounds: Value,
    unknown: bool,
    preamble: Option<String>,
}

impl Outcome {
    fn new(payload: Value) -> Self {
        Outcome { payload, fingerprint: None, bounds: Value::Null, unknown: false, preamble: None }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_shift(path: &Path) -> Result<TreeShift, Error> {
    TreeShift::parse_str(&read(path)?)
}

fn load_pattern(path: &Path, alphabet: &Alphabet) -> Result<Pattern, Error> {
    let doc: PatternDoc = serde_json::from_str(&read(path)?)?;
    Pattern::from_doc(&doc, alphabet)
}

fn load_code(path: &Path) -> Result<CompletePrefixCode, Error> {
    let doc: CpcDoc = serde_json::from_str(&read(path)?)?;
    CompletePrefixCode::from_doc(&doc)
}

fn with_shift(x: &TreeShift, payload: Value) -> Outcome {
    Outcome { fingerprint: Some(x.fingerprint()), ..Outcome::new(payload) }
}

fn budgets_json(b: &Budgets) -> Value {
    json!({
        "height": b.height,
        "cpc_leaves": b.cpc_leaves,
        "pattern_nodes": b.pattern_nodes,
        "per_n": b.per_n,
        "closure_cap": b.closure_cap,
    })
}

fn validate(file: &Path, emit: bool) -> Result<Outcome, Error> {
    let text = read(file)?;
    let value: Value = serde_json::from_str(&text)?;
    let (kind, canonical) = if value.get("kind").is_some() {
        let doc: ShiftDoc = serde_json::from_value(value)?;
        let x = TreeShift::from_doc(&doc)?;
        ("shift", serde_json::to_value(x.to_doc())?)
    } else if value.get("code").is_some() {
        let doc: CpcDoc = serde_json::from_value(value)?;
        ("code", serde_json::to_value(CompletePrefixCode::from_doc(&doc)?.to_doc())?)
    } else {
        let doc: PatternDoc = serde_json::from_value(value)?;
        let mut names: Vec<String> = doc.labels.values().cloned().collect();
        names.sort();
        names.dedup();
        let alphabet = Alphabet::new(names)?;
        ("pattern", serde_json::to_value(Pattern::from_doc(&doc, &alphabet)?.to_doc(&alphabet))?)
    };
    let mut out = Outcome::new(json!({ "type": kind, "canonical": canonical }));
    if emit {
        out.preamble = Some(serde_json::to_string(&canonical)?);
        out.payload = Value::Null;
    }
    Ok(out)
}

fn verdict_json(v: &treeshift::mixing::Verdict, alphabet: &Alphabet, strict_unknown: &mut bool) -> Value {
    if v.status == Status::Unknown {
        *strict_unknown = true;
    }
    v.to_json(alphabet)
}

fn run(verb: &Verb) -> Result<Outcome, Error> {
    Ok(match verb {
        Verb::Validate { file, emit } => validate(file, *emit)?,
        Verb::Empty { shift, witness_height } => {
            let x = load_shift(shift)?;
            let e = is_empty(&x, *witness_height)?;
            let core = e.core.as_ref().map(|c| c.names());
            with_shift(
                &x,
                json!({
                    "empty": e.empty,
                    "core": core,
                    "witness": e.witness.map(|b| b.render(x.alphabet())),
                }),
            )
        }
        Verb::Core { shift } => {
            let x = load_shift(shift)?;
            let c = essential_core(&x)?;
            let trace: Vec<Value> = c
                .trace
                .iter()
                .map(|d| json!({ "symbol": c.alphabet.name(d.symbol), "round": d.round, "direction": d.direction }))
                .collect();
            let tuples: Vec<Vec<&str>> =
                c.tuples.iter().map(|t| t.iter().map(|&s| c.alphabet.name(s)).collect()).collect();
            let projected: Vec<&str> = c.projected.iter().map(|s| x.alphabet().name(s)).collect();
            with_shift(
                &x,
                json!({
                    "core": c.names(),
                    "recoded": c.recoded,
                    "projected": projected,
                    "deletions": trace,
                    "tuples": tuples,
                }),
            )
        }
        Verb::Blocks { shift, height, list, limit } => {
            let x = load_shift(shift)?;
            let c = count_blocks(&x, *height)?;
            let per_root: serde_json::Map<String, Value> = c
                .per_root
                .iter()
                .enumerate()
                .map(|(s, n)| (x.alphabet().name(s).to_string(), Value::from(n.to_string())))
                .collect();
            let mut payload = json!({ "height": height, "total": c.total.to_string(), "per_root": per_root });
            if *list {
                let blocks: Vec<String> = enumerate_blocks(&x, *height, *limit)?.iter().map(|b| b.render(x.alphabet())).collect();
                payload["blocks"] = json!(blocks);
            }
            with_shift(&x, payload)
        }
        Verb::Extend { shift, pattern, height } => {
            let x = load_shift(shift)?;
            let u = load_pattern(pattern, x.alphabet())?;
            let b = extend_pattern(&x, &u, *height)?;
            with_shift(&x, json!({ "height": height, "block": b.render(x.alphabet()), "labels": b.to_pattern().to_doc(x.alphabet()) }))
        }
        Verb::Entropy { shift, max_height, exact_until } => {
            let x = load_shift(shift)?;
            let e = entropy_estimate_with(&x, *max_height, *exact_until)?;
            let mut csv = String::from("n,L_n,e_n");
            for r in &e.rows {
                csv.push_str(&format!("\n{},{},{}", r.n, r.log_count, r.estimate));
            }
            let exact: Vec<Value> = e.rows.iter().filter_map(|r| r.exact.as_ref().map(|c| json!({ "n": r.n, "count": c }))).collect();
            let mut out = with_shift(
                &x,
                json!({ "estimate": e.estimate, "tolerance_hint": e.tolerance_hint, "max_height": max_height, "exact": exact }),
            );
            out.preamble = Some(csv);
            out.bounds = json!({ "max_height": max_height, "exact_until": exact_until });
            out
        }
        Verb::Glue { shift, u, v, code } => {
            let x = load_shift(shift)?;
            let (u, v, p) = (load_pattern(u, x.alphabet())?, load_pattern(v, x.alphabet())?, load_code(code)?);
            let payload = match connect_through(&x, &u, &v, &p) {
                Ok(t) => json!({ "connected": true, "pattern": t.to_doc(x.alphabet()), "rendered": t.render(x.alphabet()) }),
                Err(Error::NoFill) => json!({ "connected": false }),
                Err(e) => return Err(e),
            };
            with_shift(&x, payload)
        }
        Verb::Check { shift, property, budgets } => {
            let x = load_shift(shift)?;
            let p = Property::parse(property)?;
            let b = budgets.budgets();
            let v = check_property(&x, p, &b)?;
            let mut unknown = false;
            let payload = verdict_json(&v, x.alphabet(), &mut unknown);
            Outcome { unknown, bounds: budgets_json(&b), ..with_shift(&x, payload) }
        }
        Verb::Hierarchy { shift, budgets } => {
            let x = load_shift(shift)?;
            let b = budgets.budgets();
            let r = hierarchy_report(&x, &b)?;
            let mut unknown = false;
            let verdicts: Vec<Value> = r.verdicts.iter().map(|v| verdict_json(v, x.alphabet(), &mut unknown)).collect();
            let payload = json!({ "finite_type": r.finite_type, "verdicts": verdicts, "violations": r.violations });
            Outcome { unknown, bounds: budgets_json(&b), ..with_shift(&x, payload) }
        }
        Verb::Periodic { shift, max_leaves } => {
            let x = load_shift(shift)?;
            let payload = match search_periodic(&x, *max_leaves)? {
                PeriodicSearch::Found { spec, codes_tried } => {
                    let sound = check_periodic(&x, &spec)?;
                    json!({ "found": true, "codes_tried": codes_tried, "spec": spec.to_json(x.alphabet()), "replay_ok": sound })
                }
                PeriodicSearch::NoneUpToBound { codes_tried } => json!({ "found": false, "codes_tried": codes_tried }),
            };
            Outcome { bounds: json!({ "max_leaves": max_leaves }), ..with_shift(&x, payload) }
        }
        Verb::AperiodicCert { shift } => {
            let x = load_shift(shift)?;
            let c = sibling_distinct_certificate(&x)?;
            with_shift(
                &x,
                json!({ "aperiodic": c.holds, "directions": c.directions, "extension": c.extension, "trace": c.trace }),
            )
        }
        Verb::Recode { shift } => {
            let x = load_shift(shift)?;
            let (vertex, code) = recode_to_vertex(&x)?;
            let recoded = TreeShift::Vertex(vertex);
            with_shift(
                &x,
                json!({
                    "window": code.window(),
                    "symbols": recoded.alphabet().names(),
                    "vertex": recoded.to_doc(),
                    "recoded_fingerprint": recoded.fingerprint(),
                }),
            )
        }
        Verb::Factor { shift, height, block } => {
            let x = load_shift(shift)?;
            let TreeShift::SoficImage(code) = &x else {
                return Err(Error::Schema("factor needs a sofic_image document".into()));
            };
            let payload = match block {
                Some(path) => {
                    let p = load_pattern(path, code.input().alphabet())?;
                    let b = p.to_block().ok_or_else(|| Error::Schema("the block file must hold a full block".into()))?;
                    let img = apply_block_map(code, &b)?;
                    json!({ "input": b.render(code.input().alphabet()), "image": img.render(code.output()) })
                }
                None => {
                    let blocks: Vec<String> = image_blocks(code, *height, 10_000)?.iter().map(|b| b.render(code.output())).collect();
                    json!({ "height": height, "count": blocks.len(), "blocks": blocks })
                }
            };
            with_shift(&x, payload)
        }
        Verb::Generate { seed, arity, symbols, density } => {
            let x = fixtures::random_one_step(*arity, *symbols, *density, *seed);
            let mut out = with_shift(&x, serde_json::to_value(x.to_doc())?);
            out.bounds = json!({ "seed": seed });
            out
        }
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    match run(&cli.verb) {
        Ok(out) => {
            if let Some(pre) = &out.preamble {
                println!("{pre}");
            }
            if !out.payload.is_null() {
                let threads = std::env::var("TSD_THREADS").ok().and_then(|t| t.parse::<usize>().ok());
                let report = json!({
                    "command": argv[1..],
                    "fingerprint": out.fingerprint,
                    "result": out.payload,
                    "bounds": out.bounds,
                    "timing_ms": start.elapsed().as_secs_f64() * 1000.0,
                    // checks run sequentially; the requested cap is echoed
                    "workers": 1,
                    "threads_requested": threads,
                });
                let text = if cli.pretty { serde_json::to_string_pretty(&report) } else { serde_json::to_string(&report) };
                println!("{}", text.expect("reports serialize"));
            }
            if out.unknown && cli.strict {
                ExitCode::from(EXIT_UNKNOWN)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

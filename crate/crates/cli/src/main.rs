use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cws_core::clique::{build_clique_graph, search, Budget};
use cws_core::cws::{check_code, classical_rep, distance};
use cws_core::format::{parse_code, parse_spec, write_code, write_spec};
use cws_core::oracle::kl_check;
use cws_core::structure::{gcd_pattern_scan, group_extension, scalar_closure};
use cws_core::{Error, Limits, PauliOperator, StabilizerSpec};

mod manifest;

use manifest::Manifest;

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const INPUT: u8 = 2;
const DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "cws", version, about = "Codeword-stabilized qudit codes")]
struct Cli {
    /// Structured output on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Write a run manifest (input hashes, arguments, result) to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClosureMode {
    Scalar,
    Group,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dimacs,
}

#[derive(clap::Args, Clone)]
struct BudgetArgs {
    /// Branch-and-bound node limit.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Do not fix the zero codeword in the clique.
    #[arg(long)]
    no_anchor: bool,
    /// Parallel workers; results are only reproducible with 1.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.max_nodes,
            max_time: self.time_limit.map(Duration::from_secs_f64),
            workers: self.workers.max(1),
            anchor: !self.no_anchor,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that a spec file describes a stabilizer state.
    Validate { spec: PathBuf },
    /// Print the syndrome of an error literal such as `Z0 X1^2`.
    Syndrome {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        error: String,
    },
    /// Check the detection conditions of a code file.
    Verify {
        code: PathBuf,
        /// Defaults to the file's `delta`.
        #[arg(long)]
        delta: Option<usize>,
        /// Also run the statevector check and compare verdicts.
        #[arg(long)]
        oracle: bool,
    },
    /// Largest code found by clique search.
    Search {
        spec: PathBuf,
        #[arg(long)]
        delta: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Code file to write; a manifest goes next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall time in the manifest.
        #[arg(long)]
        record_time: bool,
    },
    /// Low-weight errors whose syndrome shares a factor with d.
    ScanGcd {
        spec: PathBuf,
        #[arg(long)]
        delta: usize,
    },
    /// Re-generate the group so low-weight elements come first.
    Canonicalize {
        spec: PathBuf,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the clique graph for an external solver.
    ExportGraph {
        spec: PathBuf,
        #[arg(long)]
        delta: usize,
        #[arg(long, value_enum, default_value = "dimacs")]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Close a code under scalar multiples of its second codeword, or extend
    /// an additive code by its last codeword.
    Closure {
        code: PathBuf,
        #[arg(long, value_enum)]
        mode: ClosureMode,
        #[arg(long)]
        delta: Option<usize>,
    },
    /// Search every spec file given, one result line each.
    Sweep {
        specs: Vec<PathBuf>,
        #[arg(long)]
        delta: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Largest distance the code file achieves.
    Distance { code: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) => DISAGREE,
            Error::NotRealizable(_) => NEGATIVE,
            _ => INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(u8, Value, String), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_spec(path: &Path) -> Result<StabilizerSpec, Failure> {
    parse_spec(&read(path)?).map_err(|e| Failure {
        code: INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn verdict(ok: bool) -> u8 {
    if ok {
        OK
    } else {
        NEGATIVE
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli, limits: &Limits) -> CmdResult {
    match &cli.command {
        Command::Validate { spec } => {
            let spec = load_spec(spec)?;
            let r = spec.validate(limits)?;
            let mut text = format!(
                "commuting: {}\ngroup order: {} (expected {})\nphase clean: {}\nm range: {} (n={}, m={})\n",
                r.commuting,
                r.group_order,
                r.expected_order,
                r.phase_clean,
                r.m_range_ok,
                spec.n(),
                spec.m()
            );
            if let Some((i, j)) = r.noncommuting_pair {
                text += &format!("non-commuting generators {i} and {j}\n");
            }
            if let Some(a) = &r.phase_witness {
                text += &format!("identity with phase from exponents {}\n", join(a));
            }
            text += if r.is_valid() { "valid\n" } else { "invalid\n" };
            Ok((verdict(r.is_valid()), json!({ "valid": r.is_valid(), "report": r }), text))
        }
        Command::Syndrome { spec, error } => {
            let spec = load_spec(spec)?;
            let e = PauliOperator::parse_literal(spec.d(), spec.n(), error)?;
            let s = classical_rep(&spec, &e)?;
            Ok((OK, json!({ "error": e.to_string(), "syndrome": s.entries() }), format!("{s}\n")))
        }
        Command::Verify { code, delta, oracle } => {
            let code = parse_code(&read(code)?)?;
            let delta = delta.unwrap_or(code.delta);
            let v = check_code(&code, delta, limits)?;
            let mut text = format!("K = {}, delta = {delta}\n", code.k());
            for (i, j) in &v.duplicates {
                text += &format!("duplicate codewords {i} and {j}\n");
            }
            for w in &v.classical_violations {
                text += &format!(
                    "codewords {} and {}: difference {} is the syndrome of {} (weight {})\n",
                    w.i,
                    w.j,
                    w.difference,
                    w.error,
                    w.error.weight()
                );
            }
            for w in &v.degeneracy_violations {
                text += &format!(
                    "codeword {}: stabilizer element {} picks up phase q^{}\n",
                    w.codeword, w.error, w.phase
                );
            }
            let mut out = json!({ "ok": v.ok, "delta": delta, "verdict": v });
            if *oracle {
                let r = kl_check(&code, delta, limits)?;
                text += &format!(
                    "oracle: {} ({} errors, degenerate: {})\n",
                    if r.ok { "pass" } else { "fail" },
                    r.errors_checked,
                    r.degenerate
                );
                out["oracle"] = json!(r);
                if r.ok != v.ok {
                    text += "classical checker and oracle disagree\n";
                    return Ok((DISAGREE, out, text));
                }
            }
            text += if v.ok { "ok\n" } else { "fail\n" };
            Ok((verdict(v.ok), out, text))
        }
        Command::Search {
            spec: path,
            delta,
            budget,
            out,
            record_time,
        } => {
            let start = Instant::now();
            let spec = load_spec(path)?;
            let outcome = search(&spec, *delta, &budget.budget(), limits)?;
            let code_text = write_code(&outcome.code);
            let summary = json!({
                "k": outcome.code.k(),
                "optimal": outcome.result.optimal,
                "nodes": outcome.result.nodes_explored,
                "vertices": outcome.vertex_count,
                "edges": outcome.edge_count,
                "canonical_rank": outcome.canonical.canonical_rank,
                "oracle": outcome.oracle.as_ref().map(|r| r.ok),
                "codewords": outcome.code.codewords.iter().map(|c| c.entries().to_vec()).collect::<Vec<_>>(),
            });
            let mut text = format!(
                "K = {} ({}), {} nodes, {} vertices\n",
                outcome.code.k(),
                if outcome.result.optimal { "optimal" } else { "budget exhausted" },
                outcome.result.nodes_explored,
                outcome.vertex_count
            );
            if let Some(out) = out {
                write(out, &code_text)?;
                let m = Manifest::new(
                    "search",
                    json!({
                        "delta": delta,
                        "max_nodes": budget.max_nodes,
                        "time_limit": budget.time_limit,
                        "anchor": !budget.no_anchor,
                        "workers": budget.workers,
                    }),
                    &[path.as_path()],
                    summary.clone(),
                )?
                .with_output(out, &code_text)
                .with_time(record_time.then(|| start.elapsed()));
                write(&manifest::path_for(out), &m.to_json())?;
                text += &format!("wrote {}\n", out.display());
            } else {
                text += &code_text;
            }
            Ok((OK, summary, text))
        }
        Command::ScanGcd { spec, delta } => {
            let spec = load_spec(spec)?;
            let ws = gcd_pattern_scan(&spec, *delta, limits)?;
            let mut text = String::new();
            for w in &ws {
                text += &format!(
                    "{}: syndrome {}, m = {}, vu_gcd = {}\n",
                    w.error, w.syndrome, w.m_value, w.vu_gcd
                );
            }
            text += &format!("{} witnesses\n", ws.len());
            Ok((OK, json!({ "witnesses": ws }), text))
        }
        Command::Canonicalize { spec, delta, out } => {
            let spec = load_spec(spec)?;
            let cf = spec.canonicalize(*delta, limits)?;
            let spec_text = write_spec(&cf.spec);
            let mut text = format!("canonical rank {}\n", cf.canonical_rank);
            for k in 0..cf.spec.m() {
                text += &format!("g{k} = {}\n", cf.spec.generator(k));
            }
            if let Some(out) = out {
                write(out, &spec_text)?;
            } else {
                text += &spec_text;
            }
            let transform: Vec<Vec<u32>> = (0..cf.transform.rows()).map(|r| cf.transform.row(r).to_vec()).collect();
            Ok((
                OK,
                json!({ "canonical_rank": cf.canonical_rank, "m": cf.spec.m(), "transform": transform, "spec": spec_text }),
                text,
            ))
        }
        Command::ExportGraph {
            spec,
            delta,
            format: GraphFormat::Dimacs,
            out,
        } => {
            let spec = load_spec(spec)?;
            let g = build_clique_graph(&spec, *delta, limits)?;
            let dimacs = g.to_dimacs();
            let summary = json!({ "vertices": g.len(), "edges": g.edge_count() });
            match out {
                Some(out) => {
                    write(out, &dimacs)?;
                    Ok((OK, summary, format!("wrote {}\n", out.display())))
                }
                None => Ok((OK, summary, dimacs)),
            }
        }
        Command::Closure { code, mode, delta } => {
            let code = parse_code(&read(code)?)?;
            let delta = delta.unwrap_or(code.delta);
            let k = code.k();
            let ext = match mode {
                ClosureMode::Scalar => {
                    if k != 2 {
                        return Err(Failure {
                            code: INPUT,
                            message: "scalar closure needs a two-codeword code".into(),
                        });
                    }
                    scalar_closure(&code.spec, &code.codewords[1], delta, limits)?
                }
                ClosureMode::Group => {
                    if k < 2 {
                        return Err(Failure {
                            code: INPUT,
                            message: "group mode needs the additive code plus a new last codeword".into(),
                        });
                    }
                    group_extension(&code.spec, &code.codewords[..k - 1], &code.codewords[k - 1], delta, limits)?
                }
            };
            let mut text = format!("closure has {} codewords\n", ext.codewords.len());
            if let Some(w) = &ext.witness {
                text += &format!(
                    "{}·c_new − c_{} = {} is the syndrome of {} (weight {})\n",
                    w.q,
                    w.j,
                    w.difference,
                    w.error,
                    w.error.weight()
                );
            }
            text += if ext.ok { "ok\n" } else { "fail\n" };
            Ok((verdict(ext.ok), json!(ext), text))
        }
        Command::Sweep { specs, delta, budget } => {
            let mut rows = Vec::new();
            let mut text = String::new();
            for path in specs {
                let spec = load_spec(path)?;
                let valid = spec.validate(limits)?.is_valid();
                if !valid {
                    text += &format!("{}: invalid spec\n", path.display());
                    rows.push(json!({ "spec": path, "valid": false }));
                    continue;
                }
                let o = search(&spec, *delta, &budget.budget(), limits)?;
                text += &format!(
                    "{}: K = {}{}\n",
                    path.display(),
                    o.code.k(),
                    if o.result.optimal { "" } else { " (budget exhausted)" }
                );
                rows.push(json!({ "spec": path, "valid": true, "k": o.code.k(), "optimal": o.result.optimal }));
            }
            Ok((OK, json!({ "results": rows }), text))
        }
        Command::Distance { code } => {
            let code = parse_code(&read(code)?)?;
            let dist = distance(&code, limits)?;
            Ok((OK, json!({ "distance": dist }), format!("{dist}\n")))
        }
    }
}

impl Command {
    fn name_and_inputs(&self) -> (&'static str, Vec<&Path>) {
        match self {
            Command::Validate { spec } => ("validate", vec![spec]),
            Command::Syndrome { spec, .. } => ("syndrome", vec![spec]),
            Command::Verify { code, .. } => ("verify", vec![code]),
            Command::Search { spec, .. } => ("search", vec![spec]),
            Command::ScanGcd { spec, .. } => ("scan-gcd", vec![spec]),
            Command::Canonicalize { spec, .. } => ("canonicalize", vec![spec]),
            Command::ExportGraph { spec, .. } => ("export-graph", vec![spec]),
            Command::Closure { code, .. } => ("closure", vec![code]),
            Command::Sweep { specs, .. } => ("sweep", specs.iter().map(PathBuf::as_path).collect()),
            Command::Distance { code } => ("distance", vec![code]),
        }
    }
}

fn write_manifest(cli: &Cli, path: &Path, exit: u8, value: &Value) -> Result<(), Failure> {
    let (name, inputs) = cli.command.name_and_inputs();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m = Manifest::new(name, json!({ "args": args }), &inputs, json!({ "exit": exit, "summary": value }))?;
    write(path, &m.to_json())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits::from_env();
    let result = run(&cli, &limits);
    let result = match (&cli.manifest, result) {
        (Some(path), Ok((code, value, text))) => write_manifest(&cli, path, code, &value).map(|_| (code, value, text)),
        (_, r) => r,
    };
    match result {
        Ok((code, value, text)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            } else {
                print!("{text}");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({ "error": f.message }));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

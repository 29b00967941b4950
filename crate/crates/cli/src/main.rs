//! `streamgame`: run, analyze and certify protocols for the array-filling game.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use streamgame::codes::{
    bits_from_str, bits_to_string, build_proper_code_with, gamma, render_syndrome,
    GreedyDeletionCode, ProperCodeReport, ProperParams, VtCode,
};
use streamgame::game::internal_symbol;
use streamgame::protocols::{BlockCodeParams, IteratedParams, ProtocolConfig, SyndromeParams};
use streamgame::theory::{assignment_oblivious_witness, exact_c_solver, min_cost, monotone_witness};
use streamgame::{
    conditional_entropy, enumerate_edge_graph, expected_cost, run_protocol, EnumMode, Error,
    Limits, MetricMode, Permutation,
};

/// Seed used when none is given, so bare invocations are reproducible.
const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(name = "streamgame", version, about = "Streaming array-filling game toolkit")]
struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Worker threads for parallel enumeration.
    #[arg(long, global = true, env = "STREAMGAME_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game.
    Run(RunArgs),
    /// Compute cost, expected cost or conditional entropy.
    Analyze(AnalyzeArgs),
    /// Build and check a lower-bound witness.
    Witness(WitnessArgs),
    /// Exact minimum cost for tiny n.
    Search(SearchArgs),
    /// Build or verify codes.
    #[command(subcommand)]
    Code(CodeCommand),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum ProtocolName {
    #[value(alias = "and-or")]
    AndOr,
    Zeros,
    Syndrome,
    Iterated,
    #[value(alias = "block-code")]
    BlockCode,
}

#[derive(Args)]
struct ProtocolArgs {
    #[arg(value_enum)]
    protocol: ProtocolName,
    #[arg(long)]
    n: usize,
    /// Syndrome tail length.
    #[arg(long)]
    t: Option<usize>,
    /// Iterated recursion depth.
    #[arg(long, default_value_t = 1)]
    j: usize,
    /// Iterated base cutoff.
    #[arg(long)]
    k0: Option<usize>,
    /// Iterated schedule t_0,...,t_j.
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<usize>>,
    /// Accept deletion codes weaker than the schedule requires.
    #[arg(long)]
    weak_codes: bool,
    /// Block-code tail fraction.
    #[arg(long)]
    theta: Option<f64>,
    /// Block-code candidate words per support.
    #[arg(long)]
    retries: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl ProtocolArgs {
    fn config(&self) -> ProtocolConfig {
        let n = self.n;
        match self.protocol {
            ProtocolName::AndOr => ProtocolConfig::AndOr { n },
            ProtocolName::Zeros => ProtocolConfig::Zeros { n },
            ProtocolName::Syndrome => ProtocolConfig::Syndrome(match self.t {
                Some(t) => SyndromeParams { n, t },
                None => SyndromeParams::with_default_tail(n),
            }),
            ProtocolName::Iterated => {
                let mut p = IteratedParams::new(n, self.j);
                if let Some(k0) = self.k0 {
                    p.k0 = k0;
                }
                p.schedule = self.schedule.clone();
                p.weak_codes = self.weak_codes;
                ProtocolConfig::Iterated(p)
            }
            ProtocolName::BlockCode => {
                let mut p = BlockCodeParams::new(n);
                if let Some(theta) = self.theta {
                    p.theta = theta;
                }
                if let Some(r) = self.retries {
                    p.retries = r;
                }
                p.seed = self.seed;
                ProtocolConfig::BlockCode(p)
            }
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    proto: ProtocolArgs,
    /// 1-based arrival order, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "random")]
    sigma: Option<Vec<usize>>,
    /// Draw the arrival order from the seed.
    #[arg(long)]
    random: bool,
    /// Final forced symbol (0/1 for binary protocols).
    #[arg(long, default_value_t = 0)]
    b: u8,
    /// Print every write to standard error.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Metric {
    Cost,
    Expected,
    Entropy,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Mode {
    Exhaustive,
    MonteCarlo,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    proto: ProtocolArgs,
    #[arg(long, value_enum, default_value_t = Metric::Cost)]
    metric: Metric,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Write the edge graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum WitnessKindArg {
    Monotone,
    Assignment,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    proto: ProtocolArgs,
    #[arg(long, value_enum)]
    kind: WitnessKindArg,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Decide a single budget instead of computing the minimum.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Build a code and print its report.
    #[command(subcommand)]
    Build(BuildKind),
    /// Check a code report written by `code build`.
    Verify {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    /// Varshamov-Tenengolts single-deletion code.
    Vt {
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy maximal deletion code.
    Greedy {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded proper code with per-support words.
    Proper {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Defaults to 2k+1 when m = k^2, else 1.
        #[arg(long)]
        target_d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        min_d: usize,
        #[arg(long, default_value_t = 200)]
        retries: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ReportEnvelope {
    command: String,
    parameters: Value,
    seed: Option<u64>,
    version: &'static str,
    wall_time_ms: f64,
    result: Value,
}

/// A code document as written by `code build`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CodeDoc {
    Vt {
        t: usize,
        a: usize,
        size: u64,
        d_achieved: usize,
        verified: String,
        syndrome_table: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        words: Option<Vec<String>>,
    },
    Greedy {
        k: usize,
        d: usize,
        size: usize,
        verified: String,
        words: Vec<String>,
    },
    Proper(ProperDoc),
}

#[derive(Serialize, Deserialize)]
struct ProperDoc {
    params: ProperParams,
    seed: u64,
    size: u64,
    d_achieved: Option<usize>,
    relaxed: bool,
    verified: String,
    #[serde(default)]
    words: Option<Vec<String>>,
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(Value, Option<u64>, Value), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Run(a) => ("run", cmd_run(a)),
        Command::Analyze(a) => ("analyze", cmd_analyze(a)),
        Command::Witness(a) => ("witness", cmd_witness(a)),
        Command::Search(a) => ("search", cmd_search(a)),
        Command::Code(CodeCommand::Build(k)) => ("code build", cmd_code_build(k)),
        Command::Code(CodeCommand::Verify { file }) => ("code verify", cmd_code_verify(file)),
    };
    match outcome {
        Ok((parameters, seed, result)) => {
            let failed = result.get("valid") == Some(&Value::Bool(false));
            let env = ReportEnvelope {
                command: name.to_string(),
                parameters,
                seed,
                version: env!("CARGO_PKG_VERSION"),
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
                result,
            };
            let value = serde_json::to_value(&env).expect("serializable");
            if cli.pretty {
                print_table(&value);
            } else {
                println!("{value}");
            }
            ExitCode::from(if failed { 1 } else { 0 })
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_size_rejection() { 2 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn cmd_run(a: &RunArgs) -> CmdResult {
    let config = a.proto.config();
    let p = config.build()?;
    let sigma = match (&a.sigma, a.random) {
        (Some(s), _) => Permutation::from_one_based(s)?,
        (None, true) => Permutation::random(p.n(), &mut ChaCha8Rng::seed_from_u64(a.proto.seed)),
        (None, false) => Permutation::identity(p.n()),
    };
    let b = internal_symbol(a.b, p.alphabet())?;
    let record = run_protocol(&p, &sigma, b)?;
    if a.trace {
        for (i, (loc, sym)) in record.transcript.iter().enumerate() {
            eprintln!(
                "step {:>3}: location {:>3} <- {}",
                i + 1,
                loc + 1,
                streamgame::game::render_symbol(*sym, p.alphabet())
            );
        }
    }
    let mut result = to_value(&record);
    if matches!(config, ProtocolConfig::Syndrome(_)) {
        result["syndrome"] = json!(render_syndrome(gamma(&record.final_array), p.n()));
    }
    let params = json!({
        "protocol": config,
        "sigma": sigma.to_one_based(),
        "b": a.b,
    });
    Ok((params, a.random.then_some(a.proto.seed), result))
}

fn cmd_analyze(a: &AnalyzeArgs) -> CmdResult {
    let config = a.proto.config();
    let p = config.build()?;
    let limits = Limits::DEFAULT;
    let mode = match a.mode {
        Mode::Exhaustive => MetricMode::Exhaustive,
        Mode::MonteCarlo => MetricMode::MonteCarlo {
            seed: a.proto.seed,
            trials: a.trials,
        },
    };
    let mut result = match a.metric {
        Metric::Cost => {
            let g = enumerate_edge_graph(&p, EnumMode::Auto, &limits)?;
            if let Some(path) = &a.dot {
                fs::write(path, g.to_dot())
                    .map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display())))?;
            }
            json!({ "cost": g.max_degree(), "edge_graph": g.report() })
        }
        Metric::Expected => to_value(&expected_cost(&p, mode, &limits)?),
        Metric::Entropy => to_value(&conditional_entropy(&p, mode, &limits)?),
    };
    if let (Some(path), Metric::Cost) = (&a.dot, a.metric) {
        result["dot"] = json!(path.display().to_string());
    }
    let params = json!({
        "protocol": config,
        "metric": a.metric,
        "mode": a.mode,
        "trials": matches!(a.mode, Mode::MonteCarlo).then_some(a.trials),
    });
    let seed = matches!(a.mode, Mode::MonteCarlo).then_some(a.proto.seed);
    Ok((params, seed, result))
}

fn cmd_witness(a: &WitnessArgs) -> CmdResult {
    let config = a.proto.config();
    let p = config.build()?;
    let report = match a.kind {
        WitnessKindArg::Monotone => monotone_witness(&p)?,
        WitnessKindArg::Assignment => assignment_oblivious_witness(&p)?,
    };
    let params = json!({ "protocol": config, "kind": a.kind });
    Ok((params, None, to_value(&report)))
}

fn cmd_search(a: &SearchArgs) -> CmdResult {
    let result = match a.budget {
        Some(c) => to_value(&exact_c_solver(a.n, c)?),
        None => to_value(&min_cost(a.n)?),
    };
    Ok((json!({ "n": a.n, "budget": a.budget }), None, result))
}

fn write_doc(doc: &CodeDoc, out: &Option<PathBuf>) -> Result<Value, Failure> {
    let value = to_value(doc);
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&value).expect("serializable");
        fs::write(path, text + "\n")
            .map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display())))?;
    }
    Ok(value)
}

/// VT codes list their words when there are at most this many.
const VT_LIST_LIMIT: u64 = 4096;

fn vt_doc(t: usize, a: usize) -> Result<CodeDoc, Failure> {
    let code = VtCode::new(t, a)?;
    let words = if code.size() <= VT_LIST_LIMIT {
        Some(code.codewords()?.iter().map(|w| bits_to_string(w)).collect())
    } else {
        None
    };
    Ok(CodeDoc::Vt {
        t,
        a,
        size: code.size(),
        d_achieved: 1,
        verified: "exhaustive".into(),
        syndrome_table: code.syndrome_table(),
        words,
    })
}

fn greedy_doc(k: usize, d: usize) -> Result<CodeDoc, Failure> {
    let code = GreedyDeletionCode::build(k, d)?;
    Ok(CodeDoc::Greedy {
        k,
        d: code.deletions(),
        size: code.size(),
        verified: if code.verify_pairwise() { "exhaustive" } else { "failed" }.into(),
        words: code.words().map(|w| bits_to_string(&w)).collect(),
    })
}

fn proper_doc(params: ProperParams, seed: u64) -> Result<CodeDoc, Failure> {
    let code = build_proper_code_with(params, seed)?;
    Ok(CodeDoc::Proper(proper_from_report(code.report(true))))
}

fn proper_from_report(r: ProperCodeReport) -> ProperDoc {
    ProperDoc {
        verified: to_value(&r.verified).as_str().unwrap_or_default().to_string(),
        params: r.params,
        seed: r.seed,
        size: r.size,
        d_achieved: r.d_achieved,
        relaxed: r.relaxed,
        words: r.words,
    }
}

fn cmd_code_build(k: &BuildKind) -> CmdResult {
    match k {
        BuildKind::Vt { t, a, out } => {
            let doc = vt_doc(*t, *a)?;
            Ok((json!({"kind": "vt", "t": t, "a": a}), None, write_doc(&doc, out)?))
        }
        BuildKind::Greedy { k, d, out } => {
            let doc = greedy_doc(*k, *d)?;
            Ok((json!({"kind": "greedy", "k": k, "d": d}), None, write_doc(&doc, out)?))
        }
        BuildKind::Proper {
            n,
            m,
            target_d,
            min_d,
            retries,
            seed,
            out,
        } => {
            let root = (*m as f64).sqrt().round() as usize;
            let target_d = target_d.unwrap_or(if root * root == *m { 2 * root + 1 } else { 1 });
            let params = ProperParams {
                n: *n,
                m: *m,
                target_d,
                retries: *retries,
                min_d: *min_d,
            };
            let doc = proper_doc(params.clone(), *seed)?;
            Ok((
                json!({"kind": "proper", "params": params}),
                Some(*seed),
                write_doc(&doc, out)?,
            ))
        }
    }
}

/// Rebuilds the code described by a report and compares every field.
fn cmd_code_verify(file: &PathBuf) -> CmdResult {
    let text = fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("reading {}: {e}", file.display())))?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{} is not JSON: {e}", file.display())))?;
    if value.get("result").is_some() {
        value = value["result"].take();
    }
    let doc: CodeDoc = serde_json::from_value(value.clone())
        .map_err(|e| Failure::Usage(format!("{} is not a code report: {e}", file.display())))?;
    let problems = match &doc {
        CodeDoc::Vt { t, a, .. } => compare(&value, &to_value(&vt_doc(*t, *a)?)),
        CodeDoc::Greedy { k, d, words, .. } => {
            let parsed = words
                .iter()
                .map(|w| bits_from_str(w))
                .collect::<Result<Vec<_>, _>>()?;
            let code = GreedyDeletionCode::from_words(*k, *d, parsed)?;
            let mut p = Vec::new();
            if !code.verify_pairwise() {
                p.push("two codewords share a common subsequence within the deletion budget".into());
            }
            p.extend(compare(&value, &to_value(&greedy_doc(*k, *d)?)));
            p
        }
        CodeDoc::Proper(d) => compare(&value, &to_value(&proper_doc(d.params.clone(), d.seed)?)),
    };
    let result = json!({
        "file": file.display().to_string(),
        "valid": problems.is_empty(),
        "problems": problems,
    });
    Ok((json!({ "file": file.display().to_string() }), None, result))
}

fn compare(stored: &Value, rebuilt: &Value) -> Vec<String> {
    let (Some(s), Some(r)) = (stored.as_object(), rebuilt.as_object()) else {
        return vec!["report is not an object".into()];
    };
    r.iter()
        .filter(|(k, v)| s.get(*k) != Some(*v))
        .map(|(k, _)| format!("field `{k}` does not match the rebuilt code"))
        .collect()
}

fn print_table(v: &Value) {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, val) in rows {
        println!("{k:<width$}  {val}");
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, rows);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            rows.push((prefix.to_string(), parts.join(",")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, rows);
            }
        }
        x => rows.push((prefix.to_string(), scalar(x))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        x => x.to_string(),
    }
}

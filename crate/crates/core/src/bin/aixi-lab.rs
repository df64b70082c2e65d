use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use aixi_lab::agent::{run_episode, write_episodes_csv, PlanningSpec};
use aixi_lab::bits::BitString;
use aixi_lab::environments::{catalog, EnvSpec};
use aixi_lab::experiments::{run_manifest, Manifest, SeedRange};
use aixi_lab::ior::{intelligence_score, order, write_scores_csv, AgentKind, IorError, ScoreReport, Suite};
use aixi_lab::machine::{self, Program};
use aixi_lab::output::{csv_document, manifest_hash, write_atomic, SCHEMA_VERSION};
use aixi_lab::solomonoff::{complexity_upper, extension_masses, lower_m, ApproximationParams};

/// Built-in manifests, runnable by name.
const MANIFESTS: &[(&str, &str)] = &[
    ("convergence", include_str!("../../manifests/convergence.toml")),
    ("convergence-two-component", include_str!("../../manifests/convergence-two-component.toml")),
    ("selected-bits", include_str!("../../manifests/selected-bits.toml")),
    ("selfplay", include_str!("../../manifests/selfplay.toml")),
    ("selfplay-vs-defector", include_str!("../../manifests/selfplay-vs-defector.toml")),
    ("prediction-gap", include_str!("../../manifests/prediction-gap.toml")),
    ("prediction-gap-deterministic", include_str!("../../manifests/prediction-gap-deterministic.toml")),
    ("ior", include_str!("../../manifests/ior.toml")),
];

/// Solomonoff induction and AIXI at desk scale.
///
/// Results go to standard output unless `--out` (or `--out-dir`) is given;
/// files are written atomically, so a failed run leaves none behind.
/// Exit status: 0 on success, 2 on a configuration error, 1 on a runtime
/// error.
#[derive(Parser)]
#[command(name = "aixi-lab", version)]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounded prior mass and complexity bound of bit strings, as JSON lines.
    Enumerate(EnumerateArgs),
    /// Per-symbol predictive probabilities along a bit string, as CSV.
    Predict(PredictArgs),
    /// Episodes of one agent in one environment, as CSV.
    Agent(AgentArgs),
    /// Weighted scores and ranking of agents over an environment suite.
    Ior(IorArgs),
    /// Run a manifest file or a built-in manifest by name.
    Experiment(ExperimentArgs),
    /// Reference machine utilities.
    #[command(subcommand)]
    Machine(MachineCommand),
    /// List environments and built-in manifests.
    Catalog,
}

#[derive(Args)]
struct Budgets {
    /// Maximum program length in bits.
    #[arg(long = "L", value_name = "L")]
    max_len: usize,
    /// Step budget per program (per symbol when predicting).
    #[arg(long = "T", value_name = "T")]
    step_budget: u64,
}

impl Budgets {
    fn params(&self) -> ApproximationParams {
        ApproximationParams::new(self.max_len, self.step_budget)
    }
}

#[derive(Args)]
struct EnumerateArgs {
    /// Bit string; repeat for several.
    #[arg(long = "x", value_name = "BITS", required_unless_present = "up_to")]
    x: Vec<BitString>,
    /// Every bit string of length at most N instead of `--x`.
    #[arg(long, value_name = "N", conflicts_with = "x")]
    up_to: Option<usize>,
    #[command(flatten)]
    budgets: Budgets,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    /// Observed bit string.
    #[arg(long = "x", value_name = "BITS")]
    x: BitString,
    #[command(flatten)]
    budgets: Budgets,
    /// Normalize over both continuations.
    #[arg(long)]
    normalize: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AgentArgs {
    /// Environment, e.g. `bernoulli:0.75`, `pd:tft`, `mdp:chain`.
    #[arg(long)]
    env: EnvSpec,
    /// `aixi[:H]`, `myopic` or `random`.
    #[arg(long, default_value = "aixi")]
    agent: AgentKind,
    /// Lifetime in cycles.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IorArgs {
    /// Suite file (TOML with `entries`, `weights`, `lifetime`, `seeds`);
    /// the default suite when absent.
    #[arg(long, value_name = "FILE")]
    suite: Option<PathBuf>,
    /// Agents to score.
    #[arg(long, value_delimiter = ',', default_value = "aixi,myopic,random")]
    agents: Vec<AgentKind>,
    /// Lifetime; overrides the suite file.
    #[arg(long)]
    m: Option<usize>,
    /// Number of seeds, starting at 0; overrides the suite file.
    #[arg(long)]
    seeds: Option<usize>,
    /// Directory for `ior.csv` and `ior.json`.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Manifest file, or the name of a built-in manifest.
    manifest: String,
    /// Override a manifest field, e.g. `--set seeds=5` or `--set class.prior="uniform"`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Directory for the output files; only the summary is printed without it.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Print the effective manifest and its hash without running it.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Subcommand)]
enum MachineCommand {
    /// One line per step: step, opcode, head, cell, consumed, output.
    Trace(TraceArgs),
    /// Print the opcode table.
    Opcodes,
}

#[derive(Args)]
struct TraceArgs {
    /// Program as mnemonics (`<>~.,[]!`) or, with `--bits`, as raw bits.
    program: String,
    #[arg(long)]
    bits: bool,
    /// Bits available on the input channel.
    #[arg(long, default_value = "")]
    input: BitString,
    #[arg(long = "T", default_value_t = 100)]
    step_budget: u64,
    #[arg(long, default_value_t = 16)]
    output_limit: usize,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<aixi_lab::Error> for Failure {
    fn from(e: aixi_lab::Error) -> Self {
        use aixi_lab::Error as E;
        match e {
            E::Ior(IorError::Episode { .. }) => Failure::Runtime(e.to_string()),
            E::Mixture(_) | E::Ior(_) | E::Experiment(_) | E::Environment(_) => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn config(message: impl std::fmt::Display) -> Failure {
    Failure::Config(message.to_string())
}

fn runtime(message: impl std::fmt::Display) -> Failure {
    Failure::Runtime(message.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(config("--jobs: must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli.command)),
            Err(e) => Err(runtime(e)),
        },
        None => run(cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("aixi-lab: config error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("aixi-lab: error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Enumerate(args) => enumerate(args),
        Command::Predict(args) => predict(args),
        Command::Agent(args) => agent(args),
        Command::Ior(args) => ior(args),
        Command::Experiment(args) => experiment(args),
        Command::Machine(MachineCommand::Trace(args)) => trace(args),
        Command::Machine(MachineCommand::Opcodes) => {
            for op in machine::Opcode::ALL {
                println!("{:03b}\t{}\t{op:?}", op.code(), op.mnemonic());
            }
            Ok(())
        }
        Command::Catalog => {
            println!("environments:");
            for e in catalog() {
                println!("  {:<24} A={} O={}  {}", e.name, e.num_actions, e.num_observations, e.description);
            }
            println!("manifests:");
            for (name, text) in MANIFESTS {
                let about = text.lines().next().unwrap_or("").trim_start_matches('#').trim();
                println!("  {name:<30} {about}");
            }
            Ok(())
        }
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, bytes).map_err(|e| runtime(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(bytes) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(runtime(e)),
                _ => Ok(()),
            }
        }
    }
}

#[derive(Serialize)]
struct MassRecord {
    x: String,
    #[serde(rename = "L")]
    max_len: usize,
    #[serde(rename = "T")]
    step_budget: u64,
    mass_numerator: String,
    mass_denominator: String,
    k_upper: Option<usize>,
}

fn enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    use rayon::prelude::*;
    let params = args.budgets.params();
    let xs: Vec<BitString> = match args.up_to {
        Some(n) => BitString::all_up_to(n).collect(),
        None => args.x,
    };
    let records: Vec<MassRecord> = xs
        .par_iter()
        .map(|x| {
            let mass = lower_m(x, params).to_ratio();
            MassRecord {
                x: x.to_string(),
                max_len: params.max_len,
                step_budget: params.step_budget,
                mass_numerator: mass.numer().to_string(),
                mass_denominator: mass.denom().to_string(),
                k_upper: complexity_upper(x, params),
            }
        })
        .collect();
    let mut bytes = Vec::new();
    for r in &records {
        serde_json::to_writer(&mut bytes, r).map_err(runtime)?;
        bytes.push(b'\n');
    }
    emit(args.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct PredictManifest {
    command: &'static str,
    x: String,
    max_len: usize,
    step_budget: u64,
    normalize: bool,
}

fn predict(args: PredictArgs) -> Result<(), Failure> {
    use rayon::prelude::*;
    let params = args.budgets.params();
    let hash = manifest_hash(&PredictManifest {
        command: "predict",
        x: args.x.to_string(),
        max_len: params.max_len,
        step_budget: params.step_budget,
        normalize: args.normalize,
    });
    let rows: Vec<[String; 5]> = (0..args.x.len())
        .into_par_iter()
        .map(|t| {
            let prefix = args.x.prefix(t);
            let next = args.x.bits()[t];
            let (base, ext) = extension_masses(&prefix, params);
            let denom = if args.normalize { ext[0] + ext[1] } else { base };
            let p = if denom.is_zero() {
                None
            } else {
                Some(ext[next as usize].to_ratio() / denom.to_ratio())
            };
            let exact = p.as_ref().map_or(String::new(), |p| p.to_string());
            let approx = p.map_or(String::new(), |p| {
                use num_traits::ToPrimitive;
                format!("{:.12}", p.to_f64().unwrap_or(f64::NAN))
            });
            [(t + 1).to_string(), (next as u8).to_string(), exact, approx, format!("{:.6}", base.to_f64().log2())]
        })
        .collect();
    let bytes = csv_document("predict", &hash, |out| {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "bit", "probability", "probability_f64", "log2_prefix_mass"])?;
        for r in &rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    })
    .map_err(runtime)?;
    emit(args.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct AgentManifest<'a> {
    command: &'static str,
    env: &'a EnvSpec,
    agent: &'a AgentKind,
    lifetime: usize,
    seeds: SeedRange,
}

fn agent(args: AgentArgs) -> Result<(), Failure> {
    use rayon::prelude::*;
    if args.m == 0 {
        return Err(config("--m: lifetime must be at least 1"));
    }
    let seeds = SeedRange::new(args.first_seed, args.seeds);
    let hash = manifest_hash(&AgentManifest {
        command: "agent",
        env: &args.env,
        agent: &args.agent,
        lifetime: args.m,
        seeds,
    });
    let policy = args.agent.policy_for(&args.env).map_err(|e| config(format!("--env: {e}")))?;
    let episodes = seeds
        .to_vec()
        .par_iter()
        .map(|&seed| {
            let env = args.env.build(seed).map_err(|e| config(format!("--env: {e}")))?;
            let spec = PlanningSpec::for_environment(env.as_ref(), args.m);
            run_episode(policy.as_ref(), env.as_ref(), &spec, seed).map_err(runtime)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let bytes = csv_document("episodes", &hash, |out| Ok(write_episodes_csv(&episodes, out)?)).map_err(runtime)?;
    emit(args.out.as_deref(), &bytes)
}

fn ior(args: IorArgs) -> Result<(), Failure> {
    let mut suite = match &args.suite {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| config(format!("--suite {}: {e}", path.display())))?;
            toml::from_str::<Suite>(&text).map_err(|e| config(format!("--suite {}: {e}", path.display())))?
        }
        None => Suite::default_with(100, (0..30).collect()).map_err(config)?,
    };
    if let Some(m) = args.m {
        suite.lifetime = m;
    }
    if let Some(n) = args.seeds {
        suite.seeds = (0..n as u64).collect();
    }
    let suite = Suite::new(suite.entries, suite.weights, suite.lifetime, suite.seeds).map_err(config)?;
    let scores = args
        .agents
        .iter()
        .map(|a| intelligence_score(a, &suite))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::from(aixi_lab::Error::from(e)))?;
    let ranking = order(&scores).map_err(|e| runtime(e))?;
    for r in &ranking.ranked {
        println!("{}\t{}\t{:.6}\t{:.6}", r.rank, r.policy, r.total, r.std_err);
    }
    for (a, b) in &ranking.incomparable {
        println!("incomparable\t{a}\t{b}");
    }
    if let Some(dir) = &args.out_dir {
        let hash = suite.hash();
        let csv = csv_document("ior", &hash, |out| Ok(write_scores_csv(&scores, out)?)).map_err(runtime)?;
        let report = ScoreReport {
            schema: format!("ior/v{SCHEMA_VERSION}"),
            manifest_hash: hash.clone(),
            suite: &suite,
            scores: &scores,
            ranking: &ranking,
        };
        let json = serde_json::to_vec_pretty(&report).map_err(runtime)?;
        emit(Some(&dir.join("ior.csv")), &csv)?;
        emit(Some(&dir.join("ior.json")), &json)?;
    }
    Ok(())
}

fn load_manifest(name_or_path: &str, overrides: &[String]) -> Result<Manifest, Failure> {
    let text = match MANIFESTS.iter().find(|(name, _)| *name == name_or_path) {
        Some((_, text)) => text.to_string(),
        None => std::fs::read_to_string(name_or_path).map_err(|e| {
            let known: Vec<&str> = MANIFESTS.iter().map(|(n, _)| *n).collect();
            config(format!("{name_or_path}: {e} (built-in manifests: {})", known.join(", ")))
        })?,
    };
    let mut table: toml::Table = toml::from_str(&text).map_err(|e| config(format!("{name_or_path}: {e}")))?;
    for o in overrides {
        let (key, raw) = o.split_once('=').ok_or_else(|| config(format!("--set {o}: expected KEY=VALUE")))?;
        let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        set_path(&mut table, key, value).map_err(|m| config(format!("--set {o}: {m}")))?;
    }
    toml::Value::Table(table)
        .try_into::<Manifest>()
        .map_err(|e| config(format!("{name_or_path}: {e}")))
}

fn set_path(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), String> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|k| !k.is_empty()).ok_or("empty key")?;
    let mut node = table;
    for p in parts {
        node = node
            .entry(p)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| format!("`{p}` is not a table"))?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<(), Failure> {
    let manifest = load_manifest(&args.manifest, &args.overrides)?;
    if args.dry_run {
        print!("{}", toml::to_string(&manifest).map_err(runtime)?);
        println!("# {}", manifest.hash());
        return Ok(());
    }
    let output = run_manifest(&manifest)?;
    if let Some(dir) = &args.out_dir {
        for f in &output.files {
            emit(Some(&dir.join(&f.name)), &f.bytes)?;
        }
    }
    println!("{} {}: {}", manifest.name(), output.manifest_hash, output.summary);
    Ok(())
}

fn trace(args: TraceArgs) -> Result<(), Failure> {
    let program = if args.bits {
        args.program
            .parse::<BitString>()
            .map(Program::new)
            .map_err(|e| config(format!("program: {e}")))?
    } else {
        Program::assemble(&args.program).ok_or_else(|| config("program: expected mnemonics from `<>~.,[]!`"))?
    };
    let (result, lines) = machine::trace(&program, &args.input, args.step_budget, args.output_limit);
    println!("# program {} ({})", program.disassemble(), program.bits());
    println!("# step\top\thead\tcell\tconsumed\toutput");
    for line in lines {
        println!("{line}");
    }
    println!(
        "# {:?}: output {:?}, consumed {}, steps {}",
        result.status,
        result.output.to_string(),
        result.consumed,
        result.steps
    );
    Ok(())
}

//! Named, manifest-driven experiment pipelines.
//!
//! A manifest fully determines its outputs: every random choice is drawn
//! from seeds listed in it, per-seed work is merged in seed order, and each
//! CSV file opens with a comment carrying the tool version, schema version
//! and the manifest's hash.

use std::sync::{Arc, Mutex};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{
    run_episode, AgentError, Decision, ExpectimaxAgent, PlanningSpec, Policy, RandomAgent, WithRandomFallback,
};
use crate::environments::{matrix_game, opponent_class, selected_bits_env, EnvSpec, Opponent, Payoffs};
use crate::interaction::{Action, History};
use crate::ior::{intelligence_score, mean_and_std_err, order, AgentKind, IntelligenceScore, Ranking, Suite};
use crate::machine::{programs, Machine, Stop};
use crate::mixture::{program_class, Belief, ClassConfig, ClassConfigError, Mixture, MixtureError};
use crate::output::{csv_document, manifest_hash};
use crate::scalar::Scalar;
use crate::solomonoff::ApproximationParams;
use crate::stream::StreamPredictor;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("budgets L = {max_len}, T = {step_budget} do not admit the copy program")]
    BudgetTooSmall { max_len: usize, step_budget: u64 },
    #[error("field `truth`: component {truth} is not in a class of {len}")]
    TruthNotInClass { truth: usize, len: usize },
    #[error("field `class`: {0}")]
    Class(#[from] ClassConfigError),
    #[error("field `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },
    #[error("manifest: {0}")]
    Parse(#[from] toml::de::Error),
}

fn invalid(field: &'static str, message: impl Into<String>) -> ExperimentError {
    ExperimentError::InvalidParameter {
        field,
        message: message.into(),
    }
}

/// `seeds` consecutive seeds starting at `first_seed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    #[serde(default)]
    pub first_seed: u64,
    pub seeds: usize,
}

impl SeedRange {
    pub fn new(first_seed: u64, seeds: usize) -> Self {
        Self { first_seed, seeds }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + Clone + use<> {
        let first = self.first_seed;
        (0..self.seeds as u64).map(move |i| first + i)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    /// Index of the data-generating component within `class`.
    pub truth: usize,
    pub n: usize,
    #[serde(flatten)]
    pub seeds: SeedRange,
    pub class: ClassConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectedBitsConfig {
    pub max_len: usize,
    /// Steps allowed between consecutive output symbols.
    pub step_budget: u64,
    pub n: usize,
    /// Width of the error-rate windows.
    #[serde(default = "default_window")]
    pub window: usize,
    /// Live states kept per program after each symbol; `None` is exact.
    #[serde(default = "default_state_cap")]
    pub state_cap: Option<usize>,
    #[serde(flatten)]
    pub seeds: SeedRange,
}

fn default_window() -> usize {
    100
}

fn default_state_cap() -> Option<usize> {
    Some(4)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfplayConfig {
    pub lifetime: usize,
    /// Planning horizon of both bounded players.
    pub horizon: usize,
    /// Replaces player B by a fixed strategy when given.
    #[serde(default)]
    pub opponent: Option<Opponent>,
    #[serde(flatten)]
    pub seeds: SeedRange,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionGapConfig {
    pub max_len: usize,
    /// Per-symbol budget for the predictor, per-cycle budget for the class.
    pub step_budget: u64,
    pub n: usize,
    /// Cycles a program must survive on the probe to join the class.
    #[serde(default = "default_class_cycles")]
    pub class_cycles: usize,
    #[serde(default = "default_gap_horizon")]
    pub horizon: usize,
    /// Live states the predictor keeps per program; absent is exact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_cap: Option<usize>,
    pub env: EnvSpec,
    #[serde(flatten)]
    pub seeds: SeedRange,
}

fn default_class_cycles() -> usize {
    2
}

fn default_gap_horizon() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IorConfig {
    pub agents: Vec<AgentKind>,
    pub suite: Suite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Manifest {
    Convergence(ConvergenceConfig),
    SelectedBits(SelectedBitsConfig),
    Selfplay(SelfplayConfig),
    PredictionGap(PredictionGapConfig),
    Ior(IorConfig),
}

impl Manifest {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        Ok(toml::from_str(text)?)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Manifest::Convergence(_) => "convergence",
            Manifest::SelectedBits(_) => "selected-bits",
            Manifest::Selfplay(_) => "selfplay",
            Manifest::PredictionGap(_) => "prediction-gap",
            Manifest::Ior(_) => "ior",
        }
    }

    pub fn hash(&self) -> String {
        manifest_hash(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub manifest_hash: String,
    pub files: Vec<OutputFile>,
    /// One-line human summary.
    pub summary: String,
}

/// Run a manifest and render its output files.
pub fn run_manifest(manifest: &Manifest) -> Result<ExperimentOutput, crate::Error> {
    let hash = manifest.hash();
    let name = manifest.name();
    let file = |suffix: &str, bytes| OutputFile {
        name: format!("{name}{suffix}"),
        bytes,
    };
    let (files, summary) = match manifest {
        Manifest::Convergence(cfg) => {
            let report = run_convergence(cfg)?;
            let bytes = csv_document("convergence", &hash, |out| Ok(report.write_csv(out)?))?;
            let summary = format!(
                "mean cumulative squared error {:.6} ± {:.6} (bound ln 1/w = {:.6})",
                report.final_mean, report.final_std_err, report.bound
            );
            (vec![file(".csv", bytes)], summary)
        }
        Manifest::SelectedBits(cfg) => {
            let report = run_selected_bits(cfg)?;
            let trace = csv_document("selected-bits", &hash, |out| Ok(report.write_csv(out)?))?;
            let windows = csv_document("selected-bits-windows", &hash, |out| Ok(report.write_windows_csv(out)?))?;
            let last = report.windows.last();
            let summary = format!(
                "last window error: even {:.4}, odd {:.4}",
                last.map_or(f64::NAN, |w| w.even),
                last.map_or(f64::NAN, |w| w.odd)
            );
            (vec![file(".csv", trace), file("-windows.csv", windows)], summary)
        }
        Manifest::Selfplay(cfg) => {
            let log = run_selfplay(cfg)?;
            let bytes = csv_document("selfplay", &hash, |out| Ok(log.write_csv(out)?))?;
            let (a, b) = log.mean_totals();
            (vec![file(".csv", bytes)], format!("mean totals: A {a:.4}, B {b:.4}"))
        }
        Manifest::PredictionGap(cfg) => {
            let report = run_prediction_gap(cfg)?;
            let bytes = csv_document("prediction-gap", &hash, |out| Ok(report.write_csv(out)?))?;
            let summary = format!(
                "mean reward per cycle: predictor {:.4}, aixi {:.4}, gap {:.4} ± {:.4}",
                report.predictor_mean, report.aixi_mean, report.gap, report.gap_std_err
            );
            (vec![file(".csv", bytes)], summary)
        }
        Manifest::Ior(cfg) => {
            let (scores, ranking) = run_ior(cfg)?;
            let csv = csv_document("ior", &hash, |out| Ok(crate::ior::write_scores_csv(&scores, out)?))?;
            let report = crate::ior::ScoreReport {
                schema: format!("ior/v{}", crate::output::SCHEMA_VERSION),
                manifest_hash: hash.clone(),
                suite: &cfg.suite,
                scores: &scores,
                ranking: &ranking,
            };
            let json = serde_json::to_vec_pretty(&report)?;
            let summary = ranking
                .ranked
                .iter()
                .map(|r| format!("{}. {} {:.4} ± {:.4}", r.rank, r.policy, r.total, r.std_err))
                .collect::<Vec<_>>()
                .join("; ");
            (vec![file(".csv", csv), file(".json", json)], summary)
        }
    };
    Ok(ExperimentOutput {
        manifest_hash: hash,
        files,
        summary,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// `ln(1 / w_μ)`.
    pub bound: f64,
    /// Per step: mean squared error and the mean and standard error of the
    /// running sum, across seeds.
    pub steps: Vec<(f64, f64, f64)>,
    pub final_mean: f64,
    pub final_std_err: f64,
}

impl ConvergenceReport {
    /// `step,sq_error,cumulative,cumulative_std_err,bound`
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "sq_error", "cumulative", "cumulative_std_err", "bound"])?;
        for (t, (e, c, s)) in self.steps.iter().enumerate() {
            w.write_record([
                (t + 1).to_string(),
                format!("{e:.12e}"),
                format!("{c:.12e}"),
                format!("{s:.12e}"),
                format!("{:.12e}", self.bound),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Squared errors `(ξ(o=1 | h) − μ(o=1 | h))²` over `n` cycles of data drawn
/// from component `truth`, always acting 0.
pub fn convergence_errors(mixture: &Mixture, truth: usize, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut belief = Belief::<f64>::prior(mixture);
    let mut history = History::new();
    let action = Action(0);
    let mut errors = Vec::with_capacity(n);
    let p_one = |law: &crate::interaction::Law| -> f64 {
        law.entries()
            .iter()
            .filter(|(p, _)| p.observation == 1)
            .map(|(_, q)| f64::from_rational(*q))
            .sum()
    };
    for _ in 0..n {
        let laws: Vec<_> = mixture.components().iter().map(|c| c.law(&history, action)).collect();
        let post = belief.posterior().expect("the truth keeps positive mass");
        let xi: f64 = post.iter().zip(&laws).map(|(w, l)| w * p_one(l)).sum();
        let mu = p_one(&laws[truth]);
        errors.push((xi - mu).powi(2));
        let u: f64 = rng.random();
        let percept = laws[truth].sample_with(u).expect("the truth is proper");
        belief.update(mixture, &history, action, percept);
        belief.renormalize().expect("the truth keeps positive mass");
        history.push(action, percept);
    }
    errors
}

pub fn run_convergence(cfg: &ConvergenceConfig) -> Result<ConvergenceReport, ExperimentError> {
    let mixture = cfg.class.build()?;
    if cfg.truth >= mixture.len() {
        return Err(ExperimentError::TruthNotInClass {
            truth: cfg.truth,
            len: mixture.len(),
        });
    }
    if !mixture.components()[cfg.truth].is_proper() {
        return Err(invalid("truth", "the true component must be a proper environment"));
    }
    let bound = -(mixture.prior()[cfg.truth].as_f64()).ln();
    let per_seed: Vec<Vec<f64>> = cfg
        .seeds
        .to_vec()
        .par_iter()
        .map(|&s| convergence_errors(&mixture, cfg.truth, cfg.n, s))
        .collect();
    let mut running = vec![0.0; per_seed.len()];
    let mut steps = Vec::with_capacity(cfg.n);
    for t in 0..cfg.n {
        let mut sq = 0.0;
        for (r, errs) in running.iter_mut().zip(&per_seed) {
            *r += errs[t];
            sq += errs[t];
        }
        let (mean, se) = mean_and_std_err(&running);
        steps.push((sq / per_seed.len().max(1) as f64, mean, se));
    }
    let (final_mean, final_std_err) = steps.last().map_or((0.0, 0.0), |s| (s.1, s.2));
    Ok(ConvergenceReport {
        bound,
        steps,
        final_mean,
        final_std_err,
    })
}

/// Whether the copy program `~[,..<~]` fits the length bound and emits each
/// symbol within the per-symbol step budget on a probe input.
pub fn admits_copy_program(params: ApproximationParams) -> bool {
    let program = programs::copy_pairs();
    if program.len() > params.max_len {
        return false;
    }
    let bits = program.bits().bits();
    let coins = [true, false, true, true, false, false, true, false];
    let mut machine = Machine::new();
    for emitted in 1..=2 * coins.len() {
        let budget = machine.steps() + params.step_budget;
        if machine.run(bits, &coins, budget, emitted) != Stop::OutputLimit {
            return false;
        }
    }
    let expected: Vec<bool> = coins.iter().flat_map(|&c| [c, c]).collect();
    machine.output().bits() == expected
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorWindow {
    pub start: usize,
    pub end: usize,
    pub even: f64,
    pub odd: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectedBitsReport {
    /// Per seed, per step (1-based index `t = i + 1`): whether the
    /// predictor's most probable bit was wrong.
    pub mistakes: Vec<Vec<bool>>,
    /// Per seed, per step: normalized probability given to the actual bit.
    pub confidence: Vec<Vec<f64>>,
    pub windows: Vec<ErrorWindow>,
}

impl SelectedBitsReport {
    fn rate(&self, range: std::ops::Range<usize>, even: bool) -> f64 {
        let mut wrong = 0usize;
        let mut total = 0usize;
        for seed in &self.mistakes {
            for i in range.clone() {
                if ((i + 1) % 2 == 0) == even && i < seed.len() {
                    total += 1;
                    wrong += seed[i] as usize;
                }
            }
        }
        wrong as f64 / total.max(1) as f64
    }

    /// Error rates at even and odd times over steps `start..=end` (1-based).
    pub fn window(&self, start: usize, end: usize) -> ErrorWindow {
        ErrorWindow {
            start,
            end,
            even: self.rate(start - 1..end, true),
            odd: self.rate(start - 1..end, false),
        }
    }

    /// `step,parity,error_rate,mean_confidence` averaged over seeds.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "parity", "error_rate", "mean_confidence"])?;
        let n = self.mistakes.first().map_or(0, Vec::len);
        let seeds = self.mistakes.len().max(1) as f64;
        for i in 0..n {
            let errors = self.mistakes.iter().filter(|m| m[i]).count() as f64 / seeds;
            let conf = self.confidence.iter().map(|c| c[i]).sum::<f64>() / seeds;
            let parity = if (i + 1) % 2 == 0 { "even" } else { "odd" };
            w.write_record([(i + 1).to_string(), parity.into(), format!("{errors:.6}"), format!("{conf:.12}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `start,end,even_error,odd_error`
    pub fn write_windows_csv<W: std::io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["start", "end", "even_error", "odd_error"])?;
        for win in &self.windows {
            w.write_record([win.start.to_string(), win.end.to_string(), format!("{:.6}", win.even), format!("{:.6}", win.odd)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Steps over which predictors are shared between seeds. The early steps
/// dominate the cost and only a handful of prefixes occur among the seeds.
const SHARED_PREFIX: usize = 4;

type Trace = (Vec<bool>, Vec<f64>);

fn record(predictor: &mut StreamPredictor, bit: bool, trace: &mut Trace) {
    let next = predictor.predict();
    trace.0.push(next.argmax() != bit);
    trace.1.push(next.normalized(bit).unwrap_or(0.0));
}

/// Depth-first over the prefix trie of `group`'s sequences, one predictor per
/// trie node, so only the current path is held in memory.
fn walk_prefixes(mut predictor: StreamPredictor, depth: usize, group: &[usize], sequences: &[Vec<bool>], traces: &mut [Trace]) {
    let n = sequences[group[0]].len();
    if depth == SHARED_PREFIX.min(n) {
        let finished: Vec<(usize, Trace)> = group
            .par_iter()
            .map(|&g| {
                let mut p = predictor.clone();
                let mut trace = traces[g].clone();
                for &bit in &sequences[g][depth..] {
                    record(&mut p, bit, &mut trace);
                    p.observe(bit);
                }
                (g, trace)
            })
            .collect();
        for (g, trace) in finished {
            traces[g] = trace;
        }
        return;
    }
    for &g in group {
        record(&mut predictor, sequences[g][depth], &mut traces[g]);
    }
    let zeros: Vec<usize> = group.iter().copied().filter(|&g| !sequences[g][depth]).collect();
    let ones: Vec<usize> = group.iter().copied().filter(|&g| sequences[g][depth]).collect();
    match (zeros.is_empty(), ones.is_empty()) {
        (false, false) => {
            let mut child = predictor.clone();
            child.observe(false);
            walk_prefixes(child, depth + 1, &zeros, sequences, traces);
            predictor.observe(true);
            walk_prefixes(predictor, depth + 1, &ones, sequences, traces);
        }
        (only_ones, _) => {
            predictor.observe(only_ones);
            walk_prefixes(predictor, depth + 1, group, sequences, traces);
        }
    }
}

pub fn run_selected_bits(cfg: &SelectedBitsConfig) -> Result<SelectedBitsReport, ExperimentError> {
    let params = ApproximationParams::new(cfg.max_len, cfg.step_budget);
    if !admits_copy_program(params) {
        return Err(ExperimentError::BudgetTooSmall {
            max_len: cfg.max_len,
            step_budget: cfg.step_budget,
        });
    }
    if cfg.window == 0 {
        return Err(invalid("window", "must be positive"));
    }
    let sequences: Vec<Vec<bool>> = cfg.seeds.iter().map(|s| selected_bits_env(s).sequence(cfg.n)).collect();
    let mut traces: Vec<Trace> = vec![(Vec::with_capacity(cfg.n), Vec::with_capacity(cfg.n)); sequences.len()];
    if cfg.n > 0 && !sequences.is_empty() {
        let all: Vec<usize> = (0..sequences.len()).collect();
        let mut root = StreamPredictor::new(params);
        if let Some(cap) = cfg.state_cap {
            if cap == 0 {
                return Err(invalid("state_cap", "must be positive"));
            }
            root = root.with_state_cap(cap);
        }
        walk_prefixes(root, 0, &all, &sequences, &mut traces);
    }
    let (mistakes, confidence) = traces.into_iter().unzip();
    let mut report = SelectedBitsReport {
        mistakes,
        confidence,
        windows: Vec::new(),
    };
    report.windows = (0..cfg.n.div_ceil(cfg.window))
        .map(|k| report.window(k * cfg.window + 1, ((k + 1) * cfg.window).min(cfg.n)))
        .collect();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfplayRun {
    pub seed: u64,
    pub actions_a: Vec<usize>,
    pub actions_b: Vec<usize>,
    pub rewards_a: Vec<f64>,
    pub rewards_b: Vec<f64>,
}

impl SelfplayRun {
    pub fn total_a(&self) -> f64 {
        self.rewards_a.iter().sum()
    }

    pub fn total_b(&self) -> f64 {
        self.rewards_b.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfplayLog {
    pub runs: Vec<SelfplayRun>,
}

impl SelfplayLog {
    pub fn mean_totals(&self) -> (f64, f64) {
        let n = self.runs.len().max(1) as f64;
        (
            self.runs.iter().map(SelfplayRun::total_a).sum::<f64>() / n,
            self.runs.iter().map(SelfplayRun::total_b).sum::<f64>() / n,
        )
    }

    /// `seed,cycle,action_a,action_b,reward_a,reward_b`
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["seed", "cycle", "action_a", "action_b", "reward_a", "reward_b"])?;
        for run in &self.runs {
            for k in 0..run.actions_a.len() {
                w.write_record([
                    run.seed.to_string(),
                    (k + 1).to_string(),
                    run.actions_a[k].to_string(),
                    run.actions_b[k].to_string(),
                    format!("{:.12}", run.rewards_a[k]),
                    format!("{:.12}", run.rewards_b[k]),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Two bounded expectimax players, each holding the finite opponent class,
/// play the repeated prisoner's dilemma. Player B lives inside player A's
/// environment; `opponent` swaps B for a fixed strategy.
pub fn run_selfplay(cfg: &SelfplayConfig) -> Result<SelfplayLog, crate::Error> {
    if cfg.horizon == 0 {
        return Err(invalid("horizon", "must be at least 1").into());
    }
    let payoffs = Payoffs::prisoners_dilemma();
    let opponent = cfg.opponent.clone().unwrap_or(Opponent::SelfPlay {
        horizon: cfg.horizon,
        lifetime: cfg.lifetime,
    });
    let env = matrix_game(payoffs, opponent)?;
    let agent = ExpectimaxAgent::new("player-a", opponent_class(payoffs), Some(cfg.horizon));
    let spec = PlanningSpec::for_environment(&env, cfg.lifetime);
    let runs = cfg
        .seeds
        .to_vec()
        .par_iter()
        .map(|&seed| {
            let ep = run_episode(&agent, &env, &spec, seed)?;
            let mirrored = env.mirrored_history(&ep.history);
            let f = |r| f64::from_rational(r);
            Ok(SelfplayRun {
                seed,
                actions_a: ep.history.actions().map(|a| a.0).collect(),
                actions_b: mirrored.actions().map(|a| a.0).collect(),
                rewards_a: ep.history.cycles().iter().map(|(_, p)| f(p.reward)).collect(),
                rewards_b: mirrored.cycles().iter().map(|(_, p)| f(p.reward)).collect(),
            })
        })
        .collect::<Result<Vec<_>, AgentError>>()?;
    Ok(SelfplayLog { runs })
}

/// Greedy prediction with the normalized program-mixture predictor; the
/// action is the predicted observation bit. Acts at random once no program
/// explains the observations.
pub struct StreamPolicy {
    params: ApproximationParams,
    state_cap: Option<usize>,
    state: Mutex<StreamPredictor>,
}

impl StreamPolicy {
    pub fn new(params: ApproximationParams) -> Self {
        Self {
            params,
            state_cap: None,
            state: Mutex::new(StreamPredictor::new(params)),
        }
    }

    /// See [`StreamPredictor::with_state_cap`].
    pub fn with_state_cap(mut self, width: usize) -> Self {
        self.state_cap = Some(width);
        self.state = Mutex::new(self.fresh());
        self
    }

    fn fresh(&self) -> StreamPredictor {
        let p = StreamPredictor::new(self.params);
        match self.state_cap {
            Some(w) => p.with_state_cap(w),
            None => p,
        }
    }
}

impl Policy for StreamPolicy {
    fn name(&self) -> String {
        "stream-predictor".into()
    }

    fn decide(&self, history: &History, spec: &PlanningSpec, rng: &mut dyn RngCore) -> Result<Decision, AgentError> {
        let mut p = self.state.lock().expect("predictor lock");
        if p.observed() > history.len() {
            *p = self.fresh();
        }
        for (_, percept) in &history.cycles()[p.observed()..] {
            p.observe(percept.observation == 1);
        }
        let next = p.predict();
        match (next.normalized(false), next.normalized(true)) {
            (Some(zero), Some(one)) => Ok(Decision {
                action: Action(next.argmax() as usize),
                root_values: Some(vec![zero, one]),
                posterior: None,
            }),
            _ => RandomAgent.decide(history, spec, rng),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionGapReport {
    pub seeds: Vec<u64>,
    /// Per seed: mean reward per cycle of each arm.
    pub predictor: Vec<f64>,
    pub aixi: Vec<f64>,
    pub predictor_mean: f64,
    pub aixi_mean: f64,
    /// Mean over seeds of `predictor − aixi`.
    pub gap: f64,
    pub gap_std_err: f64,
    pub class_size: usize,
}

impl PredictionGapReport {
    /// `seed,predictor_reward,aixi_reward,gap`
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["seed", "predictor_reward", "aixi_reward", "gap"])?;
        for i in 0..self.seeds.len() {
            w.write_record([
                self.seeds[i].to_string(),
                format!("{:.12}", self.predictor[i]),
                format!("{:.12}", self.aixi[i]),
                format!("{:.12}", self.predictor[i] - self.aixi[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Realized reward of (a) greedy normalized program-mixture prediction and
/// (b) expectimax over the program class, on a prediction task. Both arms
/// see the same seeds; an arm whose model is exhausted acts at random.
pub fn run_prediction_gap(cfg: &PredictionGapConfig) -> Result<PredictionGapReport, crate::Error> {
    let params = ApproximationParams::new(cfg.max_len, cfg.step_budget);
    let probe = cfg.env.build(0)?;
    if probe.num_actions() != 2 || probe.num_observations() != 2 {
        return Err(invalid("env", "needs a binary prediction environment").into());
    }
    if cfg.horizon == 0 {
        return Err(invalid("horizon", "must be at least 1").into());
    }
    if cfg.state_cap == Some(0) {
        return Err(invalid("state_cap", "must be positive").into());
    }
    let predictor = || match cfg.state_cap {
        Some(w) => StreamPolicy::new(params).with_state_cap(w),
        None => StreamPolicy::new(params),
    };
    let aixi: Arc<dyn Policy> = match program_class(params, cfg.class_cycles, 2) {
        Ok(class) => Arc::new(WithRandomFallback {
            primary: ExpectimaxAgent::new("aixi", class, Some(cfg.horizon)),
        }),
        Err(MixtureError::EmptyClass { .. }) => Arc::new(RandomAgent),
        Err(e) => return Err(e.into()),
    };
    let class_size = program_class(params, cfg.class_cycles, 2).map_or(0, |m| m.len());
    let seeds = cfg.seeds.to_vec();
    let per_seed = seeds
        .par_iter()
        .map(|&seed| {
            let env = cfg.env.build(seed)?;
            let spec = PlanningSpec::for_environment(env.as_ref(), cfg.n);
            let per_cycle = |total: f64| total / cfg.n.max(1) as f64;
            let a = run_episode(&predictor(), env.as_ref(), &spec, seed)?;
            let b = run_episode(aixi.as_ref(), env.as_ref(), &spec, seed)?;
            Ok((per_cycle(a.total_reward_f64()), per_cycle(b.total_reward_f64())))
        })
        .collect::<Result<Vec<(f64, f64)>, crate::Error>>()?;
    let (predictor, aixi): (Vec<f64>, Vec<f64>) = per_seed.into_iter().unzip();
    let gaps: Vec<f64> = predictor.iter().zip(&aixi).map(|(a, b)| a - b).collect();
    let (gap, gap_std_err) = mean_and_std_err(&gaps);
    Ok(PredictionGapReport {
        seeds,
        predictor_mean: mean_and_std_err(&predictor).0,
        aixi_mean: mean_and_std_err(&aixi).0,
        predictor,
        aixi,
        gap,
        gap_std_err,
        class_size,
    })
}

pub fn run_ior(cfg: &IorConfig) -> Result<(Vec<IntelligenceScore>, Ranking), crate::Error> {
    let scores = cfg
        .agents
        .iter()
        .map(|a| intelligence_score(a, &cfg.suite))
        .collect::<Result<Vec<_>, _>>()?;
    let ranking = order(&scores)?;
    Ok((scores, ranking))
}

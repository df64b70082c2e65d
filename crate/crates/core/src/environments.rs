//! The concrete environment suite: prediction tasks, a repeated 2×2 matrix
//! game and tiny MDPs, plus a catalog that builds them (and the model classes
//! agents use for them) from a name and parameters.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{ExpectimaxAgent, PlanningSpec};
use crate::interaction::{Action, Environment, History, Law, Percept, Probability, Reward};
use crate::mixture::{Mixture, PriorScheme};
use crate::scalar::parse_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvError {
    #[error("parameter {name} = {value} must lie in [0, 1]")]
    OutOfRange { name: &'static str, value: String },
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("unknown environment {0:?}")]
    Unknown(String),
}

fn unit_interval(name: &'static str, value: Rational64) -> Result<Rational64, EnvError> {
    if value < Rational64::zero() || value > Rational64::one() {
        return Err(EnvError::OutOfRange {
            name,
            value: value.to_string(),
        });
    }
    Ok(value)
}

fn hit(a: Action, observation: usize) -> Reward {
    Reward::from_integer((a.0 == observation) as i64)
}

/// Each cycle the observation is a Bernoulli(θ) bit; the action is a
/// prediction of it and earns reward 1 when correct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliPrediction {
    theta: Probability,
}

pub fn bernoulli_prediction(theta: Probability) -> Result<BernoulliPrediction, EnvError> {
    Ok(BernoulliPrediction {
        theta: unit_interval("theta", theta)?,
    })
}

impl BernoulliPrediction {
    pub fn theta(&self) -> Probability {
        self.theta
    }
}

impl Environment for BernoulliPrediction {
    fn name(&self) -> String {
        format!("bernoulli:{}", self.theta)
    }

    fn num_actions(&self) -> usize {
        2
    }

    fn num_observations(&self) -> usize {
        2
    }

    fn law(&self, _: &History, action: Action) -> Law {
        Law::new([
            (Percept::new(0, hit(action, 0)), Probability::one() - self.theta),
            (Percept::new(1, hit(action, 1)), self.theta),
        ])
    }
}

/// Odd cycles show a bit from a seeded ChaCha20 stream; each even cycle
/// repeats the bit of the cycle before. Actions are predictions, rewarded 1
/// when correct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectedBits {
    seed: u64,
}

pub fn selected_bits_env(seed: u64) -> SelectedBits {
    SelectedBits { seed }
}

impl SelectedBits {
    /// The `i`-th bit of the odd-cycle source (0-based).
    pub fn odd_bit(&self, i: usize) -> bool {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_word_pos((i / 32) as u128);
        (rng.next_u32() >> (i % 32)) & 1 == 1
    }

    /// Observation of cycle `t` (1-based).
    pub fn observation(&self, t: usize) -> bool {
        self.odd_bit((t - 1) / 2)
    }

    /// The first `n` observations.
    pub fn sequence(&self, n: usize) -> Vec<bool> {
        (1..=n).map(|t| self.observation(t)).collect()
    }
}

impl Environment for SelectedBits {
    fn name(&self) -> String {
        format!("selected-bits:{}", self.seed)
    }

    fn num_actions(&self) -> usize {
        2
    }

    fn num_observations(&self) -> usize {
        2
    }

    fn law(&self, history: &History, action: Action) -> Law {
        let o = self.observation(history.current_cycle()) as usize;
        Law::certain(Percept::new(o, hit(action, o)))
    }
}

/// The structure of [`SelectedBits`] without its source: odd cycles are
/// fair coins, even cycles copy the previous observation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CopyModel;

impl Environment for CopyModel {
    fn name(&self) -> String {
        "copy-model".into()
    }

    fn num_actions(&self) -> usize {
        2
    }

    fn num_observations(&self) -> usize {
        2
    }

    fn law(&self, history: &History, action: Action) -> Law {
        if history.current_cycle() % 2 == 0 {
            let o = history.last().map_or(0, |(_, p)| p.observation);
            return Law::certain(Percept::new(o, hit(action, o)));
        }
        let half = Probability::new(1, 2);
        Law::new([
            (Percept::new(0, hit(action, 0)), half),
            (Percept::new(1, hit(action, 1)), half),
        ])
    }
}

pub const COOPERATE: usize = 0;
pub const DEFECT: usize = 1;

/// Agent reward indexed by `[agent move][opponent move]`, moves 0 = C, 1 = D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Payoffs(pub [[Reward; 2]; 2]);

impl Payoffs {
    /// The prisoner's dilemma scaled into `[0, 1]`: T = 1 > R = 2/3 > P = 1/3 > S = 0.
    pub fn prisoners_dilemma() -> Self {
        let r = Reward::new;
        Payoffs([[r(2, 3), r(0, 1)], [r(1, 1), r(1, 3)]])
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        for row in &self.0 {
            for &v in row {
                unit_interval("payoff", v)?;
            }
        }
        Ok(())
    }

    /// The ordering T > R > P > S and 2R > T + S of a prisoner's dilemma.
    pub fn is_prisoners_dilemma(&self) -> bool {
        let [[r, s], [t, p]] = self.0;
        t > r && r > p && p > s && r + r > t + s
    }

    pub fn reward(&self, own: usize, other: usize) -> Reward {
        self.0[own][other]
    }
}

impl Default for Payoffs {
    fn default() -> Self {
        Self::prisoners_dilemma()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Opponent {
    AlwaysCooperate,
    AlwaysDefect,
    TitForTat,
    /// Cooperates with probability `p` each cycle.
    Random {
        #[serde(with = "crate::scalar::serde_rational")]
        p: Probability,
    },
    /// An expectimax agent over a finite class of opponent models, planning
    /// `horizon` cycles ahead within a lifetime of `lifetime` cycles.
    SelfPlay { horizon: usize, lifetime: usize },
}

impl fmt::Display for Opponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Opponent::AlwaysCooperate => write!(f, "allc"),
            Opponent::AlwaysDefect => write!(f, "alld"),
            Opponent::TitForTat => write!(f, "tft"),
            Opponent::Random { p } => write!(f, "random:{p}"),
            Opponent::SelfPlay { horizon, lifetime } => write!(f, "selfplay:{horizon}:{lifetime}"),
        }
    }
}

/// A repeated 2×2 game against a fixed opponent. Both sides move
/// simultaneously; the agent then observes the opponent's move and receives
/// its reward from the table.
#[derive(Clone, Debug)]
pub struct MatrixGame {
    payoffs: Payoffs,
    opponent: Opponent,
    /// Planner behind a self-play opponent.
    planner: Option<ExpectimaxAgent>,
}

pub fn matrix_game(payoffs: Payoffs, opponent: Opponent) -> Result<MatrixGame, EnvError> {
    payoffs.validate()?;
    if let Opponent::Random { p } = opponent {
        unit_interval("p", p)?;
    }
    let planner = match opponent {
        Opponent::SelfPlay { horizon, .. } => Some(ExpectimaxAgent::new(
            "selfplay",
            opponent_class(payoffs),
            Some(horizon.max(1)),
        )),
        _ => None,
    };
    Ok(MatrixGame {
        payoffs,
        opponent,
        planner,
    })
}

/// The finite class a bounded player holds about its counterpart:
/// always-cooperate, always-defect, tit-for-tat and a fair coin, uniformly.
pub fn opponent_class(payoffs: Payoffs) -> Mixture {
    let members = [
        Opponent::AlwaysCooperate,
        Opponent::AlwaysDefect,
        Opponent::TitForTat,
        Opponent::Random { p: Probability::new(1, 2) },
    ];
    let components = members
        .into_iter()
        .map(|o| Arc::new(matrix_game(payoffs, o).expect("valid members")) as Arc<dyn Environment>)
        .collect();
    Mixture::with_scheme(components, PriorScheme::Uniform).expect("non-empty class")
}

impl MatrixGame {
    pub fn payoffs(&self) -> Payoffs {
        self.payoffs
    }

    pub fn opponent(&self) -> &Opponent {
        &self.opponent
    }

    /// The game from the opponent's side: its moves, the agent's moves as its
    /// observations, and its own rewards.
    pub fn mirrored_history(&self, history: &History) -> History {
        History::from_cycles(
            history
                .cycles()
                .iter()
                .map(|(a, p)| {
                    let (own, other) = (p.observation, a.0);
                    (Action(own), Percept::new(other, self.payoffs.reward(own, other)))
                })
                .collect(),
        )
    }

    /// Opponent's probability of cooperating this cycle.
    fn cooperation(&self, history: &History) -> Probability {
        let certain = |c: bool| if c { Probability::one() } else { Probability::zero() };
        match &self.opponent {
            Opponent::AlwaysCooperate => Probability::one(),
            Opponent::AlwaysDefect => Probability::zero(),
            Opponent::TitForTat => certain(history.last().is_none_or(|(a, _)| a.0 == COOPERATE)),
            Opponent::Random { p } => *p,
            Opponent::SelfPlay { lifetime, .. } => {
                let planner = self.planner.as_ref().expect("self-play has a planner");
                let spec = PlanningSpec {
                    num_actions: 2,
                    num_observations: 2,
                    lifetime: (*lifetime).max(history.current_cycle()),
                };
                let own = self.mirrored_history(history);
                // A lost model falls back to cooperation.
                let action = planner.plan(&own, &spec).map_or(COOPERATE, |r| r.chosen.0);
                certain(action == COOPERATE)
            }
        }
    }
}

impl Environment for MatrixGame {
    fn name(&self) -> String {
        format!("matrix-game:{}", self.opponent)
    }

    fn num_actions(&self) -> usize {
        2
    }

    fn num_observations(&self) -> usize {
        2
    }

    fn law(&self, history: &History, action: Action) -> Law {
        let c = self.cooperation(history);
        Law::new([
            (Percept::new(COOPERATE, self.payoffs.reward(action.0, COOPERATE)), c),
            (Percept::new(DEFECT, self.payoffs.reward(action.0, DEFECT)), Probability::one() - c),
        ])
    }
}

pub const MAX_MDP_STATES: usize = 4;

/// A finite MDP observed fully: the observation is the state entered, the
/// reward is paid for the action taken in the state left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TinyMdp {
    /// `transitions[s][a][s']`
    transitions: Vec<Vec<Vec<Probability>>>,
    /// `rewards[s][a]`
    rewards: Vec<Vec<Reward>>,
    initial: usize,
    label: String,
}

pub fn tiny_mdp(
    transitions: Vec<Vec<Vec<Probability>>>,
    rewards: Vec<Vec<Reward>>,
    initial: usize,
) -> Result<TinyMdp, EnvError> {
    let bad = |msg: String| Err(EnvError::MalformedModel(msg));
    let n = transitions.len();
    if n == 0 || n > MAX_MDP_STATES {
        return bad(format!("{n} states; expected 1 to {MAX_MDP_STATES}"));
    }
    if initial >= n {
        return bad(format!("initial state {initial} out of range"));
    }
    if rewards.len() != n {
        return bad(format!("{} reward rows for {n} states", rewards.len()));
    }
    let actions = transitions[0].len();
    if actions == 0 {
        return bad("no actions".into());
    }
    for (s, row) in transitions.iter().enumerate() {
        if row.len() != actions || rewards[s].len() != actions {
            return bad(format!("state {s} does not list {actions} actions"));
        }
        for (a, dist) in row.iter().enumerate() {
            if dist.len() != n {
                return bad(format!("transition row ({s}, {a}) has {} entries", dist.len()));
            }
            if dist.iter().any(|p| *p < Probability::zero()) {
                return bad(format!("transition row ({s}, {a}) has a negative entry"));
            }
            let total: Probability = dist.iter().sum();
            if !total.is_one() {
                return bad(format!("transition row ({s}, {a}) sums to {total}"));
            }
            unit_interval("reward", rewards[s][a])?;
        }
    }
    let label = format!("mdp:{n}x{actions}");
    Ok(TinyMdp {
        transitions,
        rewards,
        initial,
        label,
    })
}

impl TinyMdp {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn state(&self, history: &History) -> usize {
        history.last().map_or(self.initial, |(_, p)| p.observation)
    }

    pub fn transition(&self, s: usize, a: usize, next: usize) -> Probability {
        self.transitions[s][a][next]
    }

    pub fn reward(&self, s: usize, a: usize) -> Reward {
        self.rewards[s][a]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Two states. In s0, action 0 stays and pays 1/4, action 1 moves to s1
    /// and pays nothing. In s1, action 0 stays and pays 1, action 1 returns
    /// to s0 and pays nothing.
    pub fn chain() -> Self {
        let (z, o) = (Probability::zero(), Probability::one());
        tiny_mdp(
            vec![vec![vec![o, z], vec![z, o]], vec![vec![z, o], vec![o, z]]],
            vec![vec![Reward::new(1, 4), z], vec![o, z]],
            0,
        )
        .expect("well-formed")
        .with_label("mdp:chain")
    }

    /// Models an agent entertains for [`TinyMdp::chain`]: the chain itself,
    /// the chain with its actions swapped, and a chain whose far state pays
    /// nothing.
    pub fn chain_variants() -> Vec<TinyMdp> {
        let (z, o) = (Probability::zero(), Probability::one());
        let swapped = tiny_mdp(
            vec![vec![vec![z, o], vec![o, z]], vec![vec![o, z], vec![z, o]]],
            vec![vec![z, Reward::new(1, 4)], vec![z, o]],
            0,
        )
        .expect("well-formed")
        .with_label("mdp:chain-swapped");
        let barren = tiny_mdp(
            vec![vec![vec![o, z], vec![z, o]], vec![vec![z, o], vec![o, z]]],
            vec![vec![Reward::new(1, 4), z], vec![z, z]],
            0,
        )
        .expect("well-formed")
        .with_label("mdp:chain-barren");
        vec![Self::chain(), swapped, barren]
    }
}

impl Environment for TinyMdp {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn num_actions(&self) -> usize {
        self.transitions[0].len()
    }

    fn num_observations(&self) -> usize {
        self.transitions.len()
    }

    fn law(&self, history: &History, action: Action) -> Law {
        let s = self.state(history);
        let r = self.rewards[s][action.0];
        Law::new(
            self.transitions[s][action.0]
                .iter()
                .enumerate()
                .map(|(next, p)| (Percept::new(next, r), *p)),
        )
    }
}

/// Pays the same reward whatever happens; one observation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantReward {
    reward: Reward,
    num_actions: usize,
}

pub fn constant_reward(reward: Reward, num_actions: usize) -> Result<ConstantReward, EnvError> {
    Ok(ConstantReward {
        reward: unit_interval("reward", reward)?,
        num_actions: num_actions.max(1),
    })
}

impl Environment for ConstantReward {
    fn name(&self) -> String {
        format!("constant:{}", self.reward)
    }

    fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn num_observations(&self) -> usize {
        1
    }

    fn law(&self, _: &History, _: Action) -> Law {
        Law::certain(Percept::new(0, self.reward))
    }
}

/// A catalog entry by name and parameters.
///
/// Textual form: `bernoulli:3/4`, `selected-bits` or `selected-bits:7`,
/// `pd:allc|alld|tft|random:P|selfplay:H:M`, `mdp:chain`, `constant:R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnvSpec {
    Bernoulli {
        #[serde(with = "crate::scalar::serde_rational")]
        theta: Probability,
    },
    /// Without a fixed `seed`, each episode draws its source from the
    /// episode seed.
    SelectedBits {
        #[serde(default)]
        seed: Option<u64>,
    },
    CopyModel,
    PrisonersDilemma {
        opponent: Opponent,
    },
    MdpChain,
    Constant {
        #[serde(with = "crate::scalar::serde_rational")]
        reward: Reward,
    },
}

impl EnvSpec {
    /// The environment an episode with the given seed runs in.
    pub fn build(&self, episode_seed: u64) -> Result<Arc<dyn Environment>, EnvError> {
        Ok(match self {
            EnvSpec::Bernoulli { theta } => Arc::new(bernoulli_prediction(*theta)?),
            EnvSpec::SelectedBits { seed } => Arc::new(selected_bits_env(seed.unwrap_or(episode_seed))),
            EnvSpec::CopyModel => Arc::new(CopyModel),
            EnvSpec::PrisonersDilemma { opponent } => {
                Arc::new(matrix_game(Payoffs::prisoners_dilemma(), opponent.clone())?)
            }
            EnvSpec::MdpChain => Arc::new(TinyMdp::chain()),
            EnvSpec::Constant { reward } => Arc::new(constant_reward(*reward, 2)?),
        })
    }

    /// The class an AIξ agent plans with when placed in this environment.
    pub fn model_class(&self) -> Result<Mixture, EnvError> {
        let arc = |e: Arc<dyn Environment>| e;
        let class = match self {
            EnvSpec::Bernoulli { .. } => bernoulli_grid(),
            EnvSpec::SelectedBits { .. } | EnvSpec::CopyModel => {
                let mut components = vec![arc(Arc::new(CopyModel))];
                for (n, d) in [(1, 2), (1, 4), (3, 4)] {
                    components.push(Arc::new(bernoulli_prediction(Probability::new(n, d))?));
                }
                Mixture::with_scheme(components, PriorScheme::EliasGamma)
                    .map_err(|e| EnvError::MalformedModel(e.to_string()))?
            }
            EnvSpec::PrisonersDilemma { .. } => opponent_class(Payoffs::prisoners_dilemma()),
            EnvSpec::MdpChain => Mixture::with_scheme(
                TinyMdp::chain_variants()
                    .into_iter()
                    .map(|m| arc(Arc::new(m)))
                    .collect(),
                PriorScheme::Uniform,
            )
            .map_err(|e| EnvError::MalformedModel(e.to_string()))?,
            EnvSpec::Constant { .. } => Mixture::singleton(self.build(0)?),
        };
        Ok(class)
    }

    pub fn tags(&self) -> &'static [&'static str] {
        match self {
            EnvSpec::Bernoulli { .. } | EnvSpec::SelectedBits { .. } | EnvSpec::CopyModel => &["prediction"],
            EnvSpec::PrisonersDilemma {
                opponent: Opponent::SelfPlay { .. },
            } => &["game", "adversarial"],
            EnvSpec::PrisonersDilemma { .. } => &["game"],
            EnvSpec::MdpChain => &["mdp"],
            EnvSpec::Constant { .. } => &["control"],
        }
    }
}

/// Bernoulli prediction with θ ∈ {1/10, …, 9/10}, uniform prior.
pub fn bernoulli_grid() -> Mixture {
    let components = (1..10)
        .map(|i| Arc::new(bernoulli_prediction(Probability::new(i, 10)).expect("in range")) as Arc<dyn Environment>)
        .collect();
    Mixture::with_scheme(components, PriorScheme::Uniform).expect("non-empty")
}

/// Bernoulli prediction with θ ∈ {0, 1/8, …, 1}, uniform prior: nine
/// components like [`bernoulli_grid`], but with 3/4 among them.
pub fn bernoulli_eighths() -> Mixture {
    let components = (0..=8)
        .map(|i| Arc::new(bernoulli_prediction(Probability::new(i, 8)).expect("in range")) as Arc<dyn Environment>)
        .collect();
    Mixture::with_scheme(components, PriorScheme::Uniform).expect("non-empty")
}

impl fmt::Display for EnvSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvSpec::Bernoulli { theta } => write!(f, "bernoulli:{theta}"),
            EnvSpec::SelectedBits { seed: None } => write!(f, "selected-bits"),
            EnvSpec::SelectedBits { seed: Some(s) } => write!(f, "selected-bits:{s}"),
            EnvSpec::CopyModel => write!(f, "copy-model"),
            EnvSpec::PrisonersDilemma { opponent } => write!(f, "pd:{opponent}"),
            EnvSpec::MdpChain => write!(f, "mdp:chain"),
            EnvSpec::Constant { reward } => write!(f, "constant:{reward}"),
        }
    }
}

impl FromStr for EnvSpec {
    type Err = EnvError;

    fn from_str(s: &str) -> Result<Self, EnvError> {
        let unknown = || EnvError::Unknown(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let rational = |t: &str| parse_rational(t).ok_or_else(unknown);
        let int = |t: &str| t.parse::<usize>().map_err(|_| unknown());
        Ok(match parts.as_slice() {
            ["bernoulli", theta] => EnvSpec::Bernoulli {
                theta: unit_interval("theta", rational(theta)?)?,
            },
            ["selected-bits"] => EnvSpec::SelectedBits { seed: None },
            ["selected-bits", seed] => EnvSpec::SelectedBits {
                seed: Some(seed.parse().map_err(|_| unknown())?),
            },
            ["copy-model"] => EnvSpec::CopyModel,
            ["pd", rest @ ..] => EnvSpec::PrisonersDilemma {
                opponent: match rest {
                    ["allc"] => Opponent::AlwaysCooperate,
                    ["alld"] => Opponent::AlwaysDefect,
                    ["tft"] => Opponent::TitForTat,
                    ["random", p] => Opponent::Random {
                        p: unit_interval("p", rational(p)?)?,
                    },
                    ["selfplay", h, m] => Opponent::SelfPlay {
                        horizon: int(h)?,
                        lifetime: int(m)?,
                    },
                    _ => return Err(unknown()),
                },
            },
            ["mdp", "chain"] => EnvSpec::MdpChain,
            ["constant", r] => EnvSpec::Constant {
                reward: unit_interval("reward", rational(r)?)?,
            },
            _ => return Err(unknown()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: EnvSpec,
    pub num_actions: usize,
    pub num_observations: usize,
    pub tags: &'static [&'static str],
    pub description: &'static str,
}

fn entry(spec: &str, description: &'static str) -> CatalogEntry {
    let parsed: EnvSpec = spec.parse().expect("catalog specs parse");
    let env = parsed.build(0).expect("catalog specs build");
    CatalogEntry {
        name: spec.to_string(),
        num_actions: env.num_actions(),
        num_observations: env.num_observations(),
        tags: parsed.tags(),
        spec: parsed,
        description,
    }
}

/// Every named environment, in catalog order.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        entry("bernoulli:3/4", "predict a Bernoulli(3/4) bit; reward 1 when right"),
        entry("selected-bits", "random odd bits, each even bit repeats the one before"),
        entry("pd:tft", "prisoner's dilemma against tit-for-tat"),
        entry("mdp:chain", "two-state chain; the paying state is one unpaid step away"),
        entry("pd:allc", "prisoner's dilemma against an unconditional cooperator"),
        entry("pd:alld", "prisoner's dilemma against an unconditional defector"),
        entry("pd:random:1/2", "prisoner's dilemma against a fair coin"),
        entry("pd:selfplay:2:10", "prisoner's dilemma against a bounded expectimax player"),
        entry("constant:1/2", "reward 1/2 whatever the agent does"),
    ]
}

/// The first four catalog entries: one prediction task, one sequence task
/// with hidden structure, one game, one MDP.
pub fn default_suite() -> Vec<EnvSpec> {
    catalog().into_iter().take(4).map(|e| e.spec).collect()
}

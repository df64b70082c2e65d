//! Finite-horizon expectimax agents.
//!
//! The value of a history is computed by alternating a maximum over actions
//! with an expectation over percepts, in chronological order, under the
//! posterior-predictive law of a [`Mixture`]. AIμ is the singleton mixture of
//! the true environment, AIξ a hand-built class, AIXI the program class.
//!
//! Internally the tree carries unnormalized joint weights `w_ν ν(h')` down
//! each branch, so no posterior is ever renormalized inside the search: with
//! `W(h)` the mixture mass of `h`,
//!
//! ```text
//! U(h) = max_a Σ_e [ W(h a e) r(e) + U(h a e) ],   V(h) = U(h) / W(h)
//! ```

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interaction::{Action, Environment, History, Percept, Reward};
use crate::mixture::{Belief, Mixture, MixtureError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgentError {
    #[error("no model component assigns the history positive mass")]
    ZeroMass,
    #[error("cycle {cycle} lies beyond the lifetime {lifetime}")]
    HorizonOverflow { cycle: usize, lifetime: usize },
    #[error("the environment produced no percept in cycle {0}")]
    EnvironmentVanished(usize),
    #[error("planning spec has {0}; expected at least one")]
    EmptySignature(&'static str),
}

impl From<MixtureError> for AgentError {
    fn from(_: MixtureError) -> Self {
        AgentError::ZeroMass
    }
}

/// Action set `{0..num_actions}`, observation set `{0..num_observations}`,
/// rewards in `[0, 1]` and lifetime `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanningSpec {
    pub num_actions: usize,
    pub num_observations: usize,
    pub lifetime: usize,
}

impl PlanningSpec {
    pub fn new(num_actions: usize, num_observations: usize, lifetime: usize) -> Result<Self, AgentError> {
        if num_actions == 0 {
            return Err(AgentError::EmptySignature("no actions"));
        }
        if num_observations == 0 {
            return Err(AgentError::EmptySignature("no observations"));
        }
        Ok(Self {
            num_actions,
            num_observations,
            lifetime,
        })
    }

    pub fn for_environment(env: &dyn Environment, lifetime: usize) -> Self {
        Self {
            num_actions: env.num_actions(),
            num_observations: env.num_observations(),
            lifetime,
        }
    }

    /// Cycles left including the current one, or `HorizonOverflow`.
    pub fn remaining(&self, history: &History) -> Result<usize, AgentError> {
        let k = history.current_cycle();
        if k > self.lifetime {
            return Err(AgentError::HorizonOverflow {
                cycle: k,
                lifetime: self.lifetime,
            });
        }
        Ok(self.lifetime - k + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValueReport<S> {
    /// Expected reward sum `r_k + … + r_m` under optimal play.
    pub value: S,
    /// Root value of each action, in action order.
    pub action_values: Vec<S>,
    /// The lowest-index action attaining `value`.
    pub chosen: Action,
}

/// Full expectimax value of `history` up to the lifetime in `spec`.
pub fn value<S: Scalar>(
    model: &Mixture,
    history: &History,
    spec: &PlanningSpec,
) -> Result<ValueReport<S>, AgentError> {
    let depth = spec.remaining(history)?;
    value_to_depth(model, history, spec.num_actions, depth)
}

pub fn best_action<S: Scalar>(
    model: &Mixture,
    history: &History,
    spec: &PlanningSpec,
) -> Result<Action, AgentError> {
    Ok(value::<S>(model, history, spec)?.chosen)
}

/// Expectimax over the next `depth` cycles (`depth ≥ 1`).
pub fn value_to_depth<S: Scalar>(
    model: &Mixture,
    history: &History,
    num_actions: usize,
    depth: usize,
) -> Result<ValueReport<S>, AgentError> {
    assert!(depth >= 1, "plan at least one cycle");
    let belief = model.belief::<S>(history);
    let mass = belief.mass();
    if mass.is_zero() {
        return Err(AgentError::ZeroMass);
    }
    let mut h = history.clone();
    let action_values: Vec<S> = (0..num_actions)
        .map(|a| action_utility(model, &mut h, &belief, Action(a), num_actions, depth) / mass.clone())
        .collect();
    let (chosen, value) = argmax(&action_values);
    Ok(ValueReport {
        value,
        action_values,
        chosen,
    })
}

/// Expected reward sum of the open-loop `plan`, one action per remaining
/// cycle, under the model's posterior at `history`.
///
/// At the empty history with prior weights summing to one this is linear in
/// the prior.
pub fn plan_value<S: Scalar>(model: &Mixture, history: &History, plan: &[Action]) -> Result<S, AgentError> {
    let belief = model.belief::<S>(history);
    let mass = belief.mass();
    if mass.is_zero() {
        return Err(AgentError::ZeroMass);
    }
    let mut h = history.clone();
    Ok(plan_utility(model, &mut h, &belief, plan) / mass)
}

fn plan_utility<S: Scalar>(model: &Mixture, h: &mut History, belief: &Belief<S>, plan: &[Action]) -> S {
    let Some((&action, rest)) = plan.split_first() else {
        return S::zero();
    };
    let mut total = S::zero();
    for (percept, child) in branches(model, h, belief, action) {
        total = total + child.mass() * S::from_rational(percept.reward);
        if !rest.is_empty() {
            h.push(action, percept);
            total = total + plan_utility(model, h, &child, rest);
            h.pop();
        }
    }
    total
}

/// Percepts with positive mass after `action`, each with the joint weights
/// it leads to.
fn branches<S: Scalar>(model: &Mixture, h: &History, belief: &Belief<S>, action: Action) -> Vec<(Percept, Belief<S>)> {
    let laws: Vec<_> = model
        .components()
        .iter()
        .zip(belief.joint())
        .map(|(env, w)| (!w.is_zero()).then(|| env.law(h, action)))
        .collect();
    let mut percepts: Vec<Percept> = laws
        .iter()
        .flatten()
        .flat_map(|law| law.entries().iter().map(|(p, _)| *p))
        .collect();
    percepts.sort();
    percepts.dedup();
    percepts
        .into_iter()
        .filter_map(|percept| {
            let joint: Vec<S> = belief
                .joint()
                .iter()
                .zip(&laws)
                .map(|(w, law)| match law {
                    Some(law) => w.clone() * S::from_rational(law.prob(&percept)),
                    None => S::zero(),
                })
                .collect();
            let child = Belief::from_joint(joint);
            (!child.mass().is_zero()).then_some((percept, child))
        })
        .collect()
}

/// Lowest index among the maximal entries.
fn argmax<S: Scalar>(values: &[S]) -> (Action, S) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if v.beats(&values[best]) {
            best = i;
        }
    }
    (Action(best), values[best].clone())
}

fn utility<S: Scalar>(model: &Mixture, h: &mut History, belief: &Belief<S>, num_actions: usize, depth: usize) -> S {
    if depth == 0 {
        return S::zero();
    }
    let values: Vec<S> = (0..num_actions)
        .map(|a| action_utility(model, h, belief, Action(a), num_actions, depth))
        .collect();
    argmax(&values).1
}

fn action_utility<S: Scalar>(
    model: &Mixture,
    h: &mut History,
    belief: &Belief<S>,
    action: Action,
    num_actions: usize,
    depth: usize,
) -> S {
    let mut total = S::zero();
    for (percept, child) in branches(model, h, belief, action) {
        let mass = child.mass();
        total = total + mass * S::from_rational(percept.reward);
        if depth > 1 {
            h.push(action, percept);
            total = total + utility(model, h, &child, num_actions, depth - 1);
            h.pop();
        }
    }
    total
}

/// One decision plus what the agent knew when making it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Decision {
    pub action: Action,
    pub root_values: Option<Vec<f64>>,
    pub posterior: Option<Vec<f64>>,
}

impl Decision {
    pub fn bare(action: Action) -> Self {
        Self {
            action,
            ..Self::default()
        }
    }
}

pub trait Policy: Send + Sync {
    fn name(&self) -> String;

    fn decide(&self, history: &History, spec: &PlanningSpec, rng: &mut dyn RngCore) -> Result<Decision, AgentError>;
}

/// Expectimax agent over a model class.
///
/// `horizon: None` plans to the end of the lifetime (AIXI's exact rule);
/// `Some(h)` re-plans each cycle over the next `min(h, m - k + 1)` cycles.
/// `Some(1)` is the greedy, myopic agent.
#[derive(Clone, Debug)]
pub struct ExpectimaxAgent {
    name: String,
    model: Mixture,
    horizon: Option<usize>,
}

impl ExpectimaxAgent {
    pub fn new(name: impl Into<String>, model: Mixture, horizon: Option<usize>) -> Self {
        Self {
            name: name.into(),
            model,
            horizon,
        }
    }

    pub fn myopic(model: Mixture) -> Self {
        Self::new("myopic", model, Some(1))
    }

    pub fn model(&self) -> &Mixture {
        &self.model
    }

    /// The planning depth used in the current cycle.
    pub fn depth(&self, history: &History, spec: &PlanningSpec) -> Result<usize, AgentError> {
        let remaining = spec.remaining(history)?;
        Ok(self.horizon.map_or(remaining, |h| h.clamp(1, remaining)))
    }

    pub fn plan(&self, history: &History, spec: &PlanningSpec) -> Result<ValueReport<f64>, AgentError> {
        let depth = self.depth(history, spec)?;
        value_to_depth(&self.model, history, spec.num_actions, depth)
    }
}

impl Policy for ExpectimaxAgent {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn decide(&self, history: &History, spec: &PlanningSpec, _rng: &mut dyn RngCore) -> Result<Decision, AgentError> {
        let report = self.plan(history, spec)?;
        Ok(Decision {
            action: report.chosen,
            root_values: Some(report.action_values),
            posterior: Some(self.model.posterior::<f64>(history)?),
        })
    }
}

/// Uniformly random actions.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomAgent;

impl Policy for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn decide(&self, _: &History, spec: &PlanningSpec, rng: &mut dyn RngCore) -> Result<Decision, AgentError> {
        Ok(Decision::bare(Action(rng.random_range(0..spec.num_actions))))
    }
}

/// The same action every cycle.
#[derive(Clone, Copy, Debug)]
pub struct FixedAgent(pub Action);

impl Policy for FixedAgent {
    fn name(&self) -> String {
        format!("fixed:{}", self.0 .0)
    }

    fn decide(&self, _: &History, _: &PlanningSpec, _: &mut dyn RngCore) -> Result<Decision, AgentError> {
        Ok(Decision::bare(self.0))
    }
}

/// Delegates to `primary`; when it fails for want of model mass, acts
/// uniformly at random instead.
pub struct WithRandomFallback<P> {
    pub primary: P,
}

impl<P: Policy> Policy for WithRandomFallback<P> {
    fn name(&self) -> String {
        self.primary.name()
    }

    fn decide(&self, history: &History, spec: &PlanningSpec, rng: &mut dyn RngCore) -> Result<Decision, AgentError> {
        match self.primary.decide(history, spec, rng) {
            Err(AgentError::ZeroMass) => RandomAgent.decide(history, spec, rng),
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Episode {
    pub seed: u64,
    pub history: History,
    pub decisions: Vec<Decision>,
}

impl Episode {
    pub fn total_reward(&self) -> Reward {
        self.history.total_reward()
    }

    pub fn total_reward_f64(&self) -> f64 {
        f64::from_rational(self.total_reward())
    }
}

/// Play `policy` against `env` for the lifetime in `spec`. Every random
/// choice, the agent's and the environment's, is drawn from one stream
/// seeded by `seed`.
pub fn run_episode(
    policy: &dyn Policy,
    env: &dyn Environment,
    spec: &PlanningSpec,
    seed: u64,
) -> Result<Episode, AgentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut history = History::new();
    let mut decisions = Vec::with_capacity(spec.lifetime);
    for cycle in 1..=spec.lifetime {
        let decision = policy.decide(&history, spec, &mut rng)?;
        let percept = env
            .sample(&history, decision.action, &mut rng)
            .ok_or(AgentError::EnvironmentVanished(cycle))?;
        history.push(decision.action, percept);
        decisions.push(decision);
    }
    Ok(Episode {
        seed,
        history,
        decisions,
    })
}

/// Shared handle so policies can be built once and used across threads.
pub type SharedPolicy = Arc<dyn Policy>;

/// `episode,seed,cycle,action,observation,reward,root_values,posterior`;
/// the last two are `;`-separated and empty for agents that do not plan.
pub fn write_episodes_csv<W: Write>(episodes: &[Episode], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["episode", "seed", "cycle", "action", "observation", "reward", "root_values", "posterior"])?;
    let join = |v: &Option<Vec<f64>>| {
        v.as_ref()
            .map(|v| v.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(";"))
            .unwrap_or_default()
    };
    for (i, ep) in episodes.iter().enumerate() {
        for (k, ((a, p), d)) in ep.history.cycles().iter().zip(&ep.decisions).enumerate() {
            w.write_record([
                i.to_string(),
                ep.seed.to_string(),
                (k + 1).to_string(),
                a.0.to_string(),
                p.observation.to_string(),
                p.reward.to_string(),
                join(&d.root_values),
                join(&d.posterior),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

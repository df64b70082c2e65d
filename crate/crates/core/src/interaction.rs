//! Actions, percepts, histories and the chronological environment interface.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

pub type Probability = Rational64;
pub type Reward = Rational64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Action(pub usize);

/// Observation symbol and reward delivered by the environment in one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Percept {
    pub observation: usize,
    #[serde(with = "crate::scalar::serde_rational")]
    pub reward: Reward,
}

impl Percept {
    pub fn new(observation: usize, reward: Reward) -> Self {
        Self {
            observation,
            reward,
        }
    }
}

impl fmt::Display for Percept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(o={}, r={})", self.observation, self.reward)
    }
}

/// Completed cycles `a_1 (o_1 r_1) … a_{k-1} (o_{k-1} r_{k-1})`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct History {
    cycles: Vec<(Action, Percept)>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cycles(cycles: Vec<(Action, Percept)>) -> Self {
        Self { cycles }
    }

    /// The cycle about to be played (1-based).
    pub fn current_cycle(&self) -> usize {
        self.cycles.len() + 1
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn push(&mut self, action: Action, percept: Percept) {
        self.cycles.push((action, percept));
    }

    pub fn pop(&mut self) -> Option<(Action, Percept)> {
        self.cycles.pop()
    }

    pub fn cycles(&self) -> &[(Action, Percept)] {
        &self.cycles
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        self.cycles.iter().map(|(a, _)| *a)
    }

    pub fn last(&self) -> Option<&(Action, Percept)> {
        self.cycles.last()
    }

    pub fn total_reward(&self) -> Reward {
        self.cycles.iter().map(|(_, p)| p.reward).sum()
    }

    /// The first `len` cycles.
    pub fn prefix(&self, len: usize) -> History {
        History {
            cycles: self.cycles[..len].to_vec(),
        }
    }
}

/// A finite conditional law over percepts, sorted and without zero entries.
/// Total mass is at most one; less than one for semimeasures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Law {
    entries: Vec<(Percept, Probability)>,
}

impl Law {
    pub fn new(entries: impl IntoIterator<Item = (Percept, Probability)>) -> Self {
        let mut entries: Vec<(Percept, Probability)> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Percept, Probability)> = Vec::with_capacity(entries.len());
        for (p, q) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += q,
                _ => merged.push((p, q)),
            }
        }
        merged.retain(|(_, q)| !q.is_zero());
        Self { entries: merged }
    }

    pub fn certain(percept: Percept) -> Self {
        Self {
            entries: vec![(percept, Probability::one())],
        }
    }

    /// The empty law: all mass lost.
    pub fn vanishing() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[(Percept, Probability)] {
        &self.entries
    }

    pub fn prob(&self, percept: &Percept) -> Probability {
        self.entries
            .binary_search_by(|(p, _)| p.cmp(percept))
            .map(|i| self.entries[i].1)
            .unwrap_or_else(|_| Probability::zero())
    }

    pub fn total(&self) -> Probability {
        self.entries.iter().map(|(_, q)| *q).sum()
    }

    /// Inverse-CDF sampling from a uniform `u ∈ [0, 1)`; `None` when `u`
    /// falls in the missing mass of a semimeasure.
    pub fn sample_with(&self, u: f64) -> Option<Percept> {
        let mut acc = 0.0;
        for (p, q) in &self.entries {
            acc += *q.numer() as f64 / *q.denom() as f64;
            if u < acc {
                return Some(*p);
            }
        }
        // Rounding can leave `acc` a hair below 1 for a proper law.
        match self.entries.last() {
            Some((p, _)) if self.total().is_one() => Some(*p),
            _ => None,
        }
    }
}

/// `ν(o_k r_k | a_1 o_1 r_1 … a_k)`: a conditional law over percepts given the
/// interaction so far and the current action.
pub trait Environment: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn num_actions(&self) -> usize;

    fn num_observations(&self) -> usize;

    fn law(&self, history: &History, action: Action) -> Law;

    /// Whether every conditional law sums to one.
    fn is_proper(&self) -> bool {
        true
    }

    fn sample(&self, history: &History, action: Action, rng: &mut dyn RngCore) -> Option<Percept> {
        let u: f64 = rng.random();
        self.law(history, action).sample_with(u)
    }
}

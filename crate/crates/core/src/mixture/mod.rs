//! Bayesian mixtures over finite classes of chronological environments.
//!
//! `ξ(h) = Σ_ν w_ν ν(h)` where `ν(h)` is the probability `ν` assigns to the
//! percepts of `h` given its actions. Priors are kept as exact rationals;
//! every quantity derived from them is computed in a caller-chosen
//! [`Scalar`].

mod config;
mod program_class;

use std::io::Write;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interaction::{Action, Environment, History, Percept};
use crate::scalar::Scalar;

pub use config::{ClassConfig, ClassConfigError, ComponentConfig, ProgramClassConfig};
pub use program_class::{program_class, ProgramEnvironment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MixtureError {
    #[error("a mixture needs at least one component")]
    Empty,
    #[error("got {components} components but {weights} weights")]
    LengthMismatch { components: usize, weights: usize },
    #[error("prior weight of component {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("prior weights sum to {0}, which exceeds one")]
    WeightsExceedOne(String),
    #[error("components disagree on the action/observation signature")]
    SignatureMismatch,
    #[error("no component assigns the history positive mass")]
    ZeroMass,
    #[error("no program of length <= {max_len} is a valid environment for {cycles} cycles")]
    EmptyClass { max_len: usize, cycles: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorScheme {
    Uniform,
    /// `w_i ∝ 2^-γ(i)` with `γ(i)` the Elias-gamma code length of the
    /// 1-based index, normalized to sum to one.
    #[default]
    EliasGamma,
}

/// Length in bits of the Elias-gamma code of `n ≥ 1`.
pub fn elias_gamma_length(n: u64) -> u32 {
    assert!(n >= 1, "Elias-gamma codes start at 1");
    2 * (63 - n.leading_zeros()) + 1
}

/// Prior weights for `count` components under `scheme`; they sum to one.
pub fn prior_weights(scheme: PriorScheme, count: usize) -> Vec<BigRational> {
    match scheme {
        PriorScheme::Uniform => {
            vec![BigRational::new(BigInt::one(), BigInt::from(count)); count]
        }
        PriorScheme::EliasGamma => {
            let raw: Vec<BigRational> = (1..=count as u64)
                .map(|i| BigRational::new(BigInt::one(), BigInt::one() << elias_gamma_length(i)))
                .collect();
            let total = raw.iter().fold(BigRational::zero(), |a, b| a + b);
            raw.into_iter().map(|w| w / &total).collect()
        }
    }
}

/// A weighted finite class of environments. Immutable once built.
#[derive(Clone, Debug)]
pub struct Mixture {
    components: Vec<Arc<dyn Environment>>,
    prior: Vec<BigRational>,
}

impl Mixture {
    pub fn new(
        components: Vec<Arc<dyn Environment>>,
        prior: Vec<BigRational>,
    ) -> Result<Self, MixtureError> {
        if components.is_empty() {
            return Err(MixtureError::Empty);
        }
        if components.len() != prior.len() {
            return Err(MixtureError::LengthMismatch {
                components: components.len(),
                weights: prior.len(),
            });
        }
        if let Some(i) = prior.iter().position(|w| *w <= BigRational::zero()) {
            return Err(MixtureError::NonPositiveWeight(i));
        }
        let total = prior.iter().fold(BigRational::zero(), |a, b| a + b);
        if total > BigRational::one() {
            return Err(MixtureError::WeightsExceedOne(total.to_string()));
        }
        let (a, o) = (components[0].num_actions(), components[0].num_observations());
        if components
            .iter()
            .any(|c| c.num_actions() != a || c.num_observations() != o)
        {
            return Err(MixtureError::SignatureMismatch);
        }
        Ok(Self { components, prior })
    }

    pub fn with_scheme(
        components: Vec<Arc<dyn Environment>>,
        scheme: PriorScheme,
    ) -> Result<Self, MixtureError> {
        let prior = prior_weights(scheme, components.len());
        Self::new(components, prior)
    }

    /// The one-component mixture: planning with it is planning with `env`.
    pub fn singleton(env: Arc<dyn Environment>) -> Self {
        Self {
            components: vec![env],
            prior: vec![BigRational::one()],
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Arc<dyn Environment>] {
        &self.components
    }

    pub fn prior(&self) -> &[BigRational] {
        &self.prior
    }

    pub fn num_actions(&self) -> usize {
        self.components[0].num_actions()
    }

    pub fn num_observations(&self) -> usize {
        self.components[0].num_observations()
    }

    /// The same components under different prior weights.
    pub fn reweighted(&self, prior: Vec<BigRational>) -> Result<Self, MixtureError> {
        Self::new(self.components.clone(), prior)
    }

    /// `ν(h)` for every component.
    pub fn likelihoods<S: Scalar>(&self, history: &History) -> Vec<S> {
        let mut lik = vec![S::one(); self.len()];
        let mut prefix = History::new();
        for &(action, percept) in history.cycles() {
            for (l, env) in lik.iter_mut().zip(&self.components) {
                if l.is_zero() {
                    continue;
                }
                let q = env.law(&prefix, action).prob(&percept);
                *l = l.clone() * S::from_rational(q);
            }
            prefix.push(action, percept);
        }
        lik
    }

    /// `w_ν ν(h)` for every component.
    pub fn belief<S: Scalar>(&self, history: &History) -> Belief<S> {
        let joint = self
            .likelihoods::<S>(history)
            .into_iter()
            .zip(&self.prior)
            .map(|(l, w)| S::from_big(w) * l)
            .collect();
        Belief { joint }
    }

    /// `ξ(h) = Σ_ν w_ν ν(h)`.
    pub fn mass<S: Scalar>(&self, history: &History) -> S {
        self.belief::<S>(history).mass()
    }

    /// `w_ν(h) = w_ν ν(h) / ξ(h)`.
    pub fn posterior<S: Scalar>(&self, history: &History) -> Result<Vec<S>, MixtureError> {
        self.belief::<S>(history).posterior()
    }

    /// `ξ(e | h, a) = Σ_ν w_ν(h) ν(e | h, a)` for every percept with
    /// positive mass, in percept order. A semimeasure.
    pub fn predict<S: Scalar>(
        &self,
        history: &History,
        action: Action,
    ) -> Result<Vec<(Percept, S)>, MixtureError> {
        let belief = self.belief::<S>(history);
        let posterior = belief.posterior()?;
        Ok(self.predict_with(&posterior, history, action))
    }

    /// As [`Mixture::predict`], renormalized to sum to one.
    pub fn predict_normalized<S: Scalar>(
        &self,
        history: &History,
        action: Action,
    ) -> Result<Vec<(Percept, S)>, MixtureError> {
        let dist = self.predict::<S>(history, action)?;
        let total = dist.iter().fold(S::zero(), |acc, (_, q)| acc + q.clone());
        if total.is_zero() {
            return Err(MixtureError::ZeroMass);
        }
        Ok(dist.into_iter().map(|(p, q)| (p, q / total.clone())).collect())
    }

    /// Predictive law from explicit (possibly unnormalized) component weights.
    pub fn predict_with<S: Scalar>(
        &self,
        weights: &[S],
        history: &History,
        action: Action,
    ) -> Vec<(Percept, S)> {
        let mut acc: std::collections::BTreeMap<Percept, S> = std::collections::BTreeMap::new();
        for (w, env) in weights.iter().zip(&self.components) {
            if w.is_zero() {
                continue;
            }
            for (percept, q) in env.law(history, action).entries() {
                let term = w.clone() * S::from_rational(*q);
                let slot = acc.entry(*percept).or_insert_with(S::zero);
                *slot = slot.clone() + term;
            }
        }
        acc.into_iter().collect()
    }

    /// Posterior weights next to a complexity surrogate for each component
    /// consistent with `history`.
    ///
    /// The surrogate is `2^-γ(r)` where `r` is the component's 1-based rank
    /// among the consistent components ordered by prior weight (ties by
    /// index) and `γ` the Elias-gamma length: the cost of naming the
    /// component given the history. No relation between the two columns is
    /// assumed; the log exists to look at the discrepancy.
    pub fn posterization_log<S: Scalar>(
        &self,
        history: &History,
    ) -> Result<Vec<PosterizationRow>, MixtureError> {
        let posterior = self.posterior::<S>(history)?;
        let mut consistent: Vec<usize> = (0..self.len()).filter(|&i| !posterior[i].is_zero()).collect();
        consistent.sort_by(|&a, &b| self.prior[b].cmp(&self.prior[a]).then(a.cmp(&b)));
        let mut rows: Vec<PosterizationRow> = consistent
            .iter()
            .enumerate()
            .map(|(rank, &i)| PosterizationRow {
                component: i,
                posterior: posterior[i].as_f64(),
                surrogate: (-(elias_gamma_length(rank as u64 + 1) as f64)).exp2(),
            })
            .collect();
        rows.sort_by_key(|r| r.component);
        Ok(rows)
    }

    /// Write `cycle,component,weight` rows of the posterior after each
    /// prefix of `history` (cycle 0 is the prior).
    pub fn write_posterior_trace<S: Scalar, W: Write>(
        &self,
        history: &History,
        out: W,
    ) -> Result<(), crate::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["cycle", "component", "weight"])?;
        let mut belief = Belief::<S>::prior(self);
        let mut prefix = History::new();
        for cycle in 0..=history.len() {
            let post = belief.posterior()?;
            for (i, p) in post.iter().enumerate() {
                w.write_record([
                    cycle.to_string(),
                    self.components[i].name(),
                    format!("{:.12e}", p.as_f64()),
                ])?;
            }
            if let Some(&(a, e)) = history.cycles().get(cycle) {
                belief.update(self, &prefix, a, e);
                prefix.push(a, e);
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosterizationRow {
    pub component: usize,
    pub posterior: f64,
    pub surrogate: f64,
}

/// Unnormalized component weights `w_ν ν(h)` for some history `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Belief<S> {
    joint: Vec<S>,
}

impl<S: Scalar> Belief<S> {
    pub fn prior(mixture: &Mixture) -> Self {
        Self {
            joint: mixture.prior.iter().map(S::from_big).collect(),
        }
    }

    pub fn from_joint(joint: Vec<S>) -> Self {
        Self { joint }
    }

    pub fn joint(&self) -> &[S] {
        &self.joint
    }

    pub fn mass(&self) -> S {
        self.joint.iter().fold(S::zero(), |a, b| a + b.clone())
    }

    pub fn posterior(&self) -> Result<Vec<S>, MixtureError> {
        let mass = self.mass();
        if mass.is_zero() {
            return Err(MixtureError::ZeroMass);
        }
        Ok(self.joint.iter().map(|j| j.clone() / mass.clone()).collect())
    }

    /// Condition on one more cycle; `history` is the interaction before it.
    pub fn update(&mut self, mixture: &Mixture, history: &History, action: Action, percept: Percept) {
        for (j, env) in self.joint.iter_mut().zip(mixture.components()) {
            if j.is_zero() {
                continue;
            }
            let q = env.law(history, action).prob(&percept);
            *j = j.clone() * S::from_rational(q);
        }
    }

    /// Rescale so the weights sum to one; returns the factor divided out.
    /// Keeps long float runs away from underflow.
    pub fn renormalize(&mut self) -> Result<S, MixtureError> {
        let mass = self.mass();
        if mass.is_zero() {
            return Err(MixtureError::ZeroMass);
        }
        for j in &mut self.joint {
            *j = j.clone() / mass.clone();
        }
        Ok(mass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::bernoulli_prediction;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn two_bernoulli() -> Mixture {
        Mixture::new(
            vec![
                Arc::new(bernoulli_prediction(Rational64::new(1, 2)).unwrap()),
                Arc::new(bernoulli_prediction(Rational64::from_integer(1)).unwrap()),
            ],
            vec![r(1, 2), r(1, 2)],
        )
        .unwrap()
    }

    /// Always predicting 1 and observing `bits`.
    fn history_of(bits: &str) -> History {
        let mut h = History::new();
        for c in bits.chars() {
            let o = (c == '1') as usize;
            h.push(Action(1), Percept::new(o, Rational64::from_integer(o as i64)));
        }
        h
    }

    #[test]
    fn two_component_mass_and_posterior() {
        let mix = two_bernoulli();
        assert_eq!(mix.mass::<BigRational>(&history_of("111")), r(9, 16));
        let post = mix.posterior::<BigRational>(&history_of("111")).unwrap();
        assert_eq!(post[1], r(8, 9));
        assert_eq!(mix.mass::<BigRational>(&History::new()), BigRational::one());
        let post = mix.posterior::<BigRational>(&history_of("110")).unwrap();
        assert_eq!(post[1], BigRational::zero());
    }

    #[test]
    fn impossible_history_has_zero_mass() {
        let mix = Mixture::singleton(Arc::new(bernoulli_prediction(Rational64::from_integer(1)).unwrap()));
        assert_eq!(mix.mass::<BigRational>(&history_of("0")), BigRational::zero());
        assert_eq!(mix.posterior::<BigRational>(&history_of("0")), Err(MixtureError::ZeroMass));
        assert_eq!(mix.predict::<f64>(&history_of("0"), Action(0)), Err(MixtureError::ZeroMass));
    }

    #[test]
    fn validation() {
        let env: Arc<dyn Environment> = Arc::new(bernoulli_prediction(Rational64::new(1, 2)).unwrap());
        assert_eq!(Mixture::new(vec![], vec![]).unwrap_err(), MixtureError::Empty);
        assert!(matches!(
            Mixture::new(vec![env.clone()], vec![r(0, 1)]),
            Err(MixtureError::NonPositiveWeight(0))
        ));
        assert!(matches!(
            Mixture::new(vec![env.clone(), env.clone()], vec![r(2, 3), r(2, 3)]),
            Err(MixtureError::WeightsExceedOne(_))
        ));
        assert!(matches!(
            Mixture::new(vec![env], vec![r(1, 2), r(1, 2)]),
            Err(MixtureError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn elias_gamma() {
        assert_eq!(elias_gamma_length(1), 1);
        assert_eq!(elias_gamma_length(2), 3);
        assert_eq!(elias_gamma_length(3), 3);
        assert_eq!(elias_gamma_length(4), 5);
        assert_eq!(elias_gamma_length(8), 7);
        let w = prior_weights(PriorScheme::EliasGamma, 4);
        assert_eq!(w, vec![r(16, 25), r(4, 25), r(4, 25), r(1, 25)]);
        let u = prior_weights(PriorScheme::Uniform, 3);
        assert_eq!(u.iter().fold(BigRational::zero(), |a, b| a + b), BigRational::one());
    }

    #[test]
    fn single_component_predicts_itself() {
        let env = Arc::new(bernoulli_prediction(Rational64::new(3, 4)).unwrap());
        let mix = Mixture::singleton(env.clone());
        let h = history_of("101");
        let pred = mix.predict::<BigRational>(&h, Action(0)).unwrap();
        let law = env.law(&h, Action(0));
        assert_eq!(pred.len(), law.entries().len());
        for ((p1, q1), (p2, q2)) in pred.iter().zip(law.entries()) {
            assert_eq!(p1, p2);
            assert_eq!(*q1, BigRational::from_rational(*q2));
        }
    }

    #[test]
    fn ruled_out_component_contributes_nothing() {
        let mix = two_bernoulli();
        let pred = mix.predict::<BigRational>(&history_of("10"), Action(1)).unwrap();
        // Only θ = 1/2 survives: both outcomes at 1/2.
        assert!(pred.iter().all(|(_, q)| *q == r(1, 2)));
    }

    #[test]
    fn sequential_updates_match_batch() {
        let mix = two_bernoulli();
        let h = history_of("11011");
        let mut belief = Belief::<BigRational>::prior(&mix);
        let mut prefix = History::new();
        for &(a, e) in h.cycles() {
            belief.update(&mix, &prefix, a, e);
            prefix.push(a, e);
        }
        assert_eq!(belief, mix.belief::<BigRational>(&h));
    }

    #[test]
    fn posterior_trace_csv() {
        let mix = two_bernoulli();
        let mut out = Vec::new();
        mix.write_posterior_trace::<f64, _>(&history_of("1"), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "cycle,component,weight");
        assert_eq!(lines.len(), 1 + 2 * 2);
        assert!(lines[4].starts_with("1,"));
    }

    #[test]
    fn posterization_log_lists_consistent_components() {
        let mix = two_bernoulli();
        let rows = mix.posterization_log::<f64>(&history_of("11")).unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[1].posterior - 0.8).abs() < 1e-12);
        let rows = mix.posterization_log::<f64>(&history_of("10")).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].surrogate, 0.5);
    }
}

//! Universal intelligence at desk scale: `Υ(π) = Σ_ν w_ν V̄_ν^π` over a
//! weighted environment suite, and the induced preorder on policies.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{run_episode, ExpectimaxAgent, PlanningSpec, Policy, RandomAgent};
use crate::environments::{default_suite, EnvError, EnvSpec};
use crate::mixture::{prior_weights, PriorScheme};
use crate::output::manifest_hash;
use crate::scalar::Scalar;

pub const MIN_SEEDS: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IorError {
    #[error("scores were computed on different suites")]
    SuiteMismatch,
    #[error("suite has {entries} environments but {weights} weights")]
    WeightCount { entries: usize, weights: usize },
    #[error("suite weight {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("suite weights sum to {0}, which exceeds one")]
    WeightsExceedOne(String),
    #[error("{0} seeds given; at least {MIN_SEEDS} are needed")]
    TooFewSeeds(usize),
    #[error("environment {env}: {source}")]
    Environment { env: String, source: EnvError },
    #[error("episode in {env} with seed {seed}: {source}")]
    Episode {
        env: String,
        seed: u64,
        source: crate::agent::AgentError,
    },
}

/// Which agent to score. Planning agents use each environment's model class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "agent", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AgentKind {
    /// Receding-horizon expectimax over the environment's model class.
    Aixi { horizon: usize },
    /// One-step expectimax over the same class.
    Myopic,
    Random,
}

impl AgentKind {
    pub fn id(&self) -> String {
        match self {
            AgentKind::Aixi { horizon } => format!("aixi-h{horizon}"),
            AgentKind::Myopic => "myopic".into(),
            AgentKind::Random => "random".into(),
        }
    }

    pub fn policy_for(&self, env: &EnvSpec) -> Result<Box<dyn Policy>, EnvError> {
        Ok(match self {
            AgentKind::Aixi { horizon } => Box::new(ExpectimaxAgent::new(self.id(), env.model_class()?, Some(*horizon))),
            AgentKind::Myopic => Box::new(ExpectimaxAgent::myopic(env.model_class()?)),
            AgentKind::Random => Box::new(RandomAgent),
        })
    }
}

impl std::str::FromStr for AgentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "myopic" => Ok(AgentKind::Myopic),
            "random" => Ok(AgentKind::Random),
            "aixi" => Ok(AgentKind::Aixi { horizon: 3 }),
            _ => s
                .strip_prefix("aixi:")
                .and_then(|h| h.parse().ok())
                .filter(|h: &usize| *h >= 1)
                .map(|horizon| AgentKind::Aixi { horizon })
                .ok_or_else(|| format!("unknown agent {s:?}; expected aixi[:H], myopic or random")),
        }
    }
}

/// Environments, their weights, the lifetime and the seeds: everything a
/// score depends on besides the policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub entries: Vec<EnvSpec>,
    #[serde(with = "big_rationals")]
    pub weights: Vec<BigRational>,
    pub lifetime: usize,
    pub seeds: Vec<u64>,
}

mod big_rationals {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|s| s.parse().map_err(|_| serde::de::Error::custom(format!("not a rational: {s:?}"))))
            .collect()
    }
}

impl Suite {
    pub fn new(entries: Vec<EnvSpec>, weights: Vec<BigRational>, lifetime: usize, seeds: Vec<u64>) -> Result<Self, IorError> {
        if entries.len() != weights.len() {
            return Err(IorError::WeightCount {
                entries: entries.len(),
                weights: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(|w| *w <= BigRational::zero()) {
            return Err(IorError::NonPositiveWeight(i));
        }
        let total = weights.iter().fold(BigRational::zero(), |a, b| a + b);
        if total > BigRational::one() {
            return Err(IorError::WeightsExceedOne(total.to_string()));
        }
        if seeds.len() < MIN_SEEDS {
            return Err(IorError::TooFewSeeds(seeds.len()));
        }
        Ok(Self {
            entries,
            weights,
            lifetime,
            seeds,
        })
    }

    /// Entries weighted by the Elias-gamma prior over their index.
    pub fn elias_gamma(entries: Vec<EnvSpec>, lifetime: usize, seeds: Vec<u64>) -> Result<Self, IorError> {
        let weights = prior_weights(PriorScheme::EliasGamma, entries.len());
        Self::new(entries, weights, lifetime, seeds)
    }

    /// The default four-environment suite.
    pub fn default_with(lifetime: usize, seeds: Vec<u64>) -> Result<Self, IorError> {
        Self::elias_gamma(default_suite(), lifetime, seeds)
    }

    pub fn hash(&self) -> String {
        manifest_hash(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvScore {
    pub env: String,
    pub weight: f64,
    /// Mean total reward over the seeds.
    pub mean: f64,
    pub std_err: f64,
    pub totals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntelligenceScore {
    pub policy: String,
    pub suite: String,
    pub per_env: Vec<EnvScore>,
    /// `Σ w_ν · mean_ν`
    pub total: f64,
    /// `sqrt(Σ w_ν² · se_ν²)`
    pub std_err: f64,
}

impl IntelligenceScore {
    fn from_parts(policy: String, suite: String, per_env: Vec<EnvScore>) -> Self {
        let total = per_env.iter().map(|e| e.weight * e.mean).sum();
        let std_err = per_env
            .iter()
            .map(|e| (e.weight * e.std_err).powi(2))
            .sum::<f64>()
            .sqrt();
        Self {
            policy,
            suite,
            per_env,
            total,
            std_err,
        }
    }

    /// The same score under weights multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        let per_env = self
            .per_env
            .iter()
            .map(|e| EnvScore {
                weight: e.weight * c,
                ..e.clone()
            })
            .collect();
        Self::from_parts(self.policy.clone(), self.suite.clone(), per_env)
    }
}

/// Mean and standard error of the mean.
pub fn mean_and_std_err(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Run `agent` in every suite environment for every seed and aggregate.
/// Episodes run on the current rayon pool; the result does not depend on
/// its size.
pub fn intelligence_score(agent: &AgentKind, suite: &Suite) -> Result<IntelligenceScore, IorError> {
    let mut per_env = Vec::with_capacity(suite.entries.len());
    for (spec, weight) in suite.entries.iter().zip(&suite.weights) {
        let env_err = |source| IorError::Environment {
            env: spec.to_string(),
            source,
        };
        let policy = agent.policy_for(spec).map_err(env_err)?;
        let totals = suite
            .seeds
            .par_iter()
            .map(|&seed| {
                let env = spec.build(seed).map_err(env_err)?;
                let plan = PlanningSpec::for_environment(env.as_ref(), suite.lifetime);
                run_episode(policy.as_ref(), env.as_ref(), &plan, seed)
                    .map(|ep| ep.total_reward_f64())
                    .map_err(|source| IorError::Episode {
                        env: spec.to_string(),
                        seed,
                        source,
                    })
            })
            .collect::<Result<Vec<f64>, IorError>>()?;
        let (mean, std_err) = mean_and_std_err(&totals);
        per_env.push(EnvScore {
            env: spec.to_string(),
            weight: weight.as_f64(),
            mean,
            std_err,
            totals,
        });
    }
    Ok(IntelligenceScore::from_parts(agent.id(), suite.hash(), per_env))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ranked {
    pub policy: String,
    pub total: f64,
    pub std_err: f64,
    /// 1 + the number of policies ahead by more than one combined standard error.
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub ranked: Vec<Ranked>,
    /// Pairs whose scores lie within one combined standard error.
    pub incomparable: Vec<(String, String)>,
}

impl Ranking {
    pub fn rank_of(&self, policy: &str) -> Option<usize> {
        self.ranked.iter().find(|r| r.policy == policy).map(|r| r.rank)
    }

    pub fn is_incomparable(&self, a: &str, b: &str) -> bool {
        self.incomparable
            .iter()
            .any(|(x, y)| (x == a && y == b) || (x == b && y == a))
    }
}

/// Whether `a` beats `b` by more than `sigmas` combined standard errors.
pub fn separated(a: &IntelligenceScore, b: &IntelligenceScore, sigmas: f64) -> bool {
    let combined = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
    a.total - b.total > sigmas * combined
}

/// Descending by `Υ`; scores within one combined standard error share a
/// rank and are listed as incomparable rather than force-ordered.
pub fn order(scores: &[IntelligenceScore]) -> Result<Ranking, IorError> {
    if scores.windows(2).any(|w| w[0].suite != w[1].suite) {
        return Err(IorError::SuiteMismatch);
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total.total_cmp(&scores[a].total).then(a.cmp(&b)));
    let ranked = idx
        .iter()
        .map(|&i| Ranked {
            policy: scores[i].policy.clone(),
            total: scores[i].total,
            std_err: scores[i].std_err,
            rank: 1 + scores.iter().filter(|o| separated(o, &scores[i], 1.0)).count(),
        })
        .collect();
    let mut incomparable = Vec::new();
    for (x, &i) in idx.iter().enumerate() {
        for &j in &idx[x + 1..] {
            if !separated(&scores[i], &scores[j], 1.0) && !separated(&scores[j], &scores[i], 1.0) {
                incomparable.push((scores[i].policy.clone(), scores[j].policy.clone()));
            }
        }
    }
    Ok(Ranking { ranked, incomparable })
}

/// `policy,env,weight,mean,std_err` per environment, then a `TOTAL` row.
pub fn write_scores_csv<W: Write>(scores: &[IntelligenceScore], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["policy", "env", "weight", "mean", "std_err"])?;
    for s in scores {
        for e in &s.per_env {
            w.write_record([
                s.policy.as_str(),
                &e.env,
                &format!("{:.12}", e.weight),
                &format!("{:.12}", e.mean),
                &format!("{:.12}", e.std_err),
            ])?;
        }
        w.write_record([s.policy.as_str(), "TOTAL", "", &format!("{:.12}", s.total), &format!("{:.12}", s.std_err)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct ScoreReport<'a> {
    pub schema: String,
    pub manifest_hash: String,
    pub suite: &'a Suite,
    pub scores: &'a [IntelligenceScore],
    pub ranking: &'a Ranking,
}

/// Rational prior weights for the first `n` entries of any suite.
pub fn uniform_weights(n: usize) -> Vec<BigRational> {
    vec![BigRational::new(BigInt::one(), BigInt::from(n)); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn seeds() -> Vec<u64> {
        (0..MIN_SEEDS as u64).collect()
    }

    #[test]
    fn deterministic_single_env_has_exact_score() {
        let suite = Suite::new(
            vec![EnvSpec::Constant { reward: Rational64::new(1, 2) }],
            vec![BigRational::one()],
            10,
            seeds(),
        )
        .unwrap();
        let s = intelligence_score(&AgentKind::Myopic, &suite).unwrap();
        assert_eq!(s.total, 5.0);
        assert_eq!(s.std_err, 0.0);
    }

    #[test]
    fn identical_policies_tie() {
        let suite = Suite::default_with(5, seeds()).unwrap();
        let a = intelligence_score(&AgentKind::Random, &suite).unwrap();
        let ranking = order(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(ranking.ranked[0].rank, 1);
        assert_eq!(ranking.ranked[1].rank, 1);
        assert!(ranking.is_incomparable("random", "random"));
        let ranking = order(&[a]).unwrap();
        assert_eq!(ranking.rank_of("random"), Some(1));
    }

    #[test]
    fn mismatched_suites_are_rejected() {
        let s1 = Suite::default_with(3, seeds()).unwrap();
        let s2 = Suite::default_with(4, seeds()).unwrap();
        let a = intelligence_score(&AgentKind::Random, &s1).unwrap();
        let b = intelligence_score(&AgentKind::Random, &s2).unwrap();
        assert_eq!(order(&[a, b]).unwrap_err(), IorError::SuiteMismatch);
    }

    #[test]
    fn suite_validation() {
        assert!(matches!(Suite::default_with(5, vec![1, 2]), Err(IorError::TooFewSeeds(2))));
        let two = vec![EnvSpec::MdpChain, EnvSpec::MdpChain];
        assert!(matches!(
            Suite::new(two.clone(), vec![BigRational::one(); 2], 5, seeds()),
            Err(IorError::WeightsExceedOne(_))
        ));
        assert!(Suite::new(two, uniform_weights(2), 5, seeds()).is_ok());
    }

    #[test]
    fn agent_kinds_parse() {
        assert_eq!("aixi:4".parse::<AgentKind>().unwrap(), AgentKind::Aixi { horizon: 4 });
        assert_eq!("random".parse::<AgentKind>().unwrap(), AgentKind::Random);
        assert!("aixi:0".parse::<AgentKind>().is_err());
    }
}

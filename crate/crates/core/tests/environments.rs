mod support;

use std::collections::HashMap;

use aixi_lab::agent::{run_episode, value, ExpectimaxAgent, FixedAgent, PlanningSpec, RandomAgent};
use aixi_lab::environments::{
    bernoulli_prediction, matrix_game, EnvSpec, Opponent, Payoffs, TinyMdp, COOPERATE, DEFECT,
};
use aixi_lab::interaction::{Action, Environment, History, Percept};
use aixi_lab::ior::mean_and_std_err;
use aixi_lab::mixture::Mixture;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use support::{big, ratio};

fn specs() -> Vec<EnvSpec> {
    ["bernoulli:3/4", "selected-bits:3", "copy-model", "pd:random:1/3", "pd:tft", "mdp:chain", "constant:1/2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn sample_history(env: &dyn Environment, len: usize, seed: u64) -> History {
    let spec = PlanningSpec::for_environment(env, len);
    run_episode(&RandomAgent, env, &spec, seed).unwrap().history
}

#[test]
fn sampler_matches_law() {
    const N: usize = 100_000;
    for spec in specs() {
        let env = spec.build(11).unwrap();
        for history in [History::new(), sample_history(env.as_ref(), 3, 5)] {
            for a in 0..env.num_actions() {
                let law = env.law(&history, Action(a));
                let mut rng = ChaCha8Rng::seed_from_u64(a as u64 + 17);
                let mut counts: HashMap<Percept, usize> = HashMap::new();
                for _ in 0..N {
                    let p = env.sample(&history, Action(a), &mut rng).expect("proper environment");
                    *counts.entry(p).or_default() += 1;
                }
                for p in counts.keys() {
                    assert!(!law.prob(p).is_zero(), "{spec}: sampled {p} outside the support");
                }
                for (p, q) in law.entries() {
                    let q = q.to_f64().unwrap();
                    let freq = *counts.get(p).unwrap_or(&0) as f64 / N as f64;
                    let sigma = (q * (1.0 - q) / N as f64).sqrt();
                    assert!((freq - q).abs() <= 4.0 * sigma + 1e-12, "{spec} {p}: {freq} vs {q}");
                }
            }
        }
    }
}

#[test]
fn laws_are_proper_with_unit_interval_rewards() {
    for spec in specs() {
        let env = spec.build(2).unwrap();
        for seed in 0..5 {
            let history = sample_history(env.as_ref(), 6, seed);
            for a in 0..env.num_actions() {
                let law = env.law(&history, Action(a));
                assert_eq!(law.total(), Rational64::from_integer(1), "{spec}");
                for (p, _) in law.entries() {
                    assert!(p.reward >= Rational64::zero() && p.reward <= Rational64::from_integer(1));
                    assert!(p.observation < env.num_observations());
                }
            }
        }
    }
}

#[test]
fn always_predicting_one_earns_theta_per_cycle() {
    let env = bernoulli_prediction(Rational64::new(3, 4)).unwrap();
    let spec = PlanningSpec::for_environment(&env, 20);
    let totals: Vec<f64> = (0..10_000)
        .map(|seed| run_episode(&FixedAgent(Action(1)), &env, &spec, seed).unwrap().total_reward_f64())
        .collect();
    let (mean, se) = mean_and_std_err(&totals);
    assert!((mean - 15.0).abs() <= 3.0 * se, "{mean} ± {se}");
}

/// Finite-horizon backward induction over the MDP's tables.
fn mdp_values(mdp: &TinyMdp, horizon: usize, optimal: bool) -> BigRational {
    let n = mdp.num_states();
    let actions = mdp.num_actions();
    let mut v = vec![BigRational::zero(); n];
    for _ in 0..horizon {
        v = (0..n)
            .map(|s| {
                let q: Vec<BigRational> = (0..actions)
                    .map(|a| {
                        (0..n).fold(big(mdp.reward(s, a)), |acc, t| acc + big(mdp.transition(s, a, t)) * &v[t])
                    })
                    .collect();
                if optimal {
                    q.into_iter().max().unwrap()
                } else {
                    q.into_iter().fold(BigRational::zero(), |a, b| a + b) / ratio(actions as i64, 1)
                }
            })
            .collect();
    }
    v[mdp.initial()].clone()
}

#[test]
fn informed_agent_attains_the_value_iteration_optimum() {
    let chain = TinyMdp::chain();
    let model = Mixture::singleton(Arc::new(chain.clone()));
    for m in 1..=8 {
        let spec = PlanningSpec::new(2, 2, m).unwrap();
        let report = value::<BigRational>(&model, &History::new(), &spec).unwrap();
        assert_eq!(report.value, mdp_values(&chain, m, true), "m = {m}");
    }
    // Walking over pays off once two cycles remain.
    assert_eq!(mdp_values(&chain, 2, true), ratio(1, 1));
    let spec = PlanningSpec::new(2, 2, 6).unwrap();
    let episode = run_episode(&ExpectimaxAgent::new("aimu", model, None), &chain, &spec, 0).unwrap();
    assert_eq!(big(episode.total_reward()), mdp_values(&chain, 6, true));
}

#[test]
fn random_policy_matches_policy_evaluation() {
    let chain = TinyMdp::chain();
    let m = 10;
    let spec = PlanningSpec::for_environment(&chain, m);
    let totals: Vec<f64> = (0..20_000)
        .map(|seed| run_episode(&RandomAgent, &chain, &spec, seed).unwrap().total_reward_f64())
        .collect();
    let (mean, se) = mean_and_std_err(&totals);
    let expected = mdp_values(&chain, m, false).to_f64().unwrap();
    assert!((mean - expected).abs() <= 4.0 * se, "{mean} ± {se} vs {expected}");
}

#[test]
fn absorbing_single_state_pays_every_cycle() {
    let one = Rational64::from_integer(1);
    let mdp = aixi_lab::environments::tiny_mdp(vec![vec![vec![one]]], vec![vec![one]], 0).unwrap();
    let model = Mixture::singleton(Arc::new(mdp));
    for m in 1..=5 {
        let spec = PlanningSpec::new(1, 1, m).unwrap();
        assert_eq!(value::<BigRational>(&model, &History::new(), &spec).unwrap().value, ratio(m as i64, 1));
    }
}

fn game(opponent: Opponent) -> Arc<dyn Environment> {
    Arc::new(matrix_game(Payoffs::prisoners_dilemma(), opponent).unwrap())
}

#[test]
fn informed_agent_defects_against_a_defector() {
    let env = game(Opponent::AlwaysDefect);
    let spec = PlanningSpec::for_environment(env.as_ref(), 8);
    let agent = ExpectimaxAgent::new("aimu", Mixture::singleton(env.clone()), None);
    let episode = run_episode(&agent, env.as_ref(), &spec, 0).unwrap();
    assert!(episode.history.actions().all(|a| a == Action(DEFECT)));
    assert_eq!(episode.total_reward(), Rational64::new(8, 3));
}

#[test]
fn informed_agent_cooperates_with_tit_for_tat_until_the_end() {
    let env = game(Opponent::TitForTat);
    let m = 10;
    let spec = PlanningSpec::for_environment(env.as_ref(), m);
    let agent = ExpectimaxAgent::new("aimu", Mixture::singleton(env.clone()), None);
    let episode = run_episode(&agent, env.as_ref(), &spec, 0).unwrap();
    let actions: Vec<usize> = episode.history.actions().map(|a| a.0).collect();
    assert_eq!(&actions[..m - 1], vec![COOPERATE; m - 1].as_slice());
    assert_eq!(actions[m - 1], DEFECT);
    // 9 mutual cooperations at 2/3 plus one temptation payoff.
    let optimum = Rational64::from_integer(7);
    assert_eq!(episode.total_reward(), optimum);
    let (oracle, _) = support::expectimax(&Mixture::singleton(env.clone()), &History::new(), 2, m);
    assert_eq!(oracle.into_iter().max().unwrap(), big(optimum));

    let class = EnvSpec::PrisonersDilemma { opponent: Opponent::TitForTat }.model_class().unwrap();
    let learner = ExpectimaxAgent::new("aixi", class, Some(4));
    for seed in 0..5 {
        let total = run_episode(&learner, env.as_ref(), &spec, seed).unwrap().total_reward();
        assert!(total <= optimum, "seed {seed}: {total}");
        assert!(total >= Rational64::from_integer(4), "seed {seed}: {total}");
    }
}

#[test]
fn defection_pays_more_against_unconditional_opponents() {
    for opponent in [Opponent::AlwaysCooperate, Opponent::AlwaysDefect, Opponent::Random { p: Rational64::new(1, 2) }] {
        let env = game(opponent.clone());
        let spec = PlanningSpec::for_environment(env.as_ref(), 1);
        let report = value::<BigRational>(&Mixture::singleton(env), &History::new(), &spec).unwrap();
        assert!(report.action_values[DEFECT] > report.action_values[COOPERATE], "{opponent}");
        assert_eq!(report.chosen, Action(DEFECT));
    }
}

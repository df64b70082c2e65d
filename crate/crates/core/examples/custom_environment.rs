//! Plugging a hand-written environment into a mixture and an agent.

use std::sync::Arc;

use aixi_lab::agent::{run_episode, ExpectimaxAgent, PlanningSpec};
use aixi_lab::interaction::{Action, Environment, History, Law, Percept, Probability, Reward};
use aixi_lab::mixture::Mixture;
use num_rational::BigRational;

/// Two arms; `good` pays 1 with probability 3/4, the other with 1/4.
#[derive(Debug)]
struct Bandit {
    good: usize,
}

impl Environment for Bandit {
    fn name(&self) -> String {
        format!("bandit:{}", self.good)
    }

    fn num_actions(&self) -> usize {
        2
    }

    fn num_observations(&self) -> usize {
        1
    }

    fn law(&self, _history: &History, action: Action) -> Law {
        let p = if action.0 == self.good { Probability::new(3, 4) } else { Probability::new(1, 4) };
        Law::new([
            (Percept::new(0, Reward::from_integer(1)), p),
            (Percept::new(0, Reward::from_integer(0)), Probability::from_integer(1) - p),
        ])
    }
}

fn main() {
    let half = BigRational::new(1.into(), 2.into());
    let model = Mixture::new(
        vec![Arc::new(Bandit { good: 0 }), Arc::new(Bandit { good: 1 })],
        vec![half.clone(), half],
    )
    .unwrap();
    let agent = ExpectimaxAgent::new("bayes-bandit", model.clone(), Some(4));
    let truth = Bandit { good: 1 };
    let spec = PlanningSpec::new(2, 1, 30).unwrap();
    let episode = run_episode(&agent, &truth, &spec, 3).unwrap();
    let pulls: String = episode.history.actions().map(|a| char::from(b'0' + a.0 as u8)).collect();
    println!("pulls  {pulls}");
    println!("reward {}", episode.total_reward());
    let posterior = model.posterior::<f64>(&episode.history).unwrap();
    println!("posterior that arm 1 is good: {:.4}", posterior[1]);
}

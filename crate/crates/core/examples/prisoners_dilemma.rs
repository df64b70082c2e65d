//! A bounded AIξ agent in the iterated prisoner's dilemma against several
//! fixed opponents, planning with a four-model opponent class.

use aixi_lab::agent::{run_episode, ExpectimaxAgent, PlanningSpec, RandomAgent};
use aixi_lab::environments::{matrix_game, opponent_class, Opponent, Payoffs};
use aixi_lab::interaction::Probability;

fn main() {
    let payoffs = Payoffs::prisoners_dilemma();
    let agent = ExpectimaxAgent::new("aixi", opponent_class(payoffs.clone()), Some(3));
    let opponents = [
        Opponent::AlwaysCooperate,
        Opponent::AlwaysDefect,
        Opponent::TitForTat,
        Opponent::Random { p: Probability::new(1, 2) },
    ];
    let spec = PlanningSpec::new(2, 2, 20).unwrap();
    for opponent in opponents {
        let env = matrix_game(payoffs.clone(), opponent.clone()).unwrap();
        let ep = run_episode(&agent, &env, &spec, 1).unwrap();
        let baseline = run_episode(&RandomAgent, &env, &spec, 1).unwrap();
        let moves: String = ep.history.actions().map(|a| if a.0 == 0 { 'C' } else { 'D' }).collect();
        println!(
            "{:<16} {moves}  aixi {:<6} random {}",
            opponent.to_string(),
            ep.total_reward().to_string(),
            baseline.total_reward()
        );
    }
}

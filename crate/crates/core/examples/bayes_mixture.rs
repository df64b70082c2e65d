//! Posterior and predictive distribution of a Bernoulli grid mixture,
//! next to Laplace's rule of succession.

use aixi_lab::environments::bernoulli_grid;
use aixi_lab::interaction::{Action, History, Percept, Reward};
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn main() {
    let mixture = bernoulli_grid();
    let mut history = History::new();
    for n in 0..=8 {
        let next = mixture.predict_normalized::<BigRational>(&history, Action(1)).unwrap();
        let p_one: f64 = next
            .iter()
            .filter(|(p, _)| p.observation == 1)
            .map(|(_, q)| q.to_f64().unwrap())
            .sum();
        let laplace = (n + 1) as f64 / (n + 2) as f64;
        println!("after {n} ones: xi(1) = {p_one:.4}   Laplace {laplace:.4}");
        history.push(Action(1), Percept::new(1, Reward::from_integer(1)));
    }
    let posterior = mixture.posterior::<f64>(&history).unwrap();
    for (env, w) in mixture.components().iter().zip(posterior) {
        println!("{:<16} {w:.4}", env.name());
    }
}

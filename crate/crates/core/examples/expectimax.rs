//! Expectimax on a two-state chain: greedy now or invest for later.

use aixi_lab::agent::{value, PlanningSpec};
use aixi_lab::environments::TinyMdp;
use aixi_lab::interaction::History;
use aixi_lab::mixture::Mixture;
use num_rational::BigRational;
use std::sync::Arc;

fn main() {
    let model = Mixture::singleton(Arc::new(TinyMdp::chain()));
    for lifetime in 1..=6 {
        let spec = PlanningSpec::new(2, 1, lifetime).unwrap();
        let report = value::<BigRational>(&model, &History::new(), &spec).unwrap();
        let values: Vec<String> = report.action_values.iter().map(|v| v.to_string()).collect();
        println!(
            "m={lifetime}: V*={:<6} action values [{}] -> action {}",
            report.value.to_string(),
            values.join(", "),
            report.chosen.0
        );
    }
}

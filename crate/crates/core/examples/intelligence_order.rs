//! Score three agents on the default suite and rank them, reporting pairs
//! the sample cannot separate.

use aixi_lab::ior::{intelligence_score, order, AgentKind, Suite};

fn main() {
    let suite = Suite::default_with(40, (0..30).collect()).unwrap();
    for (env, w) in suite.entries.iter().zip(&suite.weights) {
        println!("{env:<16} weight {w}");
    }
    let agents = [AgentKind::Aixi { horizon: 3 }, AgentKind::Myopic, AgentKind::Random];
    let scores: Vec<_> = agents.iter().map(|a| intelligence_score(a, &suite).unwrap()).collect();
    for s in &scores {
        let per_env: Vec<String> = s.per_env.iter().map(|e| format!("{:.2}", e.mean)).collect();
        println!("{:<8} {:.3} ± {:.3}   per environment [{}]", s.policy, s.total, s.std_err, per_env.join(", "));
    }
    let ranking = order(&scores).unwrap();
    for r in &ranking.ranked {
        println!("rank {} {}", r.rank, r.policy);
    }
    for (a, b) in &ranking.incomparable {
        println!("{a} and {b} are within one standard error");
    }
}

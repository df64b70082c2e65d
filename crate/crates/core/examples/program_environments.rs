//! The environment class induced by short reference-machine programs, and
//! an expectimax agent that plans with it.

use aixi_lab::agent::{run_episode, ExpectimaxAgent, PlanningSpec, WithRandomFallback};
use aixi_lab::machine::Program;
use aixi_lab::mixture::{program_class, ProgramEnvironment};
use aixi_lab::solomonoff::ApproximationParams;

fn main() {
    let class = program_class(ApproximationParams::new(24, 32), 2, 2).unwrap();
    println!("{} programs of at most 24 bits produce two percepts", class.len());
    for (env, w) in class.components().iter().zip(class.prior()).take(6) {
        println!("  {:<24} prior {w}", env.name());
    }

    // Echoes each action as both observation and reward: action 1 pays.
    let program = Program::assemble("~[>,..<]").unwrap();
    println!("true environment {} ({} bits)", program.disassemble(), program.len());
    let truth = ProgramEnvironment::new(program, 2, 32);

    let agent = WithRandomFallback {
        primary: ExpectimaxAgent::new("aixi-programs", class, Some(2)),
    };
    let spec = PlanningSpec::new(2, 2, 8).unwrap();
    let ep = run_episode(&agent, &truth, &spec, 7).unwrap();
    for (k, (a, p)) in ep.history.cycles().iter().enumerate() {
        println!("cycle {}: action {} observation {} reward {}", k + 1, a.0, p.observation, p.reward);
    }
    println!("total reward {}", ep.total_reward());
}

//! Run the copy program on a few input bits and print every step.

use aixi_lab::bits::BitString;
use aixi_lab::machine::{execute, programs, trace};

fn main() {
    let program = programs::copy_pairs();
    let input: BitString = "1011".parse().unwrap();
    println!("{} = {}", program.disassemble(), program.bits());

    let (result, lines) = trace(&program, &input, 60, 8);
    println!("step\top\thead\tcell\tconsumed\toutput");
    for line in &lines {
        println!("{line}");
    }
    println!("{:?} after {} steps: {}", result.status, result.steps, result.output);

    // Larger budgets only extend the output.
    for budget in [10, 20, 40, 80] {
        let r = execute(&program, &input, budget, 16);
        println!("T={budget:<3} {:<10} {:?}", r.output.to_string(), r.status);
    }
}

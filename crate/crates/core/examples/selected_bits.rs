//! Learning that every even bit repeats the odd bit before it.
//!
//! Pass a number of steps (default 200); the full experiment uses 1000.

use aixi_lab::experiments::{run_selected_bits, SeedRange, SelectedBitsConfig};

fn main() {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let cfg = SelectedBitsConfig {
        max_len: 24,
        step_budget: 8,
        n,
        window: 50,
        state_cap: Some(4),
        seeds: SeedRange::new(0, 4),
    };
    let report = run_selected_bits(&cfg).unwrap();
    println!("steps      even error  odd error");
    for w in &report.windows {
        println!("{:>4}-{:<4}  {:>10.3} {:>10.3}", w.start, w.end, w.even, w.odd);
    }
}

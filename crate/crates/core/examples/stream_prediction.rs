//! Online prediction of a bit stream by the time-bounded program mixture.

use aixi_lab::solomonoff::ApproximationParams;
use aixi_lab::stream::StreamPredictor;

fn main() {
    let pattern = [true, false];
    let mut predictor = StreamPredictor::new(ApproximationParams::new(21, 16)).with_state_cap(8);
    let mut mistakes = 0;
    for t in 0..60 {
        let bit = pattern[t % pattern.len()];
        let next = predictor.predict();
        let wrong = next.argmax() != bit;
        mistakes += wrong as usize;
        if t < 12 || t % 10 == 0 {
            println!(
                "t={t:<3} P(1)={:.4} saw {} {}  live states {}",
                next.normalized(true).unwrap_or(f64::NAN),
                bit as u8,
                if wrong { "miss" } else { "hit " },
                predictor.live_states()
            );
        }
        predictor.observe(bit);
    }
    println!("{mistakes} mistakes in 60 steps");
    if let Some((program, share)) = predictor.dominant_program() {
        let bits: String = program.iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("heaviest program {bits} holds {:.1}% of the mass", 100.0 * share);
    }
}

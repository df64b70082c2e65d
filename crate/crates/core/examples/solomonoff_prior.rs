//! Bounded universal prior masses, complexity bounds and predictions.

use aixi_lab::bits::BitString;
use aixi_lab::solomonoff::{complexity_upper, lower_m, predictive, ApproximationParams};

fn main() {
    let params = ApproximationParams::new(12, 64);
    println!("{:<8} {:>12} {:>10} {:>8}", "x", "M(x)", "-log2 M", "K <=");
    for x in ["", "0", "1", "00", "01", "11", "111", "0101"] {
        let x: BitString = x.parse().unwrap();
        let m = lower_m(&x, params);
        let k = complexity_upper(&x, params).map_or("-".into(), |k| k.to_string());
        println!("{:<8} {:>12} {:>10.3} {:>8}", x.to_string(), m.to_ratio().to_string(), -m.to_f64().log2(), k);
    }

    // Predicting the next bit of a run of ones, raw and normalized.
    let mut x = BitString::new();
    for _ in 0..6 {
        let raw = predictive(&x, true, params, false).unwrap();
        let norm = predictive(&x, true, params, true).unwrap();
        println!("M(1 | {:<6}) = {raw:<8}  normalized {norm}", x.to_string());
        x.push(true);
    }
}

//! Independent reference implementations the library is checked against.
//! They favour directness over speed and share no code with the crate
//! beyond its public data types.

#![allow(dead_code)]

use std::collections::HashMap;

use aixi_lab::interaction::{Action, History, Percept};
use aixi_lab::machine::Status;
use aixi_lab::mixture::Mixture;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub fn big(r: num_rational::Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Outcome of the whole-program interpreter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub output: Vec<bool>,
    pub consumed: usize,
    pub steps: u64,
    pub status: Status,
}

/// Reference interpreter: decodes every complete opcode up front, matches
/// brackets on the full listing, then tracks how many program bits a lazy
/// reader would have needed.
pub fn interpret(program: &[bool], input: &[bool], budget: u64, output_limit: usize) -> Run {
    let ops: Vec<u8> = program
        .chunks_exact(3)
        .map(|c| (c[0] as u8) << 2 | (c[1] as u8) << 1 | c[2] as u8)
        .collect();
    let mut partner: Vec<Option<usize>> = vec![None; ops.len()];
    let mut open = Vec::new();
    for (i, &op) in ops.iter().enumerate() {
        match op {
            0b101 => open.push(i),
            0b110 => {
                if let Some(o) = open.pop() {
                    partner[o] = Some(i);
                    partner[i] = Some(o);
                }
            }
            _ => {}
        }
    }
    let mut tape: HashMap<i64, bool> = HashMap::new();
    let (mut head, mut pc, mut steps, mut consumed, mut read) = (0i64, 0usize, 0u64, 0usize, 0usize);
    let mut output = Vec::new();
    let need = |upto: usize, consumed: &mut usize| *consumed = (*consumed).max(3 * (upto + 1));
    let status = loop {
        if output.len() >= output_limit {
            break Status::OutputLimitReached;
        }
        if steps >= budget {
            break Status::StepBudgetExhausted;
        }
        if pc >= ops.len() {
            consumed = program.len();
            break Status::ProgramBitsExhausted;
        }
        need(pc, &mut consumed);
        let cell = *tape.get(&head).unwrap_or(&false);
        if ops[pc] == 0b100 && read >= input.len() {
            break Status::InputExhausted;
        }
        steps += 1;
        let mut next = pc + 1;
        match ops[pc] {
            0b000 => head -= 1,
            0b001 => head += 1,
            0b010 => {
                tape.insert(head, !cell);
            }
            0b011 => output.push(cell),
            0b100 => {
                tape.insert(head, input[read]);
                read += 1;
            }
            0b101 => {
                if !cell {
                    match partner[pc] {
                        Some(close) => {
                            need(close, &mut consumed);
                            next = close + 1;
                        }
                        None => {
                            consumed = program.len();
                            break Status::ProgramBitsExhausted;
                        }
                    }
                }
            }
            0b110 => match partner[pc] {
                // A `]` whose `[` comes later in the listing is unmatched
                // when executed.
                Some(o) if o < pc => {
                    if cell {
                        next = o + 1;
                    }
                }
                _ => break Status::Halted,
            },
            _ => break Status::Halted,
        }
        pc = next;
    };
    Run {
        output,
        consumed,
        steps,
        status,
    }
}

/// `w_ν ν(h)` for every component, multiplied out from the prior.
pub fn joint(model: &Mixture, history: &History) -> Vec<BigRational> {
    model
        .components()
        .iter()
        .zip(model.prior())
        .map(|(env, w)| {
            let mut p = w.clone();
            let mut h = History::new();
            for &(a, e) in history.cycles() {
                if p.is_zero() {
                    break;
                }
                p *= big(env.law(&h, a).prob(&e));
                h.push(a, e);
            }
            p
        })
        .collect()
}

pub fn mass(model: &Mixture, history: &History) -> BigRational {
    joint(model, history).into_iter().fold(BigRational::zero(), |a, b| a + b)
}

fn support(model: &Mixture, history: &History, action: Action) -> Vec<Percept> {
    let mut ps: Vec<Percept> = model
        .components()
        .iter()
        .flat_map(|env| env.law(history, action).entries().iter().map(|(p, _)| *p).collect::<Vec<_>>())
        .collect();
    ps.sort();
    ps.dedup();
    ps
}

/// Expectimax by the textbook recursion, each predictive probability taken
/// as a ratio of mixture masses recomputed from scratch:
/// `Q(h, a) = Σ_e ξ(hae)/ξ(h) · (r(e) + max_a' Q(hae, a'))`.
/// Returns the root action values and the lowest maximizing action.
pub fn expectimax(model: &Mixture, history: &History, num_actions: usize, depth: usize) -> (Vec<BigRational>, usize) {
    let xi = mass(model, history);
    assert!(!xi.is_zero());
    let values: Vec<BigRational> = (0..num_actions)
        .map(|a| {
            let mut q = BigRational::zero();
            for e in support(model, history, Action(a)) {
                let mut next = history.clone();
                next.push(Action(a), e);
                let m = mass(model, &next);
                if m.is_zero() {
                    continue;
                }
                let future = if depth > 1 {
                    expectimax(model, &next, num_actions, depth - 1).0.into_iter().max().unwrap()
                } else {
                    BigRational::zero()
                };
                q += m / xi.clone() * (big(e.reward) + future);
            }
            q
        })
        .collect();
    let best = values.iter().max().unwrap().clone();
    let chosen = values.iter().position(|v| *v == best).unwrap();
    (values, chosen)
}

/// Every history of exactly `len` cycles with positive mixture mass.
pub fn histories(model: &Mixture, num_actions: usize, len: usize) -> Vec<History> {
    let mut level = vec![History::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for h in &level {
            for a in 0..num_actions {
                for e in support(model, h, Action(a)) {
                    let mut g = h.clone();
                    g.push(Action(a), e);
                    if !mass(model, &g).is_zero() {
                        next.push(g);
                    }
                }
            }
        }
        level = next;
    }
    level
}

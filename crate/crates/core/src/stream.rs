//! Online sequence prediction by a mixture over reference-machine programs
//! whose input channel is fed fair coin flips.
//!
//! Program `q` together with coin flips `c` generates `U(q, c)`; the mixture
//! assigns a string `x` the mass `Σ 2^-(ℓ(q) + |c|)` over the minimal pairs
//! `(q, c)` whose output starts with `x`, with `ℓ(q) ≤ L`. Both program bits
//! and coin flips are branched on lazily, exactly like program bits in the
//! bounded prior. A noisy source such as "odd bits random, even bits repeat"
//! is then covered by one short program plus one coin per odd bit.
//!
//! The step budget here is per emitted symbol, not per run: each state may
//! spend at most `T` steps between consecutive output symbols.
//!
//! After every emission the machine is rebased (output, step count and
//! consumed coins forgotten). Pairs that reach equal rebased machines behave
//! identically from then on, so they are merged and their masses added.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::BuildHasherDefault;

/// Fixed-key hashing, so merge order and float sums repeat across runs.
type StableMap<K, V> = HashMap<K, V, BuildHasherDefault<DefaultHasher>>;

use serde::{Deserialize, Serialize};

use crate::machine::{Machine, Stop};
use crate::solomonoff::ApproximationParams;

#[derive(Clone, Debug)]
struct State {
    machine: Machine,
    program: Vec<bool>,
    /// Mass relative to the predictor's current scale.
    weight: f64,
}

/// Next-symbol masses relative to the current mass of the observed prefix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NextSymbol {
    /// `ξ(0 | x)`, `ξ(1 | x)`: a semimeasure, may sum to less than one.
    pub conditional: [f64; 2],
}

impl NextSymbol {
    /// `ξ(b | x) / (ξ(0 | x) + ξ(1 | x))`, or `None` if both are zero.
    pub fn normalized(&self, bit: bool) -> Option<f64> {
        let total = self.conditional[0] + self.conditional[1];
        (total > 0.0).then(|| self.conditional[bit as usize] / total)
    }

    /// The more probable symbol; ties go to 0.
    pub fn argmax(&self) -> bool {
        self.conditional[1] > self.conditional[0]
    }
}

/// Online predictor over the coin-flip program class.
#[derive(Clone, Debug)]
pub struct StreamPredictor {
    params: ApproximationParams,
    states: Vec<State>,
    successors: Option<[Vec<State>; 2]>,
    observed: usize,
    /// `log2` of the mass represented by a state of weight 1.
    log2_scale: f64,
    state_cap: Option<usize>,
}

impl StreamPredictor {
    pub fn new(params: ApproximationParams) -> Self {
        Self {
            params,
            states: vec![State {
                machine: Machine::new(),
                program: Vec::new(),
                weight: 1.0,
            }],
            successors: None,
            observed: 0,
            log2_scale: 0.0,
            state_cap: None,
        }
    }

    /// Keep at most `width` states per program after each observation,
    /// dropping the lightest (their mass is lost, as for any semimeasure).
    ///
    /// A program that stores coin flips on the tape without reading them
    /// back cannot be merged before its last bit is read, so its states
    /// double with every coin; the cap bounds the cost of such programs and
    /// leaves every other program exact.
    pub fn with_state_cap(mut self, width: usize) -> Self {
        self.state_cap = Some(width.max(1));
        self
    }

    fn prune(&mut self) {
        let Some(width) = self.state_cap else { return };
        let mut per_program: StableMap<&[bool], Vec<usize>> = StableMap::default();
        for (i, s) in self.states.iter().enumerate() {
            per_program.entry(&s.program).or_default().push(i);
        }
        if per_program.values().all(|v| v.len() <= width) {
            return;
        }
        let mut keep = vec![true; self.states.len()];
        for idx in per_program.values_mut().filter(|v| v.len() > width) {
            idx.sort_by(|&a, &b| self.states[b].weight.total_cmp(&self.states[a].weight).then(a.cmp(&b)));
            for &i in &idx[width..] {
                keep[i] = false;
            }
        }
        let mut k = keep.into_iter();
        self.states.retain(|_| k.next().unwrap_or(true));
    }

    pub fn params(&self) -> ApproximationParams {
        self.params
    }

    /// Number of symbols observed so far.
    pub fn observed(&self) -> usize {
        self.observed
    }

    /// Number of distinct live machine states consistent with the observations.
    pub fn live_states(&self) -> usize {
        self.states.len()
    }

    /// True once no pair explains the observations.
    pub fn is_exhausted(&self) -> bool {
        self.states.is_empty()
    }

    /// `log2` of the mixture mass of the observed prefix.
    pub fn log2_mass(&self) -> f64 {
        let total: f64 = self.states.iter().map(|s| s.weight).sum();
        self.log2_scale + total.log2()
    }

    /// Program bits of the heaviest live state, with its share of the mass.
    pub fn dominant_program(&self) -> Option<(Vec<bool>, f64)> {
        let total: f64 = self.states.iter().map(|s| s.weight).sum();
        self.states
            .iter()
            .max_by(|a, b| a.weight.total_cmp(&b.weight))
            .map(|s| (s.program.clone(), s.weight / total))
    }

    fn expand(&self) -> [Vec<State>; 2] {
        let mut merged: [StableMap<Machine, State>; 2] = [StableMap::default(), StableMap::default()];
        let budget = self.params.step_budget;
        for state in &self.states {
            // (state, coins fed since the last emission)
            let mut stack = vec![(state.clone(), Vec::new())];
            while let Some((mut s, mut coins)) = stack.pop() {
                match s.machine.run(&s.program, &coins, budget, 1) {
                    Stop::OutputLimit => {
                        let bit = s.machine.output().bits()[0] as usize;
                        s.machine.rebase();
                        s.machine
                            .forget_unreachable_tape(s.program.len() >= self.params.max_len);
                        match merged[bit].get_mut(&s.machine) {
                            Some(existing) => existing.weight += s.weight,
                            None => {
                                merged[bit].insert(s.machine.clone(), s);
                            }
                        }
                    }
                    Stop::NeedProgramBit => {
                        if s.program.len() < self.params.max_len {
                            s.weight *= 0.5;
                            let mut one = s.clone();
                            one.program.push(true);
                            s.program.push(false);
                            stack.push((one, coins.clone()));
                            stack.push((s, coins));
                        }
                    }
                    Stop::NeedInput => {
                        s.weight *= 0.5;
                        let mut ones = coins.clone();
                        ones.push(true);
                        coins.push(false);
                        stack.push((s.clone(), ones));
                        stack.push((s, coins));
                    }
                    Stop::StepBudget | Stop::Halted => {}
                }
            }
        }
        merged.map(|m| {
            let mut v: Vec<State> = m.into_values().collect();
            // Deterministic order regardless of hashing.
            v.sort_by(|a, b| a.program.cmp(&b.program).then_with(|| a.weight.total_cmp(&b.weight)));
            v
        })
    }

    fn ensure_successors(&mut self) {
        if self.successors.is_none() {
            self.successors = Some(self.expand());
        }
    }

    /// Predictive masses for the next symbol.
    pub fn predict(&mut self) -> NextSymbol {
        self.ensure_successors();
        let succ = self.successors.as_ref().expect("just computed");
        let total: f64 = self.states.iter().map(|s| s.weight).sum();
        if total <= 0.0 {
            return NextSymbol {
                conditional: [0.0, 0.0],
            };
        }
        let cond = |b: usize| succ[b].iter().map(|s| s.weight).sum::<f64>() / total;
        NextSymbol {
            conditional: [cond(0), cond(1)],
        }
    }

    /// Condition on the next symbol of the sequence.
    pub fn observe(&mut self, bit: bool) {
        self.ensure_successors();
        let [zero, one] = self.successors.take().expect("just computed");
        self.states = if bit { one } else { zero };
        self.observed += 1;
        self.prune();
        let total: f64 = self.states.iter().map(|s| s.weight).sum();
        if total > 0.0 {
            for s in &mut self.states {
                s.weight /= total;
            }
            self.log2_scale += total.log2();
        }
    }
}

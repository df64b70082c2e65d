//! Length- and time-bounded lower approximations of the universal prior.
//!
//! `M_{L,T}(x)` sums `2^-ℓ(p)` over the minimal programs `p` with `ℓ(p) ≤ L`
//! whose output starts with `x` within `T` steps. A program is minimal for
//! `x` when every one of its bits was read by the time the `|x|`-th symbol
//! was emitted, so extensions of a counted program are never counted again.
//!
//! Because the machine reads program bits on demand, the set of minimal
//! programs is a prefix tree: a run branches exactly where it asks for a bit
//! it has not been given. Both enumerators below walk that tree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;
use crate::machine::{Machine, Stop};

/// Steps granted to every live program per dovetailing round.
pub const DOVETAIL_QUANTUM: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApproximationParams {
    /// Maximum program length `L` in bits.
    pub max_len: usize,
    /// Step budget `T` per program.
    pub step_budget: u64,
}

impl ApproximationParams {
    pub fn new(max_len: usize, step_budget: u64) -> Self {
        Self {
            max_len,
            step_budget,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolomonoffError {
    #[error("prefix {0} has zero mass within the given length and step budgets")]
    ZeroPrefixMass(BitString),
}

/// An exact dyadic rational `numerator / 2^exponent` in `[0, 1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PriorMass {
    numerator: u128,
    exponent: u32,
}

impl PriorMass {
    pub const ZERO: PriorMass = PriorMass {
        numerator: 0,
        exponent: 0,
    };

    pub const ONE: PriorMass = PriorMass {
        numerator: 1,
        exponent: 0,
    };

    /// `2^-len`.
    pub fn of_length(len: usize) -> Self {
        assert!(len < 120, "program lengths above 119 bits are not supported");
        Self {
            numerator: 1,
            exponent: len as u32,
        }
    }

    fn normalized(mut numerator: u128, mut exponent: u32) -> Self {
        if numerator == 0 {
            return Self::ZERO;
        }
        while exponent > 0 && numerator % 2 == 0 {
            numerator /= 2;
            exponent -= 1;
        }
        Self {
            numerator,
            exponent,
        }
    }

    pub fn numerator(&self) -> u128 {
        self.numerator
    }

    pub fn denominator(&self) -> u128 {
        1u128 << self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator),
            BigInt::from(self.denominator()),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator() as f64
    }
}

impl Add for PriorMass {
    type Output = PriorMass;

    fn add(self, rhs: PriorMass) -> PriorMass {
        let e = self.exponent.max(rhs.exponent);
        let a = self.numerator << (e - self.exponent);
        let b = rhs.numerator << (e - rhs.exponent);
        PriorMass::normalized(a + b, e)
    }
}

impl std::iter::Sum for PriorMass {
    fn sum<I: Iterator<Item = PriorMass>>(iter: I) -> Self {
        iter.fold(PriorMass::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for PriorMass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PriorMass {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        (self.numerator << (e - self.exponent)).cmp(&(other.numerator << (e - other.exponent)))
    }
}

impl fmt::Display for PriorMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator())
    }
}

#[derive(Clone, Debug)]
struct Node {
    machine: Machine,
    program: Vec<bool>,
}

impl Node {
    fn root() -> Self {
        Self {
            machine: Machine::new(),
            program: Vec::new(),
        }
    }

    fn children(self) -> [Node; 2] {
        let mut zero = self.clone();
        zero.program.push(false);
        let mut one = self;
        one.program.push(true);
        [zero, one]
    }
}

/// Round-robin enumeration of all minimal programs for a target string.
///
/// Each round advances every live program by [`DOVETAIL_QUANTUM`] steps; a
/// program asking for an unread bit splits into its two one-bit extensions,
/// which join the next round. The partial mass after any round is a valid
/// lower bound and the final mass is independent of the schedule.
#[derive(Clone, Debug)]
pub struct Dovetailer {
    target: BitString,
    params: ApproximationParams,
    frontier: Vec<Node>,
    mass: PriorMass,
    rounds: usize,
}

impl Dovetailer {
    pub fn new(target: BitString, params: ApproximationParams) -> Self {
        Self {
            target,
            params,
            frontier: vec![Node::root()],
            mass: PriorMass::ZERO,
            rounds: 0,
        }
    }

    pub fn mass(&self) -> PriorMass {
        self.mass
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn is_done(&self) -> bool {
        self.frontier.is_empty()
    }

    /// Run one round. Returns the mass accumulated so far.
    pub fn round(&mut self) -> PriorMass {
        let frontier = std::mem::take(&mut self.frontier);
        let mut next = Vec::with_capacity(frontier.len());
        for node in frontier {
            self.advance(node, &mut next);
        }
        next.sort_by(|a, b| {
            a.program
                .len()
                .cmp(&b.program.len())
                .then_with(|| a.program.cmp(&b.program))
        });
        self.frontier = next;
        self.rounds += 1;
        self.mass
    }

    pub fn run(mut self) -> PriorMass {
        while !self.is_done() {
            self.round();
        }
        self.mass
    }

    fn advance(&mut self, mut node: Node, next: &mut Vec<Node>) {
        let target = self.target.bits();
        let quantum_end = (node.machine.steps() + DOVETAIL_QUANTUM).min(self.params.step_budget);
        loop {
            let produced = node.machine.output().len();
            if produced >= target.len() {
                self.mass = self.mass + PriorMass::of_length(node.program.len());
                return;
            }
            match node.machine.run(&node.program, &[], quantum_end, produced + 1) {
                Stop::OutputLimit => {
                    if node.machine.output().bits()[produced] != target[produced] {
                        return;
                    }
                }
                Stop::StepBudget => {
                    if node.machine.steps() < self.params.step_budget {
                        next.push(node);
                    }
                    return;
                }
                Stop::NeedProgramBit => {
                    if node.program.len() < self.params.max_len {
                        next.extend(node.children());
                    }
                    return;
                }
                Stop::NeedInput | Stop::Halted => return,
            }
        }
    }
}

/// Depth-first walk of the minimal-program tree, reporting every emission.
///
/// `on_emit(output, program_len)` is called when a run emits its `k`-th
/// symbol (and once with the empty output at the root); the program counted
/// for that output prefix is exactly the bits read so far. Runs whose output
/// leaves `filter` (when given) are pruned, and no run is followed past
/// `max_output` symbols.
fn walk_emissions(
    params: ApproximationParams,
    max_output: usize,
    filter: Option<&BitString>,
    mut on_emit: impl FnMut(&BitString, usize),
) {
    let mut stack = vec![Node::root()];
    on_emit(&BitString::new(), 0);
    while let Some(mut node) = stack.pop() {
        loop {
            let produced = node.machine.output().len();
            if produced >= max_output {
                break;
            }
            match node.machine.run(&node.program, &[], params.step_budget, produced + 1) {
                Stop::OutputLimit => {
                    let out = node.machine.output();
                    if let Some(f) = filter {
                        if produced < f.len() && out.bits()[produced] != f.bits()[produced] {
                            break;
                        }
                    }
                    on_emit(out, node.program.len());
                }
                Stop::NeedProgramBit => {
                    if node.program.len() < params.max_len {
                        let [zero, one] = node.children();
                        stack.push(one);
                        stack.push(zero);
                    }
                    break;
                }
                Stop::StepBudget | Stop::NeedInput | Stop::Halted => break,
            }
        }
    }
}

/// `M_{L,T}(x)`, computed by dovetailing.
pub fn lower_m(x: &BitString, params: ApproximationParams) -> PriorMass {
    Dovetailer::new(x.clone(), params).run()
}

/// `M_{L,T}` of every string of length at most `max_len`, from a single walk.
/// Strings with zero mass are omitted.
pub fn prefix_masses(max_len: usize, params: ApproximationParams) -> BTreeMap<BitString, PriorMass> {
    let mut masses: BTreeMap<BitString, PriorMass> = BTreeMap::new();
    walk_emissions(params, max_len, None, |out, len| {
        let entry = masses.entry(out.clone()).or_insert(PriorMass::ZERO);
        *entry = *entry + PriorMass::of_length(len);
    });
    masses
}

/// `(M(x), M(x0), M(x1))` from one walk.
pub fn extension_masses(x: &BitString, params: ApproximationParams) -> (PriorMass, [PriorMass; 2]) {
    let mut base = PriorMass::ZERO;
    let mut ext = [PriorMass::ZERO; 2];
    walk_emissions(params, x.len() + 1, Some(x), |out, len| {
        let w = PriorMass::of_length(len);
        if out.len() == x.len() {
            base = base + w;
        } else if out.len() == x.len() + 1 {
            let b = out.bits()[x.len()] as usize;
            ext[b] = ext[b] + w;
        }
    });
    (base, ext)
}

/// `M(x·next | x)`; with `normalize`, divided by `M(x0) + M(x1)` instead of
/// `M(x)`.
pub fn predictive(
    prefix: &BitString,
    next: bool,
    params: ApproximationParams,
    normalize: bool,
) -> Result<BigRational, SolomonoffError> {
    let (base, ext) = extension_masses(prefix, params);
    let denominator = if normalize { ext[0] + ext[1] } else { base };
    if denominator.is_zero() {
        return Err(SolomonoffError::ZeroPrefixMass(prefix.clone()));
    }
    Ok(ext[next as usize].to_ratio() / denominator.to_ratio())
}

/// Length of the shortest program (within `L`, `T`) whose output starts
/// with `x`: an upper bound on `K(x)` for the reference machine.
pub fn complexity_upper(x: &BitString, params: ApproximationParams) -> Option<usize> {
    let mut best: Option<usize> = None;
    walk_emissions(params, x.len(), Some(x), |out, len| {
        if out.len() == x.len() && best.is_none_or(|b| len < b) {
            best = Some(len);
        }
    });
    best
}

/// `2^-k` as an exact rational.
pub fn dyadic(k: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

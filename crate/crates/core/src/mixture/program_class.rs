//! The environment class induced by reference-machine programs.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::One;

use super::{Mixture, MixtureError};
use crate::interaction::{Action, Environment, History, Law, Percept};
use crate::machine::{ActionCoding, BitPercept, ChronologicalRun, Program, Stop};
use crate::solomonoff::ApproximationParams;

/// A program read as a deterministic chronological environment: actions go
/// in on the input channel, each cycle's percept is the next observation
/// bit and reward bit on the output channel.
///
/// Every query reruns the program from scratch on the history's actions, so
/// the conditional law is a pure function of its arguments. A run that stops
/// short (step budget, missing program bits, reading past the current
/// action, halting) loses all mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramEnvironment {
    program: Program,
    coding: ActionCoding,
    num_actions: usize,
    cycle_budget: u64,
}

impl ProgramEnvironment {
    pub fn new(program: Program, num_actions: usize, cycle_budget: u64) -> Self {
        Self {
            program,
            coding: ActionCoding::for_actions(num_actions),
            num_actions,
            cycle_budget,
        }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    fn percept(bp: BitPercept) -> Percept {
        Percept::new(bp.observation as usize, Rational64::from_integer(bp.reward as i64))
    }
}

impl Environment for ProgramEnvironment {
    fn name(&self) -> String {
        format!("program:{}", self.program.bits())
    }

    fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn num_observations(&self) -> usize {
        2
    }

    fn law(&self, history: &History, action: Action) -> Law {
        let mut run = ChronologicalRun::new(self.coding, self.cycle_budget);
        let bits = self.program.bits().bits();
        for a in history.actions() {
            if run.step(bits, a.0).is_err() {
                return Law::vanishing();
            }
        }
        match run.step(bits, action.0) {
            Ok(bp) => Law::certain(Self::percept(bp)),
            Err(_) => Law::vanishing(),
        }
    }

    fn is_proper(&self) -> bool {
        false
    }
}

/// All programs of length at most `L` that, fed action 0 every cycle, produce
/// `cycles` complete percepts within `T` steps per cycle and have read every
/// one of their bits by then, each weighted `2^-ℓ(q)`.
///
/// The set is prefix-free, so the weights obey Kraft. Behaviour under other
/// action sequences is probed lazily during planning: a member that aborts
/// there simply assigns that branch zero mass.
pub fn program_class(
    params: ApproximationParams,
    cycles: usize,
    num_actions: usize,
) -> Result<Mixture, MixtureError> {
    let coding = ActionCoding::for_actions(num_actions);
    let mut members: Vec<Program> = Vec::new();
    // (run, program bits, cycles done, steps at start of the current cycle, mid-cycle)
    let mut stack = vec![(ChronologicalRun::new(coding, params.step_budget), Vec::new(), 0usize, 0u64, false)];
    while let Some((mut run, mut program, done, started, resuming)) = stack.pop() {
        if done == cycles {
            members.push(Program::new(program.into()));
            continue;
        }
        let (outcome, started) = if resuming {
            (run.resume(&program, started), started)
        } else {
            let start = run.machine().steps();
            (run.step(&program, 0), start)
        };
        match outcome {
            Ok(_) => stack.push((run, program, done + 1, 0, false)),
            Err(Stop::NeedProgramBit) if program.len() < params.max_len => {
                let mut one = program.clone();
                one.push(true);
                program.push(false);
                stack.push((run.clone(), one, done, started, true));
                stack.push((run, program, done, started, true));
            }
            Err(_) => {}
        }
    }
    if members.is_empty() {
        return Err(MixtureError::EmptyClass {
            max_len: params.max_len,
            cycles,
        });
    }
    members.sort();
    let weights = members
        .iter()
        .map(|p| BigRational::new(BigInt::one(), BigInt::one() << p.len()))
        .collect();
    let components = members
        .into_iter()
        .map(|p| Arc::new(ProgramEnvironment::new(p, num_actions, params.step_budget)) as Arc<dyn Environment>)
        .collect();
    Mixture::new(components, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{execute_chronological, programs};
    use num_traits::Zero;

    #[test]
    fn zero_length_budget_is_empty() {
        assert_eq!(
            program_class(ApproximationParams::new(0, 64), 1, 2).unwrap_err(),
            MixtureError::EmptyClass { max_len: 0, cycles: 1 }
        );
        // No cycles required: the empty program alone, weight one.
        let mix = program_class(ApproximationParams::new(0, 64), 0, 2).unwrap();
        assert_eq!(mix.len(), 1);
        assert_eq!(mix.prior()[0], BigRational::one());
    }

    #[test]
    fn constant_program_is_a_member() {
        let p = programs::constant_one_one();
        let mix = program_class(ApproximationParams::new(p.len(), 64), 3, 2).unwrap();
        let idx = mix
            .components()
            .iter()
            .position(|c| c.name() == format!("program:{}", p.bits()))
            .expect("`~[..]` emits (1,1) forever");
        assert_eq!(mix.prior()[idx], BigRational::new(1.into(), BigInt::one() << p.len()));
    }

    #[test]
    fn kraft_and_membership_agree_with_direct_runs() {
        let params = ApproximationParams::new(12, 32);
        let mix = program_class(params, 2, 2).unwrap();
        let total = mix.prior().iter().fold(BigRational::zero(), |a, b| a + b);
        assert!(total <= BigRational::one());
        let coding = ActionCoding::for_actions(2);
        for c in mix.components() {
            let bits: crate::bits::BitString = c.name()["program:".len()..].parse().unwrap();
            let p = Program::new(bits);
            assert!(execute_chronological(&p, &[0, 0], coding, 32, 2).is_ok());
        }
    }

    #[test]
    fn class_grows_with_budgets() {
        let names = |l, t| -> Vec<String> {
            program_class(ApproximationParams::new(l, t), 2, 2)
                .map(|m| m.components().iter().map(|c| c.name()).collect())
                .unwrap_or_default()
        };
        let small = names(9, 16);
        let larger = names(12, 64);
        assert!(small.iter().all(|n| larger.contains(n)));
        assert!(larger.len() > small.len());
    }

    #[test]
    fn program_environment_reacts_to_actions() {
        // `,.` copies each action bit into the observation; reward is the same cell.
        let p = Program::assemble("~[,..~~]").unwrap();
        let env = ProgramEnvironment::new(p, 2, 64);
        let mut h = History::new();
        let law = env.law(&h, Action(1));
        let percept = law.entries()[0].0;
        assert_eq!(percept.observation, 1);
        h.push(Action(1), percept);
        assert_eq!(env.law(&h, Action(0)).entries()[0].0.observation, 0);
    }
}

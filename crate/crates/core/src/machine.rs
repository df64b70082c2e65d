//! The reference monotone machine.
//!
//! A binary-cell tape machine driven by a program read lazily, three bits at a
//! time, most significant bit first:
//!
//! | bits  | opcode     | effect                                                        |
//! |-------|------------|---------------------------------------------------------------|
//! | `000` | `<`        | move head left                                                |
//! | `001` | `>`        | move head right                                               |
//! | `010` | `~`        | flip the current cell                                         |
//! | `011` | `.`        | emit the current cell on the output channel                   |
//! | `100` | `,`        | read the next input bit into the current cell                 |
//! | `101` | `[`        | if the cell is 0, skip past the matching `]`                  |
//! | `110` | `]`        | if the cell is 1, jump back past the matching `[`             |
//! | `111` | `!`        | halt                                                          |
//!
//! The tape is unbounded in both directions and starts all-zero. An unmatched
//! `]` halts. Skipping forward from `[` decodes (and therefore consumes)
//! program bits up to the matching `]`; if the program ends first the run
//! stops for lack of program bits. Every executed opcode costs one step; the
//! forward scan of a skipping `[` is part of that one step.
//!
//! Program bits are consumed strictly on demand, so a run on `p` is a prefix
//! of the run on any extension of `p` up to the point where `p` runs out.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Opcode {
    MoveLeft = 0,
    MoveRight = 1,
    Flip = 2,
    Emit = 3,
    Read = 4,
    LoopOpen = 5,
    LoopClose = 6,
    Halt = 7,
}

impl Opcode {
    pub const ALL: [Opcode; 8] = [
        Opcode::MoveLeft,
        Opcode::MoveRight,
        Opcode::Flip,
        Opcode::Emit,
        Opcode::Read,
        Opcode::LoopOpen,
        Opcode::LoopClose,
        Opcode::Halt,
    ];

    pub fn from_code(code: u8) -> Opcode {
        Self::ALL[(code & 7) as usize]
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn mnemonic(self) -> char {
        match self {
            Opcode::MoveLeft => '<',
            Opcode::MoveRight => '>',
            Opcode::Flip => '~',
            Opcode::Emit => '.',
            Opcode::Read => ',',
            Opcode::LoopOpen => '[',
            Opcode::LoopClose => ']',
            Opcode::Halt => '!',
        }
    }

    pub fn from_mnemonic(c: char) -> Option<Opcode> {
        Self::ALL.into_iter().find(|op| op.mnemonic() == c)
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mnemonic())
    }
}

/// A candidate program. Ordered length-lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Program {
    bits: BitString,
}

impl Program {
    pub fn new(bits: BitString) -> Self {
        Self { bits }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Assemble from mnemonics, e.g. `"~[.]"`. Whitespace is ignored.
    pub fn assemble(src: &str) -> Option<Self> {
        let mut bits = BitString::new();
        for c in src.chars().filter(|c| !c.is_whitespace()) {
            let code = Opcode::from_mnemonic(c)?.code();
            for shift in (0..3).rev() {
                bits.push((code >> shift) & 1 == 1);
            }
        }
        Some(Self { bits })
    }

    /// Mnemonic listing of the complete opcodes; trailing partial bits shown raw.
    pub fn disassemble(&self) -> String {
        let bits = self.bits.bits();
        let mut out = String::new();
        let full = bits.len() / 3;
        for chunk in bits[..full * 3].chunks(3) {
            let code = chunk.iter().fold(0u8, |acc, &b| acc * 2 + b as u8);
            out.push(Opcode::from_code(code).mnemonic());
        }
        for &b in &bits[full * 3..] {
            out.push(if b { '1' } else { '0' });
        }
        out
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl PartialOrd for Program {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Program {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

/// Why a resumable run returned control to its caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    OutputLimit,
    StepBudget,
    /// The next program bit lies beyond the supplied slice.
    NeedProgramBit,
    /// The next input bit lies beyond the supplied slice.
    NeedInput,
    Halted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    OutputLimitReached,
    StepBudgetExhausted,
    ProgramBitsExhausted,
    InputExhausted,
    Halted,
}

impl From<Stop> for Status {
    fn from(stop: Stop) -> Self {
        match stop {
            Stop::OutputLimit => Status::OutputLimitReached,
            Stop::StepBudget => Status::StepBudgetExhausted,
            Stop::NeedProgramBit => Status::ProgramBitsExhausted,
            Stop::NeedInput => Status::InputExhausted,
            Stop::Halted => Status::Halted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionResult {
    pub output: BitString,
    pub consumed: usize,
    pub steps: u64,
    pub status: Status,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct Tape {
    right: Vec<bool>,
    left: Vec<bool>,
}

impl Tape {
    fn clear_where(&mut self, pred: impl Fn(i64) -> bool) {
        for (i, cell) in self.right.iter_mut().enumerate() {
            if pred(i as i64) {
                *cell = false;
            }
        }
        for (i, cell) in self.left.iter_mut().enumerate() {
            if pred(-(i as i64) - 1) {
                *cell = false;
            }
        }
        while self.right.last() == Some(&false) {
            self.right.pop();
        }
        while self.left.last() == Some(&false) {
            self.left.pop();
        }
    }

    fn get(&self, pos: i64) -> bool {
        if pos >= 0 {
            self.right.get(pos as usize).copied().unwrap_or(false)
        } else {
            self.left.get((-pos - 1) as usize).copied().unwrap_or(false)
        }
    }

    fn set(&mut self, pos: i64, value: bool) {
        let (side, idx) = if pos >= 0 {
            (&mut self.right, pos as usize)
        } else {
            (&mut self.left, (-pos - 1) as usize)
        };
        if idx >= side.len() {
            if !value {
                return;
            }
            side.resize(idx + 1, false);
        }
        side[idx] = value;
        while side.last() == Some(&false) {
            side.pop();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Mode {
    Running,
    /// Scanning forward from the `[` at this index for its match.
    Skipping(usize),
}

/// One line of a debugging trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub step: u64,
    pub opcode: Opcode,
    pub head: i64,
    pub cell: bool,
    pub consumed: usize,
    pub output: BitString,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.step, self.opcode, self.head, self.cell as u8, self.consumed, self.output
        )
    }
}

/// Resumable machine state.
///
/// The program and input are passed to [`Machine::run`] as slices; the
/// machine never reads past them and reports [`Stop::NeedProgramBit`] or
/// [`Stop::NeedInput`] instead, after which the caller may extend the slice
/// and resume. This is what lets enumerators branch on demand.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Machine {
    ops: Vec<Opcode>,
    /// For each decoded op: the index of its matching bracket, if any.
    partner: Vec<Option<usize>>,
    open_stack: Vec<usize>,
    pending: u8,
    pending_len: u8,
    consumed: usize,
    pc: usize,
    mode: Option<usize>,
    tape: Tape,
    head: i64,
    output: BitString,
    input_pos: usize,
    steps: u64,
}

impl Machine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn output(&self) -> &BitString {
        &self.output
    }

    pub fn input_consumed(&self) -> usize {
        self.input_pos
    }

    /// Forget emitted output, step count and consumed input.
    ///
    /// Two rebased machines that compare equal behave identically from here
    /// on, given the same fresh input and step allowance.
    pub fn rebase(&mut self) {
        self.output = BitString::new();
        self.steps = 0;
        self.input_pos = 0;
    }

    /// Clear tape cells the head can provably never visit again.
    ///
    /// Only applies when the program cannot grow (`program_complete`): then
    /// a program without `<` never revisits cells left of the head, and one
    /// without `>` never revisits cells to its right.
    pub fn forget_unreachable_tape(&mut self, program_complete: bool) {
        if !program_complete || self.pending_len != 0 || self.mode.is_some() {
            return;
        }
        let head = self.head;
        if !self.ops.contains(&Opcode::MoveLeft) {
            self.tape.clear_where(|pos| pos < head);
        }
        if !self.ops.contains(&Opcode::MoveRight) {
            self.tape.clear_where(|pos| pos > head);
        }
    }

    fn mode(&self) -> Mode {
        match self.mode {
            None => Mode::Running,
            Some(open) => Mode::Skipping(open),
        }
    }

    /// Decode one more opcode, reading up to three program bits.
    fn decode_next(&mut self, program: &[bool]) -> Result<(), Stop> {
        while self.pending_len < 3 {
            let bit = *program.get(self.consumed).ok_or(Stop::NeedProgramBit)?;
            self.consumed += 1;
            self.pending = self.pending * 2 + bit as u8;
            self.pending_len += 1;
        }
        let op = Opcode::from_code(self.pending);
        self.pending = 0;
        self.pending_len = 0;
        let idx = self.ops.len();
        self.ops.push(op);
        self.partner.push(None);
        match op {
            Opcode::LoopOpen => self.open_stack.push(idx),
            Opcode::LoopClose => {
                if let Some(open) = self.open_stack.pop() {
                    self.partner[open] = Some(idx);
                    self.partner[idx] = Some(open);
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Run until the output holds `output_limit` symbols, `max_steps` total
    /// steps have been executed, a bit beyond a slice is needed, or a halt.
    pub fn run(
        &mut self,
        program: &[bool],
        input: &[bool],
        max_steps: u64,
        output_limit: usize,
    ) -> Stop {
        self.run_inner(program, input, max_steps, output_limit, None)
    }

    pub fn run_traced(
        &mut self,
        program: &[bool],
        input: &[bool],
        max_steps: u64,
        output_limit: usize,
        trace: &mut Vec<TraceLine>,
    ) -> Stop {
        self.run_inner(program, input, max_steps, output_limit, Some(trace))
    }

    fn run_inner(
        &mut self,
        program: &[bool],
        input: &[bool],
        max_steps: u64,
        output_limit: usize,
        mut trace: Option<&mut Vec<TraceLine>>,
    ) -> Stop {
        loop {
            if self.output.len() >= output_limit {
                return Stop::OutputLimit;
            }
            if let Mode::Skipping(open) = self.mode() {
                if let Some(close) = self.partner[open] {
                    self.pc = close + 1;
                    self.mode = None;
                    continue;
                }
                if let Err(stop) = self.decode_next(program) {
                    return stop;
                }
                continue;
            }
            if self.steps >= max_steps {
                return Stop::StepBudget;
            }
            while self.ops.len() <= self.pc {
                if let Err(stop) = self.decode_next(program) {
                    return stop;
                }
            }
            let op = self.ops[self.pc];
            let cell = self.tape.get(self.head);
            if op == Opcode::Read && self.input_pos >= input.len() {
                return Stop::NeedInput;
            }
            self.steps += 1;
            let mut next = self.pc + 1;
            let mut halted = false;
            match op {
                Opcode::MoveLeft => self.head -= 1,
                Opcode::MoveRight => self.head += 1,
                Opcode::Flip => self.tape.set(self.head, !cell),
                Opcode::Emit => self.output.push(cell),
                Opcode::Read => {
                    self.tape.set(self.head, input[self.input_pos]);
                    self.input_pos += 1;
                }
                Opcode::LoopOpen => {
                    if !cell {
                        match self.partner[self.pc] {
                            Some(close) => next = close + 1,
                            None => self.mode = Some(self.pc),
                        }
                    }
                }
                Opcode::LoopClose => match self.partner[self.pc] {
                    None => halted = true,
                    Some(open) => {
                        if cell {
                            next = open + 1;
                        }
                    }
                },
                Opcode::Halt => halted = true,
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceLine {
                    step: self.steps,
                    opcode: op,
                    head: self.head,
                    cell: self.tape.get(self.head),
                    consumed: self.consumed,
                    output: self.output.clone(),
                });
            }
            if halted {
                return Stop::Halted;
            }
            if self.mode.is_none() {
                self.pc = next;
            }
        }
    }
}

/// Run `program` from a fresh machine with `condition` on the input channel.
pub fn execute(
    program: &Program,
    condition: &BitString,
    step_budget: u64,
    output_limit: usize,
) -> ExecutionResult {
    let mut m = Machine::new();
    let stop = m.run(
        program.bits().bits(),
        condition.bits(),
        step_budget,
        output_limit,
    );
    ExecutionResult {
        output: m.output.clone(),
        consumed: m.consumed,
        steps: m.steps,
        status: stop.into(),
    }
}

/// Like [`execute`], additionally recording one [`TraceLine`] per step.
pub fn trace(
    program: &Program,
    condition: &BitString,
    step_budget: u64,
    output_limit: usize,
) -> (ExecutionResult, Vec<TraceLine>) {
    let mut m = Machine::new();
    let mut lines = Vec::new();
    let stop = m.run_traced(
        program.bits().bits(),
        condition.bits(),
        step_budget,
        output_limit,
        &mut lines,
    );
    let result = ExecutionResult {
        output: m.output.clone(),
        consumed: m.consumed,
        steps: m.steps,
        status: stop.into(),
    };
    (result, lines)
}

/// Fixed-width binary encoding of actions on the input channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionCoding {
    pub width: usize,
}

impl ActionCoding {
    /// Smallest width able to encode `num_actions` distinct actions.
    pub fn for_actions(num_actions: usize) -> Self {
        let mut width = 0;
        while (1usize << width) < num_actions {
            width += 1;
        }
        Self { width }
    }

    pub fn encode_into(&self, action: usize, out: &mut Vec<bool>) {
        for shift in (0..self.width).rev() {
            out.push((action >> shift) & 1 == 1);
        }
    }
}

/// One cycle of program-environment output: observation bit, reward bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitPercept {
    pub observation: bool,
    pub reward: bool,
}

/// The program is not a valid environment for the action sequence within budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abort {
    /// Percepts of the cycles that did complete.
    pub completed: Vec<BitPercept>,
    pub status: Status,
}

/// A program being run as a chronological environment, one cycle at a time.
///
/// Cycle `k` makes the bits of action `a_k` available on the input channel,
/// then runs until two more output bits (observation, reward) appear. Each
/// cycle gets a fresh allowance of `cycle_budget` steps. Reading input beyond
/// `a_k` before the percept is complete aborts the run.
#[derive(Clone, Debug)]
pub struct ChronologicalRun {
    machine: Machine,
    input: Vec<bool>,
    coding: ActionCoding,
    cycle_budget: u64,
}

impl ChronologicalRun {
    pub fn new(coding: ActionCoding, cycle_budget: u64) -> Self {
        Self {
            machine: Machine::new(),
            input: Vec::new(),
            coding,
            cycle_budget,
        }
    }

    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn cycles_completed(&self) -> usize {
        self.machine.output.len() / 2
    }

    /// Feed `action` and run one cycle over `program`.
    ///
    /// Returns `Err(Stop::NeedProgramBit)` (with the action already fed) when
    /// the cycle needs more program bits than `program` holds; extending the
    /// slice and calling [`ChronologicalRun::resume`] continues the cycle.
    pub fn step(&mut self, program: &[bool], action: usize) -> Result<BitPercept, Stop> {
        self.coding.encode_into(action, &mut self.input);
        self.resume_with_budget(program, self.machine.steps + self.cycle_budget)
    }

    /// Continue the current cycle after a [`Stop::NeedProgramBit`].
    pub fn resume(&mut self, program: &[bool], cycle_started_at: u64) -> Result<BitPercept, Stop> {
        self.resume_with_budget(program, cycle_started_at + self.cycle_budget)
    }

    fn resume_with_budget(&mut self, program: &[bool], max_steps: u64) -> Result<BitPercept, Stop> {
        let target = (self.cycles_completed() + 1) * 2;
        match self.machine.run(program, &self.input, max_steps, target) {
            Stop::OutputLimit => {
                let out = self.machine.output.bits();
                Ok(BitPercept {
                    observation: out[target - 2],
                    reward: out[target - 1],
                })
            }
            other => Err(other),
        }
    }
}

/// Run `program` as an environment against `actions` for `cycles` cycles.
pub fn execute_chronological(
    program: &Program,
    actions: &[usize],
    coding: ActionCoding,
    cycle_budget: u64,
    cycles: usize,
) -> Result<Vec<BitPercept>, Abort> {
    assert!(actions.len() >= cycles, "need an action for every cycle");
    let mut run = ChronologicalRun::new(coding, cycle_budget);
    let mut percepts = Vec::with_capacity(cycles);
    for &a in &actions[..cycles] {
        match run.step(program.bits().bits(), a) {
            Ok(p) => percepts.push(p),
            Err(stop) => {
                return Err(Abort {
                    completed: percepts,
                    status: stop.into(),
                })
            }
        }
    }
    Ok(percepts)
}

/// Well-known small programs.
pub mod programs {
    use super::Program;

    /// Emits 1 forever: `~[.]`.
    pub fn ones() -> Program {
        Program::assemble("~[.]").unwrap()
    }

    /// Emits 0 forever, walking left across fresh cells: `~[<.~]`.
    pub fn zeros() -> Program {
        Program::assemble("~[<.~]").unwrap()
    }

    /// Reads an input bit and emits it twice, forever: `~[,..<~]`.
    ///
    /// With fair coin flips on the input channel this generates the
    /// selected-bits sequences, where every even bit repeats the odd bit
    /// before it.
    pub fn copy_pairs() -> Program {
        Program::assemble("~[,..<~]").unwrap()
    }

    /// Environment emitting percept (1, 1) every cycle: `~[..]`.
    pub fn constant_one_one() -> Program {
        Program::assemble("~[..]").unwrap()
    }
}

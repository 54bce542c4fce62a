//! The finite word RASP machine.
//!
//! A configuration `<i, a, M, u, y>` holds the instruction counter, the
//! accumulator, `n` words of memory shared by program and data, an input
//! buffer whose word 0 is the read cursor, and an output buffer whose word 0
//! is the write count. The machine halts by reaching a fixed point of its
//! transition map; there is no halt instruction.
//!
//! Two transition functions are provided. [`step_reference`] is a direct
//! case analysis. [`step_branchless`] evaluates every guarded case, forms
//! mutually exclusive indicators, and selects the successor with masks. The
//! two must agree on every configuration.

mod branchless;
mod format;
mod reference;

pub use branchless::{advance, indicator_partition, is_fixed_point, step_branchless};
pub use format::{ConfigSnapshot, ProgramJson};
pub use reference::step_reference;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{low_mask, Word};

/// Word width, memory size and buffer capacities of a machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MachineParams {
    /// Word width in bits.
    pub w: u32,
    /// Memory size in words.
    pub n: usize,
    /// Input capacity in words.
    pub ell: usize,
    /// Output capacity in words.
    pub s: usize,
    /// Scratch-region capacity in words.
    pub mu: usize,
}

impl Default for MachineParams {
    fn default() -> Self {
        Self {
            w: 32,
            n: 250,
            ell: 10,
            s: 2,
            mu: 10,
        }
    }
}

impl MachineParams {
    pub fn new(w: u32, n: usize, ell: usize, s: usize, mu: usize) -> Result<Self> {
        let p = Self { w, n, ell, s, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=64).contains(&self.w) {
            return Err(Error::Params(format!("word width {} outside 1..=64", self.w)));
        }
        if self.n < 2 {
            return Err(Error::Params(format!("memory size {} is below 2", self.n)));
        }
        if self.ell < 1 || self.s < 1 || self.mu < 1 {
            return Err(Error::Params(format!(
                "capacities must be at least 1 (ell={}, s={}, mu={})",
                self.ell, self.s, self.mu
            )));
        }
        Ok(())
    }

    /// Checks that words of this machine fit the host storage type `W`.
    pub fn validate_for<W: Word>(&self) -> Result<()> {
        self.validate()?;
        if self.w > W::BITS {
            return Err(Error::Params(format!(
                "word width {} does not fit a {}-bit storage type",
                self.w,
                W::BITS
            )));
        }
        Ok(())
    }

    #[inline(always)]
    pub fn mask<W: Word>(&self) -> W {
        W::truncate(low_mask(self.w))
    }

    /// Number of words in one configuration, `n + ell + s + 4`.
    pub fn config_words(&self) -> usize {
        self.n + self.ell + self.s + 4
    }
}

/// The seven executable opcodes. Every other opcode value halts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Opcode {
    Lod = 1,
    Add = 2,
    Mul = 3,
    Sto = 4,
    Bnz = 5,
    Rd = 6,
    Pri = 7,
}

impl Opcode {
    pub const ALL: [Opcode; 7] = [
        Opcode::Lod,
        Opcode::Add,
        Opcode::Mul,
        Opcode::Sto,
        Opcode::Bnz,
        Opcode::Rd,
        Opcode::Pri,
    ];

    pub fn decode(word: u64) -> Option<Self> {
        Self::ALL.get(word.wrapping_sub(1) as usize).copied()
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Lod => "LOD",
            Opcode::Add => "ADD",
            Opcode::Mul => "MUL",
            Opcode::Sto => "STO",
            Opcode::Bnz => "BNZ",
            Opcode::Rd => "RD",
            Opcode::Pri => "PRI",
        }
    }
}

/// The guarded cases of the transition map, in indicator order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    Lod,
    Add,
    Mul,
    Sto,
    BnzTaken,
    BnzNotTaken,
    Rd,
    Pri,
    Otherwise,
}

impl Case {
    pub const ALL: [Case; 9] = [
        Case::Lod,
        Case::Add,
        Case::Mul,
        Case::Sto,
        Case::BnzTaken,
        Case::BnzNotTaken,
        Case::Rd,
        Case::Pri,
        Case::Otherwise,
    ];
}

/// One indicator bit per [`Case`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Indicators(pub [bool; 9]);

impl Indicators {
    pub fn get(&self, case: Case) -> bool {
        self.0[case as usize]
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// The selected case, if exactly one indicator is set.
    pub fn case(&self) -> Option<Case> {
        if self.count_ones() != 1 {
            return None;
        }
        Case::ALL.into_iter().find(|&c| self.get(c))
    }
}

/// A program: `2m` words read as `<opcode, operand>` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Program<W> {
    pub words: Vec<W>,
}

impl<W: Word> Program<W> {
    pub fn new(words: Vec<W>) -> Result<Self> {
        if !words.len().is_multiple_of(2) {
            return Err(Error::Format(format!(
                "program has an odd number of words ({})",
                words.len()
            )));
        }
        Ok(Self { words })
    }

    /// Builds a program from `u64` words, checking that each fits `w` bits.
    pub fn from_u64s(words: &[u64], w: u32) -> Result<Self> {
        let mask = low_mask(w);
        let words = words
            .iter()
            .map(|&v| {
                if v & !mask != 0 || w > W::BITS {
                    Err(Error::WordOverflow { value: v, width: w.min(W::BITS) })
                } else {
                    Ok(W::truncate(v))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(words)
    }

    /// Number of instruction pairs `m`.
    pub fn pairs(&self) -> usize {
        self.words.len() / 2
    }
}

/// One configuration `<i, a, M, u, y>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config<W> {
    /// Instruction counter.
    pub i: W,
    /// Accumulator.
    pub a: W,
    /// Memory, exactly `n` words.
    pub mem: Vec<W>,
    /// Input buffer, `ell + 1` words; `input[0]` is the read cursor.
    pub input: Vec<W>,
    /// Output buffer, `s + 1` words; `output[0]` is the write count.
    pub output: Vec<W>,
}

impl<W: Word> Config<W> {
    /// The all-zero configuration.
    pub fn zeroed(p: &MachineParams) -> Self {
        Self {
            i: W::zero(),
            a: W::zero(),
            mem: vec![W::zero(); p.n],
            input: vec![W::zero(); p.ell + 1],
            output: vec![W::zero(); p.s + 1],
        }
    }

    /// Buffer lengths match `p` and every word fits `p.w` bits.
    pub fn is_well_formed(&self, p: &MachineParams) -> bool {
        let mask = low_mask(p.w);
        self.mem.len() == p.n
            && self.input.len() == p.ell + 1
            && self.output.len() == p.s + 1
            && std::iter::once(&self.i)
                .chain(std::iter::once(&self.a))
                .chain(&self.mem)
                .chain(&self.input)
                .chain(&self.output)
                .all(|v| v.widen() & !mask == 0)
    }

    /// The words written so far, `y_1 .. y_{y_0}`.
    pub fn outputs(&self) -> &[W] {
        let count = (self.output[0].widen() as usize).min(self.output.len() - 1);
        &self.output[1..=count]
    }
}

/// Result of one transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome<W> {
    pub next: Config<W>,
    /// `next` equals the input configuration.
    pub fixed_point: bool,
}

/// Reads the opcode and operand at the instruction counter with circular
/// addressing: `<M[i mod n], M[(i + 1 mod 2^w) mod n]>`.
#[inline(always)]
pub fn fetch<W: Word>(c: &Config<W>, p: &MachineParams) -> (W, W) {
    let n = c.mem.len() as u64;
    let next = c.i.wrapping_add(&W::one()) & p.mask::<W>();
    let o = c.mem[(c.i.widen() % n) as usize];
    let j = c.mem[(next.widen() % n) as usize];
    (o, j)
}

/// Packs a program and its input into the initial configuration.
pub fn init_config<W: Word>(program: &Program<W>, x: &[W], p: &MachineParams) -> Result<Config<W>> {
    p.validate_for::<W>()?;
    if program.words.len() > p.n {
        return Err(Error::Capacity {
            what: "program",
            needed: program.words.len(),
            available: p.n,
        });
    }
    if x.len() > p.ell {
        return Err(Error::Capacity {
            what: "input",
            needed: x.len(),
            available: p.ell,
        });
    }
    let mask = p.mask::<W>();
    let mut c = Config::zeroed(p);
    for (dst, &src) in c.mem.iter_mut().zip(&program.words) {
        *dst = src & mask;
    }
    for (dst, &src) in c.input[1..].iter_mut().zip(x) {
        *dst = src & mask;
    }
    Ok(c)
}

/// Final state of a bounded serial run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome<W> {
    pub last: Config<W>,
    /// Least number of steps after which the configuration is a fixed point,
    /// if that happens within the budget.
    pub tau_h: Option<u64>,
}

/// Iterates the transition map from `c0` until a fixed point or until
/// `tau_max` steps have been applied.
pub fn run_to_fixpoint<W: Word>(c0: Config<W>, tau_max: u64, p: &MachineParams) -> RunOutcome<W> {
    let mut c = c0;
    let mut steps = 0;
    loop {
        if steps == tau_max {
            let tau_h = is_fixed_point(&c, p).then_some(steps);
            return RunOutcome { last: c, tau_h };
        }
        if advance(&mut c, p) {
            return RunOutcome {
                last: c,
                tau_h: Some(steps),
            };
        }
        steps += 1;
    }
}

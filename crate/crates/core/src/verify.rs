//! Differential checks shared by the self-test command and the test suites.
//!
//! Each check pairs an implementation with an independent route to the same
//! answer: the two transition functions, the compiler against the direct
//! evaluator, the count table against exhaustive enumeration, and the
//! hypervisor against serial runs.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hypervisor::{run_batch, BatchConfig};
use crate::lang::{parse, pretty_print, tokenize, Function};
use crate::lower::LayoutInfo;
use crate::oracle::{eval, OracleStatus};
use crate::sampler::{count_programs, enumerate_all, sample_inputs, Sampler};
use crate::vm::{
    indicator_partition, init_config, run_to_fixpoint, Case, Config, MachineParams, Program, StepOutcome,
};
use crate::word::{low_mask, Word};

/// A configuration with valid buffer lengths and cursors, biased so that
/// every guarded case occurs often.
pub fn random_config<W: Word>(rng: &mut impl Rng, p: &MachineParams) -> Config<W> {
    let mask = low_mask(p.w);
    let word = |rng: &mut dyn rand::RngCore| W::truncate(rng.next_u64() & mask);
    let mut c = Config::zeroed(p);
    for cell in c.mem.iter_mut() {
        *cell = if rng.gen_bool(0.5) {
            W::truncate(rng.gen_range(0..10u64) & mask)
        } else {
            word(rng)
        };
    }
    c.i = if rng.gen_bool(0.5) {
        W::truncate(rng.gen_range(0..p.n as u64) & mask)
    } else {
        word(rng)
    };
    c.a = if rng.gen_bool(0.25) { W::zero() } else { word(rng) };
    if rng.gen_bool(0.1) {
        // BNZ back to the current pair
        let n = p.n as u64;
        let i = c.i.widen();
        c.mem[(i % n) as usize] = W::truncate(5 & mask);
        c.mem[((i.wrapping_add(1) & mask) % n) as usize] = c.i;
    }
    for v in c.input.iter_mut().skip(1) {
        *v = word(rng);
    }
    c.input[0] = W::truncate(rng.gen_range(0..=p.ell as u64) & mask);
    for v in c.output.iter_mut().skip(1) {
        *v = word(rng);
    }
    c.output[0] = W::truncate(rng.gen_range(0..=p.s as u64) & mask);
    c
}

pub type StepFn<W> = fn(&Config<W>, &MachineParams) -> StepOutcome<W>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepReport {
    pub cases: u64,
    pub mismatches: u64,
    /// Indicator vectors that did not have exactly one bit set.
    pub partition_violations: u64,
    /// A `fixed_point` flag that disagreed with full configuration equality.
    pub flag_errors: u64,
    /// How often each case was selected.
    pub case_counts: [u64; 9],
}

impl StepReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.partition_violations == 0 && self.flag_errors == 0
    }
}

/// Compares two transition functions on `cases` random configurations.
pub fn check_step_equivalence<W: Word>(
    cases: u64,
    p: &MachineParams,
    seed: u64,
    left: StepFn<W>,
    right: StepFn<W>,
) -> StepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = StepReport::default();
    for _ in 0..cases {
        let c = random_config::<W>(&mut rng, p);
        let a = left(&c, p);
        let b = right(&c, p);
        report.cases += 1;
        if a != b {
            report.mismatches += 1;
        }
        if a.fixed_point != (a.next == c) || b.fixed_point != (b.next == c) {
            report.flag_errors += 1;
        }
        let eta = indicator_partition(&c, p);
        match eta.case() {
            Some(case) => report.case_counts[case as usize] += 1,
            None => report.partition_violations += 1,
        }
    }
    report
}

pub type LowerFn<W> = fn(&Function, &MachineParams) -> Result<(Program<W>, LayoutInfo)>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompilerReport {
    pub sampled: u64,
    /// Programs where both the evaluator and the VM halted within budget.
    pub compared: u64,
    pub mismatches: u64,
    pub oracle_halted: u64,
    pub vm_halted: u64,
    pub compile_errors: u64,
    /// Canonical source of the first few mismatching programs.
    pub examples: Vec<String>,
}

impl CompilerReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.compile_errors == 0
    }
}

/// Runs `per_len` sampled programs per length through both the evaluator
/// and `lower` followed by the VM, comparing the first `min(N_out, s)` outputs.
#[allow(clippy::too_many_arguments)]
pub fn check_compiler<W: Word>(
    lengths: &[usize],
    per_len: u64,
    seed: u64,
    fuel: u64,
    tau_max: u64,
    p: &MachineParams,
    lower: LowerFn<W>,
) -> Result<CompilerReport> {
    let mut report = CompilerReport::default();
    for &len in lengths {
        let sampler = Sampler::new(len)?;
        for index in 0..per_len {
            let f = sampler.sample(seed, index);
            let x: Vec<W> = sample_inputs(f.inputs as usize, p.w, seed, index);
            report.sampled += 1;
            let expected = eval(&f, &x, fuel, p);
            let halted = expected.status == OracleStatus::Halted;
            report.oracle_halted += u64::from(halted);

            let Ok((prog, _)) = lower(&f, p) else {
                report.compile_errors += 1;
                continue;
            };
            let run = run_to_fixpoint(init_config(&prog, &x, p)?, tau_max, p);
            report.vm_halted += u64::from(run.tau_h.is_some());
            if !halted || run.tau_h.is_none() {
                continue;
            }
            report.compared += 1;
            let k = (f.outputs as usize).min(p.s);
            if run.last.outputs() != &expected.opt[..k] {
                report.mismatches += 1;
                if report.examples.len() < 5 {
                    report.examples.push(pretty_print(&f));
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountCheck {
    pub len: usize,
    pub counted: BigUint,
    pub enumerated: u64,
    /// Enumerated programs with the wrong length or a lossy print/parse trip.
    pub defects: u64,
}

impl CountCheck {
    pub fn passed(&self) -> bool {
        self.counted == BigUint::from(self.enumerated) && self.defects == 0
    }
}

/// Counts against enumeration for one length.
///
/// A program that survives `parse(tokenize(print(f))) == f` cannot share its
/// token string with any other, so zero defects also rules out duplicates.
pub fn check_count(len: usize) -> Result<CountCheck> {
    let mut enumerated = 0;
    let mut defects = 0;
    for f in enumerate_all(len)? {
        enumerated += 1;
        let text = pretty_print(&f);
        let ok = tokenize(&text)
            .ok()
            .filter(|t| t.len() == len)
            .and_then(|t| parse(&t).ok())
            .is_some_and(|g| g == f);
        defects += u64::from(!ok);
    }
    Ok(CountCheck {
        len,
        counted: count_programs(len),
        enumerated,
        defects,
    })
}

/// Lengths up to 64 whose count is at most `limit`.
///
/// Counts are not monotone in the length (31 has more programs than 32),
/// so this is a filter rather than a prefix.
pub fn enumerable_lengths(limit: u64) -> Vec<usize> {
    let limit = BigUint::from(limit);
    (0..=64).filter(|&len| count_programs(len) <= limit).collect()
}

/// Runs the same batch under every `(workers, epoch)` pair and reports
/// whether all outcomes agree with each other and with serial runs.
pub fn check_schedule_independence<W: Word>(
    configs: &[Config<W>],
    p: &MachineParams,
    tau_max: u64,
    grid: &[(usize, u64)],
) -> Result<bool> {
    let mut reference = None;
    for &(workers, epoch) in grid {
        let r = run_batch(configs.to_vec(), p, &BatchConfig::new(tau_max, epoch, workers))?;
        match &reference {
            None => {
                for (slot, c) in r.slots.iter().zip(configs) {
                    let serial = run_to_fixpoint(c.clone(), tau_max, p);
                    if slot.config != serial.last || slot.tau_h != serial.tau_h {
                        return Ok(false);
                    }
                }
                reference = Some(r);
            }
            Some(first) => {
                if !first.same_outcome(&r) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Case names in indicator order, for reports.
pub fn case_names() -> [&'static str; 9] {
    Case::ALL.map(|c| match c {
        Case::Lod => "LOD",
        Case::Add => "ADD",
        Case::Mul => "MUL",
        Case::Sto => "STO",
        Case::BnzTaken => "BNZ taken",
        Case::BnzNotTaken => "BNZ not taken",
        Case::Rd => "RD",
        Case::Pri => "PRI",
        Case::Otherwise => "otherwise",
    })
}

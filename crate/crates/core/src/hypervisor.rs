//! Striped round-robin execution of many independent machines.
//!
//! `W` persistent workers split the batch by stripe: worker `g` owns VMs
//! `g, g + W, g + 2W, ...`. Each worker runs `ceil(tau_max / q)` rounds over
//! its stripe and advances every live VM by at most `q` steps per visit.
//! Halted and exhausted VMs are skipped. Because VMs never interact, the
//! outcome of every slot equals a serial run of that VM alone, whatever the
//! worker count or epoch.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::vm::{advance, is_fixed_point, Config, MachineParams};
use crate::word::Word;

/// Default steps per visit.
pub const DEFAULT_EPOCH: u64 = 64;
/// Default ceiling on resident configuration words.
pub const DEFAULT_MAX_WORDS: usize = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatchConfig {
    /// Per-VM step budget.
    pub tau_max: u64,
    /// Steps per visit, at least 1.
    pub epoch: u64,
    /// Worker count; 0 picks the available parallelism.
    pub workers: usize,
    /// Largest `d * (n + ell + s + 4)` accepted.
    pub max_words: usize,
}

impl Default for BatchConfig {
    fn default() -> Self {
        Self {
            tau_max: 10_000,
            epoch: DEFAULT_EPOCH,
            workers: 0,
            max_words: DEFAULT_MAX_WORDS,
        }
    }
}

impl BatchConfig {
    pub fn new(tau_max: u64, epoch: u64, workers: usize) -> Self {
        Self {
            tau_max,
            epoch,
            workers,
            ..Self::default()
        }
    }

    /// Worker count after resolving 0 to the machine's parallelism.
    pub fn resolved_workers(&self) -> usize {
        match self.workers {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            w => w,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VmStatus {
    Running,
    Halted,
    BudgetExhausted,
}

impl VmStatus {
    pub fn name(self) -> &'static str {
        match self {
            VmStatus::Running => "running",
            VmStatus::Halted => "halted",
            VmStatus::BudgetExhausted => "nonhalt",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VmSlot<W> {
    pub config: Config<W>,
    pub status: VmStatus,
    pub steps_taken: u64,
    pub tau_h: Option<u64>,
}

impl<W: Word> VmSlot<W> {
    pub fn new(config: Config<W>) -> Self {
        Self {
            config,
            status: VmStatus::Running,
            steps_taken: 0,
            tau_h: None,
        }
    }

    /// Advances by up to `epoch` steps without exceeding `tau_max`.
    #[inline]
    fn visit(&mut self, epoch: u64, tau_max: u64, p: &MachineParams) {
        for _ in 0..epoch {
            if self.steps_taken == tau_max {
                break;
            }
            if advance(&mut self.config, p) {
                self.halt();
                return;
            }
            self.steps_taken += 1;
        }
    }

    fn halt(&mut self) {
        self.status = VmStatus::Halted;
        self.tau_h = Some(self.steps_taken);
    }

    /// Settles a slot that used its whole budget.
    fn finish(&mut self, p: &MachineParams) {
        if self.status != VmStatus::Running {
            return;
        }
        if is_fixed_point(&self.config, p) {
            self.halt();
        } else {
            self.status = VmStatus::BudgetExhausted;
        }
    }
}

/// Number of buckets kept for individual halting numbers.
pub const HISTOGRAM_BUCKETS: usize = 100;

/// Halting numbers `0..99`, one tail bucket for larger ones, and a count of
/// VMs that did not halt.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Histogram {
    pub buckets: [u64; HISTOGRAM_BUCKETS],
    /// Halted with `tau_h >= 100`.
    pub tail: u64,
    pub nonhalt: u64,
}

impl Default for Histogram {
    fn default() -> Self {
        Self {
            buckets: [0; HISTOGRAM_BUCKETS],
            tail: 0,
            nonhalt: 0,
        }
    }
}

impl Histogram {
    pub fn record(&mut self, tau_h: Option<u64>) {
        match tau_h {
            Some(t) if (t as usize) < HISTOGRAM_BUCKETS => self.buckets[t as usize] += 1,
            Some(_) => self.tail += 1,
            None => self.nonhalt += 1,
        }
    }

    pub fn halted(&self) -> u64 {
        self.buckets.iter().sum::<u64>() + self.tail
    }

    pub fn total(&self) -> u64 {
        self.halted() + self.nonhalt
    }

    /// Halted with `tau_h < 100`.
    pub fn head(&self) -> u64 {
        self.buckets.iter().sum()
    }

    /// `bucket,count` rows: `0..99`, `100+`, `nonhalt`.
    pub fn csv_rows(&self) -> String {
        let mut out = String::from("bucket,count\n");
        for (k, c) in self.buckets.iter().enumerate() {
            out.push_str(&format!("{k},{c}\n"));
        }
        out.push_str(&format!("100+,{}\n", self.tail));
        out.push_str(&format!("nonhalt,{}\n", self.nonhalt));
        out
    }
}

#[derive(Clone, Debug)]
pub struct BatchResult<W> {
    pub slots: Vec<VmSlot<W>>,
    pub histogram: Histogram,
    pub wall_time: Duration,
}

impl<W: Word> BatchResult<W> {
    /// Equality of everything except wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.slots == other.slots && self.histogram == other.histogram
    }

    pub fn halted(&self) -> u64 {
        self.histogram.halted()
    }
}

pub fn collect_histogram<W>(slots: &[VmSlot<W>]) -> Histogram {
    let mut h = Histogram::default();
    for s in slots {
        h.record(s.tau_h);
    }
    h
}

/// Runs every configuration until it halts or spends `bc.tau_max` steps.
pub fn run_batch<W: Word>(configs: Vec<Config<W>>, p: &MachineParams, bc: &BatchConfig) -> Result<BatchResult<W>> {
    p.validate_for::<W>()?;
    if bc.epoch == 0 {
        return Err(Error::Params("epoch must be at least 1".into()));
    }
    let needed = configs.len().saturating_mul(p.config_words());
    if needed > bc.max_words {
        return Err(Error::Capacity {
            what: "batch",
            needed,
            available: bc.max_words,
        });
    }
    if let Some(bad) = configs.iter().position(|c| !c.is_well_formed(p)) {
        return Err(Error::Params(format!("configuration {bad} does not match the machine")));
    }

    let start = Instant::now();
    let mut slots: Vec<VmSlot<W>> = configs.into_iter().map(VmSlot::new).collect();
    let workers = bc.resolved_workers().max(1);
    let rounds = bc.tau_max.div_ceil(bc.epoch);

    let mut stripes: Vec<Vec<&mut VmSlot<W>>> = (0..workers.min(slots.len())).map(|_| Vec::new()).collect();
    for (j, slot) in slots.iter_mut().enumerate() {
        stripes[j % workers].push(slot);
    }

    let work = |stripe: &mut Vec<&mut VmSlot<W>>| {
        for _ in 0..rounds {
            let mut live = false;
            for slot in stripe.iter_mut() {
                if slot.status == VmStatus::Running {
                    slot.visit(bc.epoch, bc.tau_max, p);
                    live |= slot.status == VmStatus::Running;
                }
            }
            if !live {
                break;
            }
        }
        for slot in stripe.iter_mut() {
            slot.finish(p);
        }
    };

    if stripes.len() <= 1 {
        stripes.iter_mut().for_each(work);
    } else {
        std::thread::scope(|scope| {
            for stripe in stripes.iter_mut() {
                scope.spawn(|| work(stripe));
            }
        });
    }
    drop(stripes);

    let histogram = collect_histogram(&slots);
    Ok(BatchResult {
        slots,
        histogram,
        wall_time: start.elapsed(),
    })
}

/// One timing row for a worker count.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub workers: usize,
    pub wall_time: Duration,
    pub halted: u64,
}

/// Times the same batch once per worker count.
pub fn throughput_bench<W: Word>(
    configs: &[Config<W>],
    p: &MachineParams,
    tau_max: u64,
    epoch: u64,
    worker_counts: &[usize],
) -> Result<Vec<BenchRow>> {
    worker_counts
        .iter()
        .map(|&workers| {
            let bc = BatchConfig::new(tau_max, epoch, workers);
            let r = run_batch(configs.to_vec(), p, &bc)?;
            Ok(BenchRow {
                workers: bc.resolved_workers(),
                wall_time: r.wall_time,
                halted: r.halted(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vm::{init_config, run_to_fixpoint, Program};

    fn params() -> MachineParams {
        MachineParams::new(8, 16, 2, 2, 1).unwrap()
    }

    fn config(words: &[u8]) -> Config<u8> {
        init_config(&Program::new(words.to_vec()).unwrap(), &[], &params()).unwrap()
    }

    #[test]
    fn empty_batch() {
        let r = run_batch::<u8>(vec![], &params(), &BatchConfig::new(10, 3, 4)).unwrap();
        assert!(r.slots.is_empty());
        assert_eq!(r.histogram.total(), 0);
    }

    #[test]
    fn small_batch_matches_serial() {
        let p = params();
        // halt; LOD 5 STO 6 HLT; LOD 1 BNZ 0 (spins)
        let cs = vec![config(&[0, 0]), config(&[1, 5, 4, 6, 0, 0]), config(&[1, 1, 5, 0])];
        for (w, q) in [(1, 1), (2, 3), (8, 64)] {
            let r = run_batch(cs.clone(), &p, &BatchConfig::new(50, q, w)).unwrap();
            let taus: Vec<_> = r.slots.iter().map(|s| s.tau_h).collect();
            assert_eq!(taus, vec![Some(0), Some(2), None]);
            assert_eq!(r.slots[2].status, VmStatus::BudgetExhausted);
            assert_eq!(r.slots[2].steps_taken, 50);
            for (slot, c) in r.slots.iter().zip(&cs) {
                let serial = run_to_fixpoint(c.clone(), 50, &p);
                assert_eq!(slot.config, serial.last);
                assert_eq!(slot.tau_h, serial.tau_h);
            }
        }
    }

    #[test]
    fn zero_budget_still_detects_halted_starts() {
        let p = params();
        let r = run_batch(vec![config(&[0, 0]), config(&[1, 5])], &p, &BatchConfig::new(0, 7, 2)).unwrap();
        assert_eq!(r.slots[0].status, VmStatus::Halted);
        assert_eq!(r.slots[0].tau_h, Some(0));
        assert_eq!(r.slots[1].status, VmStatus::BudgetExhausted);
    }

    #[test]
    fn halting_at_exactly_the_budget_counts() {
        let p = params();
        let r = run_batch(vec![config(&[1, 5, 4, 6, 0, 0])], &p, &BatchConfig::new(2, 1, 1)).unwrap();
        assert_eq!(r.slots[0].tau_h, Some(2));
        assert_eq!(r.slots[0].steps_taken, 2);
    }

    #[test]
    fn rejects_bad_batches() {
        let p = params();
        let mut bc = BatchConfig::new(10, 0, 1);
        assert!(run_batch(vec![config(&[0, 0])], &p, &bc).is_err());
        bc.epoch = 1;
        bc.max_words = 10;
        assert!(matches!(
            run_batch(vec![config(&[0, 0])], &p, &bc),
            Err(Error::Capacity { what: "batch", .. })
        ));
        let other = MachineParams::new(8, 32, 2, 2, 1).unwrap();
        assert!(run_batch(vec![config(&[0, 0])], &other, &BatchConfig::default()).is_err());
    }

    #[test]
    fn histogram_buckets() {
        let mut h = Histogram::default();
        for t in [Some(0), Some(0), Some(99), Some(100), Some(5000), None] {
            h.record(t);
        }
        assert_eq!(h.buckets[0], 2);
        assert_eq!(h.buckets[99], 1);
        assert_eq!(h.tail, 2);
        assert_eq!(h.nonhalt, 1);
        assert_eq!(h.halted(), 5);
        let csv = h.csv_rows();
        assert!(csv.starts_with("bucket,count\n0,2\n1,0\n"));
        assert!(csv.ends_with("99,1\n100+,2\nnonhalt,1\n"));
        assert_eq!(csv.lines().count(), 103);
    }
}

//! Batches of sampled, compiled and packed programs.

use crate::error::Result;
use crate::lang::Function;
use crate::lower::lower;
use crate::sampler::{sample_inputs, Sampler};
use crate::vm::{init_config, Config, MachineParams};
use crate::word::Word;

/// How inputs are chosen for each sampled program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inputs {
    /// Uniform words, one per declared input.
    Random,
    /// No input words; every RD reads a zero.
    Zero,
}

/// A sample that could not be turned into a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Aborted {
    pub index: u64,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Workload<W> {
    /// VM ordinal of each configuration.
    pub indices: Vec<u64>,
    pub programs: Vec<Function>,
    pub configs: Vec<Config<W>>,
    pub aborted: Vec<Aborted>,
}

/// Samples programs `first .. first + count` of length `len` under `seed`.
pub fn sampled_workload<W: Word>(
    sampler: &Sampler,
    first: u64,
    count: u64,
    seed: u64,
    inputs: Inputs,
    p: &MachineParams,
) -> Result<Workload<W>> {
    p.validate_for::<W>()?;
    let mut out = Workload {
        indices: Vec::with_capacity(count as usize),
        programs: Vec::with_capacity(count as usize),
        configs: Vec::with_capacity(count as usize),
        aborted: Vec::new(),
    };
    for index in first..first + count {
        let f = sampler.sample(seed, index);
        let x: Vec<W> = match inputs {
            Inputs::Random => sample_inputs(f.inputs as usize, p.w, seed, index),
            Inputs::Zero => Vec::new(),
        };
        let packed = lower::<W>(&f, p).and_then(|(prog, _)| init_config(&prog, &x, p));
        match packed {
            Ok(c) => {
                out.indices.push(index);
                out.programs.push(f);
                out.configs.push(c);
            }
            Err(e) => out.aborted.push(Aborted {
                index,
                reason: e.to_string(),
            }),
        }
    }
    Ok(out)
}

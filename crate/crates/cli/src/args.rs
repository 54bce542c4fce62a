use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use raspvisor::hypervisor::DEFAULT_EPOCH;
use raspvisor::vm::MachineParams;

/// Batch word-RASP machine: compile, sample and run array-language programs.
#[derive(Debug, Parser)]
#[command(name = "raspvisor", version)]
pub struct Cli {
    #[command(flatten)]
    pub machine: MachineArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct MachineArgs {
    /// Word width in bits (1..=64).
    #[arg(long, global = true, default_value_t = 32)]
    pub width: u32,
    /// Memory size in words.
    #[arg(long, global = true, default_value_t = 250)]
    pub mem: usize,
    /// Input buffer capacity.
    #[arg(long, global = true, default_value_t = 10)]
    pub inputs_cap: usize,
    /// Output buffer capacity.
    #[arg(long, global = true, default_value_t = 2)]
    pub outputs_cap: usize,
    /// Scratch region capacity.
    #[arg(long, global = true, default_value_t = 10)]
    pub scratch_cap: usize,
}

impl MachineArgs {
    pub fn params(&self) -> raspvisor::Result<MachineParams> {
        MachineParams::new(self.width, self.mem, self.inputs_cap, self.outputs_cap, self.scratch_cap)
    }
}

#[derive(Debug, Clone, Args)]
pub struct BatchArgs {
    /// Step budget per VM.
    #[arg(long, value_parser = parse_count)]
    pub tau_max: Option<u64>,
    /// Worker threads; 0 uses every available core.
    #[arg(long, env = "RASPVISOR_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Steps per visit.
    #[arg(long, default_value_t = DEFAULT_EPOCH)]
    pub epoch: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputMode {
    Random,
    Zero,
}

impl From<InputMode> for raspvisor::workload::Inputs {
    fn from(m: InputMode) -> Self {
        match m {
            InputMode::Random => Self::Random,
            InputMode::Zero => Self::Zero,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower a source file to a program.
    Compile {
        source: PathBuf,
        /// Output prefix; writes PREFIX.json, PREFIX.bin, PREFIX.layout.json and PREFIX.asm.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one program until it halts or the budget runs out.
    Run {
        /// Program JSON, raw binary (.bin) or array-language source.
        program: PathBuf,
        /// Comma-separated input words.
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, value_parser = parse_count, default_value = "1000000")]
        tau_max: u64,
        /// Print every configuration visited.
        #[arg(long)]
        trace: bool,
    },
    /// Draw uniform programs of one token length.
    Sample {
        #[arg(long)]
        length: usize,
        #[arg(long, value_parser = parse_count, default_value = "10")]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit syntax trees as JSON lines instead of source.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the halting distribution of sampled programs.
    Halting {
        #[arg(long, default_value_t = 100)]
        length: usize,
        #[arg(long, value_parser = parse_count, default_value = "100000")]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Input words for each program: uniform random, or all zero.
        #[arg(long, value_enum, default_value_t = InputMode::Random)]
        inputs: InputMode,
        #[command(flatten)]
        batch: BatchArgs,
        /// Histogram CSV path; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-VM results CSV.
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Search sampled programs for the longest finite runs on zero inputs.
    BbSearch {
        #[arg(long, default_value_t = 120)]
        length: usize,
        #[arg(long, value_parser = parse_count, default_value = "10000")]
        count: u64,
        /// Stop sampling after this many seconds.
        #[arg(long)]
        time_budget: Option<f64>,
        #[arg(long, default_value_t = 3)]
        top: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        batch: BatchArgs,
        /// Also score the bundled fixtures.
        #[arg(long)]
        fixtures: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time batches over a grid of sizes and worker counts.
    Bench {
        #[arg(long, default_value_t = 100)]
        length: usize,
        /// Comma-separated batch sizes.
        #[arg(long, default_value = "10000")]
        count: String,
        /// Comma-separated worker counts; 0 means all cores.
        #[arg(long, default_value = "1,0")]
        workers: String,
        #[arg(long, value_parser = parse_count, default_value = "10000")]
        tau_max: u64,
        #[arg(long, default_value_t = DEFAULT_EPOCH)]
        epoch: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the differential suites at small scale.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Accepts `100000`, `100_000`, `1e5` and `10^5`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    let bad = || format!("not a count: {s:?}");
    let pow = |base: &str, exp: &str| -> Result<u64, String> {
        let b: u64 = base.parse().map_err(|_| bad())?;
        let e: u32 = exp.parse().map_err(|_| bad())?;
        b.checked_mul(10u64.checked_pow(e).ok_or_else(bad)?).ok_or_else(bad)
    };
    if let Some((b, e)) = t.split_once(['e', 'E']) {
        pow(b, e)
    } else if let Some(e) = t.strip_prefix("10^") {
        pow("1", e)
    } else {
        t.parse().map_err(|_| bad())
    }
}

/// Comma-separated list of counts.
pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e5"), Ok(100_000));
        assert_eq!(parse_count("10^6"), Ok(1_000_000));
        assert_eq!(parse_count("8_000"), Ok(8000));
        assert_eq!(parse_count("3E2"), Ok(300));
        assert!(parse_count("x").is_err());
        assert!(parse_count("1e30").is_err());
        assert_eq!(parse_list("1, 4,16"), Ok(vec![1, 4, 16]));
    }
}

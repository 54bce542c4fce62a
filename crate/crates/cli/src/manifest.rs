use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use raspvisor::vm::MachineParams;

use crate::args::InputMode;

/// Everything that determines the data in an output file.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub version: &'static str,
    pub params: MachineParams,
    #[serde(rename = "L")]
    pub length: usize,
    pub d: u64,
    pub tau_max: u64,
    pub seed: u64,
    pub workers: usize,
    pub epoch: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inputs: Option<InputMode>,
}

impl Manifest {
    pub fn new(command: &'static str, params: MachineParams) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            params,
            length: 0,
            d: 0,
            tau_max: 0,
            seed: 0,
            workers: 0,
            epoch: 0,
            inputs: None,
        }
    }

    /// The leading `# {...}` line of every CSV.
    pub fn comment_line(&self) -> String {
        format!("# {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }

    /// A CSV document: manifest comment plus `body`.
    pub fn csv(&self, body: &str) -> String {
        let mut out = self.comment_line();
        let _ = write!(out, "{body}");
        out
    }
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, data: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, data).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

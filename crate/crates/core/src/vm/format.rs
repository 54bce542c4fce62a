//! On-disk forms of programs and configurations.
//!
//! Binary programs are raw little-endian words of `ceil(w / 8)` bytes each,
//! with no header. The JSON form is `{"w": .., "words": [..]}`.

use serde::{Deserialize, Serialize};

use super::{Config, MachineParams, Program};
use crate::error::{Error, Result};
use crate::word::{low_mask, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramJson {
    pub w: u32,
    pub words: Vec<u64>,
}

impl<W: Word> Program<W> {
    pub fn to_json(&self, w: u32) -> ProgramJson {
        ProgramJson {
            w,
            words: self.words.iter().map(|v| v.widen()).collect(),
        }
    }

    pub fn from_json(json: &ProgramJson) -> Result<Self> {
        Self::from_u64s(&json.words, json.w)
    }

    pub fn to_bytes(&self, w: u32) -> Vec<u8> {
        let width = bytes_per_word(w);
        let mut out = Vec::with_capacity(self.words.len() * width);
        for v in &self.words {
            out.extend_from_slice(&v.widen().to_le_bytes()[..width]);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], w: u32) -> Result<Self> {
        if !(1..=64).contains(&w) {
            return Err(Error::Params(format!("word width {w} outside 1..=64")));
        }
        let width = bytes_per_word(w);
        if !bytes.len().is_multiple_of(width) {
            return Err(Error::Format(format!(
                "{} bytes is not a whole number of {width}-byte words",
                bytes.len()
            )));
        }
        let words: Vec<u64> = bytes
            .chunks_exact(width)
            .map(|chunk| {
                let mut buf = [0u8; 8];
                buf[..width].copy_from_slice(chunk);
                u64::from_le_bytes(buf)
            })
            .collect();
        Self::from_u64s(&words, w)
    }
}

pub fn bytes_per_word(w: u32) -> usize {
    w.div_ceil(8) as usize
}

/// JSON debugging snapshot of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub i: u64,
    pub a: u64,
    #[serde(rename = "M")]
    pub mem: Vec<u64>,
    pub u: Vec<u64>,
    pub y: Vec<u64>,
}

impl<W: Word> From<&Config<W>> for ConfigSnapshot {
    fn from(c: &Config<W>) -> Self {
        let conv = |v: &[W]| v.iter().map(|x| x.widen()).collect();
        Self {
            i: c.i.widen(),
            a: c.a.widen(),
            mem: conv(&c.mem),
            u: conv(&c.input),
            y: conv(&c.output),
        }
    }
}

impl ConfigSnapshot {
    pub fn to_config<W: Word>(&self, p: &MachineParams) -> Result<Config<W>> {
        p.validate_for::<W>()?;
        let mask = low_mask(p.w);
        let conv = |v: &[u64]| -> Result<Vec<W>> {
            v.iter()
                .map(|&x| {
                    if x & !mask != 0 {
                        Err(Error::WordOverflow { value: x, width: p.w })
                    } else {
                        Ok(W::truncate(x))
                    }
                })
                .collect()
        };
        let c = Config {
            i: conv(&[self.i])?[0],
            a: conv(&[self.a])?[0],
            mem: conv(&self.mem)?,
            input: conv(&self.u)?,
            output: conv(&self.y)?,
        };
        if !c.is_well_formed(p) {
            return Err(Error::Format("snapshot buffer sizes do not match the machine".into()));
        }
        Ok(c)
    }
}

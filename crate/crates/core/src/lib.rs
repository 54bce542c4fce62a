//! A batch virtual machine for the word RASP.
//!
//! * [`vm`]: the machine, with reference and branchless transitions.
//! * [`lang`]: the heapless array language.
//! * [`lower`]: compilation of that language to RASP programs.
//! * [`oracle`]: a direct evaluator used to check the compiler.
//! * [`sampler`]: exact-uniform program sampling and enumeration by length.
//! * [`hypervisor`]: striped round-robin execution of many machines.
//!
//! Everything that touches machine words is generic over the storage type
//! ([`Word`]); the aliases below fix the common choices.

pub mod error;
pub mod fixtures;
pub mod hypervisor;
pub mod lang;
pub mod lower;
pub mod oracle;
pub mod sampler;
pub mod verify;
pub mod vm;
pub mod word;
pub mod workload;

pub use error::{Error, Result};
pub use word::Word;

/// Configuration stored in 8-bit cells, for `w <= 8`.
pub type Config8 = vm::Config<u8>;
/// Configuration stored in 16-bit cells, for `w <= 16`.
pub type Config16 = vm::Config<u16>;
/// Configuration stored in 32-bit cells, for `w <= 32`.
pub type Config32 = vm::Config<u32>;
/// Configuration stored in 64-bit cells, for any `w`.
pub type Config64 = vm::Config<u64>;

pub type Program32 = vm::Program<u32>;
pub type Program64 = vm::Program<u64>;
pub type BatchResult32 = hypervisor::BatchResult<u32>;
pub type BatchResult64 = hypervisor::BatchResult<u64>;

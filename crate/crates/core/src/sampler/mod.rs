//! Exact-uniform sampling of programs of a fixed token length.
//!
//! A uniform rank in `[0, count)` is drawn and unranked through the count
//! table: at every choice point the alternatives own consecutive rank
//! intervals sized by their number of completions. Randomness is a ChaCha
//! stream keyed by the seed and selected by the VM ordinal, so any program
//! of a batch can be drawn independently of the others.

mod count;
mod enumerate;

pub use count::{count_programs, expr_count, is_reachable, CountTable, ARITIES, DIGITS, GUARDS, MIN_STMT, PLACES};
pub use enumerate::{enumerate_all, ENUMERATION_LIMIT};

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lang::{ArrayRef, Block, Expr, Function, Region, Stmt};
use crate::word::{low_mask, Word};

const PROGRAM_DOMAIN: u64 = 0x7072_6f67_7261_6d00;
const INPUT_DOMAIN: u64 = 0x696e_7075_7473_0000;

/// Counter-based generator for `(seed, index)` within a domain.
fn stream(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

pub(crate) fn guard(idx: u32) -> ArrayRef {
    ArrayRef::new(Region::READABLE[(idx / DIGITS) as usize], (idx % DIGITS) as u8)
}

pub(crate) fn place(idx: u32) -> ArrayRef {
    ArrayRef::new(Region::WRITABLE[(idx / DIGITS) as usize], (idx % DIGITS) as u8)
}

/// The `idx`-th expression of length `k`, in grammar order.
pub(crate) fn expr(k: usize, idx: u64) -> Expr {
    let idx = idx as u32;
    let pairs = GUARDS * GUARDS;
    let with_lit = GUARDS * DIGITS;
    match k {
        9 if idx < pairs => Expr::Add(guard(idx / GUARDS), guard(idx % GUARDS)),
        9 => Expr::Mul(guard((idx - pairs) / GUARDS), guard((idx - pairs) % GUARDS)),
        6 if idx < with_lit => Expr::AddConst(guard(idx / DIGITS), (idx % DIGITS) as u8),
        6 => Expr::MulConst(guard((idx - with_lit) / DIGITS), ((idx - with_lit) % DIGITS) as u8),
        4 => Expr::Ref(guard(idx)),
        1 => Expr::Const(idx as u8),
        _ => unreachable!("no expression has length {k}"),
    }
}

fn small(v: &BigUint) -> u32 {
    v.to_u32().expect("index fits u32")
}

/// Draws programs of one length.
#[derive(Clone, Debug)]
pub struct Sampler {
    len: usize,
    table: CountTable,
    total: BigUint,
}

impl Sampler {
    pub fn new(len: usize) -> Result<Self> {
        let table = CountTable::for_program_len(len);
        let total = table.programs(len);
        if total.is_zero() {
            return Err(Error::EmptyLanguage(len));
        }
        Ok(Self { len, table, total })
    }

    /// Token length of every program drawn.
    pub fn length(&self) -> usize {
        self.len
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    /// The `rank`-th program of this length, `rank < total`.
    pub fn unrank(&self, rank: &BigUint) -> Function {
        assert!(rank < &self.total, "rank out of range");
        let per_header = self.table.block(self.len - Function::FRAME_TOKENS);
        let (header, body_rank) = rank.div_rem(per_header);
        let header = small(&header);
        Function {
            inputs: (header / ARITIES + 1) as u8,
            outputs: (header % ARITIES + 1) as u8,
            body: self.unrank_block(self.len - Function::FRAME_TOKENS, body_rank),
        }
    }

    fn unrank_block(&self, k: usize, mut r: BigUint) -> Block {
        let t = &self.table;
        if &r < t.stmt(k) {
            return Block {
                stmts: vec![self.unrank_stmt(k, r)],
                halts: false,
            };
        }
        r -= t.stmt(k);
        for a in MIN_STMT..k.saturating_sub(1) {
            let rest = t.block(k - 1 - a);
            let weight = t.stmt(a) * rest;
            if r < weight {
                let (head, tail) = r.div_rem(rest);
                let mut block = self.unrank_block(k - 1 - a, tail);
                block.stmts.insert(0, self.unrank_stmt(a, head));
                return block;
            }
            r -= weight;
        }
        debug_assert!(k == 1 && r.is_zero());
        Block::hlt()
    }

    fn unrank_stmt(&self, k: usize, mut r: BigUint) -> Stmt {
        let t = &self.table;
        let exprs = expr_count(k.saturating_sub(5));
        let assigns = BigUint::from(PLACES as u64 * exprs);
        if r < assigns {
            let r = r.to_u64().expect("assignment rank fits u64");
            return Stmt::Assign {
                place: place((r / exprs) as u32),
                expr: expr(k - 5, r % exprs),
            };
        }
        r -= assigns;
        if k >= 9 {
            let mut pairs = BigUint::zero();
            for a in 1..k - 9 {
                pairs += t.block(a) * t.block(k - 9 - a);
            }
            let ifes = &pairs * GUARDS;
            if r < ifes {
                let (g, mut rest) = r.div_rem(&pairs);
                for a in 1..k - 9 {
                    let other = t.block(k - 9 - a);
                    let weight = t.block(a) * other;
                    if rest < weight {
                        let (then, otherwise) = rest.div_rem(other);
                        return Stmt::Ife {
                            guard: guard(small(&g)),
                            then: self.unrank_block(a, then),
                            otherwise: self.unrank_block(k - 9 - a, otherwise),
                        };
                    }
                    rest -= weight;
                }
                unreachable!("ife rank exceeds its weight");
            }
            r -= ifes;
        }
        let body = t.block(k - 7);
        let (g, rest) = r.div_rem(body);
        Stmt::Whl {
            guard: guard(small(&g)),
            body: self.unrank_block(k - 7, rest),
        }
    }

    /// Deterministic uniform draw for VM ordinal `index`.
    pub fn sample(&self, seed: u64, index: u64) -> Function {
        let mut rng = stream(seed, PROGRAM_DOMAIN, index);
        let rank = rng.gen_biguint_below(&self.total);
        self.unrank(&rank)
    }
}

/// One uniform program of `len` tokens for `(seed, index)`.
pub fn sample_program(len: usize, seed: u64, index: u64) -> Result<Function> {
    Ok(Sampler::new(len)?.sample(seed, index))
}

/// `arity` independent uniform `w`-bit words for `(seed, index)`.
pub fn sample_inputs<W: Word>(arity: usize, w: u32, seed: u64, index: u64) -> Vec<W> {
    let mut rng = stream(seed, INPUT_DOMAIN, index);
    let mask = low_mask(w);
    (0..arity).map(|_| W::truncate(rng.gen::<u64>() & mask)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, pretty_print, tokenize};

    #[test]
    fn empty_lengths_are_errors() {
        assert!(matches!(Sampler::new(15), Err(Error::EmptyLanguage(15))));
        assert!(matches!(sample_program(17, 1, 0), Err(Error::EmptyLanguage(17))));
    }

    #[test]
    fn deterministic() {
        let s = Sampler::new(60).unwrap();
        assert_eq!(s.sample(9, 4), s.sample(9, 4));
        assert_ne!(s.sample(9, 4), s.sample(9, 5));
        assert_eq!(sample_inputs::<u32>(3, 32, 1, 2), sample_inputs::<u32>(3, 32, 1, 2));
    }

    #[test]
    fn sampled_programs_have_the_requested_length() {
        for len in [16, 21, 30, 60, 100, 120] {
            let s = Sampler::new(len).unwrap();
            for index in 0..50 {
                let f = s.sample(3, index);
                assert_eq!(f.token_len(), len);
                let text = pretty_print(&f);
                let toks = tokenize(&text).unwrap();
                assert_eq!(toks.len(), len);
                assert_eq!(parse(&toks).unwrap(), f);
            }
        }
    }

    #[test]
    fn extreme_ranks() {
        let s = Sampler::new(16).unwrap();
        let first = s.unrank(&BigUint::zero());
        assert_eq!((first.inputs, first.outputs), (1, 1));
        let last = s.unrank(&BigUint::from(80u32));
        assert_eq!((last.inputs, last.outputs), (9, 9));
    }

    #[test]
    fn inputs_fit_width() {
        for w in [1, 5, 8, 32] {
            for v in sample_inputs::<u32>(9, w, 7, 1) {
                assert!((v as u64) < (1u64 << w));
            }
        }
        assert_eq!(sample_inputs::<u64>(0, 32, 0, 0), Vec::<u64>::new());
    }
}

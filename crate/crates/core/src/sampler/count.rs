//! Exact derivation counts by token length.
//!
//! Only `B`, `S` and `E` need tables; `G`, `P`, `Z` and `N` have a single
//! length each. Every alternative of every production starts with a token
//! its siblings cannot start with, so derivations and token strings are in
//! bijection and counting one counts the other.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::lang::Function;

/// Guard choices `G`: three regions times ten digits, four tokens each.
pub const GUARDS: u32 = 30;
/// Assignment targets `P`: two regions times ten digits.
pub const PLACES: u32 = 20;
/// Digit literals `Z`.
pub const DIGITS: u32 = 10;
/// Arity literals `N`.
pub const ARITIES: u32 = 9;
/// Shortest statement: `P = Z`.
pub const MIN_STMT: usize = 6;

/// Counts of `E` by length: `Z` (1), `G` (4), `G+Z | G*Z` (6), `G+G | G*G` (9).
pub fn expr_count(k: usize) -> u64 {
    match k {
        1 => DIGITS as u64,
        4 => GUARDS as u64,
        6 => 2 * (GUARDS * DIGITS) as u64,
        9 => 2 * (GUARDS * GUARDS) as u64,
        _ => 0,
    }
}

/// Memoized counts for blocks and statements up to a length bound.
#[derive(Clone, Debug)]
pub struct CountTable {
    block: Vec<BigUint>,
    stmt: Vec<BigUint>,
}

impl CountTable {
    /// Counts for every body length up to `max_body`.
    pub fn new(max_body: usize) -> Self {
        let mut block = vec![BigUint::zero(); max_body + 1];
        let mut stmt = vec![BigUint::zero(); max_body + 1];
        for k in 0..=max_body {
            // S ::= P = E | ife G { B } { B } | whl G { B }
            let mut s = BigUint::from(PLACES as u64 * expr_count(k.saturating_sub(5)));
            if k >= 9 {
                let mut pairs = BigUint::zero();
                for a in 1..k - 9 {
                    pairs += &block[a] * &block[k - 9 - a];
                }
                s += pairs * GUARDS;
            }
            if k >= 8 {
                s += &block[k - 7] * GUARDS;
            }
            stmt[k] = s;

            // B ::= S | S ; B | hlt
            let mut b = stmt[k].clone();
            for a in MIN_STMT..k.saturating_sub(1) {
                b += &stmt[a] * &block[k - 1 - a];
            }
            if k == 1 {
                b += 1u32;
            }
            block[k] = b;
        }
        Self { block, stmt }
    }

    /// Table large enough for programs of `len` tokens.
    pub fn for_program_len(len: usize) -> Self {
        Self::new(len.saturating_sub(Function::FRAME_TOKENS))
    }

    pub fn max_body(&self) -> usize {
        self.block.len() - 1
    }

    pub fn block(&self, k: usize) -> &BigUint {
        &self.block[k]
    }

    pub fn stmt(&self, k: usize) -> &BigUint {
        &self.stmt[k]
    }

    /// Programs of exactly `len` tokens.
    pub fn programs(&self, len: usize) -> BigUint {
        if len <= Function::FRAME_TOKENS {
            return BigUint::zero();
        }
        let body = len - Function::FRAME_TOKENS;
        assert!(body <= self.max_body(), "count table too small for length {len}");
        &self.block[body] * (ARITIES * ARITIES)
    }
}

/// Number of distinct programs of exactly `len` tokens.
pub fn count_programs(len: usize) -> BigUint {
    CountTable::for_program_len(len).programs(len)
}

/// Whether some program has exactly `len` tokens.
pub fn is_reachable(len: usize) -> bool {
    !count_programs(len).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lengths() {
        for len in 0..=15 {
            assert_eq!(count_programs(len), BigUint::zero(), "{len}");
        }
        assert_eq!(count_programs(16), BigUint::from(81u32));
        for len in 17..=20 {
            assert_eq!(count_programs(len), BigUint::zero(), "{len}");
        }
        // P = Z
        assert_eq!(count_programs(21), BigUint::from(81u32 * 200));
    }

    #[test]
    fn hundred_tokens_overflow_u64() {
        let c = count_programs(100);
        assert!(c.bits() > 64, "{} bits", c.bits());
        assert_eq!(c.to_string(), "71657096280434795096364482640000000");
    }
}

//! Storage types for machine words.
//!
//! A machine of width `w` keeps every word in a host integer with at least
//! `w` bits. Arithmetic is done with the host type's wrapping operations and
//! then masked down to `w` bits, which makes one code path serve every width
//! from 1 to 64.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{AsPrimitive, PrimInt, Unsigned, WrappingAdd, WrappingMul, WrappingSub};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Unsigned host integer able to hold a machine word.
pub trait Word:
    PrimInt
    + Unsigned
    + WrappingAdd
    + WrappingSub
    + WrappingMul
    + AsPrimitive<u64>
    + Default
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Width of the host type in bits.
    const BITS: u32;

    /// Truncating conversion from `u64`.
    fn truncate(v: u64) -> Self;

    #[inline(always)]
    fn widen(self) -> u64 {
        self.as_()
    }

    /// `1` if `b`, else `0`.
    #[inline(always)]
    fn from_bool(b: bool) -> Self {
        if b {
            Self::one()
        } else {
            Self::zero()
        }
    }

    /// All ones if `b`, else all zeros.
    #[inline(always)]
    fn splat(b: bool) -> Self {
        Self::zero().wrapping_sub(&Self::from_bool(b))
    }
}

macro_rules! impl_word {
    ($($t:ty),*) => {
        $(
            impl Word for $t {
                const BITS: u32 = <$t>::BITS;

                #[inline(always)]
                fn truncate(v: u64) -> Self {
                    v as $t
                }
            }
        )*
    };
}

impl_word!(u8, u16, u32, u64);

/// Mask selecting the low `w` bits, `1 <= w <= 64`.
#[inline]
pub fn low_mask(w: u32) -> u64 {
    if w >= 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splat_and_mask() {
        assert_eq!(u8::splat(true), 0xff);
        assert_eq!(u8::splat(false), 0);
        assert_eq!(u32::splat(true), u32::MAX);
        assert_eq!(low_mask(1), 1);
        assert_eq!(low_mask(8), 0xff);
        assert_eq!(low_mask(64), u64::MAX);
        assert_eq!(<u16 as Word>::truncate(0x1_2345), 0x2345);
    }
}

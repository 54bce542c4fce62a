//! Indicator-form transition: `Phi(c) = XOR over cases of eta_case(c) * Phi_case(c)`.
//!
//! Every branch update is computed, each indicator is widened to an all-ones
//! or all-zeros mask, and the successor is the XOR of the masked updates.
//! Only `STO` and `RD` touch memory and both touch the cell `M[j mod n]`, so
//! the memory update reduces to one selected write at that address. The
//! output buffer is handled the same way at `y[min(y_0 + 1, s)]`.

use super::{fetch, Case, Config, Indicators, MachineParams, StepOutcome};
use crate::word::Word;

/// Every word a transition may change, already selected.
#[derive(Clone, Copy, Debug)]
struct Delta<W> {
    i: W,
    a: W,
    mem_addr: usize,
    mem_val: W,
    cursor: W,
    out_idx: usize,
    out_val: W,
    out_count: W,
}

#[inline(always)]
fn indicators<W: Word>(c: &Config<W>, o: W) -> [bool; 9] {
    let ell = (c.input.len() - 1) as u64;
    let o = o.widen();
    let bnz = o == 5;
    let nz = c.a != W::zero();
    let lod = o == 1;
    let add = o == 2;
    let mul = o == 3;
    let sto = o == 4;
    let taken = bnz & nz;
    let not_taken = bnz & !nz;
    let rd = (o == 6) & (c.input[0].widen() < ell);
    let pri = o == 7;
    let otherwise = !(lod | add | mul | sto | bnz | rd | pri);
    [lod, add, mul, sto, taken, not_taken, rd, pri, otherwise]
}

#[inline(always)]
fn delta<W: Word>(c: &Config<W>, p: &MachineParams) -> Delta<W> {
    let mask = p.mask::<W>();
    let n = c.mem.len() as u64;
    let ell = (c.input.len() - 1) as u64;
    let s = (c.output.len() - 1) as u64;

    let (o, j) = fetch(c, p);
    let eta = indicators(c, o);
    let m = |case: Case| W::splat(eta[case as usize]);

    let mem_addr = (j.widen() % n) as usize;
    let mj = c.mem[mem_addr];

    let advance = m(Case::Lod)
        | m(Case::Add)
        | m(Case::Mul)
        | m(Case::Sto)
        | m(Case::BnzNotTaken)
        | m(Case::Rd)
        | m(Case::Pri);
    let i2 = c.i.wrapping_add(&W::truncate(2)) & mask;
    let i = (advance & i2) ^ (m(Case::BnzTaken) & j) ^ (m(Case::Otherwise) & c.i);

    let keep_a = !(m(Case::Lod) | m(Case::Add) | m(Case::Mul));
    let a = (m(Case::Lod) & j)
        ^ (m(Case::Add) & (c.a.wrapping_add(&mj) & mask))
        ^ (m(Case::Mul) & (c.a.wrapping_mul(&mj) & mask))
        ^ (keep_a & c.a);

    let cursor_next = c.input[0].widen().saturating_add(1).min(ell);
    let u_bullet = c.input[cursor_next as usize];
    let write = m(Case::Sto) | m(Case::Rd);
    let mem_val = (m(Case::Sto) & c.a) ^ (m(Case::Rd) & u_bullet) ^ (!write & mj);
    let cursor = (m(Case::Rd) & W::truncate(cursor_next)) ^ (!m(Case::Rd) & c.input[0]);

    let count = c.output[0].widen();
    let appends = W::splat(eta[Case::Pri as usize] & (count < s));
    let out_idx = count.saturating_add(1).min(s) as usize;
    let out_val = (appends & mj) ^ (!appends & c.output[out_idx]);
    let out_count =
        (appends & (c.output[0].wrapping_add(&W::one()) & mask)) ^ (!appends & c.output[0]);

    Delta {
        i,
        a,
        mem_addr,
        mem_val,
        cursor,
        out_idx,
        out_val,
        out_count,
    }
}

#[inline(always)]
fn unchanged<W: Word>(c: &Config<W>, d: &Delta<W>) -> bool {
    (d.i == c.i)
        & (d.a == c.a)
        & (d.mem_val == c.mem[d.mem_addr])
        & (d.cursor == c.input[0])
        & (d.out_val == c.output[d.out_idx])
        & (d.out_count == c.output[0])
}

/// The indicator vector `eta(c)`, indexed by [`Case`].
pub fn indicator_partition<W: Word>(c: &Config<W>, p: &MachineParams) -> Indicators {
    let (o, _) = fetch(c, p);
    Indicators(indicators(c, o))
}

/// Whether `c` is a halting configuration.
#[inline]
pub fn is_fixed_point<W: Word>(c: &Config<W>, p: &MachineParams) -> bool {
    unchanged(c, &delta(c, p))
}

/// Applies one transition in place. Returns `true` if `c` was already a
/// fixed point, in which case it is left as is.
#[inline]
pub fn advance<W: Word>(c: &mut Config<W>, p: &MachineParams) -> bool {
    let d = delta(c, p);
    let fixed = unchanged(c, &d);
    c.i = d.i;
    c.a = d.a;
    c.mem[d.mem_addr] = d.mem_val;
    c.input[0] = d.cursor;
    c.output[d.out_idx] = d.out_val;
    c.output[0] = d.out_count;
    fixed
}

/// One transition in indicator form; equal to [`super::step_reference`].
pub fn step_branchless<W: Word>(c: &Config<W>, p: &MachineParams) -> StepOutcome<W> {
    let mut next = c.clone();
    let fixed_point = advance(&mut next, p);
    StepOutcome { next, fixed_point }
}

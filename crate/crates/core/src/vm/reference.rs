use super::{fetch, Config, MachineParams, Opcode, StepOutcome};
use crate::word::Word;

/// One transition by direct case analysis over the nine guarded cases.
pub fn step_reference<W: Word>(c: &Config<W>, p: &MachineParams) -> StepOutcome<W> {
    let mask = p.mask::<W>();
    let n = c.mem.len() as u64;
    let ell = (c.input.len() - 1) as u64;
    let s = (c.output.len() - 1) as u64;

    let (o, j) = fetch(c, p);
    let jn = (j.widen() % n) as usize;
    let i2 = c.i.wrapping_add(&W::truncate(2)) & mask;
    let mut next = c.clone();

    match Opcode::decode(o.widen()) {
        Some(Opcode::Lod) => {
            next.i = i2;
            next.a = j;
        }
        Some(Opcode::Add) => {
            next.i = i2;
            next.a = c.a.wrapping_add(&c.mem[jn]) & mask;
        }
        Some(Opcode::Mul) => {
            next.i = i2;
            next.a = c.a.wrapping_mul(&c.mem[jn]) & mask;
        }
        Some(Opcode::Sto) => {
            next.i = i2;
            // M_j <- a: delta_jk * a + (1 - delta_jk) * M_k over all k
            for (k, cell) in next.mem.iter_mut().enumerate() {
                if k == jn {
                    *cell = c.a;
                }
            }
        }
        Some(Opcode::Bnz) if c.a != W::zero() => {
            next.i = j;
        }
        Some(Opcode::Bnz) => {
            next.i = i2;
        }
        Some(Opcode::Rd) if c.input[0].widen() < ell => {
            let cursor = (c.input[0].widen() + 1).min(ell);
            next.i = i2;
            next.mem[jn] = c.input[cursor as usize];
            next.input[0] = W::truncate(cursor);
        }
        Some(Opcode::Pri) => {
            next.i = i2;
            let count = c.output[0].widen();
            if count < s {
                next.output[(count + 1) as usize] = c.mem[jn];
                next.output[0] = W::truncate(count + 1);
            }
        }
        // invalid opcode, or RD with an exhausted input
        _ => {}
    }

    let fixed_point = next == *c;
    StepOutcome { next, fixed_point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vm::{init_config, Program};

    fn params(n: usize, ell: usize, s: usize) -> MachineParams {
        MachineParams::new(8, n, ell, s, 1).unwrap()
    }

    fn config(p: &MachineParams, mem: &[u8]) -> Config<u8> {
        let mut c = Config::zeroed(p);
        c.mem[..mem.len()].copy_from_slice(mem);
        c
    }

    #[test]
    fn lod_loads_literal() {
        let p = params(8, 2, 2);
        let c = config(&p, &[1, 5]);
        let out = step_reference(&c, &p);
        assert!(!out.fixed_point);
        assert_eq!(out.next.i, 2);
        assert_eq!(out.next.a, 5);
        assert_eq!(out.next.mem, c.mem);
    }

    #[test]
    fn add_and_mul_wrap() {
        let p = params(8, 2, 2);
        let mut c = config(&p, &[2, 3, 0, 10]);
        c.a = 250;
        assert_eq!(step_reference(&c, &p).next.a, 4);
        c.mem[0] = 3;
        c.a = 128;
        c.mem[3] = 3;
        assert_eq!(step_reference(&c, &p).next.a, 128);
    }

    #[test]
    fn sto_writes_one_cell() {
        let p = params(8, 2, 2);
        let mut c = config(&p, &[4, 14]);
        c.a = 77;
        let next = step_reference(&c, &p).next;
        assert_eq!(next.mem[6], 77);
        assert_eq!(next.mem.iter().filter(|&&v| v != 0).count(), 3);
    }

    #[test]
    fn bnz_to_self_is_fixed() {
        let p = params(8, 2, 2);
        let mut c = config(&p, &[5, 0]);
        c.a = 1;
        let out = step_reference(&c, &p);
        assert!(out.fixed_point);
        assert_eq!(out.next, c);

        c.a = 0;
        let out = step_reference(&c, &p);
        assert_eq!(out.next.i, 2);
    }

    #[test]
    fn bnz_target_is_not_reduced() {
        let p = params(8, 2, 2);
        let mut c = config(&p, &[5, 200]);
        c.a = 3;
        assert_eq!(step_reference(&c, &p).next.i, 200);
    }

    #[test]
    fn rd_respects_cursor() {
        let p = params(8, 2, 2);
        let mut c = config(&p, &[6, 5]);
        c.input = vec![2, 7, 9];
        assert!(step_reference(&c, &p).fixed_point);

        c.input = vec![1, 7, 9];
        let next = step_reference(&c, &p).next;
        assert_eq!(next.mem[5], 9);
        assert_eq!(next.input, vec![2, 7, 9]);
    }

    #[test]
    fn pri_appends_until_full() {
        let p = params(8, 2, 2);
        let mut c = config(&p, &[7, 4, 0, 0, 42]);
        let next = step_reference(&c, &p).next;
        assert_eq!(next.output, vec![1, 42, 0]);
        assert_eq!(next.i, 2);

        c.output = vec![2, 1, 2];
        let next = step_reference(&c, &p).next;
        assert_eq!(next.output, vec![2, 1, 2]);
        assert_eq!(next.i, 2);
    }

    #[test]
    fn invalid_opcode_halts() {
        let p = params(8, 2, 2);
        let c = config(&p, &[9, 1]);
        assert!(step_reference(&c, &p).fixed_point);
        let halt = init_config(&Program::<u8>::new(vec![0, 0]).unwrap(), &[], &p).unwrap();
        assert!(step_reference(&halt, &p).fixed_point);
    }

    #[test]
    fn one_bit_words_can_fix_on_lod() {
        // with w = 1 the counter does not move (i + 2 = i), so LOD j with a = j is a fixed point
        let p = MachineParams::new(1, 4, 1, 1, 1).unwrap();
        let mut c = Config::<u8>::zeroed(&p);
        c.mem[..2].copy_from_slice(&[1, 1]);
        c.a = 1;
        assert!(step_reference(&c, &p).fixed_point);
        c.a = 0;
        assert!(!step_reference(&c, &p).fixed_point);
    }
}

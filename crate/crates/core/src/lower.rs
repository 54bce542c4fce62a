//! Compilation of the array language onto the word RASP.
//!
//! Memory layout, with `m` instruction pairs:
//!
//! ```text
//! [0, 2m)                 program
//! [2m, 2m + 5)            reserved, nu = 2m
//! [ipt_base, + ell)       ipt
//! [opt_base, + opt_cap)   opt, opt_cap = max(s, N_out)
//! [scr_base, + mu)        scr
//! ```
//!
//! Emission runs in two passes. The first produces instructions whose
//! operands may still be labels or array cells; its length does not depend
//! on any operand value, so `m` is known once it finishes. The second pass
//! fixes the layout and resolves every operand to a word.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{ArrayRef, Block, Expr, Function, Region, Stmt};
use crate::vm::{MachineParams, Opcode, Program};
use crate::word::{low_mask, Word};

/// Words between the program and the ipt region.
pub const RESERVED_WORDS: usize = 5;

/// Resolved addresses of the temporary and the three arrays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayoutInfo {
    /// Instruction pairs.
    pub m: usize,
    /// The expression temporary.
    pub nu: usize,
    pub ipt_base: usize,
    pub opt_base: usize,
    pub scr_base: usize,
    /// Declared lengths, used for index wrapping.
    pub ipt_len: usize,
    pub opt_len: usize,
    pub scr_len: usize,
    /// Words reserved for opt.
    pub opt_cap: usize,
}

impl LayoutInfo {
    /// Words used by program, reserved block and all regions.
    pub fn extent(&self) -> usize {
        self.scr_base + self.scr_len
    }
}

/// Unresolved operand of a first-pass instruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    Literal(u64),
    /// Index into the label table.
    Label(usize),
    Cell(ArrayRef),
    /// The reserved temporary.
    Temp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabeledInstr {
    /// Raw opcode word; `0` for the halt pair.
    pub opcode: u64,
    pub operand: Operand,
}

/// Output of the first pass.
#[derive(Clone, Debug, Default)]
pub struct LabeledCode {
    pub instrs: Vec<LabeledInstr>,
    /// Instruction index of each label.
    pub labels: Vec<usize>,
}

struct Emitter<'a> {
    f: &'a Function,
    code: LabeledCode,
    inputs: usize,
}

impl Emitter<'_> {
    fn emit(&mut self, op: Opcode, operand: Operand) {
        self.code.instrs.push(LabeledInstr {
            opcode: op as u64,
            operand,
        });
    }

    fn new_label(&mut self) -> usize {
        self.code.labels.push(usize::MAX);
        self.code.labels.len() - 1
    }

    fn place(&mut self, label: usize) {
        self.code.labels[label] = self.code.instrs.len();
    }

    fn jump(&mut self, label: usize) {
        self.emit(Opcode::Lod, Operand::Literal(1));
        self.emit(Opcode::Bnz, Operand::Label(label));
    }

    fn halt_sequence(&mut self) {
        for k in 0..self.f.outputs {
            self.emit(Opcode::Pri, Operand::Cell(ArrayRef::new(Region::Opt, k)));
        }
        self.code.instrs.push(LabeledInstr {
            opcode: 0,
            operand: Operand::Literal(0),
        });
    }

    fn get(&mut self, r: ArrayRef) {
        self.emit(Opcode::Lod, Operand::Literal(0));
        self.emit(Opcode::Add, Operand::Cell(r));
    }

    fn binary(&mut self, lhs: ArrayRef, rhs: Option<ArrayRef>, lit: u8, op: Opcode) {
        self.get(lhs);
        self.emit(Opcode::Sto, Operand::Temp);
        match rhs {
            Some(r) => self.get(r),
            None => self.emit(Opcode::Lod, Operand::Literal(lit.into())),
        }
        self.emit(op, Operand::Temp);
    }

    fn expr(&mut self, e: &Expr) {
        match *e {
            Expr::Add(l, r) => self.binary(l, Some(r), 0, Opcode::Add),
            Expr::Mul(l, r) => self.binary(l, Some(r), 0, Opcode::Mul),
            Expr::AddConst(l, z) => self.binary(l, None, z, Opcode::Add),
            Expr::MulConst(l, z) => self.binary(l, None, z, Opcode::Mul),
            Expr::Ref(r) => self.get(r),
            Expr::Const(z) => self.emit(Opcode::Lod, Operand::Literal(z.into())),
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::Assign { place, expr } => {
                self.expr(expr);
                self.emit(Opcode::Sto, Operand::Cell(*place));
            }
            Stmt::Ife {
                guard,
                then,
                otherwise,
            } => {
                let taken = self.new_label();
                let end = self.new_label();
                self.get(*guard);
                self.emit(Opcode::Bnz, Operand::Label(taken));
                self.block(otherwise);
                self.jump(end);
                self.place(taken);
                self.block(then);
                self.place(end);
            }
            Stmt::Whl { guard, body } => {
                let head = self.new_label();
                let enter = self.new_label();
                let end = self.new_label();
                self.place(head);
                self.get(*guard);
                self.emit(Opcode::Bnz, Operand::Label(enter));
                self.jump(end);
                self.place(enter);
                self.block(body);
                self.jump(head);
                self.place(end);
            }
        }
    }

    fn block(&mut self, b: &Block) {
        for s in &b.stmts {
            self.stmt(s);
        }
        if b.halts {
            self.halt_sequence();
        }
    }

    fn function(mut self) -> LabeledCode {
        for k in 0..self.inputs {
            self.emit(Opcode::Rd, Operand::Cell(ArrayRef::new(Region::Ipt, k as u8)));
        }
        let f = self.f;
        self.block(&f.body);
        self.halt_sequence();
        self.code
    }
}

/// First pass: instructions with symbolic operands.
pub fn emit_labeled(f: &Function) -> LabeledCode {
    Emitter {
        f,
        code: LabeledCode::default(),
        inputs: f.inputs as usize,
    }
    .function()
}

/// Computes the layout for a program of `m` pairs.
pub fn layout_for(f: &Function, m: usize, p: &MachineParams) -> Result<LayoutInfo> {
    let inputs = f.inputs as usize;
    if inputs > p.ell {
        return Err(Error::Capacity {
            what: "ipt region",
            needed: inputs,
            available: p.ell,
        });
    }
    let opt_cap = p.s.max(f.outputs as usize);
    let nu = 2 * m;
    let ipt_base = nu + RESERVED_WORDS;
    let opt_base = ipt_base + p.ell;
    let scr_base = opt_base + opt_cap;
    let layout = LayoutInfo {
        m,
        nu,
        ipt_base,
        opt_base,
        scr_base,
        ipt_len: inputs,
        opt_len: f.outputs as usize,
        scr_len: p.mu,
        opt_cap,
    };
    if layout.extent() > p.n {
        return Err(Error::Capacity {
            what: "program and data regions",
            needed: layout.extent(),
            available: p.n,
        });
    }
    Ok(layout)
}

/// Absolute address of `region[index]`, wrapping the index by the declared length.
pub fn addr_of(r: ArrayRef, layout: &LayoutInfo) -> usize {
    let (base, len) = match r.region {
        Region::Ipt => (layout.ipt_base, layout.ipt_len),
        Region::Opt => (layout.opt_base, layout.opt_len),
        Region::Scr => (layout.scr_base, layout.scr_len),
    };
    base + r.index as usize % len
}

/// Compiles a program for machine `p`.
pub fn lower<W: Word>(f: &Function, p: &MachineParams) -> Result<(Program<W>, LayoutInfo)> {
    p.validate_for::<W>()?;
    let code = emit_labeled(f);
    let layout = layout_for(f, code.instrs.len(), p)?;
    let mask = low_mask(p.w);
    let mut words = Vec::with_capacity(2 * layout.m);
    for ins in &code.instrs {
        let operand = match ins.operand {
            Operand::Literal(v) => v,
            Operand::Label(l) => 2 * code.labels[l] as u64,
            Operand::Cell(r) => addr_of(r, &layout) as u64,
            Operand::Temp => layout.nu as u64,
        };
        for v in [ins.opcode, operand] {
            if v & !mask != 0 {
                return Err(Error::WordOverflow { value: v, width: p.w });
            }
            words.push(W::truncate(v));
        }
    }
    Ok((Program { words }, layout))
}

fn region_of(addr: u64, layout: &LayoutInfo) -> Option<String> {
    let addr = addr as usize;
    let within = |base: usize, len: usize| (base..base + len).contains(&addr).then(|| addr - base);
    if addr == layout.nu {
        return Some("tmp".into());
    }
    if let Some(k) = within(layout.ipt_base, layout.ipt_len) {
        return Some(format!("ipt[{k}]"));
    }
    if let Some(k) = within(layout.opt_base, layout.opt_cap) {
        return Some(format!("opt[{k}]"));
    }
    if let Some(k) = within(layout.scr_base, layout.scr_len) {
        return Some(format!("scr[{k}]"));
    }
    None
}

/// One line per instruction pair.
pub fn disassemble<W: Word>(program: &Program<W>, layout: Option<&LayoutInfo>) -> String {
    let mut out = String::new();
    for pair in program.words.chunks(2) {
        let o = pair[0].widen();
        let j = pair.get(1).map_or(0, |v| v.widen());
        match Opcode::decode(o) {
            Some(op) => {
                let _ = write!(out, "{} {j}", op.mnemonic());
                let note = match (op, layout) {
                    (Opcode::Lod, _) | (_, None) => None,
                    (Opcode::Bnz, Some(_)) => Some(format!("-> #{}", j / 2)),
                    (_, Some(l)) => region_of(j, l),
                };
                if let Some(note) = note {
                    let _ = write!(out, "  ; {note}");
                }
            }
            None if o == 0 && j == 0 => out.push_str("HLT"),
            None => {
                let _ = write!(out, "DAT {o} {j}");
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_source;

    const MINIMAL: &str = "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { hlt }";

    fn words(f: &Function, p: &MachineParams) -> (Vec<u32>, LayoutInfo) {
        let (prog, layout) = lower::<u32>(f, p).unwrap();
        (prog.words, layout)
    }

    #[test]
    fn minimal_program() {
        let p = MachineParams::default();
        let f = parse_source(MINIMAL).unwrap();
        let (w, l) = words(&f, &p);
        assert_eq!(l.m, 5);
        assert_eq!(l.nu, 10);
        assert_eq!(l.ipt_base, 15);
        assert_eq!(l.opt_base, 25);
        assert_eq!(l.scr_base, 27);
        assert_eq!(w, vec![6, 15, 7, 25, 0, 0, 7, 25, 0, 0]);
    }

    #[test]
    fn assignment_sequence() {
        let p = MachineParams::default();
        let f = parse_source("fun f0 ( ipt : W ^ 2 ) -> W ^ 1 { opt[0] = ipt[1] + 3 }").unwrap();
        let (w, l) = words(&f, &p);
        // RD, RD, 6 body pairs, PRI, HLT
        assert_eq!(l.m, 10);
        let body: Vec<u32> = w[4..16].to_vec();
        let (nu, ipt, opt) = (l.nu as u32, l.ipt_base as u32, l.opt_base as u32);
        assert_eq!(body, vec![1, 0, 2, ipt + 1, 4, nu, 1, 3, 2, nu, 4, opt]);
    }

    #[test]
    fn default_layout_for_twenty_pairs() {
        let p = MachineParams::default();
        let f = parse_source(MINIMAL).unwrap();
        let l = layout_for(&f, 20, &p).unwrap();
        assert_eq!((l.nu, l.ipt_base, l.opt_base, l.scr_base), (40, 45, 55, 57));
    }

    #[test]
    fn address_wrapping() {
        let p = MachineParams::default();
        let f = parse_source("fun f0 ( ipt : W ^ 2 ) -> W ^ 1 { hlt }").unwrap();
        let l = layout_for(&f, 20, &p).unwrap();
        assert_eq!(addr_of(ArrayRef::new(Region::Opt, 0), &l), l.opt_base);
        assert_eq!(addr_of(ArrayRef::new(Region::Opt, 7), &l), l.opt_base);
        assert_eq!(addr_of(ArrayRef::new(Region::Ipt, 5), &l), l.ipt_base + 1);
        assert_eq!(addr_of(ArrayRef::new(Region::Scr, 9), &l), l.scr_base + 9);
    }

    #[test]
    fn wide_outputs_get_their_own_cells() {
        let p = MachineParams::default();
        let f = parse_source("fun f0 ( ipt : W ^ 1 ) -> W ^ 9 { hlt }").unwrap();
        let l = layout_for(&f, 20, &p).unwrap();
        assert_eq!(l.opt_cap, 9);
        assert_eq!(l.scr_base, l.opt_base + 9);
        assert!(addr_of(ArrayRef::new(Region::Opt, 8), &l) < l.scr_base);
    }

    #[test]
    fn if_and_while_labels() {
        let p = MachineParams::default();
        let f = parse_source(
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { ife ipt[0] { opt[0] = 1 } { opt[0] = 2 } ; whl opt[0] { opt[0] = 0 } }",
        )
        .unwrap();
        let code = emit_labeled(&f);
        // 0 RD | 1 LOD 0, 2 ADD g, 3 BNZ t | 4 LOD 2, 5 STO | 6 LOD 1, 7 BNZ e | t=8: LOD 1, STO | e=10
        // h=10: LOD 0, ADD g, BNZ b, LOD 1, BNZ e | b=15: LOD 0, STO, LOD 1, 18 BNZ h | e=19: PRI, HLT
        assert_eq!(code.labels, vec![8, 10, 10, 15, 19]);
        let (w, l) = words(&f, &p);
        assert_eq!(l.m, 21);
        assert_eq!(&w[6..8], &[5, 16]);
        assert_eq!(&w[36..38], &[5, 20]);
    }

    #[test]
    fn capacity_errors() {
        let tight = MachineParams::new(32, 30, 10, 2, 10).unwrap();
        let f = parse_source(MINIMAL).unwrap();
        assert!(matches!(lower::<u32>(&f, &tight), Err(Error::Capacity { .. })));
        let few_inputs = MachineParams::new(32, 250, 2, 2, 10).unwrap();
        let f = parse_source("fun f0 ( ipt : W ^ 3 ) -> W ^ 1 { hlt }").unwrap();
        assert!(matches!(lower::<u32>(&f, &few_inputs), Err(Error::Capacity { .. })));
        let narrow = MachineParams::new(4, 250, 10, 2, 10).unwrap();
        assert!(matches!(
            lower::<u32>(&parse_source(MINIMAL).unwrap(), &narrow),
            Err(Error::WordOverflow { .. })
        ));
    }

    #[test]
    fn disassembly() {
        let p = Program::<u32>::new(vec![1, 5]).unwrap();
        assert_eq!(disassemble(&p, None), "LOD 5\n");
        let p = Program::<u32>::new(vec![0, 0]).unwrap();
        assert_eq!(disassemble(&p, None), "HLT\n");

        let f = parse_source(MINIMAL).unwrap();
        let (prog, layout) = lower::<u32>(&f, &MachineParams::default()).unwrap();
        let text = disassemble(&prog, Some(&layout));
        assert_eq!(
            text,
            "RD 15  ; ipt[0]\nPRI 25  ; opt[0]\nHLT\nPRI 25  ; opt[0]\nHLT\n"
        );
    }
}

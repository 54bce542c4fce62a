//! Direct evaluator for the array language.
//!
//! Works on the syntax tree with separate arrays and never touches the VM,
//! so it serves as an independent check on the compile-then-run path.

use crate::lang::{ArrayRef, Block, Expr, Function, Region, Stmt};
use crate::vm::MachineParams;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleStatus {
    Halted,
    FuelExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult<W> {
    pub status: OracleStatus,
    pub opt: Vec<W>,
    /// Statements executed, counting each guard test.
    pub dsl_steps: u64,
}

#[derive(Clone, Debug)]
struct State<W> {
    ipt: Vec<W>,
    opt: Vec<W>,
    scr: Vec<W>,
    fuel: u64,
    steps: u64,
    mask: W,
}

enum Flow {
    Next,
    Halt,
    OutOfFuel,
}

impl<W: Word> State<W> {
    fn slot(&self, r: ArrayRef) -> (Region, usize) {
        let len = match r.region {
            Region::Ipt => self.ipt.len(),
            Region::Opt => self.opt.len(),
            Region::Scr => self.scr.len(),
        };
        (r.region, r.index as usize % len)
    }

    fn read(&self, r: ArrayRef) -> W {
        match self.slot(r) {
            (Region::Ipt, k) => self.ipt[k],
            (Region::Opt, k) => self.opt[k],
            (Region::Scr, k) => self.scr[k],
        }
    }

    fn write(&mut self, r: ArrayRef, v: W) {
        match self.slot(r) {
            (Region::Ipt, _) => unreachable!("ipt is not assignable"),
            (Region::Opt, k) => self.opt[k] = v,
            (Region::Scr, k) => self.scr[k] = v,
        }
    }

    fn charge(&mut self) -> bool {
        if self.fuel == 0 {
            return false;
        }
        self.fuel -= 1;
        self.steps += 1;
        true
    }

    fn eval(&self, e: &Expr) -> W {
        let lit = |z: u8| W::truncate(z.into());
        let v = match *e {
            Expr::Add(l, r) => self.read(l).wrapping_add(&self.read(r)),
            Expr::Mul(l, r) => self.read(l).wrapping_mul(&self.read(r)),
            Expr::AddConst(l, z) => self.read(l).wrapping_add(&lit(z)),
            Expr::MulConst(l, z) => self.read(l).wrapping_mul(&lit(z)),
            Expr::Ref(r) => self.read(r),
            Expr::Const(z) => lit(z),
        };
        v & self.mask
    }

    fn block(&mut self, b: &Block) -> Flow {
        for s in &b.stmts {
            match self.stmt(s) {
                Flow::Next => {}
                other => return other,
            }
        }
        if b.halts {
            if !self.charge() {
                return Flow::OutOfFuel;
            }
            return Flow::Halt;
        }
        Flow::Next
    }

    fn stmt(&mut self, s: &Stmt) -> Flow {
        match s {
            Stmt::Assign { place, expr } => {
                if !self.charge() {
                    return Flow::OutOfFuel;
                }
                let v = self.eval(expr);
                self.write(*place, v);
                Flow::Next
            }
            Stmt::Ife {
                guard,
                then,
                otherwise,
            } => {
                if !self.charge() {
                    return Flow::OutOfFuel;
                }
                if self.read(*guard) != W::zero() {
                    self.block(then)
                } else {
                    self.block(otherwise)
                }
            }
            Stmt::Whl { guard, body } => loop {
                if !self.charge() {
                    return Flow::OutOfFuel;
                }
                if self.read(*guard) == W::zero() {
                    return Flow::Next;
                }
                match self.block(body) {
                    Flow::Next => {}
                    other => return other,
                }
            },
        }
    }
}

/// Evaluates `f` on input `x` with at most `fuel` statements.
pub fn eval<W: Word>(f: &Function, x: &[W], fuel: u64, p: &MachineParams) -> OracleResult<W> {
    let mask = p.mask::<W>();
    let mut ipt = vec![W::zero(); f.inputs as usize];
    for (dst, &src) in ipt.iter_mut().zip(x) {
        *dst = src & mask;
    }
    let mut state = State {
        ipt,
        opt: vec![W::zero(); f.outputs as usize],
        scr: vec![W::zero(); p.mu],
        fuel,
        steps: 0,
        mask,
    };
    let status = match state.block(&f.body) {
        Flow::Next | Flow::Halt => OracleStatus::Halted,
        Flow::OutOfFuel => OracleStatus::FuelExhausted,
    };
    OracleResult {
        status,
        opt: state.opt,
        dsl_steps: state.steps,
    }
}

//! Exhaustive enumeration by length, straight from the productions.
//!
//! Does not consult the count table except for the size guard, so it can
//! check both the counts and the unranking.

use num_bigint::BigUint;

use super::count::count_programs;
use crate::error::{Error, Result};
use crate::lang::{ArrayRef, Block, Expr, Function, Region, Stmt};

/// Largest language enumerate_all agrees to walk.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

type Iter<T> = Box<dyn Iterator<Item = T>>;

fn guards() -> impl Iterator<Item = ArrayRef> + Clone {
    Region::READABLE
        .into_iter()
        .flat_map(|r| (0..10).map(move |z| ArrayRef::new(r, z)))
}

fn places() -> impl Iterator<Item = ArrayRef> + Clone {
    Region::WRITABLE
        .into_iter()
        .flat_map(|r| (0..10).map(move |z| ArrayRef::new(r, z)))
}

fn exprs(k: usize) -> Vec<Expr> {
    let mut out = Vec::new();
    match k {
        9 => {
            for op in [Expr::Add as fn(_, _) -> _, Expr::Mul] {
                for l in guards() {
                    for r in guards() {
                        out.push(op(l, r));
                    }
                }
            }
        }
        6 => {
            for op in [Expr::AddConst as fn(_, _) -> _, Expr::MulConst] {
                for l in guards() {
                    for z in 0..10 {
                        out.push(op(l, z));
                    }
                }
            }
        }
        4 => out.extend(guards().map(Expr::Ref)),
        1 => out.extend((0..10).map(Expr::Const)),
        _ => {}
    }
    out
}

fn stmts(k: usize) -> Iter<Stmt> {
    let assigns: Iter<Stmt> = if k > 5 {
        let es = exprs(k - 5);
        Box::new(places().flat_map(move |place| {
            es.clone()
                .into_iter()
                .map(move |expr| Stmt::Assign { place, expr })
        }))
    } else {
        Box::new(std::iter::empty())
    };
    let ifes: Iter<Stmt> = if k > 9 {
        Box::new(guards().flat_map(move |guard| {
            (1..k - 9).flat_map(move |a| {
                blocks(a).flat_map(move |then| {
                    blocks(k - 9 - a).map(move |otherwise| Stmt::Ife {
                        guard,
                        then: then.clone(),
                        otherwise,
                    })
                })
            })
        }))
    } else {
        Box::new(std::iter::empty())
    };
    let whls: Iter<Stmt> = if k > 7 {
        Box::new(guards().flat_map(move |guard| blocks(k - 7).map(move |body| Stmt::Whl { guard, body })))
    } else {
        Box::new(std::iter::empty())
    };
    Box::new(assigns.chain(ifes).chain(whls))
}

fn blocks(k: usize) -> Iter<Block> {
    let single = stmts(k).map(|s| Block {
        stmts: vec![s],
        halts: false,
    });
    let seqs = (1..k.saturating_sub(1)).flat_map(move |a| {
        stmts(a).flat_map(move |s| {
            blocks(k - 1 - a).map(move |mut rest| {
                rest.stmts.insert(0, s.clone());
                rest
            })
        })
    });
    let hlt = (k == 1).then(Block::hlt);
    Box::new(single.chain(seqs).chain(hlt))
}

/// Every program of exactly `len` tokens, once each, in production order.
pub fn enumerate_all(len: usize) -> Result<impl Iterator<Item = Function>> {
    let count = count_programs(len);
    if count > BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::TooManyToEnumerate {
            length: len,
            count: count.to_string(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let body = len.saturating_sub(Function::FRAME_TOKENS);
    let nonempty = len > Function::FRAME_TOKENS;
    Ok((1..=9u8)
        .flat_map(|i| (1..=9u8).map(move |o| (i, o)))
        .filter(move |_| nonempty)
        .flat_map(move |(inputs, outputs)| {
            blocks(body).map(move |body| Function {
                inputs,
                outputs,
                body,
            })
        }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_programs() {
        let all: Vec<_> = enumerate_all(16).unwrap().collect();
        assert_eq!(all.len(), 81);
        assert!(all.iter().all(|f| f.body == Block::hlt() && f.token_len() == 16));
        assert_eq!(enumerate_all(15).unwrap().count(), 0);
        assert_eq!(enumerate_all(0).unwrap().count(), 0);
    }

    #[test]
    fn guard_refuses_large_languages() {
        assert!(matches!(enumerate_all(100), Err(Error::TooManyToEnumerate { .. })));
    }
}

use std::fmt::Write;

use super::ast::{ArrayRef, Block, Expr, Function, Stmt};
use super::token::TokenKind;

/// Token sequence of a program, without positions.
pub fn tokens_of(f: &Function) -> Vec<TokenKind> {
    use TokenKind::*;
    let mut out = vec![Fun, F0, LParen, Ipt, Colon, W, Caret, Digit(f.inputs), RParen, Arrow, W, Caret];
    out.push(Digit(f.outputs));
    out.push(LBrace);
    block_tokens(&f.body, &mut out);
    out.push(RBrace);
    out
}

fn ref_tokens(r: &ArrayRef, out: &mut Vec<TokenKind>) {
    out.push(match r.region {
        super::Region::Ipt => TokenKind::Ipt,
        super::Region::Scr => TokenKind::Scr,
        super::Region::Opt => TokenKind::Opt,
    });
    out.extend([TokenKind::LBracket, TokenKind::Digit(r.index), TokenKind::RBracket]);
}

fn expr_tokens(e: &Expr, out: &mut Vec<TokenKind>) {
    match e {
        Expr::Add(l, r) | Expr::Mul(l, r) => {
            ref_tokens(l, out);
            out.push(if matches!(e, Expr::Add(..)) { TokenKind::Plus } else { TokenKind::Star });
            ref_tokens(r, out);
        }
        Expr::AddConst(l, z) | Expr::MulConst(l, z) => {
            ref_tokens(l, out);
            out.push(if matches!(e, Expr::AddConst(..)) { TokenKind::Plus } else { TokenKind::Star });
            out.push(TokenKind::Digit(*z));
        }
        Expr::Ref(r) => ref_tokens(r, out),
        Expr::Const(z) => out.push(TokenKind::Digit(*z)),
    }
}

fn stmt_tokens(s: &Stmt, out: &mut Vec<TokenKind>) {
    match s {
        Stmt::Assign { place, expr } => {
            ref_tokens(place, out);
            out.push(TokenKind::Equals);
            expr_tokens(expr, out);
        }
        Stmt::Ife { guard, then, otherwise } => {
            out.push(TokenKind::Ife);
            ref_tokens(guard, out);
            for b in [then, otherwise] {
                out.push(TokenKind::LBrace);
                block_tokens(b, out);
                out.push(TokenKind::RBrace);
            }
        }
        Stmt::Whl { guard, body } => {
            out.push(TokenKind::Whl);
            ref_tokens(guard, out);
            out.push(TokenKind::LBrace);
            block_tokens(body, out);
            out.push(TokenKind::RBrace);
        }
    }
}

fn block_tokens(b: &Block, out: &mut Vec<TokenKind>) {
    for (k, s) in b.stmts.iter().enumerate() {
        if k > 0 {
            out.push(TokenKind::Semicolon);
        }
        stmt_tokens(s, out);
    }
    if b.halts {
        if !b.stmts.is_empty() {
            out.push(TokenKind::Semicolon);
        }
        out.push(TokenKind::Hlt);
    }
}

/// Canonical one-line source: tokens separated by single spaces.
pub fn pretty_print(f: &Function) -> String {
    let mut s = String::new();
    for (k, t) in tokens_of(f).into_iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        s.push_str(t.text());
    }
    s
}

/// Multi-line layout with three-space indentation.
pub fn pretty_print_indented(f: &Function) -> String {
    let mut s = format!("fun f0(ipt: W ^ {}) -> W ^ {} {{\n", f.inputs, f.outputs);
    write_block(&f.body, 1, &mut s);
    s.push_str("}\n");
    s
}

fn array_ref(r: &ArrayRef) -> String {
    format!("{}[{}]", r.region.name(), r.index)
}

fn expr_text(e: &Expr) -> String {
    match e {
        Expr::Add(l, r) => format!("{} + {}", array_ref(l), array_ref(r)),
        Expr::Mul(l, r) => format!("{} * {}", array_ref(l), array_ref(r)),
        Expr::AddConst(l, z) => format!("{} + {z}", array_ref(l)),
        Expr::MulConst(l, z) => format!("{} * {z}", array_ref(l)),
        Expr::Ref(r) => array_ref(r),
        Expr::Const(z) => z.to_string(),
    }
}

fn write_block(b: &Block, depth: usize, s: &mut String) {
    let pad = "   ".repeat(depth);
    let parts = b.stmts.len() + usize::from(b.halts);
    for (k, stmt) in b.stmts.iter().enumerate() {
        s.push_str(&pad);
        match stmt {
            Stmt::Assign { place, expr } => {
                let _ = write!(s, "{} = {}", array_ref(place), expr_text(expr));
            }
            Stmt::Ife { guard, then, otherwise } => {
                let _ = writeln!(s, "ife {} {{", array_ref(guard));
                write_block(then, depth + 1, s);
                let _ = writeln!(s, "{pad}}} {{");
                write_block(otherwise, depth + 1, s);
                let _ = write!(s, "{pad}}}");
            }
            Stmt::Whl { guard, body } => {
                let _ = writeln!(s, "whl {} {{", array_ref(guard));
                write_block(body, depth + 1, s);
                let _ = write!(s, "{pad}}}");
            }
        }
        if k + 1 < parts {
            s.push(';');
        }
        s.push('\n');
    }
    if b.halts {
        s.push_str(&pad);
        s.push_str("hlt\n");
    }
}

use thiserror::Error;

use super::ast::{ArrayRef, Block, Expr, Function, Region, Stmt};
use super::token::{Token, TokenKind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {}: expected {}, found {}", location(*.offset), expected.join(" or "), found.as_deref().unwrap_or("end of input"))]
pub struct ParseError {
    /// Byte offset of the offending token, `None` at end of input.
    pub offset: Option<usize>,
    pub expected: Vec<String>,
    pub found: Option<String>,
}

fn location(offset: Option<usize>) -> String {
    match offset {
        Some(o) => format!("offset {o}"),
        None => "end of input".to_string(),
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<TokenKind> {
        self.tokens.get(self.pos).map(|t| t.kind)
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let tok = self.tokens.get(self.pos);
        ParseError {
            offset: tok.map(|t| t.offset),
            expected: expected.iter().map(|s| format!("`{s}`")).collect(),
            found: tok.map(|t| format!("`{}`", t.kind)),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        if self.peek() == Some(kind) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[kind.text()]))
        }
    }

    fn digit(&mut self) -> Result<u8, ParseError> {
        match self.peek() {
            Some(TokenKind::Digit(d)) => {
                self.pos += 1;
                Ok(d)
            }
            _ => Err(self.error(&["digit"])),
        }
    }

    fn arity(&mut self) -> Result<u8, ParseError> {
        match self.peek() {
            Some(TokenKind::Digit(d)) if d >= 1 => {
                self.pos += 1;
                Ok(d)
            }
            _ => Err(self.error(&["1..9"])),
        }
    }

    fn region(&self) -> Option<Region> {
        match self.peek()? {
            TokenKind::Ipt => Some(Region::Ipt),
            TokenKind::Scr => Some(Region::Scr),
            TokenKind::Opt => Some(Region::Opt),
            _ => None,
        }
    }

    fn array_ref(&mut self) -> Result<ArrayRef, ParseError> {
        let region = self.region().ok_or_else(|| self.error(&["ipt", "scr", "opt"]))?;
        self.pos += 1;
        self.expect(TokenKind::LBracket)?;
        let index = self.digit()?;
        self.expect(TokenKind::RBracket)?;
        Ok(ArrayRef::new(region, index))
    }

    fn function(&mut self) -> Result<Function, ParseError> {
        use TokenKind::*;
        for kind in [Fun, F0, LParen, Ipt, Colon, W, Caret] {
            self.expect(kind)?;
        }
        let inputs = self.arity()?;
        for kind in [RParen, Arrow, W, Caret] {
            self.expect(kind)?;
        }
        let outputs = self.arity()?;
        self.expect(LBrace)?;
        let body = self.block()?;
        self.expect(RBrace)?;
        if self.pos != self.tokens.len() {
            return Err(self.error(&["end of input"]));
        }
        Ok(Function {
            inputs,
            outputs,
            body,
        })
    }

    fn block(&mut self) -> Result<Block, ParseError> {
        let mut stmts = Vec::new();
        loop {
            if self.peek() == Some(TokenKind::Hlt) {
                self.pos += 1;
                return Ok(Block { stmts, halts: true });
            }
            stmts.push(self.stmt()?);
            if self.peek() == Some(TokenKind::Semicolon) {
                self.pos += 1;
            } else {
                return Ok(Block {
                    stmts,
                    halts: false,
                });
            }
        }
    }

    fn braced_block(&mut self) -> Result<Block, ParseError> {
        self.expect(TokenKind::LBrace)?;
        let block = self.block()?;
        self.expect(TokenKind::RBrace)?;
        Ok(block)
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match self.peek() {
            Some(TokenKind::Ife) => {
                self.pos += 1;
                let guard = self.array_ref()?;
                let then = self.braced_block()?;
                let otherwise = self.braced_block()?;
                Ok(Stmt::Ife {
                    guard,
                    then,
                    otherwise,
                })
            }
            Some(TokenKind::Whl) => {
                self.pos += 1;
                let guard = self.array_ref()?;
                let body = self.braced_block()?;
                Ok(Stmt::Whl { guard, body })
            }
            Some(TokenKind::Scr | TokenKind::Opt) => {
                let place = self.array_ref()?;
                self.expect(TokenKind::Equals)?;
                let expr = self.expr()?;
                Ok(Stmt::Assign { place, expr })
            }
            _ => Err(self.error(&["scr", "opt", "ife", "whl", "hlt"])),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if let Some(TokenKind::Digit(d)) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Const(d));
        }
        let lhs = self.array_ref()?;
        let op = match self.peek() {
            Some(TokenKind::Plus) => TokenKind::Plus,
            Some(TokenKind::Star) => TokenKind::Star,
            _ => return Ok(Expr::Ref(lhs)),
        };
        self.pos += 1;
        let add = op == TokenKind::Plus;
        if let Some(TokenKind::Digit(d)) = self.peek() {
            self.pos += 1;
            return Ok(if add {
                Expr::AddConst(lhs, d)
            } else {
                Expr::MulConst(lhs, d)
            });
        }
        if self.region().is_none() {
            return Err(self.error(&["ipt", "scr", "opt", "digit"]));
        }
        let rhs = self.array_ref()?;
        Ok(if add {
            Expr::Add(lhs, rhs)
        } else {
            Expr::Mul(lhs, rhs)
        })
    }
}

pub fn parse(tokens: &[Token]) -> Result<Function, ParseError> {
    Parser { tokens, pos: 0 }.function()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::tokenize;

    fn parse_str(text: &str) -> Result<Function, ParseError> {
        parse(&tokenize(text).unwrap())
    }

    #[test]
    fn minimal() {
        let f = parse_str("fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { hlt }").unwrap();
        assert_eq!(f.inputs, 1);
        assert_eq!(f.outputs, 1);
        assert_eq!(f.body, Block::hlt());
    }

    #[test]
    fn ipt_is_not_assignable() {
        let err = parse_str("fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { ipt[0] = 1 }").unwrap_err();
        assert_eq!(err.offset, Some(34));
        assert!(err.to_string().contains("expected"));
    }

    #[test]
    fn rejections() {
        for bad in [
            "fun f0 ( ipt : W ^ 0 ) -> W ^ 1 { hlt }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { hlt ; hlt }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { opt[0] = 1 ; }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { opt[0] = 1 + 2 }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { opt[0] = opt[0] + opt[1] + 1 }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { whl 1 { hlt } }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { ife opt[0] { hlt } }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { hlt } }",
            "fun f0 ( ipt : W ^ 1 ) -> W ^ 1 { hlt",
        ] {
            assert!(parse_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn expressions() {
        let f = parse_str(
            "fun f0 ( ipt : W ^ 2 ) -> W ^ 1 { opt[0] = ipt[1] + 3 ; scr[2] = opt[0] * scr[1] ; opt[1] = 7 ; hlt }",
        )
        .unwrap();
        assert_eq!(
            f.body.stmts,
            vec![
                Stmt::Assign {
                    place: ArrayRef::new(Region::Opt, 0),
                    expr: Expr::AddConst(ArrayRef::new(Region::Ipt, 1), 3),
                },
                Stmt::Assign {
                    place: ArrayRef::new(Region::Scr, 2),
                    expr: Expr::Mul(ArrayRef::new(Region::Opt, 0), ArrayRef::new(Region::Scr, 1)),
                },
                Stmt::Assign {
                    place: ArrayRef::new(Region::Opt, 1),
                    expr: Expr::Const(7),
                },
            ]
        );
        assert!(f.body.halts);
    }
}

//! The heapless array language: tokens, syntax tree, parser and printers.
//!
//! ```text
//! F ::= fun f0 ( ipt : W ^ N ) -> W ^ N { B }
//! N ::= 1 | ... | 9
//! B ::= S | S ; B | hlt
//! S ::= P = E | ife G { B } { B } | whl G { B }
//! Z ::= 0 | N
//! G ::= ipt [ Z ] | scr [ Z ] | opt [ Z ]
//! P ::= scr [ Z ] | opt [ Z ]
//! E ::= G + G | G * G | G + Z | G * Z | G | Z
//! ```

mod ast;
mod parser;
mod printer;
mod token;

pub use ast::{ArrayRef, Block, Expr, Function, Region, Stmt};
pub use parser::{parse, ParseError};
pub use printer::{pretty_print, pretty_print_indented, tokens_of};
pub use token::{tokenize, LexError, Token, TokenKind};

/// Tokenizes and parses source text.
pub fn parse_source(text: &str) -> crate::Result<Function> {
    let tokens = tokenize(text)?;
    Ok(parse(&tokens)?)
}

/// JSON dump of a syntax tree.
pub fn ast_json(f: &Function) -> String {
    serde_json::to_string_pretty(f).expect("syntax trees always serialize")
}

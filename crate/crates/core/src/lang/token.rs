use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// The terminals of the array language. Keywords and `->` are single tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TokenKind {
    Fun,
    F0,
    Ipt,
    Opt,
    Scr,
    Whl,
    Ife,
    Hlt,
    W,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semicolon,
    Equals,
    Plus,
    Star,
    Arrow,
    Colon,
    Caret,
    Digit(u8),
}

impl TokenKind {
    pub fn text(self) -> &'static str {
        const DIGITS: [&str; 10] = ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9"];
        match self {
            TokenKind::Fun => "fun",
            TokenKind::F0 => "f0",
            TokenKind::Ipt => "ipt",
            TokenKind::Opt => "opt",
            TokenKind::Scr => "scr",
            TokenKind::Whl => "whl",
            TokenKind::Ife => "ife",
            TokenKind::Hlt => "hlt",
            TokenKind::W => "W",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Semicolon => ";",
            TokenKind::Equals => "=",
            TokenKind::Plus => "+",
            TokenKind::Star => "*",
            TokenKind::Arrow => "->",
            TokenKind::Colon => ":",
            TokenKind::Caret => "^",
            TokenKind::Digit(d) => DIGITS[d as usize],
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset into the source.
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("lexical error at offset {offset}: unexpected {found:?}")]
pub struct LexError {
    pub offset: usize,
    pub found: String,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let kind = match b {
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b'{' => TokenKind::LBrace,
            b'}' => TokenKind::RBrace,
            b'[' => TokenKind::LBracket,
            b']' => TokenKind::RBracket,
            b';' => TokenKind::Semicolon,
            b'=' => TokenKind::Equals,
            b'+' => TokenKind::Plus,
            b'*' => TokenKind::Star,
            b':' => TokenKind::Colon,
            b'^' => TokenKind::Caret,
            b'0'..=b'9' => TokenKind::Digit(b - b'0'),
            b'-' if bytes.get(pos + 1) == Some(&b'>') => {
                pos += 1;
                TokenKind::Arrow
            }
            b if b.is_ascii_alphabetic() => {
                while pos + 1 < bytes.len() && bytes[pos + 1].is_ascii_alphanumeric() {
                    pos += 1;
                }
                match &text[start..=pos] {
                    "fun" => TokenKind::Fun,
                    "f0" => TokenKind::F0,
                    "ipt" => TokenKind::Ipt,
                    "opt" => TokenKind::Opt,
                    "scr" => TokenKind::Scr,
                    "whl" => TokenKind::Whl,
                    "ife" => TokenKind::Ife,
                    "hlt" => TokenKind::Hlt,
                    "W" => TokenKind::W,
                    word => {
                        return Err(LexError {
                            offset: start,
                            found: word.to_string(),
                        })
                    }
                }
            }
            _ => {
                let found = text[start..].chars().next().map(String::from).unwrap_or_default();
                return Err(LexError { offset: start, found });
            }
        };
        tokens.push(Token { kind, offset: start });
        pos += 1;
    }
    Ok(tokens)
}

//! Pratt parser. Binding power, loosest first: `+ -`, `* /`, unary minus,
//! `^` (right associative), then calls and atoms.

use super::{BinOp, Expr, Func};
use crate::error::{FracError, Result};

/// Longest accepted input.
pub const MAX_INPUT_BYTES: usize = 64 * 1024;
const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn err(offset: usize, message: impl Into<String>) -> FracError {
    FracError::Parse {
        offset,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text
                .parse()
                .map_err(|_| err(start, format!("malformed number `{text}`")))?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        let tok = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const UNARY_BP: u8 = 5;

fn infix_bp(op: char) -> Option<(u8, u8, BinOp)> {
    Some(match op {
        '+' => (1, 2, BinOp::Add),
        '-' => (1, 2, BinOp::Sub),
        '*' => (3, 4, BinOp::Mul),
        '/' => (3, 4, BinOp::Div),
        '^' => (7, 6, BinOp::Pow),
        _ => return None,
    })
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let (tok, at) = self.next();
        if tok == want {
            Ok(())
        } else {
            Err(err(
                at,
                format!("expected {}, found {}", want.describe(), tok.describe()),
            ))
        }
    }

    /// Returns the tree and its depth.
    fn expr(&mut self, min_bp: u8, depth: usize) -> Result<(Expr, usize)> {
        let (tok, at) = self.next();
        if depth > MAX_DEPTH {
            return Err(err(at, "expression nests too deeply"));
        }
        let (mut lhs, mut d) = match tok {
            Tok::Num(v) => (Expr::Const(v), 1),
            Tok::Op('-') => {
                let (e, d) = self.expr(UNARY_BP, depth + 1)?;
                (Expr::Neg(Box::new(e)), d + 1)
            }
            Tok::Op('+') => self.expr(UNARY_BP, depth + 1)?,
            Tok::LParen => {
                let inner = self.expr(0, depth + 1)?;
                self.expect(Tok::RParen)?;
                inner
            }
            Tok::Ident(name) => self.ident(name, at, depth)?,
            other => return Err(err(at, format!("unexpected {}", other.describe()))),
        };
        loop {
            let (tok, at) = self.peek().clone();
            let op = match tok {
                Tok::Op(c) => c,
                _ => break,
            };
            let (lbp, rbp, bop) = match infix_bp(op) {
                Some(b) => b,
                None => break,
            };
            if lbp < min_bp {
                break;
            }
            self.next();
            let (rhs, rd) = self.expr(rbp, depth + 1)?;
            d = d.max(rd) + 1;
            if d > MAX_DEPTH {
                return Err(err(at, "expression nests too deeply"));
            }
            lhs = Expr::Binary(bop, Box::new(lhs), Box::new(rhs));
        }
        Ok((lhs, d))
    }

    fn ident(&mut self, name: String, at: usize, depth: usize) -> Result<(Expr, usize)> {
        if matches!(self.peek().0, Tok::LParen) {
            let func = Func::from_name(&name).ok_or(FracError::UnknownIdentifier {
                offset: at,
                name: name.clone(),
            })?;
            self.next();
            let mut args = Vec::new();
            let mut d = 0;
            loop {
                let (a, ad) = self.expr(0, depth + 1)?;
                d = d.max(ad);
                args.push(a);
                match self.peek().0 {
                    Tok::Comma => {
                        self.next();
                    }
                    _ => break,
                }
            }
            self.expect(Tok::RParen)?;
            if args.len() != func.arity() {
                return Err(err(
                    at,
                    format!(
                        "{} takes {} argument(s), got {}",
                        func.name(),
                        func.arity(),
                        args.len()
                    ),
                ));
            }
            return Ok((Expr::Call(func, args), d + 1));
        }
        let e = match name.as_str() {
            "x" | "t" => Expr::Var,
            "pi" => Expr::Const(std::f64::consts::PI),
            "e" => Expr::Const(std::f64::consts::E),
            _ => return Err(FracError::UnknownIdentifier { offset: at, name }),
        };
        Ok((e, 1))
    }
}

/// Parses `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr> {
    if src.len() > MAX_INPUT_BYTES {
        return Err(err(
            MAX_INPUT_BYTES,
            format!("input exceeds {MAX_INPUT_BYTES} bytes"),
        ));
    }
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let (e, _) = p.expr(0, 0)?;
    let (tok, at) = p.next();
    if tok != Tok::End {
        return Err(err(at, format!("unexpected {}", tok.describe())));
    }
    Ok(e)
}

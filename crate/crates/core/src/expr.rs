//! Character expressions such as `a1^3`, `s5`, `a2-1` or `2*chi_1 + chi_3`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | ident | '(' expr ')'
//! ident := a1 | a2 | s<n> | chi_<n> | chi_{m,n} | chi_<i>xchi_<j> | nu_<m> | nu_{-m}
//!        | rho_<m> | triv | sign
//! ```

use crate::chars::{CharLabel, ExactFn};
use crate::error::{Error, Result};
use crate::stgroup::StGroup;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i128),
    Ident(String),
    Op(char),
}

fn err(msg: impl Into<String>) -> Error {
    Error::InvalidInput(format!("character expression: {}", msg.into()))
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[start..i].iter().collect();
            out.push(Tok::Int(t.parse().map_err(|_| err(format!("bad integer {t}")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() {
                if cs[i].is_ascii_alphanumeric() || cs[i] == '_' {
                    i += 1;
                } else if cs[i] == '{' {
                    let close = cs[i..]
                        .iter()
                        .position(|&c| c == '}')
                        .ok_or_else(|| err("unclosed '{'"))?;
                    i += close + 1;
                } else {
                    break;
                }
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    group: StGroup,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<ExactFn> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs)? } else { acc.sub(&rhs)? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ExactFn> {
        let mut acc = self.unary()?;
        while self.peek_op() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ExactFn> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.scale(-1));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExactFn> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Int(n)) if *n <= 64 => {
                    self.pos += 1;
                    return Ok(base.pow(*n as u32));
                }
                _ => return Err(err("exponent must be an integer between 0 and 64")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExactFn> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Int(v) => Ok(ExactFn::constant(self.group, v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(err("missing ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op(c) => Err(err(format!("unexpected '{c}'"))),
            Tok::Ident(id) => self.ident(&id),
        }
    }

    fn ident(&self, id: &str) -> Result<ExactFn> {
        match id {
            "a1" => return Ok(ExactFn::a1(self.group)),
            "a2" => return Ok(ExactFn::a2(self.group)),
            _ => {}
        }
        if let Some(n) = id.strip_prefix('s').and_then(|n| n.parse::<u32>().ok()) {
            if n == 0 {
                return Err(err("power sums start at s1"));
            }
            return Ok(ExactFn::power_sum(self.group, n));
        }
        Ok(ExactFn::from_label(CharLabel::parse_in(id, self.group)?))
    }
}

/// Parses `text` into an exact class function on `group`.
pub fn parse_expr(text: &str, group: StGroup) -> Result<ExactFn> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(err("empty expression"));
    }
    let mut p = Parser { toks: &toks, pos: 0, group };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(err(format!("trailing input after token {}", p.pos)));
    }
    Ok(e)
}

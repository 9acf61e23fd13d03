//! Minimal polynomial literal grammar used for command-line inputs:
//!
//! ```text
//! poly   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := int ["/" int] | var ["^" int]
//! var    := "z"k | "xi"k | "t"        (k is 1-based)
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::SparsePoly;
use crate::rational::Rational;
use crate::varset::{Var, VarSet};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn small(&mut self) -> Result<u32> {
        self.digits()?
            .parse()
            .map_err(|_| self.err("integer too large"))
    }
}

pub fn parse_poly(src: &str, vars: VarSet) -> Result<SparsePoly> {
    let mut lx = Lexer {
        src: src.as_bytes(),
        pos: 0,
    };
    if lx.peek().is_none() {
        return Err(lx.err("empty polynomial"));
    }
    let mut acc = SparsePoly::zero(vars);
    let mut first = true;
    loop {
        let neg = if lx.eat(b'-') {
            true
        } else {
            if !lx.eat(b'+') && !first {
                return Err(lx.err("expected '+' or '-'"));
            }
            false
        };
        first = false;
        let t = parse_term(&mut lx, vars)?;
        acc = if neg { &acc - &t } else { &acc + &t };
        if lx.peek().is_none() {
            return Ok(acc);
        }
    }
}

fn parse_term(lx: &mut Lexer<'_>, vars: VarSet) -> Result<SparsePoly> {
    let mut coeff = Rational::one();
    let mut exps = MultiIndex::zeros(vars.len());
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = lx.digits()?.parse().unwrap();
                let mut r = Rational::from_integer(num);
                if lx.eat(b'/') {
                    let den: BigInt = lx.digits()?.parse().unwrap();
                    if den.is_zero() {
                        return Err(lx.err("zero denominator"));
                    }
                    r /= Rational::from_integer(den);
                }
                coeff *= r;
            }
            Some(b'z') | Some(b'x') | Some(b't') => {
                let var = parse_var(lx)?;
                let idx = vars
                    .index_of(var)
                    .ok_or_else(|| lx.err(format!("variable not in layout {vars}")))?;
                let e = if lx.eat(b'^') { lx.small()? } else { 1 };
                exps.set(idx, exps[idx] + e);
            }
            _ => return Err(lx.err("expected a number or a variable")),
        }
        if !lx.eat(b'*') {
            return Ok(SparsePoly::monomial(vars, exps, coeff));
        }
    }
}

fn parse_var(lx: &mut Lexer<'_>) -> Result<Var> {
    let rest = &lx.src[lx.pos..];
    if rest.starts_with(b"xi") {
        lx.pos += 2;
        let k = lx.small()?;
        index_var(lx, k).map(Var::Xi)
    } else if rest.starts_with(b"z") {
        lx.pos += 1;
        let k = lx.small()?;
        index_var(lx, k).map(Var::Z)
    } else if rest.starts_with(b"t") {
        lx.pos += 1;
        Ok(Var::T)
    } else {
        Err(lx.err("unknown variable"))
    }
}

fn index_var(lx: &Lexer<'_>, k: u32) -> Result<usize> {
    if k == 0 {
        return Err(lx.err("variable indices start at 1"));
    }
    Ok(k as usize - 1)
}

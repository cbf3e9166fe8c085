//! Text grammar for ring elements and ring descriptors.
//!
//! Elements: sums of products such as `1/2*x1^2*e1 - 3 + (1 + 2*i)*e2`.
//! Geometric variables are `x1..xd` (`z1..zd` is accepted as an alias),
//! nilpotent variables `e1..ek`, and `i` is the imaginary unit.
//!
//! Descriptors: `field(Q)`, `field(Q(i))`, `field(F5)`, `poly(Q;2)`,
//! `trunc(Q;1;1;3)` (base; geometric vars; nilpotent vars; order),
//! `zmod(4)` and `dual(2;2)` for `F_2[e]/(e^2)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::RingElement;
use crate::ring::{Ring, RingDescriptor};
use crate::scalar::BaseRing;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            col += k - start;
            toks.push((Tok::Num(s.parse().unwrap()), l0, c0));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            col += k - start;
            toks.push((Tok::Ident(s), l0, c0));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Parse { line, column: col, message: format!("unexpected character '{c}'") })
            }
        };
        toks.push((t, l0, c0));
        k += 1;
        col += 1;
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks, pos: 0 })
}

struct Parser<'r> {
    lx: Lexer,
    ring: &'r Ring,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.lx.toks[self.lx.pos].0
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (_, line, column) = self.lx.toks[self.lx.pos];
        Err(Error::Parse { line, column, message: message.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.lx.toks[self.lx.pos].0.clone();
        if t != Tok::End {
            self.lx.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RingElement> {
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                -&self.term()?
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    self.bump();
                    let d = self.factor()?;
                    if !d.is_constant() {
                        return self.err("division by a non-constant");
                    }
                    let inv = match d.constant_term().inv() {
                        Some(v) if !d.is_zero() || self.ring.is_zero_ring() => v,
                        _ => return self.err("division by a non-invertible constant"),
                    };
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RingElement> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.bump() {
                Tok::Num(n) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Parse {
                        line: 0,
                        column: 0,
                        message: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => {
                    self.lx.pos = self.lx.pos.saturating_sub(1);
                    return self.err("expected an integer exponent after '^'");
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RingElement> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                let c = self.ring.base().from_rational(&BigRational::from_integer(n))?;
                Ok(RingElement::constant(self.ring, c))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Tok::Ident(name) => {
                let v = self.variable(&name)?;
                self.bump();
                Ok(v)
            }
            Tok::End => self.err("unexpected end of input"),
            t => self.err(format!("unexpected token {t:?}")),
        }
    }

    fn variable(&self, name: &str) -> Result<RingElement> {
        if name == "i" {
            return match self.ring.base().imaginary_unit() {
                Some(c) => Ok(RingElement::constant(self.ring, c)),
                None => self.err("imaginary unit requires a Gaussian base"),
            };
        }
        if name == "e" && self.ring.nilpotent_vars() == 1 {
            return Ok(RingElement::eps(self.ring, 0));
        }
        let (head, idx) = name.split_at(1);
        let idx: usize = match idx.parse() {
            Ok(v) if v >= 1 => v,
            _ => return self.err(format!("unknown identifier '{name}'")),
        };
        match head {
            "x" | "z" if idx <= self.ring.geometric_vars() => Ok(RingElement::x(self.ring, idx - 1)),
            "e" if idx <= self.ring.nilpotent_vars() => Ok(RingElement::eps(self.ring, idx - 1)),
            _ => self.err(format!("variable '{name}' is not part of {}", self.ring)),
        }
    }
}

/// Parses an element of `ring`.
pub fn parse_element(ring: &Ring, src: &str) -> Result<RingElement> {
    let mut p = Parser { lx: lex(src)?, ring };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(e)
}

fn parse_base(s: &str, finite_ok: bool) -> Result<BaseRing> {
    let s = s.trim();
    match s {
        "Q" | "QQ" => Ok(BaseRing::Rational),
        "Q(i)" | "QI" | "Q[i]" => Ok(BaseRing::Gaussian),
        _ => {
            let digits = s.strip_prefix("GF").or_else(|| s.strip_prefix('F')).or_else(|| {
                if finite_ok {
                    s.strip_prefix('Z')
                } else {
                    None
                }
            });
            let p: u64 = digits
                .map(|d| d.trim_matches(|c| c == '(' || c == ')'))
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| bad_ring(format!("unknown base '{s}'")))?;
            Ok(BaseRing::Modular(p))
        }
    }
}

fn bad_ring(message: String) -> Error {
    Error::Parse { line: 1, column: 1, message }
}

/// Parses a descriptor such as `trunc(Q;1;1;2)`.
pub fn parse_ring(src: &str) -> Result<Ring> {
    let s = src.trim();
    let open = s.find('(').ok_or_else(|| bad_ring(format!("expected kind(args), got '{s}'")))?;
    if !s.ends_with(')') {
        return Err(bad_ring(format!("missing ')' in '{s}'")));
    }
    let kind = &s[..open];
    let args: Vec<&str> = s[open + 1..s.len() - 1].split(';').map(str::trim).collect();
    let num = |k: usize| -> Result<usize> {
        args.get(k)
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| bad_ring(format!("argument {} of '{s}' must be an integer", k + 1)))
    };
    let want = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(bad_ring(format!("'{kind}' takes {n} arguments")))
        }
    };
    match kind {
        "field" => {
            want(1)?;
            RingDescriptor::field(parse_base(args[0], false)?)
        }
        "poly" => {
            want(2)?;
            RingDescriptor::poly(parse_base(args[0], false)?, num(1)?)
        }
        "trunc" => {
            want(4)?;
            RingDescriptor::trunc_nil(parse_base(args[0], false)?, num(1)?, num(2)?, num(3)?)
        }
        "zmod" => {
            want(1)?;
            RingDescriptor::zmod(num(0)? as u64)
        }
        "dual" => {
            want(2)?;
            RingDescriptor::dual(num(0)? as u64, num(1)?)
        }
        _ => Err(bad_ring(format!("unknown ring kind '{kind}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> Ring {
        parse_ring(s).unwrap()
    }

    #[test]
    fn parses_one_minus_eps() {
        let r = ring("trunc(Q;0;1;2)");
        let a = parse_element(&r, "1 - e1").unwrap();
        assert_eq!(a, &RingElement::one(&r) - &RingElement::eps(&r, 0));
        assert_eq!(a.to_string(), "-e1 + 1");
    }

    #[test]
    fn malformed_power_is_an_error() {
        let r = ring("poly(Q;1)");
        match parse_element(&r, "x^") {
            Err(Error::Parse { line: 1, column, .. }) => assert!(column >= 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_element(&r, "x1^").is_err());
        assert!(parse_element(&r, "x2").is_err());
        assert!(parse_element(&r, "(x1").is_err());
    }

    #[test]
    fn rationals_and_gaussians() {
        let r = ring("poly(Q(i);1)");
        let a = parse_element(&r, "1/2*x1 + (3 - 2*i)").unwrap();
        let b = parse_element(&r, &a.to_string()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2*x1 + (3 - 2*i)");
    }

    #[test]
    fn z_alias_and_modular_reduction() {
        let r = ring("poly(F5;2)");
        let a = parse_element(&r, "z1*z2 - 1").unwrap();
        assert_eq!(a.to_string(), "x1*x2 + 4");
        let z4 = ring("zmod(4)");
        assert_eq!(parse_element(&z4, "-1").unwrap().to_string(), "3");
    }

    #[test]
    fn ring_specs_round_trip() {
        for s in ["field(Q)", "field(Q(i))", "field(F7)", "poly(Q;3)", "trunc(Q;1;2;3)", "zmod(9)", "dual(3;2)"] {
            assert_eq!(ring(s).to_string(), s);
        }
        assert!(parse_ring("poly(Q)").is_err());
        assert!(parse_ring("trunc(Q;1;1;0)").is_err());
        assert!(parse_ring("blob(Q)").is_err());
    }
}

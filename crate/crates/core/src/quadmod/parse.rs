//! Parser for the textual module format.
//!
//! ```text
//! Spec := "0" | Term ("+" Term)*
//! Term := Atom ["^-1"]
//! Atom := "A(" q "," t ")" | "B(" 2^k ")" | "C(" 2^k ")" | "Am(" m ")" | "A2pr(" p "," r ")"
//! ```
//! Whitespace is ignored everywhere.

use super::{Component, FiniteQuadraticModule};
use crate::arith;
use crate::error::{Error, Result};

struct Parser<'a> {
    /// Non-whitespace characters with their byte offsets in the input.
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Self { chars, pos: 0, src }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.pos + n > self.chars.len() {
            return false;
        }
        let ok = self.chars[self.pos..self.pos + n]
            .iter()
            .map(|&(_, c)| c)
            .eq(s.chars());
        if ok {
            self.pos += n;
        }
        ok
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected {s:?}"))
        }
    }

    fn integer(&mut self) -> Result<(usize, i64)> {
        let start = self.offset();
        let mut text = String::new();
        if self.peek() == Some('-') {
            text.push('-');
            self.pos += 1;
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.pos += 1;
        }
        match text.parse::<i64>() {
            Ok(v) => Ok((start, v)),
            Err(_) => Err(Error::Parse {
                pos: start,
                msg: "expected an integer".into(),
            }),
        }
    }

    fn positive(&mut self) -> Result<(usize, u64)> {
        let (at, v) = self.integer()?;
        if v <= 0 {
            return Err(Error::Parse {
                pos: at,
                msg: format!("expected a positive integer, got {v}"),
            });
        }
        Ok((at, v as u64))
    }

    fn power_of_two(&mut self) -> Result<u32> {
        let (at, v) = self.positive()?;
        if !v.is_power_of_two() || v == 1 {
            return Err(Error::Parse {
                pos: at,
                msg: format!("{v} is not a power of 2 greater than 1"),
            });
        }
        Ok(v.trailing_zeros())
    }

    fn atom(&mut self) -> Result<Vec<Component>> {
        let at = self.offset();
        let annotate = |e: Error| match e {
            Error::InvalidParameter(msg) => Error::Parse { pos: at, msg },
            other => other,
        };
        if self.eat("A2pr(") {
            let (_, p) = self.positive()?;
            self.expect(",")?;
            let (rat_at, r) = self.positive()?;
            self.expect(")")?;
            if r > 64 {
                return Err(Error::Parse {
                    pos: rat_at,
                    msg: format!("r = {r} is too large"),
                });
            }
            if !arith::is_prime(p) || p == 2 {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("A2pr({p},{r}): p must be an odd prime"),
                });
            }
            return FiniteQuadraticModule::a2pr(p, r as u32)
                .map(|m| m.components().to_vec())
                .map_err(annotate);
        }
        if self.eat("Am(") {
            let (_, m) = self.positive()?;
            self.expect(")")?;
            return Component::cyclic(m).map(|c| vec![c]).map_err(annotate);
        }
        if self.eat("A(") {
            let (q_at, q) = self.positive()?;
            self.expect(",")?;
            let (_, t) = self.integer()?;
            self.expect(")")?;
            let Some((p, k)) = arith::prime_power(q) else {
                return Err(Error::Parse {
                    pos: q_at,
                    msg: format!("{q} is not a prime power"),
                });
            };
            let c = if p == 2 {
                Component::a_even(k, t)
            } else {
                Component::a_odd(p, k, t)
            };
            return c.map(|c| vec![c]).map_err(annotate);
        }
        if self.eat("B(") {
            let k = self.power_of_two()?;
            self.expect(")")?;
            return Ok(vec![Component::B { k, negated: false }]);
        }
        if self.eat("C(") {
            let k = self.power_of_two()?;
            self.expect(")")?;
            return Ok(vec![Component::C { k, negated: false }]);
        }
        self.err("expected one of A(, Am(, A2pr(, B(, C(")
    }

    fn term(&mut self) -> Result<Vec<Component>> {
        let comps = self.atom()?;
        if self.eat("^") {
            self.expect("-1")?;
            return Ok(comps.iter().map(Component::negate).collect());
        }
        Ok(comps)
    }

    fn spec(&mut self) -> Result<FiniteQuadraticModule> {
        if self.chars.is_empty() {
            return self.err("empty module specification");
        }
        if self.eat("0") {
            if self.peek().is_some() {
                return self.err("unexpected input after trivial module");
            }
            return Ok(FiniteQuadraticModule::trivial());
        }
        let mut comps = self.term()?;
        while self.eat("+") {
            comps.extend(self.term()?);
        }
        if self.peek().is_some() {
            return self.err("expected \"+\" or end of input");
        }
        Ok(FiniteQuadraticModule::new(comps))
    }
}

/// Parses a module specification such as `"A2pr(5,1)"` or `"Am(10)^-1 + A(7,1)"`.
pub fn parse_module(text: &str) -> Result<FiniteQuadraticModule> {
    Parser::new(text).spec()
}

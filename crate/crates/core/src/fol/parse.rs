//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence from loosest: `->` (right associative), `|`, `&`, then the
//! prefix forms `!f`, `forall v. f`, `exists v. f`. A quantifier body
//! extends as far right as possible. Constants are written `c<code>` or
//! `c[<formula>]`.

use num_bigint::BigUint;

use super::{decode_formula, Formula, HenkinConst, Term};
use crate::error::ParseError;

const KEYWORDS: [&str; 6] = ["forall", "exists", "in", "true", "false", "S"];

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn is_const_literal(s: &str) -> bool {
    s.len() > 1 && s.starts_with('c') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

/// Whether `s` may be used as a variable or predicate name.
pub(crate) fn is_valid_name(s: &str) -> bool {
    let b = s.as_bytes();
    !b.is_empty()
        && is_ident_start(b[0])
        && b.iter().all(|&c| is_ident_char(c))
        && !KEYWORDS.contains(&s)
        && !is_const_literal(s)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(self.pos, msg))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    /// Reads an identifier-shaped word without consuming it.
    fn peek_word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let b = self.src.as_bytes();
        if self.pos >= b.len() || !is_ident_start(b[self.pos]) {
            return None;
        }
        let mut end = self.pos;
        while end < b.len() && is_ident_char(b[end]) {
            end += 1;
        }
        Some(&self.src[self.pos..end])
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek_word() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek_word() {
            Some(w) if is_valid_name(w) => {
                self.pos += w.len();
                Ok(w.to_string())
            }
            Some(w) => self.err(format!("`{w}` cannot be used as a name")),
            None => self.err("expected identifier"),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat("|") {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat("!") {
            return Ok(Formula::not(self.unary()?));
        }
        for (kw, exists) in [("forall", false), ("exists", true)] {
            if self.eat_keyword(kw) {
                let v = self.name()?;
                self.expect(".")?;
                let body = Box::new(self.formula()?);
                return Ok(if exists {
                    Formula::Exists(v, body)
                } else {
                    Formula::Forall(v, body)
                });
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek() {
            None => return self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(")")?;
                return Ok(f);
            }
            _ => {}
        }
        if self.eat_keyword("true") {
            return Ok(Formula::True);
        }
        if self.eat_keyword("false") {
            return Ok(Formula::False);
        }
        if self.eat_keyword("S") {
            self.expect("(")?;
            let a = self.term()?;
            self.expect(",")?;
            let b = self.term()?;
            self.expect(",")?;
            let c = self.term()?;
            self.expect(")")?;
            return Ok(Formula::S(a, b, c));
        }
        // predicate application
        if let Some(w) = self.peek_word() {
            if is_valid_name(w) {
                let save = self.pos;
                self.pos += w.len();
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let mut args = Vec::new();
                    if !self.eat(")") {
                        loop {
                            args.push(self.term()?);
                            if self.eat(")") {
                                break;
                            }
                            self.expect(",")?;
                        }
                    }
                    return Ok(Formula::Pred(w.to_string(), args));
                }
                self.pos = save;
            }
        }
        let lhs = self.term()?;
        if self.eat_keyword("in") {
            return Ok(Formula::Mem(lhs, self.term()?));
        }
        if self.eat("=") {
            return Ok(Formula::Eq(lhs, self.term()?));
        }
        self.err("expected `in` or `=`")
    }

    fn term(&mut self) -> PResult<Term> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let Some(w) = self.peek_word() else {
            return self.err("expected term");
        };
        if is_const_literal(w) {
            self.pos += w.len();
            let code: BigUint = w[1..].parse().expect("digits");
            let Some(f) = decode_formula(&code) else {
                return Err(ParseError::new(start, format!("{w} is not a formula code")));
            };
            return HenkinConst::new(f)
                .map(Term::Const)
                .map_err(|e| ParseError::new(start, e.to_string()));
        }
        if w == "c" && self.src[self.pos + 1..].starts_with('[') {
            self.pos += 2;
            let f = self.formula()?;
            self.expect("]")?;
            return HenkinConst::new(f)
                .map(Term::Const)
                .map_err(|e| ParseError::new(start, e.to_string()));
        }
        Ok(Term::Var(self.name()?))
    }
}

/// Parses a formula.
pub fn parse(src: &str) -> std::result::Result<Formula, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses a term starting at `*pos`, advancing past it.
pub(crate) fn parse_term_at(src: &str, pos: &mut usize) -> std::result::Result<Term, ParseError> {
    let mut p = Parser { src, pos: *pos };
    let t = p.term()?;
    *pos = p.pos;
    Ok(t)
}

/// Parses a single term.
pub fn parse_term(src: &str) -> std::result::Result<Term, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let t = p.term()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms() {
        let f = parse("S(x,y,z)").unwrap();
        assert_eq!(f, Formula::S(Term::var("x"), Term::var("y"), Term::var("z")));
        let g = parse("!(x in y)").unwrap();
        assert_eq!(g, Formula::not(Formula::Mem(Term::var("x"), Term::var("y"))));
    }

    #[test]
    fn precedence() {
        let f = parse("a = b & b = c | !a = c -> a in b -> true").unwrap();
        assert_eq!(
            f.to_string(),
            "((((a = b) & (b = c)) | !(a = c)) -> ((a in b) -> true))"
        );
        let q = parse("forall y. y in x & x = x").unwrap();
        assert_eq!(q.to_string(), "(forall y. ((y in x) & (x = x)))");
    }

    #[test]
    fn constants() {
        let f = parse("S(c8, c[x in x], y)").unwrap();
        let roundtrip = parse(&f.to_string()).unwrap();
        assert_eq!(f, roundtrip);
        assert!(parse("c8 = c7").is_err());
        assert!(parse("c[x = y] = c8").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x in").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse("forall in. x = x").unwrap_err();
        assert_eq!(e.pos, 7);
        assert!(parse("(x = y").is_err());
        assert!(parse("x = y )").is_err());
    }
}

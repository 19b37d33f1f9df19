//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar:
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' INT)*
//! base   := NUM | VAR | '(' expr ')'
//! NUM    := INT ['/' INT]
//! ```
//! `VAR` is `[a-zA-Z][a-zA-Z0-9_~]*`; the `~` extension admits generated arc
//! variable names such as `x~0_1`, and `NUM` admits fractions, so printed
//! polynomials always re-parse.

use num_bigint::BigInt;

use super::{Polynomial, Ring};
use crate::{Error, Result};

struct Parser<'a> {
    ring: &'a Ring,
    bytes: &'a [u8],
    pos: usize,
}

impl Polynomial {
    pub fn parse(ring: &Ring, input: &str) -> Result<Polynomial> {
        let mut p = Parser { ring, bytes: input.as_bytes(), pos: 0 };
        p.skip_ws();
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let negated = self.eat(b'-');
        let mut acc = self.term()?;
        if negated {
            acc = acc.neg_ref();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add_ref(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub_ref(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = acc.mul_ref(&f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let mut base = self.base()?;
        loop {
            self.skip_ws();
            if self.eat(b'^') {
                self.skip_ws();
                let n = self.integer()?;
                let exp: u32 = n
                    .try_into()
                    .map_err(|_| self.error("exponent out of range"))?;
                base = base.pow(exp);
            } else {
                return Ok(base);
            }
        }
    }

    fn base(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.bigint()?;
                if self.peek() == Some(b'/')
                    && self.bytes.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
                {
                    self.pos += 1;
                    let d = self.bigint()?;
                    if num_traits::Zero::is_zero(&d) {
                        return Err(self.error("zero denominator"));
                    }
                    let q = num_rational::BigRational::new(n, d);
                    return Ok(self.ring.constant(self.ring.field().from_rational(&q)?));
                }
                Ok(self.ring.constant(self.ring.field().from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.identifier();
                match self.ring.var_index(&name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(Error::UnknownVariable(name)),
                }
            }
            _ => Err(self.error("expected integer, variable, or '('")),
        }
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'~' {
                self.pos += 1;
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn bigint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        BigInt::parse_bytes(&self.bytes[start..self.pos], 10)
            .ok_or_else(|| self.error("bad integer"))
    }

    fn integer(&mut self) -> Result<u64> {
        let n = self.bigint()?;
        u64::try_from(n).map_err(|_| self.error("integer out of range"))
    }
}

/// Check a user-declared variable name against the strict grammar
/// `[a-zA-Z][a-zA-Z0-9_]*` (no `~`, which is reserved for arc variables).
pub fn valid_user_variable(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::super::{Field, MonomialOrder};
    use super::*;

    fn qring() -> Ring {
        Ring::with_vars(Field::rationals(), &["x", "y"]).unwrap()
    }

    #[test]
    fn parse_oracles() {
        let r = qring();
        let f = Polynomial::parse(&r, "x^2 - y^3").unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.total_degree(), 3);
        assert_eq!(f.display(), "x^2 - y^3");

        let g = Polynomial::parse(&r, "3*x").unwrap();
        assert_eq!(g.display(), "3*x");

        let h = Polynomial::parse(&r, "(x + y)^2 - (x^2 + 2*x*y + y^2)").unwrap();
        assert!(h.is_zero());

        let k = Polynomial::parse(&r, "2*x*(y - 1) + 2*x").unwrap();
        assert_eq!(k.display(), "2*x*y");

        let c = Polynomial::parse(&r, "0").unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn parse_mod_p_collapses() {
        let r3 = Ring::with_vars(Field::prime(3).unwrap(), &["x", "y"]).unwrap();
        let f = Polynomial::parse(&r3, "3*x + y").unwrap();
        assert_eq!(f.display(), "y");
    }

    #[test]
    fn leading_minus_and_powers() {
        let r = qring();
        let f = Polynomial::parse(&r, "-x + y").unwrap();
        assert_eq!(f.display(), "-x + y");
        // Chained exponent: (x^2)^3 = x^6.
        let g = Polynomial::parse(&r, "x^2^3").unwrap();
        assert_eq!(g.display(), "x^6");
    }

    #[test]
    fn parse_errors() {
        let r = qring();
        assert!(matches!(
            Polynomial::parse(&r, "x + z"),
            Err(Error::UnknownVariable(v)) if v == "z"
        ));
        assert!(matches!(Polynomial::parse(&r, "x +"), Err(Error::Parse { .. })));
        assert!(matches!(Polynomial::parse(&r, "(x"), Err(Error::Parse { .. })));
        assert!(matches!(Polynomial::parse(&r, "x y"), Err(Error::Parse { .. })));
        assert!(matches!(Polynomial::parse(&r, "x^-2"), Err(Error::Parse { .. })));
    }

    #[test]
    fn arc_variable_names_round_trip() {
        let r = Ring::with_vars(Field::rationals(), &["x~0_0", "x~0_1", "y~1_0"]).unwrap();
        let f = Polynomial::parse(&r, "2*x~0_0*x~0_1 - y~1_0^2").unwrap();
        assert_eq!(f.display(), "2*x~0_0*x~0_1 - y~1_0^2");
        let back = Polynomial::parse(&r, &f.display()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn strict_variable_grammar() {
        assert!(valid_user_variable("x"));
        assert!(valid_user_variable("xi_2"));
        assert!(valid_user_variable("Zeta9"));
        assert!(!valid_user_variable("2x"));
        assert!(!valid_user_variable("x~0_0"));
        assert!(!valid_user_variable(""));
        assert!(!valid_user_variable("_x"));
    }

    #[test]
    fn display_round_trip_property_sample() {
        // Deterministic spot check; the full property test lives with proptest.
        let r = qring();
        for src in ["x^3 - 2*x*y + 7", "-5", "y", "x*y^2 - x^2*y + 2/3*x"] {
            let f = Polynomial::parse(&r, src).unwrap();
            let printed = f.display();
            let again = Polynomial::parse(&r, &printed).unwrap();
            assert_eq!(again, f, "round trip failed for `{printed}`");
        }
        let _ = MonomialOrder::Lex;
    }
}

use num_bigint::BigInt;

use super::field::Field;
use super::poly::Poly;
use crate::text::ParseError;

/// Variable names of a polynomial ring over a field `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub vars: Vec<String>,
}

impl Ring {
    pub fn new(vars: &[&str]) -> Ring {
        Ring { vars: vars.iter().map(|s| s.to_string()).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Parses `QQ[x,y,z]`. The field prefix must be `field_name`.
    /// Errors carry columns relative to `s`, on line 1.
    pub fn parse_decl(s: &str, field_name: &str) -> Result<Ring, ParseError> {
        let s_trim = s.trim_end();
        let open = s_trim.find('[').ok_or_else(|| ParseError::new(1, 1, "expected `<field>[<vars>]`"))?;
        let field = s_trim[..open].trim();
        if field != field_name {
            return Err(ParseError::new(1, 1, format!("unsupported coefficient field `{field}`")));
        }
        if !s_trim.ends_with(']') {
            return Err(ParseError::new(1, s_trim.len() + 1, "expected `]`"));
        }
        let inner = &s_trim[open + 1..s_trim.len() - 1];
        let mut vars = Vec::new();
        for (off, v) in crate::text::split_top_level(inner, ',') {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(ParseError::new(1, open + 2 + off, format!("bad variable name `{v}`")));
            }
            if vars.contains(&v.to_string()) {
                return Err(ParseError::new(1, open + 2 + off, format!("duplicate variable `{v}`")));
            }
            vars.push(v.to_string());
        }
        Ok(Ring { vars })
    }

    pub fn decl<C: Field>(&self) -> String {
        format!("{}[{}]", C::name(), self.vars.join(","))
    }

    pub fn parse<C: Field>(&self, s: &str) -> Result<Poly<C>, ParseError> {
        parse_poly(s, &self.vars)
    }

    pub fn show<C: Field>(&self, p: &Poly<C>) -> String {
        p.display(&self.vars).to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(s[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::new(1, i + 1, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, C> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    _c: std::marker::PhantomData<C>,
}

impl<C: Field> Parser<'_, C> {
    fn n(&self) -> usize {
        self.vars.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0) + 1
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(1, self.col(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<C>, ParseError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<C>, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                let col = self.col();
                let d = self.factor()?;
                let c = d
                    .constant_value()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| ParseError::new(1, col, "division by a non-constant or zero"))?;
                acc = acc.scale(&c.inv());
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly<C>, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(e)) => {
                    let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly<C>, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = C::from_ratio(&n, &BigInt::from(1)).expect("integer");
                Ok(Poly::constant(self.n(), c))
            }
            Some(Tok::Ident(name)) => {
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| self.err(format!("unknown variable `{name}`")))?;
                self.pos += 1;
                Ok(Poly::var(self.n(), i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Parses `x0^2*x1 + x2^2 - 3/2*x0`. Errors report 1-based columns in `s`.
pub fn parse_poly<C: Field>(s: &str, vars: &[String]) -> Result<Poly<C>, ParseError> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, end: s.trim_end().len(), vars, _c: std::marker::PhantomData };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a comma-separated list, optionally wrapped in parentheses.
pub fn parse_poly_list<C: Field>(s: &str, vars: &[String]) -> Result<Vec<Poly<C>>, ParseError> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    let (inner, base) = if t.starts_with('(') && t.ends_with(')') && balanced_outer(t) {
        (&t[1..t.len() - 1], lead + 1)
    } else {
        (t, lead)
    };
    let mut out = Vec::new();
    for (off, piece) in crate::text::split_top_level(inner, ',') {
        let p = parse_poly(piece, vars).map_err(|e| ParseError::new(1, e.col + base + off, e.message))?;
        out.push(p);
    }
    Ok(out)
}

fn balanced_outer(t: &str) -> bool {
    let mut depth = 0;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i != t.len() - 1 {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::field::{Fp, Q};

    #[test]
    fn round_trip() {
        let r = Ring::parse_decl("QQ[x0,x1,x2]", "QQ").unwrap();
        let p: Poly<Q> = r.parse("x0^2*x1 + x2^2 - 3/2*x0").unwrap();
        assert_eq!(r.show(&p), "x0^2*x1 + x2^2 - 3/2*x0");
        let q: Poly<Q> = r.parse(&r.show(&p)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn precedence_and_parens() {
        let r = Ring::new(&["x", "y"]);
        let p: Poly<Q> = r.parse("-(x+y)^2 + 2*x*y").unwrap();
        assert_eq!(r.show(&p), "-x^2 - y^2");
        let q: Poly<Q> = r.parse("x/2 - -y").unwrap();
        assert_eq!(r.show(&q), "1/2*x + y");
    }

    #[test]
    fn errors_have_columns() {
        let r = Ring::new(&["x", "y"]);
        let e = r.parse::<Q>("x + zz").unwrap_err();
        assert_eq!(e.col, 5);
        let e = r.parse::<Q>("x +").unwrap_err();
        assert_eq!(e.col, 4);
        assert!(Ring::parse_decl("ZZ[x]", "QQ").is_err());
    }

    #[test]
    fn finite_field_coefficients() {
        let r = Ring::new(&["x"]);
        let p: Poly<Fp<5>> = r.parse("7*x + 1/2").unwrap();
        assert_eq!(r.show(&p), "2*x + 3");
    }

    #[test]
    fn lists() {
        let r = Ring::new(&["x", "y"]);
        let v: Vec<Poly<Q>> = parse_poly_list("(x^2, 2*x*y, (x+y))", &r.vars).unwrap();
        assert_eq!(v.len(), 3);
    }
}

//! The ring/polynomial DSL.
//!
//! ```text
//! ring  ::= ("Q" | "F"prime | "F"prime"(t)") "[" ident ("," ident)* "]"
//!           [ "/" "(" poly (";" poly)* ")" ]
//! poly  ::= term (("+" | "-") term)*
//! term  ::= unary (("*" | "/") unary)*
//! unary ::= ("+" | "-") unary | atom ["^" integer]
//! atom  ::= integer | ident | "(" poly ")"
//! ```
//!
//! Division is only allowed by nonzero constants. Over `F_p(t)` the
//! identifier `t` denotes the field parameter. Whitespace is ignored.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::poly::Polynomial;
use crate::ring::PolyRing;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn syntax(input: &str, position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        message: message.into(),
        position,
        input: input.to_string(),
        marker: " ".repeat(input[..position.min(input.len())].chars().count()),
    }
}

fn lex(input: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let end = chars.get(i).map(|x| x.0).unwrap_or(input.len());
            let digits = &input[chars[start].0..end];
            toks.push((Tok::Int(digits.parse().unwrap()), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = chars.get(i).map(|x| x.0).unwrap_or(input.len());
            toks.push((Tok::Ident(input[chars[start].0..end].to_string()), pos));
        } else if "+-*/^()[],;".contains(c) {
            toks.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(syntax(input, pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(Lexer { toks, end: input.len() })
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    /// Offset of `input` inside the text the user typed, for error spans.
    base: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, base: usize) -> Result<Self> {
        let Lexer { toks, end } = lex(input)?;
        Ok(Parser { input, toks, pos: 0, end, base })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        match syntax(self.input, self.here(), msg) {
            Error::Syntax { message, position, input, marker } => {
                Error::Syntax { message, position: position + self.base, input, marker }
            }
            e => e,
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn poly(&mut self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        let mut acc = self.term(ring)?;
        loop {
            if self.eat_sym('+') {
                acc = acc.add(&self.term(ring)?);
            } else if self.eat_sym('-') {
                acc = acc.sub(&self.term(ring)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        let mut acc = self.unary(ring)?;
        loop {
            if self.eat_sym('*') {
                acc = acc.mul(&self.unary(ring)?);
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.here();
                self.pos += 1;
                let d = self.unary(ring)?;
                let c = d.as_constant().ok_or_else(|| {
                    let mut e = self.err("division by a non-constant");
                    if let Error::Syntax { position, .. } = &mut e {
                        *position = at + self.base;
                    }
                    e
                })?;
                let inv = ring.field().inv(&c).ok_or_else(|| {
                    Error::NotInField(format!("division by zero in {} at {}", ring.field(), at + self.base))
                })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        if self.eat_sym('-') {
            return Ok(self.unary(ring)?.neg());
        }
        if self.eat_sym('+') {
            return self.unary(ring);
        }
        let base = self.atom(ring)?;
        if self.eat_sym('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    let k = n.to_u32().ok_or_else(|| self.err("exponent too large"))?;
                    self.pos += 1;
                    Ok(base.pow(k))
                }
                _ => Err(self.err("expected non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(ring, ring.field().from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = ring.var_index(&name) {
                    Ok(Polynomial::var(ring, i))
                } else if name == "t" && ring.field().parameter().is_some() {
                    Ok(Polynomial::constant(ring, ring.field().parameter().unwrap()))
                } else {
                    Err(Error::UnknownVariable { name, position: at + self.base })
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let p = self.poly(ring)?;
                self.expect_sym(')')?;
                Ok(p)
            }
            Some(_) => Err(self.err("expected a number, variable or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse a single polynomial in `ring`.
pub fn parse_poly(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    parse_poly_at(text, ring, 0)
}

fn parse_poly_at(text: &str, ring: &Arc<PolyRing>, base: usize) -> Result<Polynomial> {
    let mut p = Parser::new(text, base)?;
    let out = p.poly(ring)?;
    if !p.at_end() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse a `;`-separated generator list. Blank input is the empty list.
pub fn parse_poly_list(text: &str, ring: &Arc<PolyRing>) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(';') {
        if !piece.trim().is_empty() {
            out.push(parse_poly_at(piece, ring, offset)?);
        }
        offset += piece.len() + 1;
    }
    Ok(out)
}

/// A field name on its own: `Q`, `F7` or `F2(t)`.
pub fn parse_field_name(text: &str) -> Result<CoeffField> {
    let text = text.trim();
    let (name, rest) = match text.find('(') {
        Some(i) => (&text[..i], &text[i..]),
        None => (text, ""),
    };
    if !rest.is_empty() && rest.replace(' ', "") != "(t)" {
        return Err(Error::InvalidField(format!("`{text}`")));
    }
    parse_field(name.trim(), rest)
        .ok_or_else(|| Error::InvalidField(format!("`{text}` (expected Q, Fp or Fp(t) with p prime)")))
}

fn parse_field(name: &str, rest: &str) -> Option<CoeffField> {
    if name == "Q" {
        return Some(CoeffField::Rational);
    }
    let digits = name.strip_prefix('F')?;
    let p: u64 = digits.parse().ok()?;
    if rest.trim_start().starts_with("(t)") {
        CoeffField::rational_function(p).ok()
    } else {
        CoeffField::prime(p).ok()
    }
}

/// A parsed ring description: the ambient polynomial ring and the
/// relation generators (possibly none).
#[derive(Clone, Debug)]
pub struct RingSpec {
    pub ring: Arc<PolyRing>,
    pub relations: Vec<Polynomial>,
}

/// Parse `field[vars]` optionally followed by `/(rel; rel; ...)`.
pub fn parse_ring(text: &str) -> Result<RingSpec> {
    let bracket = text.find('[').ok_or_else(|| syntax(text, text.len(), "expected `[` after field"))?;
    let head = text[..bracket].trim();
    let (name, tail) = match head.find('(') {
        Some(i) => (&head[..i], &head[i..]),
        None => (head, ""),
    };
    if !tail.is_empty() && tail.replace(' ', "") != "(t)" {
        return Err(syntax(text, 0, "unknown field suffix"));
    }
    let field = parse_field(name.trim(), tail)
        .ok_or_else(|| Error::InvalidField(format!("`{}` (expected Q, Fp or Fp(t) with p prime)", head)))?;
    let close =
        text[bracket..].find(']').map(|i| i + bracket).ok_or_else(|| syntax(text, text.len(), "expected `]`"))?;
    let mut vars = Vec::new();
    let mut offset = bracket + 1;
    for piece in text[bracket + 1..close].split(',') {
        let name = piece.trim();
        let valid = !name.is_empty()
            && name.chars().next().map(|c| c.is_ascii_alphabetic() || c == '_').unwrap_or(false)
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(syntax(text, offset, format!("invalid variable name `{name}`")));
        }
        vars.push(name.to_string());
        offset += piece.len() + 1;
    }
    let ring = PolyRing::new(field, vars)?;
    let rest = &text[close + 1..];
    let trimmed = rest.trim();
    if trimmed.is_empty() {
        return Ok(RingSpec { ring, relations: Vec::new() });
    }
    let slash = rest.find('/').filter(|&i| rest[..i].trim().is_empty());
    let slash = slash.ok_or_else(|| syntax(text, close + 1, "expected `/(relations)`"))?;
    let after = &rest[slash + 1..];
    let open = after.find('(').filter(|&i| after[..i].trim().is_empty());
    let open = open.ok_or_else(|| syntax(text, close + 2 + slash, "expected `(` after `/`"))?;
    let body_start = close + 1 + slash + 1 + open + 1;
    let body_end = text.rfind(')').filter(|&i| i >= body_start && text[i + 1..].trim().is_empty());
    let body_end = body_end.ok_or_else(|| syntax(text, text.len(), "expected closing `)`"))?;
    let body = &text[body_start..body_end];
    let mut relations = Vec::new();
    let mut pos = body_start;
    for piece in body.split(';') {
        relations.push(parse_poly_at(piece, &ring, pos).map_err(|e| rebase(e, text))?);
        pos += piece.len() + 1;
    }
    Ok(RingSpec { ring, relations })
}

/// Re-render a syntax error against the full input it came from.
fn rebase(e: Error, full: &str) -> Error {
    match e {
        Error::Syntax { message, position, .. } => syntax(full, position, message),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q_ring(vars: &str) -> Arc<PolyRing> {
        PolyRing::parse_vars(CoeffField::Rational, vars).unwrap()
    }

    #[test]
    fn fermat_cubic_has_three_terms() {
        let r = q_ring("x,y,z");
        assert_eq!(parse_poly("x^3+y^3+z^3", &r).unwrap().len(), 3);
    }

    #[test]
    fn zero_parses_to_empty_polynomial() {
        let r = q_ring("x");
        assert!(parse_poly("0", &r).unwrap().is_zero());
    }

    #[test]
    fn generator_of_the_xu_yv_algebra() {
        let r = q_ring("x,y,u,v");
        assert_eq!(parse_poly("x*v+y*u", &r).unwrap().len(), 2);
    }

    #[test]
    fn syntax_error_reports_position() {
        let r = q_ring("x,y");
        match parse_poly("x + * y", &r) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_variable() {
        let r = q_ring("x,y");
        assert_eq!(parse_poly("x + w", &r), Err(Error::UnknownVariable { name: "w".into(), position: 4 }));
    }

    #[test]
    fn half_is_not_in_f2() {
        let r = PolyRing::parse_vars(CoeffField::prime(2).unwrap(), "x").unwrap();
        assert!(matches!(parse_poly("1/2*x", &r), Err(Error::NotInField(_))));
        let q = q_ring("x");
        assert_eq!(parse_poly("1/2*x", &q).unwrap().to_string(), "1/2*x");
    }

    #[test]
    fn ring_with_relations() {
        let spec = parse_ring("F2(t)[x,y,z]/(z^4+x*y*z^2+x^3*z+y^3*z+t*x^2*y^2)").unwrap();
        assert_eq!(spec.ring.nvars(), 3);
        assert_eq!(spec.relations.len(), 1);
        assert_eq!(spec.relations[0].len(), 5);
        let spec = parse_ring("Q[x,y,z,u,v]/(x^3+y^3+z^3; z^2-u*x-v*y)").unwrap();
        assert_eq!(spec.relations.len(), 2);
        assert!(parse_ring("F4[x]").is_err());
        assert!(parse_ring("Q[x,x]").is_err());
        assert!(matches!(parse_ring("Q[x]/(x+q)"), Err(Error::UnknownVariable { position: 8, .. })));
    }

    #[test]
    fn field_names() {
        assert_eq!(parse_field_name("Q").unwrap(), CoeffField::Rational);
        assert_eq!(parse_field_name(" F7 ").unwrap(), CoeffField::prime(7).unwrap());
        assert_eq!(parse_field_name("F2(t)").unwrap(), CoeffField::rational_function(2).unwrap());
        assert!(parse_field_name("F4").is_err());
        assert!(parse_field_name("F2(s)").is_err());
    }

    #[test]
    fn list_parsing() {
        let r = q_ring("x,y");
        assert_eq!(parse_poly_list("x^2; x*y; y^3", &r).unwrap().len(), 3);
        assert!(parse_poly_list("  ", &r).unwrap().is_empty());
    }

    fn arb_poly(field: CoeffField) -> impl Strategy<Value = Polynomial> {
        let ring = PolyRing::parse_vars(field, "x,y,z").unwrap();
        proptest::collection::vec((proptest::collection::vec(0u32..4, 3), -20i64..20, 1i64..5), 0..6).prop_map(
            move |terms| {
                let f = ring.field().clone();
                Polynomial::from_terms(
                    &ring,
                    terms.into_iter().map(|(e, n, d)| {
                        let c = match &f {
                            CoeffField::Rational => f.div(&f.from_i64(n), &f.from_i64(d)).unwrap(),
                            _ => f.from_i64(n),
                        };
                        (crate::monomial::Monomial::from_exponents(&e), c)
                    }),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn format_round_trip_rational(f in arb_poly(CoeffField::Rational)) {
            prop_assert_eq!(parse_poly(&f.to_string(), f.ring()).unwrap(), f);
        }

        #[test]
        fn format_round_trip_f5(f in arb_poly(CoeffField::prime(5).unwrap())) {
            prop_assert_eq!(parse_poly(&f.to_string(), f.ring()).unwrap(), f);
        }

        #[test]
        fn format_round_trip_f2t(f in arb_poly(CoeffField::rational_function(2).unwrap()), k in 0u32..3) {
            // mix in parameter-valued coefficients
            let r = f.ring().clone();
            let t = Polynomial::constant(&r, r.field().parameter().unwrap());
            let tt = t.add(&Polynomial::one(&r));
            let g = f.mul(&t.pow(k)).add(&Polynomial::constant(&r, r.field().inv(&tt.as_constant().unwrap()).unwrap()));
            prop_assert_eq!(parse_poly(&g.to_string(), &r).unwrap(), g);
        }
    }
}

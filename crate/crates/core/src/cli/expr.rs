//! Element expressions: `2*e.e* - v`, `(1-2i)*a.b*`, `1/2i*c`.
//!
//! ```text
//! expr   := ["+" | "-"] term (("+" | "-") term)*
//! term   := coeff "*" factor ("." factor)* | factor ("." factor)* | coeff
//! factor := name ["*"]
//! coeff  := number ["i"] | "(" ["-"] number ("+" | "-") number "i" ")"
//! number := digits ["/" digits | "." digits]
//! ```
//!
//! A bare coefficient stands for that multiple of the unit.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lpa::{LeavittAlgebra, LpaElement};
use crate::scalar::{parse_rational, rational_to_string, GaussianRational};

/// Byte range in the source text. Spans do not take part in AST equality.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Real(BigRational),
    Imag(BigRational),
    Complex(BigRational, BigRational),
}

impl Coeff {
    pub fn value(&self) -> GaussianRational {
        match self {
            Coeff::Real(q) => GaussianRational::new(q.clone(), BigRational::zero()),
            Coeff::Imag(q) => GaussianRational::new(BigRational::zero(), q.clone()),
            Coeff::Complex(a, b) => GaussianRational::new(a.clone(), b.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub name: String,
    pub star: bool,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub negative: bool,
    pub coeff: Option<Coeff>,
    pub factors: Vec<Factor>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Real(q) => write!(f, "{}", rational_to_string(q)),
            Coeff::Imag(q) => write!(f, "{}i", rational_to_string(q)),
            Coeff::Complex(a, b) if b.is_negative() => {
                write!(f, "({}-{}i)", rational_to_string(a), rational_to_string(&-b.clone()))
            }
            Coeff::Complex(a, b) => write!(f, "({}+{}i)", rational_to_string(a), rational_to_string(b)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if let Some(c) = &t.coeff {
                write!(f, "{c}")?;
                if !t.factors.is_empty() {
                    write!(f, "*")?;
                }
            }
            for (k, x) in t.factors.iter().enumerate() {
                if k > 0 {
                    write!(f, ".")?;
                }
                write!(f, "{}{}", x.name, if x.star { "*" } else { "" })?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        self.src[self.pos..].chars().nth(1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>, start: usize) -> Result<T> {
        let end = (self.pos.max(start + 1)).min(self.src.len().max(start));
        Err(Error::parse(msg, start, end))
    }

    fn expected(&self, what: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        let end = self.pos + self.peek().map_or(0, char::len_utf8);
        Error::parse(format!("expected {what}, found {found}"), self.pos, end)
    }

    fn number(&mut self, allow_sign: bool) -> Result<BigRational> {
        let start = self.pos;
        if allow_sign {
            self.eat('-');
        }
        let digits = |p: &mut Parser| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.bump();
            }
            p.pos > s
        };
        if !digits(self) {
            return Err(self.expected("a number"));
        }
        if matches!(self.peek(), Some('/' | '.')) && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            digits(self);
        }
        parse_rational(&self.src[start..self.pos]).or_else(|_| self.err("malformed coefficient", start))
    }

    fn coeff(&mut self) -> Result<Coeff> {
        let start = self.pos;
        if self.eat('(') {
            self.ws();
            let a = self.number(true)?;
            self.ws();
            let negative = match self.peek() {
                Some('+') => false,
                Some('-') => true,
                _ => return Err(self.expected("`+` or `-` in a complex coefficient")),
            };
            self.bump();
            self.ws();
            let b = self.number(false)?;
            if !self.eat('i') {
                return Err(self.expected("`i`"));
            }
            self.ws();
            if !self.eat(')') {
                return Err(self.expected("`)`"));
            }
            let b = if negative { -b } else { b };
            if b.is_zero() {
                return self.err("complex coefficient with zero imaginary part", start);
            }
            return Ok(Coeff::Complex(a, b));
        }
        let q = self.number(false)?;
        if self.peek() == Some('i') && !self.peek2().is_some_and(is_name_char) {
            self.bump();
            return Ok(Coeff::Imag(q));
        }
        Ok(Coeff::Real(q))
    }

    fn factor(&mut self) -> Result<Factor> {
        let start = self.pos;
        if !self.peek().is_some_and(is_name_start) {
            return Err(self.expected("a generator name"));
        }
        while self.peek().is_some_and(is_name_char) {
            self.bump();
        }
        let name = self.src[start..self.pos].to_string();
        let end = self.pos;
        let star = self.eat('*');
        Ok(Factor { name, star, span: Span { start, end: if star { end + 1 } else { end } } })
    }

    fn term(&mut self, negative: bool) -> Result<Term> {
        let start = self.pos;
        let mut coeff = None;
        if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '(') {
            coeff = Some(self.coeff()?);
            self.ws();
            if !self.eat('*') {
                return Ok(Term { negative, coeff, factors: vec![], span: Span { start, end: self.pos } });
            }
            self.ws();
        }
        let mut factors = vec![self.factor()?];
        loop {
            self.ws();
            if !self.eat('.') {
                break;
            }
            self.ws();
            factors.push(self.factor()?);
        }
        let end = factors.last().map_or(self.pos, |f| f.span.end);
        Ok(Term { negative, coeff, factors, span: Span { start, end } })
    }

    fn expr(&mut self) -> Result<Expr> {
        self.ws();
        if self.peek().is_none() {
            return Err(self.expected("an expression"));
        }
        let mut negative = false;
        if self.eat('-') {
            negative = true;
        } else {
            self.eat('+');
        }
        self.ws();
        let mut terms = vec![self.term(negative)?];
        loop {
            self.ws();
            match self.peek() {
                None => break,
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(_) => return Err(self.expected("`+`, `-` or end of input")),
            }
            self.bump();
            self.ws();
            terms.push(self.term(negative)?);
        }
        Ok(Expr { terms })
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    Parser { src: text, pos: 0 }.expr()
}

/// Resolves names against the algebra's graph and reduces to normal form.
pub fn lower(expr: &Expr, alg: &LeavittAlgebra) -> Result<LpaElement> {
    let mut acc = LpaElement::zero();
    for t in &expr.terms {
        let mut c = t.coeff.as_ref().map_or_else(|| GaussianRational::from_integer(1), Coeff::value);
        if t.negative {
            c = -c;
        }
        let mut factors = Vec::with_capacity(t.factors.len());
        for f in &t.factors {
            let g = alg
                .generator(&f.name, f.star)
                .map_err(|_| Error::parse(format!("unknown name `{}`", f.name), f.span.start, f.span.end))?;
            factors.push(g);
        }
        let x = if factors.is_empty() { alg.one() } else { alg.product(factors.iter()) };
        acc = acc + x.scale(&c);
    }
    Ok(acc)
}

pub fn parse_element(text: &str, alg: &LeavittAlgebra) -> Result<LpaElement> {
    lower(&parse_expr(text)?, alg)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::quiver::samples::*;

    fn span_of(text: &str, alg: &LeavittAlgebra) -> (usize, usize) {
        match parse_element(text, alg) {
            Err(Error::Parse { start, end, .. }) => (start, end),
            other => panic!("expected a parse error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn grammar_examples() {
        let alg = LeavittAlgebra::new(a2());
        let v = parse_element("v", &alg).unwrap();
        assert!(alg.equals(&v, &alg.vertex(alg.quiver().vertex_id("v").unwrap())));
        let x = parse_element("2*e.e* - v", &alg).unwrap();
        assert!(alg.equals(&x, &v));
        let alg = LeavittAlgebra::new(r2());
        assert!(parse_element("a*.b", &alg).unwrap().is_zero());
    }

    #[test]
    fn coefficients() {
        let alg = LeavittAlgebra::new(r1());
        let c = alg.edge(alg.quiver().edge_id("c").unwrap());
        let cases = [
            ("3/2*c", GaussianRational::from_ratio(3, 2)),
            ("1.5*c", GaussianRational::from_ratio(3, 2)),
            ("2i*c", GaussianRational::from_parts((0, 1), (2, 1))),
            ("(1-2i)*c", GaussianRational::from_parts((1, 1), (-2, 1))),
            ("(-1/2 + 3i)*c", GaussianRational::from_parts((-1, 2), (3, 1))),
            ("-c", GaussianRational::from_integer(-1)),
        ];
        for (text, k) in cases {
            assert!(alg.equals(&parse_element(text, &alg).unwrap(), &c.scale(&k)), "{text}");
        }
        let five = parse_element("5", &alg).unwrap();
        assert!(alg.equals(&five, &alg.scalar(GaussianRational::from_integer(5))));
    }

    #[test]
    fn error_spans() {
        let alg = LeavittAlgebra::new(a2());
        assert_eq!(span_of("e + zz", &alg), (4, 6));
        assert_eq!(span_of("2*e + q*", &alg), (6, 8));
        assert_eq!(span_of("e +", &alg), (3, 3));
        assert_eq!(span_of("e ) v", &alg), (2, 3));
        assert_eq!(span_of("(1+2)*e", &alg), (4, 5));
        assert_eq!(span_of("2*", &alg), (2, 2));
        assert_eq!(span_of("", &alg), (0, 0));
        assert_eq!(span_of("e..v", &alg), (2, 3));
    }

    #[test]
    fn formatted_elements_reparse() {
        for q in [a2(), r2(), t2(), two_cycle()] {
            let alg = LeavittAlgebra::new(q);
            for x in crate::experiments::sample_elements(&alg, 25, 3) {
                let back = parse_element(&alg.format(&x), &alg).unwrap();
                assert!(alg.equals(&x, &back), "{}", alg.format(&x));
            }
        }
    }

    fn rational() -> impl Strategy<Value = BigRational> {
        (0i64..20, 1i64..6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
    }

    fn coeff() -> impl Strategy<Value = Coeff> {
        prop_oneof![
            rational().prop_map(Coeff::Real),
            rational().prop_map(Coeff::Imag),
            (rational(), rational(), any::<bool>(), any::<bool>()).prop_map(|(a, b, sa, sb)| {
                let b = if b.is_zero() { BigRational::from_integer(1.into()) } else { b };
                Coeff::Complex(if sa { -a } else { a }, if sb { -b } else { b })
            }),
        ]
    }

    fn factor() -> impl Strategy<Value = Factor> {
        (prop::sample::select(vec!["a", "b", "v", "e1", "x_2", "w'"]), any::<bool>()).prop_map(|(n, star)| Factor {
            name: n.to_string(),
            star,
            span: Span::default(),
        })
    }

    fn term() -> impl Strategy<Value = Term> {
        (any::<bool>(), prop::option::of(coeff()), prop::collection::vec(factor(), 0..4))
            .prop_filter("a term needs a coefficient or a factor", |(_, c, f)| c.is_some() || !f.is_empty())
            .prop_map(|(negative, coeff, factors)| Term { negative, coeff, factors, span: Span::default() })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn print_parse_round_trip(terms in prop::collection::vec(term(), 1..5)) {
            let e = Expr { terms };
            let printed = e.to_string();
            let back = parse_expr(&printed).unwrap();
            prop_assert_eq!(&back, &e, "{}", printed);
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}

//! Sparse multivariate polynomials over [`Scalar`] with terms kept in descending order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ring::{Monomial, Ring};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Polynomial {
        Polynomial::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Ring, c: i64) -> Polynomial {
        Polynomial::constant(ring, Scalar::from_i64(ring.field(), c))
    }

    pub fn term(ring: &Ring, m: Monomial, c: Scalar) -> Polynomial {
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn monomial(ring: &Ring, m: Monomial) -> Polynomial {
        Polynomial::term(ring, m, Scalar::one(ring.field()))
    }

    pub fn var(ring: &Ring, i: usize) -> Polynomial {
        Polynomial::monomial(ring, Monomial::var(ring.nvars(), i))
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(ring: &Ring, terms: Vec<(Monomial, Scalar)>) -> Polynomial {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.cmp_monomials(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    /// Maximal weighted degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.iter().map(|(m, _)| self.ring.degree(m)).max()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.iter().map(|(m, _)| self.ring.degree(m)).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn arith(&self, other: &Polynomial, op: ArithOp) -> Result<Polynomial> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
        })
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.combine(other, true)
    }

    fn combine(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == other.terms.len() {
                Ordering::Greater
            } else {
                self.ring.cmp_monomials(&self.terms[i].0, &other.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { c.neg() } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        self.terms[i].1.sub(&other.terms[j].1)
                    } else {
                        self.terms[i].1.add(&other.terms[j].1)
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                acc.push((m1.mul(m2), c1.mul(c2)));
            }
        }
        Polynomial::from_terms(&self.ring, acc)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect(),
        }
    }

    /// Multiplies by `c * m`; the term order is preserved by a monomial order.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (n.mul(m), d.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::from_i64(&self.ring, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().unwrap()),
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let field = self.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps()[i] > 0)
            .map(|(m, c)| {
                let mut e = m.exps().to_vec();
                let k = e[i];
                e[i] -= 1;
                (Monomial::new(e), c.mul(&Scalar::from_i64(field, k as i64)))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Terms of weighted degree exactly `d`.
    pub fn homogeneous_part(&self, d: i64) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.ring.degree(m) == d)
                .cloned()
                .collect(),
        }
    }

    /// Re-expresses the polynomial in another ring with the same number of variables.
    pub fn to_ring(&self, ring: &Ring) -> Polynomial {
        assert_eq!(ring.nvars(), self.ring.nvars());
        Polynomial::from_terms(ring, self.terms.clone())
    }

    /// Renames variable `i` to variable `perm[i]` inside `ring`.
    pub fn permute_vars(&self, ring: &Ring, perm: &[usize]) -> Polynomial {
        Polynomial::from_terms(
            ring,
            self.terms
                .iter()
                .map(|(m, c)| (m.permuted(perm), c.clone()))
                .collect(),
        )
    }

    /// Parses the ideal-file polynomial grammar. `line` and `column` locate the text for errors.
    pub fn parse_at(ring: &Ring, text: &str, line: usize, column: usize) -> Result<Polynomial> {
        Parser {
            ring,
            chars: text.chars().collect(),
            pos: 0,
            line,
            column,
        }
        .polynomial()
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Polynomial> {
        Polynomial::parse_at(ring, text, 1, 1)
    }
}

struct Parser<'a> {
    ring: &'a Ring,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Parser<'_> {
    fn err(&self, message: String) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column + self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Some(s.parse().unwrap())
    }

    fn polynomial(mut self) -> Result<Polynomial> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut sign = 1;
            match self.peek() {
                None if first => return Err(self.err("empty polynomial".into())),
                None => break,
                Some('+') => {
                    self.pos += 1;
                }
                Some('-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(_) if first => {}
                Some(c) => return Err(self.err(format!("expected `+` or `-`, found `{c}`"))),
            }
            first = false;
            let (m, mut c) = self.term()?;
            if sign < 0 {
                c = c.neg();
            }
            terms.push((m, c));
        }
        Ok(Polynomial::from_terms(self.ring, terms))
    }

    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        let field = self.ring.field();
        let mut coeff = Scalar::one(field);
        let mut exps = vec![0u32; self.ring.nvars()];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer().unwrap();
                    let mut value = Scalar::from_bigint(field, &num);
                    if self.peek() == Some('/') {
                        self.pos += 1;
                        let den = self
                            .integer()
                            .ok_or_else(|| self.err("expected denominator".into()))?;
                        let d = Scalar::from_bigint(field, &den);
                        if d.is_zero() {
                            return Err(self.err("zero denominator".into()));
                        }
                        value = match field {
                            Field::Rational => Scalar::rational(BigRational::new(num, den)),
                            Field::Prime(_) => value.div(&d),
                        };
                    }
                    coeff = coeff.mul(&value);
                }
                Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                    let start = self.pos;
                    while self.pos < self.chars.len()
                        && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
                    {
                        self.pos += 1;
                    }
                    let name: String = self.chars[start..self.pos].iter().collect();
                    let idx = self.ring.var_index(&name).ok_or_else(|| Error::Parse {
                        line: self.line,
                        column: self.column + start,
                        message: format!("unknown variable `{name}`"),
                    })?;
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let k = self
                            .integer()
                            .ok_or_else(|| self.err("expected exponent after `^`".into()))?;
                        e = u32::try_from(&k).map_err(|_| self.err("exponent too large".into()))?;
                    }
                    exps[idx] = exps[idx].checked_add(e).ok_or(Error::Overflow)?;
                }
                Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
                None => return Err(self.err("unexpected end of polynomial".into())),
            }
            factors += 1;
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
                _ => break,
            }
        }
        debug_assert!(factors > 0);
        Ok((Monomial::new(exps), coeff))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { c.neg() } else { c.clone() };
            if k > 0 {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            } else if negative {
                write!(f, "-")?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.names()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.names()[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

//! Weighted polynomial rings, monomials and the weighted degree reverse-lexicographic order.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedRing {
    names: Vec<String>,
    weights: Vec<u32>,
    field: Field,
}

pub type Ring = Arc<GradedRing>;

impl GradedRing {
    pub fn new(names: Vec<String>, weights: Vec<u32>, field: Field) -> Result<Ring> {
        if names.is_empty() {
            return Err(Error::Malformed("a ring needs at least one variable".into()));
        }
        if names.len() != weights.len() {
            return Err(Error::Malformed(format!(
                "{} variables but {} weights",
                names.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| **w == 0) {
            return Err(Error::Malformed(format!("weight {w} is not positive")));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Malformed(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Arc::new(GradedRing {
            names,
            weights,
            field,
        }))
    }

    /// Standard-graded ring with the given variable names.
    pub fn standard(names: &[&str], field: Field) -> Result<Ring> {
        GradedRing::new(
            names.iter().map(|s| s.to_string()).collect(),
            vec![1; names.len()],
            field,
        )
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_standard_graded(&self) -> bool {
        self.weights.iter().all(|w| *w == 1)
    }

    pub fn max_weight(&self) -> i64 {
        *self.weights.iter().max().unwrap() as i64
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The same variables with different weights.
    pub fn with_weights(&self, weights: Vec<u32>) -> Result<Ring> {
        GradedRing::new(self.names.clone(), weights, self.field)
    }

    pub fn weighted_degree(&self, m: &Monomial) -> Result<i64> {
        if m.exps.len() != self.nvars() {
            return Err(Error::Malformed(format!(
                "monomial has {} exponents, ring has {} variables",
                m.exps.len(),
                self.nvars()
            )));
        }
        Ok(self.degree(m))
    }

    /// Weighted degree; the exponent length is assumed correct.
    pub fn degree(&self, m: &Monomial) -> i64 {
        m.exps
            .iter()
            .zip(&self.weights)
            .map(|(e, w)| *e as i64 * *w as i64)
            .sum()
    }

    /// Weighted degree first, ties broken reverse-lexicographically.
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.degree(a)
            .cmp(&self.degree(b))
            .then_with(|| revlex(a, b))
    }

    pub fn monomial_order_cmp(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        self.weighted_degree(a)?;
        self.weighted_degree(b)?;
        Ok(self.cmp_monomials(a, b))
    }

    /// All monomials of weighted degree exactly `d`, largest first.
    pub fn monomials_of_degree(&self, d: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        let mut exps = vec![0u32; self.nvars()];
        self.fill_degree(0, d, &mut exps, &mut out);
        out.sort_by(|a, b| self.cmp_monomials(b, a));
        out
    }

    fn fill_degree(&self, i: usize, rest: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.nvars() {
            if rest == 0 {
                out.push(Monomial { exps: exps.clone() });
            }
            return;
        }
        let w = self.weights[i] as i64;
        let mut e = 0;
        while e * w <= rest {
            exps[i] = e as u32;
            self.fill_degree(i + 1, rest - e * w, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }

    /// All monomials of weighted degree `< bound`, in increasing order.
    pub fn monomials_below(&self, bound: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..bound {
            let mut piece = self.monomials_of_degree(d);
            piece.reverse();
            out.extend(piece);
        }
        out
    }
}

fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.exps.iter().zip(&b.exps).rev() {
        if x != y {
            // the monomial with the smaller exponent in the last differing variable is larger
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Monomial {
        Monomial { exps: vec![0; n] }
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }

    pub fn total_exponent(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("exponent overflow")
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] = exps[i].checked_add(1).expect("exponent overflow");
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| b - a).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow_var(n: usize, i: usize, e: u32) -> Monomial {
        let mut exps = vec![0; n];
        exps[i] = e;
        Monomial { exps }
    }

    /// Exponents permuted so that variable `i` moves to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut exps = vec![0; self.exps.len()];
        for (i, e) in self.exps.iter().enumerate() {
            exps[perm[i]] = *e;
        }
        Monomial { exps }
    }
}

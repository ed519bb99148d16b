//! Finite-dimensional quotients `S/I`: standard monomials, Hilbert functions,
//! multiplication action and degree filtrations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::IdealPresentation;
use crate::linalg::{axpy, kernel_of_columns, Echelon, ReducedBasis, SparseVec};
use crate::poly::Polynomial;
use crate::ring::{Monomial, Ring};
use crate::scalar::{Field, Scalar};
use crate::series::Series;

/// Standard-monomial basis of `S/I` with the multiplication action of the variables.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    ring: Ring,
    ideal: IdealPresentation,
    monomials: Vec<Monomial>,
    degrees: Vec<i64>,
    index: HashMap<Monomial, usize>,
    mult: Vec<Vec<SparseVec>>,
    homogeneous: bool,
    origin_supported: bool,
}

pub fn quotient_basis(ideal: &IdealPresentation) -> Result<QuotientBasis> {
    let ring = ideal.ring().clone();
    let n = ring.nvars();
    let leads = ideal.leading_monomials();
    let unit = leads.iter().any(|m| m.is_one());
    if !unit {
        for i in 0..n {
            let pure = leads.iter().any(|m| {
                m.exps()
                    .iter()
                    .enumerate()
                    .all(|(k, &e)| (k == i) == (e > 0))
            });
            if !pure {
                return Err(Error::NotZeroDimensional(ring.names()[i].clone()));
            }
        }
    }
    let is_standard = |m: &Monomial| !leads.iter().any(|l| l.divides(m));
    let mut monomials = Vec::new();
    if !unit {
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![Monomial::one(n)];
        seen.insert(Monomial::one(n));
        while let Some(m) = queue.pop() {
            for i in 0..n {
                let next = m.mul_var(i);
                if is_standard(&next) && seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
            monomials.push(m);
        }
    }
    monomials.sort_by(|a, b| {
        ring.degree(a)
            .cmp(&ring.degree(b))
            .then_with(|| ring.cmp_monomials(a, b))
    });
    let degrees: Vec<i64> = monomials.iter().map(|m| ring.degree(m)).collect();
    let index: HashMap<Monomial, usize> = monomials
        .iter()
        .enumerate()
        .map(|(k, m)| (m.clone(), k))
        .collect();
    let field = ring.field();
    let mut mult = vec![Vec::with_capacity(monomials.len()); n];
    for (i, row) in mult.iter_mut().enumerate() {
        for m in &monomials {
            let next = m.mul_var(i);
            let coords = match index.get(&next) {
                Some(&k) => vec![(k, Scalar::one(field))],
                None => {
                    let nf = ideal.normal_form(&Polynomial::monomial(&ring, next));
                    poly_coordinates(&index, &nf)
                }
            };
            row.push(coords);
        }
    }
    let mut q = QuotientBasis {
        ring: ring.clone(),
        ideal: ideal.clone(),
        monomials,
        degrees,
        index,
        mult,
        homogeneous: ideal.is_homogeneous(),
        origin_supported: true,
    };
    q.origin_supported = (0..n).all(|i| q.first_non_nilpotent_check(i));
    Ok(q)
}

fn poly_coordinates(index: &HashMap<Monomial, usize>, p: &Polynomial) -> SparseVec {
    let mut v: SparseVec = p
        .terms()
        .iter()
        .map(|(m, c)| (index[m], c.clone()))
        .collect();
    v.sort_by_key(|t| t.0);
    v
}

impl QuotientBasis {
    fn first_non_nilpotent_check(&self, i: usize) -> bool {
        let mut v = self.one();
        for _ in 0..self.dim() {
            if v.is_empty() {
                return true;
            }
            v = self.act_var(i, &v);
        }
        v.is_empty()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Columns of the matrix of multiplication by the `i`-th variable.
    pub fn mult_matrix(&self, i: usize) -> &[SparseVec] {
        &self.mult[i]
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// Whether every variable is nilpotent in `S/I`.
    pub fn is_origin_supported(&self) -> bool {
        self.origin_supported
    }

    /// Largest degree of a standard monomial.
    pub fn socle_degree(&self) -> Option<i64> {
        self.degrees.last().copied()
    }

    pub fn one(&self) -> SparseVec {
        match self.index.get(&Monomial::one(self.ring.nvars())) {
            Some(&k) => vec![(k, Scalar::one(self.field()))],
            None => Vec::new(),
        }
    }

    pub fn act_var(&self, i: usize, v: &[(usize, Scalar)]) -> SparseVec {
        act(&self.mult[i], v)
    }

    /// Coordinates of the class of `p`.
    pub fn coordinates(&self, p: &Polynomial) -> SparseVec {
        poly_coordinates(&self.index, &self.ideal.normal_form(p))
    }

    /// Coordinates of the class of a monomial, computed through the action matrices.
    pub fn monomial_coordinates(&self, m: &Monomial) -> SparseVec {
        let mut v = self.one();
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                if v.is_empty() {
                    return v;
                }
                v = self.act_var(i, &v);
            }
        }
        v
    }

    pub fn polynomial_of(&self, v: &[(usize, Scalar)]) -> Polynomial {
        Polynomial::from_terms(
            &self.ring,
            v.iter()
                .map(|(k, c)| (self.monomials[*k].clone(), c.clone()))
                .collect(),
        )
    }

    pub fn module(&self) -> FiniteModule {
        FiniteModule {
            ring: self.ring.clone(),
            degrees: self.degrees.clone(),
            graded: self.homogeneous,
            mult: self.mult.clone(),
        }
    }

    fn require_origin(&self) -> Result<()> {
        if self.origin_supported {
            return Ok(());
        }
        let i = (0..self.ring.nvars())
            .find(|&i| !self.first_non_nilpotent_check(i))
            .unwrap_or(0);
        Err(Error::NotSupportedAtOrigin(self.ring.names()[i].clone()))
    }

    /// `(O)_{>=k}`: image of `S_{>=k}` in `S/I`, as a subspace of coordinates.
    pub fn quotient_filtration(&self, k: i64) -> Result<ReducedBasis> {
        self.require_origin()?;
        Ok(ReducedBasis::from_echelon(&self.filtration_echelon(k)))
    }

    pub(crate) fn filtration_echelon(&self, k: i64) -> Echelon {
        let field = self.field();
        let mut ech = Echelon::new(field);
        let mut stack: Vec<SparseVec> = Vec::new();
        let lo = k.max(0);
        for d in lo..lo + self.ring.max_weight() {
            for m in self.ring.monomials_of_degree(d) {
                stack.push(self.monomial_coordinates(&m));
            }
        }
        while let Some(v) = stack.pop() {
            if v.is_empty() || !ech.insert(&v) {
                continue;
            }
            for i in 0..self.ring.nvars() {
                stack.push(self.act_var(i, &v));
            }
        }
        ech
    }

    /// Smallest `N` with `(O)_{>=N} = 0`, i.e. `S_{>=N} ⊆ I`.
    pub fn threshold(&self) -> Result<i64> {
        self.require_origin()?;
        if self.homogeneous {
            return Ok(self.socle_degree().map(|d| d + 1).unwrap_or(0));
        }
        let mut k = 0;
        while self.filtration_echelon(k).rank() > 0 {
            k += 1;
        }
        Ok(k)
    }

    /// Dimensions `dim (O)_{>=k} - dim (O)_{>=k+1}`.
    pub fn filtration_hilbert_function(&self) -> Result<HilbertFunction> {
        let n = self.threshold()?;
        let dims: Vec<usize> = (0..=n).map(|k| self.filtration_echelon(k).rank()).collect();
        let mut series = Series::new();
        for k in 0..n as usize {
            series.add_to(k as i64, dims[k] - dims[k + 1]);
        }
        Ok(HilbertFunction { series })
    }
}

pub fn act(matrix: &[SparseVec], v: &[(usize, Scalar)]) -> SparseVec {
    let mut out: SparseVec = Vec::new();
    for (j, c) in v {
        out = axpy(&out, c, &matrix[*j]);
    }
    out
}

/// Graded (or filtered) Hilbert function of `S/I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertFunction {
    series: Series,
}

impl HilbertFunction {
    pub fn get(&self, d: i64) -> usize {
        self.series.get(d)
    }

    /// Length of `S/I`.
    pub fn degree(&self) -> usize {
        self.series.total()
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn values(&self) -> Vec<usize> {
        match self.series.max_degree() {
            None => Vec::new(),
            Some(top) => (0..=top).map(|d| self.get(d)).collect(),
        }
    }
}

impl fmt::Display for HilbertFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.series)
    }
}

/// Weighted Hilbert function. Homogeneous ideals are counted by standard monomials, others
/// through the degree filtration of `S/I`.
pub fn hilbert_function(ideal: &IdealPresentation) -> Result<HilbertFunction> {
    let q = quotient_basis(ideal)?;
    hilbert_function_of(&q)
}

pub fn hilbert_function_of(q: &QuotientBasis) -> Result<HilbertFunction> {
    if q.homogeneous {
        let mut counts = BTreeMap::new();
        for d in &q.degrees {
            *counts.entry(*d).or_insert(0) += 1;
        }
        Ok(HilbertFunction {
            series: Series::from_map(counts),
        })
    } else {
        q.filtration_hilbert_function()
    }
}

/// `I / S_{>=C}` with its degree filtration `(I)_{>=k}`.
///
/// Coordinates are over the nonstandard monomials `u` with `deg u < C`; the element with
/// coordinates `c` is `Σ c_u (u - NF(u))`.
#[derive(Debug, Clone)]
pub struct IdealFiltration {
    pub cutoff: i64,
    pub monomials: Vec<Monomial>,
    pub degrees: Vec<i64>,
    /// Coordinates of `NF(u)` in the quotient basis.
    pub normal_forms: Vec<SparseVec>,
}

impl IdealFiltration {
    pub fn new(q: &QuotientBasis, cutoff: i64) -> Result<IdealFiltration> {
        let threshold = q.threshold()?;
        if cutoff < threshold {
            return Err(Error::CutoffTooSmall { cutoff, threshold });
        }
        let mut monomials = Vec::new();
        let mut degrees = Vec::new();
        let mut normal_forms = Vec::new();
        for m in q.ring.monomials_below(cutoff) {
            if q.index_of(&m).is_some() {
                continue;
            }
            degrees.push(q.ring.degree(&m));
            normal_forms.push(q.monomial_coordinates(&m));
            monomials.push(m);
        }
        Ok(IdealFiltration {
            cutoff,
            monomials,
            degrees,
            normal_forms,
        })
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Basis of `(I)_{>=k} / S_{>=C}` in monomial coordinates.
    pub fn piece(&self, q: &QuotientBasis, k: i64) -> Vec<SparseVec> {
        let low: HashMap<usize, usize> = q
            .degrees
            .iter()
            .enumerate()
            .filter(|(_, d)| **d < k)
            .enumerate()
            .map(|(row, (col, _))| (col, row))
            .collect();
        let active: Vec<usize> = (0..self.len()).filter(|&i| self.degrees[i] >= k).collect();
        let cols: Vec<SparseVec> = active
            .iter()
            .map(|&i| {
                let mut v: SparseVec = self.normal_forms[i]
                    .iter()
                    .filter_map(|(c, s)| low.get(c).map(|&r| (r, s.clone())))
                    .collect();
                v.sort_by_key(|t| t.0);
                v
            })
            .collect();
        kernel_of_columns(q.field(), &cols)
            .into_iter()
            .map(|v| v.into_iter().map(|(j, c)| (active[j], c)).collect())
            .collect()
    }

    /// The polynomial `Σ c_u (u - NF(u))`.
    pub fn element(&self, q: &QuotientBasis, c: &[(usize, Scalar)]) -> Polynomial {
        let mut terms = Vec::new();
        for (u, s) in c {
            terms.push((self.monomials[*u].clone(), s.clone()));
            for (b, t) in &self.normal_forms[*u] {
                terms.push((q.monomials[*b].clone(), t.mul(s).neg()));
            }
        }
        Polynomial::from_terms(&q.ring, terms)
    }
}

/// Which side of `0 → I → S → O → 0` a filtration piece is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filtered {
    Ideal,
    Quotient,
}

/// Basis of `(I)_{>=k}` (modulo `S_{>=cutoff}`) or of `(O)_{>=k}`, as polynomials.
pub fn filtration_piece(
    q: &QuotientBasis,
    which: Filtered,
    k: i64,
    cutoff: i64,
) -> Result<Vec<Polynomial>> {
    let threshold = q.threshold()?;
    if cutoff < threshold {
        return Err(Error::CutoffTooSmall { cutoff, threshold });
    }
    match which {
        Filtered::Quotient => Ok(q
            .quotient_filtration(k)?
            .rows()
            .iter()
            .map(|v| q.polynomial_of(v))
            .collect()),
        Filtered::Ideal => {
            let filt = IdealFiltration::new(q, cutoff)?;
            Ok(filt
                .piece(q, k)
                .iter()
                .map(|c| filt.element(q, c))
                .collect())
        }
    }
}

/// Finite-dimensional `S`-module given by a basis and the action matrices of the variables.
#[derive(Debug, Clone)]
pub struct FiniteModule {
    ring: Ring,
    degrees: Vec<i64>,
    graded: bool,
    mult: Vec<Vec<SparseVec>>,
}

impl FiniteModule {
    pub fn new(ring: &Ring, degrees: Vec<i64>, graded: bool, mult: Vec<Vec<SparseVec>>) -> Self {
        FiniteModule {
            ring: ring.clone(),
            degrees,
            graded,
            mult,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn mult_matrix(&self, i: usize) -> &[SparseVec] {
        &self.mult[i]
    }

    pub fn act_var(&self, i: usize, v: &[(usize, Scalar)]) -> SparseVec {
        act(&self.mult[i], v)
    }

    pub fn act_monomial(&self, m: &Monomial, v: &[(usize, Scalar)]) -> SparseVec {
        let mut v = v.to_vec();
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                if v.is_empty() {
                    return v;
                }
                v = self.act_var(i, &v);
            }
        }
        v
    }

    pub fn act_poly(&self, p: &Polynomial, v: &[(usize, Scalar)]) -> SparseVec {
        let mut out = Vec::new();
        for (m, c) in p.terms() {
            out = axpy(&out, c, &self.act_monomial(m, v));
        }
        out
    }

    fn is_homogeneous_vector(&self, v: &[(usize, Scalar)]) -> bool {
        v.windows(2)
            .all(|w| self.degrees[w[0].0] == self.degrees[w[1].0])
    }

    /// Submodule generated by `gens`, with its reduced basis in ambient coordinates.
    pub fn submodule(&self, gens: &[SparseVec]) -> (FiniteModule, ReducedBasis) {
        let mut ech = Echelon::new(self.field());
        let mut stack: Vec<SparseVec> = gens.to_vec();
        while let Some(v) = stack.pop() {
            if v.is_empty() || !ech.insert(&v) {
                continue;
            }
            for i in 0..self.ring.nvars() {
                stack.push(self.act_var(i, &v));
            }
        }
        let basis = ReducedBasis::from_echelon(&ech);
        let graded = self.graded && gens.iter().all(|g| self.is_homogeneous_vector(g));
        let degrees: Vec<i64> = basis.rows().iter().map(|r| self.degrees[r[0].0]).collect();
        let mult = (0..self.ring.nvars())
            .map(|i| {
                basis
                    .rows()
                    .iter()
                    .map(|r| {
                        basis
                            .coordinates(&self.act_var(i, r))
                            .expect("submodule is closed")
                    })
                    .collect()
            })
            .collect();
        (
            FiniteModule {
                ring: self.ring.clone(),
                degrees,
                graded,
                mult,
            },
            basis,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::buchberger;
    use crate::ring::GradedRing;

    fn ideal(names: &[&str], field: Field, gens: &[&str]) -> IdealPresentation {
        let r = GradedRing::standard(names, field).unwrap();
        let g: Vec<Polynomial> = gens.iter().map(|s| Polynomial::parse(&r, s).unwrap()).collect();
        buchberger(&r, &g).unwrap()
    }

    #[test]
    fn principal_ideal_in_one_variable() {
        let i = ideal(&["x"], Field::Rational, &["x"]);
        let hf = hilbert_function(&i).unwrap();
        assert_eq!(hf.values(), vec![1]);
        assert_eq!(hf.to_string(), "1");
    }

    #[test]
    fn zero_ideal_is_rejected() {
        let i = ideal(&["x", "y"], Field::Rational, &[]);
        assert!(matches!(hilbert_function(&i), Err(Error::NotZeroDimensional(_))));
    }

    #[test]
    fn multiplication_matrices_commute() {
        let i = ideal(&["x", "y"], Field::Prime(5), &["x^2-y^3", "x*y"]);
        let q = quotient_basis(&i).unwrap();
        for b in 0..q.dim() {
            let e = vec![(b, Scalar::one(q.field()))];
            assert_eq!(q.act_var(0, &q.act_var(1, &e)), q.act_var(1, &q.act_var(0, &e)));
        }
        assert!(!q.is_homogeneous());
        assert!(q.is_origin_supported());
        assert_eq!(q.dim(), 5);
        let hf = hilbert_function_of(&q).unwrap();
        assert_eq!(hf.degree(), 5);
    }

    #[test]
    fn points_away_from_origin_are_detected() {
        let i = ideal(&["x", "y"], Field::Rational, &["x+x^2", "y"]);
        let q = quotient_basis(&i).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(!q.is_origin_supported());
        assert!(matches!(q.threshold(), Err(Error::NotSupportedAtOrigin(_))));
    }

    #[test]
    fn graded_filtration_matches_hilbert_function() {
        let i = ideal(&["x", "y"], Field::Rational, &["x^2", "x*y", "y^3"]);
        let q = quotient_basis(&i).unwrap();
        let graded = hilbert_function_of(&q).unwrap();
        assert_eq!(q.filtration_hilbert_function().unwrap(), graded);
        assert_eq!(q.threshold().unwrap(), 3);
        let piece = filtration_piece(&q, Filtered::Ideal, 0, 3).unwrap();
        let f = IdealFiltration::new(&q, 3).unwrap();
        assert_eq!(piece.len(), f.len());
        assert!(matches!(
            filtration_piece(&q, Filtered::Ideal, 0, 2),
            Err(Error::CutoffTooSmall { .. })
        ));
    }
}

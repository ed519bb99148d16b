//! Hom, Ext¹ and T² of presented modules into finite-length modules.

pub mod diagram;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::artinian::{FiniteModule, IdealFiltration, QuotientBasis};
use crate::error::{Error, Result};
use crate::groebner::{ModulePresentation, RelationData};
use crate::linalg::{axpy, combine, kernel_of_columns, Echelon, SparseVec};
use crate::poly::Polynomial;
use crate::ring::Monomial;
use crate::scalar::Scalar;
use crate::series::Series;

/// Finite-dimensional space split by degree. Ungraded spaces keep everything in degree 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVectorSpace {
    ambient_dim: usize,
    graded: bool,
    pieces: BTreeMap<i64, Vec<SparseVec>>,
}

impl GradedVectorSpace {
    pub fn graded(ambient_dim: usize, pieces: BTreeMap<i64, Vec<SparseVec>>) -> Self {
        let pieces = pieces.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        GradedVectorSpace {
            ambient_dim,
            graded: true,
            pieces,
        }
    }

    pub fn ungraded(ambient_dim: usize, vectors: Vec<SparseVec>) -> Self {
        let mut pieces = BTreeMap::new();
        if !vectors.is_empty() {
            pieces.insert(0, vectors);
        }
        GradedVectorSpace {
            ambient_dim,
            graded: false,
            pieces,
        }
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pieces.values().map(Vec::len).sum()
    }

    pub fn dim_in(&self, d: i64) -> usize {
        self.pieces.get(&d).map(Vec::len).unwrap_or(0)
    }

    pub fn piece(&self, d: i64) -> &[SparseVec] {
        self.pieces.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn pieces(&self) -> &BTreeMap<i64, Vec<SparseVec>> {
        &self.pieces
    }

    pub fn vectors(&self) -> impl Iterator<Item = &SparseVec> {
        self.pieces.values().flatten()
    }

    /// Dimensions by degree; `None` for ungraded spaces.
    pub fn series(&self) -> Option<Series> {
        if !self.graded {
            return None;
        }
        let mut s = Series::new();
        for (d, v) in &self.pieces {
            s.add_to(*d, v.len());
        }
        Some(s)
    }

    /// Pieces of non-negative degree (graded spaces only).
    pub fn nonneg_part(&self) -> GradedVectorSpace {
        assert!(self.graded);
        GradedVectorSpace::graded(
            self.ambient_dim,
            self.pieces.range(0..).map(|(d, v)| (*d, v.clone())).collect(),
        )
    }

    pub fn negative_part(&self) -> GradedVectorSpace {
        assert!(self.graded);
        GradedVectorSpace::graded(
            self.ambient_dim,
            self.pieces.range(..0).map(|(d, v)| (*d, v.clone())).collect(),
        )
    }
}

/// Homomorphisms from a presented module, each stored as the concatenated images of the
/// source generators.
#[derive(Debug, Clone)]
pub struct GradedHom {
    pub source: ModulePresentation,
    pub target: FiniteModule,
    pub space: GradedVectorSpace,
    pub window: Option<(i64, i64)>,
}

impl GradedHom {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn series(&self) -> Option<Series> {
        self.space.series()
    }

    pub fn is_graded(&self) -> bool {
        self.space.is_graded()
    }

    /// Images of the source generators under the homomorphism `v`.
    pub fn images(&self, v: &[(usize, Scalar)]) -> Vec<SparseVec> {
        split_blocks(v, self.source.rank(), self.target.dim())
    }
}

pub(crate) fn split_blocks(v: &[(usize, Scalar)], blocks: usize, size: usize) -> Vec<SparseVec> {
    let mut out = vec![Vec::new(); blocks];
    for (i, c) in v {
        out[i / size].push((i % size, c.clone()));
    }
    out
}

/// Matrices of monomials acting on a finite module, memoized.
pub(crate) struct ActionCache<'a> {
    target: &'a FiniteModule,
    matrices: HashMap<Monomial, Vec<SparseVec>>,
}

impl<'a> ActionCache<'a> {
    pub(crate) fn new(target: &'a FiniteModule) -> Self {
        ActionCache {
            target,
            matrices: HashMap::new(),
        }
    }

    pub(crate) fn prepare(&mut self, m: &Monomial) {
        if self.matrices.contains_key(m) {
            return;
        }
        let dim = self.target.dim();
        let field = self.target.field();
        let cols = match m.exps().iter().rposition(|&e| e > 0) {
            None => (0..dim).map(|b| vec![(b, Scalar::one(field))]).collect(),
            Some(i) => {
                let mut exps = m.exps().to_vec();
                exps[i] -= 1;
                let prev = Monomial::new(exps);
                self.prepare(&prev);
                let prev_cols = &self.matrices[&prev];
                prev_cols
                    .iter()
                    .map(|c| self.target.act_var(i, c))
                    .collect()
            }
        };
        self.matrices.insert(m.clone(), cols);
    }

    pub(crate) fn prepare_all<'p>(&mut self, polys: impl IntoIterator<Item = &'p Polynomial>) {
        for p in polys {
            for (m, _) in p.terms() {
                self.prepare(m);
            }
        }
    }

    /// `p · e_b`; every monomial of `p` must have been prepared.
    pub(crate) fn apply_to_basis(&self, p: &Polynomial, b: usize) -> SparseVec {
        let mut out = Vec::new();
        for (m, c) in p.terms() {
            out = axpy(&out, c, &self.matrices[m][b]);
        }
        out
    }

    pub(crate) fn apply(&self, p: &Polynomial, v: &[(usize, Scalar)]) -> SparseVec {
        let mut out = Vec::new();
        for (b, c) in v {
            out = axpy(&out, c, &self.apply_to_basis(p, *b));
        }
        out
    }
}

/// Solutions of "generator images satisfying every relation", optionally restricted to
/// homomorphisms of degree `degree`. Output coordinates are `j * dim N + b`.
fn solve_hom(
    degrees: &[i64],
    relations: &[Vec<Polynomial>],
    target: &FiniteModule,
    cache: &ActionCache,
    degree: Option<i64>,
) -> Vec<SparseVec> {
    let dn = target.dim();
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for (j, dj) in degrees.iter().enumerate() {
        for b in 0..dn {
            if degree.is_none_or(|k| target.degrees()[b] == dj + k) {
                unknowns.push((j, b));
            }
        }
    }
    let cols: Vec<SparseVec> = unknowns
        .iter()
        .map(|&(j, b)| {
            let mut col = Vec::new();
            for (r, rel) in relations.iter().enumerate() {
                if rel[j].is_zero() {
                    continue;
                }
                let v = cache.apply_to_basis(&rel[j], b);
                col.extend(v.into_iter().map(|(i, c)| (r * dn + i, c)));
            }
            col
        })
        .collect();
    kernel_of_columns(target.field(), &cols)
        .into_iter()
        .map(|v| v.into_iter().map(|(u, c)| {
            let (j, b) = unknowns[u];
            (j * dn + b, c)
        }))
        .map(|it| {
            let mut v: SparseVec = it.collect();
            v.sort_by_key(|t| t.0);
            v
        })
        .collect()
}

/// Degree window `[min deg N - max deg g, max deg N - min deg g]`.
fn hom_window(source_degrees: &[i64], target: &FiniteModule) -> Option<(i64, i64)> {
    let tmin = *target.degrees().iter().min()?;
    let tmax = *target.degrees().iter().max()?;
    let gmin = *source_degrees.iter().min()?;
    let gmax = *source_degrees.iter().max()?;
    Some((tmin - gmax, tmax - gmin))
}

fn is_graded_pair(m: &ModulePresentation, n: &FiniteModule) -> bool {
    m.homogeneous && n.is_graded()
}

fn solve_by_degree(
    degrees: &[i64],
    relations: &[Vec<Polynomial>],
    target: &FiniteModule,
    cache: &ActionCache,
    window: Option<(i64, i64)>,
) -> BTreeMap<i64, Vec<SparseVec>> {
    match window {
        None => BTreeMap::new(),
        Some((lo, hi)) => (lo..=hi)
            .into_par_iter()
            .map(|k| (k, solve_hom(degrees, relations, target, cache, Some(k))))
            .collect(),
    }
}

/// `Hom_S(M, N)`, split by degree when both sides are graded.
pub fn hom_space(m: &ModulePresentation, n: &FiniteModule) -> GradedHom {
    let mut cache = ActionCache::new(n);
    cache.prepare_all(m.relations.iter().flatten());
    let ambient = m.rank() * n.dim();
    let (space, window) = if is_graded_pair(m, n) {
        let window = hom_window(&m.degrees, n);
        let pieces = solve_by_degree(&m.degrees, &m.relations, n, &cache, window);
        (GradedVectorSpace::graded(ambient, pieces), window)
    } else {
        let v = solve_hom(&m.degrees, &m.relations, n, &cache, None);
        (GradedVectorSpace::ungraded(ambient, v), None)
    };
    let hom = GradedHom {
        source: m.clone(),
        target: n.clone(),
        space,
        window,
    };
    for v in hom.space.vectors() {
        assert!(
            satisfies_relations(&cache, &m.relations, &hom.images(v)),
            "homomorphism violates a relation"
        );
    }
    hom
}

/// Dimension of `Hom_S(M, N)` computed without using any grading.
pub fn hom_dimension_ungraded(m: &ModulePresentation, n: &FiniteModule) -> usize {
    let mut cache = ActionCache::new(n);
    cache.prepare_all(m.relations.iter().flatten());
    solve_hom(&m.degrees, &m.relations, n, &cache, None).len()
}

fn satisfies_relations(cache: &ActionCache, relations: &[Vec<Polynomial>], images: &[SparseVec]) -> bool {
    relations.iter().all(|rel| {
        let mut acc = Vec::new();
        for (p, v) in rel.iter().zip(images) {
            if !p.is_zero() {
                acc = axpy(&acc, &Scalar::one(cache.target.field()), &cache.apply(p, v));
            }
        }
        acc.is_empty()
    })
}

/// Checks that `images` (one target vector per generator) respects every relation of `m`.
pub fn is_homomorphism(m: &ModulePresentation, n: &FiniteModule, images: &[SparseVec]) -> bool {
    let mut cache = ActionCache::new(n);
    cache.prepare_all(m.relations.iter().flatten());
    satisfies_relations(&cache, &m.relations, images)
}

/// Non-negative part of a graded Hom.
pub fn hom_nonneg(hom: &GradedHom) -> Result<GradedVectorSpace> {
    if !hom.is_graded() {
        return Err(Error::Unsupported(
            "non-negative part of an ungraded Hom needs the filtration route".into(),
        ));
    }
    Ok(hom.space.nonneg_part())
}

/// Negative part of a graded Hom: a complement of `Hom_{>=0}`.
pub fn hom_negative(hom: &GradedHom) -> Result<GradedVectorSpace> {
    if !hom.is_graded() {
        return Err(Error::Unsupported(
            "negative part of an ungraded Hom needs the filtration route".into(),
        ));
    }
    Ok(hom.space.negative_part())
}

/// Result of the filtration computation of `Hom(I, O')_{>=0}`.
#[derive(Debug, Clone)]
pub struct FilteredNonneg {
    pub space: GradedVectorSpace,
    pub cutoff: i64,
    pub threshold: i64,
}

/// Smallest cutoff `C` for which `φ(S_{>=C}) = 0` is automatic: `2N + max weight - 1`.
pub fn default_cutoff(threshold: i64, max_weight: i64) -> i64 {
    2 * threshold + max_weight - 1
}

/// `{φ ∈ Hom(I, O') : φ((I)_{>=k}) ⊆ (O')_{>=k} for all k}` for an ideal `I` with quotient
/// `source_q` and a target quotient `target_q`; `hom` must have been computed from
/// `source_q.ideal().presentation()` into `target_q.module()`.
pub fn hom_nonneg_filtered(
    source_q: &QuotientBasis,
    target_q: &QuotientBasis,
    hom: &GradedHom,
    cutoff: Option<i64>,
) -> Result<FilteredNonneg> {
    let threshold = source_q.threshold()?.max(target_q.threshold()?);
    let c = match cutoff {
        Some(c) if c < threshold => {
            return Err(Error::CutoffTooSmall { cutoff: c, threshold })
        }
        Some(c) => c,
        None => default_cutoff(threshold, source_q.ring().max_weight()),
    };
    let first = filtered_at(source_q, target_q, hom, c)?;
    let second = filtered_at(source_q, target_q, hom, c + 1)?;
    if first.len() != second.len() {
        return Err(Error::CutoffUnstable {
            cutoff: c,
            next: c + 1,
            first: first.len(),
            second: second.len(),
        });
    }
    Ok(FilteredNonneg {
        space: GradedVectorSpace::ungraded(hom.space.ambient_dim(), first),
        cutoff: c,
        threshold,
    })
}

enum Recipe {
    /// `f_u = x_i f_{u'} + Σ c_b f_{x_i b}`.
    Recurse {
        var: usize,
        prev: usize,
        terms: Vec<(usize, Scalar)>,
    },
    /// `f_u = Σ a_j g_j`.
    Lift(Vec<Polynomial>),
}

fn filtered_at(
    source_q: &QuotientBasis,
    target_q: &QuotientBasis,
    hom: &GradedHom,
    cutoff: i64,
) -> Result<Vec<SparseVec>> {
    let field = source_q.field();
    let ring = source_q.ring();
    let filt = IdealFiltration::new(source_q, cutoff)?;
    let position: HashMap<&Monomial, usize> =
        filt.monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut recipes = Vec::with_capacity(filt.len());
    for (k, u) in filt.monomials.iter().enumerate() {
        let mut recipe = None;
        for i in 0..ring.nvars() {
            if u.exps()[i] == 0 {
                continue;
            }
            let mut exps = u.exps().to_vec();
            exps[i] -= 1;
            let prev = Monomial::new(exps);
            if let Some(&p) = position.get(&prev) {
                let terms = filt.normal_forms[p]
                    .iter()
                    .filter_map(|(b, c)| {
                        let xb = source_q.monomials()[*b].mul_var(i);
                        if source_q.index_of(&xb).is_some() {
                            None
                        } else {
                            Some((position[&xb], c.clone()))
                        }
                    })
                    .collect();
                recipe = Some(Recipe::Recurse {
                    var: i,
                    prev: p,
                    terms,
                });
                break;
            }
        }
        let recipe = match recipe {
            Some(r) => r,
            None => {
                let f = filt.element(source_q, &[(k, Scalar::one(field))]);
                Recipe::Lift(source_q.ideal().lift(&f).expect("f_u lies in the ideal"))
            }
        };
        recipes.push(recipe);
    }
    let target = &hom.target;
    let mut cache = ActionCache::new(target);
    for r in &recipes {
        if let Recipe::Lift(a) = r {
            cache.prepare_all(a.iter());
        }
    }
    let basis: Vec<&SparseVec> = hom.space.vectors().collect();
    let values: Vec<Vec<SparseVec>> = basis
        .par_iter()
        .map(|h| {
            let images = hom.images(h);
            let mut vals: Vec<SparseVec> = Vec::with_capacity(recipes.len());
            for r in &recipes {
                let v = match r {
                    Recipe::Recurse { var, prev, terms } => {
                        let mut v = target.act_var(*var, &vals[*prev]);
                        for (q, c) in terms {
                            v = axpy(&v, c, &vals[*q]);
                        }
                        v
                    }
                    Recipe::Lift(a) => {
                        let mut v = Vec::new();
                        for (p, img) in a.iter().zip(&images) {
                            if !p.is_zero() {
                                v = axpy(&v, &Scalar::one(field), &cache.apply(p, img));
                            }
                        }
                        v
                    }
                };
                vals.push(v);
            }
            vals
        })
        .collect();
    let s = basis.len();
    let rows: Vec<Vec<SparseVec>> = (0..cutoff)
        .into_par_iter()
        .map(|k| {
            let target_piece = target_q.filtration_echelon(k);
            let mut rows = Vec::new();
            for c in filt.piece(source_q, k) {
                let mut by_coord: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
                for (t, vals_t) in values.iter().enumerate() {
                    let mut w = Vec::new();
                    for (u, cu) in &c {
                        w = axpy(&w, cu, &vals_t[*u]);
                    }
                    for (p, x) in target_piece.reduce(&w) {
                        by_coord.entry(p).or_default().push((t, x));
                    }
                }
                rows.extend(by_coord.into_values());
            }
            rows
        })
        .collect();
    let mut ech = Echelon::new(field);
    for r in rows.iter().flatten() {
        ech.insert(r);
    }
    let owned: Vec<SparseVec> = basis.into_iter().cloned().collect();
    Ok(ech
        .null_space(s)
        .iter()
        .map(|lambda| combine(field, lambda, &owned))
        .collect())
}

/// `Hom(G, N)` modulo the restrictions of `Hom(F, N)`, with `G` given by its generators
/// (vectors in `F`) and relations.
#[derive(Debug, Clone)]
pub struct QuotientOfHom {
    pub hom: GradedHom,
    pub image: GradedVectorSpace,
    /// Representatives of a complement of the image, per degree.
    pub quotient: GradedVectorSpace,
}

impl QuotientOfHom {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn series(&self) -> Option<Series> {
        self.quotient.series()
    }
}

pub type Ext1Space = QuotientOfHom;
pub type T2Space = QuotientOfHom;

/// Restrictions of all maps `F -> N` to `G`, in `Hom(G, N)` coordinates.
fn restriction_image(
    g: &ModulePresentation,
    n: &FiniteModule,
    cache: &ActionCache,
    degree: Option<i64>,
) -> Vec<SparseVec> {
    let dn = n.dim();
    let mut out = Vec::new();
    for (j, dj) in g.ambient_shifts.iter().enumerate() {
        for b in 0..dn {
            if degree.is_some_and(|k| n.degrees()[b] != dj + k) {
                continue;
            }
            let mut v = Vec::new();
            for (l, sigma) in g.generators.iter().enumerate() {
                if sigma[j].is_zero() {
                    continue;
                }
                let w = cache.apply_to_basis(&sigma[j], b);
                v.extend(w.into_iter().map(|(i, c)| (l * dn + i, c)));
            }
            if !v.is_empty() {
                out.push(v);
            }
        }
    }
    out
}

fn complement(
    field: crate::scalar::Field,
    sub: &[SparseVec],
    whole: &[SparseVec],
) -> (Vec<SparseVec>, Vec<SparseVec>) {
    let mut ech = Echelon::new(field);
    let mut image = Vec::new();
    for v in sub {
        if ech.insert(v) {
            image.push(v.clone());
        }
    }
    let mut reps = Vec::new();
    for v in whole {
        if ech.insert(v) {
            reps.push(v.clone());
        }
    }
    (image, reps)
}

/// `Hom(G', N) / im Hom(F, N)` where `G'` carries the relations of `g`.
pub fn quotient_of_hom(g: &ModulePresentation, n: &FiniteModule) -> QuotientOfHom {
    let hom = hom_space(g, n);
    let mut cache = ActionCache::new(n);
    cache.prepare_all(g.generators.iter().flatten());
    let field = n.field();
    let ambient = hom.space.ambient_dim();
    let (image, quotient) = if hom.is_graded() {
        let degrees: Vec<i64> = hom.space.pieces().keys().copied().collect();
        let parts: Vec<(i64, Vec<SparseVec>, Vec<SparseVec>)> = degrees
            .par_iter()
            .map(|&k| {
                let img = restriction_image(g, n, &cache, Some(k));
                let (img, reps) = complement(field, &img, hom.space.piece(k));
                (k, img, reps)
            })
            .collect();
        let mut image = BTreeMap::new();
        let mut quotient = BTreeMap::new();
        for (k, img, reps) in parts {
            image.insert(k, img);
            quotient.insert(k, reps);
        }
        (
            GradedVectorSpace::graded(ambient, image),
            GradedVectorSpace::graded(ambient, quotient),
        )
    } else {
        let img = restriction_image(g, n, &cache, None);
        let whole: Vec<SparseVec> = hom.space.vectors().cloned().collect();
        let (img, reps) = complement(field, &img, &whole);
        (
            GradedVectorSpace::ungraded(ambient, img),
            GradedVectorSpace::ungraded(ambient, reps),
        )
    };
    QuotientOfHom {
        hom,
        image,
        quotient,
    }
}

/// `Ext¹(M, N) = Hom(G, N) / Hom(F, N)` where `G` is the relation module of `M`.
pub fn ext1_space(m: &ModulePresentation, n: &FiniteModule) -> Ext1Space {
    let (g, _) = m.relation_module();
    quotient_of_hom(&g, n)
}

/// `Ext¹` from an already computed relation module.
pub fn ext1_from_relations(g: &ModulePresentation, n: &FiniteModule) -> Ext1Space {
    quotient_of_hom(g, n)
}

/// `T² = Hom(G/K, O) / Hom(F, O)`.
pub fn t2_space(data: &RelationData, o: &FiniteModule) -> T2Space {
    let mut g = data.module.clone();
    g.relations.extend(data.koszul.generators.iter().cloned());
    g.homogeneous = data.module.homogeneous && data.koszul.homogeneous;
    quotient_of_hom(&g, o)
}

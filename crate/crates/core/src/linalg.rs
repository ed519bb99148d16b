//! Sparse exact linear algebra: echelon bases, ranks, null spaces.

use std::collections::{BTreeMap, HashMap};

use crate::scalar::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `y + a * x`.
pub fn axpy(y: &[(usize, Scalar)], a: &Scalar, x: &[(usize, Scalar)]) -> SparseVec {
    if a.is_zero() {
        return y.to_vec();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, a.mul(&x[j].1)));
            j += 1;
        } else {
            let c = y[i].1.add(&a.mul(&x[j].1));
            if !c.is_zero() {
                out.push((y[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &[(usize, Scalar)], a: &Scalar) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, c)| (*i, c.mul(a))).collect()
}

/// Sparse vector from unsorted, possibly repeated entries.
pub fn collect_sparse(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, c) in entries {
        match acc.get_mut(&i) {
            Some(v) => *v = v.add(&c),
            None => {
                acc.insert(i, c);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn shift(v: &[(usize, Scalar)], offset: usize) -> SparseVec {
    v.iter().map(|(i, c)| (i + offset, c.clone())).collect()
}

/// Row-echelon basis of a subspace of `field^n`, built incrementally.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon {
            field,
            rows: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut v = v.to_vec();
        let mut k = 0;
        while k < v.len() {
            match self.pivot_of.get(&v[k].0) {
                Some(&r) => {
                    let c = v[k].1.neg();
                    v = axpy(&v, &c, &self.rows[r]);
                }
                None => k += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let inv = r[0].1.inv().unwrap();
        let r = scale(&r, &inv);
        self.pivot_of.insert(r[0].0, self.rows.len());
        self.rows.push(r);
        true
    }

    /// Solutions `x` of `row · x = 0` for every inserted row, over `ncols` unknowns.
    pub fn null_space(&self, ncols: usize) -> Vec<SparseVec> {
        let one = Scalar::one(self.field);
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|c| !self.is_pivot(*c)) {
            let mut x: HashMap<usize, Scalar> = HashMap::new();
            x.insert(free, one.clone());
            for &r in &order {
                let row = &self.rows[r];
                let p = row[0].0;
                if p > free {
                    continue;
                }
                let mut acc = Scalar::zero(self.field);
                for (j, c) in &row[1..] {
                    if let Some(v) = x.get(j) {
                        acc = acc.sub(&c.mul(v));
                    }
                }
                if !acc.is_zero() {
                    x.insert(p, acc);
                }
            }
            basis.push(collect_sparse(x));
        }
        basis
    }
}

/// Basis of the solution space of the homogeneous system `rows · x = 0`.
pub fn null_space(field: Field, rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    if field == Field::Rational {
        if let Some(ns) = modular_null_space(rows, ncols) {
            return ns;
        }
    }
    let mut e = Echelon::new(field);
    for r in rows {
        e.insert(r);
    }
    e.null_space(ncols)
}

const SELECTION_PRIME: u32 = 2_147_483_647;

/// Rows independent mod a large prime are independent over Q; eliminate those
/// only and confirm the kernel against all rows.
fn modular_null_space(rows: &[SparseVec], ncols: usize) -> Option<Vec<SparseVec>> {
    let mut modular = Echelon::new(Field::Prime(SELECTION_PRIME));
    let mut exact = Echelon::new(Field::Rational);
    for r in rows {
        let image: Option<SparseVec> = r
            .iter()
            .map(|(i, c)| c.reduce_mod(SELECTION_PRIME).map(|c| (*i, c)))
            .collect();
        let image = collect_sparse(image?);
        if modular.insert(&image) {
            exact.insert(r);
        }
    }
    let ns = exact.null_space(ncols);
    let annihilates = |r: &SparseVec, x: &SparseVec| {
        let mut acc = Scalar::zero(Field::Rational);
        let (mut i, mut j) = (0, 0);
        while i < r.len() && j < x.len() {
            match r[i].0.cmp(&x[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc.add(&r[i].1.mul(&x[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        acc.is_zero()
    };
    rows.iter()
        .all(|r| ns.iter().all(|x| annihilates(r, x)))
        .then_some(ns)
}

pub fn rank(field: Field, vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new(field);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Coefficient vectors `λ` with `Σ λ_i cols[i] = 0`.
pub fn kernel_of_columns(field: Field, cols: &[SparseVec]) -> Vec<SparseVec> {
    let mut by_row: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (i, col) in cols.iter().enumerate() {
        for (r, c) in col {
            by_row.entry(*r).or_default().push((i, c.clone()));
        }
    }
    let rows: Vec<SparseVec> = by_row.into_values().collect();
    null_space(field, &rows, cols.len())
}

/// Linear combination `Σ λ_i vs[i]`.
pub fn combine(field: Field, coeffs: &[(usize, Scalar)], vs: &[SparseVec]) -> SparseVec {
    let _ = field;
    let mut out = Vec::new();
    for (i, c) in coeffs {
        out = axpy(&out, c, &vs[*i]);
    }
    out
}

/// Reduced row-echelon basis of a subspace; coordinates are read off at the pivots.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    field: Field,
    rows: Vec<SparseVec>,
    pivot_of: HashMap<usize, usize>,
}

impl ReducedBasis {
    pub fn from_echelon(e: &Echelon) -> ReducedBasis {
        let mut rows: Vec<SparseVec> = e.rows.clone();
        rows.sort_by_key(|r| std::cmp::Reverse(r[0].0));
        let mut done: Vec<SparseVec> = Vec::with_capacity(rows.len());
        let mut pivots: HashMap<usize, usize> = HashMap::new();
        for row in rows {
            let mut v = row;
            let mut k = 1;
            while k < v.len() {
                match pivots.get(&v[k].0) {
                    Some(&r) => {
                        let c = v[k].1.neg();
                        v = axpy(&v, &c, &done[r]);
                    }
                    None => k += 1,
                }
            }
            pivots.insert(v[0].0, done.len());
            done.push(v);
        }
        done.reverse();
        let pivot_of = done.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
        ReducedBasis {
            field: e.field,
            rows: done,
            pivot_of,
        }
    }

    pub fn spanning(field: Field, vectors: &[SparseVec]) -> ReducedBasis {
        let mut e = Echelon::new(field);
        for v in vectors {
            e.insert(v);
        }
        ReducedBasis::from_echelon(&e)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        let coords: SparseVec = v
            .iter()
            .filter_map(|(i, c)| self.pivot_of.get(i).map(|&r| (r, c.clone())))
            .collect();
        let coords = collect_sparse(coords);
        let back = combine(self.field, &coords, &self.rows);
        if back.as_slice() == v {
            Some(coords)
        } else {
            None
        }
    }
}

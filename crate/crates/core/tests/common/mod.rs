//! Random small ideals and truncated linear algebra shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use hilbtnt::linalg::{collect_sparse, Echelon, ReducedBasis, SparseVec};
use hilbtnt::{Field, GradedRing, Monomial, Polynomial, Ring, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monomial coordinates on `S / m^bound` (total degree).
pub struct Truncation {
    pub monomials: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
    pub bound: u32,
}

impl Truncation {
    pub fn new(ring: &Ring, bound: u32) -> Truncation {
        let std = GradedRing::new(ring.names().to_vec(), vec![1; ring.nvars()], ring.field()).unwrap();
        let monomials = std.monomials_below(bound as i64);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Truncation {
            monomials,
            index,
            bound,
        }
    }

    pub fn vector(&self, p: &Polynomial) -> SparseVec {
        let mut v: SparseVec = p
            .terms()
            .iter()
            .filter(|(m, _)| m.total_exponent() < self.bound)
            .map(|(m, c)| (self.index[m], c.clone()))
            .collect();
        v.sort_by_key(|t| t.0);
        v
    }

    pub fn times_var(&self, v: &[(usize, Scalar)], i: usize) -> SparseVec {
        let mut out: SparseVec = v
            .iter()
            .filter_map(|(k, c)| {
                let m = self.monomials[*k].mul_var(i);
                self.index.get(&m).map(|j| (*j, c.clone()))
            })
            .collect();
        out.sort_by_key(|t| t.0);
        out
    }

    /// Echelon basis of `(I + m^bound) / m^bound`, from all monomial multiples.
    pub fn ideal(&self, ring: &Ring, gens: &[Polynomial]) -> Echelon {
        let field = ring.field();
        let mut ech = Echelon::new(field);
        for g in gens {
            for k in 0..self.monomials.len() {
                let v = self.vector(&g.mul_term(&self.monomials[k], &Scalar::one(field)));
                if !v.is_empty() {
                    ech.insert(&v);
                }
            }
        }
        ech
    }

    /// Span of the monomials of total degree `>= k`.
    pub fn tail(&self, k: u32, field: Field) -> Vec<SparseVec> {
        self.monomials
            .iter()
            .enumerate()
            .filter(|(_, m)| m.total_exponent() >= k)
            .map(|(i, _)| vec![(i, Scalar::one(field))])
            .collect()
    }
}

pub fn random_poly(ring: &Ring, rng: &mut ChaCha8Rng, degrees: std::ops::RangeInclusive<i64>) -> Polynomial {
    let field = ring.field();
    let mut terms = Vec::new();
    for d in degrees {
        for m in ring.monomials_of_degree(d) {
            if rng.gen_bool(0.4) {
                let c = match field {
                    Field::Prime(p) => rng.gen_range(1..p as i64),
                    Field::Rational => rng.gen_range(1..10),
                };
                terms.push((m, Scalar::from_i64(field, c)));
            }
        }
    }
    Polynomial::from_terms(ring, terms)
}

/// A zero-dimensional ideal containing `m^n`, in standard-graded variables.
pub struct Sample {
    pub ring: Ring,
    pub gens: Vec<Polynomial>,
    pub n: u32,
}

impl Sample {
    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn quotient_dim(&self) -> usize {
        let tr = Truncation::new(&self.ring, self.n);
        tr.monomials.len() - tr.ideal(&self.ring, &self.gens).rank()
    }
}

/// Random origin-supported ideal in 2 or 3 variables with `dim S/I <= max_dim`.
pub fn random_sample(seed: u64, field: Field, homogeneous: bool, max_dim: usize) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let nv = rng.gen_range(2..=3usize);
        let names: Vec<&str> = ["x", "y", "z"][..nv].to_vec();
        let ring = GradedRing::standard(&names, field).unwrap();
        let n: u32 = if nv == 2 { rng.gen_range(2..=5) } else { rng.gen_range(2..=4) };
        let mut gens: Vec<Polynomial> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let g = if homogeneous {
                let d = rng.gen_range(1..n as i64);
                random_poly(&ring, &mut rng, d..=d)
            } else {
                random_poly(&ring, &mut rng, 1..=(n as i64 - 1).max(1))
            };
            if !g.is_zero() {
                gens.push(g);
            }
        }
        gens.extend(
            ring.monomials_of_degree(n as i64)
                .into_iter()
                .map(|m| Polynomial::monomial(&ring, m)),
        );
        let s = Sample { ring, gens, n };
        let d = s.quotient_dim();
        if d > 0 && d <= max_dim && (homogeneous || !s.is_homogeneous()) {
            return s;
        }
    }
}

/// Hom(I, S/I) by brute force over the truncation S/m^K, with K = 2N and m^N ⊆ I.
///
/// Every S-linear map I → S/I kills m^N·I ⊇ m^K, so it factors through Ī = I/m^K. The
/// oracle builds Ī and S/I inside S/m^K from monomial multiples of the generators and
/// solves the commutation equations φ(x_i v) = x_i φ(v) directly. No Gröbner bases.
pub struct OracleHom {
    pub quotient_dim: usize,
    pub total: usize,
    pub graded: Option<BTreeMap<i64, usize>>,
}

pub fn oracle(ring: &Ring, gens: &[Polynomial], n: u32, homogeneous: bool) -> OracleHom {
    let field = ring.field();
    let tr = Truncation::new(ring, 2 * n);
    let ech = tr.ideal(ring, gens);
    let ibar = ReducedBasis::from_echelon(&ech);
    let a_cols: Vec<usize> = (0..tr.monomials.len()).filter(|c| !ech.is_pivot(*c)).collect();
    let a_index: HashMap<usize, usize> = a_cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let da = a_cols.len();
    let a_coords = |v: &[(usize, Scalar)]| -> SparseVec {
        ech.reduce(v).into_iter().map(|(c, s)| (a_index[&c], s)).collect()
    };
    let nv = ring.nvars();
    // x_i · b in S/I for every basis monomial b
    let a_mult: Vec<Vec<SparseVec>> = (0..nv)
        .map(|i| {
            a_cols
                .iter()
                .map(|c| a_coords(&tr.times_var(&[(*c, Scalar::one(field))], i)))
                .collect()
        })
        .collect();
    let rows = ibar.rows();
    let di = rows.len();
    let deg_of = |c: usize| tr.monomials[c].total_exponent() as i64;
    let row_deg: Vec<i64> = rows.iter().map(|r| deg_of(r[0].0)).collect();
    let a_deg: Vec<i64> = a_cols.iter().map(|c| deg_of(*c)).collect();
    let unknown = |w: usize, a: usize| w * da + a;
    let mut equations: Vec<SparseVec> = Vec::new();
    for (v, row) in rows.iter().enumerate() {
        for (i, mult) in a_mult.iter().enumerate().take(nv) {
            let xv = tr.times_var(row, i);
            let coords = ibar.coordinates(&xv).expect("Ī is a submodule");
            let mut by_a: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
            for (w, c) in &coords {
                for a in 0..da {
                    by_a.entry(a).or_default().push((unknown(*w, a), c.clone()));
                }
            }
            for (b, products) in mult.iter().enumerate() {
                for (a, c) in products {
                    by_a.entry(*a).or_default().push((unknown(v, b), c.neg()));
                }
            }
            for entries in by_a.into_values() {
                let eq = collect_sparse(entries);
                if !eq.is_empty() {
                    equations.push(eq);
                }
            }
        }
    }
    let nunk = di * da;
    let unknown_degree = |k: usize| a_deg[k % da] - row_deg[k / da];
    if homogeneous {
        let mut by_deg: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
        for eq in equations {
            by_deg.entry(unknown_degree(eq[0].0)).or_default().push(eq);
        }
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for k in 0..nunk {
            *counts.entry(unknown_degree(k)).or_default() += 1;
        }
        let mut graded = BTreeMap::new();
        for (d, count) in counts {
            let mut e = Echelon::new(field);
            for eq in by_deg.get(&d).into_iter().flatten() {
                assert!(eq.iter().all(|(k, _)| unknown_degree(*k) == d));
                e.insert(eq);
            }
            let dim = count - e.rank();
            if dim > 0 {
                graded.insert(d, dim);
            }
        }
        OracleHom {
            quotient_dim: da,
            total: graded.values().sum(),
            graded: Some(graded),
        }
    } else {
        let mut e = Echelon::new(field);
        for eq in &equations {
            e.insert(eq);
        }
        OracleHom {
            quotient_dim: da,
            total: nunk - e.rank(),
            graded: None,
        }
    }
}

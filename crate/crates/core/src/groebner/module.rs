//! Buchberger's algorithm on submodules of a graded free module, with transcripts.
//!
//! Every basis element remembers how it was built from the input generators, so pair
//! reductions that end in zero yield syzygies of the *input* generators, and any member
//! of the submodule can be lifted back to a combination of the inputs.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::poly::Polynomial;
use crate::ring::{Monomial, Ring};
use crate::scalar::Scalar;

/// Graded free module `⊕ S(-shift_i)` ordered by shifted degree, then revlex, then position.
#[derive(Debug, Clone)]
pub struct FreeModule {
    pub ring: Ring,
    pub shifts: Vec<i64>,
}

impl FreeModule {
    pub fn new(ring: &Ring, shifts: Vec<i64>) -> FreeModule {
        FreeModule {
            ring: ring.clone(),
            shifts,
        }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn term_degree(&self, m: &Monomial, comp: usize) -> i64 {
        self.ring.degree(m) + self.shifts[comp]
    }

    pub fn cmp_terms(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        self.term_degree(a.0, a.1)
            .cmp(&self.term_degree(b.0, b.1))
            .then_with(|| self.ring.cmp_monomials(a.0, b.0))
            .then_with(|| b.1.cmp(&a.1))
    }
}

/// Element of a free module: terms `c · m · e_comp` in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModVec {
    pub terms: Vec<(Monomial, usize, Scalar)>,
}

impl ModVec {
    pub fn zero() -> ModVec {
        ModVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn unit(fm: &FreeModule, comp: usize, c: Scalar) -> ModVec {
        ModVec {
            terms: vec![(Monomial::one(fm.ring.nvars()), comp, c)],
        }
    }

    pub fn from_components(fm: &FreeModule, comps: &[Polynomial]) -> ModVec {
        let mut terms = Vec::new();
        for (k, p) in comps.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push((m.clone(), k, c.clone()));
            }
        }
        terms.sort_by(|a, b| fm.cmp_terms((&b.0, b.1), (&a.0, a.1)));
        ModVec { terms }
    }

    pub fn to_components(&self, fm: &FreeModule) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); fm.rank()];
        for (m, k, c) in &self.terms {
            parts[*k].push((m.clone(), c.clone()));
        }
        parts
            .into_iter()
            .map(|t| Polynomial::from_terms(&fm.ring, t))
            .collect()
    }

    pub fn lead(&self) -> Option<&(Monomial, usize, Scalar)> {
        self.terms.first()
    }

    pub fn combine(&self, fm: &FreeModule, other: &ModVec, a: &Scalar) -> ModVec {
        self.axpy_from(fm, 0, other, a)
    }

    /// `self[start..] + a * other`.
    fn axpy_from(&self, fm: &FreeModule, start: usize, other: &ModVec, a: &Scalar) -> ModVec {
        let x = &self.terms[start..];
        let y = &other.terms;
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            let ord = if i == x.len() {
                Ordering::Less
            } else if j == y.len() {
                Ordering::Greater
            } else {
                fm.cmp_terms((&x[i].0, x[i].1), (&y[j].0, y[j].1))
            };
            match ord {
                Ordering::Greater => {
                    out.push(x[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((y[j].0.clone(), y[j].1, y[j].2.mul(a)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = x[i].2.add(&y[j].2.mul(a));
                    if !c.is_zero() {
                        out.push((x[i].0.clone(), x[i].1, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        ModVec { terms: out }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> ModVec {
        if c.is_zero() {
            return ModVec::zero();
        }
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|(n, k, d)| (n.mul(m), *k, d.mul(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> ModVec {
        if c.is_zero() {
            return ModVec::zero();
        }
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|(m, k, d)| (m.clone(), *k, d.mul(c)))
                .collect(),
        }
    }

    pub fn mul_poly(&self, fm: &FreeModule, p: &Polynomial) -> ModVec {
        let mut out = ModVec::zero();
        for (m, c) in p.terms() {
            out = out.combine(fm, &self.mul_term(m, c), &Scalar::one(fm.ring.field()));
        }
        out
    }

    /// Maximal shifted degree of a term.
    pub fn degree(&self, fm: &FreeModule) -> Option<i64> {
        self.terms.iter().map(|(m, k, _)| fm.term_degree(m, *k)).max()
    }

    pub fn is_homogeneous(&self, fm: &FreeModule) -> bool {
        let mut degs = self.terms.iter().map(|(m, k, _)| fm.term_degree(m, *k));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }
}

/// Linear combination `Σ coeffs_i · vecs_i` in a free module.
pub fn combination(fm: &FreeModule, coeffs: &[Polynomial], vecs: &[ModVec]) -> ModVec {
    let mut out = ModVec::zero();
    for (p, v) in coeffs.iter().zip(vecs) {
        if !p.is_zero() {
            out = out.combine(fm, &v.mul_poly(fm, p), &Scalar::one(fm.ring.field()));
        }
    }
    out
}

#[derive(Debug, Clone)]
struct BasisElement {
    vec: ModVec,
    transcript: ModVec,
}

#[derive(Debug, Clone, Default)]
pub struct GbOptions {
    /// Pairs whose lcm has shifted degree above the cap are not processed.
    pub degree_cap: Option<i64>,
    /// Skip transcripts and syzygies; only the basis is wanted.
    pub basis_only: bool,
}

/// Gröbner basis of a submodule together with transcripts and input syzygies.
#[derive(Debug, Clone)]
pub struct ModuleGb {
    pub ambient: FreeModule,
    /// Free module on the input generators (shifts = input degrees).
    pub source: FreeModule,
    pub inputs: Vec<ModVec>,
    basis: Vec<BasisElement>,
    pub syzygies: Vec<ModVec>,
    pub pairs_reduced: usize,
    pub pairs_skipped: usize,
    /// Ideal modulo which transcript coefficients are reduced.
    modulus: Option<Box<ModuleGb>>,
}

struct Quotients {
    acc: HashMap<usize, Vec<(Monomial, Scalar)>>,
}

impl Quotients {
    fn new() -> Quotients {
        Quotients { acc: HashMap::new() }
    }

    fn push(&mut self, k: usize, m: Monomial, c: Scalar) {
        self.acc.entry(k).or_default().push((m, c));
    }
}

impl ModuleGb {
    /// Runs Buchberger on `inputs` (vectors in `ambient`). `source_shifts` are the degrees
    /// attached to the inputs; zero inputs contribute the trivial syzygy `e_j`.
    pub fn compute(
        ambient: &FreeModule,
        inputs: &[ModVec],
        source_shifts: Vec<i64>,
        options: &GbOptions,
    ) -> ModuleGb {
        ModuleGb::compute_modulo(ambient, inputs, source_shifts, options, None)
    }

    /// As `compute`, with every transcript coefficient reduced modulo the ideal whose
    /// rank-one basis is `modulus`. Syzygies and lifts then hold modulo `J·source`.
    pub fn compute_modulo(
        ambient: &FreeModule,
        inputs: &[ModVec],
        source_shifts: Vec<i64>,
        options: &GbOptions,
        modulus: Option<ModuleGb>,
    ) -> ModuleGb {
        let field = ambient.ring.field();
        let source = FreeModule::new(&ambient.ring, source_shifts);
        let mut gb = ModuleGb {
            ambient: ambient.clone(),
            source: source.clone(),
            inputs: inputs.to_vec(),
            basis: Vec::new(),
            syzygies: Vec::new(),
            pairs_reduced: 0,
            pairs_skipped: 0,
            modulus: modulus.map(Box::new),
        };
        let mut pending: BTreeSet<(i64, usize, usize)> = BTreeSet::new();
        let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (j, v) in inputs.iter().enumerate() {
            if v.is_zero() {
                gb.syzygies
                    .push(ModVec::unit(&source, j, Scalar::one(field)));
                continue;
            }
            let inv = v.lead().unwrap().2.inv().unwrap();
            let elem = BasisElement {
                vec: v.scale(&inv),
                transcript: ModVec::unit(&source, j, inv),
            };
            gb.add_element(elem, &mut pending);
        }
        while let Some(&(deg, i, j)) = pending.iter().next() {
            pending.remove(&(deg, i, j));
            if let Some(cap) = options.degree_cap {
                if deg > cap {
                    done.insert((i, j));
                    continue;
                }
            }
            let (li, ki, _) = gb.basis[i].vec.lead().unwrap().clone();
            let (lj, _, _) = gb.basis[j].vec.lead().unwrap().clone();
            let lcm = li.lcm(&lj);
            if ambient.rank() == 1 && li.coprime(&lj) {
                done.insert((i, j));
                gb.pairs_skipped += 1;
                continue;
            }
            if gb.chain_criterion(i, j, &lcm, ki, &pending) {
                done.insert((i, j));
                gb.pairs_skipped += 1;
                continue;
            }
            gb.pairs_reduced += 1;
            let one = Scalar::one(field);
            let ui = li.quotient_of(&lcm);
            let uj = lj.quotient_of(&lcm);
            let s = gb.basis[i]
                .vec
                .mul_term(&ui, &one)
                .combine(ambient, &gb.basis[j].vec.mul_term(&uj, &one), &one.neg());
            let mut quots = Quotients::new();
            quots.push(i, ui, one.clone());
            quots.push(j, uj, one.neg());
            let track = !options.basis_only;
            let rem = gb.reduce_tracking(&s, &mut quots, track);
            if !rem.is_zero() {
                // rem = Σ quots_k · basis_k with the signs recorded above
                let comb = if track {
                    gb.transcript_of(&quots)
                } else {
                    ModVec::zero()
                };
                let inv = rem.lead().unwrap().2.inv().unwrap();
                let elem = BasisElement {
                    vec: rem.scale(&inv),
                    transcript: comb.scale(&inv),
                };
                gb.add_element(elem, &mut pending);
            }
            done.insert((i, j));
        }
        if !options.basis_only {
            let syz = gb.schreyer_syzygies(options.degree_cap);
            gb.syzygies.extend(syz);
        }
        gb
    }

    /// Indices of basis elements whose leading term is not divisible by another's.
    fn minimal_indices(&self) -> Vec<usize> {
        let leads: Vec<&(Monomial, usize, Scalar)> =
            self.basis.iter().map(|b| b.vec.lead().unwrap()).collect();
        (0..leads.len())
            .filter(|&i| {
                let (mi, ci, _) = leads[i];
                !(0..leads.len()).any(|j| {
                    let (mj, cj, _) = leads[j];
                    j != i && cj == ci && mj.divides(mi) && (mj != mi || j < i)
                })
            })
            .collect()
    }

    /// Input syzygies from the minimal basis `G`: each input written through `G`, and
    /// the standard representations of the S-pairs of `G`, pulled back by the transcripts.
    fn schreyer_syzygies(&self, degree_cap: Option<i64>) -> Vec<ModVec> {
        let one = Scalar::one(self.ambient.ring.field());
        let active = self.minimal_indices();
        let mut out = Vec::new();
        for (j, v) in self.inputs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mut quots = Quotients::new();
            let rem = self.reduce_by(v, &active, &mut quots, true);
            debug_assert!(rem.is_zero() || degree_cap.is_some());
            if !rem.is_zero() {
                continue;
            }
            // 0 = v_j + Σ q_k g_k
            let syz = ModVec::unit(&self.source, j, one.clone())
                .combine(&self.source, &self.transcript_of(&quots), &one);
            if !syz.is_zero() {
                out.push(syz);
            }
        }
        for (a, &i) in active.iter().enumerate() {
            for &j in &active[a + 1..] {
                let (li, ki, _) = self.basis[i].vec.lead().unwrap();
                let (lj, kj, _) = self.basis[j].vec.lead().unwrap();
                if ki != kj {
                    continue;
                }
                let lcm = li.lcm(lj);
                if let Some(cap) = degree_cap {
                    if self.ambient.term_degree(&lcm, *ki) > cap {
                        continue;
                    }
                }
                let ui = li.quotient_of(&lcm);
                let uj = lj.quotient_of(&lcm);
                let s = self.basis[i]
                    .vec
                    .mul_term(&ui, &one)
                    .combine(&self.ambient, &self.basis[j].vec.mul_term(&uj, &one), &one.neg());
                let mut quots = Quotients::new();
                quots.push(i, ui, one.clone());
                quots.push(j, uj, one.neg());
                let rem = self.reduce_by(&s, &active, &mut quots, true);
                if !rem.is_zero() {
                    continue;
                }
                let syz = self.transcript_of(&quots);
                if !syz.is_zero() {
                    out.push(syz);
                }
            }
        }
        out
    }

    fn add_element(&mut self, elem: BasisElement, pending: &mut BTreeSet<(i64, usize, usize)>) {
        let k = self.basis.len();
        let (lk, ck, _) = elem.vec.lead().unwrap().clone();
        self.basis.push(elem);
        for i in 0..k {
            let (li, ci, _) = self.basis[i].vec.lead().unwrap();
            if *ci != ck {
                continue;
            }
            let lcm = li.lcm(&lk);
            pending.insert((self.ambient.term_degree(&lcm, ck), i, k));
        }
    }

    fn chain_criterion(
        &self,
        i: usize,
        j: usize,
        lcm: &Monomial,
        comp: usize,
        pending: &BTreeSet<(i64, usize, usize)>,
    ) -> bool {
        let is_pending = |a: usize, b: usize| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            let (la, _, _) = self.basis[a].vec.lead().unwrap();
            let (lb, _, _) = self.basis[b].vec.lead().unwrap();
            let d = self.ambient.term_degree(&la.lcm(lb), comp);
            pending.contains(&(d, a, b))
        };
        (0..self.basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let (lk, ck, _) = self.basis[k].vec.lead().unwrap();
            *ck == comp && lk.divides(lcm) && !is_pending(i, k) && !is_pending(j, k)
        })
    }

    fn transcript_of(&self, quots: &Quotients) -> ModVec {
        let mut keys: Vec<_> = quots.acc.keys().copied().collect();
        keys.sort_unstable();
        let one = Scalar::one(self.ambient.ring.field());
        let mut out = ModVec::zero();
        for k in keys {
            let q = Polynomial::from_terms(&self.ambient.ring, quots.acc[&k].clone());
            if q.is_zero() {
                continue;
            }
            out = out.combine(&self.source, &self.basis[k].transcript.mul_poly(&self.source, &q), &one);
        }
        self.reduce_coefficients(out)
    }

    fn reduce_coefficients(&self, v: ModVec) -> ModVec {
        let Some(m) = &self.modulus else {
            return v;
        };
        let comps: Vec<Polynomial> = v
            .to_components(&self.source)
            .iter()
            .map(|c| {
                let w = ModVec::from_components(&m.ambient, std::slice::from_ref(c));
                m.normal_form(&w).to_components(&m.ambient).remove(0)
            })
            .collect();
        ModVec::from_components(&self.source, &comps)
    }

    /// Fully reduces `v`. Each step `p -= c·u·b_k` records `-c·u` at `k`, so on return
    /// `rem = v + Σ quots_k · b_k`.
    fn reduce_tracking(&self, v: &ModVec, quots: &mut Quotients, track: bool) -> ModVec {
        let all: Vec<usize> = (0..self.basis.len()).collect();
        self.reduce_by(v, &all, quots, track)
    }

    /// Reduction using only the basis elements listed in `active`.
    fn reduce_by(&self, v: &ModVec, active: &[usize], quots: &mut Quotients, track: bool) -> ModVec {
        let fm = &self.ambient;
        let mut p = v.clone();
        let mut start = 0;
        let mut rem: Vec<(Monomial, usize, Scalar)> = Vec::new();
        while start < p.terms.len() {
            let (m, comp, c) = p.terms[start].clone();
            let divisor = active.iter().copied().find(|&k| {
                let (lm, lc, _) = self.basis[k].vec.lead().unwrap();
                *lc == comp && lm.divides(&m)
            });
            match divisor {
                Some(k) => {
                    let u = self.basis[k].vec.lead().unwrap().0.quotient_of(&m);
                    let neg = c.neg();
                    if track {
                        quots.push(k, u.clone(), neg.clone());
                    }
                    let sub = self.basis[k].vec.mul_term(&u, &Scalar::one(fm.ring.field()));
                    p = p.axpy_from(fm, start, &sub, &neg);
                    start = 0;
                }
                None => {
                    rem.push((m, comp, c));
                    start += 1;
                }
            }
        }
        ModVec { terms: rem }
    }

    /// Normal form of `v` with respect to the basis.
    pub fn normal_form(&self, v: &ModVec) -> ModVec {
        let mut q = Quotients::new();
        self.reduce_tracking(v, &mut q, false)
    }

    /// Expresses `v` as a combination of the input generators, or `None` when `v` is not in
    /// the submodule.
    pub fn lift(&self, v: &ModVec) -> Option<ModVec> {
        let mut q = Quotients::new();
        let rem = self.reduce_tracking(v, &mut q, true);
        if !rem.is_zero() {
            return None;
        }
        // v - Σ (−q_k) b_k = 0, so v = −Σ q_k b_k
        let t = self.transcript_of(&q);
        Some(t.scale(&Scalar::one(self.ambient.ring.field()).neg()))
    }

    pub fn basis_vectors(&self) -> Vec<ModVec> {
        self.basis.iter().map(|b| b.vec.clone()).collect()
    }

    pub fn leading_terms(&self) -> Vec<(Monomial, usize)> {
        self.basis
            .iter()
            .map(|b| {
                let (m, k, _) = b.vec.lead().unwrap();
                (m.clone(), *k)
            })
            .collect()
    }

    /// Checks `Σ s_j · input_j = 0` for every recorded syzygy.
    pub fn syzygies_evaluate_to_zero(&self) -> bool {
        self.syzygies.iter().all(|s| self.evaluate(s).is_zero())
    }

    /// `Σ s_j · input_j` for a vector `s` over the source module.
    pub fn evaluate(&self, s: &ModVec) -> ModVec {
        let comps = s.to_components(&self.source);
        combination(&self.ambient, &comps, &self.inputs)
    }

    /// Interreduced monic basis: minimal leading terms, fully reduced tails.
    pub fn reduced_basis(&self) -> Vec<ModVec> {
        let fm = &self.ambient;
        let mut keep: Vec<ModVec> = Vec::new();
        let mut vecs = self.basis_vectors();
        vecs.sort_by(|a, b| {
            let (ma, ca, _) = a.lead().unwrap();
            let (mb, cb, _) = b.lead().unwrap();
            fm.cmp_terms((ma, *ca), (mb, *cb))
        });
        for v in vecs {
            let (m, c, _) = v.lead().unwrap();
            let redundant = keep.iter().any(|w| {
                let (mw, cw, _) = w.lead().unwrap();
                cw == c && mw.divides(m)
            });
            if !redundant {
                keep.push(v);
            }
        }
        let mut out = Vec::with_capacity(keep.len());
        for (idx, v) in keep.iter().enumerate() {
            let others = ModuleGb {
                ambient: fm.clone(),
                source: self.source.clone(),
                inputs: Vec::new(),
                basis: keep
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != idx)
                    .map(|(_, w)| BasisElement {
                        vec: w.clone(),
                        transcript: ModVec::zero(),
                    })
                    .collect(),
                syzygies: Vec::new(),
                pairs_reduced: 0,
                pairs_skipped: 0,
                modulus: None,
            };
            let lead = ModVec {
                terms: vec![v.terms[0].clone()],
            };
            let tail = ModVec {
                terms: v.terms[1..].to_vec(),
            };
            let tail = others.normal_form(&tail);
            out.push(lead.combine(fm, &tail, &Scalar::one(fm.ring.field())));
        }
        out
    }
}

//! Maps between the Hom and Ext¹ groups attached to a pair of ideals `I_M ⊆ I_R`.

use crate::artinian::{quotient_basis, FiniteModule, QuotientBasis};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, IdealPresentation, ModulePresentation};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::Polynomial;
use crate::series::Series;

use super::{
    ext1_space, hom_space, split_blocks, ActionCache, Ext1Space, GradedHom, GradedVectorSpace,
};

/// Degreewise ranks of a map between graded spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSummary {
    pub source: Series,
    pub target: Series,
    pub rank: Series,
}

impl MapSummary {
    fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.target.iter().map(|(d, _)| d).collect();
        d.extend(self.source.iter().map(|(d, _)| d));
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn surjective_in(&self, d: i64) -> bool {
        self.rank.get(d) == self.target.get(d)
    }

    pub fn surjective_nonneg(&self) -> bool {
        self.degrees().into_iter().filter(|d| *d >= 0).all(|d| self.surjective_in(d))
    }

    pub fn surjective(&self) -> bool {
        self.degrees().into_iter().all(|d| self.surjective_in(d))
    }

    pub fn kernel(&self) -> Series {
        let mut k = Series::new();
        for (d, c) in self.source.iter() {
            k.add_to(d, c - self.rank.get(d));
        }
        k
    }
}

/// The quotient `J = I_R / I_M` inside `O_M`, with a presentation.
#[derive(Debug, Clone)]
pub struct PairData {
    pub m: IdealPresentation,
    pub r: IdealPresentation,
    pub qm: QuotientBasis,
    pub qr: QuotientBasis,
    pub j_module: FiniteModule,
    pub j_presentation: ModulePresentation,
}

/// Checks `I_M ⊆ I_R` and builds `J`.
pub fn pair_data(m: &IdealPresentation, r: &IdealPresentation) -> Result<PairData> {
    if !m.is_homogeneous() || !r.is_homogeneous() {
        return Err(Error::Unsupported(
            "pair certificates require homogeneous ideals".into(),
        ));
    }
    for g in m.generators() {
        if !r.contains(g) {
            return Err(Error::NotASubideal(g.to_string()));
        }
    }
    let qm = quotient_basis(m)?;
    let qr = quotient_basis(r)?;
    let extras: Vec<Polynomial> = r
        .generators()
        .iter()
        .filter(|h| !qm.coordinates(h).is_empty())
        .cloned()
        .collect();
    let gens: Vec<SparseVec> = extras.iter().map(|h| qm.coordinates(h)).collect();
    let (j_module, _) = qm.module().submodule(&gens);
    let p = extras.len();
    let mut combined = extras.clone();
    combined.extend(m.generators().iter().cloned());
    let ring = m.ring();
    let syz = buchberger(ring, &combined)?;
    let relations: Vec<Vec<Polynomial>> = syz
        .syzygies()
        .iter()
        .map(|s| s[..p].to_vec())
        .filter(|s| s.iter().any(|x| !x.is_zero()))
        .collect();
    let j_presentation = ModulePresentation {
        ring: ring.clone(),
        ambient_shifts: vec![0],
        generators: extras.iter().map(|h| vec![h.clone()]).collect(),
        degrees: extras.iter().map(|h| h.degree().unwrap_or(0)).collect(),
        relations,
        homogeneous: true,
    };
    Ok(PairData {
        m: m.clone(),
        r: r.clone(),
        qm,
        qr,
        j_module,
        j_presentation,
    })
}

/// Everything the relative criterion needs, split by degree.
#[derive(Debug, Clone)]
pub struct DiagramMaps {
    pub hom_m_om: GradedHom,
    pub hom_m_or: GradedHom,
    pub hom_r_or: GradedHom,
    pub hom_r_om: GradedHom,
    pub hom_j_or: GradedHom,
    pub hom_j_om: GradedHom,
    pub hom_m_j: GradedHom,
    pub ext1_j_or: Ext1Space,
    pub ext1_j_om: Ext1Space,
    /// `Hom(I_M, O_M) -> Hom(I_M, O_R)`.
    pub phi: MapSummary,
    /// `Hom(I_M, O_R) -> Ext¹(J, O_R)`.
    pub partial: MapSummary,
    /// `Hom(I_M, O_M) -> Ext¹(J, O_M)`.
    pub psi: MapSummary,
    /// `Hom(I_R, O_R) -> Hom(I_M, O_R)`.
    pub restriction: MapSummary,
    /// `Hom(I_R, O_M) -> Hom(I_M, O_M)`.
    pub restriction_m: MapSummary,
    /// Kernel dimensions agree with the neighbouring terms of both exact sequences.
    pub exact: bool,
}

fn series_of(space: &GradedVectorSpace) -> Series {
    space.series().expect("graded")
}

fn ranks(space: &GradedVectorSpace, f: impl Fn(&SparseVec) -> SparseVec) -> Series {
    let mut out = Series::new();
    for (d, vecs) in space.pieces() {
        let field = match vecs.first().and_then(|v| v.first()) {
            Some((_, c)) => c.field(),
            None => continue,
        };
        let mut ech = Echelon::new(field);
        for v in vecs {
            ech.insert(&f(v));
        }
        out.add_to(*d, ech.rank());
    }
    out
}

/// Restriction `Hom(I_R, N) -> Hom(I_M, N)` through lifts of the generators of `I_M`.
fn restriction(data: &PairData, hom_r: &GradedHom, hom_m: &GradedHom) -> MapSummary {
    let lifts: Vec<Vec<Polynomial>> = data
        .m
        .generators()
        .iter()
        .map(|g| data.r.lift(g).expect("subideal"))
        .collect();
    let n = &hom_r.target;
    let mut cache = ActionCache::new(n);
    cache.prepare_all(lifts.iter().flatten());
    let dn = n.dim();
    let field = n.field();
    let rank = ranks(&hom_r.space, |v| {
        let images = hom_r.images(v);
        let mut out = Vec::new();
        for (k, a) in lifts.iter().enumerate() {
            let mut w = Vec::new();
            for (p, img) in a.iter().zip(&images) {
                if !p.is_zero() {
                    w = crate::linalg::axpy(&w, &crate::scalar::Scalar::one(field), &cache.apply(p, img));
                }
            }
            out.extend(w.into_iter().map(|(i, c)| (k * dn + i, c)));
        }
        out
    });
    MapSummary {
        source: series_of(&hom_r.space),
        target: series_of(&hom_m.space),
        rank,
    }
}

/// Connecting map `Hom(I_M, N) -> Ext¹(J, N)`, whose image has dimension
/// `dim Hom(I_M, N) - rank(restriction)` by exactness.
fn connecting(hom_m: &GradedHom, res: &MapSummary, ext: &Ext1Space) -> MapSummary {
    let mut rank = Series::new();
    for (d, c) in series_of(&hom_m.space).iter() {
        rank.add_to(d, c - res.rank.get(d));
    }
    MapSummary {
        source: series_of(&hom_m.space),
        target: series_of(&ext.quotient),
        rank,
    }
}

pub fn diagram_maps(data: &PairData) -> Result<DiagramMaps> {
    let om = data.qm.module();
    let or = data.qr.module();
    let pm = data.m.presentation();
    let pr = data.r.presentation();
    let pj = &data.j_presentation;
    let hom_m_om = hom_space(&pm, &om);
    let hom_m_or = hom_space(&pm, &or);
    let hom_r_or = hom_space(&pr, &or);
    let hom_r_om = hom_space(&pr, &om);
    let hom_j_or = hom_space(pj, &or);
    let hom_j_om = hom_space(pj, &om);
    let hom_m_j = hom_space(&pm, &data.j_module);
    let ext1_j_or = ext1_space(pj, &or);
    let ext1_j_om = ext1_space(pj, &om);

    let projection: Vec<SparseVec> = data
        .qm
        .monomials()
        .iter()
        .map(|b| data.qr.monomial_coordinates(b))
        .collect();
    let dm = om.dim();
    let dr = or.dim();
    let q = pm.rank();
    let phi_rank = ranks(&hom_m_om.space, |v| {
        let mut out = Vec::new();
        for (k, img) in split_blocks(v, q, dm).iter().enumerate() {
            let w = crate::artinian::act(&projection, img);
            out.extend(w.into_iter().map(|(i, c)| (k * dr + i, c)));
        }
        out
    });
    let phi = MapSummary {
        source: series_of(&hom_m_om.space),
        target: series_of(&hom_m_or.space),
        rank: phi_rank,
    };
    let restriction_r = restriction(data, &hom_r_or, &hom_m_or);
    let restriction_m = restriction(data, &hom_r_om, &hom_m_om);
    let partial = connecting(&hom_m_or, &restriction_r, &ext1_j_or);
    let psi = connecting(&hom_m_om, &restriction_m, &ext1_j_om);

    let exact = restriction_r.kernel() == series_of(&hom_j_or.space)
        && restriction_m.kernel() == series_of(&hom_j_om.space)
        && phi.kernel() == series_of(&hom_m_j.space)
        && partial.degrees().iter().all(|&d| partial.rank.get(d) <= partial.target.get(d))
        && psi.degrees().iter().all(|&d| psi.rank.get(d) <= psi.target.get(d));
    Ok(DiagramMaps {
        hom_m_om,
        hom_m_or,
        hom_r_or,
        hom_r_om,
        hom_j_or,
        hom_j_om,
        hom_m_j,
        ext1_j_or,
        ext1_j_om,
        phi,
        partial,
        psi,
        restriction: restriction_r,
        restriction_m,
        exact,
    })
}

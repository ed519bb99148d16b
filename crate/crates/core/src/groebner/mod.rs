//! Gröbner bases, syzygies and presentations of ideals and modules.

pub mod module;

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::poly::Polynomial;
use crate::ring::{Monomial, Ring};
use crate::scalar::Scalar;

pub use module::{combination, FreeModule, GbOptions, ModVec, ModuleGb};

/// An ideal with its Gröbner basis, generator syzygies and lifting data.
#[derive(Debug, Clone)]
pub struct IdealPresentation {
    ring: Ring,
    generators: Vec<Polynomial>,
    reduced: Vec<Polynomial>,
    syzygies: Vec<Vec<Polynomial>>,
    homogeneous: bool,
    gb: ModuleGb,
}

/// Presentation of a finitely generated graded module by generators and relations.
///
/// `generators` are vectors in the ambient free module (when the module is a submodule
/// of one); `relations` are vectors over the generators and are authoritative.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    pub ring: Ring,
    pub ambient_shifts: Vec<i64>,
    pub generators: Vec<Vec<Polynomial>>,
    pub degrees: Vec<i64>,
    pub relations: Vec<Vec<Polynomial>>,
    pub homogeneous: bool,
}

fn ideal_module(ring: &Ring) -> FreeModule {
    FreeModule::new(ring, vec![0])
}

fn poly_degree(p: &Polynomial) -> i64 {
    p.degree().unwrap_or(0)
}

/// Runs Buchberger's algorithm on `generators`, keeping transcripts and syzygies.
pub fn buchberger(ring: &Ring, generators: &[Polynomial]) -> Result<IdealPresentation> {
    for g in generators {
        if !crate::poly::same_ring(g.ring(), ring) {
            return Err(Error::RingMismatch);
        }
    }
    let gens: Vec<Polynomial> = generators.iter().filter(|g| !g.is_zero()).cloned().collect();
    let homogeneous = gens.iter().all(|g| g.is_homogeneous());
    let fm = ideal_module(ring);
    let inputs: Vec<ModVec> = gens
        .iter()
        .map(|g| ModVec::from_components(&fm, std::slice::from_ref(g)))
        .collect();
    let shifts: Vec<i64> = gens.iter().map(poly_degree).collect();
    let exact = homogeneous || ring.field().characteristic() != 0;
    let gb = if exact {
        let gb = ModuleGb::compute(&fm, &inputs, shifts, &GbOptions::default());
        assert!(gb.syzygies_evaluate_to_zero(), "syzygy check failed");
        gb
    } else {
        // exact transcripts of inhomogeneous inputs over Q blow up
        let basis_only = GbOptions {
            basis_only: true,
            ..GbOptions::default()
        };
        let rough = ModuleGb::compute(&fm, &inputs, shifts.clone(), &basis_only);
        let reduced = rough.reduced_basis();
        let reduced_shifts = reduced.iter().map(|v| v.degree(&fm).unwrap_or(0)).collect();
        let modulus = ModuleGb::compute(&fm, &reduced, reduced_shifts, &basis_only);
        ModuleGb::compute_modulo(&fm, &inputs, shifts, &GbOptions::default(), Some(modulus))
    };
    let reduced: Vec<Polynomial> = gb
        .reduced_basis()
        .iter()
        .map(|v| v.to_components(&fm).remove(0))
        .collect();
    let source = gb.source.clone();
    let mut raw: Vec<ModVec> = gb.syzygies.clone();
    if homogeneous {
        raw = minimize_homogeneous(&source, &raw);
    }
    let syzygies = raw.iter().map(|s| s.to_components(&source)).collect();
    Ok(IdealPresentation {
        ring: ring.clone(),
        generators: gens,
        reduced,
        syzygies,
        homogeneous,
        gb,
    })
}

impl IdealPresentation {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Reduced monic Gröbner basis.
    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.reduced
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.reduced
            .iter()
            .map(|g| g.leading_monomial().unwrap().clone())
            .collect()
    }

    /// Relations among the generators, minimal for homogeneous input. For inhomogeneous
    /// input over Q they generate the syzygies modulo `I` only, so `Σ s_j g_j ∈ I²`.
    pub fn syzygies(&self) -> &[Vec<Polynomial>] {
        &self.syzygies
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn generator_degrees(&self) -> Vec<i64> {
        self.generators.iter().map(poly_degree).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.reduced.iter().any(|g| g.leading_monomial().unwrap().is_one())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let fm = ideal_module(&self.ring);
        let v = ModVec::from_components(&fm, std::slice::from_ref(f));
        self.gb.normal_form(&v).to_components(&fm).remove(0)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Coefficients `c` with `f = Σ c_j g_j`, or `None` when `f ∉ I`. For inhomogeneous
    /// input over Q the identity holds modulo `I²`.
    pub fn lift(&self, f: &Polynomial) -> Option<Vec<Polynomial>> {
        let fm = ideal_module(&self.ring);
        let v = ModVec::from_components(&fm, std::slice::from_ref(f));
        self.gb.lift(&v).map(|t| t.to_components(&self.gb.source))
    }

    /// The ideal as a module: one generator per polynomial, relations = syzygies.
    pub fn presentation(&self) -> ModulePresentation {
        ModulePresentation {
            ring: self.ring.clone(),
            ambient_shifts: vec![0],
            generators: self.generators.iter().map(|g| vec![g.clone()]).collect(),
            degrees: self.generator_degrees(),
            relations: self.syzygies.clone(),
            homogeneous: self.homogeneous,
        }
    }

    /// Presentation of the first syzygy module: generators are the generator syzygies,
    /// relations are the second syzygies.
    pub fn second_syzygies(&self) -> ModulePresentation {
        self.presentation().relation_module().0
    }

    /// Koszul relations `g_j e_i - g_i e_j`, written over the syzygy generators.
    pub fn koszul_submodule(&self) -> ModulePresentation {
        self.relation_data().koszul
    }

    /// Syzygy module and Koszul relations, computed together.
    pub fn relation_data(&self) -> RelationData {
        let (module, gb) = self.presentation().relation_module();
        let fm = gb.ambient.clone();
        let r = self.generators.len();
        let mut vectors = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let mut comps = vec![Polynomial::zero(&self.ring); r];
                comps[i] = self.generators[j].clone();
                comps[j] = self.generators[i].neg();
                let v = ModVec::from_components(&fm, &comps);
                let t = gb.lift(&v).expect("Koszul relation is a syzygy");
                vectors.push(t.to_components(&gb.source));
            }
        }
        let degrees = vectors
            .iter()
            .map(|v| {
                ModVec::from_components(&gb.source, v)
                    .degree(&gb.source)
                    .unwrap_or(0)
            })
            .collect();
        let koszul = ModulePresentation {
            ring: self.ring.clone(),
            ambient_shifts: module.degrees.clone(),
            generators: vectors,
            degrees,
            relations: Vec::new(),
            homogeneous: self.homogeneous,
        };
        RelationData { module, koszul }
    }
}

/// First syzygy module `G` of an ideal and its Koszul submodule `K ⊆ G`.
#[derive(Debug, Clone)]
pub struct RelationData {
    /// Generators: the syzygies of the ideal generators; relations: second syzygies.
    pub module: ModulePresentation,
    /// Koszul relations expressed over the generators of `module`.
    pub koszul: ModulePresentation,
}

impl ModulePresentation {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    fn ambient(&self) -> FreeModule {
        FreeModule::new(&self.ring, self.ambient_shifts.clone())
    }

    /// Module generated by the relations of `self`, with its own relations computed.
    /// Also returns the Gröbner data used for lifting into the relation generators.
    pub fn relation_module(&self) -> (ModulePresentation, ModuleGb) {
        let ambient = FreeModule::new(&self.ring, self.degrees.clone());
        let inputs: Vec<ModVec> = self
            .relations
            .iter()
            .map(|r| ModVec::from_components(&ambient, r))
            .collect();
        let degrees: Vec<i64> = inputs
            .iter()
            .map(|v| v.degree(&ambient).unwrap_or(0))
            .collect();
        let gb = ModuleGb::compute(&ambient, &inputs, degrees.clone(), &GbOptions::default());
        assert!(gb.syzygies_evaluate_to_zero(), "second syzygy check failed");
        let mut syz = gb.syzygies.clone();
        if self.homogeneous {
            syz = minimize_homogeneous(&gb.source, &syz);
        }
        let relations = syz.iter().map(|s| s.to_components(&gb.source)).collect();
        let pres = ModulePresentation {
            ring: self.ring.clone(),
            ambient_shifts: self.degrees.clone(),
            generators: self.relations.clone(),
            degrees,
            relations,
            homogeneous: self.homogeneous,
        };
        (pres, gb)
    }

    /// Generators as vectors of the ambient free module.
    pub fn generator_vectors(&self) -> Vec<ModVec> {
        let fm = self.ambient();
        self.generators
            .iter()
            .map(|g| ModVec::from_components(&fm, g))
            .collect()
    }
}

/// Coordinates of a homogeneous vector in the monomial basis of `fm` in its degree.
fn graded_coordinates(
    fm: &FreeModule,
    v: &ModVec,
    index: &mut std::collections::HashMap<(Monomial, usize), usize>,
) -> Vec<(usize, Scalar)> {
    let mut out: Vec<(usize, Scalar)> = v
        .terms
        .iter()
        .map(|(m, k, c)| {
            let n = index.len();
            let idx = *index.entry((m.clone(), *k)).or_insert(n);
            (idx, c.clone())
        })
        .collect();
    let _ = fm;
    out.sort_by_key(|t| t.0);
    out
}

/// Drops vectors lying in the submodule generated by the others, degree by degree.
/// Input vectors must be homogeneous.
pub fn minimize_homogeneous(fm: &FreeModule, vecs: &[ModVec]) -> Vec<ModVec> {
    let mut items: Vec<(i64, ModVec)> = vecs
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| (v.degree(fm).unwrap(), v.clone()))
        .collect();
    items.sort_by_key(|t| t.0);
    let field = fm.ring.field();
    let mut kept: Vec<(i64, ModVec)> = Vec::new();
    let mut idx = 0;
    while idx < items.len() {
        let t = items[idx].0;
        // normal forms modulo a basis complete up to degree t are linear in degree t
        let gb = (!kept.is_empty()).then(|| {
            let inputs: Vec<ModVec> = kept.iter().map(|(_, v)| v.clone()).collect();
            let shifts = kept.iter().map(|(d, _)| *d).collect();
            let options = GbOptions {
                degree_cap: Some(t),
                basis_only: true,
            };
            ModuleGb::compute(fm, &inputs, shifts, &options)
        });
        let mut index = std::collections::HashMap::new();
        let mut ech = Echelon::new(field);
        while idx < items.len() && items[idx].0 == t {
            let v = items[idx].1.clone();
            let nf = match &gb {
                Some(gb) => gb.normal_form(&v),
                None => v.clone(),
            };
            let row = graded_coordinates(fm, &nf, &mut index);
            if ech.insert(&row) {
                kept.push((t, v));
            }
            idx += 1;
        }
    }
    kept.into_iter().map(|(_, v)| v).collect()
}

/// Minimal homogeneous generating set extracted from `gens`; `None` if some generator is
/// not homogeneous.
pub fn minimal_generators(ring: &Ring, gens: &[Polynomial]) -> Option<Vec<Polynomial>> {
    if gens.iter().any(|g| !g.is_homogeneous()) {
        return None;
    }
    let fm = FreeModule::new(ring, vec![0]);
    let vecs: Vec<ModVec> = gens
        .iter()
        .map(|g| ModVec::from_components(&fm, std::slice::from_ref(g)))
        .collect();
    Some(
        minimize_homogeneous(&fm, &vecs)
            .into_iter()
            .map(|v| v.to_components(&fm).remove(0))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::GradedRing;
    use crate::scalar::Field;

    fn ring(names: &[&str], field: Field) -> Ring {
        GradedRing::standard(names, field).unwrap()
    }

    #[test]
    fn twisted_cubic_syzygies() {
        let r = ring(&["x", "y", "z", "w"], Field::Rational);
        let gens: Vec<Polynomial> = ["x*z-y^2", "x*w-y*z", "y*w-z^2"]
            .iter()
            .map(|s| Polynomial::parse(&r, s).unwrap())
            .collect();
        let ip = buchberger(&r, &gens).unwrap();
        assert_eq!(ip.syzygies().len(), 2);
        let second = ip.second_syzygies();
        assert!(second.relations.is_empty());
        let kos = ip.koszul_submodule();
        assert_eq!(kos.generators.len(), 3);
    }

    #[test]
    fn minimal_generators_drop_redundant_cubics() {
        let r = ring(&["x", "y"], Field::Prime(101));
        let gens: Vec<Polynomial> = ["x^2", "x*y", "x^3", "x^2*y", "y^3"]
            .iter()
            .map(|s| Polynomial::parse(&r, s).unwrap())
            .collect();
        let min = minimal_generators(&r, &gens).unwrap();
        assert_eq!(min.len(), 3);
    }

    #[test]
    fn normal_form_and_lift() {
        let r = ring(&["x", "y"], Field::Prime(7));
        let gens = vec![
            Polynomial::parse(&r, "x^2-y").unwrap(),
            Polynomial::parse(&r, "y^2").unwrap(),
        ];
        let ip = buchberger(&r, &gens).unwrap();
        let f = Polynomial::parse(&r, "x^4").unwrap();
        assert!(ip.contains(&f));
        let c = ip.lift(&f).unwrap();
        let back = c[0].mul(&gens[0]).add(&c[1].mul(&gens[1]));
        assert_eq!(back, f);
        assert!(!ip.contains(&Polynomial::parse(&r, "x^3").unwrap()));
    }

    #[test]
    fn inhomogeneous_lift_over_q_holds_modulo_square() {
        let r = ring(&["x", "y"], Field::Rational);
        let gens = vec![
            Polynomial::parse(&r, "x^2-y").unwrap(),
            Polynomial::parse(&r, "y^2").unwrap(),
        ];
        let ip = buchberger(&r, &gens).unwrap();
        let f = Polynomial::parse(&r, "x^4").unwrap();
        let c = ip.lift(&f).unwrap();
        let back = c[0].mul(&gens[0]).add(&c[1].mul(&gens[1]));
        let products: Vec<Polynomial> = gens.iter().flat_map(|a| gens.iter().map(|b| a.mul(b))).collect();
        let square = buchberger(&r, &products).unwrap();
        assert!(square.contains(&back.sub(&f)));
        for s in ip.syzygies() {
            let v = s[0].mul(&gens[0]).add(&s[1].mul(&gens[1]));
            assert!(square.contains(&v));
        }
    }
}

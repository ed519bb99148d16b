use std::collections::BTreeSet;

use hilbtnt::artinian::{filtration_piece, quotient_basis, Filtered};
use hilbtnt::certify::{elementary_certificate, CertifyOptions};
use hilbtnt::gallery::{build_m, build_r_standard, cevv143};
use hilbtnt::groebner::{buchberger, FreeModule, IdealPresentation, GbOptions, ModVec, ModuleGb};
use hilbtnt::homology::diagram::{diagram_maps, pair_data};
use hilbtnt::homology::{default_cutoff, ext1_from_relations, hom_nonneg_filtered, hom_space, t2_space};
use hilbtnt::linalg::Echelon;
use hilbtnt::{Field, Polynomial, Scalar};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

mod common;
use common::{random_sample, Sample, Truncation};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Prime(101)), Just(Field::Prime(7)), Just(Field::Rational)]
}

fn relation_value(sample: &Sample, rel: &[Polynomial]) -> Polynomial {
    let mut acc = Polynomial::zero(&sample.ring);
    for (r, g) in rel.iter().zip(&sample.gens) {
        acc = acc.add(&r.mul(g));
    }
    acc
}

/// Membership test for `I²`, from products of the reduced basis of `I`.
fn square(ideal: &IdealPresentation) -> impl Fn(&Polynomial) -> bool {
    let gb = ideal.groebner_basis();
    let fm = FreeModule::new(ideal.ring(), vec![0]);
    let products: Vec<ModVec> = gb
        .iter()
        .enumerate()
        .flat_map(|(i, a)| gb[i..].iter().map(move |b| a.mul(b)))
        .map(|p| ModVec::from_components(&fm, &[p]))
        .collect();
    let shifts = vec![0; products.len()];
    let options = GbOptions {
        basis_only: true,
        ..GbOptions::default()
    };
    let gb = ModuleGb::compute(&fm, &products, shifts, &options);
    move |p: &Polynomial| gb.normal_form(&ModVec::from_components(&fm, std::slice::from_ref(p))).is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 24,
        rng_seed: RngSeed::Fixed(20240611),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn syzygies_evaluate_to_zero(seed in any::<u64>(), field in field_strategy(), homogeneous in any::<bool>()) {
        let s = random_sample(seed, field, homogeneous, 12);
        let ideal = buchberger(&s.ring, &s.gens).unwrap();
        let p = ideal.presentation();
        prop_assert_eq!(p.generators.len(), s.gens.len());
        if ideal.is_homogeneous() || field != Field::Rational {
            for rel in &p.relations {
                prop_assert!(relation_value(&s, rel).is_zero());
            }
        } else {
            let in_square = square(&ideal);
            for rel in &p.relations {
                prop_assert!(in_square(&relation_value(&s, rel)));
            }
        }
    }

    #[test]
    fn groebner_basis_is_idempotent(seed in any::<u64>(), field in field_strategy(), homogeneous in any::<bool>()) {
        let s = random_sample(seed, field, homogeneous, 12);
        let ideal = buchberger(&s.ring, &s.gens).unwrap();
        let again = buchberger(&s.ring, ideal.groebner_basis()).unwrap();
        prop_assert_eq!(again.groebner_basis(), ideal.groebner_basis());
        for g in &s.gens {
            prop_assert!(again.contains(g));
        }
    }

    #[test]
    fn t2_lies_in_ext1_degreewise(seed in any::<u64>()) {
        let s = random_sample(seed, Field::Prime(101), true, 8);
        let ideal = buchberger(&s.ring, &s.gens).unwrap();
        let q = quotient_basis(&ideal).unwrap();
        let data = ideal.relation_data();
        let ext = ext1_from_relations(&data.module, &q.module()).series().unwrap();
        let t2 = t2_space(&data, &q.module()).series().unwrap();
        for (d, c) in t2.iter() {
            prop_assert!(c <= ext.get(d), "degree {}: T2 {} > Ext1 {}", d, c, ext.get(d));
        }
    }

    #[test]
    fn filtration_matches_truncation(seed in any::<u64>()) {
        let s = random_sample(seed, Field::Prime(101), false, 12);
        let ideal = buchberger(&s.ring, &s.gens).unwrap();
        let q = quotient_basis(&ideal).unwrap();
        let cutoff = 2 * s.n;
        let tr = Truncation::new(&s.ring, cutoff);
        let ibar = tr.ideal(&s.ring, &s.gens);
        for k in 0..cutoff {
            let mut sum = ibar.clone();
            for v in tr.tail(k, s.ring.field()) {
                sum.insert(&v);
            }
            let tail_dim = tr.tail(k, s.ring.field()).len();
            // dim O_{>=k} = dim (I + S_{>=k}) - dim I; dim I_{>=k} = dim (I ∩ S_{>=k})
            let o_dim = sum.rank() - ibar.rank();
            let i_dim = ibar.rank() + tail_dim - sum.rank();
            prop_assert_eq!(q.quotient_filtration(k as i64).unwrap().dim(), o_dim, "O_>={}", k);
            let piece = filtration_piece(&q, Filtered::Ideal, k as i64, cutoff as i64).unwrap();
            prop_assert_eq!(piece.len(), i_dim, "I_>={}", k);
            let mut span = Echelon::new(s.ring.field());
            for p in &piece {
                prop_assert!(ideal.contains(p));
                prop_assert!(p.min_degree().unwrap() >= k as i64);
                span.insert(&tr.vector(p));
            }
            prop_assert_eq!(span.rank(), i_dim);
        }
    }
}

#[test]
fn cutoff_is_stable_on_inhomogeneous_samples() {
    let mut checked = 0;
    for seed in 0..12u64 {
        let s = random_sample(500 + seed, Field::Prime(101), false, 10);
        let ideal = buchberger(&s.ring, &s.gens).unwrap();
        let q = quotient_basis(&ideal).unwrap();
        let hom = hom_space(&ideal.presentation(), &q.module());
        let base = default_cutoff(q.threshold().unwrap(), s.ring.max_weight());
        let dims: BTreeSet<usize> = (0..3)
            .map(|extra| {
                hom_nonneg_filtered(&q, &q, &hom, Some(base + extra))
                    .unwrap()
                    .space
                    .dim()
            })
            .collect();
        assert_eq!(dims.len(), 1, "sample {seed}: {dims:?}");
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn verdicts_are_invariant_under_scaling_and_permutation() {
    let options = CertifyOptions::default();
    let elementary = cevv143();
    let mut samples: Vec<Sample> = vec![Sample {
        ring: elementary.ring.clone(),
        gens: elementary.generators.clone(),
        n: 3,
    }];
    for seed in 0..10u64 {
        samples.push(random_sample(900 + seed, Field::Prime(101), seed % 2 == 0, 10));
    }
    for (seed, s) in samples.iter().enumerate() {
        let base = elementary_certificate(&buchberger(&s.ring, &s.gens).unwrap(), &options).unwrap();
        let n = s.ring.nvars();
        let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let transformed: Vec<Polynomial> = s
            .gens
            .iter()
            .enumerate()
            .map(|(k, g)| {
                g.permute_vars(&s.ring, &perm)
                    .scale(&Scalar::from_i64(s.ring.field(), 3 + k as i64))
            })
            .collect();
        let other = elementary_certificate(&buchberger(&s.ring, &transformed).unwrap(), &options).unwrap();
        assert_eq!(base.verdict, other.verdict, "seed {seed}");
        assert_eq!(base.hilbert_function, other.hilbert_function, "seed {seed}");
        assert_eq!(base.hom_series, other.hom_series, "seed {seed}");
        assert_eq!(base.dimension, other.dimension, "seed {seed}");
        if seed == 0 {
            assert_eq!(other.dimension, Some(25));
        }
    }
}

#[test]
fn diagram_bookkeeping_for_r2_in_m2() {
    let m = build_m(2, Field::Rational).unwrap().ideal().unwrap();
    let r = build_r_standard(2, Field::Rational).unwrap().ideal().unwrap();
    let data = pair_data(&m, &r).unwrap();
    let d = diagram_maps(&data).unwrap();
    assert!(d.exact);
    let s = |h: &hilbtnt::homology::GradedHom| h.series().unwrap();
    // 0 → Hom(J,O_R) → Hom(I_R,O_R) → Hom(I_M,O_R) → Ext1(J,O_R)
    let res = &d.restriction;
    assert_eq!(res.source, s(&d.hom_r_or));
    assert_eq!(res.target, s(&d.hom_m_or));
    assert_eq!(res.kernel(), s(&d.hom_j_or));
    let ext_r = d.ext1_j_or.series().unwrap();
    assert_eq!(d.partial.target, ext_r);
    for (deg, c) in d.partial.source.iter() {
        assert_eq!(d.partial.rank.get(deg), c - res.rank.get(deg));
    }
    // 0 → Hom(J,O_M) → Hom(I_R,O_M) → Hom(I_M,O_M) → Ext1(J,O_M)
    let res_m = &d.restriction_m;
    assert_eq!(res_m.source, s(&d.hom_r_om));
    assert_eq!(res_m.kernel(), s(&d.hom_j_om));
    assert_eq!(d.psi.target, d.ext1_j_om.series().unwrap());
    for (deg, c) in d.psi.source.iter() {
        assert_eq!(d.psi.rank.get(deg), c - res_m.rank.get(deg));
    }
    // 0 → Hom(I_M,J) → Hom(I_M,O_M) → Hom(I_M,O_R)
    assert_eq!(d.phi.source, s(&d.hom_m_om));
    assert_eq!(d.phi.kernel(), s(&d.hom_m_j));
    assert_eq!(d.hom_m_om.dim(), 36);
    assert!(d.phi.surjective_nonneg() && d.partial.surjective_nonneg());
}

//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hilbtnt::artinian::quotient_basis;
use hilbtnt::certify::{
    dimension_formulas, elementary_certificate, pair_certificate, tnt_check, Certificate, CertifyOptions, Verdict,
    CHECK_EXT1, CHECK_PARTIAL, CHECK_PHI, CHECK_PSI, CHECK_REL_DIM, CHECK_TNT,
};
use hilbtnt::gallery::{
    build_m, build_r_standard, cevv143, determinant, groebnerfan, naive56, weighted_counterexample,
};
use hilbtnt::groebner::{buchberger, IdealPresentation};
use hilbtnt::homology::diagram::{diagram_maps, pair_data};
use hilbtnt::homology::{default_cutoff, ext1_from_relations, hom_nonneg_filtered, hom_space, t2_space};
use hilbtnt::series::Series;
use hilbtnt::{Field, GradedRing, Polynomial, Ring, Scalar};

mod common;
use common::{oracle, random_sample, Sample};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, actual: T, expected: T) -> Result<(), String> {
    ensure(actual == expected, format!("{what}: expected {expected:?}, got {actual:?}"))
}

fn err(e: hilbtnt::Error) -> String {
    e.to_string()
}

fn binom2(e: i64) -> i64 {
    e * (e + 1) / 2
}

fn closed_form(e: i64) -> i64 {
    e.pow(4) + 2 * e.pow(3) - 4 * e + 1
}

fn tnt_int(cert: &Certificate, key: &str) -> Option<i64> {
    cert.check(CHECK_TNT).and_then(|c| c.get_int(key))
}

fn tnt_passed(cert: &Certificate) -> Option<bool> {
    cert.check(CHECK_TNT).and_then(|c| c.passed)
}

fn criterion_1() -> Outcome {
    let options = CertifyOptions::default();
    let r = build_r_standard(2, Field::Rational).map_err(err)?;
    let ideal = r.ideal().map_err(err)?;
    let cert = elementary_certificate(&ideal, &options).map_err(err)?;
    eq("Hilbert function", cert.hilbert_function.as_deref(), Some("1+4T+3T^2"))?;
    eq("dim Hom", tnt_int(&cert, "hom_dim"), Some(25))?;
    eq("dim Hom_<0", tnt_int(&cert, "hom_negative_dim"), Some(4))?;
    eq("tnt", tnt_passed(&cert), Some(true))?;
    let m = build_m(2, Field::Rational).map_err(err)?.ideal().map_err(err)?;
    let pair = pair_certificate(&m, &ideal, false, &options).map_err(err)?;
    let expected = 2i64.pow(4) + 2 * 2i64.pow(3) - 4 * 2 + 1;
    eq("pair dimension", pair.dimension, Some(expected as usize))?;
    eq("pair dimension", expected, 25)?;
    Ok(format!("HF 1+4T+3T^2, Hom 25, Hom_<0 4, TNT, pair dimension {expected}"))
}

fn criterion_2() -> Outcome {
    let options = CertifyOptions::default();
    let r = build_r_standard(3, Field::Rational).map_err(err)?.ideal().map_err(err)?;
    let m = build_m(3, Field::Rational).map_err(err)?.ideal().map_err(err)?;
    let pair = pair_certificate(&m, &r, false, &options).map_err(err)?;
    eq("Hilbert function", pair.hilbert_function.as_deref(), Some("1+4T+10T^2+12T^3+8T^4"))?;
    eq("Hom series", pair.hom_series.as_deref(), Some("4T^-1+56+64T"))?;
    let total = Series::parse(pair.hom_series.as_deref().unwrap()).unwrap().total();
    eq("dim Hom", total, 124)?;
    eq("tnt", tnt_passed(&pair), Some(true))?;
    let rel = pair.check(CHECK_REL_DIM).ok_or("no relative dimension check")?;
    let parts: Vec<Option<i64>> = [
        "n",
        "hom_im_om_nonneg",
        "ext1_j_or_nonneg",
        "hom_j_or_nonneg",
        "hom_im_j_nonneg",
        "dimension",
    ]
    .iter()
    .map(|k| rel.get_int(k))
    .collect();
    eq(
        "n + Hom(I_M,O_M) - Ext1(J,O_R) + Hom(J,O_R) - Hom(I_M,J)",
        parts,
        vec![Some(4), Some(120), Some(0), Some(8), Some(8), Some(124)],
    )?;
    eq("closed form", closed_form(3), 124)?;
    eq("pair dimension", pair.dimension, Some(124))?;
    for name in [CHECK_PHI, CHECK_PSI, CHECK_PARTIAL] {
        let c = pair.check(name).ok_or(format!("missing {name}"))?;
        eq(name, c.passed, Some(true))?;
    }
    eq("verdict", pair.verdict, Verdict::RelativeSmoothElementary)?;
    Ok("Hom 4T^-1+56+64T, pair 4+120-0+8-8 = 124, phi/psi/partial onto in degrees >= 0".into())
}

fn criterion_3() -> Outcome {
    let mut parts = Vec::new();
    for e in [2i64, 3] {
        let m = build_m(e, Field::Rational).map_err(err)?.ideal().map_err(err)?;
        let q = quotient_basis(&m).map_err(err)?;
        let hom = hom_space(&m.presentation(), &q.module());
        let expected = 4 * binom2(e) * binom2(e);
        eq(&format!("dim Hom for e = {e}"), hom.dim() as i64, expected)?;
        let s = hom.series().ok_or("M(e) is graded")?;
        eq(&format!("degree -1 piece for e = {e}"), s.get(-1) as i64, 2 * e * (e + 1))?;
        parts.push(format!("e={e}: {expected}, {}", 2 * e * (e + 1)));
    }
    Ok(parts.join("; "))
}

fn syzygy_degrees(ideal: &IdealPresentation) -> BTreeMap<i64, usize> {
    let degs = ideal.generator_degrees();
    let mut counts = BTreeMap::new();
    for s in ideal.syzygies() {
        let d = s
            .iter()
            .zip(&degs)
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, d)| p.degree().unwrap() + d)
            .max()
            .unwrap();
        *counts.entry(d).or_insert(0) += 1;
    }
    counts
}

fn criterion_4() -> Outcome {
    let spec = naive56();
    let ideal = spec.ideal().map_err(err)?;
    let cert = elementary_certificate(&ideal, &CertifyOptions::default()).map_err(err)?;
    eq("degree", cert.degree, Some(56))?;
    eq("Hom series", cert.hom_series.as_deref(), Some("4T^-1+98+84T+32T^2"))?;
    let ext = cert.check(CHECK_EXT1).ok_or("no Ext1 check")?;
    eq(
        "Ext1 series",
        ext.get("series").map(|p| p.to_string()),
        Some("60T^-3+204T^-2+60T^-1".to_string()),
    )?;
    eq("Ext1_>=0", ext.get_int("nonneg_dim"), Some(0))?;
    eq("verdict", cert.verdict, Verdict::SmoothElementary)?;
    eq("dimension", cert.dimension, Some(218))?;
    let syz = syzygy_degrees(&ideal);
    eq("syzygy degrees", syz, BTreeMap::from([(6, 16), (7, 4)]))?;
    Ok("deg 56, Ext1_>=0 = 0, smooth of dimension 218, syzygies S(-6)^16+S(-7)^4".into())
}

fn symbolic_determinant(m: &[Vec<Polynomial>], ring: &Ring) -> Polynomial {
    if m.is_empty() {
        return Polynomial::from_i64(ring, 1);
    }
    let mut acc = Polynomial::zero(ring);
    for j in 0..m.len() {
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = m[0][j].mul(&symbolic_determinant(&minor, ring));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn criterion_5() -> Outcome {
    let options = CertifyOptions::default();
    let one = groebnerfan(1);
    let r1 = one.ideal().map_err(err)?;
    let t1 = tnt_check(&r1, &options).map_err(err)?;
    eq("tnt at t = 1", t1.status, Some(true))?;
    let m = one.pair_with.as_ref().ok_or("no paired ideal")?.ideal().map_err(err)?;
    let pair = pair_certificate(&m, &r1, false, &options).map_err(err)?;
    eq("component dimension at t = 1", pair.dimension, Some(124))?;
    let t0 = tnt_check(&groebnerfan(0).ideal().map_err(err)?, &options).map_err(err)?;
    eq("tnt at t = 0", t0.status, Some(false))?;

    let field = Field::Prime(3);
    let ring = GradedRing::standard(&["t"], field).map_err(err)?;
    let c = |v: i64| Polynomial::from_i64(&ring, v);
    let t = Polynomial::var(&ring, 0);
    let symbolic = vec![
        vec![c(-1), c(0), c(-1)],
        vec![c(0), t.clone(), c(0)],
        vec![c(-1), c(0), c(1)],
    ];
    let det = symbolic_determinant(&symbolic, &ring);
    eq("det as a polynomial in t", det.clone(), t)?;
    for v in 0..3i64 {
        let spec = groebnerfan(v);
        let mat = spec.matrix.as_ref().ok_or("no matrix")?;
        for (i, row) in mat.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let entry = &symbolic[i][j];
                let at = if entry.is_zero() || entry.degree() == Some(0) {
                    entry.leading_coefficient().cloned().unwrap_or_else(|| Scalar::zero(field))
                } else {
                    Scalar::from_i64(field, v)
                };
                eq(&format!("entry ({i},{j}) at t = {v}"), x.clone(), at)?;
            }
        }
        eq(&format!("det at t = {v}"), determinant(mat, field), Scalar::from_i64(field, v))?;
    }
    Ok("t=1 TNT with dimension 124, t=0 not TNT, det = t over F3".into())
}

fn criterion_6() -> Outcome {
    let options = CertifyOptions::default();
    let spec = weighted_counterexample();
    let weighted = tnt_check(&spec.ideal().map_err(err)?, &options).map_err(err)?;
    eq("tnt with weights (3,1,3,1)", weighted.status, Some(false))?;
    let std_ring = GradedRing::new(spec.ring.names().to_vec(), vec![1; 4], spec.ring.field()).map_err(err)?;
    let gens: Vec<Polynomial> = spec.generators.iter().map(|g| g.to_ring(&std_ring)).collect();
    let standard = tnt_check(&buchberger(&std_ring, &gens).map_err(err)?, &options).map_err(err)?;
    eq("tnt with standard grading", standard.status, Some(true))?;
    Ok("weighted: not TNT; standard: TNT".into())
}

fn criterion_7() -> Outcome {
    let mut graded = 0;
    let mut count = 0;
    for k in 0..32u64 {
        let s = random_sample(7000 + k, Field::Prime(101), k % 2 == 0, 12);
        let ideal = buchberger(&s.ring, &s.gens).map_err(err)?;
        let q = quotient_basis(&ideal).map_err(err)?;
        ensure(q.dim() <= 12, format!("sample {k} has length {}", q.dim()))?;
        let hom = hom_space(&ideal.presentation(), &q.module());
        let o = oracle(&s.ring, &s.gens, s.n, ideal.is_homogeneous());
        eq(&format!("sample {k} length"), q.dim(), o.quotient_dim)?;
        eq(&format!("sample {k} dim Hom"), hom.dim(), o.total)?;
        if let Some(g) = &o.graded {
            let ours: BTreeMap<i64, usize> = hom.series().ok_or("graded sample")?.iter().collect();
            eq(&format!("sample {k} graded Hom"), &ours, g)?;
            graded += 1;
        }
        count += 1;
    }
    Ok(format!("{count} ideals over F101 ({graded} graded) match the truncation oracle"))
}

fn relation_value(s: &Sample, rel: &[Polynomial]) -> Polynomial {
    rel.iter()
        .zip(&s.gens)
        .fold(Polynomial::zero(&s.ring), |acc, (r, g)| acc.add(&r.mul(g)))
}

fn criterion_8() -> Outcome {
    let options = CertifyOptions::default();
    // syzygies and Gröbner bases
    let mut samples = Vec::new();
    for k in 0..8u64 {
        samples.push(random_sample(8000 + k, Field::Prime(101), k % 2 == 0, 12));
    }
    for k in 0..3u64 {
        samples.push(random_sample(8100 + k, Field::Prime(7), k % 2 == 1, 12));
        samples.push(random_sample(8200 + k, Field::Rational, true, 12));
    }
    for (k, s) in samples.iter().enumerate() {
        let ideal = buchberger(&s.ring, &s.gens).map_err(err)?;
        for rel in ideal.syzygies() {
            ensure(relation_value(s, rel).is_zero(), format!("sample {k}: syzygy does not evaluate to zero"))?;
        }
        let again = buchberger(&s.ring, ideal.groebner_basis()).map_err(err)?;
        eq(&format!("sample {k}: GB idempotence"), again.groebner_basis(), ideal.groebner_basis())?;
    }
    // T2 inside Ext1
    for k in 0..4u64 {
        let s = random_sample(8300 + k, Field::Prime(101), true, 8);
        let ideal = buchberger(&s.ring, &s.gens).map_err(err)?;
        let q = quotient_basis(&ideal).map_err(err)?;
        let data = ideal.relation_data();
        let ext = ext1_from_relations(&data.module, &q.module()).series().ok_or("graded")?;
        let t2 = t2_space(&data, &q.module()).series().ok_or("graded")?;
        for (d, c) in t2.iter() {
            ensure(c <= ext.get(d), format!("T2 exceeds Ext1 in degree {d}"))?;
        }
    }
    // diagram bookkeeping for R(2) ⊆ M(2)
    let m = build_m(2, Field::Rational).map_err(err)?.ideal().map_err(err)?;
    let r = build_r_standard(2, Field::Rational).map_err(err)?.ideal().map_err(err)?;
    let d = diagram_maps(&pair_data(&m, &r).map_err(err)?).map_err(err)?;
    ensure(d.exact, "diagram rows and columns are not exact")?;
    let series = |h: &hilbtnt::homology::GradedHom| h.series().unwrap();
    eq("restriction kernel", d.restriction.kernel(), series(&d.hom_j_or))?;
    eq("restriction_m kernel", d.restriction_m.kernel(), series(&d.hom_j_om))?;
    eq("phi kernel", d.phi.kernel(), series(&d.hom_m_j))?;
    for (deg, c) in d.partial.source.iter() {
        eq("partial rank", d.partial.rank.get(deg), c - d.restriction.rank.get(deg))?;
    }
    for (deg, c) in d.psi.source.iter() {
        eq("psi rank", d.psi.rank.get(deg), c - d.restriction_m.rank.get(deg))?;
    }
    // cutoff stability
    let mut stable = 0;
    for k in 0..10u64 {
        let s = random_sample(8400 + k, Field::Prime(101), false, 10);
        let ideal = buchberger(&s.ring, &s.gens).map_err(err)?;
        ensure(!ideal.is_homogeneous(), format!("sample {k} is homogeneous"))?;
        let q = quotient_basis(&ideal).map_err(err)?;
        let hom = hom_space(&ideal.presentation(), &q.module());
        let base = default_cutoff(q.threshold().map_err(err)?, s.ring.max_weight());
        let dims: BTreeSet<usize> = (0..3)
            .map(|extra| hom_nonneg_filtered(&q, &q, &hom, Some(base + extra)).map(|f| f.space.dim()))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        eq(&format!("sample {k}: distinct Hom_>=0 dimensions"), dims.len(), 1)?;
        stable += 1;
    }
    // scalar and permutation invariance
    let e = cevv143();
    let mut inv_samples = vec![Sample {
        ring: e.ring.clone(),
        gens: e.generators.clone(),
        n: 3,
    }];
    for k in 0..4u64 {
        inv_samples.push(random_sample(8500 + k, Field::Prime(101), k % 2 == 0, 10));
    }
    for (k, s) in inv_samples.iter().enumerate() {
        let base = elementary_certificate(&buchberger(&s.ring, &s.gens).map_err(err)?, &options).map_err(err)?;
        let n = s.ring.nvars();
        let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let moved: Vec<Polynomial> = s
            .gens
            .iter()
            .enumerate()
            .map(|(j, g)| g.permute_vars(&s.ring, &perm).scale(&Scalar::from_i64(s.ring.field(), 2 + j as i64)))
            .collect();
        let other = elementary_certificate(&buchberger(&s.ring, &moved).map_err(err)?, &options).map_err(err)?;
        eq(&format!("sample {k}: verdict"), other.verdict, base.verdict)?;
        eq(&format!("sample {k}: dimension"), other.dimension, base.dimension)?;
        eq(&format!("sample {k}: Hom series"), other.hom_series, base.hom_series)?;
    }
    Ok(format!(
        "syzygies, GB idempotence ({} samples), T2 in Ext1, diagram exactness, cutoff stability ({stable}), invariance",
        samples.len()
    ))
}

fn criterion_9() -> Outcome {
    let options = CertifyOptions::default();
    let mut cases: Vec<(String, Ring, Vec<String>)> = Vec::new();
    let xy = GradedRing::standard(&["x", "y"], Field::Rational).map_err(err)?;
    cases.push(("(x^2,y^2)".into(), xy.clone(), vec!["x^2".into(), "y^2".into()]));
    cases.push(("(x,y)^2".into(), xy.clone(), vec!["x^2".into(), "x*y".into(), "y^2".into()]));
    let xyz = GradedRing::standard(&["x", "y", "z"], Field::Rational).map_err(err)?;
    for (ring, n) in [(&xy, 2usize), (&xyz, 3)] {
        for e in [2i64, 3] {
            let gens = ring.monomials_of_degree(e).into_iter().map(|m| Polynomial::monomial(ring, m).to_string());
            cases.push((format!("m^{e} in {n} variables"), ring.clone(), gens.collect()));
        }
    }
    for (name, ring, gens) in &cases {
        let gens: Vec<Polynomial> = gens.iter().map(|g| Polynomial::parse(ring, g)).collect::<Result<_, _>>().map_err(err)?;
        let ideal = buchberger(ring, &gens).map_err(err)?;
        let cert = elementary_certificate(&ideal, &options).map_err(err)?;
        eq(&format!("{name}: tnt"), tnt_passed(&cert), Some(false))?;
        eq(&format!("{name}: verdict"), cert.verdict, Verdict::NotTnt)?;
    }
    Ok(format!("{} smoothable ideals are not TNT", cases.len()))
}

fn criterion_10() -> Outcome {
    for e in 2..=10i64 {
        let lhs = 4 * (binom2(e) * binom2(e) - 1) - (e - 1) * (e + 5);
        eq(&format!("identity at e = {e}"), lhs, closed_form(e))?;
        let f = dimension_formulas(e).map_err(err)?;
        eq(&format!("formulas at e = {e}"), (f.dim_from_degree, f.dim_closed_form), (lhs, lhs))?;
    }
    Ok("4(C(e+1,2)^2 - 1) - (e-1)(e+5) = e^4+2e^3-4e+1 for 2 <= e <= 10".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("R(2) over Q", criterion_1, Some(1)),
        ("R(3) over Q", criterion_2, Some(30)),
        ("M(e) tangent space, e = 2, 3", criterion_3, Some(60)),
        ("naive56 over F2", criterion_4, Some(120)),
        ("groebnerfan over F3", criterion_5, Some(60)),
        ("weighted counterexample", criterion_6, Some(5)),
        ("oracle equivalence", criterion_7, None),
        ("property suite", criterion_8, None),
        ("negative controls", criterion_9, None),
        ("dimension identity", criterion_10, None),
    ];
    let mut failures = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > Duration::from_secs(*l) => {
                Err(format!("took {:.2}s, limit {l}s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => {
                failures += 1;
                ("FAIL", e.clone())
            }
        };
        println!("criterion {:>2} {tag} [{name}] {detail} ({:.2}s)", k + 1, elapsed.as_secs_f64());
    }
    if failures == 0 {
        println!("all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}

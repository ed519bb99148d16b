//! Named example ideals with their known invariants.

use serde::Serialize;

use crate::certify::{
    elementary_certificate, pair_certificate, Certificate, CertifyOptions, CHECK_EXT1, CHECK_TNT,
};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, IdealPresentation};
use crate::linalg::rank;
use crate::poly::Polynomial;
use crate::ring::{GradedRing, Monomial, Ring};
use crate::scalar::{Field, Scalar};

pub const CATALOG: &[&str] = &[
    "M(e)",
    "R(e)",
    "naive56",
    "groebnerfan(t)",
    "cevv143",
    "weighted_counterexample",
];

/// A constructed example: ring, generators and the invariants it is expected to have.
#[derive(Debug, Clone)]
pub struct GallerySpec {
    pub name: String,
    pub ring: Ring,
    pub generators: Vec<Polynomial>,
    /// Coefficient matrix of the form `s`, indexed by the exponents of `x1` and `y1`.
    pub matrix: Option<Vec<Vec<Scalar>>>,
    pub expected: Vec<(String, String)>,
    pub warnings: Vec<String>,
    /// Pair `R ⊆ M` to certify with the relative criterion, if any.
    pub pair_with: Option<Box<GallerySpec>>,
}

impl GallerySpec {
    pub fn ideal(&self) -> Result<IdealPresentation> {
        buchberger(&self.ring, &self.generators)
    }

    pub fn expected(&self, key: &str) -> Option<&str> {
        self.expected
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn expect(&mut self, key: &str, value: impl ToString) {
        self.expected.push((key.to_string(), value.to_string()));
    }
}

fn binom2(e: i64) -> i64 {
    e * (e + 1) / 2
}

fn plane_ring(field: Field) -> Ring {
    GradedRing::standard(&["x1", "x2", "y1", "y2"], field).unwrap()
}

fn powers(ring: &Ring, a: usize, b: usize, e: u32) -> Vec<Polynomial> {
    (0..=e)
        .rev()
        .map(|i| {
            let mut exps = vec![0; ring.nvars()];
            exps[a] = i;
            exps[b] = e - i;
            Polynomial::monomial(ring, Monomial::new(exps))
        })
        .collect()
}

fn m_generators(ring: &Ring, e: u32) -> Vec<Polynomial> {
    let mut g = powers(ring, 0, 1, e);
    g.extend(powers(ring, 2, 3, e));
    g
}

fn check_e(e: i64, min: i64) -> Result<u32> {
    if e < min || e > 12 {
        return Err(Error::InvalidShape(format!("e must lie in [{min}, 12], got {e}")));
    }
    Ok(e as u32)
}

/// `(x1, x2)^e + (y1, y2)^e`.
pub fn build_m(e: i64, field: Field) -> Result<GallerySpec> {
    let eu = check_e(e, 1)?;
    let ring = plane_ring(field);
    let generators = m_generators(&ring, eu);
    let mut spec = GallerySpec {
        name: format!("M({e})"),
        ring,
        generators,
        matrix: None,
        expected: Vec::new(),
        warnings: Vec::new(),
        pair_with: None,
    };
    let deg = binom2(e) * binom2(e);
    spec.expect("degree", deg);
    spec.expect("hom_dim", 4 * deg);
    if e >= 2 {
        spec.expect("hom_degree_-1", 2 * e * (e + 1));
    }
    if e == 3 {
        spec.expect("hilbert_function", "1+4T+10T^2+12T^3+9T^4");
        spec.expect("hom_nonneg_dim", 120);
    }
    Ok(spec)
}

/// `s = Σ c_ij x1^i x2^(e-1-i) y1^j y2^(e-1-j)`.
pub fn form_s(ring: &Ring, e: u32, c: &[Vec<Scalar>]) -> Polynomial {
    let mut terms = Vec::new();
    for (i, row) in c.iter().enumerate() {
        for (j, cij) in row.iter().enumerate() {
            let (i, j) = (i as u32, j as u32);
            let m = Monomial::new(vec![i, e - 1 - i, j, e - 1 - j]);
            terms.push((m, cij.clone()));
        }
    }
    Polynomial::from_terms(ring, terms)
}

pub fn identity_matrix(e: usize, field: Field) -> Vec<Vec<Scalar>> {
    (0..e)
        .map(|i| {
            (0..e)
                .map(|j| {
                    if i == j {
                        Scalar::one(field)
                    } else {
                        Scalar::zero(field)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn matrix_rank(c: &[Vec<Scalar>], field: Field) -> usize {
    let rows: Vec<Vec<(usize, Scalar)>> = c
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect()
        })
        .collect();
    rank(field, &rows)
}

/// Determinant by fraction-free expansion (small matrices only).
pub fn determinant(c: &[Vec<Scalar>], field: Field) -> Scalar {
    let n = c.len();
    if n == 0 {
        return Scalar::one(field);
    }
    let mut acc = Scalar::zero(field);
    for j in 0..n {
        let minor: Vec<Vec<Scalar>> = c[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = c[0][j].mul(&determinant(&minor, field));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// `I_M(e) + (s)` for the form `s` with coefficient matrix `c`.
pub fn build_r(e: i64, c: &[Vec<Scalar>], field: Field) -> Result<GallerySpec> {
    let eu = check_e(e, 1)?;
    if c.len() != eu as usize || c.iter().any(|r| r.len() != eu as usize) {
        return Err(Error::InvalidShape(format!("coefficient matrix must be {e}×{e}")));
    }
    let ring = plane_ring(field);
    let mut generators = m_generators(&ring, eu);
    generators.push(form_s(&ring, eu, c));
    let mut warnings = Vec::new();
    let invertible = matrix_rank(c, field) == eu as usize;
    if !invertible {
        warnings.push("coefficient matrix is singular: the form is not general".into());
    }
    let mut spec = GallerySpec {
        name: format!("R({e})"),
        ring,
        generators,
        matrix: Some(c.to_vec()),
        expected: Vec::new(),
        warnings,
        pair_with: None,
    };
    if invertible {
        spec.expect("degree", binom2(e) * binom2(e) - 1);
    }
    Ok(spec)
}

/// `R(e)` with the identity matrix, paired with `M(e)`.
pub fn build_r_standard(e: i64, field: Field) -> Result<GallerySpec> {
    let eu = check_e(e, 2)?;
    let mut spec = build_r(e, &identity_matrix(eu as usize, field), field)?;
    spec.pair_with = Some(Box::new(build_m(e, field)?));
    spec.expect("tnt", true);
    spec.expect("pair_dimension", e.pow(4) + 2 * e.pow(3) - 4 * e + 1);
    match e {
        2 => {
            spec.expect("hilbert_function", "1+4T+3T^2");
            spec.expect("hom_dim", 25);
            spec.expect("hom_negative_dim", 4);
        }
        3 => {
            spec.expect("hilbert_function", "1+4T+10T^2+12T^3+8T^4");
            spec.expect("hom_series", "4T^-1+56+64T");
        }
        _ => {}
    }
    Ok(spec)
}

fn parse_all(ring: &Ring, gens: &[&str]) -> Vec<Polynomial> {
    gens.iter()
        .map(|s| Polynomial::parse(ring, s).expect("gallery generator parses"))
        .collect()
}

pub fn naive56() -> GallerySpec {
    let ring = GradedRing::standard(&["x", "y", "z", "t"], Field::Prime(2)).unwrap();
    let generators = parse_all(
        &ring,
        &[
            "x^3",
            "y^3",
            "z^3",
            "t^3",
            "x*y^2*z + y^2*z^2 + x^2*y*t",
            "y*z^2*t + x*z*t^2",
        ],
    );
    let mut spec = GallerySpec {
        name: "naive56".into(),
        ring,
        generators,
        matrix: None,
        expected: Vec::new(),
        warnings: Vec::new(),
        pair_with: None,
    };
    spec.expect("hilbert_function", "1+4T+10T^2+16T^3+17T^4+8T^5");
    spec.expect("degree", 56);
    spec.expect("hom_series", "4T^-1+98+84T+32T^2");
    spec.expect("ext1_series", "60T^-3+204T^-2+60T^-1");
    spec.expect("ext1_nonneg_dim", 0);
    spec.expect("verdict", "smooth-elementary");
    spec.expect("dimension", 218);
    spec.expect("syzygy_degrees", "S(-6)^16+S(-7)^4");
    spec
}

/// The form `s_t` over `F_3` and its coefficient matrix in the `x1`/`x3`-exponent indexing.
pub fn groebnerfan(t: i64) -> GallerySpec {
    let field = Field::Prime(3);
    let ring = GradedRing::standard(&["x1", "x2", "x3", "x4"], field).unwrap();
    let mut generators = m_generators(&ring, 3);
    let s = format!("x1^2*x3^2 - x2^2*x3^2 + {}*x1*x2*x3*x4 - x1^2*x4^2 - x2^2*x4^2", t.rem_euclid(3));
    generators.extend(parse_all(&ring, &[&s]));
    let sc = |v: i64| Scalar::from_i64(field, v);
    let matrix = vec![
        vec![sc(-1), sc(0), sc(-1)],
        vec![sc(0), sc(t), sc(0)],
        vec![sc(-1), sc(0), sc(1)],
    ];
    let mut spec = GallerySpec {
        name: format!("groebnerfan({t})"),
        ring: ring.clone(),
        generators,
        matrix: Some(matrix),
        expected: Vec::new(),
        warnings: Vec::new(),
        pair_with: None,
    };
    spec.expect("degree", 35);
    spec.expect("determinant", t.rem_euclid(3));
    spec.expect("tnt", t.rem_euclid(3) != 0);
    if t.rem_euclid(3) != 0 {
        spec.expect("dimension", 124);
        let mut m = build_m(3, field).expect("e = 3 is valid");
        m.ring = ring.clone();
        m.generators = m_generators(&ring, 3);
        spec.pair_with = Some(Box::new(m));
        spec.expect("pair_dimension", 124);
    }
    spec
}

fn cevv_generators(ring: &Ring) -> Vec<Polynomial> {
    parse_all(
        ring,
        &["x1^2", "x1*x2", "x2^2", "x3^2", "x3*x4", "x4^2", "x1*x3 + x2*x4"],
    )
}

pub fn cevv143() -> GallerySpec {
    let ring = GradedRing::standard(&["x1", "x2", "x3", "x4"], Field::Rational).unwrap();
    let generators = cevv_generators(&ring);
    let mut spec = GallerySpec {
        name: "cevv143".into(),
        ring,
        generators,
        matrix: None,
        expected: Vec::new(),
        warnings: Vec::new(),
        pair_with: None,
    };
    spec.expect("hilbert_function", "1+4T+3T^2");
    spec.expect("hom_dim", 25);
    spec.expect("tnt", true);
    spec
}

pub fn weighted_counterexample() -> GallerySpec {
    let names: Vec<String> = ["x1", "x2", "x3", "x4"].iter().map(|s| s.to_string()).collect();
    let ring = GradedRing::new(names, vec![3, 1, 3, 1], Field::Rational).unwrap();
    let generators = cevv_generators(&ring);
    let mut spec = GallerySpec {
        name: "weighted_counterexample".into(),
        ring,
        generators,
        matrix: None,
        expected: Vec::new(),
        warnings: Vec::new(),
        pair_with: None,
    };
    spec.expect("degree", 8);
    spec.expect("tnt", false);
    spec.expect("standard_grading_tnt", true);
    spec
}

fn parse_param(name: &str) -> (String, Option<i64>) {
    let name = name.trim();
    if let Some(open) = name.find('(') {
        if let Some(inner) = name[open + 1..].strip_suffix(')') {
            if let Ok(v) = inner.trim().parse() {
                return (name[..open].to_string(), Some(v));
            }
        }
    }
    (name.to_string(), None)
}

/// Looks up a gallery entry. `M(3)`, `R(2)` and `groebnerfan(1)` carry their parameter in the
/// name; `param` supplies it otherwise.
pub fn build_example(name: &str, param: Option<i64>) -> Result<GallerySpec> {
    let (base, inline) = parse_param(name);
    let p = inline.or(param);
    match base.to_ascii_lowercase().as_str() {
        "m" | "me" | "m(e)" => build_m(p.unwrap_or(3), Field::Rational),
        "r" | "re" | "r(e)" => build_r_standard(p.unwrap_or(3), Field::Rational),
        "naive56" => Ok(naive56()),
        "groebnerfan" | "groebnerfan(t)" => Ok(groebnerfan(p.unwrap_or(1))),
        "cevv143" => Ok(cevv143()),
        "weighted_counterexample" => Ok(weighted_counterexample()),
        _ => Err(Error::UnknownGalleryEntry {
            name: name.to_string(),
            available: CATALOG.join(", "),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffItem {
    pub key: String,
    pub expected: String,
    pub actual: String,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryReport {
    pub name: String,
    pub certificate: Certificate,
    pub pair_certificate: Option<Certificate>,
    pub items: Vec<DiffItem>,
}

impl GalleryReport {
    pub fn all_match(&self) -> bool {
        self.items.iter().all(|i| i.matches)
    }
}

fn syzygy_degree_string(ideal: &IdealPresentation) -> String {
    let degs = ideal.generator_degrees();
    let mut counts = std::collections::BTreeMap::new();
    for s in ideal.syzygies() {
        let d = s
            .iter()
            .zip(&degs)
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, d)| p.degree().unwrap() + d)
            .max()
            .unwrap_or(0);
        *counts.entry(d).or_insert(0) += 1;
    }
    counts
        .iter()
        .map(|(d, c)| format!("S(-{d})^{c}"))
        .collect::<Vec<_>>()
        .join("+")
}

/// Recomputes every expected invariant of `spec` and reports matches.
pub fn verify_gallery(spec: &GallerySpec, options: &CertifyOptions) -> Result<GalleryReport> {
    let ideal = spec.ideal()?;
    let cert = elementary_certificate(&ideal, options)?;
    let pair = match (&spec.pair_with, spec.expected("pair_dimension")) {
        (Some(m), Some(_)) => {
            let mi = m.ideal()?;
            Some(pair_certificate(&mi, &ideal, false, options)?)
        }
        _ => None,
    };
    let tnt = cert.check(CHECK_TNT).expect("tnt check");
    let mut items = Vec::new();
    for (key, expected) in &spec.expected {
        let actual: String = match key.as_str() {
            "degree" => cert.degree.map(|d| d.to_string()).unwrap_or_default(),
            "hilbert_function" => cert.hilbert_function.clone().unwrap_or_default(),
            "hom_series" => cert.hom_series.clone().unwrap_or_default(),
            "hom_dim" => tnt.get_int("hom_dim").unwrap().to_string(),
            "hom_nonneg_dim" => tnt
                .get_int("hom_nonneg_dim")
                .map(|v| v.to_string())
                .unwrap_or_default(),
            "hom_negative_dim" => tnt
                .get_int("hom_negative_dim")
                .map(|v| v.to_string())
                .unwrap_or_default(),
            "hom_degree_-1" => cert
                .hom_series
                .as_deref()
                .and_then(crate::series::Series::parse)
                .map(|s| s.get(-1).to_string())
                .unwrap_or_default(),
            "tnt" => match tnt.passed {
                Some(b) => b.to_string(),
                None => "inconclusive".into(),
            },
            "standard_grading_tnt" => {
                let std_ring = GradedRing::new(
                    spec.ring.names().to_vec(),
                    vec![1; spec.ring.nvars()],
                    spec.ring.field(),
                )?;
                let gens: Vec<Polynomial> =
                    spec.generators.iter().map(|g| g.to_ring(&std_ring)).collect();
                let c = elementary_certificate(&buchberger(&std_ring, &gens)?, options)?;
                match c.check(CHECK_TNT).and_then(|t| t.passed) {
                    Some(b) => b.to_string(),
                    None => "inconclusive".into(),
                }
            }
            "verdict" => cert.verdict.to_string(),
            "dimension" => cert.dimension.map(|d| d.to_string()).unwrap_or_default(),
            "ext1_series" => cert
                .check(CHECK_EXT1)
                .and_then(|c| c.get("series"))
                .map(|p| p.to_string())
                .unwrap_or_default(),
            "ext1_nonneg_dim" => cert
                .check(CHECK_EXT1)
                .and_then(|c| c.get_int("nonneg_dim"))
                .map(|v| v.to_string())
                .unwrap_or_default(),
            "pair_dimension" => pair
                .as_ref()
                .and_then(|p| p.dimension)
                .map(|d| d.to_string())
                .unwrap_or_default(),
            "determinant" => spec
                .matrix
                .as_ref()
                .map(|c| determinant(c, spec.ring.field()).to_string())
                .unwrap_or_default(),
            "syzygy_degrees" => syzygy_degree_string(&ideal),
            _ => String::new(),
        };
        items.push(DiffItem {
            key: key.clone(),
            expected: expected.clone(),
            matches: &actual == expected,
            actual,
        });
    }
    Ok(GalleryReport {
        name: spec.name.clone(),
        certificate: cert,
        pair_certificate: pair,
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_name_lists_catalog() {
        match build_example("nope", None) {
            Err(Error::UnknownGalleryEntry { available, .. }) => assert!(available.contains("naive56")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn groebnerfan_determinant_is_t() {
        for t in 0..3 {
            let g = groebnerfan(t);
            let det = determinant(g.matrix.as_ref().unwrap(), Field::Prime(3));
            assert_eq!(det, Scalar::from_i64(Field::Prime(3), t));
        }
    }

    #[test]
    fn groebnerfan_form_matches_matrix() {
        let g = groebnerfan(1);
        let s = form_s(&g.ring, 3, g.matrix.as_ref().unwrap());
        assert_eq!(&s, g.generators.last().unwrap());
    }

    #[test]
    fn m_point_for_e_one() {
        let m = build_m(1, Field::Rational).unwrap();
        assert_eq!(m.generators.len(), 4);
    }
}

//! Certificates for elementary components: trivial negative tangents, vanishing
//! obstructions and the relative criterion for pairs `R ⊆ M`.

use std::fmt;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::artinian::{hilbert_function_of, quotient_basis, QuotientBasis};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, IdealPresentation};
use crate::homology::diagram::{diagram_maps, pair_data, DiagramMaps};
use crate::homology::{
    ext1_from_relations, hom_nonneg_filtered, hom_space, t2_space, GradedHom, GradedVectorSpace,
};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SmoothElementary,
    RelativeSmoothElementary,
    TntElementary,
    NotTnt,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::SmoothElementary | Verdict::RelativeSmoothElementary => 0,
            Verdict::TntElementary => 1,
            Verdict::NotTnt => 2,
            Verdict::Inconclusive => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::SmoothElementary => "smooth-elementary",
            Verdict::RelativeSmoothElementary => "relative-smooth-elementary",
            Verdict::TntElementary => "TNT-elementary",
            Verdict::NotTnt => "not-TNT",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Int(i64),
    Text(String),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Int(v) => write!(f, "{v}"),
            Payload::Text(s) => f.write_str(s),
        }
    }
}

/// One recorded check: `passed` is `None` when the check could not be decided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub criterion: String,
    pub payload: Vec<(String, Payload)>,
    pub passed: Option<bool>,
}

impl Check {
    fn new(name: &str, criterion: &str, passed: Option<bool>) -> Check {
        Check {
            name: name.into(),
            criterion: criterion.into(),
            payload: Vec::new(),
            passed,
        }
    }

    fn int(mut self, key: &str, v: i64) -> Check {
        self.payload.push((key.into(), Payload::Int(v)));
        self
    }

    fn text(mut self, key: &str, v: impl Into<String>) -> Check {
        self.payload.push((key.into(), Payload::Text(v.into())));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Payload> {
        self.payload.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_int(&self, key: &str) -> Option<i64> {
        match self.get(key) {
            Some(Payload::Int(v)) => Some(*v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub fingerprint: String,
    pub hilbert_function: Option<String>,
    pub degree: Option<usize>,
    pub hom_series: Option<String>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub dimension: Option<usize>,
    pub warnings: Vec<String>,
    pub elapsed_ms: u128,
}

impl Certificate {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn passed(&self, name: &str) -> Option<bool> {
        self.check(name).and_then(|c| c.passed)
    }

    /// Recomputes the verdict and dimension from the stored checks alone.
    pub fn rederive(&self) -> (Verdict, Option<usize>) {
        let dim_of = |name: &str| {
            self.check(name)
                .and_then(|c| c.get_int("dimension"))
                .map(|d| d as usize)
        };
        match self.passed(CHECK_TNT) {
            None => return (Verdict::Inconclusive, None),
            Some(false) => return (Verdict::NotTnt, None),
            Some(true) => {}
        }
        if self.check(CHECK_PHI).is_some() {
            let ok = [CHECK_PHI, CHECK_PARTIAL, CHECK_M_SMOOTH, CHECK_EXACT]
                .iter()
                .all(|n| self.passed(n) == Some(true));
            if ok {
                return (Verdict::RelativeSmoothElementary, dim_of(CHECK_REL_DIM));
            }
            return (Verdict::TntElementary, None);
        }
        if self.passed(CHECK_EXT1) == Some(true) || self.passed(CHECK_T2) == Some(true) {
            return (Verdict::SmoothElementary, dim_of(CHECK_DIM));
        }
        (Verdict::TntElementary, None)
    }

    pub fn is_consistent(&self) -> bool {
        self.rederive() == (self.verdict, self.dimension)
    }
}

pub const CHECK_TNT: &str = "tnt";
pub const CHECK_EXT1: &str = "ext1_nonneg_zero";
pub const CHECK_T2: &str = "t2_nonneg_zero";
pub const CHECK_DIM: &str = "component_dimension";
pub const CHECK_SUBIDEAL: &str = "subideal";
pub const CHECK_PHI: &str = "phi_surjective_nonneg";
pub const CHECK_PARTIAL: &str = "partial_surjective_nonneg";
pub const CHECK_PSI: &str = "psi_surjective_nonneg";
pub const CHECK_M_SMOOTH: &str = "m_smooth";
pub const CHECK_EXACT: &str = "exactness";
pub const CHECK_REL_DIM: &str = "relative_dimension";

#[derive(Debug, Clone, Default)]
pub struct CertifyOptions {
    /// Cutoff for the filtration route; defaults to `2N + max weight - 1`.
    pub cutoff: Option<i64>,
    /// Refuse the filtration route for non-homogeneous ideals.
    pub graded_only: bool,
}

/// Hash of the ring, weights and generators.
pub fn fingerprint(ring: &Ring, generators: &[Polynomial]) -> String {
    let mut h = Sha256::new();
    h.update(ring.field().to_string());
    h.update("|");
    h.update(ring.names().join(","));
    h.update("|");
    let w: Vec<String> = ring.weights().iter().map(|w| w.to_string()).collect();
    h.update(w.join(","));
    for g in generators {
        h.update("|");
        h.update(g.to_string());
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone)]
pub struct TntOutcome {
    pub status: Option<bool>,
    pub hom_dim: usize,
    pub nonneg_dim: Option<usize>,
    pub with_derivations: Option<usize>,
    /// `Some(dim Hom_{<0} == n)` when the dimension criterion applies.
    pub shortcut: Option<bool>,
    pub cutoff: Option<i64>,
    pub warnings: Vec<String>,
}

impl TntOutcome {
    pub fn negative_dim(&self) -> Option<usize> {
        self.nonneg_dim.map(|d| self.hom_dim - d)
    }
}

/// Hom elements given by the partial derivatives `g_j ↦ ∂_i g_j mod I`.
pub fn derivation_classes(q: &QuotientBasis) -> Vec<SparseVec> {
    let gens = q.ideal().generators();
    let dn = q.dim();
    (0..q.ring().nvars())
        .map(|i| {
            let mut v = Vec::new();
            for (j, g) in gens.iter().enumerate() {
                let c = q.coordinates(&g.derivative(i));
                v.extend(c.into_iter().map(|(b, x)| (j * dn + b, x)));
            }
            v
        })
        .collect()
}

fn nonneg_space(
    q: &QuotientBasis,
    hom: &GradedHom,
    options: &CertifyOptions,
    warnings: &mut Vec<String>,
) -> Result<Option<(GradedVectorSpace, Option<i64>)>> {
    if hom.is_graded() {
        return Ok(Some((hom.space.nonneg_part(), None)));
    }
    if options.graded_only {
        warnings.push("non-homogeneous ideal and graded-only mode: non-negative part not computed".into());
        return Ok(None);
    }
    match hom_nonneg_filtered(q, q, hom, options.cutoff) {
        Ok(f) => Ok(Some((f.space, Some(f.cutoff)))),
        Err(e @ Error::CutoffUnstable { .. }) => {
            warnings.push(e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Trivial negative tangents for `O = S/I`, given `Hom(I, O)`.
pub fn tnt_from_hom(q: &QuotientBasis, hom: &GradedHom, options: &CertifyOptions) -> Result<TntOutcome> {
    if !q.is_origin_supported() {
        q.threshold()?;
    }
    let mut warnings = Vec::new();
    let hom_dim = hom.dim();
    let field = q.field();
    let mut full = Echelon::new(field);
    for v in hom.space.vectors() {
        full.insert(v);
    }
    let derivations = derivation_classes(q);
    for d in &derivations {
        assert!(full.contains(d), "derivation class is not a homomorphism");
    }
    let nonneg = nonneg_space(q, hom, options, &mut warnings)?;
    let (nonneg_dim, with_derivations, cutoff, definitional) = match &nonneg {
        None => (None, None, None, None),
        Some((space, cutoff)) => {
            let mut ech = Echelon::new(field);
            for v in space.vectors() {
                ech.insert(v);
            }
            for d in &derivations {
                ech.insert(d);
            }
            (
                Some(space.dim()),
                Some(ech.rank()),
                *cutoff,
                Some(ech.rank() == hom_dim),
            )
        }
    };
    let ring = q.ring();
    let applicable = ring.is_standard_graded()
        && (ring.field().characteristic() == 0 || q.is_homogeneous());
    let shortcut = match (applicable, nonneg_dim) {
        (true, Some(nn)) => Some(hom_dim - nn == ring.nvars()),
        _ => None,
    };
    let status = match (definitional, shortcut) {
        (Some(d), Some(s)) if d != s => {
            warnings.push(format!(
                "definitional check ({d}) disagrees with the negative-tangent dimension criterion ({s})"
            ));
            None
        }
        (d, _) => d,
    };
    Ok(TntOutcome {
        status,
        hom_dim,
        nonneg_dim,
        with_derivations,
        shortcut,
        cutoff,
        warnings,
    })
}

/// Trivial negative tangents of `S/I`.
pub fn tnt_check(ideal: &IdealPresentation, options: &CertifyOptions) -> Result<TntOutcome> {
    let q = quotient_basis(ideal)?;
    q.threshold()?;
    let hom = hom_space(&ideal.presentation(), &q.module());
    tnt_from_hom(&q, &hom, options)
}

fn tnt_check_record(t: &TntOutcome, n: usize) -> Check {
    let mut c = Check::new(CHECK_TNT, "derivations span Hom modulo Hom_>=0", t.status)
        .int("hom_dim", t.hom_dim as i64)
        .int("nvars", n as i64);
    if let Some(nn) = t.nonneg_dim {
        c = c.int("hom_nonneg_dim", nn as i64).int("hom_negative_dim", (t.hom_dim - nn) as i64);
    }
    if let Some(w) = t.with_derivations {
        c = c.int("nonneg_plus_derivations_dim", w as i64);
    }
    c = c.text(
        "negative_dimension_criterion",
        match t.shortcut {
            None => "not applicable".to_string(),
            Some(b) => b.to_string(),
        },
    );
    if let Some(cut) = t.cutoff {
        c = c.int("cutoff", cut);
    }
    c
}

fn series_text(s: &Option<Series>) -> Option<String> {
    s.as_ref().map(|s| s.to_string())
}

/// Elementary-component certificate for a single ideal.
pub fn elementary_certificate(ideal: &IdealPresentation, options: &CertifyOptions) -> Result<Certificate> {
    let start = Instant::now();
    let q = quotient_basis(ideal)?;
    q.threshold()?;
    let hf = hilbert_function_of(&q)?;
    let o = q.module();
    let hom = hom_space(&ideal.presentation(), &o);
    let tnt = tnt_from_hom(&q, &hom, options)?;
    let n = ideal.ring().nvars();
    let mut checks = vec![tnt_check_record(&tnt, n)];
    let mut warnings = tnt.warnings.clone();
    if tnt.status == Some(true) {
        if ideal.is_homogeneous() {
            let data = ideal.relation_data();
            let ext = ext1_from_relations(&data.module, &o);
            let ext_series = ext.series().expect("graded");
            let ext_nonneg = ext_series.nonneg_total();
            checks.push(
                Check::new(CHECK_EXT1, "Ext1(I,O)_>=0 = 0", Some(ext_nonneg == 0))
                    .text("series", ext_series.to_string())
                    .int("nonneg_dim", ext_nonneg as i64)
                    .int("total_dim", ext_series.total() as i64),
            );
            if ext_nonneg != 0 {
                let t2 = t2_space(&data, &o);
                let t2_series = t2.series().expect("graded");
                let t2_nonneg = t2_series.nonneg_total();
                checks.push(
                    Check::new(CHECK_T2, "T2_>=0 = 0", Some(t2_nonneg == 0))
                        .text("series", t2_series.to_string())
                        .int("nonneg_dim", t2_nonneg as i64),
                );
            }
        } else {
            warnings.push(
                "Ext1_>=0 and T2_>=0 are only computed for homogeneous ideals; smoothness not decided"
                    .into(),
            );
            checks.push(Check::new(CHECK_EXT1, "Ext1(I,O)_>=0 = 0", None));
        }
        checks.push(
            Check::new(CHECK_DIM, "dim Hom(I,O)", Some(true)).int("dimension", hom.dim() as i64),
        );
    } else if tnt.status == Some(false) {
        warnings.push(
            "not having trivial negative tangents does not rule out an elementary component".into(),
        );
    }
    let mut cert = Certificate {
        fingerprint: fingerprint(ideal.ring(), ideal.generators()),
        hilbert_function: Some(hf.to_string()),
        degree: Some(hf.degree()),
        hom_series: series_text(&hom.series()),
        checks,
        verdict: Verdict::Inconclusive,
        dimension: None,
        warnings,
        elapsed_ms: 0,
    };
    let (v, d) = cert.rederive();
    cert.verdict = v;
    cert.dimension = d;
    cert.elapsed_ms = start.elapsed().as_millis();
    Ok(cert)
}

/// Degrees of the two plane factors when `I_M = I_1 + I_2` with `I_1`, `I_2` in disjoint
/// pairs of variables.
pub fn plane_product_degrees(m: &IdealPresentation) -> Option<(usize, usize)> {
    let ring = m.ring();
    if ring.nvars() != 4 {
        return None;
    }
    let splits = [[0usize, 1], [0, 2], [0, 3]];
    for a in splits {
        let in_a = |i: usize| a.contains(&i);
        let uses = |g: &Polynomial, side: bool| {
            g.terms()
                .iter()
                .all(|(mono, _)| mono.exps().iter().enumerate().all(|(i, &e)| e == 0 || in_a(i) == side))
        };
        if !m.generators().iter().all(|g| uses(g, true) || uses(g, false)) {
            continue;
        }
        let factor = |side: bool| -> Option<usize> {
            let mut gens: Vec<Polynomial> = m
                .generators()
                .iter()
                .filter(|g| uses(g, side) && !g.is_zero())
                .cloned()
                .collect();
            for i in 0..4 {
                if in_a(i) != side {
                    gens.push(Polynomial::var(ring, i));
                }
            }
            let ip = buchberger(ring, &gens).ok()?;
            quotient_basis(&ip).ok().map(|q| q.dim())
        };
        if let (Some(d1), Some(d2)) = (factor(true), factor(false)) {
            return Some((d1, d2));
        }
    }
    None
}

/// Relative criterion for `R ⊆ M` (both homogeneous).
pub fn pair_certificate(
    m: &IdealPresentation,
    r: &IdealPresentation,
    m_smooth_asserted: bool,
    options: &CertifyOptions,
) -> Result<Certificate> {
    let start = Instant::now();
    let data = pair_data(m, r)?;
    data.qm.threshold()?;
    data.qr.threshold()?;
    let maps = diagram_maps(&data)?;
    let n = r.ring().nvars();
    let tnt = tnt_from_hom(&data.qr, &maps.hom_r_or, options)?;
    let mut warnings = tnt.warnings.clone();
    let mut checks = vec![
        Check::new(CHECK_SUBIDEAL, "I_M ⊆ I_R", Some(true))
            .int("deg_m", data.qm.dim() as i64)
            .int("deg_r", data.qr.dim() as i64),
        tnt_check_record(&tnt, n),
    ];
    checks.extend(pair_checks(&maps));
    let hom_m_dim = maps.hom_m_om.dim();
    let m_smooth = match plane_product_degrees(m) {
        Some((d1, d2)) if hom_m_dim == 4 * d1 * d2 => Check::new(
            CHECK_M_SMOOTH,
            "[M] smooth",
            Some(true),
        )
        .text("source", "verified product of plane ideals")
        .int("hom_dim", hom_m_dim as i64)
        .int("expected", (4 * d1 * d2) as i64),
        _ if m_smooth_asserted => {
            Check::new(CHECK_M_SMOOTH, "[M] smooth", Some(true)).text("source", "asserted")
        }
        _ => {
            warnings.push("smoothness of [M] is neither verified nor asserted".into());
            Check::new(CHECK_M_SMOOTH, "[M] smooth", None).text("source", "not asserted")
        }
    };
    checks.push(m_smooth);
    let a = maps.hom_m_om.series().unwrap().nonneg_total() as i64;
    let b = maps.ext1_j_or.series().unwrap().nonneg_total() as i64;
    let c = maps.hom_j_or.series().unwrap().nonneg_total() as i64;
    let d = maps.hom_m_j.series().unwrap().nonneg_total() as i64;
    let value = n as i64 + a - b + c - d;
    checks.push(
        Check::new(CHECK_REL_DIM, "n + Hom(I_M,O_M) - Ext1(J,O_R) + Hom(J,O_R) - Hom(I_M,J)", Some(true))
            .int("n", n as i64)
            .int("hom_im_om_nonneg", a)
            .int("ext1_j_or_nonneg", b)
            .int("hom_j_or_nonneg", c)
            .int("hom_im_j_nonneg", d)
            .int("dimension", value),
    );
    let hf = hilbert_function_of(&data.qr)?;
    let mut cert = Certificate {
        fingerprint: fingerprint(r.ring(), r.generators()),
        hilbert_function: Some(hf.to_string()),
        degree: Some(hf.degree()),
        hom_series: series_text(&maps.hom_r_or.series()),
        checks,
        verdict: Verdict::Inconclusive,
        dimension: None,
        warnings,
        elapsed_ms: 0,
    };
    let (v, dim) = cert.rederive();
    cert.verdict = v;
    cert.dimension = dim;
    cert.elapsed_ms = start.elapsed().as_millis();
    Ok(cert)
}

fn pair_checks(maps: &DiagramMaps) -> Vec<Check> {
    let map_check = |name: &str, what: &str, s: &crate::homology::diagram::MapSummary| {
        Check::new(name, what, Some(s.surjective_nonneg()))
            .text("source_series", s.source.to_string())
            .text("target_series", s.target.to_string())
            .text("rank_series", s.rank.to_string())
            .text("surjective_all_degrees", s.surjective().to_string())
    };
    vec![
        map_check(CHECK_PHI, "Hom(I_M,O_M) -> Hom(I_M,O_R) onto in degrees >= 0", &maps.phi),
        map_check(CHECK_PARTIAL, "Hom(I_M,O_R) -> Ext1(J,O_R) onto in degrees >= 0", &maps.partial),
        map_check(CHECK_PSI, "Hom(I_M,O_M) -> Ext1(J,O_M) onto in degrees >= 0", &maps.psi),
        Check::new(CHECK_EXACT, "kernel dimensions match the exact sequences", Some(maps.exact)),
    ]
}

/// Degrees and component dimensions attached to `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionFormulas {
    pub e: i64,
    pub deg_r: i64,
    pub deg_m: i64,
    pub dim_from_degree: i64,
    pub dim_closed_form: i64,
}

pub fn dimension_formulas(e: i64) -> Result<DimensionFormulas> {
    if e < 2 {
        return Err(Error::InvalidShape(format!("e must be at least 2, got {e}")));
    }
    let b = e * (e + 1) / 2;
    let deg_m = b * b;
    let deg_r = deg_m - 1;
    let dim_from_degree = 4 * deg_r - (e - 1) * (e + 5);
    let dim_closed_form = e.pow(4) + 2 * e.pow(3) - 4 * e + 1;
    assert_eq!(dim_from_degree, dim_closed_form);
    Ok(DimensionFormulas {
        e,
        deg_r,
        deg_m,
        dim_from_degree,
        dim_closed_form,
    })
}

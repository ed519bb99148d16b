//! Seeded random screening of candidate ideals `I·T + L + T_{≥r+1}` and of apolar
//! (level) ideals `Ann(W)` for a random space of forms `W`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certify::{elementary_certificate, fingerprint, CertifyOptions, Certificate, Verdict};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, minimal_generators, IdealPresentation};
use crate::io::{IdealFile, Report};
use crate::linalg::{kernel_of_columns, Echelon, SparseVec};
use crate::poly::Polynomial;
use crate::ring::{GradedRing, Monomial, Ring};
use crate::scalar::{Field, Scalar};

pub const DEFAULT_FIELD: Field = Field::Prime(101);
pub const INDEX_FILE: &str = "index.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateKind {
    /// `I·T + L + T_{≥r+1}` with `L ⊂ T_r` of the given codimension.
    Truncation,
    /// `I·T + Ann(W)` with `W` a random `codim`-dimensional space of degree-`r` forms.
    Apolar,
}

impl CandidateKind {
    pub fn parse(s: &str) -> Option<CandidateKind> {
        match s {
            "truncation" => Some(CandidateKind::Truncation),
            "apolar" | "gorenstein" | "level" => Some(CandidateKind::Apolar),
            _ => None,
        }
    }
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateKind::Truncation => "truncation",
            CandidateKind::Apolar => "apolar",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CandidateShape {
    /// Base ideal `I ⊂ S`; `None` means `S` has no variables and `I = 0`.
    pub base: Option<IdealFile>,
    /// User-supplied regularity bound `r0` of the base ideal.
    pub base_regularity: Option<u32>,
    pub t: usize,
    pub r: u32,
    pub codim: usize,
    pub field: Field,
    pub seed: u64,
    pub kind: CandidateKind,
}

impl CandidateShape {
    pub fn compressed(t: usize, r: u32, codim: usize, seed: u64) -> CandidateShape {
        CandidateShape {
            base: None,
            base_regularity: None,
            t,
            r,
            codim,
            field: DEFAULT_FIELD,
            seed,
            kind: CandidateKind::Truncation,
        }
    }

    pub fn apolar(t: usize, r: u32, forms: usize, seed: u64) -> CandidateShape {
        CandidateShape {
            kind: CandidateKind::Apolar,
            ..CandidateShape::compressed(t, r, forms, seed)
        }
    }

    /// Ring `S ⊗ k[t1..tt]`; the new variables have weight 1.
    pub fn ring(&self) -> Result<Ring> {
        let (mut names, mut weights) = match &self.base {
            Some(b) => (b.ring.names().to_vec(), b.ring.weights().to_vec()),
            None => (Vec::new(), Vec::new()),
        };
        for i in 1..=self.t {
            let name = format!("t{i}");
            if names.contains(&name) {
                return Err(Error::InvalidShape(format!(
                    "base ring already has a variable named `{name}`"
                )));
            }
            names.push(name);
            weights.push(1);
        }
        GradedRing::new(names, weights, self.field)
    }

    fn slice_dim(&self) -> usize {
        binomial(self.t + self.r as usize - 1, self.r as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t == 0 {
            return Err(Error::InvalidShape("at least one added variable is needed".into()));
        }
        if self.r == 0 {
            return Err(Error::InvalidShape("truncation degree must be positive".into()));
        }
        let n = self.slice_dim();
        if self.codim > n {
            return Err(Error::InvalidShape(format!(
                "codimension {} exceeds dim T_{} = {n}",
                self.codim, self.r
            )));
        }
        if self.kind == CandidateKind::Apolar && self.codim == 0 {
            return Err(Error::InvalidShape("apolar candidates need at least one form".into()));
        }
        if let Some(b) = &self.base {
            if b.ring.field() != self.field {
                return Err(Error::InvalidShape(format!(
                    "base ideal is over {}, shape is over {}",
                    b.ring.field(),
                    self.field
                )));
            }
            if b.generators.iter().any(|g| !g.is_zero()) {
                let r0 = self.base_regularity.ok_or_else(|| {
                    Error::InvalidShape("a nonzero base ideal needs its regularity bound r0".into())
                })?;
                if self.r < r0 + 2 {
                    return Err(Error::InvalidShape(format!(
                        "truncation degree {} is below r0 + 2 = {}",
                        self.r,
                        r0 + 2
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let base = match &self.base {
            Some(b) => format!("{} base generators", b.generators.len()),
            None => "I = 0".into(),
        };
        format!(
            "{} t={} r={} codim={} field={} seed={} ({base})",
            self.kind, self.t, self.r, self.codim, self.field, self.seed
        )
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn random_scalar<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Prime(p) => Scalar::from_i64(field, rng.gen_range(0..p as i64)),
        Field::Rational => Scalar::from_i64(field, rng.gen_range(-5..=5)),
    }
}

/// Random subspace of `field^n` of dimension `k`, as an echelon basis.
fn random_subspace<R: Rng>(field: Field, n: usize, k: usize, rng: &mut R) -> Vec<SparseVec> {
    let mut e = Echelon::new(field);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let v: SparseVec = (0..n)
            .map(|i| (i, random_scalar(field, rng)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if e.insert(&v) {
            out.push(v);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub file: IdealFile,
    pub ideal: IdealPresentation,
}

/// Candidate number `index` of the shape; depends only on `(shape, index)`.
pub fn candidate_at(shape: &CandidateShape, index: u64) -> Result<Candidate> {
    let mut rng = ChaCha8Rng::seed_from_u64(shape.seed);
    rng.set_stream(index);
    random_candidate(shape, &mut rng)
}

pub fn random_candidate<R: Rng>(shape: &CandidateShape, rng: &mut R) -> Result<Candidate> {
    shape.validate()?;
    let ring = shape.ring()?;
    let n_base = ring.nvars() - shape.t;
    let t_ring = GradedRing::new(
        (1..=shape.t).map(|i| format!("t{i}")).collect(),
        vec![1; shape.t],
        shape.field,
    )?;
    let embed = |m: &Monomial| {
        let mut exps = vec![0; n_base];
        exps.extend_from_slice(m.exps());
        Monomial::new(exps)
    };
    let from_coords = |basis: &[Monomial], v: &[(usize, Scalar)]| {
        Polynomial::from_terms(
            &ring,
            v.iter().map(|(i, c)| (embed(&basis[*i]), c.clone())).collect(),
        )
    };
    let mut gens: Vec<Polynomial> = match &shape.base {
        Some(b) => b.generators.iter().map(|g| g.to_ring(&ring)).collect(),
        None => Vec::new(),
    };
    let r = shape.r as i64;
    let slice = t_ring.monomials_of_degree(r);
    match shape.kind {
        CandidateKind::Truncation => {
            let l = random_subspace(shape.field, slice.len(), slice.len() - shape.codim, rng);
            gens.extend(l.iter().map(|v| from_coords(&slice, v)));
        }
        CandidateKind::Apolar => {
            let w = random_subspace(shape.field, slice.len(), shape.codim, rng);
            for d in 1..=r {
                let source = t_ring.monomials_of_degree(d);
                let target = t_ring.monomials_of_degree(r - d);
                let index: BTreeMap<&Monomial, usize> =
                    target.iter().enumerate().map(|(i, m)| (m, i)).collect();
                // column u: the contractions u ⌟ w for every w ∈ W
                let cols: Vec<SparseVec> = source
                    .iter()
                    .map(|u| {
                        let mut col = Vec::new();
                        for (k, form) in w.iter().enumerate() {
                            for (a, c) in form {
                                if u.divides(&slice[*a]) {
                                    let rest = u.quotient_of(&slice[*a]);
                                    col.push((k * target.len() + index[&rest], c.clone()));
                                }
                            }
                        }
                        crate::linalg::collect_sparse(col)
                    })
                    .collect();
                for v in kernel_of_columns(shape.field, &cols) {
                    gens.push(from_coords(&source, &v));
                }
            }
        }
    }
    gens.extend(
        t_ring
            .monomials_of_degree(r + 1)
            .iter()
            .map(|m| Polynomial::monomial(&ring, embed(m))),
    );
    gens.retain(|g| !g.is_zero());
    if let Some(min) = minimal_generators(&ring, &gens) {
        gens = min;
    }
    let ideal = buchberger(&ring, &gens)?;
    Ok(Candidate {
        file: IdealFile::new(&ring, gens),
        ideal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRecord {
    pub index: u64,
    pub fingerprint: Option<String>,
    pub hilbert_function: Option<String>,
    pub hom_series: Option<String>,
    pub verdict: Option<Verdict>,
    pub dimension: Option<usize>,
    pub error: Option<String>,
}

impl CandidateRecord {
    pub fn is_hit(&self) -> bool {
        matches!(
            self.verdict,
            Some(Verdict::SmoothElementary | Verdict::RelativeSmoothElementary | Verdict::TntElementary)
        )
    }

    /// Deduplication key: field, Hilbert function and Hom series.
    pub fn class_key(&self, field: Field) -> Option<String> {
        Some(format!(
            "{field}|{}|{}",
            self.hilbert_function.as_ref()?,
            self.hom_series.as_ref()?
        ))
    }

    pub fn log_line(&self) -> String {
        if let Some(e) = &self.error {
            return format!("candidate {}: error: {e}", self.index);
        }
        let opt = |s: &Option<String>| s.clone().unwrap_or_else(|| "-".into());
        let mut line = format!(
            "candidate {}: hf {} hom {} verdict {}",
            self.index,
            opt(&self.hilbert_function),
            opt(&self.hom_series),
            self.verdict.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
        );
        if let Some(d) = self.dimension {
            line.push_str(&format!(" dim {d}"));
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitClass {
    pub key: String,
    pub first_index: u64,
    pub members: usize,
    pub verdict: Verdict,
    pub dimension: Option<usize>,
    pub file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreenSummary {
    pub shape: String,
    pub count: u64,
    pub records: Vec<CandidateRecord>,
    pub hits: Vec<HitClass>,
}

impl ScreenSummary {
    pub fn hit_count(&self) -> usize {
        self.records.iter().filter(|r| r.is_hit()).count()
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn distinct_classes(&self) -> BTreeSet<&str> {
        self.hits.iter().map(|h| h.key.as_str()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("shape: {}\n", self.shape));
        for r in &self.records {
            s.push_str(&r.log_line());
            s.push('\n');
        }
        s.push_str(&format!(
            "screened {} candidates: {} hits, {} distinct classes, {} failures\n",
            self.count,
            self.hit_count(),
            self.hits.len(),
            self.failures()
        ));
        for h in &self.hits {
            s.push_str(&format!(
                "class {} (first candidate {}, {} members): {}",
                h.key, h.first_index, h.members, h.verdict
            ));
            if let Some(d) = h.dimension {
                s.push_str(&format!(" dim {d}"));
            }
            if let Some(f) = &h.file {
                s.push_str(&format!(" -> {f}"));
            }
            s.push('\n');
        }
        s
    }
}

fn screen_one(shape: &CandidateShape, index: u64, options: &CertifyOptions) -> (CandidateRecord, Option<(Candidate, Certificate)>) {
    let mut rec = CandidateRecord {
        index,
        fingerprint: None,
        hilbert_function: None,
        hom_series: None,
        verdict: None,
        dimension: None,
        error: None,
    };
    let cand = match candidate_at(shape, index) {
        Ok(c) => c,
        Err(e) => {
            rec.error = Some(e.to_string());
            return (rec, None);
        }
    };
    rec.fingerprint = Some(fingerprint(&cand.file.ring, &cand.file.generators));
    match elementary_certificate(&cand.ideal, options) {
        Ok(cert) => {
            rec.hilbert_function = cert.hilbert_function.clone();
            rec.hom_series = cert.hom_series.clone();
            rec.verdict = Some(cert.verdict);
            rec.dimension = cert.dimension;
            (rec, Some((cand, cert)))
        }
        Err(e) => {
            rec.error = Some(e.to_string());
            (rec, None)
        }
    }
}

/// Screens candidates `0..count` in parallel, deduplicating hits by class and, when
/// `out` is given, persisting one file per class representative.
pub fn screen(shape: &CandidateShape, count: u64, out: Option<&Path>) -> Result<ScreenSummary> {
    shape.validate()?;
    let options = CertifyOptions::default();
    let results: Vec<(CandidateRecord, Option<(Candidate, Certificate)>)> = (0..count)
        .into_par_iter()
        .map(|i| screen_one(shape, i, &options))
        .collect();
    let mut hits: Vec<HitClass> = Vec::new();
    let mut reps: Vec<(usize, &Candidate, &Certificate)> = Vec::new();
    let mut by_key: BTreeMap<String, usize> = BTreeMap::new();
    for (rec, extra) in &results {
        if !rec.is_hit() {
            continue;
        }
        let key = rec.class_key(shape.field).expect("hits carry series");
        match by_key.get(&key) {
            Some(&h) => hits[h].members += 1,
            None => {
                by_key.insert(key.clone(), hits.len());
                let (cand, cert) = extra.as_ref().expect("hits carry certificates");
                reps.push((hits.len(), cand, cert));
                hits.push(HitClass {
                    key,
                    first_index: rec.index,
                    members: 1,
                    verdict: cert.verdict,
                    dimension: cert.dimension,
                    file: None,
                });
            }
        }
    }
    if let Some(dir) = out {
        let store = HitStore::open(dir)?;
        for (h, cand, cert) in reps {
            hits[h].file = Some(store.persist(&cand.file, cert, &hits[h].key)?);
        }
    }
    Ok(ScreenSummary {
        shape: shape.describe(),
        count,
        records: results.into_iter().map(|(r, _)| r).collect(),
        hits,
    })
}

/// Directory of hit files plus an index `fingerprint<TAB>file<TAB>class`.
pub struct HitStore {
    dir: PathBuf,
}

impl HitStore {
    pub fn open(dir: &Path) -> Result<HitStore> {
        fs::create_dir_all(dir)?;
        Ok(HitStore {
            dir: dir.to_path_buf(),
        })
    }

    pub fn index(&self) -> Result<Vec<(String, String, String)>> {
        let path = self.dir.join(INDEX_FILE);
        if !path.exists() {
            return Ok(Vec::new());
        }
        let text = fs::read_to_string(path)?;
        Ok(text
            .lines()
            .filter_map(|l| {
                let mut parts = l.splitn(3, '\t');
                Some((
                    parts.next()?.to_string(),
                    parts.next()?.to_string(),
                    parts.next()?.to_string(),
                ))
            })
            .collect())
    }

    /// Writes the hit file unless the fingerprint is already indexed; returns its name.
    pub fn persist(&self, file: &IdealFile, cert: &Certificate, class: &str) -> Result<String> {
        let fp = &cert.fingerprint;
        if let Some((_, name, _)) = self.index()?.into_iter().find(|(f, _, _)| f == fp) {
            return Ok(name);
        }
        let name = format!("hit-{}.ideal", &fp[..16]);
        let mut report = Report::new("hunt");
        report.echo_input(file);
        report.add_certificate("", cert);
        let mut text = file.to_text();
        text.push_str("# report\n");
        for line in report.to_json().lines() {
            text.push_str("# ");
            text.push_str(line);
            text.push('\n');
        }
        fs::write(self.dir.join(&name), text)?;
        let mut index = fs::read_to_string(self.dir.join(INDEX_FILE)).unwrap_or_default();
        index.push_str(&format!("{fp}\t{name}\t{class}\n"));
        fs::write(self.dir.join(INDEX_FILE), index)?;
        Ok(name)
    }
}

/// Reads a hit file back into its ideal and stored report.
pub fn read_hit(path: &Path) -> Result<(IdealFile, Report)> {
    let text = fs::read_to_string(path)?;
    let file = IdealFile::parse(&text)?;
    let json: String = text
        .split_once("# report\n")
        .map(|(_, rest)| {
            rest.lines()
                .map(|l| l.strip_prefix("# ").unwrap_or(l))
                .collect::<Vec<_>>()
                .join("\n")
        })
        .ok_or_else(|| Error::Malformed("hit file has no report".into()))?;
    Ok((file, Report::from_json(&json)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artinian::hilbert_function;

    #[test]
    fn compressed_143_shape() {
        let shape = CandidateShape::compressed(4, 2, 3, 1);
        let c = candidate_at(&shape, 0).unwrap();
        assert_eq!(hilbert_function(&c.ideal).unwrap().values(), vec![1, 4, 3]);
    }

    #[test]
    fn codim_zero_is_truncation() {
        let shape = CandidateShape::compressed(2, 2, 0, 5);
        let c = candidate_at(&shape, 3).unwrap();
        let ring = shape.ring().unwrap();
        let expect: Vec<Polynomial> = ["t1^2", "t1*t2", "t2^2"]
            .iter()
            .map(|s| Polynomial::parse(&ring, s).unwrap())
            .collect();
        let got: BTreeSet<String> = c.ideal.groebner_basis().iter().map(|g| g.to_string()).collect();
        let want: BTreeSet<String> = expect.iter().map(|g| g.to_string()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn codim_too_large() {
        let shape = CandidateShape::compressed(4, 2, 999, 1);
        assert!(matches!(candidate_at(&shape, 0), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn apolar_cubic_gives_1661() {
        let shape = CandidateShape::apolar(6, 3, 1, 3);
        let c = candidate_at(&shape, 0).unwrap();
        assert_eq!(hilbert_function(&c.ideal).unwrap().values(), vec![1, 6, 6, 1]);
    }

    #[test]
    fn candidates_are_deterministic() {
        let shape = CandidateShape::compressed(3, 2, 2, 42);
        let a = candidate_at(&shape, 4).unwrap();
        let b = candidate_at(&shape, 4).unwrap();
        assert_eq!(a.file, b.file);
    }

    #[test]
    fn hit_store_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let shape = CandidateShape::compressed(4, 2, 3, 11);
        let s = screen(&shape, 4, Some(dir.path())).unwrap();
        assert!(!s.hits.is_empty());
        let store = HitStore::open(dir.path()).unwrap();
        let index = store.index().unwrap();
        assert_eq!(index.len(), s.hits.len());
        for (fp, name, class) in &index {
            let (file, report) = read_hit(&dir.path().join(name)).unwrap();
            assert_eq!(report.get("fingerprint").and_then(|v| v.as_str()), Some(fp.as_str()));
            assert_eq!(fingerprint(&file.ring, &file.generators), *fp);
            assert!(s.hits.iter().any(|h| &h.key == class));
        }
        let again = screen(&shape, 4, Some(dir.path())).unwrap();
        assert_eq!(store.index().unwrap().len(), index.len());
        assert_eq!(again.hits.len(), s.hits.len());
    }

    #[test]
    fn empty_screen() {
        let s = screen(&CandidateShape::compressed(2, 1, 0, 0), 0, None).unwrap();
        assert!(s.records.is_empty() && s.hits.is_empty());
    }
}

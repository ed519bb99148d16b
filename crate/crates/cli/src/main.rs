use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use hilbtnt::artinian::hilbert_function;
use hilbtnt::certify::{elementary_certificate, pair_certificate, CertifyOptions, Certificate};
use hilbtnt::gallery::{build_example, verify_gallery, GallerySpec};
use hilbtnt::io::{IdealFile, Report};
use hilbtnt::search::{screen, CandidateKind, CandidateShape, DEFAULT_FIELD};
use hilbtnt::{Error, Field, Result};

const EXIT_ERROR: u8 = 4;

#[derive(Parser)]
#[command(name = "hilbtnt", version, about = "Certify elementary components of Hilbert schemes of points")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "HILB_THREADS")]
    threads: Option<usize>,
    /// Print the flat JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function and degree of S/I.
    Hf { file: PathBuf },
    /// Full certificate; the exit code encodes the verdict.
    Certify(CertifyArgs),
    /// Print a built-in example as an ideal file, optionally verifying its known invariants.
    Gallery(GalleryArgs),
    /// Seeded random screening for candidates with trivial negative tangents.
    Hunt(HuntArgs),
}

#[derive(Args)]
struct CertifyArgs {
    file: PathBuf,
    /// Ideal file of I_M ⊆ I; certifies the pair with the relative criterion.
    #[arg(long, value_name = "M_FILE")]
    pair: Option<PathBuf>,
    /// Take smoothness of [I_M] on its component as given.
    #[arg(long = "assert-M-smooth")]
    assert_m_smooth: bool,
    /// Do not use the filtration for non-homogeneous ideals.
    #[arg(long)]
    graded_only: bool,
    /// Filtration cutoff for non-homogeneous ideals.
    #[arg(long)]
    cutoff: Option<i64>,
}

#[derive(Args)]
struct GalleryArgs {
    /// Entry name, e.g. `re`, `M(3)`, `naive56`, `groebnerfan`.
    name: String,
    #[arg(long)]
    e: Option<i64>,
    #[arg(long)]
    t: Option<i64>,
    /// Recompute the example and compare with its known invariants.
    #[arg(long)]
    verify: bool,
    /// Print the paired ideal I_M instead.
    #[arg(long)]
    pair_file: bool,
}

#[derive(Args)]
struct HuntArgs {
    /// Number of added variables t.
    #[arg(long, default_value_t = 4)]
    vars: usize,
    /// Truncation degree r (the socle degree of compressed candidates).
    #[arg(long, default_value_t = 2)]
    socle: u32,
    /// Codimension of L in T_r, or the number of forms for apolar candidates.
    #[arg(long, default_value_t = 3)]
    codim: usize,
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `truncation` or `apolar`.
    #[arg(long, default_value = "truncation")]
    kind: String,
    /// Prime characteristic, or 0 for the rationals.
    #[arg(long)]
    field: Option<u32>,
    /// Base ideal I ⊂ S.
    #[arg(long, value_name = "FILE")]
    base: Option<PathBuf>,
    /// Regularity bound r0 of the base ideal.
    #[arg(long)]
    base_reg: Option<u32>,
    /// Directory for the hit store.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_ideal(path: &Path) -> Result<IdealFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    IdealFile::parse(&text)
}

fn print_report(report: &Report, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
}

fn cmd_hf(file: &Path, json: bool) -> Result<u8> {
    let start = Instant::now();
    let f = read_ideal(file)?;
    let hf = hilbert_function(&f.ideal()?)?;
    if json {
        let mut r = Report::new("hf");
        r.echo_input(&f);
        r.set("hilbert_function", hf.to_string());
        r.set("degree", hf.degree() as u64);
        r.set("elapsed_ms", start.elapsed().as_millis() as u64);
        print_report(&r, true);
    } else {
        println!("{hf}; deg {}", hf.degree());
    }
    Ok(0)
}

fn cmd_certify(args: &CertifyArgs, json: bool) -> Result<u8> {
    let options = CertifyOptions {
        cutoff: args.cutoff,
        graded_only: args.graded_only,
    };
    let f = read_ideal(&args.file)?;
    let ideal = f.ideal()?;
    let mut report = Report::new("certify");
    report.echo_input(&f);
    let cert: Certificate = match &args.pair {
        Some(m_path) => {
            let m = read_ideal(m_path)?;
            if m.ring != f.ring {
                return Err(Error::Malformed(format!(
                    "{} and {} declare different rings",
                    args.file.display(),
                    m_path.display()
                )));
            }
            report.set("pair.generators", join(&m));
            pair_certificate(&m.ideal()?, &ideal, args.assert_m_smooth, &options)?
        }
        None => elementary_certificate(&ideal, &options)?,
    };
    report.add_certificate("", &cert);
    report.set("exit_code", cert.verdict.exit_code());
    print_report(&report, json);
    Ok(cert.verdict.exit_code() as u8)
}

fn join(f: &IdealFile) -> String {
    f.generators
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn cmd_gallery(args: &GalleryArgs, json: bool) -> Result<u8> {
    let spec: GallerySpec = build_example(&args.name, args.e.or(args.t))?;
    let emitted = match (&spec.pair_with, args.pair_file) {
        (Some(m), true) => m.as_ref(),
        (None, true) => {
            return Err(Error::Malformed(format!("{} has no paired ideal", spec.name)));
        }
        _ => &spec,
    };
    let file = IdealFile::new(&emitted.ring, emitted.generators.clone());
    if !args.verify {
        print!("{}", file.to_text());
        return Ok(0);
    }
    let report = verify_gallery(&spec, &CertifyOptions::default())?;
    if json {
        let mut r = Report::new("gallery");
        r.set("name", spec.name.clone());
        r.echo_input(&file);
        r.add_certificate("", &report.certificate);
        if let Some(p) = &report.pair_certificate {
            r.add_certificate("pair", p);
        }
        for item in &report.items {
            r.set(&format!("diff.{}.expected", item.key), item.expected.clone());
            r.set(&format!("diff.{}.actual", item.key), item.actual.clone());
            r.set(&format!("diff.{}.matches", item.key), item.matches);
        }
        r.set("all_match", report.all_match());
        print_report(&r, true);
    } else {
        print!("{}", file.to_text());
        println!("# verify {}", spec.name);
        for item in &report.items {
            println!(
                "# {} {}: expected {}, computed {}",
                if item.matches { "ok  " } else { "FAIL" },
                item.key,
                item.expected,
                item.actual
            );
        }
        for w in &spec.warnings {
            println!("# note: {w}");
        }
        println!("# {}", if report.all_match() { "all match" } else { "MISMATCH" });
    }
    Ok(if report.all_match() { 0 } else { 1 })
}

fn cmd_hunt(args: &HuntArgs, json: bool) -> Result<u8> {
    let kind = CandidateKind::parse(&args.kind)
        .ok_or_else(|| Error::InvalidShape(format!("unknown candidate kind `{}`", args.kind)))?;
    let field = match args.field {
        None => DEFAULT_FIELD,
        Some(0) => Field::Rational,
        Some(p) => Field::prime(p)?,
    };
    let base = args.base.as_deref().map(read_ideal).transpose()?;
    let shape = CandidateShape {
        base,
        base_regularity: args.base_reg,
        t: args.vars,
        r: args.socle,
        codim: args.codim,
        field,
        seed: args.seed,
        kind,
    };
    let summary = screen(&shape, args.count, args.out.as_deref())?;
    if json {
        let mut r = Report::new("hunt");
        r.set("shape", summary.shape.clone());
        r.set("count", summary.count);
        r.set("hits", summary.hit_count() as u64);
        r.set("classes", summary.hits.len() as u64);
        r.set("failures", summary.failures() as u64);
        for (i, h) in summary.hits.iter().enumerate() {
            r.set(&format!("class.{i}.key"), h.key.clone());
            r.set(&format!("class.{i}.first_candidate"), h.first_index);
            r.set(&format!("class.{i}.members"), h.members as u64);
            r.set(&format!("class.{i}.verdict"), h.verdict.to_string());
            if let Some(d) = h.dimension {
                r.set(&format!("class.{i}.dimension"), d as u64);
            }
            if let Some(f) = &h.file {
                r.set(&format!("class.{i}.file"), f.clone());
            }
        }
        print_report(&r, true);
    } else {
        print!("{}", summary.to_text());
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Malformed(e.to_string()))?;
    }
    match &cli.command {
        Command::Hf { file } => cmd_hf(file, cli.json),
        Command::Certify(a) => cmd_certify(a, cli.json),
        Command::Gallery(a) => cmd_gallery(a, cli.json),
        Command::Hunt(a) => cmd_hunt(a, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

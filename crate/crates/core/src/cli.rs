//! Command-line front end.
//!
//! Every command computes all of its artifacts in memory first and then writes
//! them with [`write_artifacts`], so a failing run leaves no partial files.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::complex::{fmt_num, format_complex, parse_complex};
use crate::error::{Error, Result};
use crate::floquet::{floquet_spectrum, nu_exact_periodic, DEFAULT_THETA_SAMPLES};
use crate::lowernorm::{block_values_csv, LowerNormOptions, LowerNormSkeleton};
use crate::models::{Model, ModelInstance};
use crate::operators::{parse_spec, write_spec, BandOperatorSpec};
use crate::spectra::{
    convergence_study, field_svg, hausdorff, resolvent_field, sublevel_set, FieldOptions, GridSpec, SpectralSet,
    StudyMode,
};
use crate::words::{
    gap_profile, parse_source, prefix_periodization, subword_set, write_source, Gap, PotentialSource, ScanRange,
};

#[derive(Debug, Parser)]
#[command(name = "subspec", version, about = "Spectra and pseudospectra of band operators from finite subwords")]
pub struct Cli {
    /// Worker threads for grid nodes and θ samples. Output does not depend on it.
    #[arg(long, global = true, env = "SUBSPEC_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Subword set, gap profile and optional prefix periodization of a potential.
    Words(WordsArgs),
    /// σ_min of every deduplicated column block at one λ.
    Blocks(BlocksArgs),
    /// Local lower norm ν_N and the resolvent bound at one λ.
    Nu(NuArgs),
    /// Resolvent-bound field on a grid, with sublevel sets and an SVG.
    Pseudospec(PseudospecArgs),
    /// Floquet spectrum of a periodic operator.
    Floquet(FloquetArgs),
    /// Hausdorff distance between two point-set CSV files.
    Hausdorff(HausdorffArgs),
    /// Distances of an approximant sequence to a reference or to the previous iterate.
    Study(StudyArgs),
    /// The model catalog.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// Operator spec file (TOML).
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    pub spec: Option<PathBuf>,
    /// Catalog model, e.g. `anderson_nsa` or `hopping(3)`.
    #[arg(long)]
    pub model: Option<String>,
    /// Approximant level of the model.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    /// Compress the operator to the half-axis.
    #[arg(long)]
    pub half_axis: bool,
}

#[derive(Debug, Args)]
pub struct LowerNormArgs {
    /// Window length N. Defaults to the model's N(m).
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Do not compute ν_N of the adjoint.
    #[arg(long)]
    pub skip_adjoint: bool,
    /// The operator is normal, so ν(A*) = ν(A) and the adjoint is skipped.
    #[arg(long)]
    pub assume_normal: bool,
    /// Column range scanned for non-periodic operators.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub scan: Option<Vec<i64>>,
}

#[derive(Debug, Args)]
pub struct WordsArgs {
    /// Potential file.
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    pub source: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    /// Subword length.
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub scan: Option<Vec<i64>>,
    /// Also write the prefix periodization at this N.
    #[arg(long)]
    pub periodize: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    pub norm: LowerNormArgs,
    #[arg(long, default_value = "0", value_parser = complex_arg, allow_hyphen_values = true)]
    pub lambda: Complex64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NuArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    pub norm: LowerNormArgs,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub lambda: Complex64,
}

#[derive(Debug, Args)]
pub struct PseudospecArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    pub norm: LowerNormArgs,
    #[arg(long, num_args = 6, value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX", "NX", "NY"], allow_negative_numbers = true)]
    pub grid: Vec<f64>,
    /// Sublevel values ε, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub eps: Vec<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FloquetArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Number of Bloch phases θ_j = 2πj/S.
    #[arg(long, default_value_t = DEFAULT_THETA_SAMPLES)]
    pub theta: usize,
    /// Also report the exact lower norm at this λ.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HausdorffArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long)]
    pub model: String,
    /// Approximant levels, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub m: Vec<usize>,
    /// Compare sublevel sets on this grid instead of Floquet spectra.
    #[arg(long, num_args = 6, value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX", "NX", "NY"], allow_negative_numbers = true)]
    pub grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_THETA_SAMPLES)]
    pub theta: usize,
    #[arg(long)]
    pub skip_adjoint: bool,
    /// Reference point-set CSV. Models with a closed-form spectrum use it by default.
    #[arg(long, conflicts_with = "successive")]
    pub reference: Option<PathBuf>,
    /// Spacing of the sampled closed-form reference.
    #[arg(long, default_value_t = 1e-3)]
    pub reference_step: f64,
    /// Compare successive iterates even when a reference exists.
    #[arg(long)]
    pub successive: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ModelsAction {
    /// Names and descriptions.
    List,
    /// Write the spec and potential files of one approximant.
    Dump {
        #[arg(long)]
        name: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn complex_arg(s: &str) -> std::result::Result<Complex64, String> {
    parse_complex(s).ok_or_else(|| format!("`{s}` is not a complex number"))
}

/// Parses `args`, runs the command and prints its summary. Returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command inside a worker pool of the requested size.
pub fn run(cli: &Cli) -> Result<Vec<String>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(Error::validation("threads", "must be at least 1"));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| Error::Resource(format!("worker pool: {e}")))?;
    pool.install(|| execute(&cli.command))
}

fn execute(command: &Command) -> Result<Vec<String>> {
    match command {
        Command::Words(a) => words(a),
        Command::Blocks(a) => blocks(a),
        Command::Nu(a) => nu(a),
        Command::Pseudospec(a) => pseudospec(a),
        Command::Floquet(a) => floquet(a),
        Command::Hausdorff(a) => hausdorff_cmd(a),
        Command::Study(a) => study(a),
        Command::Models { action } => models(action),
    }
}

/// One output file and its summary line.
struct Artifact {
    name: String,
    contents: String,
    summary: String,
}

impl Artifact {
    fn new(name: impl Into<String>, contents: String, summary: impl Into<String>) -> Self {
        Artifact { name: name.into(), contents, summary: summary.into() }
    }
}

/// Writes every artifact to a temporary file in `dir` and then renames them
/// into place. On any failure, temporaries and already renamed files are removed.
fn write_artifacts(dir: &Path, artifacts: Vec<Artifact>) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut temps: Vec<(PathBuf, PathBuf)> = Vec::new();
    let cleanup = |paths: &[PathBuf]| {
        for p in paths {
            let _ = fs::remove_file(p);
        }
    };
    for a in &artifacts {
        let target = dir.join(&a.name);
        let tmp = dir.join(format!(".{}.tmp{}", a.name, std::process::id()));
        if let Err(e) = fs::write(&tmp, &a.contents) {
            let mut stale: Vec<PathBuf> = temps.iter().map(|(t, _)| t.clone()).collect();
            stale.push(tmp.clone());
            cleanup(&stale);
            return Err(Error::io(tmp, e));
        }
        temps.push((tmp, target));
    }
    for (i, (tmp, target)) in temps.iter().enumerate() {
        if let Err(e) = fs::rename(tmp, target) {
            let mut stale: Vec<PathBuf> = temps[..i].iter().map(|(_, t)| t.clone()).collect();
            stale.extend(temps[i..].iter().map(|(t, _)| t.clone()));
            cleanup(&stale);
            return Err(Error::io(target.clone(), e));
        }
    }
    Ok(artifacts.iter().map(|a| format!("{}: {}", dir.join(&a.name).display(), a.summary)).collect())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn model(name: &str) -> Result<Model> {
    name.parse()
}

/// The operator and, for catalog models, the approximant instance.
fn load_operator(a: &OperatorArgs) -> Result<(BandOperatorSpec, Option<ModelInstance>)> {
    let (spec, inst) = match (&a.spec, &a.model) {
        (Some(path), _) => (parse_spec(&read(path)?)?, None),
        (None, Some(name)) => {
            let inst = model(name)?.build(a.m)?;
            (inst.spec.clone(), Some(inst))
        }
        (None, None) => return Err(Error::validation("spec", "give --spec or --model")),
    };
    Ok((if a.half_axis { spec.half_axis() } else { spec }, inst))
}

fn scan_range(scan: &Option<Vec<i64>>) -> Result<Option<ScanRange>> {
    scan.as_ref().map(|v| ScanRange::new(v[0], v[1])).transpose()
}

fn norm_setup(norm: &LowerNormArgs, inst: &Option<ModelInstance>) -> Result<(usize, LowerNormOptions)> {
    let n = match (norm.n, inst) {
        (Some(n), _) => n,
        (None, Some(i)) => i.n,
        (None, None) => return Err(Error::validation("N", "required for spec files")),
    };
    let options =
        LowerNormOptions { skip_adjoint: norm.skip_adjoint || norm.assume_normal, scan: scan_range(&norm.scan)? };
    Ok((n, options))
}

fn grid(v: &[f64]) -> Result<GridSpec> {
    let count = |x: f64, field: &str| -> Result<usize> {
        if x.fract() != 0.0 || !(x >= 2.0) || x > 1e6 {
            return Err(Error::validation(field, "node count must be an integer of at least 2"));
        }
        Ok(x as usize)
    };
    GridSpec::new(v[0], v[1], v[2], v[3], count(v[4], "grid nx")?, count(v[5], "grid ny")?)
}

fn check_eps(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::validation("eps", "give at least one value"));
    }
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0)) {
        return Err(Error::validation("eps", format!("{e} is not positive")));
    }
    Ok(())
}

fn gap_text(g: Gap) -> String {
    match g {
        Gap::Finite(n) => n.to_string(),
        Gap::Infinite => "infinite".into(),
    }
}

fn words(a: &WordsArgs) -> Result<Vec<String>> {
    let source: PotentialSource = match (&a.source, &a.model) {
        (Some(path), _) => parse_source(&read(path)?)?,
        (None, Some(name)) => {
            let inst = model(name)?.build(a.m)?;
            PotentialSource::clone(&inst.sources[0])
        }
        (None, None) => return Err(Error::validation("source", "give --source or --model")),
    };
    let scan = scan_range(&a.scan)?;
    let set = subword_set(&source, a.n, scan)?;
    let gaps = gap_profile(&source, a.n, scan)?;
    let exact = if set.exact { "exact" } else { "scanned" };
    let mut lines = vec![format!("|W_{}| = {} ({exact}), max gap {}", a.n, set.len(), gap_text(gaps.max))];
    let Some(out) = &a.out else { return Ok(lines) };

    let mut text = String::new();
    for w in &set.words {
        let _ = writeln!(text, "{w} {}", gap_text(gaps.per_word[w]));
    }
    let mut artifacts = vec![Artifact::new("subwords.txt", text, format!("{} subwords with gaps", set.len()))];
    if a.periodize {
        let scan = scan.ok_or_else(|| Error::validation("scan", "--periodize needs --scan"))?;
        let p = prefix_periodization(&source, a.n, scan)?;
        let period = p.period().unwrap_or(0);
        artifacts.push(Artifact::new("periodized.txt", write_source(&p)?, format!("period {period}")));
    }
    lines.extend(write_artifacts(out, artifacts)?);
    Ok(lines)
}

fn blocks(a: &BlocksArgs) -> Result<Vec<String>> {
    let (spec, inst) = load_operator(&a.operator)?;
    let (n, options) = norm_setup(&a.norm, &inst)?;
    let skeleton = LowerNormSkeleton::new(&spec, n, options)?;
    let values = skeleton.block_values(a.lambda)?;
    let mut lines = vec![format!("{} blocks at N = {n}, λ = {}", values.len(), format_complex(a.lambda))];
    if let Some(out) = &a.out {
        let summary = format!("{} rows", values.len());
        lines.extend(write_artifacts(out, vec![Artifact::new("blocks.csv", block_values_csv(&values), summary)])?);
    }
    Ok(lines)
}

fn nu(a: &NuArgs) -> Result<Vec<String>> {
    let (spec, inst) = load_operator(&a.operator)?;
    let (n, options) = norm_setup(&a.norm, &inst)?;
    let r = LowerNormSkeleton::new(&spec, n, options)?.evaluate(a.lambda)?;
    let adj = r.nu_n_adjoint.map_or_else(|| "skipped".to_string(), fmt_num);
    Ok(vec![format!(
        "N={n} lambda={} nu={} nu_adj={adj} combined={} bound={} blocks={}{}",
        format_complex(a.lambda),
        fmt_num(r.nu_n),
        fmt_num(r.combined),
        fmt_num(r.resolvent_bound()),
        r.block_count,
        if r.exact { "" } else { " (scanned)" }
    )])
}

fn pseudospec(a: &PseudospecArgs) -> Result<Vec<String>> {
    let (spec, inst) = load_operator(&a.operator)?;
    let (n, options) = norm_setup(&a.norm, &inst)?;
    let grid = grid(&a.grid)?;
    check_eps(&a.eps)?;
    let field = resolvent_field(&spec, &grid, n, options)?;
    let sets: Vec<SpectralSet> = a.eps.iter().map(|&e| sublevel_set(&field, e)).collect::<Result<_>>()?;
    let holes = field.holes().count();

    let mut artifacts =
        vec![Artifact::new("field.csv", field.to_csv(), format!("{} nodes, {holes} holes, N = {n}", grid.len()))];
    let refs: Vec<&SpectralSet> = sets.iter().collect();
    artifacts.push(Artifact::new("sigma_eps.svg", field_svg(&field, &refs), format!("{} contour sets", sets.len())));
    for (k, (s, e)) in sets.iter().zip(&a.eps).enumerate() {
        let summary = format!("eps = {e}: {} nodes, {} contours", s.len(), s.polylines.len());
        artifacts.push(Artifact::new(format!("sigma_eps_{k}.csv"), s.to_csv(), summary));
    }
    write_artifacts(&a.out, artifacts)
}

fn floquet(a: &FloquetArgs) -> Result<Vec<String>> {
    let (spec, _) = load_operator(&a.operator)?;
    let s = floquet_spectrum(&spec, a.theta)?;
    let mut lines = Vec::new();
    if let Some(lambda) = a.lambda {
        let r = nu_exact_periodic(&spec, lambda, a.theta)?;
        lines.push(format!(
            "lambda={} nu_exact={} sampled={} theta={}",
            format_complex(lambda),
            fmt_num(r.refined),
            fmt_num(r.sampled),
            fmt_num(r.theta)
        ));
    }
    let summary = format!("{} eigenvalues over {} phases, {} holes", s.len(), a.theta, s.holes.len());
    lines.extend(write_artifacts(&a.out, vec![Artifact::new("spectrum.csv", s.to_csv(), summary)])?);
    Ok(lines)
}

fn hausdorff_cmd(a: &HausdorffArgs) -> Result<Vec<String>> {
    let x = SpectralSet::from_csv(&read(&a.a)?)?;
    let y = SpectralSet::from_csv(&read(&a.b)?)?;
    let r = hausdorff(&x, &y)?;
    let mut lines =
        vec![format!("d_ab={} d_ba={} d={}", fmt_num(r.directed_ab), fmt_num(r.directed_ba), fmt_num(r.distance))];
    if let Some(out) = &a.out {
        let csv =
            format!("d_ab,d_ba,d\n{},{},{}\n", fmt_num(r.directed_ab), fmt_num(r.directed_ba), fmt_num(r.distance));
        lines.extend(write_artifacts(out, vec![Artifact::new("hausdorff.csv", csv, "1 row")])?);
    }
    Ok(lines)
}

fn study(a: &StudyArgs) -> Result<Vec<String>> {
    let model = model(&a.model)?;
    let approximants = a.m.iter().map(|&m| model.build(m).map(|i| i.approximant())).collect::<Result<Vec<_>>>()?;
    let mode = match &a.grid {
        Some(g) => {
            check_eps(&a.eps)?;
            StudyMode::Sublevel {
                grid: grid(g)?,
                eps: a.eps.clone(),
                options: FieldOptions { skip_adjoint: a.skip_adjoint, scan: None },
            }
        }
        None => StudyMode::Floquet { theta_samples: a.theta },
    };
    let reference = match (&a.reference, a.successive) {
        (Some(path), _) => Some(SpectralSet::from_csv(&read(path)?)?),
        (None, false) => model.reference(a.reference_step).transpose()?,
        (None, true) => None,
    };
    let s = convergence_study(&approximants, reference.as_ref(), &mode)?;
    for w in &s.warnings {
        eprintln!("warning: {w}");
    }
    let against = if reference.is_some() { "reference" } else { "previous iterate" };
    let mut artifacts = vec![Artifact::new(
        "study.csv",
        s.to_csv(),
        format!("{} rows against {against}, monotone: {}", s.rows.len(), if s.monotone { "yes" } else { "no" }),
    )];
    let per_m = s.sets.len() / approximants.len();
    for (i, (m, eps, set)) in s.sets.iter().enumerate() {
        let k = i % per_m;
        artifacts.push(Artifact::new(
            format!("set_m{m}_{k}.csv"),
            set.to_csv(),
            format!("eps = {eps}: {} points", set.len()),
        ));
    }
    write_artifacts(&a.out, artifacts)
}

fn models(action: &ModelsAction) -> Result<Vec<String>> {
    match action {
        ModelsAction::List => Ok(Model::catalog().iter().map(|m| format!("{m}: {}", m.description())).collect()),
        ModelsAction::Dump { name, m, out } => {
            let inst = model(name)?.build(*m)?;
            let status = if inst.check.equal { "holds" } else { "fails" };
            let mut artifacts = vec![Artifact::new(
                "spec.toml",
                write_spec(&inst.spec)?,
                format!("period {}, N(m) = {}, subword condition {status}", inst.spec.period().unwrap_or(0), inst.n),
            )];
            for (k, src) in inst.sources.iter().enumerate() {
                let name = ["b", "c", "d"].get(k).map_or_else(|| format!("p{k}"), |s| s.to_string());
                artifacts.push(Artifact::new(
                    format!("{name}.txt"),
                    write_source(Arc::as_ref(src))?,
                    format!("period {}", src.period().unwrap_or(0)),
                ));
            }
            write_artifacts(out, artifacts)
        }
    }
}

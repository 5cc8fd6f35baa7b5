//! `npwigner` command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure (bad state, failed checks,
//! I/O), 2 usage error. Every failure prints a single diagnostic line.

pub mod spec;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use npwigner::emit::{
    format_f64, write_grid_csv, write_json, write_phase_csv, write_photon_csv, write_report_json,
    GridDocument, Metadata, SCHEMA_VERSION,
};
use npwigner::marginals::{phase_distribution, photon_marginal_analytic, DEFAULT_PHASE_SAMPLES};
use npwigner::oracle::{
    brute_force_marginal_check, min_theta_samples, path_equivalence_deviation, CHECK_TOL,
};
use npwigner::wigner::{
    anchored_offset, cat_wigner_closed, coherent_wigner_closed, phase_state_wigner_closed,
    wigner_at_phases, wigner_grid_with_offset, wigner_np, NormalizationPower,
};
use npwigner::{Check, DensityMatrix, WignerGrid};
use serde::Serialize;

use crate::spec::{BuiltState, StateKind, StateSpec};

/// Tolerance of the closed-form comparisons run by `verify`.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Threshold below which a coherent-state value counts as negative.
pub const POSITIVITY_TOL: f64 = 1e-12;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<npwigner::Error> for CliError {
    fn from(e: npwigner::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "npwigner",
    version,
    about = "Number-phase Wigner functions of single-mode states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a state and print P(n), trace and tail mass.
    State {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate W(n, φ) on a uniform grid.
    Wigner {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Photon-number and phase marginals.
    Marginals {
        #[command(flatten)]
        state: StateArgs,
        /// Phase samples of the phase distribution.
        #[arg(long = "phi-samples", default_value_t = DEFAULT_PHASE_SAMPLES, value_parser = positive)]
        phi_samples: usize,
        #[arg(long = "phi-offset", default_value_t = 0.0, allow_hyphen_values = true)]
        phi_offset: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the marginal, path-equivalence and closed-form checks.
    Verify {
        #[command(flatten)]
        state: StateArgs,
        /// Grid phase samples [default: max(512, 2·cutoff+3)].
        #[arg(long = "phi-samples", value_parser = positive)]
        phi_samples: Option<usize>,
        /// θ quadrature nodes of the characteristic path [default: 2·cutoff+3].
        #[arg(long = "theta-samples", value_parser = positive)]
        theta_samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "no-timestamps")]
        no_timestamps: bool,
    },
    /// Write the data behind figure 1, 2 or 3.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        number: u8,
        /// Output path [default: figN.csv or figN.json].
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long = "no-timestamps")]
        no_timestamps: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Number,
    Coherent,
    Cat,
    Phase,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["state", "spec_file"])))]
struct StateArgs {
    /// Built-in state family.
    #[arg(long, value_enum)]
    state: Option<Kind>,
    /// JSON state description.
    #[arg(long = "spec-file", conflicts_with_all = ["m", "alpha", "alpha_im", "phi0"])]
    spec_file: Option<PathBuf>,
    /// Photon number (number state) or top level (phase state).
    #[arg(long = "M")]
    m: Option<usize>,
    /// Real part of α.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Imaginary part of α.
    #[arg(long = "alpha-im", allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    /// Reference phase of the phase state.
    #[arg(long, allow_hyphen_values = true)]
    phi0: Option<f64>,
    /// Fock cutoff N [default: automatic].
    #[arg(long)]
    cutoff: Option<usize>,
    /// Allowed truncated probability [default: 1e-10].
    #[arg(long = "tail-tol")]
    tail_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Largest row n [default: cutoff].
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    #[arg(long = "phi-samples", default_value_t = DEFAULT_PHASE_SAMPLES, value_parser = positive)]
    phi_samples: usize,
    /// Shift of the grid, φ_j = offset + 2πj/phi_samples.
    #[arg(long = "phi-offset", default_value_t = 0.0, allow_hyphen_values = true)]
    phi_offset: f64,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output path [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Omit the generation time from JSON metadata.
    #[arg(long = "no-timestamps")]
    no_timestamps: bool,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl StateArgs {
    fn spec(&self) -> CliResult<StateSpec> {
        if let Some(tol) = self.tail_tol {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(usage("--tail-tol must lie in (0, 1)"));
            }
        }
        let mut spec = match (&self.spec_file, self.state) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Validation(format!("cannot read {}: {e}", path.display()))
                })?;
                serde_json::from_str::<StateSpec>(&text).map_err(|e| {
                    CliError::Validation(format!("invalid spec file {}: {e}", path.display()))
                })?
            }
            (None, Some(kind)) => self.inline(kind)?,
            (None, None) => return Err(usage("one of --state or --spec-file is required")),
        };
        if self.cutoff.is_some() {
            spec.cutoff = self.cutoff;
        }
        if self.tail_tol.is_some() {
            spec.tail_tol = self.tail_tol;
        }
        Ok(spec)
    }

    fn inline(&self, kind: Kind) -> CliResult<StateSpec> {
        let need_m = || self.m.ok_or_else(|| usage("this state needs --M"));
        let need_alpha = || {
            let re = self
                .alpha
                .ok_or_else(|| usage("this state needs --alpha"))?;
            Ok::<_, CliError>([re, self.alpha_im.unwrap_or(0.0)])
        };
        let unused = |flag: &str, set: bool| {
            if set {
                Err(usage(format!("{flag} does not apply to this state")))
            } else {
                Ok(())
            }
        };
        let kind = match kind {
            Kind::Number => {
                unused("--alpha", self.alpha.is_some() || self.alpha_im.is_some())?;
                unused("--phi0", self.phi0.is_some())?;
                StateKind::Number { m: need_m()? }
            }
            Kind::Coherent | Kind::Cat => {
                unused("--M", self.m.is_some())?;
                unused("--phi0", self.phi0.is_some())?;
                let alpha = need_alpha()?;
                if kind == Kind::Coherent {
                    StateKind::Coherent { alpha }
                } else {
                    StateKind::Cat { alpha }
                }
            }
            Kind::Phase => {
                unused("--alpha", self.alpha.is_some() || self.alpha_im.is_some())?;
                StateKind::Phase {
                    m: need_m()?,
                    phi0: self.phi0.ok_or_else(|| usage("this state needs --phi0"))?,
                }
            }
        };
        Ok(StateSpec {
            kind,
            cutoff: None,
            tail_tol: None,
        })
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("{}", line.trim());
            return 2;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::State { state, output } => cmd_state(&state, &output),
        Command::Wigner {
            state,
            grid,
            output,
        } => cmd_wigner(&state, &grid, &output),
        Command::Marginals {
            state,
            phi_samples,
            phi_offset,
            output,
        } => cmd_marginals(&state, phi_samples, phi_offset, &output),
        Command::Verify {
            state,
            phi_samples,
            theta_samples,
            out,
            no_timestamps,
        } => cmd_verify(
            &state,
            phi_samples,
            theta_samples,
            out.as_deref(),
            !no_timestamps,
        ),
        Command::Figure {
            number,
            out,
            format,
            no_timestamps,
        } => cmd_figure(number, out, format, !no_timestamps),
    }
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p.as_os_str() != "-" => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::Validation(format!("cannot create {}: {e}", p.display()))
            })?))
        }
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn metadata(spec: &StateSpec, built: &BuiltState, timestamp: bool) -> CliResult<Metadata> {
    let echo = serde_json::to_value(spec).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(Metadata::new(
        echo,
        built.rho.cutoff(),
        Some(built.tail_tol),
        timestamp,
    ))
}

#[derive(Serialize)]
struct StateDocument<'a> {
    schema_version: u32,
    metadata: Metadata,
    trace: f64,
    tail_mass: f64,
    mean_photon_number: f64,
    photon_distribution: &'a [f64],
}

fn cmd_state(args: &StateArgs, output: &OutputArgs) -> CliResult<i32> {
    let spec = args.spec()?;
    let built = spec.build()?;
    let photon = photon_marginal_analytic(&built.rho);
    let out = open_output(output.out.as_deref())?;
    match output.format {
        Format::Csv => {
            eprintln!(
                "cutoff={} trace={} tail_mass={} mean_n={}",
                built.rho.cutoff(),
                format_f64(built.rho.trace()),
                format_f64(built.tail_mass),
                format_f64(photon.mean())
            );
            write_photon_csv(&photon, out)?;
        }
        Format::Json => {
            let doc = StateDocument {
                schema_version: SCHEMA_VERSION,
                metadata: metadata(&spec, &built, !output.no_timestamps)?,
                trace: built.rho.trace(),
                tail_mass: built.tail_mass,
                mean_photon_number: photon.mean(),
                photon_distribution: &photon.p,
            };
            write_json(&doc, out)?;
        }
    }
    Ok(0)
}

fn write_grid(
    grid: &WignerGrid,
    meta: Metadata,
    format: Format,
    out: Box<dyn Write>,
) -> CliResult<()> {
    match format {
        Format::Csv => write_grid_csv(grid, out)?,
        Format::Json => write_json(&GridDocument::new(grid, meta), out)?,
    }
    Ok(())
}

fn cmd_wigner(args: &StateArgs, grid_args: &GridArgs, output: &OutputArgs) -> CliResult<i32> {
    let spec = args.spec()?;
    let built = spec.build()?;
    let n_max = grid_args.n_max.unwrap_or(built.rho.cutoff());
    if n_max > built.rho.cutoff() {
        return Err(CliError::Validation(format!(
            "--n-max {n_max} exceeds the cutoff {}",
            built.rho.cutoff()
        )));
    }
    let grid = wigner_grid_with_offset(
        &built.rho,
        n_max,
        grid_args.phi_samples,
        grid_args.phi_offset,
    )?;
    let meta = metadata(&spec, &built, !output.no_timestamps)?;
    write_grid(
        &grid,
        meta,
        output.format,
        open_output(output.out.as_deref())?,
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct MarginalsDocument<'a> {
    schema_version: u32,
    metadata: Metadata,
    photon: &'a [f64],
    phase: PhaseAxis<'a>,
}

#[derive(Serialize)]
struct PhaseAxis<'a> {
    phi: &'a [f64],
    p: &'a [f64],
}

fn cmd_marginals(
    args: &StateArgs,
    phi_samples: usize,
    offset: f64,
    output: &OutputArgs,
) -> CliResult<i32> {
    let spec = args.spec()?;
    let built = spec.build()?;
    let photon = photon_marginal_analytic(&built.rho);
    let phase = phase_distribution(&built.rho, phi_samples, offset)?;
    let mut out = open_output(output.out.as_deref())?;
    match output.format {
        Format::Csv => {
            write_photon_csv(&photon, &mut out)?;
            writeln!(out)?;
            write_phase_csv(&phase, out)?;
        }
        Format::Json => {
            let doc = MarginalsDocument {
                schema_version: SCHEMA_VERSION,
                metadata: metadata(&spec, &built, !output.no_timestamps)?,
                photon: &photon.p,
                phase: PhaseAxis {
                    phi: &phase.phis,
                    p: &phase.values,
                },
            };
            write_json(&doc, out)?;
        }
    }
    Ok(0)
}

/// Rows and phases probed by the characteristic-path comparison.
pub fn verify_points(cutoff: usize) -> Vec<(usize, f64)> {
    let rows: Vec<usize> = {
        let mut r: Vec<usize> = (0..8).map(|i| i * cutoff / 7).collect();
        r.dedup();
        r
    };
    let phis = [0.3, 1.7, 3.9, 5.6];
    rows.iter()
        .flat_map(|&n| phis.iter().map(move |&p| (n, p)))
        .collect()
}

fn closed_form_check(spec: &StateSpec, rho: &DensityMatrix) -> CliResult<Option<Check>> {
    let cutoff = rho.cutoff();
    let rows = cutoff.min(19);
    let phis: Vec<f64> = (0..64)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / 64.0 + 0.01)
        .collect();
    let closed: Box<dyn Fn(usize, f64) -> npwigner::Result<f64>> = match &spec.kind {
        StateKind::Number { m } => {
            let m = *m;
            Box::new(move |n, _| {
                Ok(if n == m {
                    1.0 / (2.0 * std::f64::consts::PI)
                } else {
                    0.0
                })
            })
        }
        // The truncated state is compared with the series cut at the same
        // cutoff, so the check isolates the evaluation from the truncation.
        StateKind::Coherent { alpha } => {
            let (mag, chi) = (alpha[0].hypot(alpha[1]), alpha[1].atan2(alpha[0]));
            Box::new(move |n, phi| coherent_wigner_closed(mag, n, phi - chi, cutoff))
        }
        StateKind::Cat { alpha } => {
            let (mag, chi) = (alpha[0].hypot(alpha[1]), alpha[1].atan2(alpha[0]));
            Box::new(move |n, phi| {
                cat_wigner_closed(mag, n, phi - chi, cutoff, NormalizationPower::Derived)
            })
        }
        StateKind::Phase { m, phi0 } => {
            let (m, phi0) = (*m, *phi0);
            Box::new(move |n, phi| Ok(phase_state_wigner_closed(m, phi0, n, phi)))
        }
        _ => return Ok(None),
    };
    let mut worst = 0.0f64;
    for n in 0..=rows {
        for &phi in &phis {
            worst = worst.max((closed(n, phi)? - wigner_np(rho, n, phi)?).abs());
        }
    }
    let check = Check::max_deviation("closed_form", worst, CLOSED_FORM_TOL);
    Ok(Some(match spec.kind {
        // The cat closed form uses the untruncated normalization; a loose
        // tail_tol leaves a relative gap the comparison cannot absorb.
        StateKind::Cat { .. } if cat_normalization_gap(rho, spec) > CLOSED_FORM_TOL => check
            .informational()
            .with_note("cutoff too small for the untruncated normalization"),
        _ => check,
    }))
}

fn cat_normalization_gap(rho: &DensityMatrix, spec: &StateSpec) -> f64 {
    match spec.kind {
        StateKind::Cat { alpha } => {
            let mag = alpha[0].hypot(alpha[1]);
            let exact = npwigner::fock::cat_norm_sqr_closed(mag);
            let truncated = npwigner::fock::cat_norm_sqr_truncated(
                num_complex::Complex64::new(mag, 0.0),
                rho.cutoff(),
            );
            (exact - truncated).abs() / exact
        }
        _ => 0.0,
    }
}

fn cmd_verify(
    args: &StateArgs,
    phi_samples: Option<usize>,
    theta_samples: Option<usize>,
    out: Option<&Path>,
    timestamp: bool,
) -> CliResult<i32> {
    let spec = args.spec()?;
    let built = spec.build()?;
    let rho = &built.rho;
    let required = min_theta_samples(rho.cutoff());
    let phi_samples = phi_samples.unwrap_or(DEFAULT_PHASE_SAMPLES.max(required));
    let theta_samples = theta_samples.unwrap_or(required);

    let mut report = brute_force_marginal_check(rho, phi_samples);
    let path = path_equivalence_deviation(rho, &verify_points(rho.cutoff()), theta_samples);
    report.push(match path {
        Ok(dev) => Check::max_deviation("path_equivalence", dev, CHECK_TOL),
        Err(e) => {
            Check::max_deviation("path_equivalence", f64::NAN, CHECK_TOL).with_note(e.to_string())
        }
    });
    if let Some(check) = closed_form_check(&spec, rho)? {
        report.push(check);
    }
    if let StateKind::Coherent { .. } = spec.kind {
        report.push(coherent_positivity(rho)?);
    }
    let meta = metadata(&spec, &built, timestamp)?;
    write_report_json(&report, Some(&meta), open_output(out)?)?;
    if report.passed() {
        Ok(0)
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.required && !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Validation(format!(
            "verification failed: {}",
            failed.join(", ")
        )))
    }
}

/// Informational: does `W` stay non-negative on rows `n ≤ min(40, N)` × 256 phases?
pub fn coherent_positivity(rho: &DensityMatrix) -> CliResult<Check> {
    let grid = wigner_grid_with_offset(rho, rho.cutoff().min(40), 256, 0.0)?;
    let min = grid.min();
    Ok(
        Check::max_deviation("coherent_positivity", (-min).max(0.0), POSITIVITY_TOL)
            .informational()
            .with_note(format!("min W = {}", format_f64(min))),
    )
}

/// Parameters of one figure preset.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub spec: StateSpec,
    pub n_max: usize,
    pub phi_samples: usize,
    pub anchor: Option<f64>,
    pub slice_phi: Option<f64>,
}

pub fn figure_preset(number: u8) -> Option<FigurePreset> {
    let spec = |kind, cutoff| StateSpec {
        kind,
        cutoff: Some(cutoff),
        tail_tol: None,
    };
    Some(match number {
        1 => FigurePreset {
            spec: spec(StateKind::Coherent { alpha: [4.0, 0.0] }, 64),
            n_max: 40,
            phi_samples: 256,
            anchor: None,
            slice_phi: Some(0.5),
        },
        2 => FigurePreset {
            spec: spec(StateKind::Cat { alpha: [4.0, 0.0] }, 64),
            n_max: 40,
            phi_samples: 256,
            anchor: None,
            slice_phi: None,
        },
        3 => FigurePreset {
            spec: spec(StateKind::Phase { m: 20, phi0: 0.7 }, 32),
            n_max: 24,
            phi_samples: 512,
            anchor: Some(0.7),
            slice_phi: None,
        },
        _ => return None,
    })
}

/// `fig1.csv` → `fig1_slice.csv`.
pub fn slice_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_slice.{}", ext.to_string_lossy()),
        None => format!("{stem}_slice"),
    };
    path.with_file_name(name)
}

fn cmd_figure(number: u8, out: Option<PathBuf>, format: Format, timestamp: bool) -> CliResult<i32> {
    let preset = figure_preset(number).ok_or_else(|| usage(format!("no figure {number}")))?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = out.unwrap_or_else(|| PathBuf::from(format!("fig{number}.{ext}")));
    let built = preset.spec.build()?;
    let offset = preset
        .anchor
        .map_or(0.0, |phi0| anchored_offset(phi0, preset.phi_samples));
    let grid = wigner_grid_with_offset(&built.rho, preset.n_max, preset.phi_samples, offset)?;
    let meta = metadata(&preset.spec, &built, timestamp)?;
    write_grid(&grid, meta.clone(), format, open_output(Some(&path))?)?;
    if let Some(phi) = preset.slice_phi {
        let slice = wigner_at_phases(&built.rho, preset.n_max, &[phi])?;
        write_grid(&slice, meta, format, open_output(Some(&slice_path(&path)))?)?;
    }
    Ok(0)
}

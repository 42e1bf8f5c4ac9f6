//! `rigidfold`: fold angles, configuration spaces and the bracelet table
//! from the command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rigidfold_core::config_space::{
    admissible_region, complete_two_pair, csv_string, import_json, json_string, obj_string,
    sweep_model_with_tol, trace_implicit_curve, two_pair_components, ConfigSample, DEFAULT_GRID,
    DEFAULT_STEP, VALID_TOL,
};
use rigidfold_core::models::{
    resch_fold, resch_mesh, two_pair_curve_residual, FoldMode, Model, RESCH_TOL,
};
use rigidfold_core::{classify_g60, CreasePattern, ErrorKind, FoldError};

#[derive(Parser)]
#[command(
    name = "rigidfold",
    version,
    about = "Rigid folding kinematics of a single origami vertex",
    after_help = "Fold angles are in radians unless --degrees is given; --alpha and --beta are \
                  sector angles in degrees. RIGIDFOLD_THREADS caps the worker threads.\n\
                  Exit codes: 0 ok, 2 domain error, 3 numerical failure, 4 I/O error."
)]
struct Cli {
    /// Validity tolerance on the closure residual.
    #[arg(long, global = true, default_value_t = VALID_TOL)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bracelet patterns of the regular degree-6 vertex and their rigid foldings.
    Table {
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate one model at given drive angles.
    Fold {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        drives: DriveArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Sample a model across its drive range.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Samples per drive.
        #[arg(short, default_value_t = 100)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Trace the two-pair relation between rho1 and rho2.
    Trace {
        /// Start point `rho1,rho2` on the curve.
        #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true, default_values_t = [0.0, 0.0])]
        seed: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// Trace every component found by a seed scan; `branch` numbers them.
        #[arg(long)]
        all: bool,
        /// Write the (rho1, rho2) points instead of completed fold vectors.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        degrees: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Mask of (rho4, rho5) with a fully general folding at fixed rho6.
    Region {
        #[arg(long, allow_hyphen_values = true)]
        rho6: f64,
        #[arg(short, default_value_t = DEFAULT_GRID)]
        n: usize,
        #[arg(long)]
        degrees: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fold the Resch triangle twist patch; `-o` writes the mesh as OBJ (or
    /// the fold angles as JSON for a .json path).
    Resch {
        #[arg(long, allow_hyphen_values = true)]
        drive: f64,
        #[arg(long)]
        degrees: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a JSON sample file to another format.
    Export {
        #[arg(short, long)]
        input: PathBuf,
        /// Model whose crease pattern OBJ output folds (default: the regular vertex).
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 1)]
        mode: u8,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    Csv,
    Json,
    Obj,
}

#[derive(Args)]
struct ModelArgs {
    /// degree4, trifold, bow-tie, opposites, igloo-2dof, igloo-1dof, two-pair,
    /// fully-general or almost-general.
    model: String,
    #[arg(long, default_value_t = 1)]
    mode: u8,
    /// Sector angle alpha in degrees.
    #[arg(long)]
    alpha: Option<f64>,
    /// Sector angle beta in degrees.
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct DriveArgs {
    /// Drive angles in model order (comma separated or repeated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    drive: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho4: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho5: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho6: Option<f64>,
    /// Read fold angles in degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// File format; inferred from the output extension, csv otherwise.
    #[arg(long, value_enum)]
    format: Option<FileFormat>,
}

impl OutArgs {
    fn format(&self) -> FileFormat {
        self.format.unwrap_or_else(|| {
            match self
                .output
                .as_deref()
                .and_then(Path::extension)
                .and_then(|e| e.to_str())
            {
                Some("json") => FileFormat::Json,
                Some("obj") => FileFormat::Obj,
                _ => FileFormat::Csv,
            }
        })
    }
}

fn angle(x: f64, degrees: bool) -> f64 {
    if degrees {
        x.to_radians()
    } else {
        x
    }
}

impl ModelArgs {
    fn fold_mode(&self) -> Result<FoldMode> {
        let model: Model = self.model.parse()?;
        let fixed = match model {
            Model::Trifold | Model::BowTie => self.alpha.is_some(),
            Model::TwoPair | Model::FullyGeneral | Model::AlmostGeneral => {
                self.alpha.is_some() || self.beta.is_some()
            }
            _ => false,
        };
        if fixed {
            bail!(FoldError::InvalidInput(format!(
                "{model} does not take {} (trifold and bow-tie have only --beta; \
                 the general models live on the regular vertex)",
                if self.alpha.is_some() {
                    "--alpha"
                } else {
                    "--beta"
                }
            )));
        }
        let default = FoldMode::regular(model, 1)?;
        let alpha = self.alpha.map_or(default.alpha, f64::to_radians);
        let beta = self.beta.map_or(default.beta, f64::to_radians);
        Ok(FoldMode::new(model, self.mode, alpha, beta)?)
    }
}

impl DriveArgs {
    fn collect(&self, fm: &FoldMode) -> Result<Vec<f64>> {
        let named = [
            self.rho1, self.rho2, self.rho3, self.rho4, self.rho5, self.rho6,
        ];
        let names = fm.model.drive_names(fm.mode);
        let raw = if !self.drive.is_empty() {
            if named.iter().any(Option::is_some) {
                bail!(FoldError::InvalidInput(
                    "use either --drive or --rhoN, not both".into()
                ));
            }
            self.drive.clone()
        } else {
            for (k, v) in named.iter().enumerate() {
                let name = format!("rho{}", k + 1);
                if v.is_some() && !names.contains(&name) {
                    bail!(FoldError::InvalidInput(format!(
                        "{name} is not a drive of {} mode {} (drives: {})",
                        fm.model,
                        fm.mode,
                        names.join(", ")
                    )));
                }
            }
            names
                .iter()
                .map(|n| {
                    let k: usize = n[3..].parse().expect("rhoN");
                    named[k - 1].ok_or_else(|| {
                        anyhow!(FoldError::InvalidInput(format!(
                            "{} mode {} needs --{n} (drives: {})",
                            fm.model,
                            fm.mode,
                            names.join(", ")
                        )))
                    })
                })
                .collect::<Result<Vec<f64>>>()?
        };
        Ok(raw.into_iter().map(|x| angle(x, self.degrees)).collect())
    }
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, content)
            .map_err(FoldError::from)
            .with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn samples_as(
    samples: &[ConfigSample],
    format: FileFormat,
    pattern: Option<&CreasePattern>,
) -> Result<String> {
    Ok(match format {
        FileFormat::Csv => csv_string(samples)?,
        FileFormat::Json => json_string(samples)?,
        FileFormat::Obj => {
            let pattern = pattern.ok_or_else(|| anyhow!("OBJ output needs a crease pattern"))?;
            let (s, report) = obj_string(samples, pattern)?;
            if report.skipped > 0 {
                eprintln!(
                    "warning: {} sample(s) do not close and were skipped",
                    report.skipped
                );
            }
            s
        }
    })
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.12}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_table(format: ReportFormat, output: Option<&Path>) -> Result<()> {
    let rows = classify_g60();
    let text = match format {
        ReportFormat::Json => {
            let counts: Vec<usize> = rows.iter().map(|r| r.pattern_count).collect();
            let v = json!({ "pattern_counts": counts, "rows": rows });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        ReportFormat::Text => {
            let mut s = String::from("k  patterns  rigid foldings\n");
            for r in &rows {
                let list: Vec<String> = r
                    .foldable_patterns
                    .iter()
                    .map(|f| format!("({}) {} dof {}", f.pattern, f.name, f.dof))
                    .collect();
                let _ = writeln!(
                    s,
                    "{}  {:>8}  {}",
                    r.k,
                    r.pattern_count,
                    if list.is_empty() {
                        "-".to_string()
                    } else {
                        list.join(", ")
                    }
                );
            }
            s
        }
    };
    emit(output, &text)
}

fn cmd_fold(model: &ModelArgs, drives: &DriveArgs, format: ReportFormat, tol: f64) -> Result<()> {
    let fm = model.fold_mode()?;
    let drive = drives.collect(&fm)?;
    let pattern = fm.pattern()?;
    let sols = fm.evaluate(&drive)?;
    if sols.is_empty() {
        bail!(FoldError::Domain(format!(
            "{} mode {} has no real folding at drives {drive:?}",
            fm.model, fm.mode
        )));
    }
    let samples = sols
        .into_iter()
        .enumerate()
        .map(|(k, v)| ConfigSample::evaluate(&pattern, v, k as u32 + 1, tol))
        .collect::<rigidfold_core::Result<Vec<_>>>()?;
    let text = match format {
        ReportFormat::Json => {
            let v = json!({
                "model": fm.model,
                "mode": fm.mode,
                "alpha": fm.alpha,
                "beta": fm.beta,
                "drive": drive,
                "solutions": samples,
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        ReportFormat::Text => {
            let mut s = format!(
                "{} mode {} alpha {:.12} beta {:.12}\n",
                fm.model, fm.mode, fm.alpha, fm.beta
            );
            for smp in &samples {
                let _ = writeln!(s, "rho {}", fmt_vec(smp.rho.as_slice()));
                let _ = writeln!(s, "residual {:.3e}", smp.residual);
                let _ = writeln!(s, "valid {}", smp.valid);
            }
            s
        }
    };
    emit(None, &text)
}

fn cmd_sweep(model: &ModelArgs, n: usize, out: &OutArgs, tol: f64) -> Result<()> {
    let fm = model.fold_mode()?;
    let sweep = sweep_model_with_tol(&fm, n, tol)?;
    let samples: Vec<ConfigSample> = sweep.samples().into_iter().cloned().collect();
    let valid = samples.iter().filter(|s| s.valid).count();
    eprintln!(
        "{} samples, {valid} valid, max residual {:.3e}",
        samples.len(),
        sweep.max_residual()
    );
    let pattern = fm.pattern()?;
    emit(
        out.output.as_deref(),
        &samples_as(&samples, out.format(), Some(&pattern))?,
    )
}

fn cmd_trace(
    seed: &[f64],
    step: f64,
    all: bool,
    raw: bool,
    degrees: bool,
    out: &OutArgs,
    tol: f64,
) -> Result<()> {
    let seed = (angle(seed[0], degrees), angle(seed[1], degrees));
    let traces = if all {
        two_pair_components(step)?
    } else {
        vec![trace_implicit_curve(two_pair_curve_residual, seed, step)?]
    };
    let mut samples = Vec::new();
    for (k, t) in traces.iter().enumerate() {
        if let Some(d) = &t.diagnostic {
            eprintln!("warning: trace {}: {d}", k + 1);
        }
        let part = if raw {
            t.samples.clone()
        } else {
            complete_two_pair(t, tol)?
        };
        samples.extend(part.into_iter().map(|mut s| {
            s.branch = k as u32 + 1;
            s
        }));
        eprintln!(
            "trace {}: {} points, closed {}",
            k + 1,
            t.samples.len(),
            t.closed
        );
    }
    let format = out.format();
    if raw && format == FileFormat::Obj {
        bail!(FoldError::InvalidInput(
            "raw curve points have no OBJ form".into()
        ));
    }
    let g = CreasePattern::g60();
    emit(
        out.output.as_deref(),
        &samples_as(&samples, format, Some(&g))?,
    )
}

fn cmd_region(rho6: f64, n: usize, degrees: bool, output: Option<&Path>) -> Result<()> {
    let region = admissible_region(angle(rho6, degrees), n)?;
    eprintln!("{} of {} grid points admissible", region.count(), n * n);
    let csv = output.and_then(Path::extension).and_then(|e| e.to_str()) == Some("csv");
    let text = if csv {
        let mut s = String::new();
        for row in &region.mask {
            let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    } else {
        serde_json::to_string(&region)? + "\n"
    };
    emit(output, &text)
}

fn cmd_resch(drive: f64, degrees: bool, output: Option<&Path>) -> Result<()> {
    let t = angle(drive, degrees);
    let folding = resch_fold(t)?;
    let mut s = String::new();
    for v in &folding.vertices {
        let _ = writeln!(
            s,
            "r{} residual {:.3e} rho {}",
            v.id,
            v.residual,
            fmt_vec(v.rho.as_slice())
        );
    }
    let worst = folding.max_residual();
    let _ = writeln!(s, "max residual {worst:.3e} (limit {RESCH_TOL:e})");
    print!("{s}");
    if let Some(p) = output {
        let text = if p.extension().and_then(|e| e.to_str()) == Some("json") {
            serde_json::to_string_pretty(&folding)? + "\n"
        } else {
            resch_mesh(&folding)?.to_obj()
        };
        emit(Some(p), &text)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_export(
    input: &Path,
    model: Option<&str>,
    mode: u8,
    alpha: Option<f64>,
    beta: Option<f64>,
    out: &OutArgs,
) -> Result<()> {
    let samples = import_json(input).with_context(|| format!("reading {}", input.display()))?;
    let pattern = match model {
        Some(m) => ModelArgs {
            model: m.to_string(),
            mode,
            alpha,
            beta,
        }
        .fold_mode()?
        .pattern()?,
        None => CreasePattern::g60(),
    };
    emit(
        out.output.as_deref(),
        &samples_as(&samples, out.format(), Some(&pattern))?,
    )
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("RIGIDFOLD_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            anyhow!(FoldError::InvalidInput(format!(
                "RIGIDFOLD_THREADS must be a positive integer, got '{v}'"
            )))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        bail!(FoldError::InvalidInput(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    match &cli.command {
        Command::Table { format, output } => cmd_table(*format, output.as_deref()),
        Command::Fold {
            model,
            drives,
            format,
        } => cmd_fold(model, drives, *format, cli.tol),
        Command::Sweep { model, n, out } => cmd_sweep(model, *n, out, cli.tol),
        Command::Trace {
            seed,
            step,
            all,
            raw,
            degrees,
            out,
        } => cmd_trace(seed, *step, *all, *raw, *degrees, out, cli.tol),
        Command::Region {
            rho6,
            n,
            degrees,
            output,
        } => cmd_region(*rho6, *n, *degrees, output.as_deref()),
        Command::Resch {
            drive,
            degrees,
            output,
        } => cmd_resch(*drive, *degrees, output.as_deref()),
        Command::Export {
            input,
            model,
            mode,
            alpha,
            beta,
            out,
        } => cmd_export(input, model.as_deref(), *mode, *alpha, *beta, out),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<FoldError>() {
            return match e.kind() {
                ErrorKind::Domain => 2,
                ErrorKind::Numerical => 3,
                ErrorKind::Io => 4,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<serde_json::Error>() {
            return 4;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

//! `toric-gk`: construct and verify anti-diagonal toric generalized Kähler
//! structures from polytope data.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use toric_gk::*;

#[derive(Parser)]
#[command(
    name = "toric-gk",
    about = "Toric generalized Kähler structures: validation, tensor frames, boundary probes, reduction",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a plot-ready CSV table (where the command has one).
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Polytope file, accepted both positionally and as `--polytope <path>`.
#[derive(Args, Clone)]
struct PolytopeArg {
    #[arg(value_name = "POLYTOPE")]
    positional: Option<PathBuf>,
    #[arg(long = "polytope", value_name = "PATH")]
    flag: Option<PathBuf>,
}

impl PolytopeArg {
    fn resolve(&self) -> Result<&PathBuf, InputError> {
        match (&self.positional, &self.flag) {
            (Some(p), None) | (None, Some(p)) => Ok(p),
            (Some(_), Some(_)) => Err(InputError(
                "give the polytope either positionally or via --polytope, not both".into(),
            )),
            (None, None) => Err(InputError("missing polytope file".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate the Delzant condition; prints the per-vertex determinant table.
    Validate {
        #[command(flatten)]
        polytope: PolytopeArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate faces; with --C, also the face type table.
    Faces {
        #[command(flatten)]
        polytope: PolytopeArg,
        /// Anti-symmetric matrix as inline JSON or a file path.
        #[arg(long = "C")]
        c: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Assemble tensor frames at interior points.
    Tensors {
        #[command(flatten)]
        polytope: PolytopeArg,
        #[arg(long = "C")]
        c: String,
        /// Potential spec as inline JSON or a file path (default: canonical).
        #[arg(long)]
        potential: Option<String>,
        /// Points: `sample:<count>:<seed>` or `x1,x2;y1,y2;...`.
        #[arg(long)]
        points: Option<String>,
        /// Base tolerance for the identity checks.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify the frame identities at interior points.
    CheckIdentities {
        #[command(flatten)]
        polytope: PolytopeArg,
        #[arg(long = "C")]
        c: String,
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        points: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Boundary extension probes and the determinant lower bound.
    Boundary {
        #[command(flatten)]
        polytope: PolytopeArg,
        #[arg(long = "C")]
        c: String,
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        points: Option<String>,
        /// Approach sequence depth.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduction data: facet map, kernel basis, lifts and fixtures.
    Reduce {
        #[command(flatten)]
        polytope: PolytopeArg,
        /// Downstairs matrix to lift (inline JSON or path).
        #[arg(long = "C")]
        c: Option<String>,
        /// Upstairs d×d matrix to push forward (inline JSON or path).
        #[arg(long = "C0")]
        c0: Option<String>,
        /// Vertex index for the right inverse (default: lowest active set).
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Golden fixture: closed forms on CP1 x CP1 vs the engine.
    ExampleCp1xcp1 {
        /// Anti-diagonal constant c (nonzero).
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Interior point of the moment square, `mu1,mu2`.
        #[arg(long, default_value = "0.25,0.25")]
        mu: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// CP2 reduction: only the combination c1 - c2 + c3 matters.
    ExampleCp2 {
        /// Upstairs coefficients `c1,c2,c3`.
        #[arg(long, default_value = "1,0,1")]
        coeffs: String,
        /// Second choice with the same combination.
        #[arg(long, default_value = "2,1,1")]
        coeffs_alt: String,
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Moment bracket vanishing for the unitary block action on CPn.
    ExampleCpnBracket {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Size of the leading affine Poisson block.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn emit<T: Serialize>(
    report: &T,
    output: &OutputArgs,
    csv: Option<String>,
) -> Result<(), InputError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| InputError(format!("serialization failed: {e}")))?;
    match &output.out {
        Some(path) => std::fs::write(path, json.as_bytes())
            .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    if let Some(path) = &output.csv {
        let table =
            csv.ok_or_else(|| InputError("this command has no CSV table; drop --csv".into()))?;
        std::fs::write(path, table.as_bytes())
            .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, InputError> {
    match cli.command {
        Command::Validate { polytope, output } => {
            let (report, pass) = cmd_validate(polytope.resolve()?)?;
            if !pass {
                let failing: Vec<String> = report
                    .report
                    .vertices
                    .iter()
                    .filter(|v| !v.pass)
                    .map(|v| {
                        format!(
                            "vertex at facets {:?} (|det| = {})",
                            v.active_facets,
                            v.det_abs.as_deref().unwrap_or("not simple")
                        )
                    })
                    .collect();
                eprintln!("delzant check failed: {}", failing.join("; "));
            }
            let csv = validate_csv(&report);
            emit(&report, &output, Some(csv))?;
            Ok(pass)
        }
        Command::Faces {
            polytope,
            c,
            output,
        } => {
            let (report, pass) = cmd_faces(polytope.resolve()?, c.as_deref())?;
            let csv = faces_csv(&report);
            emit(&report, &output, Some(csv))?;
            Ok(pass)
        }
        Command::Tensors {
            polytope,
            c,
            potential,
            points,
            tol,
            output,
        } => {
            let (report, pass) = cmd_tensors(
                polytope.resolve()?,
                &c,
                potential.as_deref(),
                points.as_deref(),
                tol,
            )?;
            if !pass {
                eprintln!("tensor checks failed at one or more points");
            }
            let csv = tensors_csv(&report);
            emit(&report, &output, Some(csv))?;
            Ok(pass)
        }
        Command::CheckIdentities {
            polytope,
            c,
            potential,
            points,
            tol,
            output,
        } => {
            let (report, pass) = cmd_check_identities(
                polytope.resolve()?,
                &c,
                potential.as_deref(),
                points.as_deref(),
                tol,
            )?;
            if !pass {
                let mut failing: Vec<&str> =
                    report.per_point.iter().flat_map(|r| r.failing()).collect();
                failing.dedup();
                eprintln!("failing identities: {failing:?}");
            }
            emit(&report, &output, None)?;
            Ok(pass)
        }
        Command::Boundary {
            polytope,
            c,
            potential,
            points,
            depth,
            output,
        } => {
            let (report, pass) = cmd_boundary(
                polytope.resolve()?,
                &c,
                potential.as_deref(),
                points.as_deref(),
                depth,
            )?;
            if !pass {
                for pr in &report.compactification.probes {
                    if pr.verdict != toric_gk_core::boundary::Verdict::Converges {
                        eprintln!(
                            "probe {} on face {:?}: {:?}",
                            pr.quantity_name, pr.face_active, pr.verdict
                        );
                    }
                }
            }
            let csv = boundary_csv(&report);
            emit(&report, &output, Some(csv))?;
            Ok(pass)
        }
        Command::Reduce {
            polytope,
            c,
            c0,
            vertex,
            points,
            output,
        } => {
            let (report, pass) = cmd_reduce(
                polytope.resolve()?,
                c.as_deref(),
                c0.as_deref(),
                vertex,
                points.as_deref(),
            )?;
            emit(&report, &output, None)?;
            Ok(pass)
        }
        Command::ExampleCp1xcp1 { c, mu, tol, output } => {
            let parts: Vec<f64> = mu
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| InputError(format!("bad --mu: {e}")))?;
            if parts.len() != 2 {
                return Err(InputError("--mu needs two coordinates".into()));
            }
            let (report, pass) = cmd_example_cp1xcp1(c, [parts[0], parts[1]], tol)?;
            if !pass {
                for cmp in &report.report.comparisons {
                    if !cmp.pass {
                        eprintln!(
                            "{} differs from the closed form by {:.3e}",
                            cmp.name, cmp.max_diff
                        );
                    }
                }
            }
            emit(&report, &output, None)?;
            Ok(pass)
        }
        Command::ExampleCp2 {
            coeffs,
            coeffs_alt,
            points,
            output,
        } => {
            let (report, pass) = cmd_example_cp2(&coeffs, &coeffs_alt, points.as_deref())?;
            emit(&report, &output, None)?;
            Ok(pass)
        }
        Command::ExampleCpnBracket {
            n,
            k,
            samples,
            seed,
            tol,
            output,
        } => {
            let (report, pass) = cmd_example_cpn_bracket(n, k, samples, seed, tol)?;
            emit(&report, &output, None)?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

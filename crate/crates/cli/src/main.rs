use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use colorproj::sim::{configure_workers_from_env, WORKERS_ENV};
use colorproj::{
    build_bcc_colex, load_lattice, minor_c, minor_pair, save_lattice, sweep, validate_colex, Color, ColorCodeDecoder,
    ColorPair, Colex, DecoderConfig, DecoderKind, ErrorFile, ExecMode, NoiseModel, ResidualClass, SweepOptions,
    Verdict,
};
use serde_json::json;

/// Decode 3D color codes through their toric-code minors.
#[derive(Parser)]
#[command(name = "colorproj", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the periodic bitruncated-cubic lattice of size L (even).
    Gen {
        #[arg(long = "L", value_name = "n")]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a lattice file for colex violations.
    Validate {
        #[arg(long = "in", value_name = "file")]
        input: PathBuf,
    },
    /// Decode one error and print a JSON verdict.
    Decode {
        #[arg(long)]
        lattice: PathBuf,
        /// Inline JSON `{"x":[..],"z":[..]}` or a path to such a file.
        #[arg(long)]
        error: String,
        #[command(flatten)]
        decoder: DecoderArgs,
    },
    /// Monte Carlo sweep over error rates.
    Sweep {
        #[arg(long = "L", value_name = "n", conflicts_with = "lattice")]
        size: Option<usize>,
        #[arg(long)]
        lattice: Option<PathBuf>,
        /// Comma-separated X error probabilities.
        #[arg(long, value_delimiter = ',', required = true)]
        px: Vec<f64>,
        /// Comma-separated Z error probabilities; defaults to `--px`. A single
        /// value applies to every point.
        #[arg(long, value_delimiter = ',')]
        pz: Vec<f64>,
        /// Sample X, Y, Z exclusively per qubit (needs px == pz).
        #[arg(long)]
        correlated: bool,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        decoder: DecoderArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
        /// Leave per-trial records out of the JSON report.
        #[arg(long)]
        summary_only: bool,
    },
    /// Print cell counts of every minor complex.
    Minors {
        #[arg(long)]
        lattice: PathBuf,
    },
}

#[derive(Args)]
struct DecoderArgs {
    #[arg(long = "toric-decoder", default_value = "exact", value_parser = parse_kind)]
    kind: DecoderKind,
    #[arg(long, default_value_t = DecoderConfig::default().cap_matching)]
    cap_matching: usize,
    #[arg(long, default_value_t = DecoderConfig::default().cap_surface)]
    cap_surface: usize,
    /// Minimum-weight alternatives per component (1 disables tie resolution).
    #[arg(long, default_value_t = DecoderConfig::default().max_candidates)]
    max_candidates: usize,
    #[arg(long, default_value_t = DecoderConfig::default().max_combinations)]
    max_combinations: usize,
}

fn parse_kind(s: &str) -> Result<DecoderKind, String> {
    s.parse()
}

impl DecoderArgs {
    fn config(&self) -> DecoderConfig {
        DecoderConfig {
            kind: self.kind,
            cap_matching: self.cap_matching,
            cap_surface: self.cap_surface,
            max_candidates: self.max_candidates,
            max_combinations: self.max_combinations,
        }
    }
}

/// Outcome that maps to a nonzero exit without being an I/O-style error.
enum Status {
    Ok,
    Invalid,
    VerificationFailed,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Invalid) => ExitCode::from(3),
        Ok(Status::VerificationFailed) => {
            eprintln!("internal verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read_colex(path: &Path) -> Result<(Colex, Option<usize>)> {
    let file = load_lattice(path).with_context(|| format!("reading {}", path.display()))?;
    let size = file.lattice_size;
    Ok((file.into_colex()?, size))
}

fn decoder_for(colex: &Colex, cfg: DecoderConfig) -> Result<ColorCodeDecoder> {
    Ok(ColorCodeDecoder::new(colex, cfg)?)
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Gen { size, out } => {
            let colex = build_bcc_colex(size)?;
            save_lattice(&out, &colex, Some(size))?;
            let [v, e, f, c] = colex.complex().counts();
            eprintln!("wrote {}: {v} vertices, {e} edges, {f} faces, {c} cells", out.display());
            Ok(Status::Ok)
        }
        Command::Validate { input } => {
            let (colex, _) = read_colex(&input)?;
            let report = validate_colex(&colex);
            let [v, e, f, c] = colex.complex().counts();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "valid": report.is_valid(),
                    "counts": {"vertices": v, "edges": e, "faces": f, "cells": c},
                    "euler_characteristic": colex.complex().euler_characteristic(),
                    "violations": report.violations,
                }))?
            );
            Ok(if report.is_valid() { Status::Ok } else { Status::Invalid })
        }
        Command::Decode { lattice, error, decoder } => {
            let (colex, _) = read_colex(&lattice)?;
            let dec = decoder_for(&colex, decoder.config())?;
            let text = if error.trim_start().starts_with('{') {
                error
            } else {
                fs::read_to_string(&error).with_context(|| format!("reading {error}"))?
            };
            let file: ErrorFile = serde_json::from_str(&text).context("parsing error JSON")?;
            let actual = file.to_support(dec.code().num_qubits())?;
            let syndrome = dec.code().syndrome_of(&actual)?;
            let verdict = match dec.decode(&syndrome) {
                Ok(est) => Verdict {
                    residual_class: Some(dec.code().residual_class(&actual, &est)?),
                    estimate: Some(ErrorFile::from_support(&est)),
                    failure_mode: None,
                },
                Err(f) => Verdict {
                    estimate: None,
                    residual_class: None,
                    failure_mode: Some(f),
                },
            };
            println!("{}", serde_json::to_string_pretty(&verdict)?);
            Ok(if verdict.residual_class == Some(ResidualClass::SyndromeMismatch) {
                Status::VerificationFailed
            } else {
                Status::Ok
            })
        }
        Command::Sweep {
            size,
            lattice,
            px,
            pz,
            correlated,
            trials,
            seed,
            decoder,
            out,
            csv,
            sequential,
            summary_only,
        } => {
            let (colex, lattice_size) = match (size, lattice) {
                (Some(l), None) => (build_bcc_colex(l)?, Some(l)),
                (None, Some(path)) => read_colex(&path)?,
                _ => bail!("give exactly one of --L or --lattice"),
            };
            let pz = match pz.len() {
                0 => px.clone(),
                1 => vec![pz[0]; px.len()],
                n if n == px.len() => pz,
                n => bail!("--pz has {n} values but --px has {}", px.len()),
            };
            let noise = px
                .iter()
                .zip(&pz)
                .map(|(&x, &z)| {
                    let mut m = NoiseModel::new(x, z)?;
                    m.correlated = correlated;
                    Ok(m)
                })
                .collect::<colorproj::Result<Vec<_>>>()?;
            if let Some(n) = configure_workers_from_env()? {
                eprintln!("{WORKERS_ENV}={n}");
            }
            let dec = decoder_for(&colex, decoder.config())?;
            let opts = SweepOptions {
                trials,
                seed,
                mode: if sequential { ExecMode::Sequential } else { ExecMode::Parallel },
                keep_records: !summary_only,
                lattice_size,
            };
            let report = sweep(&dec, &noise, &opts)?;
            fs::write(&out, serde_json::to_string(&report)?).with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = csv {
                fs::write(&path, report.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            }
            for pt in &report.points {
                eprintln!(
                    "p={} trials={} logical={} failed={} rate={:.5} ci=[{:.5}, {:.5}]",
                    pt.p, pt.trials, pt.logical, pt.failed, pt.rate, pt.ci_lo, pt.ci_hi
                );
            }
            Ok(if report.verification_failures() > 0 {
                Status::VerificationFailed
            } else {
                Status::Ok
            })
        }
        Command::Minors { lattice } => {
            let (colex, _) = read_colex(&lattice)?;
            let d = colorproj::dual(&colex)?;
            let mut rows = Vec::new();
            for c in Color::ALL {
                let m = minor_c(&d, c);
                let problems = m.to_cell_complex(&d).validate();
                rows.push(json!({
                    "minor": c.to_string(),
                    "vertices": m.vertices().len(),
                    "edges": m.edges().len(),
                    "faces": m.faces().len(),
                    "cells": m.cells().len(),
                    "valid": problems.is_empty(),
                }));
            }
            for p in ColorPair::ALL {
                let m = minor_pair(&d, p);
                let problems = m.to_cell_complex(&d).validate();
                rows.push(json!({
                    "minor": p.to_string(),
                    "vertices": m.vertices().len(),
                    "edges": m.edges().len(),
                    "faces": m.faces().len(),
                    "cells": m.cells().len(),
                    "valid": problems.is_empty(),
                }));
            }
            println!("{}", serde_json::to_string_pretty(&rows)?);
            Ok(Status::Ok)
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ccs_core::bar::{hom_boundary, inhom_to_hom, is_cycle, is_good, torsion_cycle};
use ccs_core::config::five_term_fixture;
use ccs_core::io::{emit_report, parse_cycle_file_with, write_cycle_file};
use ccs_core::paths::{find_base_point, verify_pq_pattern_at, Windings};
use ccs_core::pipeline::{ccs_value, EvalConfig};
use ccs_core::real::real_check;
use ccs_core::tol::Tolerances;
use ccs_core::{CcsError, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_VALIDATION: u8 = 2;
const EXIT_RESIDUAL: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "ccs", version, about = "Cheeger-Chern-Simons class of SL(2,C) via the extended Bloch group")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    #[arg(long)]
    tol_det: Option<f64>,
    #[arg(long)]
    tol_cmp: Option<f64>,
    #[arg(long)]
    tol_zero: Option<f64>,
    #[arg(long)]
    tol_vgood: Option<f64>,
    #[arg(long)]
    tol_flat: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            det: self.tol_det.unwrap_or(d.det),
            cmp: self.tol_cmp.unwrap_or(d.cmp),
            zero: self.tol_zero.unwrap_or(d.zero),
            vgood: self.tol_vgood.unwrap_or(d.vgood),
            flat: self.tol_flat.unwrap_or(d.flat),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate 2*C2 mod 1 on a 3-cycle read from a JSON cycle file.
    Eval {
        cycle: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = ccs_core::pipeline::DEFAULT_TRIALS)]
        trials: usize,
        /// Largest accepted trial spread and volume residual.
        #[arg(long, default_value_t = 1e-7)]
        tolerance: f64,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Emit the cycle sum_i [t | t^i | t] for the rotation t of order N.
    Torsion {
        #[arg(long)]
        n: u32,
    },
    /// Validate a cycle file and report whether it is a (good) cycle.
    CheckCycle {
        file: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Build and verify the five-term fixture for complex x, y (e.g. 0.3+0.2i).
    FiveTerm {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Also write the boundary 3-cycle as a cycle file.
        #[arg(long, value_name = "PATH")]
        cycle_out: Option<PathBuf>,
    },
    /// Check the small-positive agreement on random real triples.
    RealCheck {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lift a composite loop of five-tuples and compare with the closed form.
    LiftPath {
        #[arg(long, allow_negative_numbers = true)]
        p0: i64,
        #[arg(long, allow_negative_numbers = true)]
        q0: i64,
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        #[arg(long, allow_negative_numbers = true)]
        p1: i64,
        #[arg(long, allow_negative_numbers = true)]
        q1: i64,
        /// Base point as x,y with complex entries.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// Run the compact property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A rendered report plus whether its numeric checks passed.
struct Outcome {
    passed: bool,
}

fn emit<T: Serialize>(r: &T, out: Option<&Path>, passed: bool) -> Result<Outcome> {
    emit_report(r, out)?;
    Ok(Outcome { passed })
}

fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<C64>()
        .map_err(|_| anyhow!(CcsError::PreconditionFailed(format!("cannot parse complex number {s:?}"))))
}

fn parse_base(s: &str) -> Result<(C64, C64)> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| anyhow!(CcsError::PreconditionFailed(format!("base must be x,y: {s:?}"))))?;
    Ok((parse_complex(x)?, parse_complex(y)?))
}

#[derive(Serialize)]
struct CycleCheck {
    degree: usize,
    terms: usize,
    is_cycle: bool,
    boundary_terms: usize,
    good: bool,
    offending_pairs: usize,
}

fn run(cli: Cli) -> Result<Outcome> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Eval {
            cycle,
            seed,
            trials,
            tolerance,
            tol,
        } => {
            let tolerances = tol.resolve();
            let c = parse_cycle_file_with(&cycle, tolerances.det)?;
            let cfg = EvalConfig {
                seed,
                trials,
                tolerances,
            };
            let r = ccs_value(&c, &cfg).with_context(|| format!("evaluating {}", cycle.display()))?;
            let passed = r.spread <= tolerance && r.vol_residual <= tolerance && r.nu_exact;
            emit(&r, out, passed)
        }
        Command::Torsion { n } => {
            let c = torsion_cycle(n)?;
            write_cycle_file(&c, out)?;
            Ok(Outcome { passed: true })
        }
        Command::CheckCycle { file, tol } => {
            let tolerances = tol.resolve();
            let c = parse_cycle_file_with(&file, tolerances.det)?;
            let (cyc, b) = is_cycle(&c);
            let good = is_good(&inhom_to_hom(&c));
            let r = CycleCheck {
                degree: c.degree(),
                terms: c.len(),
                is_cycle: cyc,
                boundary_terms: b.len(),
                good: good.ok,
                offending_pairs: good.offending.len(),
            };
            emit_report(&r, out)?;
            if !cyc {
                return Err(anyhow!(CcsError::NotACycle));
            }
            Ok(Outcome { passed: true })
        }
        Command::FiveTerm { x, y, cycle_out } => {
            let f = five_term_fixture(parse_complex(&x)?, parse_complex(&y)?)?;
            if let Some(p) = cycle_out {
                write_cycle_file(&f.cycle, Some(&p))?;
            }
            // the fixture's cycle is a boundary by construction
            let boundary_ok = hom_boundary(&inhom_to_hom(&f.cycle)).map(|b| b.is_empty()).unwrap_or(false);
            let passed = f.holds(1e-7) && boundary_ok;
            emit(&f, out, passed)
        }
        Command::RealCheck { samples, seed } => {
            let s = real_check(samples, &mut ChaCha8Rng::seed_from_u64(seed));
            let passed = s.failures.is_empty();
            emit(&s, out, passed)
        }
        Command::LiftPath { p0, q0, r, p1, q1, base } => {
            let base = match base {
                Some(b) => parse_base(&b)?,
                None => find_base_point()?,
            };
            let c = verify_pq_pattern_at(base, &Windings { p0, q0, r, p1, q1 })?;
            let passed = c.matches && c.five_term_sum.norm() < 1e-8;
            emit(&c, out, passed)
        }
        Command::Selftest { seed } => {
            let r = ccs_core::selftest::run(seed);
            emit(&r, out, r.passed)
        }
    }
}

fn code_for(e: &CcsError) -> u8 {
    match e {
        CcsError::Io(_) => EXIT_IO,
        CcsError::Term { source, .. } => code_for(source),
        CcsError::SamplingExhausted(_) | CcsError::RepairFailed(_) | CcsError::NuNonzero(_) => EXIT_RESIDUAL,
        _ => EXIT_VALIDATION,
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    e.downcast_ref::<CcsError>().map_or(EXIT_VALIDATION, code_for)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) if o.passed => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("error: numeric residual above tolerance");
            ExitCode::from(EXIT_RESIDUAL)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

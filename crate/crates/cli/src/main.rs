use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use harmsum::commands::{self, parse_grid};
use harmsum::formats::{csv_string, read_json, write_json, write_text, L2_CSV_HEADER, VERIFY_CSV_HEADER};
use harmsum::{CliError, EXIT_FAIL, EXIT_PASS};
use harmsum_core::construction::ConstructionPlan;
use harmsum_core::harness::SampleSpec;

#[derive(Parser)]
#[command(name = "harmsum", version, about = "Harmonic sums equivalent to radial weights on the unit ball")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Doubling analysis of a weight
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Log-convex envelope of a weight
    #[command(subcommand)]
    Envelope(EnvelopeCmd),
    /// Lacunary power-series coefficients
    #[command(subcommand)]
    Coeffs(CoeffsCmd),
    /// Zonal L2 attainer
    #[command(subcommand)]
    L2(L2Cmd),
    /// Building-block certification
    #[command(subcommand)]
    Blocks(BlocksCmd),
    /// Construction plans and their verification
    #[command(subcommand)]
    Construct(ConstructCmd),
}

#[derive(Subcommand)]
enum WeightsCmd {
    Analyze {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 60)]
        jmax: u32,
        #[arg(long, default_value_t = 1e6)]
        cap: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EnvelopeCmd {
    Build {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 40)]
        smin_exp: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CoeffsCmd {
    Build {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 2.0)]
        crossover: f64,
        /// Largest exponent the greedy selection may use
        #[arg(long, default_value_t = 1u128 << 100)]
        kmax: u128,
        #[arg(long, default_value_t = 40)]
        smin_exp: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum L2Cmd {
    Build {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        dim: u32,
        /// Comma-separated unit vector (default: last coordinate axis)
        #[arg(long, value_delimiter = ',')]
        pole: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[arg(long)]
        attainer: PathBuf,
        /// Radii as start:stop:count
        #[arg(long, default_value = "0.1:0.9:9")]
        grid: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BlocksCmd {
    Certify {
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 20)]
        nmax: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Multiply every block by this factor
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    Build {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, default_value_t = 1e-9)]
        tail_eps: f64,
        /// Bands the plan must cover
        #[arg(long, default_value_t = 6)]
        bands: usize,
        #[arg(long = "A")]
        a_override: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value_t = 8)]
        radii: usize,
        #[arg(long, default_value_t = 64)]
        dirs: usize,
        #[arg(long, default_value_t = 3)]
        bands: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// CSV rows
        #[arg(long)]
        out: Option<PathBuf>,
        /// Full JSON report
        #[arg(long)]
        report: Option<PathBuf>,
    },
    Eval {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        one_minus_r_exp: f64,
        /// Polar angle in radians
        #[arg(long, default_value_t = 0.0, conflicts_with = "turn")]
        angle: f64,
        /// Polar angle as a fraction of a full turn
        #[arg(long)]
        turn: Option<f64>,
        /// Band index used for truncation
        #[arg(long)]
        band_hint: Option<usize>,
    },
}

fn verdict(pass: bool, what: &str) -> i32 {
    eprintln!("{what}: {}", if pass { "PASS" } else { "FAIL" });
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Weights(WeightsCmd::Analyze { weight, jmax, cap, out }) => {
            let r = commands::weights_analyze(&weight, jmax, cap)?;
            eprintln!("A = {} (clamped {}), divergent = {}", r.doubling.a, r.doubling.a_clamped, r.doubling.divergent);
            write_json(out.as_deref(), &r)?;
            Ok(EXIT_PASS)
        }
        Cmd::Envelope(EnvelopeCmd::Build { weight, smin_exp, out }) => {
            let r = commands::envelope_build(&weight, smin_exp)?;
            eprintln!("{} hull nodes, defect {}", r.nodes.len(), r.defect);
            write_json(out.as_deref(), &r)?;
            Ok(EXIT_PASS)
        }
        Cmd::Coeffs(CoeffsCmd::Build { weight, crossover, kmax, smin_exp, out }) => {
            let (file, report) = commands::coeffs_build(&weight, crossover, kmax, smin_exp)?;
            eprintln!(
                "{} terms, ratio in [{}, {}], threshold {}",
                file.entries.len(),
                report.min_ratio,
                report.max_ratio,
                report.threshold
            );
            write_json(out.as_deref(), &file)?;
            Ok(verdict(report.pass, "L2 equivalence"))
        }
        Cmd::L2(L2Cmd::Build { coeffs, dim, pole, out }) => {
            let a = commands::l2_build(&coeffs, dim, pole)?;
            write_json(out.as_deref(), &a)?;
            Ok(EXIT_PASS)
        }
        Cmd::L2(L2Cmd::Verify { attainer, grid, seed, out }) => {
            let radii = parse_grid(&grid)?;
            let (rows, pass) = commands::l2_verify(&attainer, &radii, seed)?;
            write_text(out.as_deref(), &csv_string(&L2_CSV_HEADER, &rows)?)?;
            Ok(verdict(pass, "quadrature vs closed form"))
        }
        Cmd::Blocks(BlocksCmd::Certify { dim, p, nmax, seed, scale, out }) => {
            let r = commands::blocks_certify(dim, p, nmax, seed, scale)?;
            for (name, a) in [("em1", &r.em1), ("em2", &r.em2), ("em3", &r.em3)] {
                eprintln!("{name}: {} (worst margin {})", if a.pass { "PASS" } else { "FAIL" }, a.worst_margin);
            }
            write_json(out.as_deref(), &r)?;
            Ok(verdict(r.pass(), "block axioms"))
        }
        Cmd::Construct(ConstructCmd::Build { weight, dim, tail_eps, bands, a_override, out }) => {
            let plan = commands::construct_build(&weight, dim, tail_eps, bands, a_override)?;
            eprintln!("A = {}, p = {}, J = {}, T = {}", plan.a, plan.p, plan.j, plan.t);
            write_json(out.as_deref(), &plan)?;
            Ok(EXIT_PASS)
        }
        Cmd::Construct(ConstructCmd::Verify { plan, radii, dirs, bands, seed, out, report }) => {
            let plan: ConstructionPlan = read_json(&plan)?;
            let spec = SampleSpec { radii_per_band: radii, directions: dirs, seed, max_band: bands };
            let r = commands::construct_verify(plan, &spec)?;
            write_text(out.as_deref(), &csv_string(&VERIFY_CSV_HEADER, &r.rows)?)?;
            if let Some(p) = report {
                write_json(Some(&p), &r)?;
            }
            eprintln!(
                "ratio in [{:?}, {:?}], corridor [{}, {}]",
                r.c_low_meas, r.c_high_meas, r.c_low, r.c_high
            );
            if !r.jlow_pass {
                eprintln!("per-j lower bound fails at {:?}", r.jlow_witness);
            }
            if r.decomposition_failures > 0 {
                eprintln!("{} samples break the f1/f2/f3 bounds, first {:?}", r.decomposition_failures, r.decomposition_witness);
            }
            Ok(verdict(r.all_checks_pass(), "two-sided estimate"))
        }
        Cmd::Construct(ConstructCmd::Eval { plan, one_minus_r_exp, angle, turn, band_hint }) => {
            let plan: ConstructionPlan = read_json(&plan)?;
            let turn = turn.unwrap_or(angle / std::f64::consts::TAU);
            let r = commands::construct_eval(plan, one_minus_r_exp, turn, band_hint)?;
            write_json(None, &r)?;
            Ok(EXIT_PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

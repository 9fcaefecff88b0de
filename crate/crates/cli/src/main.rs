use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use homoclinic::constants::{self, PaperConstants};
use homoclinic::ineqlab;
use homoclinic::mpsolve::{self, SolverSettings};
use homoclinic::par::Execution;
use homoclinic::report::{fmt_f64, to_json, Envelope};
use homoclinic::{certify, Error, GridFunction, Potential};
use serde::Serialize;

const EXIT_NONCONVERGENCE: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "homoclinic",
    version,
    about = "Homoclinic solutions of u'''' + beta^2 u'' + V'(u) = 0"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Wave speed.
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, global = true, default_value_t = 1.62)]
    k0: f64,
    /// bridge or sh.
    #[arg(long, global = true, default_value = "bridge", value_parser = parse_potential)]
    potential: Potential,
    /// Half-length L of the mesh [-L, L].
    #[arg(long, global = true, default_value_t = 40.0)]
    domain_length: f64,
    /// Mesh nodes N (odd).
    #[arg(long, global = true, default_value_t = 2001)]
    grid_points: usize,
    /// Path nodes P.
    #[arg(long, global = true, default_value_t = 41)]
    path_points: usize,
    /// Newton residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 5000)]
    max_iter: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Omit the timestamped metadata block.
    #[arg(long, global = true)]
    no_meta: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// k1, k2, beta0 and the beta* comparison.
    Constants,
    /// u* for the chosen potential.
    Ustar,
    /// a* with mu1, mu2 and the tan-equation root.
    Astar,
    /// beta* by grid scan and bisection.
    BetaStar,
    /// Decay rates of the linearization at 0.
    Decay,
    /// Inequality checks.
    Inequality {
        #[command(subcommand)]
        which: Inequality,
    },
    /// Mountain-pass solve with Newton polish and certificate.
    Solve {
        /// Also write the profile table here.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Solves over a beta grid and writes a CSV.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.4,0.5,0.6,0.7")]
        betas: Vec<f64>,
        /// Seed each solve with the previous profile.
        #[arg(long)]
        continuation: bool,
    },
    /// Certifies a stored profile (CSV with x,u in the first two columns).
    Certify {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum Inequality {
    /// M_a over a (k, a) grid, CSV k,a,M_a,sign.
    L1 {
        #[arg(long, value_delimiter = ',', default_value = "2.0,2.34,2.5,3.0")]
        ks: Vec<f64>,
        #[arg(
            long = "as",
            value_delimiter = ',',
            default_value = "0.1,0.5,1,2,5,10,20"
        )]
        a_values: Vec<f64>,
    },
    /// Half-line minimizer sign, CSV k,value.
    L2 {
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1.05,1.151387818865997,1.5,2.0,2.5,3.0"
        )]
        ks: Vec<f64>,
    },
    /// Seeded zero-ends trials of the quadratic form (beta defaults to sqrt 2).
    Quadform {
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// First Navier eigenvalue, closed form and discrete.
    Navier {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1024)]
        intervals: usize,
    },
    /// Extremal beam ratio 15/(4a^5).
    Beam {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Defect of 1 + cos(beta x) in the clamped eigenproblem.
    Clamped,
}

fn parse_potential(s: &str) -> Result<Potential, String> {
    s.parse::<Potential>().map_err(|e| e.to_string())
}

impl RunConfig {
    fn beta(&self) -> homoclinic::Result<f64> {
        match self.beta {
            Some(b) if b > 0.0 && b.is_finite() => Ok(b),
            Some(b) => Err(Error::InvalidArgument(format!(
                "--beta must be positive, got {b}"
            ))),
            None => Err(Error::InvalidArgument(
                "--beta is required for this command".into(),
            )),
        }
    }

    fn settings(&self) -> homoclinic::Result<SolverSettings> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        let s = SolverSettings {
            domain_length: self.domain_length,
            grid_points: self.grid_points,
            path_points: self.path_points,
            newton_tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
            execution: Execution::default(),
            ..SolverSettings::default()
        };
        s.validate()?;
        Ok(s)
    }

    fn emit(&self, text: &str) -> homoclinic::Result<()> {
        match &self.output {
            Some(p) => std::fs::write(p, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&self, body: T) -> homoclinic::Result<()> {
        self.emit(&to_json(&Envelope::new(body, !self.no_meta))?)
    }

    fn emit_csv(
        &self,
        write: impl FnOnce(&mut Vec<u8>) -> homoclinic::Result<()>,
    ) -> homoclinic::Result<()> {
        let mut buf = Vec::new();
        write(&mut buf)?;
        self.emit(&String::from_utf8(buf).expect("CSV output is UTF-8"))
    }
}

#[derive(Serialize)]
struct UStarReport {
    beta: f64,
    k0: f64,
    potential: Potential,
    u_star: f64,
}

#[derive(Serialize)]
struct QuadformSummary {
    beta: f64,
    k: f64,
    seed: u64,
    trials: usize,
    min_value: f64,
    min_relative: f64,
    all_nonnegative: bool,
    results: Vec<ineqlab::QuadTrial>,
}

#[derive(Serialize)]
struct ClampedReport {
    beta: f64,
    defect: f64,
}

fn run(cli: Cli) -> homoclinic::Result<()> {
    let rc = &cli.run;
    match cli.command {
        Command::Constants => rc.emit_json(PaperConstants::compute(rc.k0)?),
        Command::Ustar => {
            let beta = rc.beta()?;
            let u_star = match rc.potential {
                Potential::Bridge => constants::u_star_bridge(beta, rc.k0)?,
                Potential::SwiftHohenbergShifted => constants::u_star_sh(beta, rc.k0),
            };
            rc.emit_json(UStarReport {
                beta,
                k0: rc.k0,
                potential: rc.potential,
                u_star,
            })
        }
        Command::Astar => rc.emit_json(constants::a_star_detail(rc.beta()?, rc.k0)?),
        Command::BetaStar => rc.emit_json(constants::beta_star_bisect(rc.k0)?),
        Command::Decay => rc.emit_json(constants::decay_roots(rc.beta()?, rc.potential.c0())?),
        Command::Inequality { which } => inequality(rc, which),
        Command::Solve { profile } => {
            let beta = rc.beta()?;
            let report = mpsolve::solve(beta, rc.potential, rc.k0, &rc.settings()?)?;
            if let Some(path) = profile {
                let f = File::create(&path)?;
                mpsolve::write_profile_csv(f, &report.profile, beta, rc.potential)?;
            }
            rc.emit_json(report)
        }
        Command::Sweep {
            betas,
            continuation,
        } => {
            let rows = mpsolve::sweep(&betas, rc.potential, rc.k0, &rc.settings()?, continuation)?;
            rc.emit_csv(|w| mpsolve::write_sweep_csv(w, &rows))
        }
        Command::Certify { input } => {
            let u = read_profile(&input)?;
            rc.emit_json(certify::certify_profile(
                &u,
                rc.beta()?,
                rc.potential,
                rc.k0,
            )?)
        }
    }
}

fn inequality(rc: &RunConfig, which: Inequality) -> homoclinic::Result<()> {
    match which {
        Inequality::L1 { ks, a_values } => {
            let rows = ineqlab::l1_grid(&ks, &a_values, Execution::default())?;
            rc.emit_csv(|w| {
                let mut out = String::from("k,a,M_a,sign\n");
                for r in rows {
                    out += &format!(
                        "{},{},{},{}\n",
                        fmt_f64(r.k),
                        fmt_f64(r.a),
                        fmt_f64(r.m_a),
                        r.sign
                    );
                }
                w.extend_from_slice(out.as_bytes());
                Ok(())
            })
        }
        Inequality::L2 { ks } => {
            let mut out = String::from("k,value\n");
            for k in ks {
                let m = ineqlab::minimizer_l2(k)?;
                out += &format!("{},{}\n", fmt_f64(k), fmt_f64(m.value));
            }
            rc.emit(&out)
        }
        Inequality::Quadform { k, trials } => {
            let beta = rc.beta.unwrap_or(std::f64::consts::SQRT_2);
            if !(beta > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "--beta must be positive, got {beta}"
                )));
            }
            let results =
                ineqlab::quad_form_trials(trials, rc.seed, beta, k, Execution::default())?;
            let min_value = results
                .iter()
                .map(|t| t.value)
                .fold(f64::INFINITY, f64::min);
            let min_relative = results
                .iter()
                .map(|t| t.value / t.scale)
                .fold(f64::INFINITY, f64::min);
            let all_nonnegative = results.iter().all(|t| t.value >= -1e-8 * t.scale);
            rc.emit_json(QuadformSummary {
                beta,
                k,
                seed: rc.seed,
                trials,
                min_value,
                min_relative,
                all_nonnegative,
                results,
            })
        }
        Inequality::Navier { a, intervals } => {
            rc.emit_json(ineqlab::navier_first_eigen_discrete(a, intervals)?)
        }
        Inequality::Beam { a } => rc.emit_json(ineqlab::beam_ratio(a)?),
        Inequality::Clamped => {
            let beta = rc.beta()?;
            rc.emit_json(ClampedReport {
                beta,
                defect: ineqlab::clamped_even_check(beta)?,
            })
        }
    }
}

fn read_profile(path: &Path) -> homoclinic::Result<GridFunction> {
    GridFunction::read_csv(BufReader::new(File::open(path)?))
}

fn exit_code(e: &Error) -> u8 {
    if e.is_nonconvergence() {
        EXIT_NONCONVERGENCE
    } else {
        EXIT_INVALID
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HOMOCLINIC_LOG", "error"))
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

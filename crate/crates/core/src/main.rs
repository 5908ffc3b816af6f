use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pdm_core::discrepancy::{catalog_reports, fit_rational4_constants};
use pdm_core::eigen::{
    self, ConvergeOptions, Grid, SpectrumReport, DEFAULT_MAX_DOUBLINGS, DEFAULT_NODES,
};
use pdm_core::output::{self, CsvSink};
use pdm_core::reference::{TabulatedPotential, DEFAULT_MORSE_LAMBDA, DEFAULT_SOLITON_LAMBDA};
use pdm_core::verify::{self, VerificationSuite, VerifyConfig};
use pdm_core::{
    CoordinateMap, EffectiveMassProblem, MassProfile, PdmError, ReferencePotential, Result,
};

#[derive(Parser)]
#[command(
    name = "pdm",
    version,
    about = "Exactly solvable position-dependent-mass Schrödinger problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate m, x̄ and V₁ on a uniform grid.
    Tabulate {
        #[command(flatten)]
        mass: MassArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the constructed potential and its parts.
    Potential {
        #[command(flatten)]
        mass: MassArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for the lowest levels and compare with the exact spectrum.
    Spectrum {
        #[command(flatten)]
        mass: MassArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_DOUBLINGS)]
        max_doublings: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one eigenfunction ψ(x) of the constructed problem.
    Wavefunction {
        #[command(flatten)]
        mass: MassArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the cataloged problems against their exact spectra.
    Verify {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Check that the two mass families give the same oscillator ladder.
    Isospectral {
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 8)]
        levels: usize,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Compare published closed-form potentials with the pipeline.
    Discrepancies {
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MassToken {
    Rational2,
    Rational4,
    Constant,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetToken {
    Harmonic,
    Morse,
    Soliton,
    Sextic,
    Table,
}

#[derive(Args)]
struct MassArgs {
    #[arg(long, value_enum, default_value = "rational2")]
    mass: MassToken,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    mass_value: f64,
}

impl MassArgs {
    fn profile(&self) -> Result<MassProfile> {
        match self.mass {
            MassToken::Rational2 => MassProfile::rational(2, self.alpha),
            MassToken::Rational4 => MassProfile::rational(4, self.alpha),
            MassToken::Constant => MassProfile::constant(self.mass_value),
        }
    }
}

#[derive(Args)]
struct TargetArgs {
    #[arg(long, value_enum, default_value = "harmonic")]
    target: TargetToken,
    /// Morse or soliton strength (defaults 4 and 3).
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    j: f64,
    /// CSV with columns `xbar, V2` for `--target table`.
    #[arg(long)]
    table: Option<PathBuf>,
}

impl TargetArgs {
    fn reference(&self) -> Result<ReferencePotential> {
        match self.target {
            TargetToken::Harmonic => Ok(ReferencePotential::Harmonic),
            TargetToken::Morse => {
                ReferencePotential::morse(self.lambda.unwrap_or(DEFAULT_MORSE_LAMBDA))
            }
            TargetToken::Soliton => {
                ReferencePotential::soliton(self.lambda.unwrap_or(DEFAULT_SOLITON_LAMBDA))
            }
            TargetToken::Sextic => ReferencePotential::sextic(self.j),
            TargetToken::Table => {
                let path = self
                    .table
                    .as_deref()
                    .ok_or_else(|| PdmError::InvalidInput("--target table needs --table".into()))?;
                read_table(path).map(ReferencePotential::tabulated)
            }
        }
    }
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    xmin: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    xmax: f64,
    #[arg(long, default_value_t = 201)]
    n: usize,
}

#[derive(Args)]
struct GridArgs {
    /// Dirichlet half-width in x; defaults depend on the target.
    #[arg(long = "L")]
    half_width: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    n: usize,
}

impl GridArgs {
    fn grid(&self, problem: &EffectiveMassProblem) -> Result<Grid> {
        let (lo, hi) = match self.half_width {
            Some(l) => (-l, l),
            None => problem.default_domain()?,
        };
        Grid::new(lo, hi, self.n)
    }
}

fn read_table(path: &Path) -> Result<TabulatedPotential> {
    let csv_err = |source| PdmError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err)?;
    let (mut xs, mut vs) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let field = |i: usize| -> Result<f64> {
            record.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| {
                PdmError::InvalidInput(format!("bad row in {}: {record:?}", path.display()))
            })
        };
        xs.push(field(0)?);
        vs.push(field(1)?);
    }
    TabulatedPotential::new(xs, vs)
}

fn uniform(range: &RangeArgs) -> Result<Vec<f64>> {
    Ok(Grid::new(range.xmin, range.xmax, range.n)?.nodes())
}

fn with_sink(
    out: Option<&Path>,
    f: impl FnOnce(&mut CsvSink<Box<dyn Write>>) -> Result<()>,
) -> Result<()> {
    let (writer, path): (Box<dyn Write>, PathBuf) = match out {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|source| PdmError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            (Box::new(std::io::BufWriter::new(file)), p.to_path_buf())
        }
        None => (
            Box::new(std::io::stdout().lock()),
            PathBuf::from("<stdout>"),
        ),
    };
    let mut sink = CsvSink::from_writer(writer, &path);
    f(&mut sink)?;
    sink.finish()
}

fn print_spectrum(report: &SpectrumReport, tol: f64) {
    eprintln!(
        "{}: {} nodes -> {} nodes, {} doublings, converged = {}, {:.2?}",
        report.label,
        report.initial_grid.len(),
        report.final_grid.len(),
        report.doublings,
        report.converged,
        report.runtime
    );
    for l in &report.levels {
        let exact = l
            .exact
            .map(|e| format!("exact {e:>+.10}  err {:.3e}", l.abs_error.unwrap_or(0.0)))
            .unwrap_or_default();
        let flag = match l.abs_error {
            Some(e) if e >= tol => "  FAIL",
            _ => "",
        };
        eprintln!(
            "  n={:<3} E={:>+.10}{}  {exact}{flag}",
            l.n,
            l.extrapolated,
            if l.bound { "" } else { " (unbound)" }
        );
    }
}

fn print_suite(suite: &VerificationSuite) {
    for o in &suite.outcomes {
        println!(
            "{:<4} {:<32} levels={} max_abs_error={:.3e}",
            if o.pass { "PASS" } else { "FAIL" },
            o.label,
            o.levels_checked(),
            o.max_abs_error()
        );
        for d in &o.diagnostics {
            println!("       {d}");
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Tabulate { mass, range, out } => {
            let profile = mass.profile()?;
            let map =
                CoordinateMap::new(profile)?.primed(range.xmin.abs().max(range.xmax.abs()))?;
            let rows = uniform(&range)?
                .into_iter()
                .map(|x| {
                    let m = profile.evaluate(x)?.m;
                    Ok((x, m, map.forward(x)?, profile.gauge_potential(x)?))
                })
                .collect::<Result<Vec<_>>>()?;
            with_sink(out.as_deref(), |s| output::write_tabulation(s, &rows))?;
            Ok(true)
        }
        Command::Potential {
            mass,
            target,
            range,
            out,
        } => {
            let problem = EffectiveMassProblem::build_primed(
                mass.profile()?,
                target.reference()?,
                range.xmin.abs().max(range.xmax.abs()),
            )?;
            let rows = uniform(&range)?
                .into_iter()
                .map(|x| problem.components(x))
                .collect::<Result<Vec<_>>>()?;
            with_sink(out.as_deref(), |s| output::write_potential(s, &rows))?;
            Ok(true)
        }
        Command::Spectrum {
            mass,
            target,
            levels,
            grid,
            tol,
            max_doublings,
            out,
        } => {
            let problem = EffectiveMassProblem::build(mass.profile()?, target.reference()?)?;
            let g = grid.grid(&problem)?;
            let opts = ConvergeOptions {
                target_tol: 0.1 * tol,
                max_doublings,
            };
            let (report, converged) = match eigen::converge(&problem, g, levels, &opts) {
                Ok(r) => (r, true),
                Err(PdmError::NotConverged { report, .. }) => (*report, false),
                Err(e) => return Err(e),
            };
            print_spectrum(&report, tol);
            with_sink(out.as_deref(), |s| output::write_spectrum(s, &report))?;
            let within = report
                .levels
                .iter()
                .all(|l| l.abs_error.is_none_or(|e| e < tol));
            Ok(converged && within)
        }
        Command::Wavefunction {
            mass,
            target,
            level,
            grid,
            out,
        } => {
            let problem = EffectiveMassProblem::build(mass.profile()?, target.reference()?)?;
            let g = grid.grid(&problem)?;
            let mut states = eigen::eigenstates(&problem, &g, level + 1)?;
            let wf = states.pop().expect("level + 1 states");
            eprintln!(
                "level {level}: E = {:+.10}, {} nodes",
                wf.energy, wf.node_count
            );
            with_sink(out.as_deref(), |s| output::write_wavefunction(s, &wf))?;
            Ok(true)
        }
        Command::Verify {
            tol,
            strict,
            alpha,
            out_dir,
        } => {
            let suite = verify::verify_catalog(&VerifyConfig {
                tol,
                strict,
                alpha,
                ..VerifyConfig::default()
            })?;
            print_suite(&suite);
            if let Some(dir) = out_dir {
                for p in verify::emit_report(&suite, &dir)? {
                    println!("wrote {}", p.display());
                }
            }
            Ok(suite.pass())
        }
        Command::Isospectral {
            alpha,
            levels,
            tol,
            out_dir,
        } => {
            let outcome = verify::verify_isospectral(alpha, levels, tol)?;
            print_suite(&outcome.suite);
            println!(
                "{:<4} pairwise max |E_A − E_B| = {:.3e}",
                if outcome.pass { "PASS" } else { "FAIL" },
                outcome.max_pair_difference
            );
            if let Some(dir) = out_dir {
                for p in verify::emit_report(&outcome.suite, &dir)? {
                    println!("wrote {}", p.display());
                }
            }
            Ok(outcome.pass)
        }
        Command::Discrepancies { alpha } => {
            for r in catalog_reports(alpha)? {
                println!(
                    "{:<20} {:<13} max_abs_deviation={:.3e} scaled={:.3e} at x={:+.3}",
                    r.form.name(),
                    r.verdict.to_string(),
                    r.max_abs_deviation,
                    r.max_scaled_deviation,
                    r.worst_x
                );
            }
            let k = fit_rational4_constants(alpha)?;
            println!("rational4 map c·[2x + (α−1)²x/(1+x²) + k·atan x], α = {alpha}:");
            println!(
                "  quadrature fit   c = {:.12}  k = {:.12}",
                k.fitted_prefactor, k.fitted_atan_coefficient
            );
            println!(
                "  integrated       c = {:.12}  k = {:.12}   (1/√2, (α−1)(α+3))",
                k.derived_prefactor, k.derived_atan_coefficient
            );
            println!(
                "  published        c = {:.12}  k = {:.12}   (2√2, (α−1)(α−3)) -> {}",
                k.published_prefactor,
                k.published_atan_coefficient,
                if k.published_matches(1e-6) {
                    "consistent"
                } else {
                    "inconsistent"
                }
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

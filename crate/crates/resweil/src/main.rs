use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use resweil::case::Instance;
use resweil::suite::{run_suite, SuiteOptions};
use resweil::{parse_case, Case};
use resweil_core::gammaset::pi0_points;
use resweil_core::weilres::stage;
use resweil_core::{weil_restrict, Error as CoreError, Field, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "resweil",
    version,
    about = "Weil restriction and Galois sets of connected components over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the restricted presentation of a case's scheme.
    Restrict { file: PathBuf },
    /// Print the Γ-set of connected components of the restriction.
    Pi0 {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Print the points of the restriction over F_{p^m}.
    Points {
        file: PathBuf,
        #[arg(long = "ext", default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the checks of case files (directories expand to their *.case files).
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Record per-stage wall-clock times in the report.
        #[arg(long)]
        timings: bool,
        /// Worker threads (0: available parallelism).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

enum Failure {
    Input(String),
    Core(CoreError),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

fn load(path: &Path) -> Result<(Case, Instance), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))?;
    let case = parse_case(&text).map_err(|e| Failure::Input(format!("{}:{}", path.display(), e)))?;
    let inst = case.instantiate()?;
    Ok((case, inst))
}

fn format_point(field: &Field, pt: &[resweil_core::Fe]) -> String {
    let parts: Vec<String> = pt.iter().map(|x| field.format(x)).collect();
    format!("({})", parts.join(", "))
}

fn restrict(file: &Path) -> Result<(), Failure> {
    let (case, inst) = load(file)?;
    let res = weil_restrict(&inst.scheme)?;
    let basis: Vec<String> = res.basis().iter().map(|b| b.to_string()).collect();
    println!(
        "# {}: Res over F_{} along the basis {}",
        case.name,
        case.p,
        basis.join(", ")
    );
    println!(
        "{}",
        ["vars".to_string(), res.ring().vars().join(", ")].join(" ").trim_end()
    );
    for (j, y) in inst.scheme.scheme_vars().iter().enumerate() {
        let parts: Vec<String> = res.expansion()[j]
            .iter()
            .zip(&basis)
            .map(|(&v, b)| format!("{}·{}", res.ring().vars()[v], b))
            .collect();
        println!("# {} = {}", y, parts.join(" + "));
    }
    for r in res.relations().iter().filter(|r| !r.is_zero()) {
        println!("rel {}", r);
    }
    if res.gb().is_unit() {
        println!("# the restricted ideal is the unit ideal: the restriction is empty");
    }
    Ok(())
}

fn pi0(file: &Path, seed: u64) -> Result<(), Failure> {
    let (case, inst) = load(file)?;
    let res = weil_restrict(&inst.scheme)?;
    let g = pi0_points(&res.algebra()?, seed)?;
    println!(
        "# {}: {} components, realized over F_{}^{}, cycle type {:?}",
        case.name,
        g.len(),
        case.p,
        g.ambient().degree(),
        g.cycle_type()
    );
    for (i, pt) in g.elements().iter().enumerate() {
        println!("{} {} -> {}", i, format_point(g.ambient(), pt), g.frobenius()[i]);
    }
    Ok(())
}

fn points(file: &Path, m: usize, seed: u64) -> Result<(), Failure> {
    let (case, inst) = load(file)?;
    let res = weil_restrict(&inst.scheme)?;
    let k = stage(inst.scheme.field(), m)?;
    let pts = res.points(&k, seed)?;
    println!(
        "# {}: {} points over F_{}^{} in ({})",
        case.name,
        pts.len(),
        case.p,
        k.degree(),
        res.ring().vars().join(", ")
    );
    for pt in &pts {
        println!("{}", format_point(&k, pt));
    }
    Ok(())
}

fn finish(r: Result<(), Failure>) -> ExitCode {
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {}", e);
            let guard = matches!(
                e,
                CoreError::StepGuardExceeded(_) | CoreError::SearchGuardExceeded(_) | CoreError::DegreeGuardExceeded(_)
            );
            ExitCode::from(if guard { 3 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Restrict { file } => finish(restrict(&file)),
        Command::Pi0 { file, seed } => finish(pi0(&file, seed)),
        Command::Points { file, m, seed } => finish(points(&file, m, seed)),
        Command::Verify {
            paths,
            json,
            seed,
            timings,
            threads,
        } => {
            let opts = SuiteOptions { seed, timings, threads };
            let out = run_suite(&paths, &opts);
            for e in &out.input_errors {
                eprintln!("error: {}:{}", e.path, e.message);
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
            } else {
                for run in &out.cases {
                    let r = &run.report;
                    let failing: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
                    let tag = match run.status {
                        resweil::suite::CaseStatus::Passed => "PASS",
                        resweil::suite::CaseStatus::Failed => "FAIL",
                        resweil::suite::CaseStatus::GuardExceeded => "GUARD",
                    };
                    if failing.is_empty() {
                        println!("{} {} ({} checks)", tag, r.case, r.checks.len());
                    } else {
                        println!("{} {}: {}", tag, r.case, failing.join(", "));
                        for c in r.failures() {
                            println!("    {}: {}", c.name, c.detail);
                        }
                    }
                }
            }
            ExitCode::from(out.exit_code as u8)
        }
    }
}

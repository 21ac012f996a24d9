use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use galesolve::oracles::Problem;
use galesolve_cli::commands::{self, SolveVerb, VerifyKind};
use galesolve_cli::generate::{GenParams, Generator};
use galesolve_cli::sweep::{self, Family};
use galesolve_cli::{CliError, CliResult, Outcome, RunConfig, Status, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "galesolve", version, about = "Solve, generate and verify games on finite arenas")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Common {
    /// Master seed, recorded in sidecars and sweep reports.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest condition level the solvers accept.
    #[arg(long, global = true)]
    alpha_max: Option<usize>,
    /// Largest strategy space the brute-force checkers enumerate.
    #[arg(long, global = true)]
    cap: Option<u128>,
    /// Directory for artifacts; without it they go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveArg {
    Win,
    Strategy,
    Ne,
    Spe,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Ne,
    Spe,
    Win,
}

#[derive(Subcommand)]
enum Verb {
    /// Solve a game file.
    Solve { verb: SolveArg, game: PathBuf },
    /// Generate a gadget instance and its ground-truth sidecar.
    Gen {
        generator: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        bound: u64,
    },
    /// Check a solution, certificate or profile against its game.
    Verify { kind: VerifyArg, game: PathBuf, certificate: PathBuf },
    /// Run an instrumented solver and print its oracle trace.
    Trace { problem: String, game: PathBuf },
    /// Run seeded sweeps: a family name, `lem`, `trace` or `all`.
    Sweep {
        spec: String,
        /// Instances per family; defaults to the full-sweep count.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        bound: Option<u64>,
    },
}

fn config(c: &Common) -> RunConfig {
    let d = RunConfig::default();
    RunConfig {
        seed: c.seed,
        alpha_max: c.alpha_max.unwrap_or(d.alpha_max),
        cap: c.cap.unwrap_or(d.cap),
        out: c.out.clone(),
        ..d
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let mut cfg = config(&cli.common);
    match cli.verb {
        Verb::Solve { verb, game } => {
            let verb = match verb {
                SolveArg::Win => SolveVerb::Win,
                SolveArg::Strategy => SolveVerb::Strategy,
                SolveArg::Ne => SolveVerb::Ne,
                SolveArg::Spe => SolveVerb::Spe,
            };
            commands::solve(verb, &game, &cfg)
        }
        Verb::Gen { generator, n, count, bound } => {
            let g = Generator::parse(&generator)
                .ok_or_else(|| CliError::usage(format!("unknown generator `{generator}`")))?;
            commands::gen(g, GenParams { n, count, bound }, &cfg)
        }
        Verb::Verify { kind, game, certificate } => {
            let kind = match kind {
                VerifyArg::Ne => VerifyKind::Ne,
                VerifyArg::Spe => VerifyKind::Spe,
                VerifyArg::Win => VerifyKind::Win,
            };
            commands::verify(kind, &game, &certificate, &cfg)
        }
        Verb::Trace { problem, game } => {
            let p = Problem::parse(&problem).ok_or_else(|| CliError::usage(format!("unknown problem `{problem}`")))?;
            commands::trace(p, &game, &cfg)
        }
        Verb::Sweep { spec, count, bound } => {
            let spec = spec.trim();
            if spec.is_empty() {
                return Err(CliError::usage("empty sweep spec"));
            }
            let families =
                Family::parse_list(spec).ok_or_else(|| CliError::usage(format!("unknown sweep family `{spec}`")))?;
            if let Some(b) = bound {
                cfg.bound = b;
            }
            let reports = families
                .into_iter()
                .map(|f| sweep::run_sweep(f, count.unwrap_or_else(|| f.default_count()), &cfg))
                .collect::<CliResult<Vec<_>>>()?;
            let text = sweep::render(&reports);
            let mut stdout = String::new();
            match cfg.write(&format!("sweep-{}-{}.report", spec, cfg.seed), &text)? {
                Some(path) => {
                    stdout.push_str(&text[text.find("# ").unwrap_or(0)..]);
                    stdout.push_str(&format!("written: {}\n", path.display()));
                }
                None => stdout = text,
            }
            let status = if reports.iter().all(|r| r.ok()) { Status::Pass } else { Status::Refuted };
            Ok(Outcome { status, stdout })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { Status::Usage.code() } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let status = match run(cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            o.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.status
        }
    };
    ExitCode::from(status.code() as u8)
}

//! The `solve`, `gen`, `verify` and `trace` verbs.

use std::fmt::Write as _;
use std::path::Path;

use galesolve::equilibria::{ne_ap, ne_multi, spe, EquilibriumCertificate};
use galesolve::format::{
    parse_certificate, parse_game, parse_profile, parse_solution, print_certificate, print_game, print_profile,
    print_solution, GameFile, SolutionFile,
};
use galesolve::game::{induced_play, outcome_of, MultiOutcomeGame, WinLoseGame};
use galesolve::oracles::{instrumented_solvers, Instance, OracleTrace, Problem, RunOptions};
use galesolve::verify::{check_nash, check_spe, check_strategies, strategy_wins, Verdict, Witness};
use galesolve::winlose::{solve_bounded, Realized};
use galesolve::Error;

use crate::generate::{generate, GenParams, Generator};
use crate::{read, stem, CliError, CliResult, Outcome, RunConfig, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveVerb {
    Win,
    Strategy,
    Ne,
    Spe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyKind {
    Ne,
    Spe,
    Win,
}

pub fn load_game(path: &Path) -> CliResult<GameFile> {
    Ok(parse_game(&read(path)?)?)
}

fn win_lose(game: &GameFile) -> CliResult<&WinLoseGame> {
    match game {
        GameFile::WinLose(g) => Ok(g),
        GameFile::Multi(_) => Err(CliError::usage("expected a win/lose game")),
    }
}

fn multi(game: &GameFile) -> CliResult<&MultiOutcomeGame> {
    match game {
        GameFile::Multi(g) => Ok(g),
        GameFile::WinLose(_) => Err(CliError::usage("expected a multi-outcome game")),
    }
}

fn check_level(level: usize, cfg: &RunConfig) -> CliResult<()> {
    if level > cfg.alpha_max {
        return Err(Error::LevelBound { level, bound: cfg.alpha_max }.into());
    }
    Ok(())
}

/// Appends the artifact path, or the artifact itself when no output
/// directory is set.
fn emit(out: &mut String, cfg: &RunConfig, name: &str, body: &str) -> CliResult<()> {
    match cfg.write(name, body)? {
        Some(path) => writeln!(out, "written: {}", path.display()).expect("string write"),
        None => out.push_str(body),
    }
    Ok(())
}

pub fn describe_witness(game: &MultiOutcomeGame, w: &Witness) -> String {
    let steps: Vec<String> = w
        .choices
        .iter()
        .map(|(s, punished, l)| format!("{s}{}:{l}", if *punished { "!" } else { "" }))
        .collect();
    format!(
        "witness: player {} leaves the profile at {} and reaches {} instead of {}\nwitness-walk: {}\n",
        w.player,
        w.state,
        game.outcomes[w.outcome],
        game.outcomes[w.baseline],
        steps.join(" ")
    )
}

/// Self-check of a certificate against its game.
fn check_certificate(game: &MultiOutcomeGame, cert: &EquilibriumCertificate, cfg: &RunConfig) -> CliResult<Verdict> {
    cert.check_consistency(game)?;
    Ok(check_nash(game, &cert.profile, cfg.cap)?)
}

pub fn solve(verb: SolveVerb, path: &Path, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let game = load_game(path)?;
    let name = stem(path);
    let mut out = String::new();
    match verb {
        SolveVerb::Win | SolveVerb::Strategy => {
            let g = win_lose(&game)?;
            let solved = solve_bounded(g, cfg.alpha_max)?;
            writeln!(out, "level: {}", solved.realized.compiled.alpha).expect("string write");
            writeln!(out, "winner: {} at root", solved.root_winner()).expect("string write");
            if verb == SolveVerb::Strategy {
                let accept = solved.realized.compiled.acceptance();
                if let Err(i) = check_strategies(solved.product(), &accept, &solved.solution) {
                    let s = solved.product().state(i);
                    return Err(CliError::refuted(format!("self-check failed: strategy loses from {s}")));
                }
                let p = solved.product();
                let file = SolutionFile {
                    winner: solved.root_winner(),
                    moves: (0..p.len()).map(|i| (p.state(i), solved.solution.moves[i])).collect(),
                };
                emit(&mut out, cfg, &format!("{name}.solution"), &print_solution(&file))?;
            }
        }
        SolveVerb::Ne => {
            let g = multi(&game)?;
            check_level(g.valuation.alpha(), cfg)?;
            let cert = if g.is_antagonistic() { ne_ap(g)? } else { ne_multi(g, cfg.alpha_max)? };
            if let Verdict::Refuted(w) = check_certificate(g, &cert, cfg)? {
                return Err(CliError::refuted(format!("self-check failed\n{}", describe_witness(g, &w))));
            }
            writeln!(out, "outcome: {} (index {})", g.outcomes[cert.outcome], cert.outcome).expect("string write");
            let gs: Vec<&str> = cert.guarantees.iter().map(|&o| g.outcomes[o].as_str()).collect();
            writeln!(out, "guarantees: {}", gs.join(" ")).expect("string write");
            emit(&mut out, cfg, &format!("{name}.cert"), &print_certificate(&cert))?;
        }
        SolveVerb::Spe => {
            let g = multi(&game)?;
            check_level(g.valuation.alpha(), cfg)?;
            let profile = spe(g)?;
            if let Verdict::Refuted(w) = check_spe(g, &profile, cfg.cap)? {
                return Err(CliError::refuted(format!("self-check failed\n{}", describe_witness(g, &w))));
            }
            let product = g.product();
            let play = induced_play(&product, &profile, product.state(product.root()))?;
            let o = outcome_of(g, &play);
            writeln!(out, "outcome: {} (index {o})", g.outcomes[o]).expect("string write");
            emit(&mut out, cfg, &format!("{name}.profile"), &print_profile(&profile))?;
        }
    }
    Ok(Outcome::pass(out))
}

pub fn verify(kind: VerifyKind, game_path: &Path, cert_path: &Path, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let game = load_game(game_path)?;
    let text = read(cert_path)?;
    let verdict = match kind {
        VerifyKind::Ne => {
            let g = multi(&game)?;
            let cert = parse_certificate(&text)?;
            match cert.check_consistency(g) {
                Err(Error::Construction(msg)) => Err(msg),
                Err(e) => return Err(e.into()),
                Ok(()) => match check_nash(g, &cert.profile, cfg.cap)? {
                    Verdict::Pass => Ok(()),
                    Verdict::Refuted(w) => Err(describe_witness(g, &w)),
                },
            }
        }
        VerifyKind::Spe => {
            let g = multi(&game)?;
            match check_spe(g, &parse_profile(&text)?, cfg.cap)? {
                Verdict::Pass => Ok(()),
                Verdict::Refuted(w) => Err(describe_witness(g, &w)),
            }
        }
        VerifyKind::Win => {
            let g = win_lose(&game)?;
            let sol = parse_solution(&text)?;
            let r = Realized::new(g)?;
            let accept = r.compiled.acceptance();
            if strategy_wins(&r.product, &accept, sol.winner, &sol.moves, r.product.root())? {
                Ok(())
            } else {
                Err(format!("the strategy of player {} does not win from the root\n", sol.winner))
            }
        }
    };
    Ok(match verdict {
        Ok(()) => Outcome::pass("verdict: pass\n".into()),
        Err(why) => {
            let why = if why.ends_with('\n') { why } else { format!("{why}\n") };
            Outcome { status: Status::Refuted, stdout: format!("verdict: refuted\n{why}") }
        }
    })
}

pub fn trace(problem: Problem, path: &Path, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let game = load_game(path)?;
    let (inst, outcomes) = match &game {
        GameFile::WinLose(g) => (Instance::WinLose(g), 2),
        GameFile::Multi(g) => (Instance::Multi(g), g.outcome_count()),
    };
    let solver = instrumented_solvers().into_iter().find(|s| s.problem == problem).expect("registered");
    let mut t = OracleTrace::new();
    let answer = solver.run(inst, RunOptions::default(), &mut t)?;
    let mut out = t.render();
    let mut status = Status::Pass;
    if answer != solver.direct(inst)? {
        out.push_str("# answer differs from the direct solver\n");
        status = Status::Refuted;
    }
    if let Err(why) = solver.check_shape(&t, outcomes) {
        writeln!(out, "# shape mismatch: {why}").expect("string write");
        status = Status::Refuted;
    }
    Ok(Outcome { status, stdout: out })
}

pub fn gen(generator: Generator, params: GenParams, cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    if params.n == 0 || params.count == 0 {
        return Err(CliError::usage("--n and --count must be positive"));
    }
    let (game, sidecar) = generate(generator, cfg.seed, params)?;
    let base = format!("{}-{}", generator.name(), cfg.seed);
    let mut out = String::new();
    emit(&mut out, cfg, &format!("{base}.game"), &print_game(&game)?)?;
    if cfg.out.is_none() {
        out.push_str("# sidecar\n");
    }
    emit(&mut out, cfg, &format!("{base}.sidecar"), &sidecar.render())?;
    Ok(Outcome::pass(out))
}

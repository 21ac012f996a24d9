//! Seeded generate, solve and verify loops. Every instance seed derives from
//! the master seed by [`split_seed`], instances run in parallel and results
//! are collected in index order, so a report depends only on the
//! configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use galesolve::equilibria::{ne_ap, ne_multi, spe};
use galesolve::format::{fnv1a, Record};
use galesolve::game::{Condition, MultiOutcomeGame, Side, WinLoseGame};
use galesolve::gadgets::MAX_ANNOUNCE;
use galesolve::oracles::{instrumented_solvers, Instance, OracleKind, OracleTrace, Problem, RunOptions};
use galesolve::pointclass::{eval_membership, eval_prefix, prefix_to_chain};
use galesolve::random::{self, split_seed, Rng64};
use galesolve::verify::{
    best_bounded_deviation, best_positional_deviation, brute_force_solve, check_nash, check_spe, check_strategies,
    maximin, strategy_wins,
};
use galesolve::winlose::{solve, Realized};
use galesolve::Result;
use rand::Rng;
use rayon::prelude::*;

use crate::generate;
use crate::{CliError, CliResult, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Solver,
    Duality,
    Lem(usize),
    Llpo,
    Ne,
    Announce,
    Adjoin,
    SpeChain,
    Hat,
    Trace(Problem),
    Deviation,
}

const TRACE_SHAPES: [Problem; 5] = [Problem::Win, Problem::Det, Problem::DetD2, Problem::NeAp, Problem::Spe];

impl Family {
    /// Every family with its instance count in the full sweep.
    pub fn defaults() -> Vec<(Family, usize)> {
        let mut v = vec![(Family::Solver, 500), (Family::Duality, 100)];
        v.extend((1..=3).map(|n| (Family::Lem(n), 200)));
        v.push((Family::Llpo, 200));
        v.push((Family::Ne, 300));
        v.extend([Family::Announce, Family::Adjoin, Family::SpeChain, Family::Hat].map(|f| (f, 100)));
        v.extend(TRACE_SHAPES.map(|p| (Family::Trace(p), 50)));
        v.push((Family::Deviation, 200));
        v
    }

    pub fn name(self) -> String {
        match self {
            Family::Solver => "solver".into(),
            Family::Duality => "duality".into(),
            Family::Lem(n) => format!("lem-n{n}"),
            Family::Llpo => "llpo".into(),
            Family::Ne => "ne".into(),
            Family::Announce => "announce".into(),
            Family::Adjoin => "adjoin".into(),
            Family::SpeChain => "spechain".into(),
            Family::Hat => "hat".into(),
            Family::Trace(p) => format!("trace-{}", p.name()),
            Family::Deviation => "deviation".into(),
        }
    }

    /// Families named by `s`: a family name, `lem`, `trace` or `all`.
    pub fn parse_list(s: &str) -> Option<Vec<Family>> {
        let all: Vec<Family> = Family::defaults().into_iter().map(|(f, _)| f).collect();
        match s {
            "all" => Some(all),
            "lem" => Some((1..=3).map(Family::Lem).collect()),
            "trace" => Some(TRACE_SHAPES.map(Family::Trace).to_vec()),
            _ => all.into_iter().find(|f| f.name() == s).map(|f| vec![f]),
        }
    }

    pub fn default_count(self) -> usize {
        Family::defaults().into_iter().find(|&(f, _)| f == self).map_or(100, |(_, c)| c)
    }

    /// Master seed of this family under the run seed.
    fn master(self, seed: u64) -> u64 {
        split_seed(seed, fnv1a(self.name().as_bytes()))
    }
}

/// Result of one instance.
#[derive(Debug, Default)]
struct Checked {
    failure: Option<String>,
    stats: Vec<&'static str>,
}

impl Checked {
    fn ok() -> Self {
        Checked::default()
    }

    fn fail(msg: impl Into<String>) -> Self {
        Checked { failure: Some(msg.into()), stats: Vec::new() }
    }

    fn stat(mut self, key: &'static str) -> Self {
        self.stats.push(key);
        self
    }

    fn require(self, cond: bool, msg: &str) -> Self {
        if self.failure.is_none() && !cond {
            Checked::fail(msg)
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub index: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub family: String,
    pub master: u64,
    pub count: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    pub stats: BTreeMap<String, usize>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.count
    }

    pub fn record(&self) -> Record {
        let mut r = Record::new();
        r.push("family", &self.family).push("master-seed", self.master);
        r.push("count", self.count).push("passed", self.passed).push("failed", self.failures.len());
        for (k, v) in &self.stats {
            r.push("stat", format!("{k} {v}"));
        }
        for f in &self.failures {
            r.push("failure", format!("{} {} {}", f.index, f.seed, f.message.replace('\n', " ")));
        }
        r
    }
}

/// Machine-readable records, one block per family, then a table.
pub fn render(reports: &[SweepReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.record().render());
        out.push('\n');
    }
    writeln!(out, "# {:<14} {:>6} {:>6} {:>6}", "family", "count", "passed", "failed").expect("string write");
    for r in reports {
        writeln!(out, "# {:<14} {:>6} {:>6} {:>6}", r.family, r.count, r.passed, r.failures.len())
            .expect("string write");
    }
    out
}

pub fn run_sweep(family: Family, count: usize, cfg: &RunConfig) -> CliResult<SweepReport> {
    cfg.validate()?;
    if count == 0 {
        return Err(CliError::usage("--count must be positive"));
    }
    let master = family.master(cfg.seed);
    let results: Vec<Checked> = (0..count)
        .into_par_iter()
        .map(|i| {
            let seed = split_seed(master, i as u64);
            check(family, seed, cfg).unwrap_or_else(|e| Checked::fail(format!("error: {e}")))
        })
        .collect();
    let mut report = SweepReport {
        family: family.name(),
        master,
        count,
        passed: 0,
        failures: Vec::new(),
        stats: BTreeMap::new(),
    };
    for (i, c) in results.into_iter().enumerate() {
        for k in c.stats {
            *report.stats.entry(k.to_string()).or_default() += 1;
        }
        match c.failure {
            None => report.passed += 1,
            Some(message) => report.failures.push(Failure { index: i, seed: split_seed(master, i as u64), message }),
        }
    }
    Ok(report)
}

/// Runs every family at its default count.
pub fn run_all(cfg: &RunConfig) -> CliResult<Vec<SweepReport>> {
    Family::defaults().into_iter().map(|(f, c)| run_sweep(f, c, cfg)).collect()
}

fn check(family: Family, seed: u64, cfg: &RunConfig) -> Result<Checked> {
    match family {
        Family::Solver => solver(seed, cfg),
        Family::Duality => duality(seed, cfg),
        Family::Lem(n) => lem(seed, n, cfg),
        Family::Llpo => llpo(seed),
        Family::Ne => ne(seed, cfg),
        Family::Announce => announce(seed),
        Family::Adjoin => adjoin(seed, cfg),
        Family::SpeChain => spe_chain(seed),
        Family::Hat => hat(seed),
        Family::Trace(p) => trace(p, seed),
        Family::Deviation => deviation(seed, cfg),
    }
}

fn side_stat(s: Side) -> &'static str {
    match s {
        Side::One => "root-winner-1",
        Side::Two => "root-winner-2",
    }
}

fn solver(seed: u64, cfg: &RunConfig) -> Result<Checked> {
    let mut rng = random::rng(seed);
    let n = rng.gen_range(1..=7);
    let alpha = rng.gen_range(0..=3);
    let game = random::chain_game(&mut rng, n, alpha);
    let solved = solve(&game)?;
    let brute = brute_force_solve(&game, cfg.cap)?;
    let accept = solved.realized.compiled.acceptance();
    Ok(Checked::ok()
        .stat(side_stat(solved.root_winner()))
        .require(solved.solution.winner == brute.winner, "winner differs from brute force")
        .require(check_strategies(solved.product(), &accept, &solved.solution).is_ok(), "strategy is beaten"))
}

fn duality(seed: u64, cfg: &RunConfig) -> Result<Checked> {
    let mut rng = random::rng(seed);
    let n = rng.gen_range(1..=6);
    let level = rng.gen_range(0..=3);
    let arena = random::arena(&mut rng, n, 2, 2);
    let set = random::prefix_set(&mut rng, &arena, level, true);
    let u = prefix_to_chain(&set, &arena)?;
    let mut members = 0;
    for _ in 0..cfg.lassos {
        let play = random::lasso(&mut rng, &arena, arena.root());
        let by_prefix = eval_prefix(&set.expr, &play) != set.complemented;
        let by_chain = eval_membership(&u.chain, &u.transport(&play)?) != u.complemented;
        if by_prefix != by_chain {
            return Ok(Checked::fail(format!("evaluators disagree on {play:?}")));
        }
        members += usize::from(by_prefix);
    }
    let c = Checked::ok();
    Ok(match members {
        0 => c.stat("no-member"),
        m if m == cfg.lassos => c.stat("all-members"),
        _ => c.stat("mixed"),
    })
}

fn lem(seed: u64, n: usize, cfg: &RunConfig) -> Result<Checked> {
    let inst = generate::lem(seed, n, cfg.bound)?;
    let got = solve(&inst.game)?.root_winner();
    Ok(Checked::ok()
        .stat(if inst.expected { "statement-true" } else { "statement-false" })
        .require(got == Side::winning(inst.expected), "winner differs from the evaluator"))
}

fn llpo(seed: u64) -> Result<Checked> {
    let mut rng = random::rng(seed);
    let (n, count) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let inst = generate::llpo(rng.gen(), n, count, 1)?;
    let got = inst.game.extract(&solve(&inst.game.game)?)?;
    let ok = got.iter().zip(&inst.answers).all(|(a, set)| set.contains(a));
    Ok(Checked::ok().require(got.len() == inst.answers.len() && ok, "extracted answer outside its answer set"))
}

fn random_ne_game(rng: &mut Rng64) -> MultiOutcomeGame {
    let players = rng.gen_range(2..=3);
    let outcomes = rng.gen_range(1..=3);
    let (n, alpha) = (rng.gen_range(1..=7), rng.gen_range(0..=2));
    let antagonistic = players == 2 && rng.gen_bool(0.5);
    random::multi_game(rng, n, players, outcomes, alpha, antagonistic)
}

fn ne(seed: u64, cfg: &RunConfig) -> Result<Checked> {
    let game = random_ne_game(&mut random::rng(seed));
    let cert = ne_multi(&game, cfg.alpha_max)?;
    cert.check_consistency(&game)?;
    let mut c = Checked::ok().require(check_nash(&game, &cert.profile, cfg.cap)?.passed(), "ne_multi refuted");
    if game.is_antagonistic() {
        let ap = ne_ap(&game)?;
        ap.check_consistency(&game)?;
        let best = maximin(&game, 0, game.product().state(0), cfg.cap)?;
        let profile = spe(&game)?;
        c = c
            .stat("antagonistic")
            .require(check_nash(&game, &ap.profile, cfg.cap)?.passed(), "ne_ap refuted")
            .require(ap.outcome == best, "ne_ap outcome differs from maximin")
            .require(check_spe(&game, &profile, cfg.cap)?.passed(), "spe refuted");
    }
    Ok(c)
}

fn component_count(seed: u64, max: usize) -> (u64, usize) {
    let mut rng = random::rng(seed);
    (rng.gen(), rng.gen_range(1..=max))
}

fn announce(seed: u64) -> Result<Checked> {
    let (s, count) = component_count(seed, MAX_ANNOUNCE.min(3));
    let c = generate::announce(s, count)?;
    let d = c.game.decode(&ne_ap(&c.game.game)?);
    let winnable: std::collections::BTreeSet<usize> = (0..count).filter(|&i| c.winners[i] == Side::One).collect();
    Ok(Checked::ok()
        .require(d.announced == winnable, "announced set differs")
        .require(d.value == winnable.len() as i64, "value differs"))
}

fn adjoin(seed: u64, cfg: &RunConfig) -> Result<Checked> {
    let inst = generate::adjoin(seed)?;
    let d = inst.game.decode(&ne_ap(&inst.game.game)?);
    let wins = inst.g1_winner == Side::One;
    let mut c = Checked::ok().require(d.enters_g0 == wins, "root choice does not follow the winner of g1");
    if wins && d.enters_g0 {
        let r = Realized::new(&inst.g1)?;
        let accept = r.compiled.acceptance();
        c = c
            .stat("enters-g0")
            .require(check_nash(&inst.g0, &d.g0_profile, cfg.cap)?.passed(), "embedded profile refuted")
            .require(strategy_wins(&r.product, &accept, Side::One, &d.g1_moves, r.product.root())?, "embedded strategy loses");
    }
    Ok(c)
}

fn spe_chain(seed: u64) -> Result<Checked> {
    let (s, count) = component_count(seed, 3);
    let c = generate::spe_chain(s, count)?;
    let got = c.game.decode(&spe(&c.game.game)?)?;
    Ok(Checked::ok().require(got == c.winners, "decoded winners differ"))
}

fn hat(seed: u64) -> Result<Checked> {
    let (s, count) = component_count(seed, 3);
    let c = generate::hat(s, count)?;
    let all = c.winners.iter().all(|&w| w == Side::One);
    Ok(Checked::ok().require(solve(&c.game)?.root_winner() == Side::winning(all), "combined winner differs"))
}

fn safety_game(rng: &mut Rng64) -> Result<WinLoseGame> {
    let n = rng.gen_range(1..=7);
    let arena = random::arena(rng, n, 2, 2);
    let chain = random::chain(rng, arena.vertex_count(), 1);
    WinLoseGame::new(arena, Condition::Chain { chain, complemented: true })
}

fn trace(problem: Problem, seed: u64) -> Result<Checked> {
    let mut rng = random::rng(seed);
    let solver = instrumented_solvers().into_iter().find(|s| s.problem == problem).expect("registered");
    let (win_lose, multi, outcomes) = match problem {
        Problem::Win | Problem::Det => (Some(safety_game(&mut rng)?), None, 2),
        Problem::DetD2 => {
            let n = rng.gen_range(2..=7);
            (Some(random::chain_game(&mut rng, n, 2)), None, 2)
        }
        Problem::NeAp | Problem::Spe => {
            let k = rng.gen_range(2..=4);
            let n = rng.gen_range(1..=6);
            (None, Some(random::multi_game(&mut rng, n, 2, k, 1, true)), k)
        }
    };
    let inst = match (&win_lose, &multi) {
        (Some(g), _) => Instance::WinLose(g),
        (_, Some(g)) => Instance::Multi(g),
        _ => unreachable!(),
    };
    let mut t = OracleTrace::new();
    let answer = solver.run(inst, RunOptions::default(), &mut t)?;
    let direct = solver.direct(inst)?;
    let mut c = Checked::ok().require(answer == direct, "instrumented answer differs");
    if let Err(why) = solver.check_shape(&t, outcomes) {
        c = c.require(false, &format!("shape: {why}"));
    }
    if problem == Problem::Spe {
        let redacted = solver.run(inst, RunOptions { redact_stabilization: true }, &mut OracleTrace::new())?;
        c = c.require(redacted == direct, "redacted limit changes the answer");
    }
    if t.count(OracleKind::Lpo) > 0 {
        c = c.stat("with-lpo");
    }
    Ok(c)
}

fn deviation(seed: u64, cfg: &RunConfig) -> Result<Checked> {
    let game = random_ne_game(&mut random::rng(seed));
    let cert = ne_multi(&game, cfg.alpha_max)?;
    let mut c = Checked::ok();
    for p in 0..game.players() {
        let bounded = best_bounded_deviation(&game, &cert.profile, p, cfg.depth, cfg.cap)?;
        let positional = best_positional_deviation(&game, &cert.profile, p, cfg.cap)?;
        let own = game.rank(p, cert.outcome);
        c = c
            .require(bounded <= positional, "history-dependent deviation beats positional ones")
            .require(positional <= own, "profitable positional deviation");
    }
    Ok(c)
}

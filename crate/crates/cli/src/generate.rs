//! Seeded gadget instances with their ground truth. The same functions feed
//! `gen` and the sweeps, so a sidecar always describes exactly the instance
//! a sweep checks.

use std::collections::BTreeSet;

use galesolve::equilibria::ne_ap;
use galesolve::format::{GameFile, Record};
use galesolve::gadgets::{
    eval_sigma_lem, eval_sigma_llpo, gen_adjoin, gen_announce, gen_hat, gen_lem_game, gen_llpo_game,
    gen_spe_chain, AdjoinGame, AnnounceGame, FinBitInput, LlpoGame, SpeChainGame, MAX_ANNOUNCE,
};
use galesolve::game::{MultiOutcomeGame, Side, WinLoseGame};
use galesolve::random::{self, Rng64};
use galesolve::winlose::solve;
use galesolve::Result;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Lem,
    Llpo,
    Announce,
    Adjoin,
    SpeChain,
    Hat,
}

impl Generator {
    pub const ALL: [Generator; 6] =
        [Generator::Lem, Generator::Llpo, Generator::Announce, Generator::Adjoin, Generator::SpeChain, Generator::Hat];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Lem => "lem",
            Generator::Llpo => "llpo",
            Generator::Announce => "announce",
            Generator::Adjoin => "adjoin",
            Generator::SpeChain => "spechain",
            Generator::Hat => "hat",
        }
    }

    pub fn parse(s: &str) -> Option<Generator> {
        Generator::ALL.into_iter().find(|g| g.name() == s)
    }
}

fn winners_text(ws: &[Side]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ")
}

fn set_text(s: &BTreeSet<usize>) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

pub struct LemInstance {
    pub input: FinBitInput,
    pub game: WinLoseGame,
    /// Truth value of the quantified statement from the evaluator.
    pub expected: bool,
}

pub fn lem(seed: u64, n: usize, bound: u64) -> Result<LemInstance> {
    let mut rng = random::rng(seed);
    let input = random::fin_bit_input(&mut rng, n, bound);
    let expected = eval_sigma_lem(n, &input)?;
    Ok(LemInstance { game: gen_lem_game(n, &input)?, input, expected })
}

pub struct LlpoInstance {
    pub pairs: Vec<(FinBitInput, FinBitInput)>,
    pub game: LlpoGame,
    pub answers: Vec<BTreeSet<usize>>,
}

pub fn llpo(seed: u64, n: usize, count: usize, bound: u64) -> Result<LlpoInstance> {
    let mut rng = random::rng(seed);
    let pairs: Vec<_> = (0..count).map(|_| random::llpo_pair(&mut rng, n, bound)).collect();
    let answers = pairs.iter().map(|pr| eval_sigma_llpo(n, pr)).collect::<Result<_>>()?;
    Ok(LlpoInstance { game: gen_llpo_game(n, &pairs)?, pairs, answers })
}

/// Small random component games and their winners from `solve`.
pub fn components(rng: &mut Rng64, count: usize) -> Result<(Vec<WinLoseGame>, Vec<Side>)> {
    let games: Vec<WinLoseGame> = (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let alpha = rng.gen_range(0..=2);
            random::chain_game(rng, n, alpha)
        })
        .collect();
    let winners = games.iter().map(|g| Ok(solve(g)?.root_winner())).collect::<Result<_>>()?;
    Ok((games, winners))
}

pub struct Combined<G> {
    pub components: Vec<WinLoseGame>,
    pub winners: Vec<Side>,
    pub game: G,
}

pub fn announce(seed: u64, count: usize) -> Result<Combined<AnnounceGame>> {
    let (components, winners) = components(&mut random::rng(seed), count)?;
    Ok(Combined { game: gen_announce(&components)?, components, winners })
}

pub fn spe_chain(seed: u64, count: usize) -> Result<Combined<SpeChainGame>> {
    let (components, winners) = components(&mut random::rng(seed), count)?;
    Ok(Combined { game: gen_spe_chain(&components)?, components, winners })
}

pub fn hat(seed: u64, count: usize) -> Result<Combined<WinLoseGame>> {
    let (components, winners) = components(&mut random::rng(seed), count)?;
    Ok(Combined { game: gen_hat(&components)?, components, winners })
}

pub struct AdjoinInstance {
    pub g0: MultiOutcomeGame,
    pub g1: WinLoseGame,
    pub g1_winner: Side,
    /// Outcome of the equilibrium of `g0` alone.
    pub g0_outcome: usize,
    pub game: AdjoinGame,
}

pub fn adjoin(seed: u64) -> Result<AdjoinInstance> {
    let mut rng = random::rng(seed);
    let (n1, a1) = (rng.gen_range(1..=4), rng.gen_range(0..=2));
    let g1 = random::chain_game(&mut rng, n1, a1);
    let (n0, a0) = (rng.gen_range(1..=4), rng.gen_range(0..=2));
    let g0 = random::multi_game(&mut rng, n0, 2, 3, a0, true);
    let g1_winner = solve(&g1)?.root_winner();
    let g0_outcome = ne_ap(&g0)?.outcome;
    Ok(AdjoinInstance { game: gen_adjoin(&g0, &g1)?, g0, g1, g1_winner, g0_outcome })
}

/// Size parameters of `gen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub count: usize,
    pub bound: u64,
}

/// The game of one generator run and its sidecar.
pub fn generate(g: Generator, seed: u64, p: GenParams) -> Result<(GameFile, Record)> {
    let mut side = Record::new();
    side.push("generator", g.name()).push("seed", seed);
    let game = match g {
        Generator::Lem => {
            let inst = lem(seed, p.n, p.bound)?;
            side.push("n", p.n).push("bound", p.bound).push("tail", u8::from(inst.input.tail));
            let ones: Vec<String> =
                inst.input.assignments.iter().filter(|(_, &b)| b).map(|(c, _)| c.to_string()).collect();
            let zeros: Vec<String> =
                inst.input.assignments.iter().filter(|(_, &b)| !b).map(|(c, _)| c.to_string()).collect();
            side.push("ones", ones.join(" ")).push("zeros", zeros.join(" "));
            side.push("expected-winner", Side::winning(inst.expected));
            GameFile::WinLose(inst.game)
        }
        Generator::Llpo => {
            let inst = llpo(seed, p.n, p.count, p.bound)?;
            side.push("n", p.n).push("count", p.count).push("bound", p.bound);
            side.push("arity", inst.game.arity);
            let cv: Vec<String> = inst.game.choice_vertices.iter().map(|v| v.to_string()).collect();
            side.push("choice-vertices", cv.join(" "));
            for a in &inst.answers {
                side.push("answer-set", set_text(a));
            }
            GameFile::WinLose(inst.game.game)
        }
        Generator::Announce => {
            let c = announce(seed, p.count.min(MAX_ANNOUNCE))?;
            let winnable: BTreeSet<usize> = (0..c.winners.len()).filter(|&i| c.winners[i] == Side::One).collect();
            side.push("count", c.winners.len()).push("winners", winners_text(&c.winners));
            side.push("winnable", set_text(&winnable)).push("expected-value", winnable.len());
            GameFile::Multi(c.game.game)
        }
        Generator::Adjoin => {
            let inst = adjoin(seed)?;
            side.push("g1-winner", inst.g1_winner);
            side.push("g0-outcome", &inst.g0.outcomes[inst.g0_outcome]);
            side.push("expected-enters-g0", inst.g1_winner == Side::One);
            side.push("g0-offset", inst.game.g0_offset).push("g1-offset", inst.game.g1_offset);
            GameFile::Multi(inst.game.game)
        }
        Generator::SpeChain => {
            let c = spe_chain(seed, p.count)?;
            side.push("count", p.count).push("winners", winners_text(&c.winners));
            let dv: Vec<String> = c.game.decision_vertices.iter().map(|v| v.to_string()).collect();
            side.push("decision-vertices", dv.join(" "));
            GameFile::Multi(c.game.game)
        }
        Generator::Hat => {
            let c = hat(seed, p.count)?;
            let all = c.winners.iter().all(|&w| w == Side::One);
            side.push("count", p.count).push("winners", winners_text(&c.winners));
            side.push("expected-winner", Side::winning(all));
            GameFile::WinLose(c.game)
        }
    };
    Ok((game, side))
}

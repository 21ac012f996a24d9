//! Threshold games, best guarantees, Nash equilibria for multi-outcome
//! games and subgame-perfect equilibria for antagonistic ones.
//!
//! Everything is computed on the product of the arena with the valuation's
//! counter, so guarantees and strategies are indexed by product state.

use std::collections::BTreeMap;

use crate::arena::{Label, Play, PlayerId};
use crate::error::{Error, Result};
use crate::game::{
    induced_play, outcome_of, Condition, MultiOutcomeGame, Side, StrategyProfile, WinLoseGame,
};
use crate::pointclass::LeveledValuation;
use crate::product::{Product, ProductState};
use crate::winlose::{solve_weak, Realized, Solution};

/// The win/lose game in which `player` wins iff the outcome lies in `upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdGame {
    pub player: PlayerId,
    pub upper: Vec<usize>,
    /// `player` is player 1 of this game; everyone else is player 2.
    pub game: WinLoseGame,
}

fn check_upward_closed(game: &MultiOutcomeGame, player: PlayerId, upper: &[usize]) -> Result<()> {
    for &o in upper {
        if o >= game.outcome_count() {
            return Err(Error::InvalidGame(format!("unknown outcome {o}")));
        }
        for &p in &game.preferences[player][game.rank(player, o)..] {
            if !upper.contains(&p) {
                return Err(Error::NotUpwardClosed(player));
            }
        }
    }
    Ok(())
}

/// Owner of each arena vertex in the coalition game of `player`.
fn coalition_owner(player: PlayerId) -> impl Fn(PlayerId) -> PlayerId {
    move |o| if o == player { 0 } else { 1 }
}

pub fn threshold_game(
    game: &MultiOutcomeGame,
    player: PlayerId,
    upper: &[usize],
) -> Result<ThresholdGame> {
    check_upward_closed(game, player, upper)?;
    let accept: Vec<bool> = game
        .valuation
        .labels
        .iter()
        .map(|o| upper.contains(o))
        .collect();
    let chain = game
        .valuation
        .chain
        .coarsen(&accept, game.arena.vertex_count());
    let arena = game.arena.remap_owners(2, coalition_owner(player));
    let mut upper = upper.to_vec();
    upper.sort_unstable();
    Ok(ThresholdGame {
        player,
        upper,
        game: WinLoseGame::new(arena, Condition::chain(chain))?,
    })
}

/// The game's product with owners replaced by `player` (0) versus the
/// coalition of everyone else (1).
pub fn coalition_product(game: &MultiOutcomeGame, player: PlayerId) -> Product {
    game.product().remap_owners(coalition_owner(player))
}

/// Solves the threshold game of `upper` for `player` directly on the
/// valuation product (same state indexing as [`MultiOutcomeGame::product`]).
pub fn solve_threshold(game: &MultiOutcomeGame, coalition: &Product, upper: &[usize]) -> Solution {
    let accept: Vec<bool> = game
        .valuation
        .labels
        .iter()
        .map(|o| upper.contains(o))
        .collect();
    solve_weak(coalition, &accept)
}

/// Best guarantee of one player at every product state, with the solved
/// threshold game behind each candidate outcome.
#[derive(Debug, Clone)]
pub struct Guarantees {
    pub player: PlayerId,
    pub per_state: Vec<usize>,
    /// Solution of the threshold game of the upper set of each outcome.
    pub solutions: BTreeMap<usize, Solution>,
}

impl Guarantees {
    pub fn compute(game: &MultiOutcomeGame, player: PlayerId) -> Guarantees {
        let coalition = coalition_product(game, player);
        let pref = &game.preferences[player];
        let mut per_state = vec![pref[0]; coalition.len()];
        let mut settled = vec![false; coalition.len()];
        let mut solutions = BTreeMap::new();
        // From most to least preferred; the least preferred outcome's upper
        // set is everything and is won everywhere.
        for &o in pref.iter().rev() {
            let sol = solve_threshold(game, &coalition, &game.upper_set(player, o));
            for i in 0..coalition.len() {
                if !settled[i] && sol.winner[i] == Side::One {
                    settled[i] = true;
                    per_state[i] = o;
                }
            }
            solutions.insert(o, sol);
        }
        Guarantees {
            player,
            per_state,
            solutions,
        }
    }

    /// Move of the player at state `i` that keeps its guarantee there.
    pub fn preserving_move(&self, i: usize) -> Label {
        self.solutions[&self.per_state[i]].moves[i]
    }
}

/// The most preferred outcome whose upper set `player` can enforce at `at`.
pub fn best_guarantee(
    game: &MultiOutcomeGame,
    player: PlayerId,
    at: ProductState,
) -> Result<usize> {
    let i = game.product().require(at)?;
    Ok(Guarantees::compute(game, player).per_state[i])
}

/// A profile together with its play and the guarantees that justify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumCertificate {
    pub profile: StrategyProfile,
    pub play: Play,
    pub outcome: usize,
    /// Best guarantee of each player at the root.
    pub guarantees: Vec<usize>,
}

impl EquilibriumCertificate {
    /// Checks the play against the profile and the guarantees against the
    /// outcome.
    pub fn check_consistency(&self, game: &MultiOutcomeGame) -> Result<()> {
        let product = game.product();
        let play = induced_play(&product, &self.profile, product.state(product.root()))?;
        if play != self.play || outcome_of(game, &play) != self.outcome {
            return Err(Error::Construction(
                "certificate play does not match its profile".into(),
            ));
        }
        for (p, &g) in self.guarantees.iter().enumerate() {
            if game.prefers(p, g, self.outcome) {
                return Err(Error::Construction(format!(
                    "player {p} gets less than its guarantee"
                )));
            }
        }
        Ok(())
    }
}

fn require_antagonistic(game: &MultiOutcomeGame) -> Result<()> {
    if !game.is_antagonistic() {
        return Err(Error::NotAntagonistic);
    }
    Ok(())
}

pub(crate) fn certificate(
    game: &MultiOutcomeGame,
    product: &Product,
    profile: StrategyProfile,
    guarantees: Vec<usize>,
) -> Result<EquilibriumCertificate> {
    let play = induced_play(product, &profile, product.state(product.root()))?;
    let outcome = outcome_of(game, &play);
    let cert = EquilibriumCertificate {
        profile,
        play,
        outcome,
        guarantees,
    };
    for (p, &g) in cert.guarantees.iter().enumerate() {
        if game.prefers(p, g, outcome) {
            return Err(Error::Construction(format!(
                "play ends in outcome {outcome}, below the guarantee {g} of player {p}"
            )));
        }
    }
    Ok(cert)
}

/// Nash equilibrium of a two-player antagonistic game: both players play a
/// winning strategy of the threshold game of their root guarantee.
pub fn ne_ap(game: &MultiOutcomeGame) -> Result<EquilibriumCertificate> {
    require_antagonistic(game)?;
    let product = game.product();
    let root = product.root();
    let gs: Vec<Guarantees> = (0..2).map(|p| Guarantees::compute(game, p)).collect();
    let at_root: Vec<usize> = gs.iter().map(|g| g.per_state[root]).collect();
    if at_root[0] != at_root[1] {
        return Err(Error::Construction(
            "root guarantees of antagonistic players differ".into(),
        ));
    }
    let moves = (0..product.len())
        .map(|i| {
            let p = product.owner(i);
            (product.state(i), gs[p].solutions[&at_root[p]].moves[i])
        })
        .collect();
    certificate(
        game,
        &product,
        StrategyProfile {
            moves,
            threats: BTreeMap::new(),
        },
        at_root,
    )
}

/// Every state's owner plays the move that keeps its own guarantee there.
fn preserving_moves(product: &Product, gs: &[Guarantees]) -> BTreeMap<ProductState, Label> {
    (0..product.len())
        .map(|i| (product.state(i), gs[product.owner(i)].preserving_move(i)))
        .collect()
}

/// Nash equilibrium of a game with any finite number of players.
///
/// Along the play every owner keeps its own guarantee, so each player's
/// guarantee never drops and the outcome is at least every guarantee met on
/// the way. A player leaving the play is punished from the next state by
/// the coalition's winning strategy in the game where that player aims for
/// something strictly better than the outcome.
pub fn ne_multi(game: &MultiOutcomeGame, alpha_max: usize) -> Result<EquilibriumCertificate> {
    if game.valuation.alpha() > alpha_max {
        return Err(Error::LevelBound {
            level: game.valuation.alpha(),
            bound: alpha_max,
        });
    }
    let product = game.product();
    let gs: Vec<Guarantees> = (0..game.players())
        .map(|p| Guarantees::compute(game, p))
        .collect();
    let moves = preserving_moves(&product, &gs);
    let (stem, cycle) = product.lasso(product.root(), |i| Ok(moves[&product.state(i)]))?;
    let outcome = game.outcome_at_counter(product.counter(cycle[0].0));
    for &(i, _) in stem.iter().chain(&cycle) {
        for (p, g) in gs.iter().enumerate() {
            if game.prefers(p, g.per_state[i], outcome) {
                return Err(Error::Construction(format!(
                    "player {p} could force more than outcome {outcome} at {}",
                    product.state(i)
                )));
            }
        }
    }
    let mut threats = BTreeMap::new();
    for p in 0..game.players() {
        let rank = game.rank(p, outcome);
        let better: Vec<usize> = game.preferences[p][rank + 1..].to_vec();
        let sol = solve_threshold(game, &coalition_product(game, p), &better);
        let map = (0..product.len())
            .filter(|&i| product.owner(i) != p)
            .map(|i| (product.state(i), sol.moves[i]))
            .collect();
        threats.insert(p, map);
    }
    let root = product.root();
    let guarantees = gs.iter().map(|g| g.per_state[root]).collect();
    certificate(
        game,
        &product,
        StrategyProfile { moves, threats },
        guarantees,
    )
}

/// Subgame-perfect equilibrium of a two-player antagonistic game: at every
/// product state the owner plays the winning move of the threshold game of
/// its guarantee at that state.
pub fn spe(game: &MultiOutcomeGame) -> Result<StrategyProfile> {
    require_antagonistic(game)?;
    let product = game.product();
    let gs: Vec<Guarantees> = (0..2).map(|p| Guarantees::compute(game, p)).collect();
    Ok(StrategyProfile {
        moves: preserving_moves(&product, &gs),
        threats: BTreeMap::new(),
    })
}

/// A win/lose game as a two-outcome antagonistic game: outcome 1 means
/// player 1 wins, outcome 0 that player 2 wins.
pub fn embed_win_lose(game: &WinLoseGame) -> Result<MultiOutcomeGame> {
    let r = Realized::new(game)?;
    let labels = r
        .compiled
        .acceptance()
        .into_iter()
        .map(usize::from)
        .collect();
    let valuation = LeveledValuation::new(r.chain.clone(), labels)?;
    MultiOutcomeGame::new(
        r.arena,
        vec!["lose".into(), "win".into()],
        valuation,
        vec![vec![0, 1], vec![1, 0]],
    )
}

//! Solving win/lose games: attractors, the stratified solver for chain
//! conditions, and the region-by-region solver for prefix conditions.

use std::collections::VecDeque;

use crate::arena::{Arena, Label, Play, VertexId};
use crate::error::{Error, Result};
use crate::game::{play_of_lasso, Condition, Side, StrategyProfile, WinLoseGame};
use crate::pointclass::{
    compile, prefix_to_chain, BranchRef, CompiledCondition, DiffChain, Unfolding,
};
use crate::product::{Product, ProductState};

/// Level bound used when the caller does not configure one.
pub const DEFAULT_ALPHA_MAX: usize = 16;

/// States from which `player` can force a visit to the target, with layered
/// ranks (0 on the target) and a rank-decreasing move for `player`'s states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attractor {
    pub set: Vec<bool>,
    pub rank: Vec<usize>,
    pub moves: Vec<Option<Label>>,
}

/// The attractor of `target` for `player` over the whole product.
pub fn attractor(product: &Product, player: Side, target: &[bool]) -> Attractor {
    attractor_within(product, player, target, &vec![true; product.len()])
}

/// As [`attractor`], but only states in `domain` are ever added beyond the
/// target itself.
pub fn attractor_within(
    product: &Product,
    player: Side,
    target: &[bool],
    domain: &[bool],
) -> Attractor {
    let n = product.len();
    let pred = product.predecessors();
    let mut set = vec![false; n];
    let mut rank = vec![usize::MAX; n];
    let mut pending: Vec<usize> = (0..n)
        .map(|i| {
            let mut t: Vec<usize> = product.succ(i).iter().map(|&(_, j)| j).collect();
            t.sort_unstable();
            t.dedup();
            t.len()
        })
        .collect();
    let mut queue = VecDeque::new();
    for i in 0..n {
        if target[i] {
            set[i] = true;
            rank[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(j) = queue.pop_front() {
        for &i in &pred[j] {
            if set[i] || !domain[i] {
                continue;
            }
            let mine = Side::of_player(product.owner(i)) == player;
            pending[i] -= 1;
            if mine || pending[i] == 0 {
                set[i] = true;
                rank[i] = rank[j] + 1;
                queue.push_back(i);
            }
        }
    }
    let moves = (0..n)
        .map(|i| {
            if !set[i] || rank[i] == 0 || Side::of_player(product.owner(i)) != player {
                return None;
            }
            product
                .succ(i)
                .iter()
                .find(|&&(_, j)| set[j] && rank[j] < rank[i])
                .map(|&(l, _)| l)
        })
        .collect();
    Attractor { set, rank, moves }
}

/// Winner, positional move and admissible moves at every product state.
///
/// `moves[i]` is the owner's move at state `i`: part of a winning strategy
/// when the owner wins there, a spoiler move otherwise. `admissible[i]` lists
/// every move that keeps the winner's invariant (all moves at states whose
/// owner loses), and `moves[i]` is always its least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Side>,
    pub moves: Vec<Label>,
    pub admissible: Vec<Vec<Label>>,
    /// Attractor rank of the state within its stratum, 0 where irrelevant.
    pub rank: Vec<usize>,
}

impl Solution {
    /// The same strategies read against the complemented condition.
    pub fn complement(&self) -> Solution {
        Solution {
            winner: self.winner.iter().map(|s| s.opponent()).collect(),
            ..self.clone()
        }
    }

    pub fn profile(&self, product: &Product) -> StrategyProfile {
        StrategyProfile {
            moves: (0..product.len())
                .map(|i| (product.state(i), self.moves[i]))
                .collect(),
            threats: Default::default(),
        }
    }
}

/// Stratified solver for a weak condition on a product whose counter never
/// increases: a play is won by player 1 iff `accept[final counter]`.
///
/// Counter strata are solved from 0 upwards. In stratum `c` the player that
/// wins by staying forever is the stayer; the opponent wins exactly on its
/// attractor to lower states it already wins.
pub fn solve_weak(product: &Product, accept: &[bool]) -> Solution {
    solve_weak_staged(product, accept, usize::MAX)
}

/// Stage approximation of [`solve_weak`]: a state joins an attractor only
/// if its rank is at most `stage`. Equal to [`solve_weak`] once `stage`
/// reaches the largest rank (at most the number of states).
pub fn solve_weak_staged(product: &Product, accept: &[bool], stage: usize) -> Solution {
    let n = product.len();
    let mut winner = vec![Side::Two; n];
    let mut moves = vec![0; n];
    let mut admissible = vec![Vec::new(); n];
    let mut rank = vec![0; n];
    let mut done = vec![false; n];
    for c in 0..accept.len() {
        let stratum: Vec<bool> = (0..n).map(|i| product.counter(i) == c).collect();
        if !stratum.iter().any(|&b| b) {
            continue;
        }
        let stayer = Side::winning(accept[c]);
        let other = stayer.opponent();
        let target: Vec<bool> = (0..n).map(|i| done[i] && winner[i] == other).collect();
        let mut attr = attractor_within(product, other, &target, &stratum);
        for i in 0..n {
            if attr.rank[i] > stage {
                attr.set[i] = false;
            }
        }
        for i in (0..n).filter(|&i| stratum[i]) {
            let w = if attr.set[i] { other } else { stayer };
            winner[i] = w;
            let owner = Side::of_player(product.owner(i));
            let succ = product.succ(i);
            admissible[i] = if owner != w {
                succ.iter().map(|&(l, _)| l).collect()
            } else if w == other {
                rank[i] = attr.rank[i];
                succ.iter()
                    .filter(|&&(_, j)| attr.set[j] && attr.rank[j] < attr.rank[i])
                    .map(|&(l, _)| l)
                    .collect()
            } else {
                succ.iter()
                    .filter(|&&(_, j)| !attr.set[j])
                    .map(|&(l, _)| l)
                    .collect()
            };
            if admissible[i].is_empty() {
                // Only below the final stage: every successor is already in
                // the truncated attractor.
                admissible[i] = succ.iter().map(|&(l, _)| l).collect();
            }
            moves[i] = admissible[i][0];
        }
        for i in 0..n {
            done[i] |= stratum[i];
        }
    }
    Solution {
        winner,
        moves,
        admissible,
        rank,
    }
}

/// A win/lose game realised as a chain on a concrete arena, compiled into
/// its counter product.
#[derive(Debug, Clone)]
pub struct Realized {
    /// The arena the chain lives on (unfolded for prefix conditions).
    pub arena: Arena,
    pub chain: DiffChain,
    pub compiled: CompiledCondition,
    pub product: Product,
    pub unfolding: Option<Unfolding>,
}

impl Realized {
    pub fn new(game: &WinLoseGame) -> Result<Realized> {
        match &game.condition {
            Condition::Chain {
                chain,
                complemented,
            } => {
                let (cc, product) = compile(chain, &game.arena)?;
                let compiled = if *complemented { cc.complement() } else { cc };
                Ok(Realized {
                    arena: game.arena.clone(),
                    chain: chain.clone(),
                    compiled,
                    product,
                    unfolding: None,
                })
            }
            Condition::Prefix(set) => {
                let u = prefix_to_chain(set, &game.arena)?;
                let (cc, product) = compile(&u.chain, &u.arena)?;
                let compiled = if u.complemented { cc.complement() } else { cc };
                Ok(Realized {
                    arena: u.arena.clone(),
                    chain: u.chain.clone(),
                    compiled,
                    product,
                    unfolding: Some(u),
                })
            }
        }
    }

    /// Maps a play of the game's own arena onto the realising arena.
    pub fn transport(&self, play: &Play) -> Result<Play> {
        match &self.unfolding {
            Some(u) => u.transport(play),
            None => Ok(play.clone()),
        }
    }

    /// Product state index at which a play from `vertex` of the game's own
    /// arena starts, when that vertex has a unique realisation.
    pub fn start_state(&self, vertex: VertexId) -> Option<usize> {
        let v = match &self.unfolding {
            None => vertex,
            Some(u) => {
                let mut copies = (0..u.origin.len()).filter(|&w| u.origin[w] == vertex);
                let w = copies.next()?;
                if copies.next().is_some() {
                    return None;
                }
                w
            }
        };
        let c = self.compiled.alpha.min(self.chain.level_of(v));
        self.product.index_of(ProductState {
            vertex: v,
            counter: c,
        })
    }
}

/// A solved win/lose game.
#[derive(Debug, Clone)]
pub struct SolvedGame {
    pub realized: Realized,
    pub solution: Solution,
}

impl SolvedGame {
    pub fn product(&self) -> &Product {
        &self.realized.product
    }

    pub fn root_winner(&self) -> Side {
        self.solution.winner[self.realized.product.root()]
    }

    pub fn winner_at(&self, state: ProductState) -> Result<Side> {
        Ok(self.solution.winner[self.realized.product.require(state)?])
    }

    /// The play when both players follow the solution's moves from state `i`.
    pub fn play_from(&self, i: usize) -> Play {
        let p = &self.realized.product;
        let (stem, cycle) = p
            .lasso(i, |j| Ok(self.solution.moves[j]))
            .expect("moves are edges");
        play_of_lasso(p, &stem, &cycle)
    }
}

fn check_level(game: &WinLoseGame, alpha_max: usize) -> Result<()> {
    if game.condition.level() > alpha_max {
        return Err(Error::LevelBound {
            level: game.condition.level(),
            bound: alpha_max,
        });
    }
    Ok(())
}

/// Solves a win/lose game with the default level bound.
pub fn solve(game: &WinLoseGame) -> Result<SolvedGame> {
    solve_bounded(game, DEFAULT_ALPHA_MAX)
}

pub fn solve_bounded(game: &WinLoseGame, alpha_max: usize) -> Result<SolvedGame> {
    check_level(game, alpha_max)?;
    let realized = Realized::new(game)?;
    let solution = solve_weak(&realized.product, &realized.compiled.acceptance());
    Ok(SolvedGame { realized, solution })
}

/// Solving restricted to games that player 1 wins from the root.
pub fn find_winning_strategy(game: &WinLoseGame, alpha_max: usize) -> Result<SolvedGame> {
    let solved = solve_bounded(game, alpha_max)?;
    if solved.root_winner() != Side::One {
        return Err(Error::Promise("player 1 does not win from the root".into()));
    }
    Ok(solved)
}

/// Outcome of one top-level branch of a prefix condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgameResult {
    pub branch: BranchRef,
    /// Unfolded vertex where the subgame starts.
    pub entry: VertexId,
    /// Winner of the game restricted to the branch's cone.
    pub winner: Side,
}

/// Per-branch winners and the target of the derived open game at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgameReport {
    pub subgames: Vec<SubgameResult>,
    /// Entries from which player 1 wins the top-level game.
    pub open_target: Vec<VertexId>,
}

/// Solves a prefix condition one region at a time: each branch's subgame is
/// solved first, then the region's own vertices form an open game whose
/// targets are the branch entries won by the player aiming for the region's
/// set. Agrees with [`solve`] on winners.
pub fn solve_prefix_recursive(
    game: &WinLoseGame,
    alpha_max: usize,
) -> Result<(SolvedGame, SubgameReport)> {
    check_level(game, alpha_max)?;
    if !matches!(game.condition, Condition::Prefix(_)) {
        return Err(Error::Unsupported(
            "recursive solving needs a prefix condition".into(),
        ));
    }
    let realized = Realized::new(game)?;
    let u = realized.unfolding.as_ref().expect("prefix realisation");
    let product = &realized.product;
    let n = product.len();
    let mut state_of = vec![usize::MAX; u.arena.vertex_count()];
    for i in 0..n {
        let v = product.state(i).vertex;
        debug_assert_eq!(
            state_of[v],
            usize::MAX,
            "unfolded vertices have one counter"
        );
        state_of[v] = i;
    }
    // Side that wins iff the play lies in the region's set.
    let mut wants = vec![Side::One; u.regions.len()];
    wants[0] = if u.complemented { Side::Two } else { Side::One };
    for id in 1..u.regions.len() {
        let (p, _) = u.regions[id].parent.expect("non-root region has a parent");
        wants[id] = wants[p].opponent();
    }
    let mut winner = vec![Side::Two; n];
    let mut moves = vec![0; n];
    let mut admissible = vec![Vec::new(); n];
    let mut rank = vec![0; n];
    let mut report = SubgameReport {
        subgames: Vec::new(),
        open_target: Vec::new(),
    };
    for id in (0..u.regions.len()).rev() {
        let r = &u.regions[id];
        let me = wants[id];
        let mut domain = vec![false; n];
        for &v in &r.own {
            domain[state_of[v]] = true;
        }
        let mut target = vec![false; n];
        for &c in &r.children {
            let e = state_of[u.regions[c].root];
            target[e] = winner[e] == me;
            if id == 0 {
                report.subgames.push(SubgameResult {
                    branch: u.regions[c].parent.expect("child").1,
                    entry: u.regions[c].root,
                    winner: winner[e],
                });
                if target[e] {
                    report.open_target.push(u.regions[c].root);
                }
            }
        }
        let attr = attractor_within(product, me, &target, &domain);
        for &v in &r.own {
            let i = state_of[v];
            let w = if attr.set[i] { me } else { me.opponent() };
            winner[i] = w;
            let owner = Side::of_player(product.owner(i));
            let succ = product.succ(i);
            admissible[i] = if owner != w {
                succ.iter().map(|&(l, _)| l).collect()
            } else if w == me {
                rank[i] = attr.rank[i];
                succ.iter()
                    .filter(|&&(_, j)| attr.set[j] && attr.rank[j] < attr.rank[i])
                    .map(|&(l, _)| l)
                    .collect()
            } else {
                succ.iter()
                    .filter(|&&(_, j)| !attr.set[j])
                    .map(|&(l, _)| l)
                    .collect()
            };
            moves[i] = admissible[i][0];
        }
    }
    let solution = Solution {
        winner,
        moves,
        admissible,
        rank,
    };
    Ok((SolvedGame { realized, solution }, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{validate_arena, PlayerId, RawArena};
    use crate::pointclass::{Branch, PrefixExpr, PrefixSet};
    use std::collections::BTreeSet;

    fn arena(vs: &[(PlayerId, &[(Label, VertexId)])]) -> Arena {
        let raw = RawArena {
            players: 2,
            root: 0,
            vertices: vs.iter().map(|(o, es)| (*o, es.to_vec())).collect(),
        };
        validate_arena(&raw).unwrap()
    }

    fn set(vs: &[VertexId]) -> BTreeSet<VertexId> {
        vs.iter().copied().collect()
    }

    fn reach(a: Arena, t: &[VertexId]) -> WinLoseGame {
        WinLoseGame::new(a, Condition::chain(DiffChain::new(vec![set(t)]).unwrap())).unwrap()
    }

    #[test]
    fn attractor_of_everything_and_nothing() {
        let g = reach(arena(&[(0, &[(0, 1), (1, 0)]), (1, &[(0, 0)])]), &[1]);
        let s = solve(&g).unwrap();
        let p = s.product();
        let all = attractor(p, Side::One, &vec![true; p.len()]);
        assert!(all.set.iter().all(|&b| b));
        let none = attractor(p, Side::One, &vec![false; p.len()]);
        assert!(none.set.iter().all(|&b| !b));
    }

    #[test]
    fn attractor_respects_ownership() {
        // 0 (P2) -> 1 or 2; 1 -> 1; 2 -> 2. Target {1}: P2 can avoid it.
        let a = arena(&[(1, &[(0, 1), (1, 2)]), (0, &[(0, 1)]), (0, &[(0, 2)])]);
        let g = reach(a, &[1]);
        let s = solve(&g).unwrap();
        assert_eq!(s.root_winner(), Side::Two);
        assert_eq!(s.solution.moves[0], 1);
    }

    #[test]
    fn safety_everything_safe_and_unreachable_target() {
        let a = arena(&[(0, &[(0, 1)]), (1, &[(0, 0)])]);
        // Player 1 wins iff the play avoids the empty set: everywhere.
        let safety = WinLoseGame::new(
            a.clone(),
            Condition::Chain {
                chain: DiffChain::new(vec![set(&[])]).unwrap(),
                complemented: true,
            },
        )
        .unwrap();
        let s = solve(&safety).unwrap();
        assert!(s.solution.winner.iter().all(|&w| w == Side::One));
        let r = solve(&reach(a, &[])).unwrap();
        assert!(r.solution.winner.iter().all(|&w| w == Side::Two));
    }

    #[test]
    fn level_bound_is_enforced() {
        let a = arena(&[(0, &[(0, 0)])]);
        let g = WinLoseGame::new(
            a,
            Condition::chain(DiffChain::new(vec![set(&[]); 3]).unwrap()),
        )
        .unwrap();
        assert_eq!(
            solve_bounded(&g, 2).unwrap_err(),
            Error::LevelBound { level: 3, bound: 2 }
        );
    }

    #[test]
    fn level_two_difference() {
        // P1 at 0 chooses 1 (in T_1 only: member) or 2 (in T_0: not member).
        let a = arena(&[(0, &[(0, 1), (1, 2)]), (1, &[(0, 1)]), (1, &[(0, 2)])]);
        let g = WinLoseGame::new(
            a,
            Condition::chain(DiffChain::new(vec![set(&[2]), set(&[1, 2])]).unwrap()),
        )
        .unwrap();
        let s = solve(&g).unwrap();
        assert_eq!(s.root_winner(), Side::One);
        assert_eq!(s.solution.moves[0], 0);
        assert!(g.condition.eval(&s.play_from(0)));
    }

    #[test]
    fn find_winning_strategy_checks_promise() {
        let a = arena(&[(1, &[(0, 1), (1, 2)]), (0, &[(0, 1)]), (0, &[(0, 2)])]);
        assert!(matches!(
            find_winning_strategy(&reach(a, &[1]), 4),
            Err(Error::Promise(_))
        ));
    }

    #[test]
    fn prefix_single_epsilon_branch_is_child_complement() {
        let a = arena(&[(0, &[(0, 1), (1, 0)]), (1, &[(0, 0), (1, 1)])]);
        let child = PrefixExpr::new(
            1,
            vec![Branch {
                word: vec![1],
                child: PrefixExpr::empty(0),
            }],
            vec![],
        )
        .unwrap();
        let expr = PrefixExpr::new(
            2,
            vec![Branch {
                word: vec![],
                child: child.clone(),
            }],
            vec![],
        )
        .unwrap();
        let g = WinLoseGame::new(a.clone(), Condition::Prefix(PrefixSet::plain(expr))).unwrap();
        let (s, report) = solve_prefix_recursive(&g, 4).unwrap();
        let inner = WinLoseGame::new(
            a.clone(),
            Condition::Prefix(PrefixSet::plain(child.clone())),
        )
        .unwrap();
        let t = solve(&inner).unwrap();
        let co = PrefixSet {
            expr: child,
            complemented: true,
        };
        let co = solve(&WinLoseGame::new(a, Condition::Prefix(co)).unwrap()).unwrap();
        assert_eq!(s.root_winner(), co.root_winner());
        assert_eq!(report.subgames.len(), 1);
        assert_eq!(report.subgames[0].winner, co.root_winner());
        assert_eq!(t.root_winner(), Side::One);
        assert_eq!(solve(&g).unwrap().root_winner(), s.root_winner());
    }

    #[test]
    fn prefix_all_subgames_lost_gives_empty_target() {
        let a = arena(&[(0, &[(0, 1), (1, 2)]), (1, &[(0, 1)]), (1, &[(0, 2)])]);
        // Both cones have level-0 children (complement = everything) raised
        // to level 1 with an ε branch, so player 1 loses inside each cone.
        let lose = PrefixExpr::new(
            1,
            vec![Branch {
                word: vec![],
                child: PrefixExpr::empty(0),
            }],
            vec![],
        )
        .unwrap();
        let expr = PrefixExpr::new(
            2,
            vec![
                Branch {
                    word: vec![0],
                    child: lose.clone(),
                },
                Branch {
                    word: vec![1],
                    child: lose,
                },
            ],
            vec![],
        )
        .unwrap();
        let g = WinLoseGame::new(a, Condition::Prefix(PrefixSet::plain(expr))).unwrap();
        let (s, report) = solve_prefix_recursive(&g, 4).unwrap();
        assert!(report.open_target.is_empty());
        assert_eq!(s.root_winner(), Side::Two);
    }
}

//! Win/lose games, multi-outcome games, strategy profiles and the plays
//! they induce.

use std::collections::BTreeMap;
use std::fmt;

use crate::arena::{Arena, Label, Play, PlayerId, Step, VertexId};
use crate::error::{Error, Result};
use crate::pointclass::{eval_membership, prefix_to_chain, DiffChain, LeveledValuation, PrefixSet};
use crate::product::{Product, ProductState};

/// One of the two players of a win/lose game. Player 1 is arena player 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn of_player(p: PlayerId) -> Side {
        if p == 0 {
            Side::One
        } else {
            Side::Two
        }
    }

    pub fn player(self) -> PlayerId {
        match self {
            Side::One => 0,
            Side::Two => 1,
        }
    }

    pub fn opponent(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }

    /// The side that wins a play with the given membership bit.
    pub fn winning(member: bool) -> Side {
        if member {
            Side::One
        } else {
            Side::Two
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::One => "1",
            Side::Two => "2",
        })
    }
}

/// Player 1's winning set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// The chain's set, or its complement.
    Chain {
        chain: DiffChain,
        complemented: bool,
    },
    Prefix(PrefixSet),
}

impl Condition {
    pub fn chain(chain: DiffChain) -> Self {
        Condition::Chain {
            chain,
            complemented: false,
        }
    }

    pub fn level(&self) -> usize {
        match self {
            Condition::Chain { chain, .. } => chain.alpha(),
            Condition::Prefix(s) => s.expr.level(),
        }
    }

    pub fn is_complemented(&self) -> bool {
        match self {
            Condition::Chain { complemented, .. } => *complemented,
            Condition::Prefix(s) => s.complemented,
        }
    }

    /// Whether player 1 wins the play.
    pub fn eval(&self, play: &Play) -> bool {
        match self {
            Condition::Chain {
                chain,
                complemented,
            } => eval_membership(chain, play) != *complemented,
            Condition::Prefix(s) => s.eval(play),
        }
    }

    pub fn complement(&self) -> Condition {
        match self {
            Condition::Chain {
                chain,
                complemented,
            } => Condition::Chain {
                chain: chain.clone(),
                complemented: !complemented,
            },
            Condition::Prefix(s) => Condition::Prefix(PrefixSet {
                expr: s.expr.clone(),
                complemented: !s.complemented,
            }),
        }
    }
}

/// A two-player game won by player 1 exactly on the plays in `condition`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinLoseGame {
    pub arena: Arena,
    pub condition: Condition,
}

impl WinLoseGame {
    pub fn new(arena: Arena, condition: Condition) -> Result<Self> {
        if arena.players() != 2 {
            return Err(Error::InvalidGame(format!(
                "a win/lose game has 2 players, arena has {}",
                arena.players()
            )));
        }
        match &condition {
            Condition::Chain { chain, .. } => chain.check_vertices(&arena)?,
            Condition::Prefix(s) => {
                prefix_to_chain(s, &arena)?;
            }
        }
        Ok(WinLoseGame { arena, condition })
    }

    /// The same arena with the players' winning sets swapped.
    pub fn dual(&self) -> WinLoseGame {
        WinLoseGame {
            arena: self.arena.remap_owners(2, |p| 1 - p),
            condition: self.condition.complement(),
        }
    }
}

/// A game with finitely many outcomes, a leveled valuation of plays and a
/// linear preference per player (least preferred first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiOutcomeGame {
    pub arena: Arena,
    pub outcomes: Vec<String>,
    pub valuation: LeveledValuation,
    pub preferences: Vec<Vec<usize>>,
}

impl MultiOutcomeGame {
    pub fn new(
        arena: Arena,
        outcomes: Vec<String>,
        valuation: LeveledValuation,
        preferences: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let k = outcomes.len();
        if k == 0 {
            return Err(Error::InvalidGame("no outcomes".into()));
        }
        if preferences.len() != arena.players() {
            return Err(Error::InvalidGame(format!(
                "{} preference lists for {} players",
                preferences.len(),
                arena.players()
            )));
        }
        for (p, pref) in preferences.iter().enumerate() {
            let mut seen = vec![false; k];
            for &o in pref {
                if o >= k || std::mem::replace(&mut seen[o], true) {
                    return Err(Error::InvalidGame(format!(
                        "preference of player {p} is not a permutation of the outcomes"
                    )));
                }
            }
            if pref.len() != k {
                return Err(Error::InvalidGame(format!(
                    "preference of player {p} is not a permutation of the outcomes"
                )));
            }
        }
        if let Some(&o) = valuation.labels.iter().find(|&&o| o >= k) {
            return Err(Error::InvalidGame(format!(
                "valuation uses unknown outcome {o}"
            )));
        }
        valuation.chain.check_vertices(&arena)?;
        Ok(MultiOutcomeGame {
            arena,
            outcomes,
            valuation,
            preferences,
        })
    }

    pub fn players(&self) -> usize {
        self.arena.players()
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    /// Position of `o` in the player's preference; larger is better.
    pub fn rank(&self, player: PlayerId, o: usize) -> usize {
        self.preferences[player]
            .iter()
            .position(|&x| x == o)
            .expect("outcome in preference")
    }

    /// Whether the player strictly prefers `a` to `b`.
    pub fn prefers(&self, player: PlayerId, a: usize, b: usize) -> bool {
        self.rank(player, a) > self.rank(player, b)
    }

    /// Outcomes the player likes at least as much as `o`.
    pub fn upper_set(&self, player: PlayerId, o: usize) -> Vec<usize> {
        let pref = &self.preferences[player];
        let mut w = pref[self.rank(player, o)..].to_vec();
        w.sort_unstable();
        w
    }

    /// Two players with mutually inverse preferences.
    pub fn is_antagonistic(&self) -> bool {
        self.players() == 2
            && self.preferences[0]
                .iter()
                .rev()
                .eq(self.preferences[1].iter())
    }

    /// The product of the arena with the valuation's counter, from the root.
    pub fn product(&self) -> Product {
        let chain = &self.valuation.chain;
        let levels = chain.levels(self.arena.vertex_count());
        Product::build(
            &self.arena,
            &levels,
            chain.alpha(),
            self.arena.root(),
            chain.alpha(),
        )
    }

    pub fn outcome_at_counter(&self, counter: usize) -> usize {
        self.valuation.labels[counter]
    }
}

/// Positional strategies on a product arena: one move per product state
/// (the move of that state's owner) and optional punishment maps.
///
/// `threats[i]` is followed by every player other than `i` from the first
/// step at which `i` leaves `moves`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrategyProfile {
    pub moves: BTreeMap<ProductState, Label>,
    pub threats: BTreeMap<PlayerId, BTreeMap<ProductState, Label>>,
}

impl StrategyProfile {
    /// Checks that every entry names a reachable state and an existing edge.
    pub fn validate(&self, product: &Product) -> Result<()> {
        let maps = std::iter::once(&self.moves).chain(self.threats.values());
        for map in maps {
            for (&s, &l) in map {
                let i = product.require(s)?;
                if product.target_of(i, l).is_none() {
                    return Err(Error::InvalidProfile(format!(
                        "no edge labelled {l} at state {s}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn move_at(&self, product: &Product, i: usize) -> Result<Label> {
        let s = product.state(i);
        self.moves.get(&s).copied().ok_or(Error::MissingMove {
            vertex: s.vertex,
            counter: s.counter,
        })
    }

    /// Move of the coalition punishing `deviator` at state `i`.
    pub fn threat_at(&self, product: &Product, deviator: PlayerId, i: usize) -> Result<Label> {
        let s = product.state(i);
        self.threats
            .get(&deviator)
            .and_then(|m| m.get(&s))
            .copied()
            .ok_or(Error::MissingMove {
                vertex: s.vertex,
                counter: s.counter,
            })
    }
}

/// Converts a product lasso into a play on the underlying arena.
pub fn play_of_lasso(product: &Product, stem: &[(usize, Label)], cycle: &[(usize, Label)]) -> Play {
    let step = |&(i, l): &(usize, Label)| Step {
        vertex: product.state(i).vertex,
        label: l,
    };
    Play {
        stem: stem.iter().map(step).collect(),
        cycle: cycle.iter().map(step).collect(),
    }
}

/// The play followed when every state moves as the profile says, from
/// `start`. The cycle closes at the first repeated product state.
pub fn induced_play(
    product: &Product,
    profile: &StrategyProfile,
    start: ProductState,
) -> Result<Play> {
    let i = product.require(start)?;
    let (stem, cycle) = product.lasso(i, |j| profile.move_at(product, j))?;
    Ok(play_of_lasso(product, &stem, &cycle))
}

/// The outcome labelling the least valuation index the play visits.
pub fn outcome_of(game: &MultiOutcomeGame, play: &Play) -> usize {
    game.valuation.labels[game.valuation.chain.min_visited(play)]
}

/// A game re-rooted at a product state, with vertex correspondence.
#[derive(Debug, Clone)]
pub struct Residual {
    pub game: MultiOutcomeGame,
    /// Vertex of the original arena for each residual vertex.
    pub old_of_new: Vec<VertexId>,
}

/// The game started at `at`: the arena reachable from `at.vertex`, and the
/// valuation truncated to the indices `0..=at.counter` still attainable.
pub fn residual_game(game: &MultiOutcomeGame, at: ProductState) -> Result<Residual> {
    game.product().require(at)?;
    let (arena, old_of_new) = game.arena.restrict_to_reachable(at.vertex);
    let mut new_of_old = vec![usize::MAX; game.arena.vertex_count()];
    for (n, &o) in old_of_new.iter().enumerate() {
        new_of_old[o] = n;
    }
    let targets = game.valuation.chain.targets()[..at.counter]
        .iter()
        .map(|t| {
            t.iter()
                .filter(|&&v| new_of_old[v] != usize::MAX)
                .map(|&v| new_of_old[v])
                .collect()
        })
        .collect();
    let chain = DiffChain::new(targets)?;
    let labels = game.valuation.labels[..=at.counter].to_vec();
    let valuation = LeveledValuation::new(chain, labels)?;
    let game = MultiOutcomeGame::new(
        arena,
        game.outcomes.clone(),
        valuation,
        game.preferences.clone(),
    )?;
    Ok(Residual { game, old_of_new })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{validate_arena, RawArena};
    use std::collections::BTreeSet;

    fn arena(players: usize, vs: &[(PlayerId, &[(Label, VertexId)])]) -> Arena {
        let raw = RawArena {
            players,
            root: 0,
            vertices: vs.iter().map(|(o, es)| (*o, es.to_vec())).collect(),
        };
        validate_arena(&raw).unwrap()
    }

    fn set(vs: &[VertexId]) -> BTreeSet<VertexId> {
        vs.iter().copied().collect()
    }

    fn square_game() -> MultiOutcomeGame {
        // 0 -> {1, 2}, 1 -> 3, 2 -> 3, 3 -> 3; levels T_0 = {1}, T_1 = {1, 3}.
        let a = arena(
            2,
            &[
                (0, &[(0, 1), (1, 2)]),
                (1, &[(0, 3)]),
                (1, &[(0, 3)]),
                (0, &[(0, 3)]),
            ],
        );
        let chain = DiffChain::new(vec![set(&[1]), set(&[1, 3])]).unwrap();
        let val = LeveledValuation::new(chain, vec![2, 1, 0]).unwrap();
        let names = vec!["a".into(), "b".into(), "c".into()];
        MultiOutcomeGame::new(a, names, val, vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap()
    }

    #[test]
    fn self_loop_play_has_empty_stem() {
        let g = {
            let a = arena(1, &[(0, &[(0, 0)])]);
            let val = LeveledValuation::new(DiffChain::empty(), vec![0]).unwrap();
            MultiOutcomeGame::new(a, vec!["x".into()], val, vec![vec![0]]).unwrap()
        };
        let p = g.product();
        let prof = StrategyProfile {
            moves: [(p.state(0), 0)].into(),
            threats: BTreeMap::new(),
        };
        let play = induced_play(&p, &prof, p.state(0)).unwrap();
        assert!(play.stem.is_empty());
        assert_eq!(
            play.cycle,
            vec![Step {
                vertex: 0,
                label: 0
            }]
        );
    }

    #[test]
    fn missing_move_is_reported() {
        let g = square_game();
        let p = g.product();
        let prof = StrategyProfile {
            moves: [(p.state(0), 1)].into(),
            threats: BTreeMap::new(),
        };
        assert!(matches!(
            induced_play(&p, &prof, p.state(0)),
            Err(Error::MissingMove { .. })
        ));
    }

    #[test]
    fn outcomes_follow_min_visited_index() {
        let g = square_game();
        let left = Play::from_labels(&g.arena, 0, &[0, 0], &[0]).unwrap();
        let right = Play::from_labels(&g.arena, 0, &[1, 0], &[0]).unwrap();
        assert_eq!(outcome_of(&g, &left), 2);
        assert_eq!(outcome_of(&g, &right), 1);
        assert!(g.is_antagonistic());
        assert_eq!(g.upper_set(0, 1), vec![1, 2]);
    }

    #[test]
    fn residual_at_root_is_identity_and_decided_is_constant() {
        let g = square_game();
        let r = residual_game(
            &g,
            ProductState {
                vertex: 0,
                counter: 2,
            },
        )
        .unwrap();
        assert_eq!(r.game, g);
        let r = residual_game(
            &g,
            ProductState {
                vertex: 1,
                counter: 0,
            },
        )
        .unwrap();
        assert_eq!(r.game.valuation.alpha(), 0);
        assert_eq!(r.game.valuation.labels, vec![2]);
        assert!(residual_game(
            &g,
            ProductState {
                vertex: 2,
                counter: 0
            }
        )
        .is_err());
    }

    #[test]
    fn dual_swaps_owners_and_condition() {
        let a = arena(2, &[(0, &[(0, 1)]), (1, &[(0, 1)])]);
        let g = WinLoseGame::new(
            a,
            Condition::chain(DiffChain::new(vec![set(&[1])]).unwrap()),
        )
        .unwrap();
        let d = g.dual();
        assert_eq!(d.arena.owner(0), 1);
        assert!(d.condition.is_complemented());
    }
}

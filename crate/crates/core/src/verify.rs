//! Brute-force reference oracles: winners by strategy enumeration, Nash and
//! subgame-perfect checking by deviation enumeration, and maximin values.
//!
//! These deliberately avoid the attractor machinery of the solvers. Inner
//! quantifiers over positional counter-strategies are decided by looking for
//! a reachable cycle: on a finite graph a lasso through a cycle is exactly
//! what a positional opponent can force.

use std::collections::{BTreeMap, HashMap};

use crate::arena::{Label, PlayerId};
use crate::error::{Error, Result};
use crate::game::{residual_game, MultiOutcomeGame, Residual, Side, StrategyProfile, WinLoseGame};
use crate::product::{Product, ProductState};
use crate::winlose::{Realized, Solution};

/// Default bound on the number of enumerated strategies or deviations.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Mixed-radix enumeration of one choice per state.
#[derive(Debug, Clone)]
pub struct ProfileSpace {
    radix: Vec<usize>,
    cursor: Vec<usize>,
    started: bool,
}

impl ProfileSpace {
    pub fn new(radix: Vec<usize>) -> Self {
        assert!(radix.iter().all(|&r| r >= 1));
        let cursor = vec![0; radix.len()];
        ProfileSpace {
            radix,
            cursor,
            started: false,
        }
    }

    /// Number of profiles, saturating at `u128::MAX`.
    pub fn total(&self) -> u128 {
        self.radix
            .iter()
            .fold(1u128, |acc, &r| acc.saturating_mul(r as u128))
    }

    /// The next profile, lowest position varying fastest.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            return Some(&self.cursor);
        }
        for (c, &r) in self.cursor.iter_mut().zip(&self.radix) {
            *c += 1;
            if *c < r {
                return Some(&self.cursor);
            }
            *c = 0;
        }
        None
    }
}

fn check_cap(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        return Err(Error::CapExceeded { what, size, cap });
    }
    Ok(())
}

/// For every node, the set (bitmask) of counters of cycles reachable from
/// it in the graph `succ`. Counters never increase along edges, so each
/// strongly connected component has a single counter.
fn cycle_masks(
    n: usize,
    succ: &dyn Fn(usize) -> Vec<usize>,
    counter: &dyn Fn(usize) -> usize,
) -> Vec<u64> {
    // Iterative Tarjan; components come out in reverse topological order,
    // so successors' masks are final when a component is closed.
    let adj: Vec<Vec<usize>> = (0..n).map(succ).collect();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut mask = vec![0u64; n];
    let mut next_index = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            if *k < adj[v].len() {
                let w = adj[v][*k];
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(u, _)) = call.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("component on stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                let cyclic = comp.len() > 1 || adj[v].contains(&v);
                let mut m = if cyclic { 1u64 << counter(v) } else { 0 };
                for &w in &comp {
                    for &x in &adj[w] {
                        if !comp.contains(&x) {
                            m |= mask[x];
                        }
                    }
                }
                for &w in &comp {
                    mask[w] = m;
                }
            }
        }
    }
    mask
}

fn counters(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |c| mask >> c & 1 == 1)
}

fn mask_of(accept: &[bool], want: bool) -> u64 {
    accept
        .iter()
        .enumerate()
        .filter(|&(_, &a)| a == want)
        .fold(0, |m, (c, _)| m | 1 << c)
}

/// States owned by `side` with a real choice, and their out-degrees.
fn choice_states(product: &Product, side: Side) -> Vec<usize> {
    (0..product.len())
        .filter(|&i| Side::of_player(product.owner(i)) == side && product.succ(i).len() > 1)
        .collect()
}

/// Winner at every product state by enumerating player 1's positional
/// strategies; the realisation is the one [`crate::winlose::solve`] uses.
#[derive(Debug, Clone)]
pub struct BruteForce {
    pub realized: Realized,
    pub winner: Vec<Side>,
}

pub fn brute_force_solve(game: &WinLoseGame, cap: u128) -> Result<BruteForce> {
    let realized = Realized::new(game)?;
    let p = &realized.product;
    let reject = mask_of(&realized.compiled.acceptance(), false);
    let free = choice_states(p, Side::One);
    let mut space = ProfileSpace::new(free.iter().map(|&i| p.succ(i).len()).collect());
    check_cap("player-1 positional strategies", space.total(), cap)?;
    let mut fixed: Vec<Option<usize>> = vec![None; p.len()];
    for i in 0..p.len() {
        if Side::of_player(p.owner(i)) == Side::One && p.succ(i).len() == 1 {
            fixed[i] = Some(p.succ(i)[0].1);
        }
    }
    let mut won = vec![false; p.len()];
    while let Some(choice) = space.next() {
        for (k, &i) in free.iter().enumerate() {
            fixed[i] = Some(p.succ(i)[choice[k]].1);
        }
        let succ = |i: usize| match fixed[i] {
            Some(j) => vec![j],
            None => p.succ(i).iter().map(|&(_, j)| j).collect(),
        };
        let masks = cycle_masks(p.len(), &succ, &|i| p.counter(i));
        for i in 0..p.len() {
            won[i] |= masks[i] & reject == 0;
        }
        if won.iter().all(|&w| w) {
            break;
        }
    }
    let winner = won.into_iter().map(Side::winning).collect();
    Ok(BruteForce { realized, winner })
}

/// Checks that each side's moves win from every state the solution assigns
/// to it, against every positional counter-strategy. Returns the first state
/// where this fails.
pub fn check_strategies(
    product: &Product,
    accept: &[bool],
    solution: &Solution,
) -> std::result::Result<(), usize> {
    for side in [Side::One, Side::Two] {
        let bad = mask_of(accept, side == Side::Two);
        let succ = |i: usize| {
            if Side::of_player(product.owner(i)) == side {
                vec![product
                    .target_of(i, solution.moves[i])
                    .expect("move is an edge")]
            } else {
                product.succ(i).iter().map(|&(_, j)| j).collect()
            }
        };
        let masks = cycle_masks(product.len(), &succ, &|i| product.counter(i));
        if let Some(i) =
            (0..product.len()).find(|&i| solution.winner[i] == side && masks[i] & bad != 0)
        {
            return Err(i);
        }
    }
    Ok(())
}

/// Whether `side`, moving by `moves` at its own states, wins from `from`
/// against every positional counter-strategy.
pub fn strategy_wins(
    product: &Product,
    accept: &[bool],
    side: Side,
    moves: &BTreeMap<ProductState, Label>,
    from: usize,
) -> Result<bool> {
    let own = |i: usize| Side::of_player(product.owner(i)) == side;
    let mut fixed: Vec<Option<usize>> = vec![None; product.len()];
    let mut seen = vec![false; product.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(i) = stack.pop() {
        let next: Vec<usize> = if own(i) {
            let s = product.state(i);
            let l = *moves.get(&s).ok_or(Error::MissingMove {
                vertex: s.vertex,
                counter: s.counter,
            })?;
            let j = product
                .target_of(i, l)
                .ok_or_else(|| Error::InvalidProfile(format!("label {l} is not an edge at {s}")))?;
            fixed[i] = Some(j);
            vec![j]
        } else {
            product.succ(i).iter().map(|&(_, j)| j).collect()
        };
        for j in next {
            if !std::mem::replace(&mut seen[j], true) {
                stack.push(j);
            }
        }
    }
    let succ = |i: usize| match fixed[i] {
        Some(j) => vec![j],
        None => product.succ(i).iter().map(|&(_, j)| j).collect(),
    };
    let masks = cycle_masks(product.len(), &succ, &|i| product.counter(i));
    Ok(masks[from] & mask_of(accept, side == Side::Two) == 0)
}

/// Node of a deviation walk: product state and whether the deviator has
/// already left the profile (from then on the others punish).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DevNode {
    pub state: usize,
    pub punished: bool,
}

/// A profitable unilateral deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub player: PlayerId,
    /// First product state where the deviator leaves the profile.
    pub state: ProductState,
    /// The deviator's choices along the deviation walk.
    pub choices: Vec<(ProductState, bool, Label)>,
    pub outcome: usize,
    pub baseline: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Refuted(Witness),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

struct Deviation<'a> {
    game: &'a MultiOutcomeGame,
    product: &'a Product,
    profile: &'a StrategyProfile,
    player: PlayerId,
}

impl Deviation<'_> {
    fn step(&self, u: DevNode, label: Label) -> Result<DevNode> {
        let j = self.product.target_of(u.state, label).ok_or_else(|| {
            Error::InvalidProfile(format!(
                "label {label} is not an edge at {}",
                self.product.state(u.state)
            ))
        })?;
        let mut punished = u.punished;
        if !u.punished && self.product.owner(u.state) == self.player {
            punished = label != self.profile.move_at(self.product, u.state)?;
        }
        Ok(DevNode { state: j, punished })
    }

    fn others(&self, u: DevNode) -> Result<Label> {
        if u.punished && self.profile.threats.contains_key(&self.player) {
            self.profile.threat_at(self.product, self.player, u.state)
        } else {
            self.profile.move_at(self.product, u.state)
        }
    }

    fn outcome(&self, u: DevNode) -> usize {
        self.game.outcome_at_counter(self.product.counter(u.state))
    }

    /// Depth-first enumeration of the deviator's positional maps on the
    /// nodes the walk visits. `visit` sees each closed lasso's outcome and
    /// the choices made; returning `true` stops the search.
    fn enumerate(
        &self,
        start: DevNode,
        cap: u128,
        visit: &mut dyn FnMut(usize, &[(DevNode, Label)]) -> bool,
    ) -> Result<u128> {
        let mut pos: HashMap<DevNode, usize> = HashMap::new();
        let mut choices: Vec<(DevNode, Label)> = Vec::new();
        let mut leaves = 0u128;
        self.dfs(start, &mut pos, &mut choices, &mut leaves, cap, visit)?;
        Ok(leaves)
    }

    fn dfs(
        &self,
        u: DevNode,
        pos: &mut HashMap<DevNode, usize>,
        choices: &mut Vec<(DevNode, Label)>,
        leaves: &mut u128,
        cap: u128,
        visit: &mut dyn FnMut(usize, &[(DevNode, Label)]) -> bool,
    ) -> Result<bool> {
        if pos.contains_key(&u) {
            *leaves += 1;
            check_cap("deviation walks", *leaves, cap)?;
            // Counters are constant on a cycle, so the closing node decides.
            return Ok(visit(self.outcome(u), choices));
        }
        pos.insert(u, pos.len());
        let stop = if self.product.owner(u.state) == self.player {
            let mut stop = false;
            for &(l, _) in self.product.succ(u.state) {
                choices.push((u, l));
                let v = self.step(u, l)?;
                stop = self.dfs(v, pos, choices, leaves, cap, visit)?;
                choices.pop();
                if stop {
                    break;
                }
            }
            stop
        } else {
            let v = self.step(u, self.others(u)?)?;
            self.dfs(v, pos, choices, leaves, cap, visit)?
        };
        pos.remove(&u);
        Ok(stop)
    }

    /// Outcome when nobody deviates.
    fn baseline(&self, start: usize) -> Result<usize> {
        let (_, cycle) = self
            .product
            .lasso(start, |i| self.profile.move_at(self.product, i))?;
        Ok(self
            .game
            .outcome_at_counter(self.product.counter(cycle[0].0)))
    }

    /// The deviator's best outcome rank over positional deviations from `u`.
    fn best_from(&self, u: DevNode, cap: u128) -> Result<usize> {
        let mut best = 0;
        self.enumerate(u, cap, &mut |o, _| {
            best = best.max(self.game.rank(self.player, o));
            false
        })?;
        Ok(best)
    }
}

/// Nash check from product state `start` of `product` (built from `game`).
pub fn check_nash_from(
    game: &MultiOutcomeGame,
    product: &Product,
    profile: &StrategyProfile,
    start: usize,
    cap: u128,
) -> Result<Verdict> {
    for player in 0..game.players() {
        let d = Deviation {
            game,
            product,
            profile,
            player,
        };
        let baseline = d.baseline(start)?;
        let mut found: Option<Witness> = None;
        d.enumerate(
            DevNode {
                state: start,
                punished: false,
            },
            cap,
            &mut |o, choices| {
                if !game.prefers(player, o, baseline) {
                    return false;
                }
                let first = choices
                    .iter()
                    .find(|(u, l)| {
                        !u.punished && profile.moves.get(&product.state(u.state)) != Some(l)
                    })
                    .map(|(u, _)| product.state(u.state))
                    .unwrap_or(product.state(start));
                found = Some(Witness {
                    player,
                    state: first,
                    choices: choices
                        .iter()
                        .map(|&(u, l)| (product.state(u.state), u.punished, l))
                        .collect(),
                    outcome: o,
                    baseline,
                });
                true
            },
        )?;
        if let Some(w) = found {
            return Ok(Verdict::Refuted(w));
        }
    }
    Ok(Verdict::Pass)
}

/// No player gains by a unilateral positional deviation from the root.
pub fn check_nash(
    game: &MultiOutcomeGame,
    profile: &StrategyProfile,
    cap: u128,
) -> Result<Verdict> {
    let product = game.product();
    profile.validate(&product)?;
    check_nash_from(game, &product, profile, product.root(), cap)
}

/// Restriction of a profile to a residual game; entries at states the
/// residual product does not contain are dropped.
pub fn profile_into_residual(profile: &StrategyProfile, residual: &Residual) -> StrategyProfile {
    let product = residual.game.product();
    let old_of_new = &residual.old_of_new;
    let new_of_old: HashMap<usize, usize> = old_of_new
        .iter()
        .enumerate()
        .map(|(n, &o)| (o, n))
        .collect();
    let map = |m: &BTreeMap<ProductState, Label>| {
        m.iter()
            .filter_map(|(s, &l)| {
                let &v = new_of_old.get(&s.vertex)?;
                let t = ProductState {
                    vertex: v,
                    counter: s.counter,
                };
                product.index_of(t).map(|_| (t, l))
            })
            .collect()
    };
    StrategyProfile {
        moves: map(&profile.moves),
        threats: profile.threats.iter().map(|(&p, m)| (p, map(m))).collect(),
    }
}

/// Nash check of the residual game at every reachable product state.
/// The witness is reported at the first failing state, in the original
/// game's vertex numbering.
pub fn check_spe(game: &MultiOutcomeGame, profile: &StrategyProfile, cap: u128) -> Result<Verdict> {
    let product = game.product();
    profile.validate(&product)?;
    for i in 0..product.len() {
        let at = product.state(i);
        let r = residual_game(game, at)?;
        let sub = profile_into_residual(profile, &r);
        if let Verdict::Refuted(mut w) = check_nash(&r.game, &sub, cap)? {
            let back = |s: ProductState| ProductState {
                vertex: r.old_of_new[s.vertex],
                counter: s.counter,
            };
            w.state = back(w.state);
            w.choices = w
                .choices
                .into_iter()
                .map(|(s, p, l)| (back(s), p, l))
                .collect();
            return Ok(Verdict::Refuted(Witness { state: at, ..w }));
        }
    }
    Ok(Verdict::Pass)
}

/// Best outcome rank `player` reaches by any deviation whose first `depth`
/// steps are history dependent and which then continues positionally.
/// Compared against the purely positional optimum, it guards the
/// restriction of [`check_nash`] to positional deviations.
pub fn best_bounded_deviation(
    game: &MultiOutcomeGame,
    profile: &StrategyProfile,
    player: PlayerId,
    depth: usize,
    cap: u128,
) -> Result<usize> {
    let product = game.product();
    let d = Deviation {
        game,
        product: &product,
        profile,
        player,
    };
    let mut positional: HashMap<DevNode, usize> = HashMap::new();
    let mut memo: HashMap<(usize, DevNode), usize> = HashMap::new();
    fn go(
        d: &Deviation<'_>,
        k: usize,
        u: DevNode,
        cap: u128,
        positional: &mut HashMap<DevNode, usize>,
        memo: &mut HashMap<(usize, DevNode), usize>,
    ) -> Result<usize> {
        if let Some(&v) = memo.get(&(k, u)) {
            return Ok(v);
        }
        let mut best = match positional.get(&u) {
            Some(&v) => v,
            None => {
                let v = d.best_from(u, cap)?;
                positional.insert(u, v);
                v
            }
        };
        if k > 0 {
            let labels: Vec<Label> = if d.product.owner(u.state) == d.player {
                d.product.succ(u.state).iter().map(|&(l, _)| l).collect()
            } else {
                vec![d.others(u)?]
            };
            for l in labels {
                let v = d.step(u, l)?;
                best = best.max(go(d, k - 1, v, cap, positional, memo)?);
            }
        }
        memo.insert((k, u), best);
        Ok(best)
    }
    go(
        &d,
        depth,
        DevNode {
            state: product.root(),
            punished: false,
        },
        cap,
        &mut positional,
        &mut memo,
    )
}

/// The deviator's best outcome rank over positional deviations from the root.
pub fn best_positional_deviation(
    game: &MultiOutcomeGame,
    profile: &StrategyProfile,
    player: PlayerId,
    cap: u128,
) -> Result<usize> {
    let product = game.product();
    let d = Deviation {
        game,
        product: &product,
        profile,
        player,
    };
    d.best_from(
        DevNode {
            state: product.root(),
            punished: false,
        },
        cap,
    )
}

/// Length of the longest shortest path from the root of the product.
pub fn product_diameter(product: &Product) -> usize {
    let mut dist = vec![usize::MAX; product.len()];
    let mut queue = std::collections::VecDeque::from([product.root()]);
    dist[product.root()] = 0;
    while let Some(i) = queue.pop_front() {
        for &(_, j) in product.succ(i) {
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    dist.into_iter()
        .filter(|&d| d != usize::MAX)
        .max()
        .unwrap_or(0)
}

/// The outcome `player` can guarantee from product state `start` with a
/// positional strategy against every positional coalition of the others:
/// the best, over the player's positional maps, of the worst reachable cycle.
pub fn maximin(
    game: &MultiOutcomeGame,
    player: PlayerId,
    start: ProductState,
    cap: u128,
) -> Result<usize> {
    let p = game.product();
    let s = p.require(start)?;
    let side_states: Vec<usize> = (0..p.len())
        .filter(|&i| p.owner(i) == player && p.succ(i).len() > 1)
        .collect();
    let mut space = ProfileSpace::new(side_states.iter().map(|&i| p.succ(i).len()).collect());
    check_cap("maximin strategies", space.total(), cap)?;
    let mut fixed: Vec<Option<usize>> = (0..p.len())
        .map(|i| (p.owner(i) == player && p.succ(i).len() == 1).then(|| p.succ(i)[0].1))
        .collect();
    let mut best: Option<usize> = None;
    while let Some(choice) = space.next() {
        for (k, &i) in side_states.iter().enumerate() {
            fixed[i] = Some(p.succ(i)[choice[k]].1);
        }
        let succ = |i: usize| match fixed[i] {
            Some(j) => vec![j],
            None => p.succ(i).iter().map(|&(_, j)| j).collect(),
        };
        let masks = cycle_masks(p.len(), &succ, &|i| p.counter(i));
        let worst = counters(masks[s])
            .map(|c| game.rank(player, game.outcome_at_counter(c)))
            .min()
            .expect("every walk reaches a cycle");
        best = Some(best.map_or(worst, |b| b.max(worst)));
    }
    let r = best.expect("at least one strategy");
    Ok(game.preferences[player][r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{validate_arena, Arena, RawArena, VertexId};
    use crate::game::Condition;
    use crate::pointclass::{DiffChain, LeveledValuation};
    use std::collections::{BTreeMap, BTreeSet};

    fn arena(players: usize, vs: &[(PlayerId, &[(Label, VertexId)])]) -> Arena {
        let raw = RawArena {
            players,
            root: 0,
            vertices: vs.iter().map(|(o, es)| (*o, es.to_vec())).collect(),
        };
        validate_arena(&raw).unwrap()
    }

    #[test]
    fn profile_space_counts_and_visits_each_once() {
        let mut s = ProfileSpace::new(vec![2, 3, 1]);
        assert_eq!(s.total(), 6);
        let mut seen = BTreeSet::new();
        while let Some(c) = s.next() {
            assert!(seen.insert(c.to_vec()));
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn self_loop_accepting_and_rejecting() {
        let a = arena(2, &[(0, &[(0, 0)])]);
        let all = DiffChain::new(vec![[0].into()]).unwrap();
        let acc = WinLoseGame::new(a.clone(), Condition::chain(all.clone())).unwrap();
        assert_eq!(
            brute_force_solve(&acc, DEFAULT_CAP).unwrap().winner,
            vec![Side::One]
        );
        let rej = WinLoseGame::new(
            a,
            Condition::Chain {
                chain: all,
                complemented: true,
            },
        )
        .unwrap();
        assert_eq!(
            brute_force_solve(&rej, DEFAULT_CAP).unwrap().winner,
            vec![Side::Two]
        );
    }

    fn one_switch_game() -> MultiOutcomeGame {
        // Player 0 at the root chooses between vertex 1 (outcome 1) and
        // vertex 2 (outcome 0); it prefers 1.
        let a = arena(2, &[(0, &[(0, 1), (1, 2)]), (1, &[(0, 1)]), (1, &[(0, 2)])]);
        let chain = DiffChain::new(vec![BTreeSet::from([1])]).unwrap();
        let val = LeveledValuation::new(chain, vec![1, 0]).unwrap();
        MultiOutcomeGame::new(
            a,
            vec!["lo".into(), "hi".into()],
            val,
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn profitable_switch_is_witnessed() {
        let g = one_switch_game();
        let p = g.product();
        let moves: BTreeMap<ProductState, Label> = (0..p.len()).map(|i| (p.state(i), 0)).collect();
        let mut bad = StrategyProfile {
            moves,
            threats: BTreeMap::new(),
        };
        bad.moves.insert(p.state(0), 1);
        match check_nash(&g, &bad, DEFAULT_CAP).unwrap() {
            Verdict::Refuted(w) => {
                assert_eq!(w.player, 0);
                assert_eq!(
                    w.state,
                    ProductState {
                        vertex: 0,
                        counter: 1
                    }
                );
                assert_eq!(w.outcome, 1);
            }
            Verdict::Pass => panic!("deviation missed"),
        }
        bad.moves.insert(p.state(0), 0);
        assert!(check_nash(&g, &bad, DEFAULT_CAP).unwrap().passed());
        assert_eq!(maximin(&g, 0, p.state(0), DEFAULT_CAP).unwrap(), 1);
    }

    #[test]
    fn dominated_move_off_path_fails_spe() {
        // Player 1 at the root moves to 1 (outcome "mid") or to 2; at 2
        // player 0 picks "hi" (vertex 3) or "lo" (vertex 4). Both players
        // rank lo < mid < hi.
        let a = arena(
            2,
            &[
                (1, &[(0, 1), (1, 2)]),
                (0, &[(0, 1)]),
                (0, &[(0, 3), (1, 4)]),
                (0, &[(0, 3)]),
                (0, &[(0, 4)]),
            ],
        );
        let chain = DiffChain::new(vec![BTreeSet::from([3]), BTreeSet::from([3, 4])]).unwrap();
        let val = LeveledValuation::new(chain, vec![2, 0, 1]).unwrap();
        let g = MultiOutcomeGame::new(
            a,
            vec!["lo".into(), "mid".into(), "hi".into()],
            val,
            vec![vec![0, 1, 2], vec![0, 1, 2]],
        )
        .unwrap();
        let p = g.product();
        let mut moves: BTreeMap<ProductState, Label> =
            (0..p.len()).map(|i| (p.state(i), 0)).collect();
        // Off the play, player 0 threatens "lo" at vertex 2, against its interest.
        moves.insert(
            ProductState {
                vertex: 2,
                counter: 2,
            },
            1,
        );
        let prof = StrategyProfile {
            moves,
            threats: BTreeMap::new(),
        };
        assert!(check_nash(&g, &prof, DEFAULT_CAP).unwrap().passed());
        match check_spe(&g, &prof, DEFAULT_CAP).unwrap() {
            Verdict::Refuted(w) => assert_eq!(
                w.state,
                ProductState {
                    vertex: 2,
                    counter: 2
                }
            ),
            Verdict::Pass => panic!("non-credible threat accepted"),
        }
    }
}

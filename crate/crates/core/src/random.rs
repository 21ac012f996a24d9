//! Seeded generators of small arenas, conditions, games and plays.
//!
//! Every generator takes the RNG by reference, so a fixed seed gives a fixed
//! instance.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arena::{validate_arena, Arena, Label, Play, RawArena, Step, VertexId};
use crate::gadgets::{eval_sigma_llpo, tuple, FinBitInput};
use crate::game::{Condition, MultiOutcomeGame, WinLoseGame};
use crate::pointclass::{Branch, DiffChain, LeveledValuation, PrefixExpr, PrefixSet, Ray};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of the `index`-th instance derived from a master seed.
pub fn split_seed(master: u64, index: u64) -> u64 {
    // SplitMix64 finaliser over the pair.
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A random arena with `n` vertices, out-degrees in `1..=max_out` and every
/// vertex reachable from vertex 0.
pub fn arena(rng: &mut Rng64, n: usize, players: usize, max_out: usize) -> Arena {
    assert!(n >= 1 && max_out >= 2 && players >= 1);
    let mut targets: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    // Spanning tree: vertex v - 1 never has a child yet, so a parent with
    // spare out-degree always exists.
    for v in 1..n {
        let free: Vec<VertexId> = (0..v).filter(|&u| targets[u].len() < max_out).collect();
        let u = *free.choose(rng).expect("v - 1 has no children yet");
        targets[u].push(v);
    }
    for ts in targets.iter_mut() {
        let want = rng.gen_range(ts.len().max(1)..=max_out);
        while ts.len() < want {
            ts.push(rng.gen_range(0..n));
        }
        ts.shuffle(rng);
    }
    let raw = RawArena {
        players,
        root: 0,
        vertices: targets
            .into_iter()
            .map(|ts| {
                let owner = rng.gen_range(0..players);
                (
                    owner,
                    ts.into_iter()
                        .enumerate()
                        .map(|(l, t)| (l as Label, t))
                        .collect(),
                )
            })
            .collect(),
    };
    validate_arena(&raw).expect("generated arena is valid")
}

/// A random nested chain of level `alpha`: each vertex gets a random least
/// index in `0..=alpha` (`alpha` meaning no target).
pub fn chain(rng: &mut Rng64, n: usize, alpha: usize) -> DiffChain {
    let level: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=alpha)).collect();
    let targets = (0..alpha)
        .map(|b| (0..n).filter(|&v| level[v] <= b).collect::<BTreeSet<_>>())
        .collect();
    DiffChain::new(targets).expect("nested by construction")
}

/// A random two-player win/lose game with a chain condition of level `alpha`.
pub fn chain_game(rng: &mut Rng64, n: usize, alpha: usize) -> WinLoseGame {
    let a = arena(rng, n, 2, 2);
    let c = chain(rng, n, alpha);
    let complemented = rng.gen_bool(0.5);
    WinLoseGame::new(
        a,
        Condition::Chain {
            chain: c,
            complemented,
        },
    )
    .expect("valid game")
}

/// A random walk of `len` labels from `start`.
pub fn walk(rng: &mut Rng64, arena: &Arena, start: VertexId, len: usize) -> (Vec<Label>, VertexId) {
    let mut v = start;
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let e = *arena.edges(v).choose(rng).expect("no dead ends");
        word.push(e.label);
        v = e.target;
    }
    (word, v)
}

/// A random lasso from `start`: a random stem, then a random positional
/// choice per vertex followed until a vertex repeats.
pub fn lasso(rng: &mut Rng64, arena: &Arena, start: VertexId) -> Play {
    let stem_len = rng.gen_range(0..=6);
    let (stem, mut v) = walk(rng, arena, start, stem_len);
    let mut cycle = Vec::new();
    let mut seen = vec![false; arena.vertex_count()];
    while !seen[v] {
        seen[v] = true;
        let e = *arena.edges(v).choose(rng).expect("no dead ends");
        cycle.push(e.label);
        v = e.target;
    }
    let mut labels = stem;
    labels.extend(cycle);
    let mut steps = Vec::with_capacity(labels.len());
    let mut u = start;
    for &l in &labels {
        steps.push(Step {
            vertex: u,
            label: l,
        });
        u = arena.successor(u, l).expect("walk labels are edges");
    }
    // The closing vertex occurs once after the stem; the period starts there.
    let at = steps
        .iter()
        .rposition(|s| s.vertex == v)
        .expect("v was visited");
    let cycle = steps.split_off(at);
    Play { stem: steps, cycle }
}

fn prefix_expr(
    rng: &mut Rng64,
    arena: &Arena,
    start: VertexId,
    level: usize,
    rays: bool,
) -> PrefixExpr {
    if level == 0 {
        return PrefixExpr::empty(0);
    }
    let mut heads: Vec<Vec<Label>> = Vec::new();
    let mut branches = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let len = rng.gen_range(0..=3);
        let (word, end) = walk(rng, arena, start, len);
        if heads
            .iter()
            .any(|h| h.starts_with(&word) || word.starts_with(h))
        {
            continue;
        }
        heads.push(word.clone());
        let child = prefix_expr(rng, arena, end, level - 1, rays);
        branches.push(Branch { word, child });
    }
    let mut ray_list = Vec::new();
    if rays && rng.gen_bool(0.3) {
        let len = rng.gen_range(0..=2);
        let (head, _) = walk(rng, arena, start, len);
        if !heads
            .iter()
            .any(|h| h.starts_with(&head) || head.starts_with(h))
        {
            // Ray children start at varying vertices, so they use only the
            // empty word.
            let child = if level >= 2 && rng.gen_bool(0.5) {
                let leaf = Branch {
                    word: Vec::new(),
                    child: PrefixExpr::empty(level - 2),
                };
                PrefixExpr::new(level - 1, vec![leaf], Vec::new()).expect("single branch")
            } else {
                PrefixExpr::empty(level - 1)
            };
            ray_list.push(Ray { head, child });
        }
    }
    PrefixExpr::new(level, branches, ray_list).expect("incomparable by construction")
}

/// A random prefix set of the given level whose branch words are
/// realizable from the arena root.
pub fn prefix_set(rng: &mut Rng64, arena: &Arena, level: usize, rays: bool) -> PrefixSet {
    let expr = prefix_expr(rng, arena, arena.root(), level, rays);
    PrefixSet {
        expr,
        complemented: rays && rng.gen_bool(0.3),
    }
}

/// A random game with `outcomes` outcomes, a valuation of level `alpha` and
/// random preferences; with `antagonistic`, two players with inverse orders.
pub fn multi_game(
    rng: &mut Rng64,
    n: usize,
    players: usize,
    outcomes: usize,
    alpha: usize,
    antagonistic: bool,
) -> MultiOutcomeGame {
    let players = if antagonistic { 2 } else { players };
    let a = arena(rng, n, players, 2);
    let c = chain(rng, n, alpha);
    let labels = (0..=alpha).map(|_| rng.gen_range(0..outcomes)).collect();
    let valuation = LeveledValuation::new(c, labels).expect("label count matches");
    let mut prefs: Vec<Vec<usize>> = Vec::new();
    for p in 0..players {
        let pref = if antagonistic && p == 1 {
            prefs[0].iter().rev().copied().collect()
        } else {
            let mut o: Vec<usize> = (0..outcomes).collect();
            o.shuffle(rng);
            o
        };
        prefs.push(pref);
    }
    let names = (0..outcomes).map(|o| format!("o{o}")).collect();
    MultiOutcomeGame::new(a, names, valuation, prefs).expect("valid game")
}

/// A random bit input of arity `n` over `0..=bound`: a random bias, most
/// tuples of the box in the support, and a random tail.
pub fn fin_bit_input(rng: &mut Rng64, n: usize, bound: u64) -> FinBitInput {
    let q: f64 = rng.gen();
    let mut assignments = BTreeMap::new();
    let mut ks = vec![0u64; n];
    loop {
        if rng.gen_bool(0.8) {
            assignments.insert(tuple(&ks), rng.gen_bool(q));
        }
        // Odometer over the box.
        let Some(i) = ks.iter().rposition(|&k| k < bound) else {
            break;
        };
        ks[i] += 1;
        ks[i + 1..].iter_mut().for_each(|k| *k = 0);
    }
    FinBitInput::new(n, bound, rng.gen_bool(q), assignments).expect("support inside the box")
}

/// A random pair of bit inputs of which at least one satisfies its block.
pub fn llpo_pair(rng: &mut Rng64, n: usize, bound: u64) -> (FinBitInput, FinBitInput) {
    loop {
        let pr = (fin_bit_input(rng, n, bound), fin_bit_input(rng, n, bound));
        if eval_sigma_llpo(n, &pr).is_ok() {
            return pr;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_arenas_revalidate() {
        let mut r = rng(1);
        for n in 1..=7 {
            let a = arena(&mut r, n, 2, 2);
            assert_eq!(a.vertex_count(), n);
            assert_eq!(validate_arena(&a.to_raw()).unwrap(), a);
            assert!(a.vertices().all(|v| (1..=2).contains(&a.edges(v).len())));
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let g1 = chain_game(&mut rng(42), 6, 3);
        let g2 = chain_game(&mut rng(42), 6, 3);
        assert_eq!(g1, g2);
        assert_ne!(split_seed(7, 0), split_seed(7, 1));
    }

    #[test]
    fn lassos_are_valid_plays() {
        let mut r = rng(3);
        let a = arena(&mut r, 5, 2, 2);
        for _ in 0..50 {
            lasso(&mut r, &a, 0).validate(&a).unwrap();
        }
    }
}

use std::collections::BTreeSet;

use crate::arena::{Arena, Play, VertexId};
use crate::error::{Error, Result};
use crate::product::Product;

/// Parity of a finite level: `alpha mod 2`.
pub fn par(alpha: usize) -> u8 {
    (alpha % 2) as u8
}

/// A finite-level difference-hierarchy set given by nested vertex targets
/// `T_0 ⊆ T_1 ⊆ … ⊆ T_{α-1}`, where `T_β` presents "the play visits `T_β`".
///
/// A play belongs to the set iff `par(m) != par(α)` for `m` the least index
/// of a visited target (`m = α` when none is visited).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffChain {
    targets: Vec<BTreeSet<VertexId>>,
}

impl DiffChain {
    /// Chain from already nested targets.
    pub fn new(targets: Vec<BTreeSet<VertexId>>) -> Result<Self> {
        for (b, w) in targets.windows(2).enumerate() {
            if !w[0].is_subset(&w[1]) {
                return Err(Error::InvalidCondition(format!(
                    "targets are not nested: T_{b} is not a subset of T_{}",
                    b + 1
                )));
            }
        }
        Ok(DiffChain { targets })
    }

    /// Chain from an arbitrary family, made increasing by prefix unions.
    /// The least-visited-index formula is unchanged by this.
    pub fn normalized(family: Vec<BTreeSet<VertexId>>) -> Self {
        let mut acc = BTreeSet::new();
        let targets = family
            .into_iter()
            .map(|t| {
                acc.extend(t);
                acc.clone()
            })
            .collect();
        DiffChain { targets }
    }

    /// Chain of level `alpha` in which vertex `v` has least index
    /// `levels[v]` (values at or above `alpha` mean no target).
    pub fn from_levels(levels: &[usize], alpha: usize) -> Self {
        let targets = (0..alpha)
            .map(|b| (0..levels.len()).filter(|&v| levels[v] <= b).collect())
            .collect();
        DiffChain { targets }
    }

    /// The level-0 chain (the empty set).
    pub fn empty() -> Self {
        DiffChain {
            targets: Vec::new(),
        }
    }

    pub fn alpha(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[BTreeSet<VertexId>] {
        &self.targets
    }

    /// Least target index containing `v`, or `alpha` when none does.
    pub fn level_of(&self, v: VertexId) -> usize {
        self.targets
            .iter()
            .position(|t| t.contains(&v))
            .unwrap_or(self.alpha())
    }

    pub fn levels(&self, vertex_count: usize) -> Vec<usize> {
        (0..vertex_count).map(|v| self.level_of(v)).collect()
    }

    /// Least target index hit by the play (`alpha` if none).
    pub fn min_visited(&self, play: &Play) -> usize {
        play.visited()
            .into_iter()
            .map(|v| self.level_of(v))
            .min()
            .unwrap_or(self.alpha())
    }

    pub fn check_vertices(&self, arena: &Arena) -> Result<()> {
        let n = arena.vertex_count();
        for (b, t) in self.targets.iter().enumerate() {
            if let Some(v) = t.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidCondition(format!(
                    "T_{b} mentions missing vertex {v}"
                )));
            }
        }
        Ok(())
    }

    /// Chain accepting exactly the plays whose least visited index `m` in
    /// `self` has `accept[m]`. Consecutive indices with equal acceptance are
    /// merged; the result has level at most `alpha + 1`.
    pub fn coarsen(&self, accept: &[bool], vertex_count: usize) -> DiffChain {
        assert_eq!(accept.len(), self.alpha() + 1);
        // Runs of equal acceptance, each recorded by its last index.
        let mut ends = Vec::new();
        for m in 0..accept.len() {
            if m + 1 == accept.len() || accept[m] != accept[m + 1] {
                ends.push(m);
            }
        }
        let mut targets: Vec<BTreeSet<VertexId>> = ends[..ends.len() - 1]
            .iter()
            .map(|&m| self.targets[m].clone())
            .collect();
        if accept[self.alpha()] {
            targets.push((0..vertex_count).collect());
        }
        DiffChain { targets }
    }
}

/// Membership of a play in the set presented by `cond`.
pub fn eval_membership(cond: &DiffChain, play: &Play) -> bool {
    par(cond.min_visited(play)) != par(cond.alpha())
}

/// A chain with one outcome label per index `0..=alpha`; the outcome of a
/// play is the label at its least visited index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeveledValuation {
    pub chain: DiffChain,
    pub labels: Vec<usize>,
}

impl LeveledValuation {
    pub fn new(chain: DiffChain, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != chain.alpha() + 1 {
            return Err(Error::InvalidCondition(format!(
                "valuation of level {} needs {} labels, got {}",
                chain.alpha(),
                chain.alpha() + 1,
                labels.len()
            )));
        }
        Ok(LeveledValuation { chain, labels })
    }

    pub fn alpha(&self) -> usize {
        self.chain.alpha()
    }

    pub fn outcome_at(&self, counter: usize) -> usize {
        self.labels[counter]
    }
}

/// The counter automaton deciding a (possibly complemented) chain.
///
/// States are `0..=alpha`; reading a vertex moves the counter to
/// `min(counter, level(vertex))`, so it never increases and stabilises on
/// every lasso. A lasso is accepted iff `par(final) != par(alpha)`, flipped
/// when `complemented`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompiledCondition {
    pub alpha: usize,
    pub complemented: bool,
}

impl CompiledCondition {
    pub fn initial(&self) -> usize {
        self.alpha
    }

    pub fn step(&self, counter: usize, level: usize) -> usize {
        counter.min(level)
    }

    pub fn accepts(&self, counter: usize) -> bool {
        (par(counter) != par(self.alpha)) != self.complemented
    }

    pub fn complement(self) -> Self {
        CompiledCondition {
            complemented: !self.complemented,
            ..self
        }
    }

    /// Acceptance by final counter value, for `0..=alpha`.
    pub fn acceptance(&self) -> Vec<bool> {
        (0..=self.alpha).map(|c| self.accepts(c)).collect()
    }

    /// Runs the counter along the play and reports acceptance.
    pub fn run(&self, chain: &DiffChain, play: &Play) -> bool {
        let mut c = self.initial();
        for s in play.stem.iter().chain(&play.cycle) {
            c = self.step(c, chain.level_of(s.vertex));
        }
        self.accepts(c)
    }
}

/// Compiles a chain over `arena` into its counter automaton and the
/// product arena reachable from the root.
pub fn compile(cond: &DiffChain, arena: &Arena) -> Result<(CompiledCondition, Product)> {
    cond.check_vertices(arena)?;
    let levels = cond.levels(arena.vertex_count());
    let product = Product::build(arena, &levels, cond.alpha(), arena.root(), cond.alpha());
    Ok((
        CompiledCondition {
            alpha: cond.alpha(),
            complemented: false,
        },
        product,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{validate_arena, RawArena, Step};

    fn set(vs: &[VertexId]) -> BTreeSet<VertexId> {
        vs.iter().copied().collect()
    }

    fn loop_play(vs: &[VertexId]) -> Play {
        Play {
            stem: Vec::new(),
            cycle: vs
                .iter()
                .map(|&v| Step {
                    vertex: v,
                    label: 0,
                })
                .collect(),
        }
    }

    #[test]
    fn par_values() {
        assert_eq!(par(0), 0);
        assert_eq!(par(1), 1);
        assert_eq!(par(7), 1);
    }

    #[test]
    fn level_one_is_reachability() {
        let c = DiffChain::new(vec![set(&[2])]).unwrap();
        assert!(eval_membership(&c, &loop_play(&[0, 2])));
        assert!(!eval_membership(&c, &loop_play(&[0, 1])));
    }

    #[test]
    fn level_two_is_a_difference() {
        let c = DiffChain::new(vec![set(&[0]), set(&[0, 1])]).unwrap();
        assert!(!eval_membership(&c, &loop_play(&[0])));
        assert!(eval_membership(&c, &loop_play(&[1])));
        assert!(!eval_membership(&c, &loop_play(&[2])));
    }

    #[test]
    fn nothing_visited_is_never_a_member() {
        for alpha in 0..5 {
            let c = DiffChain::new(vec![set(&[9]); alpha]).unwrap();
            assert!(!eval_membership(&c, &loop_play(&[0, 1])));
        }
    }

    #[test]
    fn non_nested_rejected_and_normalized() {
        assert!(DiffChain::new(vec![set(&[1]), set(&[2])]).is_err());
        let c = DiffChain::normalized(vec![set(&[1]), set(&[2])]);
        assert_eq!(c.targets()[1], set(&[1, 2]));
    }

    #[test]
    fn coarsen_keeps_membership() {
        let c = DiffChain::new(vec![set(&[0]), set(&[0, 1]), set(&[0, 1, 2])]).unwrap();
        let plays: Vec<Play> = [0usize, 1, 2, 3].iter().map(|&v| loop_play(&[v])).collect();
        for mask in 0u32..16 {
            let accept: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
            let d = c.coarsen(&accept, 4);
            assert!(d.alpha() <= c.alpha() + 1);
            for p in &plays {
                assert_eq!(
                    eval_membership(&d, p),
                    accept[c.min_visited(p)],
                    "mask {mask}"
                );
            }
        }
    }

    #[test]
    fn compiled_level_zero_rejects_everything() {
        let raw = RawArena {
            players: 1,
            root: 0,
            vertices: vec![(0, vec![(0, 0)])],
        };
        let a = validate_arena(&raw).unwrap();
        let (cc, prod) = compile(&DiffChain::empty(), &a).unwrap();
        assert_eq!(prod.len(), 1);
        assert_eq!(prod.counter(0), 0);
        assert!(!cc.accepts(0));
    }
}

//! The memory product of an arena with the min-visited-level counter.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::arena::{Arena, Label, PlayerId, VertexId};
use crate::error::{Error, Result};

/// A vertex paired with the least target index visited so far
/// (`alpha` when no target has been visited).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub vertex: VertexId,
    pub counter: usize,
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.vertex, self.counter)
    }
}

/// Product arena over `(vertex, counter)` states reachable from a start state.
///
/// Successor lists are in label order, and states are numbered in BFS order
/// from the start, so indices are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    alpha: usize,
    states: Vec<ProductState>,
    owners: Vec<PlayerId>,
    succ: Vec<Vec<(Label, usize)>>,
    index: HashMap<ProductState, usize>,
}

impl Product {
    /// Builds the product from `start`; the counter of the start state is
    /// `min(initial_counter, level[start])`.
    pub fn build(
        arena: &Arena,
        levels: &[usize],
        alpha: usize,
        start: VertexId,
        initial_counter: usize,
    ) -> Product {
        let first = ProductState {
            vertex: start,
            counter: initial_counter.min(levels[start]),
        };
        let mut states = vec![first];
        let mut index = HashMap::from([(first, 0)]);
        let mut succ = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let s = states[i];
            let mut out = Vec::with_capacity(arena.edges(s.vertex).len());
            for e in arena.edges(s.vertex) {
                let t = ProductState {
                    vertex: e.target,
                    counter: s.counter.min(levels[e.target]),
                };
                let j = *index.entry(t).or_insert_with(|| {
                    states.push(t);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                out.push((e.label, j));
            }
            if succ.len() <= i {
                succ.resize(i + 1, Vec::new());
            }
            succ[i] = out;
        }
        succ.resize(states.len(), Vec::new());
        let owners = states.iter().map(|s| arena.owner(s.vertex)).collect();
        Product {
            alpha,
            states,
            owners,
            succ,
            index,
        }
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn state(&self, i: usize) -> ProductState {
        self.states[i]
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn owner(&self, i: usize) -> PlayerId {
        self.owners[i]
    }

    pub fn counter(&self, i: usize) -> usize {
        self.states[i].counter
    }

    pub fn succ(&self, i: usize) -> &[(Label, usize)] {
        &self.succ[i]
    }

    pub fn index_of(&self, s: ProductState) -> Option<usize> {
        self.index.get(&s).copied()
    }

    pub fn require(&self, s: ProductState) -> Result<usize> {
        self.index_of(s).ok_or(Error::UnreachableState {
            vertex: s.vertex,
            counter: s.counter,
        })
    }

    pub fn target_of(&self, i: usize, label: Label) -> Option<usize> {
        self.succ[i]
            .iter()
            .find(|(l, _)| *l == label)
            .map(|&(_, j)| j)
    }

    /// Predecessor lists, in increasing state order.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (i, out) in self.succ.iter().enumerate() {
            for &(_, j) in out {
                if pred[j].last() != Some(&i) {
                    pred[j].push(i);
                }
            }
        }
        pred
    }

    /// Same states and moves with owners replaced by `f(owner)`.
    pub fn remap_owners(&self, f: impl Fn(PlayerId) -> PlayerId) -> Product {
        let mut p = self.clone();
        p.owners = self.owners.iter().map(|&o| f(o)).collect();
        p
    }

    /// Lasso followed from `start` when every state `i` moves along
    /// `choose(i)`; cycle closes at the first repeated state.
    pub fn lasso(
        &self,
        start: usize,
        mut choose: impl FnMut(usize) -> Result<Label>,
    ) -> Result<(Vec<(usize, Label)>, Vec<(usize, Label)>)> {
        let mut pos = vec![usize::MAX; self.len()];
        let mut walk: Vec<(usize, Label)> = Vec::new();
        let mut cur = start;
        while pos[cur] == usize::MAX {
            pos[cur] = walk.len();
            let label = choose(cur)?;
            let next = self.target_of(cur, label).ok_or_else(|| {
                let s = self.states[cur];
                Error::InvalidProfile(format!("label {label} is not an edge at state {s}"))
            })?;
            walk.push((cur, label));
            cur = next;
        }
        let cycle = walk.split_off(pos[cur]);
        Ok((walk, cycle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{validate_arena, RawArena};

    #[test]
    fn counter_never_increases_along_edges() {
        let raw = RawArena {
            players: 1,
            root: 0,
            vertices: vec![
                (0, vec![(0, 1), (1, 2)]),
                (0, vec![(0, 2)]),
                (0, vec![(0, 0)]),
            ],
        };
        let a = validate_arena(&raw).unwrap();
        let p = Product::build(&a, &[2, 1, 0], 2, 0, 2);
        for i in 0..p.len() {
            for &(_, j) in p.succ(i) {
                assert!(p.counter(j) <= p.counter(i));
            }
        }
        assert_eq!(
            p.state(0),
            ProductState {
                vertex: 0,
                counter: 2
            }
        );
        assert!(p.len() <= a.vertex_count() * 3);
    }
}

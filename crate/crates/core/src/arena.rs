//! Finite edge-labelled game graphs and eventually periodic plays on them.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{ArenaError, Error, Result};

pub type VertexId = usize;
pub type PlayerId = usize;
pub type Label = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: Label,
    pub target: VertexId,
}

/// Unvalidated arena description, as read from a file or produced by a builder.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawArena {
    pub players: usize,
    pub root: VertexId,
    /// `(owner, edges)` per vertex, edges as `(label, target)`.
    pub vertices: Vec<(PlayerId, Vec<(Label, VertexId)>)>,
}

impl RawArena {
    pub fn new(players: usize, root: VertexId) -> Self {
        RawArena {
            players,
            root,
            vertices: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, owner: PlayerId) -> VertexId {
        self.vertices.push((owner, Vec::new()));
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, from: VertexId, label: Label, to: VertexId) {
        self.vertices[from].1.push((label, to));
    }
}

/// A validated arena: every vertex has an outgoing edge, labels leaving a
/// vertex are distinct, and every vertex is reachable from the root.
///
/// Edges at each vertex are stored sorted by label, so "edge index" order is
/// label order everywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    players: usize,
    root: VertexId,
    owners: Vec<PlayerId>,
    edges: Vec<Vec<Edge>>,
}

/// Checks the arena invariants and returns the validated arena.
pub fn validate_arena(raw: &RawArena) -> std::result::Result<Arena, ArenaError> {
    let n = raw.vertices.len();
    if n == 0 {
        return Err(ArenaError::Empty);
    }
    if raw.root >= n {
        return Err(ArenaError::BadRoot(raw.root));
    }
    let mut owners = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    for (v, (owner, out)) in raw.vertices.iter().enumerate() {
        if *owner >= raw.players {
            return Err(ArenaError::BadOwner {
                vertex: v,
                owner: *owner,
                players: raw.players,
            });
        }
        if out.is_empty() {
            return Err(ArenaError::DeadEnd(v));
        }
        let mut sorted: Vec<Edge> = out
            .iter()
            .map(|&(label, target)| Edge { label, target })
            .collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0].label == w[1].label {
                return Err(ArenaError::DuplicateLabel {
                    vertex: v,
                    label: w[0].label,
                });
            }
        }
        if let Some(e) = sorted.iter().find(|e| e.target >= n) {
            return Err(ArenaError::BadTarget {
                vertex: v,
                target: e.target,
            });
        }
        owners.push(*owner);
        edges.push(sorted);
    }
    let arena = Arena {
        players: raw.players,
        root: raw.root,
        owners,
        edges,
    };
    let reach = arena.reachable_from(arena.root);
    if let Some(v) = (0..n).find(|&v| !reach[v]) {
        return Err(ArenaError::Unreachable(v));
    }
    Ok(arena)
}

impl Arena {
    pub fn players(&self) -> usize {
        self.players
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.owners.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.owners.len()
    }

    pub fn owner(&self, v: VertexId) -> PlayerId {
        self.owners[v]
    }

    pub fn edges(&self, v: VertexId) -> &[Edge] {
        &self.edges[v]
    }

    pub fn successor(&self, v: VertexId, label: Label) -> Option<VertexId> {
        self.edges[v]
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.target)
    }

    pub fn to_raw(&self) -> RawArena {
        RawArena {
            players: self.players,
            root: self.root,
            vertices: self
                .owners
                .iter()
                .zip(&self.edges)
                .map(|(&o, es)| (o, es.iter().map(|e| (e.label, e.target)).collect()))
                .collect(),
        }
    }

    pub fn reachable_from(&self, start: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for e in &self.edges[v] {
                if !seen[e.target] {
                    seen[e.target] = true;
                    queue.push_back(e.target);
                }
            }
        }
        seen
    }

    /// The sub-arena of vertices reachable from `start`, re-rooted there.
    /// Surviving vertices keep their relative order. Returns the arena and
    /// `old_of_new` (new vertex id -> old vertex id).
    pub fn restrict_to_reachable(&self, start: VertexId) -> (Arena, Vec<VertexId>) {
        let reach = self.reachable_from(start);
        let old_of_new: Vec<VertexId> = (0..self.vertex_count()).filter(|&v| reach[v]).collect();
        let mut new_of_old = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = i;
        }
        let owners = old_of_new.iter().map(|&v| self.owners[v]).collect();
        let edges = old_of_new
            .iter()
            .map(|&v| {
                self.edges[v]
                    .iter()
                    .map(|e| Edge {
                        label: e.label,
                        target: new_of_old[e.target],
                    })
                    .collect()
            })
            .collect();
        let root = new_of_old[start];
        (
            Arena {
                players: self.players,
                root,
                owners,
                edges,
            },
            old_of_new,
        )
    }

    /// Same graph with owners replaced by `f(owner)` over `players` players.
    pub fn remap_owners(&self, players: usize, f: impl Fn(PlayerId) -> PlayerId) -> Arena {
        Arena {
            players,
            root: self.root,
            owners: self.owners.iter().map(|&o| f(o)).collect(),
            edges: self.edges.clone(),
        }
    }

    pub fn max_out_degree(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// One position of a play: the vertex and the label of the edge taken there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub vertex: VertexId,
    pub label: Label,
}

/// An eventually periodic play `stem · cycle^ω`.
///
/// The cycle is non-empty and the edge taken at its last step leads back to
/// its first vertex; the stem (possibly empty) leads to that first vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Play {
    pub stem: Vec<Step>,
    pub cycle: Vec<Step>,
}

impl Play {
    pub fn start(&self) -> VertexId {
        self.stem
            .first()
            .or(self.cycle.first())
            .map(|s| s.vertex)
            .expect("non-empty cycle")
    }

    pub fn step_at(&self, i: usize) -> Step {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    pub fn label_at(&self, i: usize) -> Label {
        self.step_at(i).label
    }

    /// Every vertex the play ever visits.
    pub fn visited(&self) -> BTreeSet<VertexId> {
        self.stem
            .iter()
            .chain(&self.cycle)
            .map(|s| s.vertex)
            .collect()
    }

    /// Vertices visited infinitely often.
    pub fn recurring(&self) -> BTreeSet<VertexId> {
        self.cycle.iter().map(|s| s.vertex).collect()
    }

    /// The same infinite play with the first `n` positions dropped.
    pub fn shifted(&self, n: usize) -> Play {
        if n <= self.stem.len() {
            return Play {
                stem: self.stem[n..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let k = (n - self.stem.len()) % self.cycle.len();
        let mut cycle = self.cycle[k..].to_vec();
        cycle.extend_from_slice(&self.cycle[..k]);
        Play {
            stem: Vec::new(),
            cycle,
        }
    }

    /// Checks that the play is a walk in `arena` whose cycle closes.
    pub fn validate(&self, arena: &Arena) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::InvalidPlay("empty cycle".into()));
        }
        let walk: Vec<&Step> = self.stem.iter().chain(&self.cycle).collect();
        for (i, s) in walk.iter().enumerate() {
            if s.vertex >= arena.vertex_count() {
                return Err(Error::InvalidPlay(format!(
                    "vertex {} out of range",
                    s.vertex
                )));
            }
            let next = arena.successor(s.vertex, s.label).ok_or_else(|| {
                Error::InvalidPlay(format!(
                    "no edge labelled {} at vertex {}",
                    s.label, s.vertex
                ))
            })?;
            let expected = if i + 1 < walk.len() {
                walk[i + 1].vertex
            } else {
                self.cycle[0].vertex
            };
            if next != expected {
                return Err(Error::InvalidPlay(format!(
                    "edge {} at vertex {} leads to {}, play continues at {}",
                    s.label, s.vertex, next, expected
                )));
            }
        }
        Ok(())
    }

    /// The play following `stem_labels · cycle_labels^ω` from `start`.
    ///
    /// The returned lasso closes at the first repeated (vertex, cycle phase)
    /// pair, so its cycle may be a multiple of `cycle_labels`.
    pub fn from_labels(
        arena: &Arena,
        start: VertexId,
        stem_labels: &[Label],
        cycle_labels: &[Label],
    ) -> Result<Play> {
        if cycle_labels.is_empty() {
            return Err(Error::InvalidPlay("empty cycle word".into()));
        }
        let step = |v: VertexId, l: Label| {
            arena.successor(v, l).ok_or(Error::UnrealizableWord {
                word: vec![l],
                vertex: v,
            })
        };
        let mut v = start;
        let mut steps = Vec::new();
        for &l in stem_labels {
            steps.push(Step {
                vertex: v,
                label: l,
            });
            v = step(v, l)?;
        }
        let stem_len = steps.len();
        let mut seen: HashMap<(VertexId, usize), usize> = HashMap::new();
        let mut phase = 0;
        loop {
            if let Some(&at) = seen.get(&(v, phase)) {
                let cycle = steps.split_off(at);
                return Ok(Play { stem: steps, cycle });
            }
            seen.insert((v, phase), steps.len());
            let l = cycle_labels[phase];
            steps.push(Step {
                vertex: v,
                label: l,
            });
            v = step(v, l)?;
            phase = (phase + 1) % cycle_labels.len();
            debug_assert!(steps.len() >= stem_len);
        }
    }

    /// Total number of listed positions, stem plus one period.
    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(players: usize, vs: &[(PlayerId, &[(Label, VertexId)])]) -> RawArena {
        RawArena {
            players,
            root: 0,
            vertices: vs.iter().map(|(o, es)| (*o, es.to_vec())).collect(),
        }
    }

    #[test]
    fn single_self_loop_is_valid() {
        let a = validate_arena(&raw(1, &[(0, &[(0, 0)])])).unwrap();
        assert_eq!(a.vertex_count(), 1);
        assert_eq!(a.owner(0), 0);
    }

    #[test]
    fn dead_end_is_named() {
        let err = validate_arena(&raw(1, &[(0, &[(0, 1)]), (0, &[])])).unwrap_err();
        assert_eq!(err, ArenaError::DeadEnd(1));
        assert_eq!(err.to_string(), "dead-end at vertex 1");
    }

    #[test]
    fn duplicate_label_and_unreachable() {
        let err = validate_arena(&raw(1, &[(0, &[(0, 0), (0, 0)])])).unwrap_err();
        assert_eq!(
            err,
            ArenaError::DuplicateLabel {
                vertex: 0,
                label: 0
            }
        );
        let err = validate_arena(&raw(1, &[(0, &[(0, 0)]), (0, &[(0, 0)])])).unwrap_err();
        assert_eq!(err, ArenaError::Unreachable(1));
    }

    #[test]
    fn bad_owner_and_target() {
        assert!(matches!(
            validate_arena(&raw(1, &[(1, &[(0, 0)])])),
            Err(ArenaError::BadOwner { vertex: 0, .. })
        ));
        assert!(matches!(
            validate_arena(&raw(1, &[(0, &[(0, 4)])])),
            Err(ArenaError::BadTarget {
                vertex: 0,
                target: 4
            })
        ));
    }

    #[test]
    fn from_labels_unrolls_until_phase_repeats() {
        // 0 -a-> 1, 1 -0-> 0, 1 -1-> 1
        let a = validate_arena(&raw(1, &[(0, &[(0, 1)]), (0, &[(0, 0), (1, 1)])])).unwrap();
        let p = Play::from_labels(&a, 0, &[], &[0]).unwrap();
        assert!(p.stem.is_empty());
        assert_eq!(p.cycle.len(), 2);
        p.validate(&a).unwrap();
        let p = Play::from_labels(&a, 0, &[0], &[1]).unwrap();
        assert_eq!(p.stem.len(), 1);
        assert_eq!(
            p.cycle,
            vec![Step {
                vertex: 1,
                label: 1
            }]
        );
        assert!(Play::from_labels(&a, 0, &[1], &[0]).is_err());
    }

    #[test]
    fn shifted_play_matches_positions() {
        let a = validate_arena(&raw(1, &[(0, &[(0, 1)]), (0, &[(0, 0), (1, 1)])])).unwrap();
        let p = Play::from_labels(&a, 0, &[0, 0, 0], &[1]).unwrap();
        for n in 0..6 {
            let q = p.shifted(n);
            q.validate(&a).unwrap();
            for i in 0..5 {
                assert_eq!(q.step_at(i), p.step_at(n + i));
            }
        }
    }

    #[test]
    fn restrict_reroots() {
        let a = validate_arena(&raw(
            1,
            &[(0, &[(0, 1), (1, 2)]), (0, &[(0, 1)]), (0, &[(0, 1)])],
        ))
        .unwrap();
        let (sub, map) = a.restrict_to_reachable(2);
        assert_eq!(map, vec![1, 2]);
        assert_eq!(sub.vertex_count(), 2);
        assert_eq!(sub.root(), 1);
        assert_eq!(sub.successor(1, 0), Some(0));
    }
}

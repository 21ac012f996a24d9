use std::collections::{BTreeSet, HashMap};

use crate::arena::{validate_arena, Arena, Label, Play, PlayerId, RawArena, VertexId};
use crate::error::{Error, Result};
use crate::pointclass::chain::DiffChain;

/// A branch `word · (complement of child)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    pub word: Vec<Label>,
    pub child: PrefixExpr,
}

/// The family of branches `head · 0^m · 1 · (complement of child)` for
/// every `m >= 0`, all sharing one child.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ray {
    pub head: Vec<Label>,
    pub child: PrefixExpr,
}

/// Prefix form of a level-`level` set: the union over branches of
/// `word · complement(child)`, with every child of level `level - 1`.
/// A level-0 expression has no branches and denotes the empty set.
///
/// Words and ray heads are pairwise prefix-incomparable, so a play matches
/// at most one branch.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixExpr {
    level: usize,
    branches: Vec<Branch>,
    rays: Vec<Ray>,
}

fn comparable(a: &[Label], b: &[Label]) -> bool {
    a.starts_with(b) || b.starts_with(a)
}

impl PrefixExpr {
    pub fn new(level: usize, branches: Vec<Branch>, rays: Vec<Ray>) -> Result<Self> {
        if level == 0 && !(branches.is_empty() && rays.is_empty()) {
            return Err(Error::InvalidCondition(
                "a level-0 expression has no branches".into(),
            ));
        }
        for b in &branches {
            if b.child.level + 1 != level {
                return Err(Error::InvalidCondition(format!(
                    "branch {:?} has a child of level {} under level {level}",
                    b.word, b.child.level
                )));
            }
        }
        for r in &rays {
            if r.child.level + 1 != level {
                return Err(Error::InvalidCondition(format!(
                    "ray {:?} has a child of level {} under level {level}",
                    r.head, r.child.level
                )));
            }
        }
        let heads: Vec<&[Label]> = branches
            .iter()
            .map(|b| b.word.as_slice())
            .chain(rays.iter().map(|r| r.head.as_slice()))
            .collect();
        for i in 0..heads.len() {
            for j in i + 1..heads.len() {
                if comparable(heads[i], heads[j]) {
                    return Err(Error::InvalidCondition(format!(
                        "words {:?} and {:?} are prefix-comparable",
                        heads[i], heads[j]
                    )));
                }
            }
        }
        Ok(PrefixExpr {
            level,
            branches,
            rays,
        })
    }

    /// The empty set at the given level.
    pub fn empty(level: usize) -> Self {
        PrefixExpr {
            level,
            branches: Vec::new(),
            rays: Vec::new(),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// The same set presented one level higher.
    pub fn raised(&self) -> PrefixExpr {
        PrefixExpr {
            level: self.level + 1,
            branches: self
                .branches
                .iter()
                .map(|b| Branch {
                    word: b.word.clone(),
                    child: b.child.raised(),
                })
                .collect(),
            rays: self
                .rays
                .iter()
                .map(|r| Ray {
                    head: r.head.clone(),
                    child: r.child.raised(),
                })
                .collect(),
        }
    }

    pub fn raised_to(&self, level: usize) -> PrefixExpr {
        let mut e = self.clone();
        while e.level < level {
            e = e.raised();
        }
        e
    }

    /// Prepends `prefix` to every word and ray head.
    pub fn shifted_by(&self, prefix: &[Label]) -> PrefixExpr {
        let cat = |w: &[Label]| prefix.iter().chain(w).copied().collect::<Vec<_>>();
        PrefixExpr {
            level: self.level,
            branches: self
                .branches
                .iter()
                .map(|b| Branch {
                    word: cat(&b.word),
                    child: b.child.clone(),
                })
                .collect(),
            rays: self
                .rays
                .iter()
                .map(|r| Ray {
                    head: cat(&r.head),
                    child: r.child.clone(),
                })
                .collect(),
        }
    }

    /// Length of the matched word and the child to continue with, if any.
    fn matching(&self, play: &Play) -> Option<(usize, &PrefixExpr)> {
        let starts_with = |w: &[Label]| w.iter().enumerate().all(|(i, &l)| play.label_at(i) == l);
        if let Some(b) = self.branches.iter().find(|b| starts_with(&b.word)) {
            return Some((b.word.len(), &b.child));
        }
        for r in &self.rays {
            if !starts_with(&r.head) {
                continue;
            }
            // After the head the label sequence is periodic from
            // max(head, stem), so one further period decides 0^ω.
            let end = r.head.len().max(play.stem.len()) + play.cycle.len();
            for i in r.head.len()..end {
                match play.label_at(i) {
                    0 => continue,
                    1 => return Some((i + 1, &r.child)),
                    _ => break,
                }
            }
        }
        None
    }
}

/// Membership of a play (read as its label sequence) in the set of `expr`.
pub fn eval_prefix(expr: &PrefixExpr, play: &Play) -> bool {
    match expr.matching(play) {
        Some((n, child)) => !eval_prefix(child, &play.shifted(n)),
        None => false,
    }
}

/// A prefix expression, or its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixSet {
    pub expr: PrefixExpr,
    pub complemented: bool,
}

impl PrefixSet {
    pub fn plain(expr: PrefixExpr) -> Self {
        PrefixSet {
            expr,
            complemented: false,
        }
    }

    pub fn eval(&self, play: &Play) -> bool {
        eval_prefix(&self.expr, play) != self.complemented
    }

    /// An uncomplemented expression for the same set.
    fn as_plain(&self) -> PrefixExpr {
        if !self.complemented {
            return self.expr.clone();
        }
        PrefixExpr {
            level: self.expr.level + 1,
            branches: vec![Branch {
                word: Vec::new(),
                child: self.expr.clone(),
            }],
            rays: Vec::new(),
        }
    }

    /// An uncomplemented expression for the complement.
    fn complement_plain(&self) -> PrefixExpr {
        PrefixSet {
            expr: self.expr.clone(),
            complemented: !self.complemented,
        }
        .as_plain()
    }
}

/// Union of `0^n 1 · sets[n]` over the list, which truncates the countable
/// union at its length. With `with_point`, each `sets[n]` is a summand of
/// `{0^ω} ∪ ⋃ 0^n 1 · sets[n]`, summands past the list are empty, and the
/// result is returned in complemented form.
pub fn shift_union(sets: &[PrefixSet], with_point: bool) -> Result<PrefixSet> {
    if sets.is_empty() && !with_point {
        return Err(Error::InvalidCondition(
            "shift union of an empty list".into(),
        ));
    }
    let parts: Vec<PrefixExpr> = sets
        .iter()
        .map(|s| {
            if with_point {
                s.complement_plain()
            } else {
                s.as_plain()
            }
        })
        .collect();
    let floor = if with_point { 1 } else { 0 };
    let level = parts.iter().map(|e| e.level).max().unwrap_or(0).max(floor);
    let mut branches = Vec::new();
    let mut rays = Vec::new();
    for (n, e) in parts.iter().enumerate() {
        let mut prefix = vec![0; n];
        prefix.push(1);
        let e = e.raised_to(level).shifted_by(&prefix);
        branches.extend(e.branches);
        rays.extend(e.rays);
    }
    if with_point {
        rays.push(Ray {
            head: vec![0; sets.len()],
            child: PrefixExpr::empty(level - 1),
        });
    }
    Ok(PrefixSet {
        expr: PrefixExpr::new(level, branches, rays)?,
        complemented: with_point,
    })
}

/// Where a child region hangs off its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchRef {
    Word(usize),
    Ray(usize),
}

/// One expression node instantiated at one entry vertex of the unfolding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub level: usize,
    pub parent: Option<(usize, BranchRef)>,
    /// First vertex of the region; for an `ε` branch this is the child's root.
    pub root: VertexId,
    pub children: Vec<usize>,
    /// Vertices owned by this region itself (trie, rays and outside copy).
    pub own: Vec<VertexId>,
}

/// A prefix set realised as a chain over an unfolded copy of the arena.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub arena: Arena,
    pub chain: DiffChain,
    pub complemented: bool,
    /// Original vertex of each unfolded vertex.
    pub origin: Vec<VertexId>,
    pub regions: Vec<Region>,
    pub region_of: Vec<usize>,
}

impl Unfolding {
    /// The play on the unfolded arena with the same label sequence.
    pub fn transport(&self, play: &Play) -> Result<Play> {
        let stem: Vec<Label> = play.stem.iter().map(|s| s.label).collect();
        let cycle: Vec<Label> = play.cycle.iter().map(|s| s.label).collect();
        Play::from_labels(&self.arena, self.arena.root(), &stem, &cycle)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    Trie(Vec<Label>),
    Ray(usize),
    Outside,
}

struct Builder<'a> {
    arena: &'a Arena,
    owners: Vec<PlayerId>,
    edges: Vec<Vec<(Label, VertexId)>>,
    origin: Vec<VertexId>,
    region_of: Vec<usize>,
    regions: Vec<Region>,
}

impl Builder<'_> {
    fn alloc(&mut self, orig: VertexId, region: usize) -> VertexId {
        self.owners.push(self.arena.owner(orig));
        self.edges.push(Vec::new());
        self.origin.push(orig);
        self.region_of.push(region);
        self.regions[region].own.push(self.owners.len() - 1);
        self.owners.len() - 1
    }

    fn follow(&self, start: VertexId, word: &[Label]) -> Option<VertexId> {
        word.iter()
            .try_fold(start, |v, &l| self.arena.successor(v, l))
    }

    fn region(
        &mut self,
        expr: &PrefixExpr,
        start: VertexId,
        parent: Option<(usize, BranchRef)>,
    ) -> Result<usize> {
        for b in &expr.branches {
            if self.follow(start, &b.word).is_none() {
                return Err(Error::UnrealizableWord {
                    word: b.word.clone(),
                    vertex: start,
                });
            }
        }
        let id = self.regions.len();
        self.regions.push(Region {
            level: expr.level,
            parent,
            root: usize::MAX,
            children: Vec::new(),
            own: Vec::new(),
        });
        if let Some(b) = expr.branches.iter().find(|b| b.word.is_empty()) {
            let c = self.region(&b.child, start, Some((id, BranchRef::Word(0))))?;
            self.regions[id].children.push(c);
            self.regions[id].root = self.regions[c].root;
            return Ok(id);
        }
        let mut ids: HashMap<(Node, VertexId), VertexId> = HashMap::new();
        let mut ray_children: HashMap<(usize, VertexId), VertexId> = HashMap::new();
        let mut work = Vec::new();
        let first = if let Some(r) = expr.rays.iter().position(|r| r.head.is_empty()) {
            Node::Ray(r)
        } else if expr.branches.is_empty() && expr.rays.is_empty() {
            Node::Outside
        } else {
            Node::Trie(Vec::new())
        };
        let root = self.alloc(start, id);
        ids.insert((first.clone(), start), root);
        self.regions[id].root = root;
        work.push((first, start, root));
        while let Some((node, x, v)) = work.pop() {
            let mut out = Vec::new();
            for e in self.arena.edges(x).to_vec() {
                let (l, y) = (e.label, e.target);
                let next = match &node {
                    Node::Outside => Node::Outside,
                    Node::Ray(r) => match l {
                        0 => Node::Ray(*r),
                        1 => {
                            let t = match ray_children.get(&(*r, y)) {
                                Some(&t) => t,
                                None => {
                                    let parent = Some((id, BranchRef::Ray(*r)));
                                    let c = self.region(&expr.rays[*r].child, y, parent)?;
                                    self.regions[id].children.push(c);
                                    let t = self.regions[c].root;
                                    ray_children.insert((*r, y), t);
                                    t
                                }
                            };
                            out.push((l, t));
                            continue;
                        }
                        _ => Node::Outside,
                    },
                    Node::Trie(p) => {
                        let mut q = p.clone();
                        q.push(l);
                        if let Some(i) = expr.branches.iter().position(|b| b.word == q) {
                            let c = self.region(
                                &expr.branches[i].child,
                                y,
                                Some((id, BranchRef::Word(i))),
                            )?;
                            self.regions[id].children.push(c);
                            out.push((l, self.regions[c].root));
                            continue;
                        } else if let Some(r) = expr.rays.iter().position(|r| r.head == q) {
                            Node::Ray(r)
                        } else if expr
                            .branches
                            .iter()
                            .map(|b| &b.word)
                            .chain(expr.rays.iter().map(|r| &r.head))
                            .any(|w| w.starts_with(&q))
                        {
                            Node::Trie(q)
                        } else {
                            Node::Outside
                        }
                    }
                };
                let key = (next.clone(), y);
                let t = match ids.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = self.alloc(y, id);
                        ids.insert(key, t);
                        work.push((next, y, t));
                        t
                    }
                };
                out.push((l, t));
            }
            self.edges[v] = out;
        }
        Ok(id)
    }
}

/// Realises `set` over `arena` as a chain of the same level on an unfolded
/// arena in which each branch word leads into its own fresh copy.
pub fn prefix_to_chain(set: &PrefixSet, arena: &Arena) -> Result<Unfolding> {
    let mut b = Builder {
        arena,
        owners: Vec::new(),
        edges: Vec::new(),
        origin: Vec::new(),
        region_of: Vec::new(),
        regions: Vec::new(),
    };
    b.region(&set.expr, arena.root(), None)?;
    // Regions are numbered parents first, so a reverse sweep sees children
    // before their parents.
    let n = b.regions.len();
    let mut all: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); n];
    let mut targets: Vec<Vec<BTreeSet<VertexId>>> = vec![Vec::new(); n];
    for id in (0..n).rev() {
        let r = &b.regions[id];
        let mut ts = vec![BTreeSet::new(); r.level];
        let mut mine: BTreeSet<VertexId> = r.own.iter().copied().collect();
        for &c in &r.children {
            for (beta, t) in targets[c].iter().enumerate() {
                ts[beta].extend(t);
            }
            ts[r.level - 1].extend(&all[c]);
            mine.extend(&all[c]);
        }
        all[id] = mine;
        targets[id] = ts;
    }
    let root = b.regions[0].root;
    let raw = RawArena {
        players: arena.players(),
        root,
        vertices: b.owners.into_iter().zip(b.edges).collect(),
    };
    let unfolded = validate_arena(&raw)?;
    let chain = DiffChain::new(std::mem::take(&mut targets[0]))?;
    Ok(Unfolding {
        arena: unfolded,
        chain,
        complemented: set.complemented,
        origin: b.origin,
        regions: b.regions,
        region_of: b.region_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointclass::chain::eval_membership;

    fn binary_arena() -> Arena {
        // Two vertices, both with labels 0 and 1, so every binary word is a play.
        let raw = RawArena {
            players: 2,
            root: 0,
            vertices: vec![(0, vec![(0, 0), (1, 1)]), (1, vec![(0, 0), (1, 1)])],
        };
        validate_arena(&raw).unwrap()
    }

    fn play(a: &Arena, stem: &[Label], cycle: &[Label]) -> Play {
        Play::from_labels(a, a.root(), stem, cycle).unwrap()
    }

    fn branch(word: &[Label], child: PrefixExpr) -> Branch {
        Branch {
            word: word.to_vec(),
            child,
        }
    }

    #[test]
    fn level_one_epsilon_branch_is_everything() {
        let a = binary_arena();
        let e = PrefixExpr::new(1, vec![branch(&[], PrefixExpr::empty(0))], vec![]).unwrap();
        for (s, c) in [(&[][..], &[0][..]), (&[1, 0], &[1])] {
            assert!(eval_prefix(&e, &play(&a, s, c)));
        }
        let none = PrefixExpr::empty(1);
        assert!(!eval_prefix(&none, &play(&a, &[], &[1])));
    }

    #[test]
    fn comparable_words_rejected() {
        let z = PrefixExpr::empty(0);
        assert!(PrefixExpr::new(
            1,
            vec![branch(&[0], z.clone()), branch(&[0, 1], z.clone())],
            vec![]
        )
        .is_err());
        assert!(PrefixExpr::new(
            1,
            vec![branch(&[0], z.clone()), branch(&[0], z.clone())],
            vec![]
        )
        .is_err());
        assert!(PrefixExpr::new(1, vec![branch(&[0], z.clone()), branch(&[1], z)], vec![]).is_ok());
    }

    #[test]
    fn level_one_chain_targets_the_cone() {
        let a = binary_arena();
        let e = PrefixExpr::new(1, vec![branch(&[1, 1], PrefixExpr::empty(0))], vec![]).unwrap();
        let u = prefix_to_chain(&PrefixSet::plain(e), &a).unwrap();
        assert_eq!(u.chain.alpha(), 1);
        let cone = &u.chain.targets()[0];
        let child = u.regions[0].children[0];
        assert_eq!(cone.len(), u.regions[child].own.len());
        assert!(cone.contains(&u.regions[child].root));
    }

    #[test]
    fn level_zero_chain_is_empty() {
        let a = binary_arena();
        let u = prefix_to_chain(&PrefixSet::plain(PrefixExpr::empty(0)), &a).unwrap();
        assert_eq!(u.chain.alpha(), 0);
        assert!(!eval_membership(
            &u.chain,
            &u.transport(&play(&a, &[], &[1])).unwrap()
        ));
    }

    #[test]
    fn unrealizable_word_is_reported() {
        let raw = RawArena {
            players: 1,
            root: 0,
            vertices: vec![(0, vec![(0, 0)])],
        };
        let a = validate_arena(&raw).unwrap();
        let e = PrefixExpr::new(1, vec![branch(&[1], PrefixExpr::empty(0))], vec![]).unwrap();
        assert!(matches!(
            prefix_to_chain(&PrefixSet::plain(e), &a),
            Err(Error::UnrealizableWord { vertex: 0, .. })
        ));
    }

    #[test]
    fn shift_union_single_expression_prefixes_one() {
        let a = binary_arena();
        let e = PrefixExpr::new(1, vec![branch(&[0], PrefixExpr::empty(0))], vec![]).unwrap();
        let s = shift_union(&[PrefixSet::plain(e)], false).unwrap();
        assert!(s.eval(&play(&a, &[1, 0], &[1])));
        assert!(!s.eval(&play(&a, &[1, 1], &[1])));
        assert!(!s.eval(&play(&a, &[0, 0], &[1])));
    }

    #[test]
    fn shift_union_with_point_on_empty_list_is_the_zero_play() {
        let a = binary_arena();
        let s = shift_union(&[], true).unwrap();
        assert!(s.eval(&play(&a, &[], &[0])));
        assert!(!s.eval(&play(&a, &[0, 0, 0], &[1, 0])));
        assert!(!s.eval(&play(&a, &[], &[0, 0, 1])));
        assert!(shift_union(&[], false).is_err());
    }

    #[test]
    fn ray_regions_realise_the_point() {
        let a = binary_arena();
        let s = shift_union(&[], true).unwrap();
        let u = prefix_to_chain(&s, &a).unwrap();
        for (st, cy) in [(&[][..], &[0][..]), (&[0, 0], &[1]), (&[1], &[0])] {
            let p = play(&a, st, cy);
            let q = u.transport(&p).unwrap();
            assert_eq!(eval_membership(&u.chain, &q) != u.complemented, s.eval(&p));
        }
    }

    #[test]
    fn transport_keeps_labels() {
        let a = binary_arena();
        let e = PrefixExpr::new(1, vec![branch(&[0, 1], PrefixExpr::empty(0))], vec![]).unwrap();
        let u = prefix_to_chain(&PrefixSet::plain(e), &a).unwrap();
        let p = play(&a, &[0, 1, 1], &[0, 1]);
        let q = u.transport(&p).unwrap();
        for i in 0..12 {
            assert_eq!(p.label_at(i), q.label_at(i));
            assert_eq!(u.origin[q.step_at(i).vertex], p.step_at(i).vertex);
        }
    }
}

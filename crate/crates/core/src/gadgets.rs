//! Lower-bound game constructions, each with an evaluator for the answer
//! its winner or equilibrium encodes.
//!
//! A natural-number pick is a unary run `0^k 1` owned by the picking
//! player. Running past the bound `B` enters a 0-self-loop, which counts as
//! refusing to pick. Component games are copied into the combined arena with
//! their chains shifted into blocks of a common level.

use std::collections::{BTreeMap, BTreeSet};

use crate::arena::{validate_arena, Arena, Label, RawArena, VertexId};
use crate::equilibria::EquilibriumCertificate;
use crate::error::{Error, Result};
use crate::game::{Condition, MultiOutcomeGame, Side, StrategyProfile, WinLoseGame};
use crate::pointclass::{par, DiffChain, LeveledValuation};
use crate::product::ProductState;
use crate::winlose::{Realized, SolvedGame};

/// Largest list accepted by [`gen_announce`]; the combined level grows with
/// the list length.
pub const MAX_ANNOUNCE: usize = 4;

const TOP: usize = usize::MAX;

/// Cantor pairing `⟨a, b⟩ = (a + b)(a + b + 1)/2 + b`. Panics on overflow.
pub fn pair(a: u64, b: u64) -> u64 {
    checked_pair(a, b).expect("pairing overflow")
}

fn checked_pair(a: u64, b: u64) -> Option<u64> {
    let s = a.checked_add(b)?;
    let t = if s % 2 == 0 {
        (s / 2).checked_mul(s + 1)?
    } else {
        s.checked_mul(s.div_ceil(2))?
    };
    t.checked_add(b)
}

pub fn unpair(z: u64) -> (u64, u64) {
    let w = (((8 * z as u128 + 1).isqrt() - 1) / 2) as u64;
    let t = w * (w + 1) / 2;
    let b = z - t;
    (w - b, b)
}

/// Left-associated tuple code: `⟨k1⟩ = k1`, `⟨k1, …, kn⟩ = ⟨⟨k1, …, k(n-1)⟩, kn⟩`.
pub fn tuple(ks: &[u64]) -> u64 {
    checked_tuple(ks).expect("tuple code overflow")
}

fn checked_tuple(ks: &[u64]) -> Option<u64> {
    let (&first, rest) = ks.split_first()?;
    rest.iter().try_fold(first, |acc, &k| checked_pair(acc, k))
}

pub fn untuple(code: u64, n: usize) -> Vec<u64> {
    let mut out = vec![0; n];
    let mut z = code;
    for i in (1..n).rev() {
        let (a, b) = unpair(z);
        out[i] = b;
        z = a;
    }
    if n > 0 {
        out[0] = z;
    }
    out
}

/// A bit sequence indexed by tuple codes, given on a finite support with a
/// constant value elsewhere. Quantifiers range over `0..=bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinBitInput {
    pub arity: usize,
    pub bound: u64,
    pub tail: bool,
    pub assignments: BTreeMap<u64, bool>,
}

impl FinBitInput {
    pub fn new(
        arity: usize,
        bound: u64,
        tail: bool,
        assignments: BTreeMap<u64, bool>,
    ) -> Result<Self> {
        let p = FinBitInput {
            arity,
            bound,
            tail,
            assignments,
        };
        p.validate()?;
        Ok(p)
    }

    /// Codes of the support are below this.
    pub fn code_bound(&self) -> Option<u64> {
        checked_tuple(&vec![self.bound; self.arity])?.checked_add(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.arity == 0 {
            return Err(Error::InvalidGame("bit input of arity 0".into()));
        }
        let cb = self
            .code_bound()
            .ok_or_else(|| Error::InvalidGame("bound too large for tuple codes".into()))?;
        for &code in self.assignments.keys() {
            if code >= cb {
                return Err(Error::InvalidGame(format!(
                    "support code {code} is not below the code bound {cb}"
                )));
            }
            if untuple(code, self.arity).iter().any(|&k| k > self.bound) {
                return Err(Error::InvalidGame(format!(
                    "support code {code} has a component above {}",
                    self.bound
                )));
            }
        }
        Ok(())
    }

    pub fn bit(&self, ks: &[u64]) -> bool {
        self.assignments
            .get(&tuple(ks))
            .copied()
            .unwrap_or(self.tail)
    }
}

fn check_arity(n: usize, p: &FinBitInput) -> Result<()> {
    if n == 0 || p.arity != n {
        return Err(Error::InvalidGame(format!(
            "expected a bit input of arity {n}, got {}",
            p.arity
        )));
    }
    p.validate()
}

/// `∀k1 ∃k2 … ♮kn p(⟨k1, …, kn⟩) = 1` over `0..=B`; the last quantifier is
/// universal for odd `n`.
pub fn eval_sigma_lem(n: usize, p: &FinBitInput) -> Result<bool> {
    check_arity(n, p)?;
    fn block(p: &FinBitInput, ks: &mut Vec<u64>) -> bool {
        if ks.len() == p.arity {
            return p.bit(ks);
        }
        let universal = ks.len() % 2 == 0;
        let mut result = universal;
        for k in 0..=p.bound {
            ks.push(k);
            let v = block(p, ks);
            ks.pop();
            if v != universal {
                result = v;
                break;
            }
        }
        result
    }
    Ok(block(p, &mut Vec::with_capacity(n)))
}

/// Indices `i` whose block holds for `p_i`; at least one must.
pub fn eval_sigma_llpo(n: usize, pair: &(FinBitInput, FinBitInput)) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for (i, p) in [&pair.0, &pair.1].into_iter().enumerate() {
        if eval_sigma_lem(n, p)? {
            out.insert(i);
        }
    }
    if out.is_empty() {
        return Err(Error::Promise(
            "neither side of the pair satisfies its block".into(),
        ));
    }
    Ok(out)
}

/// Arena under construction with a chain level per vertex (`TOP` for no
/// target).
struct Assembly {
    raw: RawArena,
    levels: Vec<usize>,
}

impl Assembly {
    fn new(players: usize) -> Self {
        Assembly {
            raw: RawArena::new(players, 0),
            levels: Vec::new(),
        }
    }

    fn vertex(&mut self, owner: usize, level: usize) -> VertexId {
        self.levels.push(level);
        self.raw.add_vertex(owner)
    }

    fn edge(&mut self, from: VertexId, label: Label, to: VertexId) {
        self.raw.add_edge(from, label, to);
    }

    fn sink(&mut self, level: usize) -> VertexId {
        let v = self.vertex(0, level);
        self.edge(v, 0, v);
        v
    }

    /// Copies `arena` with per-vertex levels; returns the offset of its
    /// vertices (its root lands at `offset + root`).
    fn embed(&mut self, arena: &Arena, levels: impl Fn(VertexId) -> usize) -> VertexId {
        let offset = self.levels.len();
        for v in arena.vertices() {
            self.vertex(arena.owner(v), levels(v));
        }
        for v in arena.vertices() {
            for e in arena.edges(v) {
                self.edge(offset + v, e.label, offset + e.target);
            }
        }
        offset
    }

    fn finish(self, alpha: usize) -> Result<(Arena, DiffChain)> {
        let arena = validate_arena(&self.raw)?;
        let levels: Vec<usize> = self.levels.iter().map(|&l| l.min(alpha)).collect();
        Ok((arena, DiffChain::from_levels(&levels, alpha)))
    }
}

/// Who picks `k_j` (1-based): player 2 for odd `j`.
fn picker(j: usize) -> usize {
    if j % 2 == 1 {
        1
    } else {
        0
    }
}

struct LemSinks {
    /// Created on first use; no final pick may reach it.
    good: Option<VertexId>,
    none: VertexId,
}

/// The unary run for `k_j` starting at `start`, and everything below it.
/// The vertex reached by picking `k_j < n` has level `n - j`; a final pick
/// whose bit is the one the final picker wants reaches `good` (level 0).
fn lem_run(
    asm: &mut Assembly,
    n: usize,
    p: &FinBitInput,
    sinks: &mut LemSinks,
    ks: &mut Vec<u64>,
    start: VertexId,
) {
    let j = ks.len() + 1;
    let owner = picker(j);
    let mut run = vec![start];
    for _ in 0..p.bound {
        run.push(asm.vertex(owner, TOP));
    }
    for (k, &r) in run.iter().enumerate() {
        let next = run.get(k + 1).copied().unwrap_or(sinks.none);
        asm.edge(r, 0, next);
        ks.push(k as u64);
        let picked = if j < n {
            let v = asm.vertex(picker(j + 1), n - j);
            lem_run(asm, n, p, sinks, ks, v);
            v
        } else {
            // Player 1 wants a 1 when it picks last (n even), player 2 a 0.
            let want = n % 2 == 0;
            if p.bit(ks) == want {
                *sinks.good.get_or_insert_with(|| asm.sink(0))
            } else {
                sinks.none
            }
        };
        ks.pop();
        asm.edge(r, 1, picked);
    }
}

/// Adds the LEM pick tree for `p` below a new root owned by the first
/// picker; returns that root.
fn lem_tree(asm: &mut Assembly, n: usize, p: &FinBitInput, sinks: &mut LemSinks) -> VertexId {
    let root = asm.vertex(picker(1), TOP);
    lem_run(asm, n, p, sinks, &mut Vec::with_capacity(n), root);
    root
}

fn lem_sinks(asm: &mut Assembly) -> LemSinks {
    LemSinks {
        good: None,
        none: asm.sink(TOP),
    }
}

/// The alternating pick game for `Σn-LEM`: player 1 wins iff the block
/// holds.
///
/// Player 1's winning set is the complement of a level-`n` chain: a play
/// whose deepest pick is `k_j` has least index `n - j` (`n` without picks,
/// `0` for a wanted final bit), and player 1 wins iff that index has the
/// parity of `n`.
pub fn gen_lem_game(n: usize, p: &FinBitInput) -> Result<WinLoseGame> {
    check_arity(n, p)?;
    let mut asm = Assembly::new(2);
    let root = asm.vertex(picker(1), TOP);
    let mut sinks = lem_sinks(&mut asm);
    lem_run(&mut asm, n, p, &mut sinks, &mut Vec::with_capacity(n), root);
    let (arena, chain) = asm.finish(n)?;
    WinLoseGame::new(
        arena,
        Condition::Chain {
            chain,
            complemented: true,
        },
    )
}

/// Parallel `Σn-LLPO` as a game: player 2 picks a pair index, player 1 an
/// answer `i`, then the LEM game on the chosen input is played.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LlpoGame {
    pub game: WinLoseGame,
    pub arity: usize,
    /// Vertex where player 1 answers for pair `j`.
    pub choice_vertices: Vec<VertexId>,
}

pub fn gen_llpo_game(n: usize, pairs: &[(FinBitInput, FinBitInput)]) -> Result<LlpoGame> {
    if pairs.is_empty() {
        return Err(Error::Construction("no input pairs".into()));
    }
    for pr in pairs {
        eval_sigma_llpo(n, pr)?;
    }
    let mut asm = Assembly::new(2);
    let run: Vec<VertexId> = (0..pairs.len()).map(|_| asm.vertex(1, TOP)).collect();
    let mut sinks = lem_sinks(&mut asm);
    let mut choice_vertices = Vec::new();
    for (j, (p0, p1)) in pairs.iter().enumerate() {
        asm.edge(run[j], 0, run.get(j + 1).copied().unwrap_or(sinks.none));
        let c = asm.vertex(0, TOP);
        asm.edge(run[j], 1, c);
        choice_vertices.push(c);
        for (i, p) in [p0, p1].into_iter().enumerate() {
            let sub = lem_tree(&mut asm, n, p, &mut sinks);
            asm.edge(c, i as Label, sub);
        }
    }
    let (arena, chain) = asm.finish(n)?;
    let game = WinLoseGame::new(
        arena,
        Condition::Chain {
            chain,
            complemented: true,
        },
    )?;
    Ok(LlpoGame {
        game,
        arity: n,
        choice_vertices,
    })
}

impl LlpoGame {
    /// Player 1's answer for each pair under the solved strategy.
    pub fn extract(&self, solved: &SolvedGame) -> Result<Vec<usize>> {
        if solved.root_winner() != Side::One {
            return Err(Error::Promise(
                "player 1 does not win the parallel game".into(),
            ));
        }
        let p = solved.product();
        self.choice_vertices
            .iter()
            .map(|&v| {
                let i = p.require(ProductState {
                    vertex: v,
                    counter: self.arity,
                })?;
                Ok(solved.solution.moves[i] as usize)
            })
            .collect()
    }
}

/// A component realized as a chain and shifted to the common level `a`:
/// player 1 wins a play iff its least index `m` within the block satisfies
/// `par(m) != par(a)`. A complemented chain of level `α` becomes plain by
/// adding the whole copy as a top target.
struct Aligned {
    arena: Arena,
    levels: Vec<usize>,
    shift: usize,
}

fn natural_level(r: &Realized) -> usize {
    r.chain.alpha() + usize::from(r.compiled.complemented)
}

fn align(r: &Realized, a: usize) -> Aligned {
    let shift = a - natural_level(r);
    let levels = r
        .chain
        .levels(r.arena.vertex_count())
        .into_iter()
        .map(|l| l + shift)
        .collect();
    Aligned {
        arena: r.arena.clone(),
        levels,
        shift,
    }
}

fn realize_all(games: &[WinLoseGame]) -> Result<(Vec<Realized>, usize)> {
    if games.is_empty() {
        return Err(Error::Construction("empty game list".into()));
    }
    let rs = games
        .iter()
        .map(Realized::new)
        .collect::<Result<Vec<_>>>()?;
    let a = rs.iter().map(natural_level).max().unwrap_or(0);
    Ok((rs, a))
}

fn block_wins(m: usize, a: usize) -> bool {
    par(m) != par(a)
}

/// Player 2 picks one of `count` entries by a unary run; running past the
/// last one is a refusal. Returns the run vertices and the refusal sink.
fn index_run(asm: &mut Assembly, count: usize) -> (Vec<VertexId>, VertexId) {
    let run: Vec<VertexId> = (0..count).map(|_| asm.vertex(1, TOP)).collect();
    let refusal = asm.sink(TOP);
    for j in 0..count {
        asm.edge(run[j], 0, run.get(j + 1).copied().unwrap_or(refusal));
    }
    (run, refusal)
}

/// Player 2 picks a component and it is played; player 1 wins iff it wins
/// every component.
pub fn gen_hat(games: &[WinLoseGame]) -> Result<WinLoseGame> {
    let (rs, a) = realize_all(games)?;
    let mut asm = Assembly::new(2);
    let (run, _) = index_run(&mut asm, rs.len());
    for (j, r) in rs.iter().enumerate() {
        let al = align(r, a);
        let off = asm.embed(&al.arena, |v| al.levels[v]);
        asm.edge(run[j], 1, off + al.arena.root());
    }
    // Copies sit at indices 0..=a; refusal leaves the least index at a + 1.
    let (arena, chain) = asm.finish(a + 1)?;
    WinLoseGame::new(
        arena,
        Condition::Chain {
            chain,
            complemented: true,
        },
    )
}

/// Announce-then-choose game over `n` components with outcomes `-n..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnounceGame {
    pub game: MultiOutcomeGame,
    pub count: usize,
}

/// What an equilibrium announces and its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Announcement {
    pub announced: BTreeSet<usize>,
    pub value: i64,
}

/// Player 1 announces a set `S` bit by bit (label 1 includes component
/// `i`); an empty announcement ends with value 0; otherwise player 2 picks
/// `i ∈ S` (edge label `i`) and component `i` is played for `±|S|`.
pub fn gen_announce(games: &[WinLoseGame]) -> Result<AnnounceGame> {
    let n = games.len();
    if n > MAX_ANNOUNCE {
        return Err(Error::CapExceeded {
            what: "announced games",
            size: n as u128,
            cap: MAX_ANNOUNCE as u128,
        });
    }
    let (rs, a) = realize_all(games)?;
    let aligned: Vec<Aligned> = rs.iter().map(|r| align(r, a)).collect();
    let block = a + 1;
    let alpha = n * block;
    let mut asm = Assembly::new(2);
    let mut zero = None;
    fn node(
        asm: &mut Assembly,
        aligned: &[Aligned],
        block: usize,
        zero: &mut Option<VertexId>,
        set: &mut Vec<usize>,
    ) -> VertexId {
        let depth = set.len();
        let n = aligned.len();
        if depth < n {
            let v = asm.vertex(0, TOP);
            set.push(0);
            let l = node(asm, aligned, block, zero, set);
            set.pop();
            asm.edge(v, 0, l);
            set.push(1);
            let r = node(asm, aligned, block, zero, set);
            set.pop();
            asm.edge(v, 1, r);
            return v;
        }
        let members: Vec<usize> = (0..n).filter(|&i| set[i] == 1).collect();
        if members.is_empty() {
            return *zero.get_or_insert_with(|| asm.sink(TOP));
        }
        let base = (members.len() - 1) * block;
        let chooser = asm.vertex(1, TOP);
        for &i in &members {
            let al = &aligned[i];
            let off = asm.embed(&al.arena, |v| base + al.levels[v]);
            asm.edge(chooser, i as Label, off + al.arena.root());
        }
        chooser
    }
    node(
        &mut asm,
        &aligned,
        block,
        &mut zero,
        &mut Vec::with_capacity(n),
    );
    let (arena, chain) = asm.finish(alpha)?;
    let index = |v: i64| (v + n as i64) as usize;
    let mut labels = vec![index(0); alpha + 1];
    for s in 1..=n {
        for m in 0..block {
            let v = if block_wins(m, a) {
                s as i64
            } else {
                -(s as i64)
            };
            labels[(s - 1) * block + m] = index(v);
        }
    }
    let valuation = LeveledValuation::new(chain, labels)?;
    let outcomes = (-(n as i64)..=n as i64).map(|v| v.to_string()).collect();
    let up: Vec<usize> = (0..=2 * n).collect();
    let down = up.iter().rev().copied().collect();
    let game = MultiOutcomeGame::new(arena, outcomes, valuation, vec![up, down])?;
    Ok(AnnounceGame { game, count: n })
}

impl AnnounceGame {
    pub fn decode(&self, cert: &EquilibriumCertificate) -> Announcement {
        let announced = (0..self.count)
            .filter(|&i| cert.play.label_at(i) == 1)
            .collect();
        Announcement {
            announced,
            value: cert.outcome as i64 - self.count as i64,
        }
    }
}

/// An antagonistic game `G0` and a win/lose game `G1` under one root where
/// player 2 picks which is played.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjoinGame {
    pub game: MultiOutcomeGame,
    pub g0_offset: VertexId,
    pub g0_vertices: usize,
    pub g1_offset: VertexId,
    pub g1_vertices: usize,
    /// Combined counter minus the counter of the realized `G1` product.
    pub g1_counter_shift: usize,
}

/// The parts of an equilibrium of an adjoined game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjoinDecoding {
    pub enters_g0: bool,
    /// Profile on the product of `G0`.
    pub g0_profile: StrategyProfile,
    /// Player 1's moves on the product of the realized `G1`.
    pub g1_moves: BTreeMap<ProductState, Label>,
}

/// Outcomes are those of `G0` followed by `G1`'s loss and win for player 1,
/// ranked below and above every outcome of `G0` by player 1. Label 0 at the
/// root enters `G0`, label 1 enters `G1`.
pub fn gen_adjoin(g0: &MultiOutcomeGame, g1: &WinLoseGame) -> Result<AdjoinGame> {
    if !g0.is_antagonistic() {
        return Err(Error::NotAntagonistic);
    }
    let r1 = Realized::new(g1)?;
    let a1 = natural_level(&r1);
    let al = align(&r1, a1);
    let a0 = g0.valuation.alpha();
    let base = a0 + 1;
    let alpha = base + a1 + 1;
    let mut asm = Assembly::new(2);
    let root = asm.vertex(1, TOP);
    let levels0 = g0.valuation.chain.levels(g0.arena.vertex_count());
    let off0 = asm.embed(&g0.arena, |v| levels0[v]);
    let off1 = asm.embed(&al.arena, |v| base + al.levels[v]);
    asm.edge(root, 0, off0 + g0.arena.root());
    asm.edge(root, 1, off1 + al.arena.root());
    let (arena, chain) = asm.finish(alpha)?;
    let k = g0.outcome_count();
    let (lost, won) = (k, k + 1);
    let mut labels = g0.valuation.labels.clone();
    labels.extend((0..=a1).map(|m| if block_wins(m, a1) { won } else { lost }));
    labels.push(lost);
    let valuation = LeveledValuation::new(chain, labels)?;
    let mut outcomes = g0.outcomes.clone();
    for name in ["g1-lost", "g1-won"] {
        if outcomes.iter().any(|o| o == name) {
            return Err(Error::InvalidGame(format!(
                "outcome name {name} is reserved"
            )));
        }
        outcomes.push(name.into());
    }
    let mut pa = vec![lost];
    pa.extend(&g0.preferences[0]);
    pa.push(won);
    let pb = pa.iter().rev().copied().collect();
    let game = MultiOutcomeGame::new(arena, outcomes, valuation, vec![pa, pb])?;
    Ok(AdjoinGame {
        game,
        g0_offset: off0,
        g0_vertices: g0.arena.vertex_count(),
        g1_offset: off1,
        g1_vertices: al.arena.vertex_count(),
        g1_counter_shift: base + al.shift,
    })
}

impl AdjoinGame {
    fn g0_map(&self, m: &BTreeMap<ProductState, Label>) -> BTreeMap<ProductState, Label> {
        m.iter()
            .filter(|(s, _)| {
                (self.g0_offset..self.g0_offset + self.g0_vertices).contains(&s.vertex)
            })
            .map(|(s, &l)| {
                (
                    ProductState {
                        vertex: s.vertex - self.g0_offset,
                        counter: s.counter,
                    },
                    l,
                )
            })
            .collect()
    }

    pub fn decode(&self, cert: &EquilibriumCertificate) -> AdjoinDecoding {
        let p = &cert.profile;
        let g0_profile = StrategyProfile {
            moves: self.g0_map(&p.moves),
            threats: p
                .threats
                .iter()
                .map(|(&pl, m)| (pl, self.g0_map(m)))
                .collect(),
        };
        let g1_moves = p
            .moves
            .iter()
            .filter(|(s, _)| {
                (self.g1_offset..self.g1_offset + self.g1_vertices).contains(&s.vertex)
            })
            .map(|(s, &l)| {
                let t = ProductState {
                    vertex: s.vertex - self.g1_offset,
                    counter: s.counter - self.g1_counter_shift,
                };
                (t, l)
            })
            .collect();
        AdjoinDecoding {
            enters_g0: cert.play.label_at(0) == 0,
            g0_profile,
            g1_moves,
        }
    }
}

/// Player 1 moves right along a chain or leaves it at step `i` to choose
/// between playing component `i` and taking ½; always moving right gives 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeChainGame {
    pub game: MultiOutcomeGame,
    /// Vertex where player 1 chooses between component `i` (label 0) and ½.
    pub decision_vertices: Vec<VertexId>,
}

/// Outcome indices: 0 is "0", 1 is "1/2", 2 is "1".
pub fn gen_spe_chain(games: &[WinLoseGame]) -> Result<SpeChainGame> {
    let (rs, a) = realize_all(games)?;
    let n = rs.len();
    let half_level = a + 1;
    let alpha = a + 2;
    let mut asm = Assembly::new(2);
    let chain_nodes: Vec<VertexId> = (0..n).map(|_| asm.vertex(0, TOP)).collect();
    let tail = asm.sink(TOP);
    let half = asm.sink(half_level);
    let mut decision_vertices = Vec::with_capacity(n);
    for (i, r) in rs.iter().enumerate() {
        let d = asm.vertex(0, TOP);
        decision_vertices.push(d);
        let al = align(r, a);
        let off = asm.embed(&al.arena, |v| al.levels[v]);
        asm.edge(chain_nodes[i], 0, d);
        asm.edge(
            chain_nodes[i],
            1,
            chain_nodes.get(i + 1).copied().unwrap_or(tail),
        );
        asm.edge(d, 0, off + al.arena.root());
        asm.edge(d, 1, half);
    }
    let (arena, chain) = asm.finish(alpha)?;
    let mut labels: Vec<usize> = (0..=a)
        .map(|m| if block_wins(m, a) { 2 } else { 0 })
        .collect();
    labels.push(1);
    labels.push(2);
    let valuation = LeveledValuation::new(chain, labels)?;
    let outcomes = vec!["0".into(), "1/2".into(), "1".into()];
    let game = MultiOutcomeGame::new(
        arena,
        outcomes,
        valuation,
        vec![vec![0, 1, 2], vec![2, 1, 0]],
    )?;
    Ok(SpeChainGame {
        game,
        decision_vertices,
    })
}

impl SpeChainGame {
    /// Winner of each component as read off the decisions of `profile`:
    /// entering the component means player 1 wins it.
    pub fn decode(&self, profile: &StrategyProfile) -> Result<Vec<Side>> {
        let alpha = self.game.valuation.alpha();
        self.decision_vertices
            .iter()
            .map(|&v| {
                let s = ProductState {
                    vertex: v,
                    counter: alpha,
                };
                let l = *profile.moves.get(&s).ok_or(Error::MissingMove {
                    vertex: v,
                    counter: alpha,
                })?;
                Ok(if l == 0 { Side::One } else { Side::Two })
            })
            .collect()
    }
}

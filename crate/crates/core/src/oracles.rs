//! Oracle primitives on finitely presented inputs, a trace of their calls,
//! pipeline combinators, and instrumented solvers in which every use of the
//! non-clopen part of a game goes through a primitive.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::arena::Label;
use crate::equilibria::{
    certificate, coalition_product, ne_ap, solve_threshold, spe, EquilibriumCertificate,
};
use crate::error::{Error, Result};
use crate::game::{MultiOutcomeGame, Side, StrategyProfile, WinLoseGame};
use crate::product::Product;
use crate::winlose::{
    attractor, attractor_within, solve, solve_weak, solve_weak_staged, Realized, Solution,
};

/// Largest removal list a strategy tree may need.
pub const TREE_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OracleKind {
    Lpo,
    Llpo,
    CCantor,
    CNat,
    Lim,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::Lpo => "LPO",
            OracleKind::Llpo => "LLPO",
            OracleKind::CCantor => "C-Cantor",
            OracleKind::CNat => "C-N",
            OracleKind::Lim => "Lim",
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRecord {
    pub kind: OracleKind,
    pub payload: usize,
    /// Slash-separated stage path, `-` at top level.
    pub stage: String,
}

/// Append-only log of primitive calls. Stages are entered and left through
/// [`OracleTrace::in_stage`], so tags always nest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleTrace {
    records: Vec<OracleRecord>,
    path: Vec<String>,
}

impl OracleTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[OracleRecord] {
        &self.records
    }

    pub fn kinds(&self) -> Vec<OracleKind> {
        self.records.iter().map(|r| r.kind).collect()
    }

    pub fn count(&self, kind: OracleKind) -> usize {
        self.records.iter().filter(|r| r.kind == kind).count()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn push(&mut self, kind: OracleKind, payload: usize) {
        let stage = if self.path.is_empty() {
            "-".to_string()
        } else {
            self.path.join("/")
        };
        self.records.push(OracleRecord {
            kind,
            payload,
            stage,
        });
    }

    pub fn in_stage<T>(&mut self, tag: impl Into<String>, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(tag.into());
        let out = f(self);
        self.path.pop();
        out
    }

    /// One line per record: `<stage-path> <kind> <payload-size>`.
    pub fn render(&self) -> String {
        self.records
            .iter()
            .map(|r| format!("{} {} {}\n", r.stage, r.kind, r.payload))
            .collect()
    }
}

/// An eventually constant bit stream: `prefix` followed by `tail` forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresentedStream {
    pub prefix: Vec<bool>,
    pub tail: bool,
}

impl PresentedStream {
    pub fn zeros() -> Self {
        PresentedStream {
            prefix: Vec::new(),
            tail: false,
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }
}

/// 1 iff the stream is all zeros.
pub fn lpo(s: &PresentedStream, trace: &mut OracleTrace) -> bool {
    trace.push(OracleKind::Lpo, s.prefix.len());
    !s.tail && s.prefix.iter().all(|&b| !b)
}

/// Some `i ∈ {0, 1}` such that the stream has no 1 at a position of
/// parity `i`, under the promise that it has at most one 1. The lowest such
/// `i` is returned.
pub fn llpo(s: &PresentedStream, trace: &mut OracleTrace) -> Result<usize> {
    trace.push(OracleKind::Llpo, s.prefix.len());
    let ones: Vec<usize> = s
        .prefix
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect();
    if s.tail || ones.len() > 1 {
        return Err(Error::Promise("LLPO input has more than one 1".into()));
    }
    Ok(match ones.first() {
        Some(&i) if i % 2 == 0 => 1,
        _ => 0,
    })
}

/// A closed subset of Cantor space: the infinite paths with no prefix in
/// `removed`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresentedTree {
    pub removed: Vec<Vec<bool>>,
    pub nonempty: bool,
}

/// A point of Cantor space: `word` followed by zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorPoint {
    pub word: Vec<bool>,
}

impl CantorPoint {
    pub fn bit(&self, i: usize) -> bool {
        self.word.get(i).copied().unwrap_or(false)
    }
}

impl PresentedTree {
    /// Leftmost surviving path, if any. Past the longest removed word every
    /// node survives, so a surviving word of that length extends by zeros.
    pub fn leftmost(&self) -> Option<CantorPoint> {
        let depth = self.removed.iter().map(Vec::len).max().unwrap_or(0);
        let removed: HashSet<&[bool]> = self.removed.iter().map(Vec::as_slice).collect();
        let mut word = Vec::with_capacity(depth);
        fn dfs(word: &mut Vec<bool>, depth: usize, removed: &HashSet<&[bool]>) -> bool {
            if removed.contains(word.as_slice()) {
                return false;
            }
            if word.len() == depth {
                return true;
            }
            for b in [false, true] {
                word.push(b);
                if dfs(word, depth, removed) {
                    return true;
                }
                word.pop();
            }
            false
        }
        dfs(&mut word, depth, &removed).then_some(CantorPoint { word })
    }

    /// Whether the point avoids every removed word.
    pub fn contains(&self, p: &CantorPoint) -> bool {
        self.removed
            .iter()
            .all(|w| w.iter().enumerate().any(|(i, &b)| p.bit(i) != b))
    }
}

/// The leftmost point of a closed set promised to be nonempty.
pub fn closed_choice_cantor(t: &PresentedTree, trace: &mut OracleTrace) -> Result<CantorPoint> {
    trace.push(OracleKind::CCantor, t.removed.len());
    if !t.nonempty {
        return Err(Error::Promise(
            "closed choice needs the nonempty promise".into(),
        ));
    }
    t.leftmost()
        .ok_or_else(|| Error::Promise("closed set declared nonempty has no surviving path".into()))
}

/// A co-enumerated set of naturals: everything outside `excluded`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresentedNatSet {
    pub excluded: BTreeSet<u64>,
}

/// Least natural number not excluded.
pub fn c_nat(s: &PresentedNatSet, trace: &mut OracleTrace) -> u64 {
    trace.push(OracleKind::CNat, s.excluded.len());
    (0..)
        .find(|n| !s.excluded.contains(n))
        .expect("finitely many exclusions")
}

/// Limit of a list of approximants. With a declared index the list must be
/// constant from there on; without one the last approximant is returned.
pub fn lim_stage<T: Clone + PartialEq>(
    approximants: &[T],
    stabilized: Option<usize>,
    trace: &mut OracleTrace,
) -> Result<T> {
    trace.push(OracleKind::Lim, approximants.len());
    let last = approximants
        .last()
        .ok_or_else(|| Error::Oracle("no approximants".into()))?;
    if let Some(k) = stabilized {
        if k >= approximants.len() || approximants[k..].iter().any(|a| a != last) {
            return Err(Error::Oracle(format!(
                "approximants are not constant from index {k}"
            )));
        }
    }
    Ok(last.clone())
}

/// Values flowing between pipeline stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Unit,
    Bit(bool),
    Nat(u64),
    Labels(Vec<Label>),
    Stream(PresentedStream),
    Tree(PresentedTree),
    Point(CantorPoint),
    NatSet(PresentedNatSet),
    Approx(Vec<Value>, Option<usize>),
    List(Vec<Value>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Unit => "unit",
            Value::Bit(_) => "bit",
            Value::Nat(_) => "nat",
            Value::Labels(_) => "labels",
            Value::Stream(_) => "stream",
            Value::Tree(_) => "tree",
            Value::Point(_) => "point",
            Value::NatSet(_) => "nat-set",
            Value::Approx(..) => "approximants",
            Value::List(_) => "list",
        }
    }

    pub fn into_list(self) -> Result<Vec<Value>> {
        match self {
            Value::List(v) => Ok(v),
            other => Err(mismatch("list", &other)),
        }
    }
}

fn mismatch(want: &str, got: &Value) -> Error {
    Error::Oracle(format!("stage expects {want}, got {}", got.kind()))
}

pub type KernelFn<'a> = Box<dyn Fn(Value) -> Result<Value> + 'a>;

/// A tree of stages. `Seq` is sequential composition, `Product` runs one
/// stage per component of a list, `Star` and `Batch` run one stage on every
/// member of a list (finite repetition and truncated parallelization), and
/// `Jump` takes the limit of its input before running the inner stage.
pub enum Pipeline<'a> {
    Identity,
    Prim(OracleKind),
    Kernel(String, KernelFn<'a>),
    Seq(Vec<Pipeline<'a>>),
    Product(Vec<Pipeline<'a>>),
    Star(Box<Pipeline<'a>>),
    Batch(Box<Pipeline<'a>>),
    Jump(Box<Pipeline<'a>>),
}

impl fmt::Debug for Pipeline<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pipeline::Identity => write!(f, "id"),
            Pipeline::Prim(k) => write!(f, "{k}"),
            Pipeline::Kernel(name, _) => write!(f, "kernel({name})"),
            Pipeline::Seq(ps) => f.debug_tuple("seq").field(ps).finish(),
            Pipeline::Product(ps) => f.debug_tuple("product").field(ps).finish(),
            Pipeline::Star(p) => f.debug_tuple("star").field(p).finish(),
            Pipeline::Batch(p) => f.debug_tuple("batch").field(p).finish(),
            Pipeline::Jump(p) => f.debug_tuple("jump").field(p).finish(),
        }
    }
}

impl<'a> Pipeline<'a> {
    pub fn kernel(name: &str, f: impl Fn(Value) -> Result<Value> + 'a) -> Self {
        Pipeline::Kernel(name.to_string(), Box::new(f))
    }

    pub fn run(&self, input: Value, trace: &mut OracleTrace) -> Result<Value> {
        match self {
            Pipeline::Identity => Ok(input),
            Pipeline::Prim(k) => apply_prim(*k, input, trace),
            Pipeline::Kernel(_, f) => f(input),
            Pipeline::Seq(stages) => stages.iter().try_fold(input, |v, s| s.run(v, trace)),
            Pipeline::Product(stages) => {
                let items = input.into_list()?;
                if items.len() != stages.len() {
                    return Err(Error::Oracle(format!(
                        "arity mismatch: product of {} stages given {} inputs",
                        stages.len(),
                        items.len()
                    )));
                }
                let out = stages
                    .iter()
                    .zip(items)
                    .enumerate()
                    .map(|(i, (s, v))| trace.in_stage(format!("x{i}"), |t| s.run(v, t)))
                    .collect::<Result<_>>()?;
                Ok(Value::List(out))
            }
            Pipeline::Star(inner) => each(inner, "star", input, trace),
            Pipeline::Batch(inner) => each(inner, "batch", input, trace),
            Pipeline::Jump(inner) => trace.in_stage("jump", |t| {
                let v = apply_prim(OracleKind::Lim, input, t)?;
                inner.run(v, t)
            }),
        }
    }
}

fn each(inner: &Pipeline<'_>, tag: &str, input: Value, trace: &mut OracleTrace) -> Result<Value> {
    let items = input.into_list()?;
    let k = items.len();
    let out = items
        .into_iter()
        .enumerate()
        .map(|(i, v)| trace.in_stage(format!("{tag}{k}.{i}"), |t| inner.run(v, t)))
        .collect::<Result<_>>()?;
    Ok(Value::List(out))
}

fn apply_prim(kind: OracleKind, input: Value, trace: &mut OracleTrace) -> Result<Value> {
    match (kind, input) {
        (OracleKind::Lpo, Value::Stream(s)) => Ok(Value::Bit(lpo(&s, trace))),
        (OracleKind::Llpo, Value::Stream(s)) => Ok(Value::Nat(llpo(&s, trace)? as u64)),
        (OracleKind::CCantor, Value::Tree(t)) => Ok(Value::Point(closed_choice_cantor(&t, trace)?)),
        (OracleKind::CNat, Value::NatSet(s)) => Ok(Value::Nat(c_nat(&s, trace))),
        (OracleKind::Lim, Value::Approx(values, stabilized)) => {
            lim_stage(&values, stabilized, trace)
        }
        (k, other) => {
            let want = match k {
                OracleKind::Lpo | OracleKind::Llpo => "stream",
                OracleKind::CCantor => "tree",
                OracleKind::CNat => "nat-set",
                OracleKind::Lim => "approximants",
            };
            Err(mismatch(want, &other))
        }
    }
}

/// A level-one question about the winner at `from` on a product whose
/// counters are 0 and 1, as an LPO input.
struct Level1Query {
    stream: PresentedStream,
    /// Winner when the stream is all zeros.
    if_zero: Side,
    if_hit: Side,
}

impl Level1Query {
    fn new(product: &Product, accept: &[bool], from: usize) -> Level1Query {
        debug_assert!(accept.len() <= 2);
        let constant = Side::winning(accept[0]);
        if accept.len() == 1 || accept[0] == accept[1] {
            return Level1Query {
                stream: PresentedStream::zeros(),
                if_zero: constant,
                if_hit: constant,
            };
        }
        // Bit t: the reacher has forced counter 0 from `from` within t moves.
        let reacher = constant;
        let target: Vec<bool> = (0..product.len())
            .map(|i| product.counter(i) == 0)
            .collect();
        let attr = attractor(product, reacher, &target);
        let hit = attr.set[from];
        let prefix = (0..product.len())
            .map(|t| hit && attr.rank[from] <= t)
            .collect();
        Level1Query {
            stream: PresentedStream { prefix, tail: hit },
            if_zero: reacher.opponent(),
            if_hit: reacher,
        }
    }

    fn answer(&self, all_zero: bool) -> Side {
        if all_zero {
            self.if_zero
        } else {
            self.if_hit
        }
    }
}

/// Prefix-free code of choice `k` among `deg` successors.
fn choice_code(k: usize, deg: usize) -> Vec<bool> {
    let mut w = vec![true; k];
    if k + 1 < deg {
        w.push(false);
    }
    w
}

/// Presentation of strategies as points of Cantor space: an optional
/// leading winner bit, then the code of one choice per state with more
/// than one successor, in `order`.
struct StrategyCode {
    lead: bool,
    order: Vec<usize>,
}

impl StrategyCode {
    /// The tree of codes in which the lead bit is `lead_bit` (if present)
    /// and every state picks a move from `admissible`.
    fn tree(
        product: &Product,
        lead_bit: Option<bool>,
        admissible: &[Vec<Label>],
    ) -> Result<(StrategyCode, PresentedTree)> {
        let chosen: Vec<usize> = (0..product.len())
            .filter(|&i| product.succ(i).len() > 1)
            .collect();
        let constrained = |i: &usize| admissible[*i].len() < product.succ(*i).len();
        let mut order: Vec<usize> = chosen.iter().copied().filter(constrained).collect();
        order.extend(chosen.iter().copied().filter(|i| !constrained(i)));
        let mut removed = Vec::new();
        let mut survivors = vec![Vec::new()];
        if let Some(b) = lead_bit {
            removed.push(vec![!b]);
            survivors = vec![vec![b]];
        }
        for &i in order.iter().filter(|i| constrained(i)) {
            let succ = product.succ(i);
            let mut next = Vec::new();
            for u in &survivors {
                for (k, &(l, _)) in succ.iter().enumerate() {
                    let mut w = u.clone();
                    w.extend(choice_code(k, succ.len()));
                    if admissible[i].contains(&l) {
                        next.push(w);
                    } else {
                        removed.push(w);
                    }
                }
            }
            survivors = next;
            let size = removed.len().max(survivors.len());
            if size > TREE_CAP {
                return Err(Error::CapExceeded {
                    what: "strategy tree",
                    size: size as u128,
                    cap: TREE_CAP as u128,
                });
            }
        }
        Ok((
            StrategyCode {
                lead: lead_bit.is_some(),
                order,
            },
            PresentedTree {
                removed,
                nonempty: true,
            },
        ))
    }

    /// Lead bit (false when absent) and one move per state.
    fn decode(&self, product: &Product, p: &CantorPoint) -> (bool, Vec<Label>) {
        let mut pos = 0;
        let lead = if self.lead {
            pos = 1;
            p.bit(0)
        } else {
            false
        };
        let mut moves: Vec<Label> = (0..product.len()).map(|i| product.succ(i)[0].0).collect();
        for &i in &self.order {
            let succ = product.succ(i);
            let mut k = 0;
            while k + 1 < succ.len() && p.bit(pos) {
                k += 1;
                pos += 1;
            }
            if k + 1 < succ.len() {
                pos += 1;
            }
            moves[i] = succ[k].0;
        }
        (lead, moves)
    }
}

fn expect_bit(v: Value) -> Result<bool> {
    match v {
        Value::Bit(b) => Ok(b),
        other => Err(mismatch("bit", &other)),
    }
}

/// The classified problems with an instrumented solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Problem {
    /// Winner of an open or closed game.
    Win,
    /// Winner and winning strategy of an open or closed game.
    Det,
    /// Winner and winning strategy of a game of level at most 2.
    DetD2,
    /// Nash equilibrium of an antagonistic game with an open/closed valuation.
    NeAp,
    /// Subgame-perfect equilibrium of an antagonistic game of level at most 1.
    Spe,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::Win,
        Problem::Det,
        Problem::DetD2,
        Problem::NeAp,
        Problem::Spe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Win => "win",
            Problem::Det => "det",
            Problem::DetD2 => "det-d2",
            Problem::NeAp => "ne-ap",
            Problem::Spe => "spe",
        }
    }

    pub fn parse(s: &str) -> Option<Problem> {
        Problem::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Whether the problem takes a multi-outcome game.
    pub fn is_multi(self) -> bool {
        matches!(self, Problem::NeAp | Problem::Spe)
    }

    /// Largest condition level the instrumented solver handles.
    pub fn level_bound(self) -> usize {
        match self {
            Problem::DetD2 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Instance<'g> {
    WinLose(&'g WinLoseGame),
    Multi(&'g MultiOutcomeGame),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Winner(Side),
    Strategy { winner: Side, moves: Vec<Label> },
    Certificate(EquilibriumCertificate),
    Profile(StrategyProfile),
}

/// Switches for instrumented runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Withhold the stabilization index from every limit stage.
    pub redact_stabilization: bool,
}

/// A registry entry: the problem and the trace shape it must produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstrumentedSolver {
    pub problem: Problem,
    pub shape: &'static str,
}

pub fn instrumented_solvers() -> Vec<InstrumentedSolver> {
    Problem::ALL
        .into_iter()
        .map(|problem| InstrumentedSolver {
            problem,
            shape: match problem {
                Problem::Win => "[LPO]",
                Problem::Det => "[C-Cantor]",
                Problem::DetD2 => "[batch(LPO...), C-Cantor]",
                Problem::NeAp => "[LPO x <=2(k-1), C-Cantor]",
                Problem::Spe => "[batch(LPO...), Lim]",
            },
        })
        .collect()
}

impl InstrumentedSolver {
    pub fn run(
        &self,
        inst: Instance<'_>,
        opts: RunOptions,
        trace: &mut OracleTrace,
    ) -> Result<Answer> {
        let name = self.problem.name();
        trace.in_stage(name, |t| match (self.problem, inst) {
            (Problem::Win, Instance::WinLose(g)) => win(g, t),
            (Problem::Det, Instance::WinLose(g)) => det(g, t),
            (Problem::DetD2, Instance::WinLose(g)) => det_d2(g, t),
            (Problem::NeAp, Instance::Multi(g)) => ne_ap_instrumented(g, t),
            (Problem::Spe, Instance::Multi(g)) => spe_instrumented(g, opts, t),
            _ => Err(Error::Unsupported(format!(
                "{name} needs a {}",
                game_kind(self.problem)
            ))),
        })
    }

    /// The direct solver's answer to the same question.
    pub fn direct(&self, inst: Instance<'_>) -> Result<Answer> {
        match (self.problem, inst) {
            (Problem::Win, Instance::WinLose(g)) => Ok(Answer::Winner(solve(g)?.root_winner())),
            (Problem::Det | Problem::DetD2, Instance::WinLose(g)) => {
                let s = solve(g)?;
                Ok(Answer::Strategy {
                    winner: s.root_winner(),
                    moves: s.solution.moves,
                })
            }
            (Problem::NeAp, Instance::Multi(g)) => Ok(Answer::Certificate(ne_ap(g)?)),
            (Problem::Spe, Instance::Multi(g)) => Ok(Answer::Profile(spe(g)?)),
            _ => Err(Error::Unsupported(format!(
                "{} needs a {}",
                self.problem,
                game_kind(self.problem)
            ))),
        }
    }

    /// Checks the trace against the problem's shape; `outcomes` is the
    /// outcome count of the instance (used by ne-ap).
    pub fn check_shape(
        &self,
        trace: &OracleTrace,
        outcomes: usize,
    ) -> std::result::Result<(), String> {
        use OracleKind::*;
        let kinds = trace.kinds();
        let fail = |why: &str| Err(format!("{} trace {:?} {why}", self.problem, kinds));
        let in_batch = |r: &OracleRecord| r.stage.split('/').any(|s| s.starts_with("batch"));
        match self.problem {
            Problem::Win if kinds != [Lpo] => fail("is not [LPO]"),
            Problem::Det if kinds != [CCantor] => fail("is not [C-Cantor]"),
            Problem::DetD2 | Problem::Spe => {
                let last = if self.problem == Problem::Spe {
                    Lim
                } else {
                    CCantor
                };
                let Some((end, batch)) = trace.records().split_last() else {
                    return fail("is empty");
                };
                if end.kind != last {
                    return fail(&format!("does not end in {last}"));
                }
                if batch.iter().any(|r| r.kind != Lpo || !in_batch(r)) {
                    return fail("has a record outside the LPO batch");
                }
                let groups: BTreeSet<&str> = batch
                    .iter()
                    .filter_map(|r| r.stage.split('/').find(|s| s.starts_with("batch")))
                    .collect();
                let group_count = groups
                    .iter()
                    .map(|g| g.split('.').next().unwrap_or(g))
                    .collect::<BTreeSet<_>>()
                    .len();
                if group_count > 1 {
                    return fail("has more than one batch");
                }
                Ok(())
            }
            Problem::NeAp => {
                let bound = 2 * outcomes.saturating_sub(1);
                if trace.count(CCantor) != 1 || kinds.last() != Some(&CCantor) {
                    return fail("does not end in its only C-Cantor record");
                }
                if trace.count(Lpo) + 1 != kinds.len() {
                    return fail("has records other than LPO and C-Cantor");
                }
                if trace.count(Lpo) > bound {
                    return fail(&format!("has more than {bound} LPO records"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn game_kind(p: Problem) -> &'static str {
    if p.is_multi() {
        "multi-outcome game"
    } else {
        "win/lose game"
    }
}

fn realize_bounded(game: &WinLoseGame, bound: usize) -> Result<Realized> {
    let r = Realized::new(game)?;
    if r.compiled.alpha > bound {
        return Err(Error::LevelBound {
            level: r.compiled.alpha,
            bound,
        });
    }
    Ok(r)
}

fn win(game: &WinLoseGame, trace: &mut OracleTrace) -> Result<Answer> {
    let r = realize_bounded(game, 1)?;
    let accept = r.compiled.acceptance();
    let q = Level1Query::new(&r.product, &accept, r.product.root());
    let bit =
        expect_bit(Pipeline::Prim(OracleKind::Lpo).run(Value::Stream(q.stream.clone()), trace)?)?;
    Ok(Answer::Winner(q.answer(bit)))
}

/// Runs the closed-choice stage on a strategy tree and decodes the point.
fn choose_strategy(
    product: &Product,
    lead_bit: Option<bool>,
    admissible: &[Vec<Label>],
    trace: &mut OracleTrace,
) -> Result<(bool, Vec<Label>)> {
    let (code, tree) = StrategyCode::tree(product, lead_bit, admissible)?;
    match Pipeline::Prim(OracleKind::CCantor).run(Value::Tree(tree), trace)? {
        Value::Point(p) => Ok(code.decode(product, &p)),
        other => Err(mismatch("point", &other)),
    }
}

fn det(game: &WinLoseGame, trace: &mut OracleTrace) -> Result<Answer> {
    let r = realize_bounded(game, 1)?;
    let sol = solve_weak(&r.product, &r.compiled.acceptance());
    let root = r.product.root();
    let (bit, moves) = choose_strategy(
        &r.product,
        Some(sol.winner[root] == Side::One),
        &sol.admissible,
        trace,
    )?;
    Ok(Answer::Strategy {
        winner: if bit { Side::One } else { Side::Two },
        moves,
    })
}

fn det_d2(game: &WinLoseGame, trace: &mut OracleTrace) -> Result<Answer> {
    let r = realize_bounded(game, 2)?;
    let accept = r.compiled.acceptance();
    let product = &r.product;
    let alpha = r.compiled.alpha;
    let root = product.root();
    let n = product.len();
    // Level-1 residual games at the states where a play enters counter 1.
    let entries: Vec<usize> = if alpha == 2 {
        let pred = product.predecessors();
        (0..n)
            .filter(|&i| product.counter(i) == 1)
            .filter(|&i| i == root || pred[i].iter().any(|&j| product.counter(j) == 2))
            .collect()
    } else {
        Vec::new()
    };
    let levels = r.chain.levels(r.arena.vertex_count());
    let queries: Vec<Level1Query> = entries
        .iter()
        .map(|&i| {
            let sub = Product::build(&r.arena, &levels, 1, product.state(i).vertex, 1);
            Level1Query::new(&sub, &accept[..2], sub.root())
        })
        .collect();
    let sol = solve_weak(product, &accept);
    let root_winner = |bits: Vec<Value>| -> Result<Side> {
        let mut known: BTreeMap<usize, Side> = BTreeMap::new();
        for ((&i, q), b) in entries.iter().zip(&queries).zip(bits) {
            known.insert(i, q.answer(expect_bit(b)?));
        }
        let low = Side::winning(accept[0]);
        let winner_of = |i: usize| -> Option<Side> {
            match product.counter(i) {
                0 => Some(low),
                c if c < alpha => known.get(&i).copied(),
                _ => None,
            }
        };
        let c = product.counter(root);
        let w = if c < alpha || alpha == 0 {
            winner_of(root).unwrap_or(low)
        } else {
            // Top stratum: the opponent of the stayer attracts to the lower
            // states it wins.
            let stayer = Side::winning(accept[alpha]);
            let other = stayer.opponent();
            let top: Vec<bool> = (0..n).map(|i| product.counter(i) == alpha).collect();
            let target: Vec<bool> = (0..n)
                .map(|i| !top[i] && winner_of(i) == Some(other))
                .collect();
            if attractor_within(product, other, &target, &top).set[root] {
                other
            } else {
                stayer
            }
        };
        for (&i, &side) in &known {
            if sol.winner[i] != side {
                return Err(Error::Oracle(format!(
                    "level-1 answer at {} disagrees with the stage solution",
                    product.state(i)
                )));
            }
        }
        if sol.winner[root] != w {
            return Err(Error::Oracle(
                "root winner disagrees with the stage solution".into(),
            ));
        }
        Ok(w)
    };
    let pipeline = Pipeline::Seq(vec![
        Pipeline::Batch(Box::new(Pipeline::Prim(OracleKind::Lpo))),
        Pipeline::kernel("top-stratum", |v| {
            Ok(Value::Bit(root_winner(v.into_list()?)? == Side::One))
        }),
    ]);
    let input = Value::List(
        queries
            .iter()
            .map(|q| Value::Stream(q.stream.clone()))
            .collect(),
    );
    let bit = expect_bit(pipeline.run(input, trace)?)?;
    let (bit, moves) = choose_strategy(product, Some(bit), &sol.admissible, trace)?;
    Ok(Answer::Strategy {
        winner: if bit { Side::One } else { Side::Two },
        moves,
    })
}

fn require_level1(game: &MultiOutcomeGame) -> Result<()> {
    if !game.is_antagonistic() {
        return Err(Error::NotAntagonistic);
    }
    if game.valuation.alpha() > 1 {
        return Err(Error::LevelBound {
            level: game.valuation.alpha(),
            bound: 1,
        });
    }
    Ok(())
}

fn threshold_accept(game: &MultiOutcomeGame, player: usize, o: usize) -> Vec<bool> {
    let upper = game.upper_set(player, o);
    game.valuation
        .labels
        .iter()
        .map(|l| upper.contains(l))
        .collect()
}

fn ne_ap_instrumented(game: &MultiOutcomeGame, trace: &mut OracleTrace) -> Result<Answer> {
    require_level1(game)?;
    let product = game.product();
    let root = product.root();
    let mut guarantees = Vec::with_capacity(2);
    let mut solutions: Vec<Solution> = Vec::with_capacity(2);
    for p in 0..2 {
        let coalition = coalition_product(game, p);
        let pref = &game.preferences[p];
        let mut g = pref[0];
        for &o in pref[1..].iter().rev() {
            let q = Level1Query::new(&coalition, &threshold_accept(game, p, o), root);
            if q.answer(lpo(&q.stream, trace)) == Side::One {
                g = o;
                break;
            }
        }
        solutions.push(solve_threshold(game, &coalition, &game.upper_set(p, g)));
        guarantees.push(g);
    }
    if guarantees[0] != guarantees[1] {
        return Err(Error::Construction(
            "root guarantees of antagonistic players differ".into(),
        ));
    }
    let admissible: Vec<Vec<Label>> = (0..product.len())
        .map(|i| solutions[product.owner(i)].admissible[i].clone())
        .collect();
    let (_, moves) = choose_strategy(&product, None, &admissible, trace)?;
    let moves = (0..product.len())
        .map(|i| (product.state(i), moves[i]))
        .collect();
    Ok(Answer::Certificate(certificate(
        game,
        &product,
        StrategyProfile {
            moves,
            threats: BTreeMap::new(),
        },
        guarantees,
    )?))
}

fn spe_instrumented(
    game: &MultiOutcomeGame,
    opts: RunOptions,
    trace: &mut OracleTrace,
) -> Result<Answer> {
    require_level1(game)?;
    let product = game.product();
    let n = product.len();
    let coalitions: Vec<Product> = (0..2).map(|p| coalition_product(game, p)).collect();
    // One question per (state, player, outcome other than the least
    // preferred), most preferred first.
    let mut keys = Vec::new();
    let mut queries = Vec::new();
    for i in 0..n {
        for p in 0..2 {
            for &o in game.preferences[p][1..].iter().rev() {
                keys.push((i, p, o));
                queries.push(Level1Query::new(
                    &coalitions[p],
                    &threshold_accept(game, p, o),
                    i,
                ));
            }
        }
    }
    let approximants = |bits: Vec<Value>| -> Result<Value> {
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; 2]; n];
        for ((&(i, p, o), q), b) in keys.iter().zip(&queries).zip(bits) {
            if table[i][p].is_none() && q.answer(expect_bit(b)?) == Side::One {
                table[i][p] = Some(o);
            }
        }
        let guarantee = |i: usize, p: usize| table[i][p].unwrap_or(game.preferences[p][0]);
        let pairs: BTreeSet<(usize, usize)> = (0..n)
            .map(|i| (product.owner(i), guarantee(i, product.owner(i))))
            .collect();
        let mut stages = Vec::with_capacity(n + 1);
        for t in 0..=n {
            let sols: BTreeMap<(usize, usize), Solution> = pairs
                .iter()
                .map(|&(p, g)| {
                    (
                        (p, g),
                        solve_weak_staged(&coalitions[p], &threshold_accept(game, p, g), t),
                    )
                })
                .collect();
            let moves = (0..n).map(|i| {
                let p = product.owner(i);
                sols[&(p, guarantee(i, p))].moves[i]
            });
            stages.push(Value::Labels(moves.collect()));
        }
        let last = stages[n].clone();
        let stable = stages.iter().rposition(|s| *s != last).map_or(0, |k| k + 1);
        Ok(Value::Approx(
            stages,
            if opts.redact_stabilization {
                None
            } else {
                Some(stable)
            },
        ))
    };
    let pipeline = Pipeline::Seq(vec![
        Pipeline::Batch(Box::new(Pipeline::Prim(OracleKind::Lpo))),
        Pipeline::kernel("approximants", |v| approximants(v.into_list()?)),
        Pipeline::Prim(OracleKind::Lim),
    ]);
    let input = Value::List(
        queries
            .iter()
            .map(|q| Value::Stream(q.stream.clone()))
            .collect(),
    );
    match pipeline.run(input, trace)? {
        Value::Labels(moves) => Ok(Answer::Profile(StrategyProfile {
            moves: (0..n).map(|i| (product.state(i), moves[i])).collect(),
            threats: BTreeMap::new(),
        })),
        other => Err(mismatch("labels", &other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(prefix: &str, tail: bool) -> PresentedStream {
        PresentedStream {
            prefix: prefix.chars().map(|c| c == '1').collect(),
            tail,
        }
    }

    fn word(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn lpo_examples() {
        let mut t = OracleTrace::new();
        assert!(lpo(&stream("", false), &mut t));
        assert!(!lpo(&stream("001", false), &mut t));
        assert!(!lpo(&stream("000", true), &mut t));
        assert_eq!(t.kinds(), vec![OracleKind::Lpo; 3]);
        assert_eq!(t.records()[1].payload, 3);
    }

    #[test]
    fn llpo_picks_a_clear_parity() {
        let mut t = OracleTrace::new();
        assert_eq!(llpo(&stream("0000", false), &mut t).unwrap(), 0);
        assert_eq!(llpo(&stream("0100", false), &mut t).unwrap(), 0);
        assert_eq!(llpo(&stream("0010", false), &mut t).unwrap(), 1);
        assert!(llpo(&stream("0110", false), &mut t).is_err());
        assert!(llpo(&stream("", true), &mut t).is_err());
    }

    #[test]
    fn closed_choice_examples() {
        let mut t = OracleTrace::new();
        let all = PresentedTree {
            removed: vec![],
            nonempty: true,
        };
        let p = closed_choice_cantor(&all, &mut t).unwrap();
        assert!((0..10).all(|i| !p.bit(i)));
        let cut = PresentedTree {
            removed: vec![word("0")],
            nonempty: true,
        };
        let p = closed_choice_cantor(&cut, &mut t).unwrap();
        assert!(p.bit(0) && (1..10).all(|i| !p.bit(i)));
        let dead = PresentedTree {
            removed: vec![word("0"), word("1")],
            nonempty: true,
        };
        assert!(matches!(
            closed_choice_cantor(&dead, &mut t),
            Err(Error::Promise(_))
        ));
        assert_eq!(t.count(OracleKind::CCantor), 3);
    }

    #[test]
    fn leftmost_skips_dead_subtrees() {
        let tree = PresentedTree {
            removed: vec![word("000"), word("001"), word("01")],
            nonempty: true,
        };
        let p = tree.leftmost().unwrap();
        assert!(tree.contains(&p));
        assert_eq!(&p.word[..2], &word("10")[..]);
    }

    #[test]
    fn c_nat_least_allowed() {
        let mut t = OracleTrace::new();
        let s = PresentedNatSet {
            excluded: [0, 1, 3].into_iter().collect(),
        };
        assert_eq!(c_nat(&s, &mut t), 2);
        assert_eq!(t.kinds(), vec![OracleKind::CNat]);
    }

    #[test]
    fn lim_examples() {
        let mut t = OracleTrace::new();
        assert_eq!(lim_stage(&[4, 4, 4], Some(0), &mut t).unwrap(), 4);
        assert_eq!(lim_stage(&[1, 2, 0, 5, 5, 5], Some(3), &mut t).unwrap(), 5);
        assert_eq!(lim_stage(&[1, 2, 0, 5, 5, 5], None, &mut t).unwrap(), 5);
        assert!(lim_stage(&[1, 2, 0, 5, 5, 6], Some(3), &mut t).is_err());
        assert!(lim_stage::<u8>(&[], None, &mut t).is_err());
    }

    #[test]
    fn identity_pipeline_has_empty_trace() {
        let mut t = OracleTrace::new();
        assert_eq!(
            Pipeline::Identity.run(Value::Bit(true), &mut t).unwrap(),
            Value::Bit(true)
        );
        assert!(t.is_empty());
    }

    #[test]
    fn star_calls_once_per_member() {
        let mut t = OracleTrace::new();
        let p = Pipeline::Star(Box::new(Pipeline::Prim(OracleKind::Lpo)));
        let input = Value::List(vec![
            Value::Stream(stream("0", false)),
            Value::Stream(stream("01", false)),
            Value::Stream(stream("", false)),
        ]);
        let out = p.run(input, &mut t).unwrap();
        assert_eq!(
            out,
            Value::List(vec![Value::Bit(true), Value::Bit(false), Value::Bit(true)])
        );
        assert_eq!(t.count(OracleKind::Lpo), 3);
        assert_eq!(t.records()[2].stage, "star3.2");
    }

    #[test]
    fn product_checks_arity_and_tags() {
        let mut t = OracleTrace::new();
        let p = Pipeline::Product(vec![Pipeline::Prim(OracleKind::Lpo), Pipeline::Identity]);
        assert!(p.run(Value::List(vec![Value::Unit]), &mut t).is_err());
        let out = p
            .run(
                Value::List(vec![Value::Stream(stream("1", false)), Value::Unit]),
                &mut t,
            )
            .unwrap();
        assert_eq!(out, Value::List(vec![Value::Bit(false), Value::Unit]));
        assert_eq!(t.render(), "x0 LPO 1\n");
        assert!(Pipeline::Prim(OracleKind::Lpo)
            .run(Value::Unit, &mut t)
            .is_err());
    }

    #[test]
    fn jump_takes_the_limit_first() {
        let mut t = OracleTrace::new();
        let p = Pipeline::Jump(Box::new(Pipeline::Prim(OracleKind::Lpo)));
        let approx = vec![
            Value::Stream(stream("1", false)),
            Value::Stream(stream("", false)),
        ];
        assert_eq!(
            p.run(Value::Approx(approx, Some(1)), &mut t).unwrap(),
            Value::Bit(true)
        );
        assert_eq!(t.render(), "jump Lim 2\njump LPO 0\n");
    }

    #[test]
    fn choice_codes_are_prefix_free() {
        for deg in 1..5 {
            let codes: Vec<Vec<bool>> = (0..deg).map(|k| choice_code(k, deg)).collect();
            for a in 0..deg {
                for b in 0..deg {
                    if a != b {
                        assert!(!codes[b].starts_with(&codes[a]));
                    }
                }
            }
        }
    }
}

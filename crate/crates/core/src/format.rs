//! Line-oriented text formats for games, solutions, certificates and
//! key-value records.
//!
//! A game file starts with the arena:
//!
//! ```text
//! arena <vertices> <players> <root>
//! v <id> <owner> : <label>:<target> ...
//! ```
//!
//! with one `v` line per vertex, in id order. Exactly one condition section
//! follows. A chain condition lists, for every index `i` in `0..=alpha`, the
//! vertices whose least target index is `i` (`alpha` meaning no target):
//!
//! ```text
//! condition chain [complement]
//! level <i> : <vertex ids>
//! ```
//!
//! A prefix condition is a tree of branches and rays; children are indented
//! two spaces deeper than their parent and have one level less:
//!
//! ```text
//! condition prefix <level> [complement]
//! branch <labels>
//!   ray <labels>
//! ```
//!
//! A multi-outcome game names its outcomes, labels each index with an
//! outcome number and lists each player's preference, least preferred
//! first:
//!
//! ```text
//! outcomes <name> ...
//! level <i> <outcome> : <vertex ids>
//! pref <player> : <outcomes>
//! ```
//!
//! Blank lines and lines starting with `#` are skipped; any other line the
//! grammar does not expect is an error. Printing is canonical: parsing a
//! printed game and printing it again gives the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::arena::{validate_arena, Arena, Label, Play, PlayerId, RawArena, Step, VertexId};
use crate::equilibria::EquilibriumCertificate;
use crate::error::{Error, Result};
use crate::game::{Condition, MultiOutcomeGame, Side, StrategyProfile, WinLoseGame};
use crate::pointclass::{Branch, DiffChain, LeveledValuation, PrefixExpr, PrefixSet, Ray};
use crate::product::ProductState;

/// Either kind of game a file can hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameFile {
    WinLose(WinLoseGame),
    Multi(MultiOutcomeGame),
}

impl GameFile {
    pub fn arena(&self) -> &Arena {
        match self {
            GameFile::WinLose(g) => &g.arena,
            GameFile::Multi(g) => &g.arena,
        }
    }
}

struct Line<'a> {
    no: usize,
    indent: usize,
    text: &'a str,
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Result<Self> {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.trim_start_matches(' ');
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            if body.starts_with('\t') || raw.ends_with([' ', '\t']) {
                return Err(Error::parse(i + 1, "stray whitespace"));
            }
            lines.push(Line { no: i + 1, indent: raw.len() - body.len(), text: body });
        }
        Ok(Cursor { lines, pos: 0 })
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn next(&mut self) -> Option<&Line<'a>> {
        let l = self.lines.get(self.pos);
        self.pos += usize::from(l.is_some());
        l
    }

    /// The next line, which must start with `keyword` at indent 0.
    fn expect(&mut self, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        let last = self.lines.last().map_or(0, |l| l.no);
        let line = self.next().ok_or_else(|| Error::parse(last + 1, format!("expected `{keyword}`")))?;
        let tokens: Vec<&str> = line.text.split_whitespace().collect();
        if tokens[0] != keyword || line.indent != 0 {
            return Err(Error::parse(line.no, format!("expected `{keyword}`, found `{}`", tokens[0])));
        }
        Ok((line.no, tokens))
    }

    fn at_keyword(&self, keyword: &str) -> bool {
        self.peek().is_some_and(|l| l.indent == 0 && l.text.split_whitespace().next() == Some(keyword))
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some(l) => Err(Error::parse(l.no, format!("unexpected line `{}`", l.text))),
            None => Ok(()),
        }
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

fn no_more(line: usize, tokens: &[&str], used: usize) -> Result<()> {
    match tokens.get(used) {
        Some(t) => Err(Error::parse(line, format!("trailing `{t}`"))),
        None => Ok(()),
    }
}

/// Splits `head ... : tail ...` at the colon token.
fn split_colon<'t>(line: usize, tokens: &'t [&'t str]) -> Result<(&'t [&'t str], &'t [&'t str])> {
    let at = tokens.iter().position(|&t| t == ":").ok_or_else(|| Error::parse(line, "missing `:`"))?;
    Ok((&tokens[..at], &tokens[at + 1..]))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| format!(" {}", x.to_string())).collect()
}

pub fn print_arena(arena: &Arena) -> String {
    let mut out = format!("arena {} {} {}\n", arena.vertex_count(), arena.players(), arena.root());
    for v in arena.vertices() {
        let edges = join(arena.edges(v).iter().map(|e| format!("{}:{}", e.label, e.target)));
        let _ = writeln!(out, "v {v} {} :{edges}", arena.owner(v));
    }
    out
}

fn parse_arena_lines(c: &mut Cursor<'_>) -> Result<Arena> {
    let (no, t) = c.expect("arena")?;
    let n: usize = num(no, t.get(1), "vertex count")?;
    let players: usize = num(no, t.get(2), "player count")?;
    let root: VertexId = num(no, t.get(3), "root")?;
    no_more(no, &t, 4)?;
    let mut raw = RawArena::new(players, root);
    for v in 0..n {
        let (no, t) = c.expect("v")?;
        let id: usize = num(no, t.get(1), "vertex id")?;
        if id != v {
            return Err(Error::parse(no, format!("vertex {id} out of order, expected {v}")));
        }
        let owner: PlayerId = num(no, t.get(2), "owner")?;
        if t.get(3) != Some(&":") {
            return Err(Error::parse(no, "expected `:` after the owner"));
        }
        raw.add_vertex(owner);
        for e in &t[4..] {
            let (l, to) = e.split_once(':').ok_or_else(|| Error::parse(no, format!("bad edge `{e}`")))?;
            let label: Label = num(no, Some(&l), "label")?;
            let target: VertexId = num(no, Some(&to), "target")?;
            raw.add_edge(v, label, target);
        }
    }
    Ok(validate_arena(&raw)?)
}

pub fn parse_arena(text: &str) -> Result<Arena> {
    let mut c = Cursor::new(text)?;
    let a = parse_arena_lines(&mut c)?;
    c.finish()?;
    Ok(a)
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.starts_with('#') || name == ":" || name.contains(char::is_whitespace) {
        return Err(Error::InvalidGame(format!("outcome name {name:?} cannot be written")));
    }
    Ok(())
}

fn print_levels(out: &mut String, chain: &DiffChain, n: usize, labels: Option<&[usize]>) {
    let levels = chain.levels(n);
    for i in 0..=chain.alpha() {
        let vs = join((0..n).filter(|&v| levels[v] == i));
        match labels {
            Some(l) => writeln!(out, "level {i} {} :{vs}", l[i]),
            None => writeln!(out, "level {i} :{vs}"),
        }
        .expect("writing to a string");
    }
}

/// Reads consecutive `level` lines; `labelled` lines carry an outcome.
fn parse_levels(c: &mut Cursor<'_>, n: usize, labelled: bool) -> Result<(DiffChain, Vec<usize>)> {
    let mut levels = vec![usize::MAX; n];
    let mut labels = Vec::new();
    let mut count = 0;
    while c.at_keyword("level") {
        let (no, t) = c.expect("level")?;
        let (head, vs) = split_colon(no, &t)?;
        let i: usize = num(no, head.get(1), "index")?;
        if i != count {
            return Err(Error::parse(no, format!("level {i} out of order, expected {count}")));
        }
        let want = if labelled { 3 } else { 2 };
        if labelled {
            labels.push(num(no, head.get(2), "outcome")?);
        }
        no_more(no, head, want)?;
        for tok in vs {
            let v: VertexId = num(no, Some(tok), "vertex")?;
            if v >= n || levels[v] != usize::MAX {
                return Err(Error::parse(no, format!("vertex {v} is unknown or listed twice")));
            }
            levels[v] = i;
        }
        count += 1;
    }
    if count == 0 {
        let no = c.peek().map_or(0, |l| l.no);
        return Err(Error::parse(no, "expected `level` lines"));
    }
    if let Some(v) = levels.iter().position(|&l| l == usize::MAX) {
        return Err(Error::parse(c.peek().map_or(0, |l| l.no), format!("vertex {v} has no level")));
    }
    Ok((DiffChain::from_levels(&levels, count - 1), labels))
}

fn print_expr(out: &mut String, expr: &PrefixExpr, depth: usize) {
    let pad = "  ".repeat(depth);
    for b in expr.branches() {
        let _ = writeln!(out, "{pad}branch{}", join(&b.word));
        print_expr(out, &b.child, depth + 1);
    }
    for r in expr.rays() {
        let _ = writeln!(out, "{pad}ray{}", join(&r.head));
        print_expr(out, &r.child, depth + 1);
    }
}

fn parse_expr(c: &mut Cursor<'_>, level: usize, depth: usize) -> Result<PrefixExpr> {
    let mut branches = Vec::new();
    let mut rays = Vec::new();
    let mut first_no = None;
    while let Some(line) = c.peek() {
        let (no, indent, text) = (line.no, line.indent, line.text);
        if indent < 2 * depth {
            break;
        }
        if indent > 2 * depth {
            return Err(Error::parse(no, "line indented too deep"));
        }
        if depth == 0 && !(text.starts_with("branch") || text.starts_with("ray")) {
            break;
        }
        if level == 0 {
            return Err(Error::parse(no, "a level-0 expression has no branches"));
        }
        c.next();
        first_no.get_or_insert(no);
        let t: Vec<&str> = text.split_whitespace().collect();
        let word = t[1..].iter().map(|tok| num(no, Some(tok), "label")).collect::<Result<Vec<Label>>>()?;
        let child = parse_expr(c, level - 1, depth + 1)?;
        match t[0] {
            "branch" => branches.push(Branch { word, child }),
            "ray" => rays.push(Ray { head: word, child }),
            other => return Err(Error::parse(no, format!("expected `branch` or `ray`, found `{other}`"))),
        }
    }
    // Canonical order lists branches before rays.
    PrefixExpr::new(level, branches, rays).map_err(|e| Error::parse(first_no.unwrap_or(0), e.to_string()))
}

pub fn print_game(game: &GameFile) -> Result<String> {
    let mut out = print_arena(game.arena());
    let n = game.arena().vertex_count();
    match game {
        GameFile::WinLose(g) => match &g.condition {
            Condition::Chain { chain, complemented } => {
                out.push_str(if *complemented { "condition chain complement\n" } else { "condition chain\n" });
                print_levels(&mut out, chain, n, None);
            }
            Condition::Prefix(set) => {
                let tail = if set.complemented { " complement" } else { "" };
                let _ = writeln!(out, "condition prefix {}{tail}", set.expr.level());
                print_expr(&mut out, &set.expr, 0);
            }
        },
        GameFile::Multi(g) => {
            g.outcomes.iter().try_for_each(|o| check_name(o))?;
            let _ = writeln!(out, "outcomes{}", join(&g.outcomes));
            print_levels(&mut out, &g.valuation.chain, n, Some(&g.valuation.labels));
            for (p, pref) in g.preferences.iter().enumerate() {
                let _ = writeln!(out, "pref {p} :{}", join(pref));
            }
        }
    }
    Ok(out)
}

pub fn parse_game(text: &str) -> Result<GameFile> {
    let mut c = Cursor::new(text)?;
    let arena = parse_arena_lines(&mut c)?;
    let n = arena.vertex_count();
    let game = if c.at_keyword("condition") {
        let (no, t) = c.expect("condition")?;
        match t.get(1).copied() {
            Some("chain") => {
                let complemented = t.get(2) == Some(&"complement");
                no_more(no, &t, 2 + usize::from(complemented))?;
                let (chain, _) = parse_levels(&mut c, n, false)?;
                GameFile::WinLose(WinLoseGame::new(arena, Condition::Chain { chain, complemented })?)
            }
            Some("prefix") => {
                let level: usize = num(no, t.get(2), "level")?;
                let complemented = t.get(3) == Some(&"complement");
                no_more(no, &t, 3 + usize::from(complemented))?;
                let expr = parse_expr(&mut c, level, 0)?;
                GameFile::WinLose(WinLoseGame::new(arena, Condition::Prefix(PrefixSet { expr, complemented }))?)
            }
            _ => return Err(Error::parse(no, "expected `chain` or `prefix`")),
        }
    } else {
        let (_, t) = c.expect("outcomes")?;
        let outcomes: Vec<String> = t[1..].iter().map(|s| s.to_string()).collect();
        let (chain, labels) = parse_levels(&mut c, n, true)?;
        let valuation = LeveledValuation::new(chain, labels)?;
        let mut prefs = Vec::new();
        while c.at_keyword("pref") {
            let (no, t) = c.expect("pref")?;
            let (head, list) = split_colon(no, &t)?;
            let p: usize = num(no, head.get(1), "player")?;
            no_more(no, head, 2)?;
            if p != prefs.len() {
                return Err(Error::parse(no, format!("preference of player {p} out of order")));
            }
            prefs.push(list.iter().map(|tok| num(no, Some(tok), "outcome")).collect::<Result<Vec<usize>>>()?);
        }
        GameFile::Multi(MultiOutcomeGame::new(arena, outcomes, valuation, prefs)?)
    };
    c.finish()?;
    Ok(game)
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn print_steps(out: &mut String, key: &str, steps: &[Step]) {
    let _ = writeln!(out, "{key}{}", join(steps.iter().map(|s| format!("{}:{}", s.vertex, s.label))));
}

fn parse_steps(no: usize, tokens: &[&str]) -> Result<Vec<Step>> {
    tokens[1..]
        .iter()
        .map(|tok| {
            let (v, l) = tok.split_once(':').ok_or_else(|| Error::parse(no, format!("bad step `{tok}`")))?;
            Ok(Step { vertex: num(no, Some(&v), "vertex")?, label: num(no, Some(&l), "label")? })
        })
        .collect()
}

fn print_moves(out: &mut String, moves: &BTreeMap<ProductState, Label>) {
    for (s, l) in moves {
        let _ = writeln!(out, "move {} {} {l}", s.vertex, s.counter);
    }
}

fn threat_lines(threats: &BTreeMap<PlayerId, BTreeMap<ProductState, Label>>) -> String {
    let mut out = String::new();
    for (p, map) in threats {
        for (s, l) in map {
            let _ = writeln!(out, "threat {p} {} {} {l}", s.vertex, s.counter);
        }
    }
    out
}

/// Reads `move` and `threat` lines into a profile.
fn parse_profile_lines(c: &mut Cursor<'_>) -> Result<StrategyProfile> {
    let mut profile = StrategyProfile::default();
    while c.at_keyword("move") || c.at_keyword("threat") {
        let line = c.next().expect("peeked");
        let no = line.no;
        let t: Vec<&str> = line.text.split_whitespace().collect();
        let off = usize::from(t[0] == "threat");
        let s = ProductState { vertex: num(no, t.get(1 + off), "vertex")?, counter: num(no, t.get(2 + off), "counter")? };
        let l: Label = num(no, t.get(3 + off), "label")?;
        no_more(no, &t, 4 + off)?;
        let fresh = if off == 1 {
            let p: PlayerId = num(no, t.get(1), "player")?;
            profile.threats.entry(p).or_default().insert(s, l).is_none()
        } else {
            profile.moves.insert(s, l).is_none()
        };
        if !fresh {
            return Err(Error::parse(no, format!("state {s} listed twice")));
        }
    }
    Ok(profile)
}

fn expect_end(c: &mut Cursor<'_>) -> Result<()> {
    let (no, t) = c.expect("end")?;
    no_more(no, &t, 1)?;
    c.finish()
}

/// A winner and one move per product state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub winner: Side,
    pub moves: BTreeMap<ProductState, Label>,
}

pub fn print_solution(s: &SolutionFile) -> String {
    let mut out = format!("solution\nwinner {}\n", s.winner);
    print_moves(&mut out, &s.moves);
    out.push_str("end\n");
    out
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let mut c = Cursor::new(text)?;
    let (no, t) = c.expect("solution")?;
    no_more(no, &t, 1)?;
    let (no, t) = c.expect("winner")?;
    let winner = match t.get(1).copied() {
        Some("1") => Side::One,
        Some("2") => Side::Two,
        _ => return Err(Error::parse(no, "winner must be 1 or 2")),
    };
    no_more(no, &t, 2)?;
    let profile = parse_profile_lines(&mut c)?;
    if !profile.threats.is_empty() {
        return Err(Error::parse(no, "a solution has no threats"));
    }
    expect_end(&mut c)?;
    Ok(SolutionFile { winner, moves: profile.moves })
}

pub fn print_profile(p: &StrategyProfile) -> String {
    let mut out = String::from("profile\n");
    print_moves(&mut out, &p.moves);
    out.push_str(&threat_lines(&p.threats));
    out.push_str("end\n");
    out
}

pub fn parse_profile(text: &str) -> Result<StrategyProfile> {
    let mut c = Cursor::new(text)?;
    let (no, t) = c.expect("profile")?;
    no_more(no, &t, 1)?;
    let p = parse_profile_lines(&mut c)?;
    expect_end(&mut c)?;
    Ok(p)
}

/// The certificate block: outcome, guarantees, the play as a lasso of
/// `vertex:label` steps, the profile, and an FNV-1a digest of the threat
/// lines.
pub fn print_certificate(cert: &EquilibriumCertificate) -> String {
    let mut out = format!("certificate\noutcome {}\n", cert.outcome);
    for (p, g) in cert.guarantees.iter().enumerate() {
        let _ = writeln!(out, "guarantee {p} {g}");
    }
    print_steps(&mut out, "stem", &cert.play.stem);
    print_steps(&mut out, "cycle", &cert.play.cycle);
    print_moves(&mut out, &cert.profile.moves);
    let threats = threat_lines(&cert.profile.threats);
    out.push_str(&threats);
    let _ = writeln!(out, "threat-digest {:016x}", fnv1a(threats.as_bytes()));
    out.push_str("end\n");
    out
}

pub fn parse_certificate(text: &str) -> Result<EquilibriumCertificate> {
    let mut c = Cursor::new(text)?;
    let (no, t) = c.expect("certificate")?;
    no_more(no, &t, 1)?;
    let (no, t) = c.expect("outcome")?;
    let outcome: usize = num(no, t.get(1), "outcome")?;
    no_more(no, &t, 2)?;
    let mut guarantees = Vec::new();
    while c.at_keyword("guarantee") {
        let (no, t) = c.expect("guarantee")?;
        let p: usize = num(no, t.get(1), "player")?;
        if p != guarantees.len() {
            return Err(Error::parse(no, format!("guarantee of player {p} out of order")));
        }
        guarantees.push(num(no, t.get(2), "outcome")?);
        no_more(no, &t, 3)?;
    }
    let (no, t) = c.expect("stem")?;
    let stem = parse_steps(no, &t)?;
    let (no, t) = c.expect("cycle")?;
    let cycle = parse_steps(no, &t)?;
    if cycle.is_empty() {
        return Err(Error::parse(no, "empty cycle"));
    }
    let profile = parse_profile_lines(&mut c)?;
    let (no, t) = c.expect("threat-digest")?;
    let digest = u64::from_str_radix(t.get(1).copied().unwrap_or(""), 16)
        .map_err(|_| Error::parse(no, "bad threat digest"))?;
    no_more(no, &t, 2)?;
    if digest != fnv1a(threat_lines(&profile.threats).as_bytes()) {
        return Err(Error::parse(no, "threat digest does not match the threat lines"));
    }
    expect_end(&mut c)?;
    Ok(EquilibriumCertificate { profile, play: Play { stem, cycle }, outcome, guarantees })
}

/// An ordered list of `key value` lines. Keys are single tokens; the value
/// is the rest of the line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Record {
    entries: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        assert!(!key.is_empty() && !key.contains(char::is_whitespace), "bad record key {key:?}");
        let value = value.to_string();
        assert!(!value.contains('\n'), "record values are single lines");
        self.entries.push((key.to_string(), value));
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// First value under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_all<'s>(&'s self, key: &'s str) -> impl Iterator<Item = &'s str> + 's {
        self.entries.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| if v.is_empty() { format!("{k}\n") } else { format!("{k} {v}\n") })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Record> {
        let mut r = Record::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with(char::is_whitespace) {
                return Err(Error::parse(i + 1, "record lines start with a key"));
            }
            let (k, v) = line.split_once(' ').unwrap_or((line, ""));
            r.entries.push((k.to_string(), v.to_string()));
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = "arena 3 2 0
v 0 0 : 0:1 1:2
v 1 1 : 0:0
v 2 0 : 0:2
condition chain complement
level 0 : 2
level 1 :
level 2 : 0 1
";

    const PREFIX: &str = "arena 2 2 0
v 0 0 : 0:0 1:1
v 1 1 : 0:1 1:0
condition prefix 2
branch 1
  branch 0 0
ray 0 0
";

    const MULTI: &str = "arena 2 2 1
v 0 0 : 0:1
v 1 1 : 0:0 3:1
outcomes lose draw win
level 0 2 : 0
level 1 1 : 1
pref 0 : 0 1 2
pref 1 : 2 1 0
";

    #[test]
    fn games_round_trip_byte_for_byte() {
        for text in [CHAIN, PREFIX, MULTI] {
            let g = parse_game(text).unwrap();
            assert_eq!(print_game(&g).unwrap(), text);
        }
    }

    #[test]
    fn chain_levels_are_read_back() {
        let GameFile::WinLose(g) = parse_game(CHAIN).unwrap() else { panic!("win/lose game") };
        let Condition::Chain { chain, complemented } = &g.condition else { panic!("chain") };
        assert!(complemented);
        assert_eq!(chain.alpha(), 2);
        assert_eq!(chain.levels(3), vec![2, 2, 0]);
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        for bad in [
            format!("{CHAIN}level 3 :\nbogus\n"),
            format!("{CHAIN}extra\n"),
            CHAIN.replace("v 1 1 : 0:0", "v 1 1 : 0:0 x"),
            CHAIN.replace("arena 3 2 0", "arena 3 2 0 7"),
            format!("{MULTI}pref 2 : 0 1 2\n"),
            PREFIX.replace("  branch 0 0", "    branch 0 0"),
            CHAIN.replace("level 2 : 0 1", "level 2 : 0 1 1"),
        ] {
            assert!(parse_game(&bad).is_err(), "accepted:\n{bad}");
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = format!("# a game\n\n{CHAIN}\n# done\n");
        assert_eq!(print_game(&parse_game(&text).unwrap()).unwrap(), CHAIN);
    }

    #[test]
    fn certificate_digest_is_checked() {
        let mut profile = StrategyProfile::default();
        profile.moves.insert(ProductState { vertex: 0, counter: 1 }, 0);
        profile.threats.entry(1).or_default().insert(ProductState { vertex: 1, counter: 1 }, 3);
        let cert = EquilibriumCertificate {
            profile,
            play: Play { stem: vec![Step { vertex: 0, label: 0 }], cycle: vec![Step { vertex: 1, label: 0 }] },
            outcome: 1,
            guarantees: vec![0, 2],
        };
        let text = print_certificate(&cert);
        assert_eq!(parse_certificate(&text).unwrap(), cert);
        let tampered = text.replace("threat 1 1 1 3", "threat 1 1 1 0");
        assert!(parse_certificate(&tampered).is_err());
        assert!(parse_certificate(&format!("{text}more\n")).is_err());
    }

    #[test]
    fn solutions_and_profiles_round_trip() {
        let mut moves = BTreeMap::new();
        moves.insert(ProductState { vertex: 2, counter: 0 }, 1);
        let s = SolutionFile { winner: Side::Two, moves };
        assert_eq!(parse_solution(&print_solution(&s)).unwrap(), s);
        let p = StrategyProfile { moves: s.moves.clone(), threats: BTreeMap::new() };
        assert_eq!(parse_profile(&print_profile(&p)).unwrap(), p);
    }

    #[test]
    fn records_keep_order_and_empty_values() {
        let mut r = Record::new();
        r.push("seed", 7).push("answer", "0 2").push("note", "");
        let text = r.render();
        assert_eq!(text, "seed 7\nanswer 0 2\nnote\n");
        let back = Record::parse(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.get("answer"), Some("0 2"));
    }
}

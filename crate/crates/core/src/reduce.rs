//! Vertex deletion, vertex contraction and restrictive sink/source
//! mutation, and a driver that uses them to reduce a non-discrete quiver to
//! one of the core shapes carrying an explicit infinite pre-simple-minded
//! collection.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::classify;
use crate::error::{Error, Result};
use crate::quiver::{Arrow, GradedQuiver, VertexPotential};

fn require_vertex(q: &GradedQuiver, i: &str) -> Result<()> {
    if q.has_vertex(i) {
        Ok(())
    } else {
        Err(Error::UnknownVertex(i.to_string()))
    }
}

/// `base`, or `base~2`, `base~3`, … — the first name not in `taken`.
fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (2..)
        .map(|k| format!("{base}~{k}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded")
}

pub fn delete_vertex(q: &GradedQuiver, i: &str) -> Result<GradedQuiver> {
    require_vertex(q, i)?;
    let keep: BTreeSet<String> = q.vertices().iter().filter(|v| *v != i).cloned().collect();
    Ok(q.induced(&keep))
}

/// Removes `i`, replacing each pair `β` into `i`, `α` out of `i` by a
/// composite `α∘β` of degree `deg α + deg β`.
pub fn contract_vertex(q: &GradedQuiver, i: &str) -> Result<GradedQuiver> {
    require_vertex(q, i)?;
    let mut arrows: Vec<Arrow> = q
        .arrows()
        .iter()
        .filter(|a| a.source != i && a.target != i)
        .cloned()
        .collect();
    let mut taken: BTreeSet<String> = arrows.iter().map(|a| a.name.clone()).collect();
    for beta in q.incoming(i) {
        for alpha in q.outgoing(i) {
            let name = fresh_name(&format!("{}∘{}", alpha.name, beta.name), &taken);
            taken.insert(name.clone());
            arrows.push(Arrow::new(
                name,
                &beta.source,
                &alpha.target,
                alpha.degree + beta.degree,
            ));
        }
    }
    GradedQuiver::new(q.vertices().iter().filter(|v| *v != i).cloned(), arrows)
}

/// Restrictive sink: something enters `i`, nothing leaves, and every
/// entering arrow has the same degree.
pub fn is_sink(q: &GradedQuiver, i: &str) -> bool {
    common_degree(q.incoming(i)).is_some() && q.outgoing(i).next().is_none()
}

pub fn is_source(q: &GradedQuiver, i: &str) -> bool {
    common_degree(q.outgoing(i)).is_some() && q.incoming(i).next().is_none()
}

fn common_degree<'a>(mut arrows: impl Iterator<Item = &'a Arrow>) -> Option<i64> {
    let first = arrows.next()?.degree;
    arrows.all(|a| a.degree == first).then_some(first)
}

fn starred(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

fn flip_at(q: &GradedQuiver, i: &str, into: bool) -> Result<GradedQuiver> {
    let touching: Vec<&Arrow> = if into {
        q.incoming(i).collect()
    } else {
        q.outgoing(i).collect()
    };
    let r = touching[0].degree;
    let mut arrows: Vec<Arrow> = q
        .arrows()
        .iter()
        .filter(|a| if into { a.target != i } else { a.source != i })
        .cloned()
        .collect();
    let mut taken: BTreeSet<String> = arrows.iter().map(|a| a.name.clone()).collect();
    for a in touching {
        let name = fresh_name(&starred(&a.name), &taken);
        taken.insert(name.clone());
        let flipped = if into {
            Arrow::new(name, i, &a.source, -r)
        } else {
            Arrow::new(name, &a.target, i, -r)
        };
        arrows.push(flipped);
    }
    GradedQuiver::new(q.vertices().iter().cloned(), arrows)
}

fn describe(arrows: Vec<&Arrow>) -> String {
    arrows
        .iter()
        .map(|a| format!("{}: {} -> {} deg {}", a.name, a.source, a.target, a.degree))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Replaces every arrow `α` into the sink `i` by `α*: i → s(α)` of degree `-r`.
pub fn mutate_sink(q: &GradedQuiver, i: &str) -> Result<GradedQuiver> {
    require_vertex(q, i)?;
    if !is_sink(q, i) {
        return Err(Error::NotSinkOrSource {
            vertex: i.to_string(),
            kind: "sink",
            detail: format!(
                "incoming [{}], outgoing [{}]",
                describe(q.incoming(i).collect()),
                describe(q.outgoing(i).collect())
            ),
        });
    }
    flip_at(q, i, true)
}

pub fn mutate_source(q: &GradedQuiver, i: &str) -> Result<GradedQuiver> {
    require_vertex(q, i)?;
    if !is_source(q, i) {
        return Err(Error::NotSinkOrSource {
            vertex: i.to_string(),
            kind: "source",
            detail: format!(
                "outgoing [{}], incoming [{}]",
                describe(q.outgoing(i).collect()),
                describe(q.incoming(i).collect())
            ),
        });
    }
    flip_at(q, i, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Op {
    Delete(String),
    Contract(String),
    MutateSink(String),
    MutateSource(String),
    TakeOpposite,
    ApplyPotential(VertexPotential),
}

impl Op {
    pub fn apply(&self, q: &GradedQuiver) -> Result<GradedQuiver> {
        match self {
            Op::Delete(v) => delete_vertex(q, v),
            Op::Contract(v) => contract_vertex(q, v),
            Op::MutateSink(v) => mutate_sink(q, v),
            Op::MutateSource(v) => mutate_source(q, v),
            Op::TakeOpposite => Ok(q.opposite()),
            Op::ApplyPotential(g) => Ok(q.apply_potential(g)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Op::Delete(_) => "Delete",
            Op::Contract(_) => "Contract",
            Op::MutateSink(_) => "MutateSink",
            Op::MutateSource(_) => "MutateSource",
            Op::TakeOpposite => "TakeOpposite",
            Op::ApplyPotential(_) => "ApplyPotential",
        }
    }

    /// The vertex acted on, for the four vertex operations.
    pub fn vertex(&self) -> Option<&str> {
        match self {
            Op::Delete(v) | Op::Contract(v) | Op::MutateSink(v) | Op::MutateSource(v) => Some(v),
            _ => None,
        }
    }

    fn args(&self) -> Value {
        match self {
            Op::ApplyPotential(g) => json!(g.entries().map(|(v, x)| (v.clone(), *x)).collect::<BTreeMap<_, _>>()),
            Op::TakeOpposite => json!([]),
            _ => json!([self.vertex().unwrap()]),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::ApplyPotential(g) => {
                let parts: Vec<String> = g.entries().map(|(v, x)| format!("{v}:{x}")).collect();
                write!(f, "ApplyPotential({})", parts.join(", "))
            }
            Op::TakeOpposite => f.write_str("TakeOpposite"),
            _ => write!(f, "{} {}", self.name(), self.vertex().unwrap()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub op: Op,
    pub before: GradedQuiver,
    pub after: GradedQuiver,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoreTag {
    /// `1 ⇉ 2 → 3`, parallel degrees `{0, -n}`.
    CaseA {
        n: i64,
    },
    /// `1 ⇉ 2 ⇇ 3`, parallel degrees `{0, -m}` and `{0, -n}`, `m ≤ n`.
    CaseB {
        m: i64,
        n: i64,
    },
    /// Kronecker quiver with `k ≥ 3` arrows, degrees shifted so the largest
    /// is 0, listed in decreasing order (not all equal).
    CaseC {
        arrows: usize,
        degrees: Vec<i64>,
    },
    KroneckerDegZero {
        arrows: usize,
    },
    None,
}

impl CoreTag {
    pub fn name(&self) -> &'static str {
        match self {
            CoreTag::CaseA { .. } => "CaseA",
            CoreTag::CaseB { .. } => "CaseB",
            CoreTag::CaseC { .. } => "CaseC",
            CoreTag::KroneckerDegZero { .. } => "KroneckerDegZero",
            CoreTag::None => "None",
        }
    }

    fn params(&self) -> Value {
        match self {
            CoreTag::CaseA { n } => json!({ "n": n }),
            CoreTag::CaseB { m, n } => json!({ "m": m, "n": n }),
            CoreTag::CaseC { arrows, degrees } => json!({ "arrows": arrows, "degrees": degrees }),
            CoreTag::KroneckerDegZero { arrows } => json!({ "arrows": arrows }),
            CoreTag::None => json!({}),
        }
    }

    /// Whether an explicit family of bricks is constructed for these
    /// parameters.
    pub fn witness_available(&self) -> bool {
        match self {
            CoreTag::CaseA { n } => *n == 1,
            CoreTag::CaseB { m, n } => m.gcd(n) == 1,
            CoreTag::CaseC { degrees, .. } => {
                let a: Vec<i64> = degrees[1..].iter().map(|d| -d).collect();
                a[0] > 0 && a[0].gcd(&a[1]) == 1 && (a.len() < 3 || a[0] + a[1] >= a[2])
            }
            CoreTag::KroneckerDegZero { .. } => true,
            CoreTag::None => false,
        }
    }
}

impl fmt::Display for CoreTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreTag::CaseA { n } => write!(f, "CaseA(n={n})"),
            CoreTag::CaseB { m, n } => write!(f, "CaseB(m={m}, n={n})"),
            CoreTag::CaseC { arrows, degrees } => write!(f, "CaseC(k={arrows}, degrees={degrees:?})"),
            CoreTag::KroneckerDegZero { arrows } => write!(f, "KroneckerDegZero(k={arrows})"),
            CoreTag::None => f.write_str("None"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreShape {
    pub tag: CoreTag,
    pub matched_quiver: GradedQuiver,
    /// Standard shape vertex (`"1"`, `"2"`, `"3"`) → vertex of the matched quiver.
    pub iso: BTreeMap<String, String>,
    /// Whether the match is against the opposite of the standard shape.
    pub opposite: bool,
}

impl CoreShape {
    fn none(q: &GradedQuiver) -> Self {
        CoreShape {
            tag: CoreTag::None,
            matched_quiver: q.clone(),
            iso: BTreeMap::new(),
            opposite: false,
        }
    }

    pub fn is_match(&self) -> bool {
        self.tag != CoreTag::None
    }
}

fn iso(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// Arrows grouped by their (source, target).
fn parallel_classes(q: &GradedQuiver) -> BTreeMap<(String, String), Vec<i64>> {
    let mut out: BTreeMap<(String, String), Vec<i64>> = BTreeMap::new();
    for a in q.arrows() {
        out.entry((a.source.clone(), a.target.clone()))
            .or_default()
            .push(a.degree);
    }
    out
}

/// Matches `q` against the core shapes up to relabeling, opposite and
/// vertex potential.
pub fn match_core_shape(q: &GradedQuiver) -> CoreShape {
    let tag_and_iso = match q.vertices().len() {
        2 => match_kronecker(q),
        3 => match_three(q),
        _ => None,
    };
    match tag_and_iso {
        Some((tag, iso, opposite)) => CoreShape {
            tag,
            matched_quiver: q.clone(),
            iso,
            opposite,
        },
        None => CoreShape::none(q),
    }
}

fn match_kronecker(q: &GradedQuiver) -> Option<(CoreTag, BTreeMap<String, String>, bool)> {
    let classes = parallel_classes(q);
    if classes.len() != 1 {
        return None;
    }
    let ((s, t), degrees) = classes.into_iter().next().unwrap();
    let k = degrees.len();
    let top = *degrees.iter().max().unwrap();
    let mut shifted: Vec<i64> = degrees.iter().map(|d| d - top).collect();
    shifted.sort_unstable_by(|a, b| b.cmp(a));
    let map = iso(&[("1", &s), ("2", &t)]);
    if k >= 2 && shifted.iter().all(|&d| d == 0) {
        return Some((CoreTag::KroneckerDegZero { arrows: k }, map, false));
    }
    if k >= 3 {
        return Some((
            CoreTag::CaseC {
                arrows: k,
                degrees: shifted,
            },
            map,
            false,
        ));
    }
    None
}

fn gap(degrees: &[i64]) -> Option<i64> {
    match degrees {
        [x, y] if x != y => Some((x - y).abs()),
        _ => None,
    }
}

fn match_three(q: &GradedQuiver) -> Option<(CoreTag, BTreeMap<String, String>, bool)> {
    let classes = parallel_classes(q);
    let mut pairs: Vec<(&(String, String), i64)> = Vec::new();
    let mut singles: Vec<&(String, String)> = Vec::new();
    for (st, degrees) in &classes {
        match degrees.len() {
            1 => singles.push(st),
            2 => pairs.push((st, gap(degrees)?)),
            _ => return None,
        }
    }
    // no two classes may join the same two vertices in opposite directions
    let unordered: BTreeSet<(&String, &String)> = classes
        .keys()
        .map(|(s, t)| if s < t { (s, t) } else { (t, s) })
        .collect();
    if unordered.len() != classes.len() {
        return None;
    }
    match (pairs.as_slice(), singles.as_slice()) {
        ([((u, v), n)], [(x, y)]) => {
            if x == v && y != u {
                Some((CoreTag::CaseA { n: *n }, iso(&[("1", u), ("2", v), ("3", y)]), false))
            } else if y == u && x != v {
                Some((CoreTag::CaseA { n: *n }, iso(&[("1", v), ("2", u), ("3", x)]), true))
            } else {
                None
            }
        }
        ([((u1, v1), g1), ((u2, v2), g2)], []) => {
            let (mut first, mut second) = (((u1, v1), *g1), ((u2, v2), *g2));
            if second.1 < first.1 {
                std::mem::swap(&mut first, &mut second);
            }
            let (((a, b), m), ((c, d), n)) = (first, second);
            if b == d && a != c {
                Some((CoreTag::CaseB { m, n }, iso(&[("1", a), ("2", b), ("3", c)]), false))
            } else if a == c && b != d {
                Some((CoreTag::CaseB { m, n }, iso(&[("1", b), ("2", a), ("3", d)]), true))
            } else {
                None
            }
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub arrow: String,
    /// Length of the degree-zero walk between the endpoints.
    pub n: usize,
    /// Number of negative arrows parallel to the selected one (itself included).
    #[serde(rename = "N")]
    pub parallel: usize,
    pub walk: Vec<String>,
}

/// The unique walk between `from` and `to` in a tree given by undirected edges.
fn tree_walk(adj: &BTreeMap<&str, Vec<&str>>, from: &str, to: &str) -> Option<Vec<String>> {
    let mut parent: HashMap<&str, &str> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    parent.insert(from, from);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut walk = vec![to.to_string()];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                walk.push(cur.to_string());
            }
            walk.reverse();
            return Some(walk);
        }
        for &y in &adj[x] {
            if !parent.contains_key(y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}

fn zero_adjacency(q: &GradedQuiver) -> BTreeMap<&str, Vec<&str>> {
    let mut adj: BTreeMap<&str, Vec<&str>> = q.vertices().iter().map(|v| (v.as_str(), Vec::new())).collect();
    for a in q.arrows().iter().filter(|a| a.degree == 0) {
        adj.get_mut(a.source.as_str()).unwrap().push(&a.target);
        adj.get_mut(a.target.as_str()).unwrap().push(&a.source);
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    adj
}

/// Picks the negative arrow with the shortest degree-zero walk between its
/// endpoints, then the most negative parallel arrows, then the least name.
pub fn select_minimal_negative_arrow(q: &GradedQuiver) -> Result<Selection> {
    let zero = q.degree_zero_part();
    if !zero.is_connected() {
        return Err(Error::Selection("degree-zero part is disconnected".into()));
    }
    if zero.arrows().len() + 1 != zero.vertices().len() {
        return Err(Error::Selection("degree-zero part is not a tree".into()));
    }
    let adj = zero_adjacency(q);
    let negative: Vec<&Arrow> = q.arrows().iter().filter(|a| a.degree < 0).collect();
    if negative.is_empty() {
        return Err(Error::Selection("no negative arrows".into()));
    }
    let mut best: Option<(usize, std::cmp::Reverse<usize>, &str, Vec<String>)> = None;
    for a in &negative {
        let walk = tree_walk(&adj, &a.source, &a.target).expect("tree is connected");
        let n = walk.len() - 1;
        let parallel = negative
            .iter()
            .filter(|b| b.source == a.source && b.target == a.target)
            .count();
        let key = (n, std::cmp::Reverse(parallel), a.name.as_str(), walk);
        if best.as_ref().is_none_or(|b| (key.0, key.1, key.2) < (b.0, b.1, b.2)) {
            best = Some(key);
        }
    }
    let (n, std::cmp::Reverse(parallel), arrow, walk) = best.unwrap();
    Ok(Selection {
        arrow: arrow.to_string(),
        n,
        parallel,
        walk,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Depth bound of the fallback breadth-first search.
    pub max_depth: usize,
    /// Bound on the number of distinct quivers the search may visit.
    pub max_states: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            max_depth: 32,
            max_states: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub input: GradedQuiver,
    pub selection: Option<Selection>,
    pub steps: Vec<ReductionStep>,
    pub terminal: CoreShape,
    /// Whether the breadth-first fallback produced the final steps.
    pub used_fallback: bool,
    pub notes: Vec<String>,
}

impl ReductionTrace {
    /// Recomputes every step from its `before` and checks the chain.
    pub fn replay(&self) -> Result<bool> {
        let mut cur = &self.input;
        for step in &self.steps {
            if &step.before != cur || step.op.apply(&step.before)? != step.after {
                return Ok(false);
            }
            cur = &step.after;
        }
        Ok(&self.terminal.matched_quiver == cur)
    }

    pub fn ops(&self) -> Vec<&Op> {
        self.steps.iter().map(|s| &s.op).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "input": self.input.to_text(),
            "selection": self.selection,
            "steps": self.steps.iter().map(|s| json!({
                "op": s.op.name(),
                "args": s.op.args(),
                "after": s.after.to_text(),
            })).collect::<Vec<_>>(),
            "terminal": {
                "tag": self.terminal.tag.name(),
                "params": self.terminal.tag.params(),
                "iso": self.terminal.iso,
                "opposite": self.terminal.opposite,
                "witness_available": self.terminal.tag.witness_available(),
                "quiver": self.terminal.matched_quiver.to_text(),
            },
            "used_fallback": self.used_fallback,
            "notes": self.notes,
        })
    }
}

struct Recorder {
    steps: Vec<ReductionStep>,
    current: GradedQuiver,
}

impl Recorder {
    fn push(&mut self, op: Op) -> Result<()> {
        let after = op.apply(&self.current)?;
        debug_assert!(after.is_acyclic());
        let before = std::mem::replace(&mut self.current, after.clone());
        self.steps.push(ReductionStep { op, before, after });
        Ok(())
    }
}

fn non_discrete_connected(q: &GradedQuiver) -> bool {
    q.vertices().len() >= 2 && q.is_connected() && classify(q).is_ok_and(|v| !v.discrete)
}

/// Choice of the extra vertex next to the walk when only one negative arrow
/// joins the walk's endpoints.
fn choose_extra_vertex(q: &GradedQuiver, walk: &[String]) -> Option<(String, &'static str)> {
    let on_walk: BTreeSet<&str> = walk.iter().map(String::as_str).collect();
    let adj = zero_adjacency(q);
    let interior = &walk[1..walk.len() - 1];
    let candidates = |sources: &[String]| -> Option<String> {
        sources
            .iter()
            .flat_map(|w| adj[w.as_str()].iter())
            .filter(|v| !on_walk.contains(*v))
            .min()
            .map(|v| v.to_string())
    };
    if let Some(v) = candidates(interior) {
        return Some((v, "degree-zero neighbour of an interior walk vertex"));
    }
    if let Some(v) = candidates(walk) {
        return Some((v, "degree-zero neighbour of a walk endpoint"));
    }
    q.arrows()
        .iter()
        .filter_map(
            |a| match (on_walk.contains(a.source.as_str()), on_walk.contains(a.target.as_str())) {
                (true, false) => Some(a.target.clone()),
                (false, true) => Some(a.source.clone()),
                _ => None,
            },
        )
        .min()
        .map(|v| (v, "neighbour through a nonzero-degree arrow"))
}

/// Contract flow-through vertices, otherwise mutate a restrictive sink or
/// source, until a core shape appears. Returns false when stuck.
fn proof_loop(rec: &mut Recorder) -> Result<bool> {
    let mut last_mutated: Option<String> = None;
    let limit = 4 * rec.current.vertices().len() + 8;
    for _ in 0..limit {
        if match_core_shape(&rec.current).is_match() {
            return Ok(true);
        }
        if !non_discrete_connected(&rec.current) {
            return Ok(false);
        }
        let q = &rec.current;
        let through = q
            .vertices()
            .iter()
            .find(|v| q.incoming(v).next().is_some() && q.outgoing(v).next().is_some())
            .cloned();
        if let Some(v) = through {
            rec.push(Op::Contract(v))?;
            last_mutated = None;
            continue;
        }
        let flip = q
            .vertices()
            .iter()
            .filter(|v| Some(*v) != last_mutated.as_ref())
            .find_map(|v| {
                if is_sink(q, v) {
                    Some(Op::MutateSink(v.clone()))
                } else if is_source(q, v) {
                    Some(Op::MutateSource(v.clone()))
                } else {
                    None
                }
            });
        match flip {
            Some(op) => {
                last_mutated = op.vertex().map(str::to_string);
                rec.push(op)?;
            }
            None => return Ok(false),
        }
    }
    Ok(false)
}

/// Breadth-first search over operation sequences for a core shape. Only
/// connected non-discrete quivers are explored, since the operations never
/// turn a discrete quiver into a non-discrete one.
fn fallback_search(start: &GradedQuiver, options: ReduceOptions) -> Option<Vec<Op>> {
    let mut visited: BTreeSet<_> = BTreeSet::from([start.shape_key()]);
    let mut frontier: Vec<(GradedQuiver, Vec<Op>)> = vec![(start.clone(), Vec::new())];
    if match_core_shape(start).is_match() {
        return Some(Vec::new());
    }
    for _ in 0..options.max_depth {
        let mut next = Vec::new();
        for (q, path) in &frontier {
            for v in q.vertices() {
                let ops = [
                    Op::Delete(v.clone()),
                    Op::Contract(v.clone()),
                    Op::MutateSink(v.clone()),
                    Op::MutateSource(v.clone()),
                ];
                for op in ops {
                    let Ok(after) = op.apply(q) else { continue };
                    if !visited.insert(after.shape_key()) || !non_discrete_connected(&after) {
                        continue;
                    }
                    let mut p = path.clone();
                    p.push(op);
                    if match_core_shape(&after).is_match() {
                        return Some(p);
                    }
                    if visited.len() > options.max_states {
                        return None;
                    }
                    next.push((after, p));
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

pub fn reduce_to_core(q: &GradedQuiver) -> Result<ReductionTrace> {
    reduce_to_core_with(q, ReduceOptions::default())
}

pub fn reduce_to_core_with(q: &GradedQuiver, options: ReduceOptions) -> Result<ReductionTrace> {
    if classify(q)?.discrete {
        return Err(Error::DiscreteInput);
    }
    let (_, potential, connected) = q.normalize()?;
    if !connected {
        return Err(Error::Normalization(
            "the degree-zero part stays disconnected after normalization".into(),
        ));
    }
    let mut rec = Recorder {
        steps: Vec::new(),
        current: q.clone(),
    };
    if !potential.is_zero() {
        rec.push(Op::ApplyPotential(potential))?;
    }
    let normalized = rec.current.clone();
    let base_steps = rec.steps.len();
    let mut notes = Vec::new();
    let mut selection = None;

    let zero_is_dynkin = normalized.degree_zero_part().graph_type().is_ok_and(|t| t.is_dynkin());
    let mut done = match_core_shape(&normalized).is_match();
    if !done && zero_is_dynkin {
        let sel = select_minimal_negative_arrow(&normalized)?;
        let on_walk: BTreeSet<&String> = sel.walk.iter().collect();
        let mut keep_extra = None;
        if sel.parallel == 1 {
            match choose_extra_vertex(&normalized, &sel.walk) {
                Some((v, how)) => {
                    notes.push(format!("extra vertex {v}: {how}"));
                    keep_extra = Some(v);
                }
                None => notes.push("no vertex adjacent to the walk".into()),
            }
        }
        let doomed: Vec<String> = normalized
            .vertices()
            .iter()
            .filter(|v| !on_walk.contains(v) && Some(*v) != keep_extra.as_ref())
            .cloned()
            .collect();
        for v in doomed {
            rec.push(Op::Delete(v))?;
        }
        selection = Some(sel);
        done = proof_loop(&mut rec)?;
    } else if !done {
        notes.push("degree-zero part is not Dynkin; using search".into());
    }

    let mut used_fallback = false;
    if !done {
        used_fallback = true;
        rec.steps.truncate(base_steps);
        rec.current = normalized.clone();
        match fallback_search(&normalized, options) {
            Some(ops) => {
                for op in ops {
                    rec.push(op)?;
                }
            }
            None => {
                notes.push(format!(
                    "search exhausted (depth {}, {} states)",
                    options.max_depth, options.max_states
                ));
                return Ok(ReductionTrace {
                    input: q.clone(),
                    selection,
                    terminal: CoreShape::none(&rec.current),
                    steps: rec.steps,
                    used_fallback,
                    notes,
                });
            }
        }
    }
    let terminal = match_core_shape(&rec.current);
    if !terminal.tag.witness_available() {
        notes.push("witness construction unavailable at these parameters".into());
    }
    Ok(ReductionTrace {
        input: q.clone(),
        selection,
        steps: rec.steps,
        terminal,
        used_fallback,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> GradedQuiver {
        GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "2", "3", 0), ("c", "1", "3", -1)],
        )
        .unwrap()
    }

    #[test]
    fn delete_and_contract_triangle() {
        let d = delete_vertex(&triangle(), "2").unwrap();
        assert_eq!(d.arrows().len(), 1);
        let c = contract_vertex(&triangle(), "2").unwrap();
        let mut degrees: Vec<i64> = c.arrows().iter().map(|a| a.degree).collect();
        degrees.sort();
        assert_eq!(degrees, vec![-1, 0]);
        assert!(c.arrow("b∘a").is_some());
        assert!(delete_vertex(&triangle(), "9").is_err());
    }

    #[test]
    fn contract_adds_degrees() {
        let q = GradedQuiver::from_spec(&["1", "2", "3"], &[("a", "1", "2", -2), ("b", "2", "3", -3)]).unwrap();
        let c = contract_vertex(&q, "2").unwrap();
        assert_eq!(c.arrows()[0].degree, -5);
        assert_eq!(contract_vertex(&q, "3").unwrap(), delete_vertex(&q, "3").unwrap());
    }

    #[test]
    fn restrictive_sinks() {
        let q = GradedQuiver::from_spec(&["1", "2", "3"], &[("a", "1", "2", 0), ("b", "3", "2", -1)]).unwrap();
        assert!(!is_sink(&q, "2"));
        assert!(matches!(mutate_sink(&q, "2"), Err(Error::NotSinkOrSource { .. })));
        let iso = GradedQuiver::from_spec(&["1"], &[]).unwrap();
        assert!(!is_sink(&iso, "1") && !is_source(&iso, "1"));
    }

    #[test]
    fn mutation_example_and_inverse() {
        let q = GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "3", "2", 0), ("c", "1", "3", -1)],
        )
        .unwrap();
        let m = mutate_sink(&q, "2").unwrap();
        assert_eq!(
            m.shape_key().1,
            vec![
                ("1".into(), "3".into(), -1),
                ("2".into(), "1".into(), 0),
                ("2".into(), "3".into(), 0)
            ]
        );
        assert_eq!(mutate_source(&m, "2").unwrap(), q);
        let deep = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", -2)]).unwrap();
        assert_eq!(mutate_sink(&deep, "2").unwrap().arrows()[0].degree, 2);
    }

    #[test]
    fn core_shapes() {
        let a = GradedQuiver::from_spec(
            &["x", "y", "z"],
            &[("p", "x", "y", 0), ("q", "x", "y", -4), ("r", "y", "z", 0)],
        )
        .unwrap();
        assert_eq!(match_core_shape(&a).tag, CoreTag::CaseA { n: 4 });
        let a_op = a.opposite();
        let m = match_core_shape(&a_op);
        assert_eq!((m.tag, m.opposite), (CoreTag::CaseA { n: 4 }, true));
        let k = GradedQuiver::from_spec(
            &["1", "2"],
            &[("a", "1", "2", -1), ("b", "1", "2", -1), ("c", "1", "2", -1)],
        )
        .unwrap();
        assert_eq!(match_core_shape(&k).tag, CoreTag::KroneckerDegZero { arrows: 3 });
        let path = GradedQuiver::from_spec(&["1", "2", "3"], &[("a", "1", "2", 0), ("b", "2", "3", 0)]).unwrap();
        assert_eq!(match_core_shape(&path).tag, CoreTag::None);
    }

    #[test]
    fn selection_on_kronecker() {
        let q = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0), ("b", "1", "2", -1)]).unwrap();
        let s = select_minimal_negative_arrow(&q).unwrap();
        assert_eq!((s.arrow.as_str(), s.n, s.parallel), ("b", 1, 1));
        assert_eq!(s.walk, vec!["1", "2"]);
    }

    #[test]
    fn discrete_input_rejected() {
        assert!(matches!(reduce_to_core(&triangle()), Err(Error::DiscreteInput)));
    }

    fn ops(trace: &ReductionTrace) -> Vec<String> {
        trace.ops().iter().map(|o| o.to_string()).collect()
    }

    #[test]
    fn first_worked_example() {
        let q = GradedQuiver::from_spec(
            &["1", "2", "3", "4", "5", "6"],
            &[
                ("a", "1", "2", 0),
                ("b", "2", "3", 0),
                ("c", "2", "4", 0),
                ("d", "5", "4", 0),
                ("e", "5", "6", 0),
                ("f", "3", "6", -1),
                ("alpha", "1", "5", -1),
                ("alpha2", "1", "5", -1),
            ],
        )
        .unwrap();
        let t = reduce_to_core(&q).unwrap();
        assert_eq!(ops(&t), ["Delete 3", "Delete 6", "Contract 2", "Contract 5"]);
        assert_eq!(
            t.terminal.tag,
            CoreTag::CaseC {
                arrows: 3,
                degrees: vec![0, -1, -1]
            }
        );
        assert_eq!(t.selection.as_ref().unwrap().parallel, 2);
        assert!(t.replay().unwrap());
    }

    #[test]
    fn second_worked_example() {
        let q = GradedQuiver::from_spec(
            &["0", "1", "2", "3", "4", "5"],
            &[
                ("a", "1", "0", 0),
                ("b", "2", "1", 0),
                ("c", "3", "2", 0),
                ("d", "3", "4", 0),
                ("e", "3", "5", 0),
                ("f", "0", "4", -1),
                ("alpha", "1", "5", -1),
            ],
        )
        .unwrap();
        let t = reduce_to_core(&q).unwrap();
        assert_eq!(ops(&t), ["Delete 0", "Contract 1", "Contract 2", "MutateSink 4"]);
        assert_eq!(
            (t.terminal.tag.clone(), t.terminal.opposite),
            (CoreTag::CaseA { n: 1 }, true)
        );
        assert!(t.replay().unwrap());
    }

    #[test]
    fn third_worked_example() {
        let q = GradedQuiver::from_spec(
            &["1", "2", "3", "4", "5", "6"],
            &[
                ("a", "1", "2", 0),
                ("b", "2", "3", 0),
                ("c", "4", "3", 0),
                ("d", "4", "5", 0),
                ("e", "6", "5", 0),
                ("alpha", "1", "5", -1),
                ("beta", "6", "2", -1),
            ],
        )
        .unwrap();
        let t = reduce_to_core(&q).unwrap();
        assert_eq!(ops(&t), ["Contract 2", "MutateSource 4", "Contract 3", "Contract 5"]);
        assert_eq!(t.terminal.tag, CoreTag::CaseB { m: 1, n: 1 });
        assert!(t.replay().unwrap());
    }
}

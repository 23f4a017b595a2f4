//! Graded quivers: the data model, the line-oriented text format, underlying
//! graph recognition and degree normalization by vertex potentials.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub name: String,
    pub source: String,
    pub target: String,
    pub degree: i64,
}

impl Arrow {
    pub fn new(name: impl Into<String>, source: impl Into<String>, target: impl Into<String>, degree: i64) -> Self {
        Arrow {
            name: name.into(),
            source: source.into(),
            target: target.into(),
            degree,
        }
    }
}

/// A finite quiver whose arrows carry integer degrees.
///
/// Vertices are kept sorted and arrows are kept sorted by name, so derived
/// equality is structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedQuiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == ':' || c == '#')
}

impl GradedQuiver {
    pub fn new<V: Into<String>>(vertices: impl IntoIterator<Item = V>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut vs: Vec<String> = Vec::new();
        let mut seen = BTreeSet::new();
        for v in vertices {
            let v = v.into();
            if !valid_token(&v) {
                return Err(Error::InvalidQuiver(format!("bad vertex identifier {v:?}")));
            }
            if !seen.insert(v.clone()) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex {v:?}")));
            }
            vs.push(v);
        }
        vs.sort();
        let mut names = BTreeSet::new();
        for a in &arrows {
            if !valid_token(&a.name) {
                return Err(Error::InvalidQuiver(format!("bad arrow name {:?}", a.name)));
            }
            if !names.insert(a.name.clone()) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow name {:?}", a.name)));
            }
            for end in [&a.source, &a.target] {
                if !seen.contains(end) {
                    return Err(Error::UnknownVertex(end.clone()));
                }
            }
        }
        let mut arrows = arrows;
        arrows.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(GradedQuiver { vertices: vs, arrows })
    }

    /// Shorthand for tests and builders: `(name, source, target, degree)`.
    pub fn from_spec(vertices: &[&str], arrows: &[(&str, &str, &str, i64)]) -> Result<Self> {
        GradedQuiver::new(
            vertices.iter().copied(),
            arrows.iter().map(|&(n, s, t, d)| Arrow::new(n, s, t, d)).collect(),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.binary_search_by(|x| x.as_str().cmp(v)).is_ok()
    }

    pub fn arrow(&self, name: &str) -> Option<&Arrow> {
        self.arrows
            .binary_search_by(|a| a.name.as_str().cmp(name))
            .ok()
            .map(|i| &self.arrows[i])
    }

    pub fn incoming<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a Arrow> + 'a {
        self.arrows.iter().filter(move |a| a.target == v)
    }

    pub fn outgoing<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a Arrow> + 'a {
        self.arrows.iter().filter(move |a| a.source == v)
    }

    /// Topological order (sources first, ties by identifier), or `None` if
    /// there is a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<String>> {
        let mut indeg: BTreeMap<&str, usize> = self.vertices.iter().map(|v| (v.as_str(), 0)).collect();
        for a in &self.arrows {
            *indeg.get_mut(a.target.as_str()).unwrap() += 1;
        }
        let mut ready: BTreeSet<&str> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = ready.pop_first() {
            order.push(v.to_string());
            for a in self.outgoing(v) {
                let d = indeg.get_mut(a.target.as_str()).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.insert(a.target.as_str());
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Connected components of the underlying undirected graph, each sorted,
    /// listed by least vertex.
    pub fn components(&self) -> Vec<Vec<String>> {
        components_of(
            &self.vertices,
            self.arrows.iter().map(|a| (a.source.as_str(), a.target.as_str())),
        )
    }

    /// Connectivity of the underlying graph; the empty quiver is not connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Full subquiver on `keep`.
    pub fn induced(&self, keep: &BTreeSet<String>) -> GradedQuiver {
        GradedQuiver {
            vertices: self.vertices.iter().filter(|v| keep.contains(*v)).cloned().collect(),
            arrows: self
                .arrows
                .iter()
                .filter(|a| keep.contains(&a.source) && keep.contains(&a.target))
                .cloned()
                .collect(),
        }
    }

    pub fn degree_zero_part(&self) -> GradedQuiver {
        GradedQuiver {
            vertices: self.vertices.clone(),
            arrows: self.arrows.iter().filter(|a| a.degree == 0).cloned().collect(),
        }
    }

    /// All arrows reversed, names and degrees kept.
    pub fn opposite(&self) -> GradedQuiver {
        GradedQuiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow::new(a.name.clone(), a.target.clone(), a.source.clone(), a.degree))
                .collect(),
        }
    }

    /// `deg'(a) = deg(a) + g(s(a)) - g(t(a))`; vertices missing from `g`
    /// count as zero.
    pub fn apply_potential(&self, g: &VertexPotential) -> GradedQuiver {
        GradedQuiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| {
                    let mut b = a.clone();
                    b.degree = a.degree + g.get(&a.source) - g.get(&a.target);
                    b
                })
                .collect(),
        }
    }

    /// Sorted `(source, target, degree)` triples: the quiver up to arrow names.
    pub fn shape_key(&self) -> (Vec<String>, Vec<(String, String, i64)>) {
        let mut arrows: Vec<_> = self
            .arrows
            .iter()
            .map(|a| (a.source.clone(), a.target.clone(), a.degree))
            .collect();
        arrows.sort();
        (self.vertices.clone(), arrows)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.arrows.iter().map(|a| a.degree).max()
    }

    /// Canonical text form: sorted vertices, arrows sorted by name.
    pub fn to_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.vertices.join(" "));
        for a in &self.arrows {
            out.push_str(&format!(
                "arrow {}: {} -> {} deg {}\n",
                a.name, a.source, a.target, a.degree
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices: Option<(usize, Vec<String>)> = None;
        let mut arrows: Vec<(usize, Arrow)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            if let Some(rest) = line.strip_prefix("vertices:") {
                if vertices.is_some() {
                    return Err(err("second `vertices:` line".into()));
                }
                let vs: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                let mut seen = BTreeSet::new();
                for v in &vs {
                    if !valid_token(v) {
                        return Err(err(format!("bad vertex identifier {v:?}")));
                    }
                    if !seen.insert(v) {
                        return Err(err(format!("duplicate vertex {v:?}")));
                    }
                }
                vertices = Some((line_no, vs));
            } else if let Some(rest) = line.strip_prefix("arrow ") {
                let (name, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `arrow <name>: <src> -> <tgt> deg <int>`".into()))?;
                let name = name.trim();
                if !valid_token(name) {
                    return Err(err(format!("bad arrow name {name:?}")));
                }
                let toks: Vec<&str> = body.split_whitespace().collect();
                if toks.len() != 5 || toks[1] != "->" || toks[3] != "deg" {
                    return Err(err("expected `<src> -> <tgt> deg <int>`".into()));
                }
                let degree: i64 = toks[4]
                    .parse()
                    .map_err(|_| err(format!("malformed degree {:?}", toks[4])))?;
                if arrows.iter().any(|(_, a)| a.name == name) {
                    return Err(err(format!("duplicate arrow name {name:?}")));
                }
                arrows.push((line_no, Arrow::new(name, toks[0], toks[2], degree)));
            } else {
                return Err(err(format!("unrecognized line {line:?}")));
            }
        }
        let (_, vs) = vertices.ok_or(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing `vertices:` line".into(),
        })?;
        let declared: BTreeSet<&String> = vs.iter().collect();
        for (line, a) in &arrows {
            for end in [&a.source, &a.target] {
                if !declared.contains(end) {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!("undeclared vertex {end:?}"),
                    });
                }
            }
        }
        GradedQuiver::new(vs, arrows.into_iter().map(|(_, a)| a).collect())
    }

    fn require_connected_acyclic(&self) -> Result<()> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if !self.is_acyclic() {
            return Err(Error::Cyclic);
        }
        Ok(())
    }

    /// Recognizes the underlying undirected multigraph.
    pub fn graph_type(&self) -> Result<GraphType> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(underlying_type(
            &self.vertices,
            &self
                .arrows
                .iter()
                .map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str()))
                .collect::<Vec<_>>(),
        ))
    }

    /// `(aligned_total, anti_total)` along the fixed cycle traversal.
    pub fn cycle_degree_totals(&self) -> Result<(i64, i64)> {
        match self.graph_type()? {
            GraphType::ACycle(t) => Ok(t.totals(self)),
            other => Err(Error::NotAtilde(other.to_string())),
        }
    }

    /// Shifts degrees so all are `<= 0` and, where possible, the degree-zero
    /// part is connected. Returns the shifted quiver, the potential that
    /// produces it, and whether the degree-zero part came out connected.
    pub fn normalize(&self) -> Result<(GradedQuiver, VertexPotential, bool)> {
        self.require_connected_acyclic()?;
        let order = self.topological_order().expect("acyclic");
        // Longest-path potential: g(v) = max degree of a directed path ending at v.
        let mut g: BTreeMap<String, i64> = self.vertices.iter().map(|v| (v.clone(), 0)).collect();
        for v in &order {
            let best = self
                .incoming(v)
                .map(|a| g[&a.source] + a.degree)
                .max()
                .unwrap_or(0)
                .max(0);
            g.insert(v.clone(), best);
        }
        let mut potential = VertexPotential::from_map(g);
        let mut current = self.apply_potential(&potential);
        debug_assert!(current.arrows.iter().all(|a| a.degree <= 0));

        // Merge degree-zero components: shift the component of the least
        // vertex until one crossing arrow becomes degree zero.
        loop {
            let comps = current.degree_zero_part().components();
            if comps.len() <= 1 {
                break;
            }
            let comp: BTreeSet<&str> = comps[0].iter().map(String::as_str).collect();
            let out_slack = current
                .arrows
                .iter()
                .filter(|a| comp.contains(a.source.as_str()) && !comp.contains(a.target.as_str()))
                .map(|a| -a.degree)
                .min();
            let in_slack = current
                .arrows
                .iter()
                .filter(|a| comp.contains(a.target.as_str()) && !comp.contains(a.source.as_str()))
                .map(|a| -a.degree)
                .min();
            let shift = match (out_slack, in_slack) {
                (Some(s), _) => s,
                (None, Some(s)) => -s,
                (None, None) => unreachable!("connected quiver has a crossing arrow"),
            };
            debug_assert!(shift != 0);
            let step = VertexPotential::from_map(comp.iter().map(|v| (v.to_string(), shift)).collect());
            current = current.apply_potential(&step);
            potential = potential.compose(&step);
        }
        let connected = current.degree_zero_part().is_connected();
        Ok((current, potential, connected))
    }
}

impl fmt::Display for GradedQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for GradedQuiver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GradedQuiver::parse(s)
    }
}

impl Serialize for GradedQuiver {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for GradedQuiver {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        GradedQuiver::parse(&text).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn components_of<'a>(
    vertices: &[String],
    edges: impl Iterator<Item = (&'a str, &'a str)>,
) -> Vec<Vec<String>> {
    let mut adj: BTreeMap<&str, Vec<&str>> = vertices.iter().map(|v| (v.as_str(), Vec::new())).collect();
    for (s, t) in edges {
        adj.get_mut(s).unwrap().push(t);
        adj.get_mut(t).unwrap().push(s);
    }
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut comps = Vec::new();
    for v in vertices {
        if seen.contains(v.as_str()) {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([v.as_str()]);
        seen.insert(v);
        while let Some(x) = queue.pop_front() {
            comp.push(x.to_string());
            for &y in &adj[x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        comp.sort();
        comps.push(comp);
    }
    comps
}

/// Integer potential on vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexPotential(BTreeMap<String, i64>);

impl VertexPotential {
    pub fn zero() -> Self {
        VertexPotential::default()
    }

    pub fn from_map(map: BTreeMap<String, i64>) -> Self {
        VertexPotential(map.into_iter().filter(|(_, v)| *v != 0).collect())
    }

    pub fn from_pairs(pairs: &[(&str, i64)]) -> Self {
        VertexPotential::from_map(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    pub fn get(&self, v: &str) -> i64 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(|&v| v == 0)
    }

    pub fn negated(&self) -> Self {
        VertexPotential(self.0.iter().map(|(k, v)| (k.clone(), -v)).collect())
    }

    /// Pointwise sum: applying `self` then `other` equals applying the sum.
    pub fn compose(&self, other: &VertexPotential) -> Self {
        let mut m = self.0.clone();
        for (k, v) in &other.0 {
            *m.entry(k.clone()).or_insert(0) += v;
        }
        VertexPotential::from_map(m)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &i64)> {
        self.0.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleStep {
    pub arrow: String,
    /// Whether the arrow points along the traversal direction.
    pub aligned: bool,
}

/// Traversal of an A~ cycle: starts at the least vertex and heads toward its
/// least cycle neighbour (for two vertices, along the least-named arrow).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleTraversal {
    pub length: usize,
    pub start: String,
    pub steps: Vec<CycleStep>,
}

impl CycleTraversal {
    pub fn totals(&self, q: &GradedQuiver) -> (i64, i64) {
        let mut aligned = 0;
        let mut anti = 0;
        for step in &self.steps {
            let d = q.arrow(&step.arrow).expect("traversal arrow").degree;
            if step.aligned {
                aligned += d;
            } else {
                anti += d;
            }
        }
        (aligned, anti)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphType {
    A(usize),
    D(usize),
    E(usize),
    ACycle(CycleTraversal),
    Other,
}

impl GraphType {
    pub fn is_dynkin(&self) -> bool {
        matches!(self, GraphType::A(_) | GraphType::D(_) | GraphType::E(_))
    }

    /// Compact label such as `A4`, `D5`, `E6`, `Atilde3`, `Other`.
    pub fn label(&self) -> String {
        match self {
            GraphType::A(n) => format!("A{n}"),
            GraphType::D(n) => format!("D{n}"),
            GraphType::E(n) => format!("E{n}"),
            GraphType::ACycle(t) => format!("Atilde{}", t.length),
            GraphType::Other => "Other".into(),
        }
    }
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Classifies a connected multigraph given as named edges.
pub(crate) fn underlying_type(vertices: &[String], edges: &[(&str, &str, &str)]) -> GraphType {
    let n = vertices.len();
    let m = edges.len();
    if edges.iter().any(|(_, s, t)| s == t) {
        return GraphType::Other;
    }
    let mut deg: BTreeMap<&str, usize> = vertices.iter().map(|v| (v.as_str(), 0)).collect();
    let mut adj: BTreeMap<&str, Vec<(&str, &str)>> = vertices.iter().map(|v| (v.as_str(), Vec::new())).collect();
    for &(name, s, t) in edges {
        *deg.get_mut(s).unwrap() += 1;
        *deg.get_mut(t).unwrap() += 1;
        adj.get_mut(s).unwrap().push((t, name));
        adj.get_mut(t).unwrap().push((s, name));
    }
    if m + 1 == n {
        let branch: Vec<&str> = deg.iter().filter(|(_, &d)| d >= 3).map(|(&v, _)| v).collect();
        if branch.is_empty() {
            return GraphType::A(n);
        }
        if branch.len() > 1 || deg[branch[0]] > 3 {
            return GraphType::Other;
        }
        let center = branch[0];
        let mut legs: Vec<usize> = adj[center]
            .iter()
            .map(|&(start, _)| {
                let (mut prev, mut cur, mut len) = (center, start, 1);
                loop {
                    let next: Vec<&str> = adj[cur].iter().map(|&(x, _)| x).filter(|&x| x != prev).collect();
                    match next.as_slice() {
                        [] => break len,
                        [x] => {
                            prev = cur;
                            cur = x;
                            len += 1;
                        }
                        _ => unreachable!("single branch point"),
                    }
                }
            })
            .collect();
        legs.sort();
        return match legs.as_slice() {
            [1, 1, _] => GraphType::D(n),
            [1, 2, 2] => GraphType::E(6),
            [1, 2, 3] => GraphType::E(7),
            [1, 2, 4] => GraphType::E(8),
            _ => GraphType::Other,
        };
    }
    if m == n && n >= 2 && deg.values().all(|&d| d == 2) {
        let start = vertices[0].as_str();
        let mut first: Vec<(&str, &str)> = adj[start].clone();
        first.sort();
        let edge_of = |name: &str| edges.iter().find(|e| e.0 == name).copied().unwrap();
        let mut used: BTreeSet<&str> = BTreeSet::new();
        let mut steps = Vec::with_capacity(n);
        let mut cur = start;
        let (mut next, mut via) = first[0];
        loop {
            used.insert(via);
            let (_, s, _) = edge_of(via);
            steps.push(CycleStep {
                arrow: via.to_string(),
                aligned: s == cur,
            });
            cur = next;
            if steps.len() == m {
                break;
            }
            let cont = adj[cur]
                .iter()
                .filter(|(_, e)| !used.contains(e))
                .min()
                .copied()
                .expect("cycle continues");
            next = cont.0;
            via = cont.1;
        }
        debug_assert_eq!(cur, start);
        return GraphType::ACycle(CycleTraversal {
            length: n,
            start: start.to_string(),
            steps,
        });
    }
    GraphType::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> GradedQuiver {
        GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "2", "3", -1), ("c", "1", "3", 0)],
        )
        .unwrap()
    }

    #[test]
    fn parse_triangle() {
        let text =
            "# triangle\nvertices: 1 2 3\narrow a: 1 -> 2 deg 0\narrow b: 2 -> 3 deg -1\narrow c: 1 -> 3 deg 0\n";
        let q = GradedQuiver::parse(text).unwrap();
        assert_eq!(q, triangle());
        assert_eq!(q.vertices().len(), 3);
        assert_eq!(q.arrows().len(), 3);
    }

    #[test]
    fn parse_single_vertex() {
        let q = GradedQuiver::parse("vertices: x\n").unwrap();
        assert_eq!(q.vertices(), ["x"]);
        assert!(q.arrows().is_empty());
        assert_eq!(q.to_text(), "vertices: x\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dup = "vertices: 1 2\narrow a: 1 -> 2 deg 0\narrow a: 1 -> 2 deg 1\n";
        assert!(matches!(GradedQuiver::parse(dup), Err(Error::Parse { line: 3, .. })));
        let undeclared = "vertices: 1 2\n\narrow a: 1 -> 7 deg 0\n";
        assert!(matches!(
            GradedQuiver::parse(undeclared),
            Err(Error::Parse { line: 3, .. })
        ));
        let bad_deg = "vertices: 1 2\narrow a: 1 -> 2 deg x\n";
        assert!(matches!(
            GradedQuiver::parse(bad_deg),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(GradedQuiver::parse("arrow a: 1 -> 2 deg 0\n").is_err());
    }

    #[test]
    fn parallel_arrows_serialize_separately() {
        let q = GradedQuiver::from_spec(&["1", "2"], &[("b", "1", "2", -1), ("a", "1", "2", 0)]).unwrap();
        assert_eq!(
            q.to_text(),
            "vertices: 1 2\narrow a: 1 -> 2 deg 0\narrow b: 1 -> 2 deg -1\n"
        );
        assert_eq!(GradedQuiver::parse(&q.to_text()).unwrap(), q);
    }

    #[test]
    fn acyclicity_and_connectivity() {
        let path = GradedQuiver::from_spec(&["1", "2", "3"], &[("a", "1", "2", 0), ("b", "2", "3", 0)]).unwrap();
        assert!(path.is_acyclic() && path.is_connected());
        let two_cycle = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0), ("b", "2", "1", 0)]).unwrap();
        assert!(!two_cycle.is_acyclic());
        let isolated = GradedQuiver::from_spec(&["1", "2"], &[]).unwrap();
        assert!(!isolated.is_connected());
    }

    #[test]
    fn graph_types() {
        let a4 = GradedQuiver::from_spec(
            &["1", "2", "3", "4"],
            &[("a", "1", "2", 0), ("b", "3", "2", 0), ("c", "3", "4", 5)],
        )
        .unwrap();
        assert_eq!(a4.graph_type().unwrap(), GraphType::A(4));
        let kron = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0), ("b", "1", "2", 0)]).unwrap();
        assert!(matches!(kron.graph_type().unwrap(), GraphType::ACycle(ref t) if t.length == 2));
        let piece_a = GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "1", "2", -1), ("c", "2", "3", 0)],
        )
        .unwrap();
        assert_eq!(piece_a.graph_type().unwrap(), GraphType::Other);
        let k3 = GradedQuiver::from_spec(
            &["1", "2"],
            &[("a", "1", "2", 0), ("b", "1", "2", 0), ("c", "1", "2", 0)],
        )
        .unwrap();
        assert_eq!(k3.graph_type().unwrap(), GraphType::Other);
        let d4 = GradedQuiver::from_spec(
            &["c", "x", "y", "z"],
            &[("a", "x", "c", 0), ("b", "y", "c", 0), ("d", "c", "z", 0)],
        )
        .unwrap();
        assert_eq!(d4.graph_type().unwrap(), GraphType::D(4));
        assert_eq!(
            GradedQuiver::from_spec(&["1", "2"], &[]).unwrap().graph_type(),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn e_types_by_leg_lengths() {
        // Star with legs (1, 2, k): E6, E7, E8, then beyond Dynkin.
        for (k, expect) in [
            (2, GraphType::E(6)),
            (3, GraphType::E(7)),
            (4, GraphType::E(8)),
            (5, GraphType::Other),
        ] {
            let mut vs = vec!["c".to_string(), "p1".to_string(), "q1".to_string(), "q2".to_string()];
            let mut arrows = vec![
                Arrow::new("e_p1", "c", "p1", 0),
                Arrow::new("e_q1", "c", "q1", 0),
                Arrow::new("e_q2", "q1", "q2", 0),
            ];
            let mut prev = "c".to_string();
            for i in 1..=k {
                let v = format!("r{i}");
                arrows.push(Arrow::new(format!("e_r{i}"), prev.clone(), v.clone(), 0));
                vs.push(v.clone());
                prev = v;
            }
            let q = GradedQuiver::new(vs, arrows).unwrap();
            assert_eq!(q.graph_type().unwrap(), expect, "leg {k}");
        }
    }

    #[test]
    fn cycle_totals_examples() {
        let zero = GradedQuiver::from_spec(
            &["1", "2", "3", "4"],
            &[
                ("a", "1", "2", 0),
                ("b", "2", "3", 0),
                ("c", "4", "3", 0),
                ("d", "1", "4", 0),
            ],
        )
        .unwrap();
        assert_eq!(zero.cycle_degree_totals().unwrap(), (0, 0));
        assert_eq!(triangle().cycle_degree_totals().unwrap(), (-1, 0));
        let kron = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0), ("b", "1", "2", -7)]).unwrap();
        assert_eq!(kron.cycle_degree_totals().unwrap(), (0, -7));
        let path = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0)]).unwrap();
        assert!(matches!(path.cycle_degree_totals(), Err(Error::NotAtilde(_))));
    }

    #[test]
    fn potentials() {
        let q = triangle();
        assert_eq!(q.apply_potential(&VertexPotential::zero()), q);
        let a2 = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", -3)]).unwrap();
        let shifted = a2.apply_potential(&VertexPotential::from_pairs(&[("1", 0), ("2", -3)]));
        assert_eq!(shifted.arrow("a").unwrap().degree, 0);
        let g = VertexPotential::from_pairs(&[("1", 4), ("3", -2)]);
        assert_eq!(q.apply_potential(&g).apply_potential(&g.negated()), q);
    }

    #[test]
    fn normalize_examples() {
        let already = triangle();
        let (out, g, flag) = already.normalize().unwrap();
        assert_eq!(out, already);
        assert!(g.is_zero() && flag);

        let a2t = GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "2", "3", 0), ("c", "1", "3", 1)],
        )
        .unwrap();
        let (out, g, flag) = a2t.normalize().unwrap();
        let degs: Vec<i64> = out.arrows().iter().map(|a| a.degree).collect();
        assert_eq!(degs, vec![0, -1, 0]);
        assert!(flag);
        assert_eq!(a2t.apply_potential(&g), out);

        let kron = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0), ("b", "1", "2", 5)]).unwrap();
        let (out, _, flag) = kron.normalize().unwrap();
        let degs: Vec<i64> = out.arrows().iter().map(|a| a.degree).collect();
        assert_eq!(degs, vec![-5, 0]);
        assert!(flag);

        let cyclic = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0), ("b", "2", "1", 0)]).unwrap();
        assert_eq!(cyclic.normalize(), Err(Error::Cyclic));
    }

    #[test]
    fn normalize_connects_degree_zero_part_beyond_trees() {
        // 1 -> 2 twice and 2 -> 3, all positive: the second pass must merge.
        let q = GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 2), ("b", "1", "2", 5), ("c", "2", "3", 3)],
        )
        .unwrap();
        let (out, g, flag) = q.normalize().unwrap();
        assert!(flag);
        assert!(out.arrows().iter().all(|a| a.degree <= 0));
        assert_eq!(q.apply_potential(&g), out);
    }

    #[test]
    fn degree_zero_part_and_opposite() {
        let q = triangle();
        let zero = q.degree_zero_part();
        let names: Vec<&str> = zero.arrows().iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["a", "c"]);
        assert_eq!(q.opposite().opposite(), q);
        assert_eq!(q.opposite().arrow("b").unwrap().source, "3");
    }
}

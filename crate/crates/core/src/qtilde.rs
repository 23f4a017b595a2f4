//! Level quivers `Q̃^[−n,0]`, their Dynkin decomposition, indecomposable
//! counts via positive roots, and a brute-force counting oracle over small
//! prime fields.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ExactField, Scalar};
use crate::linalg::Matrix;
use crate::quiver::{components_of, underlying_type, Arrow, GradedQuiver, GraphType};
use crate::repcat::hom::hom_basis;
use crate::repcat::rep::{GradedRep, Slot};

pub type LevelVertex = (String, i64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelArrow {
    pub arrow: String,
    pub level: i64,
    pub source: LevelVertex,
    pub target: LevelVertex,
}

/// The ungraded quiver with vertices `(i, l)` for `l ∈ [−n, 0]` and an arrow
/// `(i, l) → (j, l + deg α)` for each arrow `α: i → j` that stays in range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelQuiver {
    pub n: i64,
    pub vertices: Vec<LevelVertex>,
    pub arrows: Vec<LevelArrow>,
}

pub fn level_name(v: &LevelVertex) -> String {
    format!("{}@{}", v.0, v.1)
}

pub fn build_qtilde(q: &GradedQuiver, n: i64) -> Result<LevelQuiver> {
    if n < 0 {
        return Err(Error::Precondition(format!("level bound must be nonnegative, got {n}")));
    }
    if let Some(a) = q.arrows().iter().find(|a| a.degree > 0) {
        return Err(Error::PositiveDegree(format!(
            "arrow {} has degree {}",
            a.name, a.degree
        )));
    }
    let mut vertices = Vec::new();
    for v in q.vertices() {
        for l in -n..=0 {
            vertices.push((v.clone(), l));
        }
    }
    let mut arrows = Vec::new();
    for a in q.arrows() {
        for l in -n..=0 {
            let e = l + a.degree;
            if e >= -n {
                arrows.push(LevelArrow {
                    arrow: a.name.clone(),
                    level: l,
                    source: (a.source.clone(), l),
                    target: (a.target.clone(), e),
                });
            }
        }
    }
    Ok(LevelQuiver { n, vertices, arrows })
}

impl LevelQuiver {
    /// The level quiver as an ungraded [`GradedQuiver`] (all degrees 0) with
    /// vertices named `i@l` and arrows `α@l`.
    pub fn to_quiver(&self) -> GradedQuiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                Arrow::new(
                    format!("{}@{}", a.arrow, a.level),
                    level_name(&a.source),
                    level_name(&a.target),
                    0,
                )
            })
            .collect();
        GradedQuiver::new(self.vertices.iter().map(level_name), arrows).expect("level quiver is well formed")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub vertices: Vec<String>,
    pub graph_type: GraphType,
}

impl Component {
    pub fn is_dynkin(&self) -> bool {
        self.graph_type.is_dynkin()
    }
}

/// Connected components with their ADE type; cycles, multiple edges and
/// everything else are `Other`.
pub fn dynkin_decompose(level: &LevelQuiver) -> Vec<Component> {
    let q = level.to_quiver();
    let comps = components_of(
        q.vertices(),
        q.arrows().iter().map(|a| (a.source.as_str(), a.target.as_str())),
    );
    comps
        .into_iter()
        .map(|vertices| {
            let set: BTreeSet<&String> = vertices.iter().collect();
            let edges: Vec<(&str, &str, &str)> = q
                .arrows()
                .iter()
                .filter(|a| set.contains(&a.source))
                .map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str()))
                .collect();
            let graph_type = match underlying_type(&vertices, &edges) {
                GraphType::ACycle(_) => GraphType::Other,
                t => t,
            };
            Component { vertices, graph_type }
        })
        .collect()
}

/// Positive roots of the simply-laced root system on a graph, by closing
/// the simple roots under simple reflections `s_i(β) = β − (Cβ)_i e_i`.
pub fn positive_roots(size: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut cartan = vec![vec![0i64; size]; size];
    for (i, row) in cartan.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(a, b) in edges {
        cartan[a][b] -= 1;
        cartan[b][a] -= 1;
    }
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..size {
        let mut e = vec![0; size];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..size {
            let pairing: i64 = (0..size).map(|j| cartan[i][j] * beta[j]).sum();
            if pairing == 0 {
                continue;
            }
            let mut next = beta.clone();
            next[i] -= pairing;
            if next.iter().all(|&x| x >= 0) && next.iter().any(|&x| x > 0) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        assert!(
            seen.len() <= 1 << 16,
            "root closure does not terminate: graph is not Dynkin"
        );
    }
    seen.into_iter().collect()
}

/// Edges of the standard Dynkin diagram for a type tag.
fn dynkin_edges(t: &GraphType) -> Result<(usize, Vec<(usize, usize)>)> {
    let path = |n: usize| (1..n).map(|i| (i - 1, i)).collect::<Vec<_>>();
    match *t {
        GraphType::A(n) if n >= 1 => Ok((n, path(n))),
        GraphType::D(n) if n >= 4 => {
            let mut e = path(n - 1);
            e.push((n - 3, n - 1));
            Ok((n, e))
        }
        GraphType::E(n) if (6..=8).contains(&n) => {
            let mut e = path(n - 1);
            e.push((2, n - 1));
            Ok((n, e))
        }
        _ => Err(Error::Unsupported(format!(
            "no finite root system of type {}",
            t.label()
        ))),
    }
}

pub fn positive_root_count(t: &GraphType) -> Result<usize> {
    let (n, edges) = dynkin_edges(t)?;
    Ok(positive_roots(n, &edges).len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IndecCount {
    Finite(usize),
    /// Index of the first non-Dynkin component.
    Infinite {
        witness_component: usize,
    },
}

impl fmt::Display for IndecCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndecCount::Finite(n) => write!(f, "{n}"),
            IndecCount::Infinite { witness_component } => write!(f, "infinite (component {witness_component})"),
        }
    }
}

/// Per-level summary: components, their root counts and the total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub n: i64,
    pub components: Vec<ComponentReport>,
    pub total: IndecCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub vertices: Vec<String>,
    #[serde(rename = "type")]
    pub type_label: String,
    pub roots: Option<usize>,
}

impl LevelReport {
    pub fn dynkin_union(&self) -> bool {
        matches!(self.total, IndecCount::Finite(_))
    }
}

pub fn level_report(q: &GradedQuiver, n: i64) -> Result<LevelReport> {
    let (normal, _, _) = q.normalize()?;
    let comps = dynkin_decompose(&build_qtilde(&normal, n)?);
    let mut total = 0;
    let mut witness = None;
    let mut components = Vec::with_capacity(comps.len());
    for (i, c) in comps.iter().enumerate() {
        let roots = if c.is_dynkin() {
            Some(positive_root_count(&c.graph_type)?)
        } else {
            None
        };
        match roots {
            Some(r) => total += r,
            None => {
                witness.get_or_insert(i);
            }
        }
        components.push(ComponentReport {
            vertices: c.vertices.clone(),
            type_label: c.graph_type.label(),
            roots,
        });
    }
    let total = match witness {
        None => IndecCount::Finite(total),
        Some(i) => IndecCount::Infinite { witness_component: i },
    };
    Ok(LevelReport { n, components, total })
}

/// Number of indecomposables of the level quiver after normalizing `q`.
pub fn count_indec(q: &GradedQuiver, n: i64) -> Result<IndecCount> {
    Ok(level_report(q, n)?.total)
}

/// Limits for the brute-force oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest total dimension of an enumerated dimension vector.
    pub max_total_dim: usize,
    /// Work units: representations enumerated plus endomorphisms and
    /// homomorphisms inspected.
    pub max_work: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_total_dim: 6,
            max_work: 2_000_000,
        }
    }
}

impl OracleBudget {
    /// Default budget, with `max_work` overridden by `GQPA_BUDGET` if set.
    pub fn from_env() -> Result<Self> {
        let mut b = OracleBudget::default();
        if let Ok(v) = std::env::var("GQPA_BUDGET") {
            b.max_work = v
                .trim()
                .parse()
                .map_err(|_| Error::Budget(format!("GQPA_BUDGET must be a nonnegative integer, got {v:?}")))?;
        }
        Ok(b)
    }
}

struct Work {
    used: u64,
    limit: u64,
}

impl Work {
    fn spend(&mut self, units: u64) -> Result<()> {
        self.used = self.used.saturating_add(units);
        if self.used > self.limit {
            return Err(Error::Budget(format!("oracle work budget of {} exceeded", self.limit)));
        }
        Ok(())
    }
}

fn checked_pow(p: u64, e: usize) -> Option<u64> {
    p.checked_pow(u32::try_from(e).ok()?)
}

/// All combinations of the given elements at `k` linear positions, as a
/// callback-driven odometer.
fn for_each_assignment(elements: &[Scalar], k: usize, mut f: impl FnMut(&[Scalar]) -> Result<()>) -> Result<()> {
    let mut idx = vec![0usize; k];
    let mut vals: Vec<Scalar> = vec![elements[0].clone(); k];
    loop {
        f(&vals)?;
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(());
            }
            idx[pos] += 1;
            if idx[pos] < elements.len() {
                vals[pos] = elements[idx[pos]].clone();
                break;
            }
            idx[pos] = 0;
            vals[pos] = elements[0].clone();
            pos += 1;
        }
    }
}

/// Linear combinations `Σ c_i b_i` of morphism bases, as block maps.
fn combination(
    field: &ExactField,
    basis: &[crate::repcat::hom::GradedMorphism],
    coeffs: &[Scalar],
) -> BTreeMap<Slot, Matrix> {
    let mut out: BTreeMap<Slot, Matrix> = BTreeMap::new();
    for (b, c) in basis.iter().zip(coeffs) {
        for (slot, m) in &b.blocks {
            let scaled = Matrix::from_rows(
                m.to_rows()
                    .into_iter()
                    .map(|r| r.iter().map(|x| field.mul(x, c)).collect())
                    .collect(),
            );
            let entry = out
                .entry(slot.clone())
                .or_insert_with(|| Matrix::zeros(m.rows(), m.cols()));
            *entry = entry.add(field, &scaled);
        }
    }
    out
}

fn is_invertible_map(field: &ExactField, blocks: &BTreeMap<Slot, Matrix>, dims: &BTreeMap<Slot, usize>) -> bool {
    dims.keys()
        .all(|slot| blocks.get(slot).is_some_and(|m| m.is_invertible(field)))
}

fn is_nilpotent_map(field: &ExactField, blocks: &BTreeMap<Slot, Matrix>) -> bool {
    blocks.values().all(|m| {
        let mut power = m.clone();
        for _ in 0..m.rows() {
            power = power.mul(field, m);
        }
        power.is_zero()
    })
}

/// Indecomposable iff every endomorphism is nilpotent or invertible.
fn is_indecomposable(rep: &GradedRep, work: &mut Work) -> Result<bool> {
    let field = rep.field();
    let basis = hom_basis(rep, rep, 0);
    let elements = field.elements().expect("prime field");
    work.spend(checked_pow(elements.len() as u64, basis.len()).unwrap_or(u64::MAX))?;
    let mut local = true;
    for_each_assignment(&elements, basis.len(), |c| {
        if local {
            let f = combination(field, &basis, c);
            if !is_nilpotent_map(field, &f) && !is_invertible_map(field, &f, rep.spaces()) {
                local = false;
            }
        }
        Ok(())
    })?;
    Ok(local)
}

fn isomorphic(m: &GradedRep, n: &GradedRep, work: &mut Work) -> Result<bool> {
    let field = m.field();
    let basis = hom_basis(m, n, 0);
    let elements = field.elements().expect("prime field");
    work.spend(checked_pow(elements.len() as u64, basis.len()).unwrap_or(u64::MAX))?;
    let mut found = false;
    for_each_assignment(&elements, basis.len(), |c| {
        if !found && is_invertible_map(field, &combination(field, &basis, c), m.spaces()) {
            found = true;
        }
        Ok(())
    })?;
    Ok(found)
}

/// Counts isomorphism classes of indecomposable representations of the
/// level quiver over `𝔽_p` with dimension at most `caps[v]` at each vertex
/// (vertices named `i@l`; missing caps count as 0). Exceeding the budget is
/// an error, never a partial count.
pub fn brute_force_indec(
    level: &LevelQuiver,
    field: ExactField,
    caps: &BTreeMap<String, usize>,
    budget: OracleBudget,
) -> Result<usize> {
    let Some(p) = field.order() else {
        return Err(Error::Unsupported("the brute-force oracle needs a prime field".into()));
    };
    let q = level.to_quiver();
    let names: Vec<String> = q.vertices().to_vec();
    let cap: Vec<usize> = names.iter().map(|v| caps.get(v).copied().unwrap_or(0)).collect();
    let elements = field.elements().expect("prime field");
    let mut work = Work {
        used: 0,
        limit: budget.max_work,
    };

    let mut dims = vec![0usize; names.len()];
    let mut count = 0;
    loop {
        // advance the dimension-vector odometer
        let mut pos = 0;
        loop {
            if pos == dims.len() {
                return Ok(count);
            }
            if dims[pos] < cap[pos] {
                dims[pos] += 1;
                break;
            }
            dims[pos] = 0;
            pos += 1;
        }
        let total: usize = dims.iter().sum();
        if total > budget.max_total_dim {
            return Err(Error::Budget(format!(
                "dimension vector of total dimension {total} exceeds the oracle limit {}",
                budget.max_total_dim
            )));
        }
        let dim_of: BTreeMap<&str, usize> = names.iter().map(String::as_str).zip(dims.iter().copied()).collect();
        let spaces: BTreeMap<Slot, usize> = names
            .iter()
            .zip(&dims)
            .filter(|(_, &d)| d > 0)
            .map(|(v, &d)| ((v.clone(), 0), d))
            .collect();
        let shapes: Vec<(String, usize, usize)> = q
            .arrows()
            .iter()
            .map(|a| (a.name.clone(), dim_of[a.target.as_str()], dim_of[a.source.as_str()]))
            .filter(|(_, r, c)| r * c > 0)
            .collect();
        let entries: usize = shapes.iter().map(|(_, r, c)| r * c).sum();
        work.spend(checked_pow(p, entries).unwrap_or(u64::MAX))?;
        let mut classes: Vec<GradedRep> = Vec::new();
        for_each_assignment(&elements, entries, |vals| {
            let mut maps = BTreeMap::new();
            let mut off = 0;
            for (a, r, c) in &shapes {
                let rows = (0..*r).map(|i| vals[off + i * c..off + (i + 1) * c].to_vec()).collect();
                maps.insert((a.clone(), 0), Matrix::from_rows(rows));
                off += r * c;
            }
            let rep = GradedRep::new(q.clone(), field, spaces.clone(), maps)?;
            if !is_indecomposable(&rep, &mut work)? {
                return Ok(());
            }
            for c in &classes {
                if isomorphic(c, &rep, &mut work)? {
                    return Ok(());
                }
            }
            classes.push(rep);
            Ok(())
        })?;
        count += classes.len();
    }
}

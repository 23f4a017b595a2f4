//! Two-term projective resolutions over the (hereditary) graded path algebra,
//! graded Ext¹ and the shortcut comparing Hom from both resolution terms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::quiver::GradedQuiver;

use super::hom::{hom_dims, GradedMorphism};
use super::rep::{GradedRep, ProjectiveBasis, Slot};

/// Multiplicities of indecomposable projectives `P_v(l)`, keyed by `(v, l)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectiveShape(pub BTreeMap<(String, i64), usize>);

impl ProjectiveShape {
    pub fn from_terms(terms: &[(&str, i64, usize)]) -> Self {
        let mut m = BTreeMap::new();
        for &(v, l, n) in terms {
            if n > 0 {
                *m.entry((v.to_string(), l)).or_insert(0) += n;
            }
        }
        ProjectiveShape(m)
    }

    pub fn add(&mut self, v: &str, l: i64, n: usize) {
        if n > 0 {
            *self.0.entry((v.to_string(), l)).or_insert(0) += n;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of indecomposable summands.
    pub fn summands(&self) -> usize {
        self.0.values().sum()
    }

    /// `dim Hom(P, N)^h` for all `h`, from `Hom(P_v(l), N)^h = N^(h - l)` at `v`.
    pub fn hom_dims_into(&self, n: &GradedRep) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for ((v, l), mult) in &self.0 {
            for (&(ref w, e), &dim) in n.spaces() {
                if w == v {
                    *out.entry(e + l).or_insert(0) += mult * dim;
                }
            }
        }
        out
    }

    /// Graded dimensions of the projective module this shape describes.
    pub fn dims(&self, quiver: &GradedQuiver) -> Result<BTreeMap<Slot, usize>> {
        let mut out = BTreeMap::new();
        for ((v, l), mult) in &self.0 {
            for ((w, d), n) in ProjectiveBasis::new(quiver, v)?.piece_dims() {
                *out.entry((w, d - l)).or_insert(0) += mult * n;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ProjectiveShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|((v, l), n)| {
                let base = if *l == 0 { format!("P{v}") } else { format!("P{v}({l})") };
                if *n == 1 {
                    base
                } else {
                    format!("{base}^{n}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A generator of `P0`: basis vector `index` of `M` at `(vertex, degree)`,
/// the top of a summand `P_vertex(-degree)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopGenerator {
    pub vertex: String,
    pub degree: i64,
    pub index: usize,
}

/// A generator of `P1`: one per arrow `a`, basis vector `index` of `M` at
/// `(s(a), degree)`; it is the top of `P_t(a)(-degree - deg a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationGenerator {
    pub arrow: String,
    pub degree: i64,
    pub index: usize,
}

/// A term `coeff * path` inside summand `generator` of `P0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTerm {
    pub generator: usize,
    pub path: Vec<String>,
    pub coeff: Scalar,
}

/// The standard resolution `0 -> P1 -> P0 -> M -> 0`, where each relation
/// generator for arrow `a` maps to `a * e_(s,d,b) - sum_c M(a)[c,b] e_(t,d+r,c)`.
#[derive(Clone, Debug)]
pub struct StandardResolution {
    module: GradedRep,
    pub p0: Vec<TopGenerator>,
    pub p1: Vec<RelationGenerator>,
    pub inclusion: Vec<Vec<PathTerm>>,
}

pub fn standard_resolution(m: &GradedRep) -> Result<StandardResolution> {
    let quiver = m.quiver();
    if !quiver.is_acyclic() {
        return Err(Error::Cyclic);
    }
    let field = m.field();
    let mut p0 = Vec::new();
    let mut gen_index: BTreeMap<(String, i64, usize), usize> = BTreeMap::new();
    for (&(ref v, d), &n) in m.spaces() {
        for index in 0..n {
            gen_index.insert((v.clone(), d, index), p0.len());
            p0.push(TopGenerator {
                vertex: v.clone(),
                degree: d,
                index,
            });
        }
    }
    let mut p1 = Vec::new();
    let mut inclusion = Vec::new();
    for a in quiver.arrows() {
        for (&(ref v, d), &n) in m.spaces() {
            if *v != a.source {
                continue;
            }
            let e = d + a.degree;
            for index in 0..n {
                let mut terms = vec![PathTerm {
                    generator: gen_index[&(v.clone(), d, index)],
                    path: vec![a.name.clone()],
                    coeff: field.one(),
                }];
                if let Some(block) = m.block(&a.name, d) {
                    for c in 0..block.rows() {
                        let x = block.get(c, index);
                        if !x.is_zero() {
                            terms.push(PathTerm {
                                generator: gen_index[&(a.target.clone(), e, c)],
                                path: Vec::new(),
                                coeff: field.neg(x),
                            });
                        }
                    }
                }
                p1.push(RelationGenerator {
                    arrow: a.name.clone(),
                    degree: d,
                    index,
                });
                inclusion.push(terms);
            }
        }
    }
    Ok(StandardResolution {
        module: m.clone(),
        p0,
        p1,
        inclusion,
    })
}

/// Path → (slot, position) for one summand of a direct sum.
type Coordinates = BTreeMap<Vec<String>, (Slot, usize)>;

impl StandardResolution {
    pub fn module(&self) -> &GradedRep {
        &self.module
    }

    fn relation_target(&self, g: &RelationGenerator) -> (String, i64) {
        let a = self.module.quiver().arrow(&g.arrow).expect("arrow");
        (a.target.clone(), g.degree + a.degree)
    }

    pub fn p0_shape(&self) -> ProjectiveShape {
        let mut s = ProjectiveShape::default();
        for g in &self.p0 {
            s.add(&g.vertex, -g.degree, 1);
        }
        s
    }

    pub fn p1_shape(&self) -> ProjectiveShape {
        let mut s = ProjectiveShape::default();
        for g in &self.p1 {
            let (t, e) = self.relation_target(g);
            s.add(&t, -e, 1);
        }
        s
    }

    /// The map `Hom(P0, N)^h -> Hom(P1, N)^h` given by precomposition with
    /// the inclusion, in coordinates `N` at the generators' degrees.
    pub fn restriction_matrix(&self, n: &GradedRep, h: i64) -> Matrix {
        let field = n.field();
        let mut src_off = Vec::with_capacity(self.p0.len());
        let mut cols = 0;
        for g in &self.p0 {
            src_off.push(cols);
            cols += n.dim(&g.vertex, g.degree + h);
        }
        let mut rows = 0;
        let mut tgt_off = Vec::with_capacity(self.p1.len());
        for g in &self.p1 {
            let (t, e) = self.relation_target(g);
            tgt_off.push(rows);
            rows += n.dim(&t, e + h);
        }
        let mut out = Matrix::zeros(rows, cols);
        for (gi, terms) in self.inclusion.iter().enumerate() {
            let (t, e) = self.relation_target(&self.p1[gi]);
            if n.dim(&t, e + h) == 0 {
                continue;
            }
            for term in terms {
                let top = &self.p0[term.generator];
                let width = n.dim(&top.vertex, top.degree + h);
                for k in 0..width {
                    let mut unit = vec![Scalar::zero(); width];
                    unit[k] = field.one();
                    let Some((img, _)) = n.evaluate_path(&term.path, top.degree + h, &unit) else {
                        continue;
                    };
                    for (r, x) in img.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let (rr, cc) = (tgt_off[gi] + r, src_off[term.generator] + k);
                        let v = field.add(out.get(rr, cc), &field.mul(&term.coeff, x));
                        out.set(rr, cc, v);
                    }
                }
            }
        }
        out
    }

    fn summand_reps(&self, tops: Vec<(String, i64)>) -> Result<GradedRep> {
        let quiver = self.module.quiver();
        let field = *self.module.field();
        let mut total = GradedRep::zero(quiver.clone(), field);
        for (v, top_degree) in tops {
            let rep = ProjectiveBasis::new(quiver, &v)?.to_rep(field, -top_degree);
            total = total.direct_sum(&rep)?;
        }
        Ok(total)
    }

    /// `P0` as a representation: one `P_v(-d)` per top generator, in order.
    pub fn p0_rep(&self) -> Result<GradedRep> {
        self.summand_reps(self.p0.iter().map(|g| (g.vertex.clone(), g.degree)).collect())
    }

    /// `P1` as a representation: one summand per relation generator, in order.
    pub fn p1_rep(&self) -> Result<GradedRep> {
        self.summand_reps(self.p1.iter().map(|g| self.relation_target(g)).collect())
    }

    /// Coordinates of basis paths of a direct sum of projectives with the
    /// given tops: `(summand, path) -> (vertex, degree, index in piece)`.
    fn sum_coordinates(&self, tops: &[(String, i64)]) -> Result<Vec<Coordinates>> {
        let quiver = self.module.quiver();
        let mut used: BTreeMap<Slot, usize> = BTreeMap::new();
        let mut out = Vec::with_capacity(tops.len());
        for (v, top_degree) in tops {
            let basis = ProjectiveBasis::new(quiver, v)?;
            let mut local: BTreeMap<Slot, usize> = BTreeMap::new();
            let mut coords = BTreeMap::new();
            for p in basis.paths() {
                let slot = (p.end.clone(), p.degree + top_degree);
                let i = local.entry(slot.clone()).or_insert(0);
                coords.insert(p.arrows.clone(), (slot.clone(), *i));
                *i += 1;
            }
            // shift local indices by what earlier summands already occupy
            for (slot, i) in coords.values_mut() {
                *i += used.get(slot).copied().unwrap_or(0);
            }
            for (slot, n) in local {
                *used.entry(slot).or_insert(0) += n;
            }
            out.push(coords);
        }
        Ok(out)
    }

    /// Inclusion `P1 -> P0` as a degree-zero morphism.
    pub fn inclusion_map(&self) -> Result<GradedMorphism> {
        let field = self.module.field();
        let p0 = self.p0_rep()?;
        let p1 = self.p1_rep()?;
        let tops0: Vec<(String, i64)> = self.p0.iter().map(|g| (g.vertex.clone(), g.degree)).collect();
        let tops1: Vec<(String, i64)> = self.p1.iter().map(|g| self.relation_target(g)).collect();
        let c0 = self.sum_coordinates(&tops0)?;
        let c1 = self.sum_coordinates(&tops1)?;
        let mut blocks: BTreeMap<Slot, Matrix> = p1
            .spaces()
            .iter()
            .map(|(slot, &n)| {
                let rows = p0.dim(&slot.0, slot.1);
                (slot.clone(), Matrix::zeros(rows, n))
            })
            .collect();
        for (gi, terms) in self.inclusion.iter().enumerate() {
            for (suffix, (slot, col)) in &c1[gi] {
                for term in terms {
                    let mut path = term.path.clone();
                    path.extend(suffix.iter().cloned());
                    let (tslot, row) = &c0[term.generator][&path];
                    debug_assert_eq!(tslot, slot);
                    let m = blocks.get_mut(slot).unwrap();
                    let v = field.add(m.get(*row, *col), &term.coeff);
                    m.set(*row, *col, v);
                }
            }
        }
        Ok(GradedMorphism { degree: 0, blocks })
    }

    /// Surjection `P0 -> M` as a degree-zero morphism.
    pub fn surjection_map(&self) -> Result<GradedMorphism> {
        let field = self.module.field();
        let m = &self.module;
        let p0 = self.p0_rep()?;
        let tops0: Vec<(String, i64)> = self.p0.iter().map(|g| (g.vertex.clone(), g.degree)).collect();
        let c0 = self.sum_coordinates(&tops0)?;
        let mut blocks: BTreeMap<Slot, Matrix> = p0
            .spaces()
            .iter()
            .map(|(slot, &n)| (slot.clone(), Matrix::zeros(m.dim(&slot.0, slot.1), n)))
            .collect();
        for (gi, g) in self.p0.iter().enumerate() {
            let width = m.dim(&g.vertex, g.degree);
            let mut unit = vec![Scalar::zero(); width];
            unit[g.index] = field.one();
            for (path, (slot, col)) in &c0[gi] {
                if let Some((img, _)) = m.evaluate_path(path, g.degree, &unit) {
                    let block = blocks.get_mut(slot).unwrap();
                    for (r, x) in img.into_iter().enumerate() {
                        block.set(r, *col, x);
                    }
                }
            }
        }
        Ok(GradedMorphism { degree: 0, blocks })
    }

    /// Verifies exactness piece by piece: inclusion injective, surjection
    /// onto `M`, composite zero, and `dim P0 = dim M + dim P1`.
    pub fn check_exact(&self) -> Result<bool> {
        let field = self.module.field();
        let p0 = self.p0_rep()?;
        let p1 = self.p1_rep()?;
        let inc = self.inclusion_map()?;
        let sur = self.surjection_map()?;
        if !inc.commutes(&p1, &p0) || !sur.commutes(&p0, &self.module) {
            return Ok(false);
        }
        for (slot, &n0) in p0.spaces() {
            let n1 = p1.dim(&slot.0, slot.1);
            let nm = self.module.dim(&slot.0, slot.1);
            if n0 != n1 + nm {
                return Ok(false);
            }
            if let Some(i) = inc.blocks.get(slot) {
                if i.rank(field) != n1 {
                    return Ok(false);
                }
                if nm > 0 && !sur.blocks[slot].mul(field, i).is_zero() {
                    return Ok(false);
                }
            }
            if nm > 0 && sur.blocks[slot].rank(field) != nm {
                return Ok(false);
            }
        }
        Ok(self.module.spaces().keys().all(|slot| p0.dim(&slot.0, slot.1) > 0))
    }
}

/// `dim Ext¹(M, N)^h` for every `h` with a nonzero value, computed as the
/// cokernel of the restriction `Hom(P0, N)^h -> Hom(P1, N)^h`.
pub fn ext1_graded(m: &GradedRep, n: &GradedRep) -> Result<BTreeMap<i64, usize>> {
    m.check_compatible(n)?;
    let res = standard_resolution(m)?;
    let candidates = res.p1_shape().hom_dims_into(n);
    let mut out = BTreeMap::new();
    for (&h, &target_dim) in &candidates {
        let rank = res.restriction_matrix(n, h).rank(n.field());
        if target_dim > rank {
            out.insert(h, target_dim - rank);
        }
    }
    Ok(out)
}

/// `dim Ext¹(M, N)^h` for one degree.
pub fn ext1_dim(res: &StandardResolution, n: &GradedRep, h: i64) -> usize {
    let mat = res.restriction_matrix(n, h);
    mat.rows() - mat.rank(n.field())
}

/// Graded tops: `dim M_(v,d)` minus the rank of everything arriving there.
pub fn top_dims(m: &GradedRep) -> BTreeMap<Slot, usize> {
    let field = m.field();
    let mut out = BTreeMap::new();
    for (&(ref v, d), &n) in m.spaces() {
        let incoming: Vec<&Matrix> = m
            .quiver()
            .incoming(v)
            .filter_map(|a| m.block(&a.name, d - a.degree))
            .collect();
        let rank = if incoming.is_empty() {
            0
        } else {
            Matrix::hconcat(n, &incoming).rank(field)
        };
        if n > rank {
            out.insert((v.clone(), d), n - rank);
        }
    }
    out
}

/// Decomposes the graded dimensions of a projective module into
/// indecomposable projectives by peeling tops in topological order.
pub fn decompose_projective_dims(quiver: &GradedQuiver, dims: &BTreeMap<Slot, usize>) -> Result<ProjectiveShape> {
    let order = quiver.topological_order().ok_or(Error::Cyclic)?;
    let mut remaining: BTreeMap<Slot, i64> = dims.iter().map(|(k, &v)| (k.clone(), v as i64)).collect();
    let mut shape = ProjectiveShape::default();
    for v in &order {
        let here: Vec<(i64, i64)> = remaining
            .iter()
            .filter(|((w, _), n)| w == v && **n != 0)
            .map(|((_, d), n)| (*d, *n))
            .collect();
        for (d, n) in here {
            if n < 0 {
                return Err(Error::Representation(format!(
                    "dimension vector is not that of a projective (negative at ({v}, {d}))"
                )));
            }
            shape.add(v, -d, n as usize);
            for ((w, e), k) in ProjectiveBasis::new(quiver, v)?.piece_dims() {
                *remaining.entry((w, e + d)).or_insert(0) -= n * k as i64;
            }
        }
    }
    if remaining.values().any(|&n| n != 0) {
        return Err(Error::Representation(
            "dimension vector is not that of a projective".into(),
        ));
    }
    Ok(shape)
}

/// Shapes of the minimal projective resolution `0 -> P1 -> P0 -> M -> 0`.
pub fn minimal_resolution_shape(m: &GradedRep) -> Result<(ProjectiveShape, ProjectiveShape)> {
    let quiver = m.quiver();
    let mut p0 = ProjectiveShape::default();
    for ((v, d), n) in top_dims(m) {
        p0.add(&v, -d, n);
    }
    let mut kernel: BTreeMap<Slot, usize> = BTreeMap::new();
    for (slot, n) in p0.dims(quiver)? {
        let left = n
            .checked_sub(m.dim(&slot.0, slot.1))
            .ok_or_else(|| Error::Representation("top does not generate the module".into()))?;
        if left > 0 {
            kernel.insert(slot, left);
        }
    }
    let p1 = decompose_projective_dims(quiver, &kernel)?;
    Ok((p1, p0))
}

/// Certifies `Ext¹(M, N)^{<0} = 0` by comparing `Hom(P0, N)^{<0}` with
/// `Hom(P1, N)^{<0}` degree by degree on the minimal resolution.
/// Requires `Hom(M, N)^{<0} = 0`.
pub fn ext_vanishing_shortcut(m: &GradedRep, n: &GradedRep) -> Result<bool> {
    let negative_hom: Vec<(i64, usize)> = hom_dims(m, n)?.into_iter().filter(|(h, _)| *h < 0).collect();
    if let Some((h, d)) = negative_hom.first() {
        return Err(Error::Precondition(format!("Hom(M, N)^{h} has dimension {d}")));
    }
    let (p1, p0) = minimal_resolution_shape(m)?;
    let neg = |dims: BTreeMap<i64, usize>| -> BTreeMap<i64, usize> {
        dims.into_iter().filter(|(h, d)| *h < 0 && *d > 0).collect()
    };
    Ok(neg(p0.hom_dims_into(n)) == neg(p1.hom_dims_into(n)))
}

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{ExactField, Scalar};
use crate::linalg::Matrix;
use crate::quiver::GradedQuiver;

/// Key of a graded piece: `(vertex, degree)`.
pub type Slot = (String, i64);

/// A finite-dimensional graded representation: maps follow arrows, and an
/// arrow `a` of degree `r` sends the space at `(s(a), d)` to `(t(a), d + r)`.
/// Matrices have rows indexed by the target basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRep {
    quiver: GradedQuiver,
    field: ExactField,
    spaces: BTreeMap<Slot, usize>,
    maps: BTreeMap<(String, i64), Matrix>,
}

impl GradedRep {
    /// Validates shapes, drops zero spaces and fills absent blocks with zero.
    pub fn new(
        quiver: GradedQuiver,
        field: ExactField,
        spaces: BTreeMap<Slot, usize>,
        maps: BTreeMap<(String, i64), Matrix>,
    ) -> Result<Self> {
        let spaces: BTreeMap<Slot, usize> = spaces.into_iter().filter(|(_, d)| *d > 0).collect();
        for (v, _) in spaces.keys() {
            if !quiver.has_vertex(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        let dim = |v: &str, d: i64| spaces.get(&(v.to_string(), d)).copied().unwrap_or(0);
        let mut blocks = BTreeMap::new();
        for ((name, d), m) in maps {
            let arrow = quiver.arrow(&name).ok_or_else(|| Error::UnknownArrow(name.clone()))?;
            let (src, tgt) = (dim(&arrow.source, d), dim(&arrow.target, d + arrow.degree));
            if src == 0 || tgt == 0 {
                if m.is_zero() {
                    continue;
                }
                return Err(Error::Representation(format!(
                    "block for arrow {name} at degree {d} has no source or target space"
                )));
            }
            if m.rows() != tgt || m.cols() != src {
                return Err(Error::Representation(format!(
                    "block for arrow {name} at degree {d} is {}x{}, expected {tgt}x{src}",
                    m.rows(),
                    m.cols()
                )));
            }
            let mut reduced = Matrix::zeros(tgt, src);
            for r in 0..tgt {
                for c in 0..src {
                    let v = field.try_reduce(m.get(r, c)).ok_or_else(|| {
                        Error::Representation(format!("entry {} not defined over {field}", m.get(r, c)))
                    })?;
                    reduced.set(r, c, v);
                }
            }
            blocks.insert((name, d), reduced);
        }
        for a in quiver.arrows() {
            for (&(ref v, d), &sd) in &spaces {
                if *v != a.source {
                    continue;
                }
                let td = dim(&a.target, d + a.degree);
                if td > 0 {
                    blocks
                        .entry((a.name.clone(), d))
                        .or_insert_with(|| Matrix::zeros(td, sd));
                }
            }
        }
        Ok(GradedRep {
            quiver,
            field,
            spaces,
            maps: blocks,
        })
    }

    pub fn zero(quiver: GradedQuiver, field: ExactField) -> Self {
        GradedRep {
            quiver,
            field,
            spaces: BTreeMap::new(),
            maps: BTreeMap::new(),
        }
    }

    /// One-dimensional simple at `(v, d)`.
    pub fn simple(quiver: GradedQuiver, field: ExactField, v: &str, d: i64) -> Result<Self> {
        if !quiver.has_vertex(v) {
            return Err(Error::UnknownVertex(v.into()));
        }
        GradedRep::new(
            quiver,
            field,
            BTreeMap::from([((v.to_string(), d), 1)]),
            BTreeMap::new(),
        )
    }

    pub fn quiver(&self) -> &GradedQuiver {
        &self.quiver
    }

    pub fn field(&self) -> &ExactField {
        &self.field
    }

    pub fn spaces(&self) -> &BTreeMap<Slot, usize> {
        &self.spaces
    }

    /// Every nonzero block, keyed by `(arrow, source degree)`.
    pub fn blocks(&self) -> &BTreeMap<(String, i64), Matrix> {
        &self.maps
    }

    pub fn dim(&self, v: &str, d: i64) -> usize {
        self.spaces.get(&(v.to_string(), d)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.spaces.is_empty()
    }

    /// Block of `arrow` leaving degree `d`, if both ends are nonzero.
    pub fn block(&self, arrow: &str, d: i64) -> Option<&Matrix> {
        self.maps.get(&(arrow.to_string(), d))
    }

    pub(crate) fn block_mut(&mut self, arrow: &str, d: i64) -> Option<&mut Matrix> {
        self.maps.get_mut(&(arrow.to_string(), d))
    }

    /// Least and greatest degree with a nonzero space.
    pub fn support(&self) -> Option<(i64, i64)> {
        let min = self.spaces.keys().map(|(_, d)| *d).min()?;
        let max = self.spaces.keys().map(|(_, d)| *d).max()?;
        Some((min, max))
    }

    /// Dimensions per vertex, summed over degrees.
    pub fn dimension_vector(&self) -> BTreeMap<String, usize> {
        let mut out: BTreeMap<String, usize> = self.quiver.vertices().iter().map(|v| (v.clone(), 0)).collect();
        for ((v, _), n) in &self.spaces {
            *out.get_mut(v).unwrap() += n;
        }
        out
    }

    /// `M(l)` with `M(l)^j = M^(l+j)`.
    pub fn shift(&self, l: i64) -> GradedRep {
        GradedRep {
            quiver: self.quiver.clone(),
            field: self.field,
            spaces: self.spaces.iter().map(|((v, d), n)| ((v.clone(), d - l), *n)).collect(),
            maps: self
                .maps
                .iter()
                .map(|((a, d), m)| ((a.clone(), d - l), m.clone()))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &GradedRep) -> Result<GradedRep> {
        self.check_compatible(other)?;
        let mut spaces = self.spaces.clone();
        for (k, n) in &other.spaces {
            *spaces.entry(k.clone()).or_insert(0) += n;
        }
        let mut maps = BTreeMap::new();
        for a in self.quiver.arrows() {
            for (&(ref v, d), &sd) in &spaces {
                if *v != a.source {
                    continue;
                }
                let e = d + a.degree;
                let td = spaces.get(&(a.target.clone(), e)).copied().unwrap_or(0);
                if td == 0 {
                    continue;
                }
                let mut m = Matrix::zeros(td, sd);
                let (s1, t1) = (self.dim(v, d), self.dim(&a.target, e));
                if let Some(b) = self.block(&a.name, d) {
                    copy_into(&mut m, b, 0, 0);
                }
                if let Some(b) = other.block(&a.name, d) {
                    copy_into(&mut m, b, t1, s1);
                }
                maps.insert((a.name.clone(), d), m);
            }
        }
        GradedRep::new(self.quiver.clone(), self.field, spaces, maps)
    }

    pub fn check_compatible(&self, other: &GradedRep) -> Result<()> {
        if self.quiver != other.quiver {
            return Err(Error::Mismatch("representations live over different quivers".into()));
        }
        if self.field != other.field {
            return Err(Error::Mismatch(format!(
                "representations live over different fields ({} vs {})",
                self.field, other.field
            )));
        }
        Ok(())
    }

    /// Applies the arrows of `path` (in order) to `vector` sitting at degree `d`.
    /// Returns the image and its degree; `None` when it passes a zero space.
    pub fn evaluate_path(&self, path: &[String], d: i64, vector: &[Scalar]) -> Option<(Vec<Scalar>, i64)> {
        let mut v = vector.to_vec();
        let mut deg = d;
        for name in path {
            let a = self.quiver.arrow(name).expect("path arrow");
            let block = self.block(name, deg)?;
            v = block.apply(&self.field, &v);
            deg += a.degree;
        }
        Some((v, deg))
    }

    /// Indecomposable projective `P_i(l)`: basis the directed paths starting
    /// at `i`, a path of total degree `r` sitting in degree `r - l`.
    pub fn projective(quiver: &GradedQuiver, field: ExactField, i: &str, l: i64) -> Result<GradedRep> {
        Ok(ProjectiveBasis::new(quiver, i)?.to_rep(field, l))
    }

    /// Replaces one matrix entry; for building negative controls.
    pub fn with_entry(&self, arrow: &str, d: i64, r: usize, c: usize, value: Scalar) -> Result<GradedRep> {
        let mut out = self.clone();
        let field = self.field;
        let block = out
            .block_mut(arrow, d)
            .ok_or_else(|| Error::Representation(format!("no block for {arrow} at degree {d}")))?;
        if r >= block.rows() || c >= block.cols() {
            return Err(Error::Representation("entry out of range".into()));
        }
        block.set(r, c, field.reduce(&value));
        Ok(out)
    }

    /// Vertices carrying a nonzero space, sorted.
    pub fn support_vertices(&self) -> BTreeSet<String> {
        self.spaces.keys().map(|(v, _)| v.clone()).collect()
    }
}

pub(crate) fn copy_into(dst: &mut Matrix, src: &Matrix, row_off: usize, col_off: usize) {
    for r in 0..src.rows() {
        for c in 0..src.cols() {
            if !src.get(r, c).is_zero() {
                dst.set(row_off + r, col_off + c, src.get(r, c).clone());
            }
        }
    }
}

/// A directed path from a fixed start vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub arrows: Vec<String>,
    pub end: String,
    pub degree: i64,
}

/// The paths starting at a vertex, in depth-first order (trivial path first,
/// arrows by name), with their positions inside each graded piece.
#[derive(Clone, Debug)]
pub struct ProjectiveBasis {
    quiver: GradedQuiver,
    start: String,
    paths: Vec<Path>,
    /// For each path, its index within the space at `(end, degree)`.
    position: Vec<usize>,
}

impl ProjectiveBasis {
    pub fn new(quiver: &GradedQuiver, start: &str) -> Result<Self> {
        if !quiver.has_vertex(start) {
            return Err(Error::UnknownVertex(start.into()));
        }
        if !quiver.is_acyclic() {
            return Err(Error::Cyclic);
        }
        let mut paths = Vec::new();
        let mut stack = vec![Path {
            arrows: Vec::new(),
            end: start.to_string(),
            degree: 0,
        }];
        while let Some(p) = stack.pop() {
            let mut next: Vec<Path> = quiver
                .outgoing(&p.end)
                .map(|a| {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a.name.clone());
                    Path {
                        arrows,
                        end: a.target.clone(),
                        degree: p.degree + a.degree,
                    }
                })
                .collect();
            next.reverse();
            paths.push(p);
            stack.extend(next);
        }
        let mut counts: BTreeMap<(String, i64), usize> = BTreeMap::new();
        let position = paths
            .iter()
            .map(|p| {
                let c = counts.entry((p.end.clone(), p.degree)).or_insert(0);
                *c += 1;
                *c - 1
            })
            .collect();
        Ok(ProjectiveBasis {
            quiver: quiver.clone(),
            start: start.to_string(),
            paths,
            position,
        })
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// Index of `path` within its graded piece.
    pub fn position_of(&self, arrows: &[String]) -> Option<(String, i64, usize)> {
        self.paths
            .iter()
            .zip(&self.position)
            .find(|(p, _)| p.arrows == arrows)
            .map(|(p, &i)| (p.end.clone(), p.degree, i))
    }

    /// Piece dimensions before shifting: `(vertex, path degree) -> count`.
    pub fn piece_dims(&self) -> BTreeMap<Slot, usize> {
        let mut out = BTreeMap::new();
        for p in &self.paths {
            *out.entry((p.end.clone(), p.degree)).or_insert(0) += 1;
        }
        out
    }

    pub fn to_rep(&self, field: ExactField, l: i64) -> GradedRep {
        let dims = self.piece_dims();
        let mut maps: BTreeMap<(String, i64), Matrix> = BTreeMap::new();
        for (p, &pos) in self.paths.iter().zip(&self.position) {
            for a in self.quiver.outgoing(&p.end) {
                let mut ext = p.arrows.clone();
                ext.push(a.name.clone());
                let (tv, td, tpos) = self.position_of(&ext).expect("extension is a path");
                let rows = dims[&(tv, td)];
                let cols = dims[&(p.end.clone(), p.degree)];
                let m = maps
                    .entry((a.name.clone(), p.degree - l))
                    .or_insert_with(|| Matrix::zeros(rows, cols));
                m.set(tpos, pos, field.one());
            }
        }
        let spaces = dims.into_iter().map(|((v, d), n)| ((v, d - l), n)).collect();
        GradedRep::new(self.quiver.clone(), field, spaces, maps).expect("projective is well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(deg: i64) -> GradedQuiver {
        GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", deg)]).unwrap()
    }

    #[test]
    fn projectives_of_a2() {
        let q = ExactField::Rationals;
        let p1 = GradedRep::projective(&a2(0), q, "1", 0).unwrap();
        assert_eq!(
            p1.spaces(),
            &BTreeMap::from([(("1".into(), 0), 1), (("2".into(), 0), 1)])
        );
        let p1 = GradedRep::projective(&a2(-1), q, "1", 0).unwrap();
        assert_eq!(
            p1.spaces(),
            &BTreeMap::from([(("1".into(), 0), 1), (("2".into(), -1), 1)])
        );
        let p2 = GradedRep::projective(&a2(-1), q, "2", 0).unwrap();
        assert_eq!(p2, GradedRep::simple(a2(-1), q, "2", 0).unwrap());
    }

    #[test]
    fn shift_convention() {
        // M(l)^j = M^(l+j): the top of P_1(2) sits in degree -2.
        let p = GradedRep::projective(&a2(0), ExactField::Rationals, "1", 2).unwrap();
        assert_eq!(p.dim("1", -2), 1);
        assert_eq!(
            p,
            GradedRep::projective(&a2(0), ExactField::Rationals, "1", 0)
                .unwrap()
                .shift(2)
        );
    }

    #[test]
    fn rejects_bad_blocks() {
        let q = ExactField::Rationals;
        let spaces = BTreeMap::from([(("1".to_string(), 0), 1), (("2".to_string(), 0), 2)]);
        let bad = BTreeMap::from([(("a".to_string(), 0), Matrix::zeros(1, 1))]);
        assert!(GradedRep::new(a2(0), q, spaces.clone(), bad).is_err());
        let ok = GradedRep::new(a2(0), q, spaces, BTreeMap::new()).unwrap();
        assert_eq!(ok.block("a", 0).unwrap(), &Matrix::zeros(2, 1));
    }

    #[test]
    fn direct_sum_adds_dimensions() {
        let q = ExactField::Rationals;
        let p1 = GradedRep::projective(&a2(0), q, "1", 0).unwrap();
        let s2 = GradedRep::simple(a2(0), q, "2", 0).unwrap();
        let sum = p1.direct_sum(&s2).unwrap();
        assert_eq!(sum.dim("2", 0), 2);
        assert_eq!(sum.block("a", 0).unwrap().rank(&q), 1);
    }
}

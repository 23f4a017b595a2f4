use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::Result;
use crate::field::Scalar;
use crate::linalg::Matrix;

use super::rep::{GradedRep, Slot};

/// A degree-`h` morphism `M -> N(h)`: one block per `(v, d)`, from `M` at
/// `(v, d)` to `N` at `(v, d + h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMorphism {
    pub degree: i64,
    pub blocks: BTreeMap<Slot, Matrix>,
}

impl GradedMorphism {
    /// Checks `N(a) f = f M(a)` for every arrow and degree, exactly.
    pub fn commutes(&self, m: &GradedRep, n: &GradedRep) -> bool {
        let field = m.field();
        let h = self.degree;
        for a in m.quiver().arrows() {
            for (&(ref v, d), &sd) in m.spaces() {
                if *v != a.source {
                    continue;
                }
                let e = d + a.degree;
                let td = n.dim(&a.target, e + h);
                if td == 0 {
                    continue;
                }
                let mut lhs = Matrix::zeros(td, sd);
                if let (Some(na), Some(f)) = (n.block(&a.name, d + h), self.blocks.get(&(v.clone(), d))) {
                    lhs = na.mul(field, f);
                }
                let mut rhs = Matrix::zeros(td, sd);
                if let (Some(f), Some(ma)) = (self.blocks.get(&(a.target.clone(), e)), m.block(&a.name, d)) {
                    rhs = f.mul(field, ma);
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }
}

/// Per-degree bases of graded homomorphisms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomSpace {
    pub degrees: BTreeMap<i64, Vec<GradedMorphism>>,
}

impl HomSpace {
    pub fn dim(&self, h: i64) -> usize {
        self.degrees.get(&h).map_or(0, Vec::len)
    }

    /// Nonzero dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.degrees
            .iter()
            .filter(|(_, b)| !b.is_empty())
            .map(|(h, b)| (*h, b.len()))
            .collect()
    }
}

/// Degrees `h` where `Hom(M, N)^h` can be nonzero by support.
pub fn hom_window(m: &GradedRep, n: &GradedRep) -> Option<(i64, i64)> {
    let (m_lo, m_hi) = m.support()?;
    let (n_lo, n_hi) = n.support()?;
    Some((n_lo - m_hi, n_hi - m_lo))
}

struct Unknown {
    slot: Slot,
    rows: usize,
    cols: usize,
    offset: usize,
}

/// The commutation system for degree `h`: unknowns are the blocks
/// `f_(v,d)`, one equation per entry of `N(a) f_s - f_t M(a)`.
struct HomSystem {
    unknowns: Vec<Unknown>,
    matrix: Matrix,
}

fn hom_system(m: &GradedRep, n: &GradedRep, h: i64) -> HomSystem {
    let field = m.field();
    let mut unknowns = Vec::new();
    let mut index: BTreeMap<Slot, usize> = BTreeMap::new();
    let mut offset = 0;
    for (&(ref v, d), &cols) in m.spaces() {
        let rows = n.dim(v, d + h);
        if rows == 0 {
            continue;
        }
        index.insert((v.clone(), d), unknowns.len());
        unknowns.push(Unknown {
            slot: (v.clone(), d),
            rows,
            cols,
            offset,
        });
        offset += rows * cols;
    }
    let nvars = offset;
    let mut equations: Vec<Vec<Scalar>> = Vec::new();
    for a in m.quiver().arrows() {
        for (&(ref v, d), &sd) in m.spaces() {
            if *v != a.source {
                continue;
            }
            let e = d + a.degree;
            let td = n.dim(&a.target, e + h);
            if td == 0 {
                continue;
            }
            let src = index.get(&(v.clone(), d)).map(|&i| &unknowns[i]);
            let tgt = index.get(&(a.target.clone(), e)).map(|&i| &unknowns[i]);
            let n_block = n.block(&a.name, d + h);
            let m_block = m.block(&a.name, d);
            for r in 0..td {
                for c in 0..sd {
                    let mut row = vec![Scalar::zero(); nvars];
                    // N(a)[r, k] * f_s[k, c]
                    if let (Some(u), Some(nb)) = (src, n_block) {
                        for k in 0..u.rows {
                            let coef = nb.get(r, k);
                            if !coef.is_zero() {
                                let idx = u.offset + k * u.cols + c;
                                row[idx] = field.add(&row[idx], coef);
                            }
                        }
                    }
                    // - f_t[r, k] * M(a)[k, c]
                    if let (Some(u), Some(mb)) = (tgt, m_block) {
                        for k in 0..u.cols {
                            let coef = mb.get(k, c);
                            if !coef.is_zero() {
                                let idx = u.offset + r * u.cols + k;
                                row[idx] = field.sub(&row[idx], coef);
                            }
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        equations.push(row);
                    }
                }
            }
        }
    }
    let matrix = if equations.is_empty() {
        Matrix::zeros(0, nvars)
    } else {
        Matrix::from_rows(equations)
    };
    HomSystem { unknowns, matrix }
}

/// `dim Hom(M, N)^h` by rank, without producing a basis.
pub fn hom_dim(m: &GradedRep, n: &GradedRep, h: i64) -> usize {
    let sys = hom_system(m, n, h);
    sys.matrix.cols() - sys.matrix.rank(m.field())
}

/// Nonzero `dim Hom(M, N)^h` over the whole support window.
pub fn hom_dims(m: &GradedRep, n: &GradedRep) -> Result<BTreeMap<i64, usize>> {
    m.check_compatible(n)?;
    let mut out = BTreeMap::new();
    if let Some((lo, hi)) = hom_window(m, n) {
        for h in lo..=hi {
            let d = hom_dim(m, n, h);
            if d > 0 {
                out.insert(h, d);
            }
        }
    }
    Ok(out)
}

/// Basis of `Hom(M, N)^h` for a single degree.
pub fn hom_basis(m: &GradedRep, n: &GradedRep, h: i64) -> Vec<GradedMorphism> {
    let sys = hom_system(m, n, h);
    sys.matrix
        .kernel(m.field())
        .into_iter()
        .map(|v| GradedMorphism {
            degree: h,
            blocks: sys
                .unknowns
                .iter()
                .map(|u| {
                    let rows = (0..u.rows)
                        .map(|r| v[u.offset + r * u.cols..u.offset + (r + 1) * u.cols].to_vec())
                        .collect();
                    (u.slot.clone(), Matrix::from_rows(rows))
                })
                .collect(),
        })
        .collect()
}

/// Graded homomorphisms in every degree of the support window.
pub fn hom_graded(m: &GradedRep, n: &GradedRep) -> Result<HomSpace> {
    m.check_compatible(n)?;
    let mut space = HomSpace::default();
    if let Some((lo, hi)) = hom_window(m, n) {
        for h in lo..=hi {
            let basis = hom_basis(m, n, h);
            if !basis.is_empty() {
                space.degrees.insert(h, basis);
            }
        }
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExactField;
    use crate::quiver::GradedQuiver;

    fn a2() -> GradedQuiver {
        GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0)]).unwrap()
    }

    #[test]
    fn endomorphisms_of_projective() {
        let q = ExactField::Rationals;
        let p1 = GradedRep::projective(&a2(), q, "1", 0).unwrap();
        let space = hom_graded(&p1, &p1).unwrap();
        assert_eq!(space.dims(), BTreeMap::from([(0, 1)]));
        assert!(space.degrees[&0][0].commutes(&p1, &p1));
    }

    #[test]
    fn hom_between_simples_and_projectives() {
        let q = ExactField::Rationals;
        let p1 = GradedRep::projective(&a2(), q, "1", 0).unwrap();
        let s1 = GradedRep::simple(a2(), q, "1", 0).unwrap();
        let s2 = GradedRep::simple(a2(), q, "2", 0).unwrap();
        assert_eq!(hom_dim(&p1, &s1, 0), 1);
        assert_eq!(hom_dim(&s2, &p1, 0), 1);
        assert_eq!(hom_dim(&s1, &p1, 0), 0);
        assert_eq!(hom_dim(&s1, &s1.shift(3), -3), 1);
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let s_q = GradedRep::simple(a2(), ExactField::Rationals, "1", 0).unwrap();
        let s_p = GradedRep::simple(a2(), ExactField::prime(3).unwrap(), "1", 0).unwrap();
        assert!(hom_graded(&s_q, &s_p).is_err());
    }
}

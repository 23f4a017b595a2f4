//! Explicit one-parameter families `L_λ` whose members are pairwise
//! Hom-orthogonal bricks; each family is an infinite pre-simple-minded
//! collection.
//!
//! All families are covariant representations of the quivers built here.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{ExactField, Scalar};
use crate::linalg::Matrix;
use crate::quiver::GradedQuiver;

use super::rep::{GradedRep, Slot};

/// `1 ⇉ 2 → 3` with the double arrows in degrees `0` and `-n`.
pub fn case_a_quiver(n: i64) -> GradedQuiver {
    GradedQuiver::from_spec(
        &["1", "2", "3"],
        &[("a", "1", "2", 0), ("b", "1", "2", -n), ("c", "2", "3", 0)],
    )
    .expect("well-formed")
}

/// `1 ⇉ 2 ⇇ 3` with degree pairs `{0, -m}` and `{0, -n}`.
pub fn case_b_quiver(m: i64, n: i64) -> GradedQuiver {
    GradedQuiver::from_spec(
        &["1", "2", "3"],
        &[
            ("a", "1", "2", 0),
            ("b", "1", "2", -m),
            ("c", "3", "2", 0),
            ("d", "3", "2", -n),
        ],
    )
    .expect("well-formed")
}

/// Generalized Kronecker quiver `1 → 2` with arrows `k0, k1, …` of the given degrees.
pub fn kronecker_quiver(degrees: &[i64]) -> GradedQuiver {
    let names: Vec<String> = (0..degrees.len()).map(|i| format!("k{i}")).collect();
    let arrows: Vec<(&str, &str, &str, i64)> = names
        .iter()
        .zip(degrees)
        .map(|(n, &d)| (n.as_str(), "1", "2", d))
        .collect();
    GradedQuiver::from_spec(&["1", "2"], &arrows).expect("well-formed")
}

fn check_lambda(field: &ExactField, lambda: &Scalar) -> Result<Scalar> {
    let l = field
        .try_reduce(lambda)
        .ok_or_else(|| Error::Field(format!("λ has no image in {field}")))?;
    if l.is_zero() {
        return Err(Error::Precondition("λ must be nonzero".into()));
    }
    Ok(l)
}

fn coprime_pair(m: i64, n: i64) -> Result<()> {
    if m <= 0 || m > n {
        return Err(Error::Precondition(format!("need 0 < m ≤ n, got m = {m}, n = {n}")));
    }
    if m.gcd(&n) != 1 {
        return Err(Error::Unsupported(format!(
            "only coprime parameters are constructed (gcd({m}, {n}) = {})",
            m.gcd(&n)
        )));
    }
    Ok(())
}

/// Pieces and nonzero 1×1 entries of a line representation.
type LineData = (Vec<(&'static str, i64)>, Vec<(&'static str, i64, Scalar)>);

/// Representations whose graded pieces are all one-dimensional: `entries`
/// lists `(arrow, source degree, value)` for the nonzero 1×1 blocks.
fn line_rep(
    quiver: GradedQuiver,
    field: ExactField,
    pieces: &[(&str, i64)],
    entries: Vec<(&str, i64, Scalar)>,
) -> Result<GradedRep> {
    let spaces: BTreeMap<Slot, usize> = pieces.iter().map(|&(v, d)| ((v.to_string(), d), 1)).collect();
    let maps = entries
        .into_iter()
        .map(|(a, d, x)| ((a.to_string(), d), Matrix::from_rows(vec![vec![x]])))
        .collect();
    GradedRep::new(quiver, field, spaces, maps)
}

/// The thirteen-dimensional brick over `1 ⇉ 2 → 3` (degrees `0, -1, 0`).
pub fn build_l_case_a(field: ExactField, lambda: &Scalar) -> Result<GradedRep> {
    let lambda = check_lambda(&field, lambda)?;
    let spaces: BTreeMap<Slot, usize> = [
        (("1", 0), 1),
        (("1", -1), 2),
        (("1", -2), 2),
        (("2", 0), 1),
        (("2", -1), 2),
        (("2", -2), 2),
        (("2", -3), 1),
        (("3", -1), 1),
        (("3", -2), 1),
    ]
    .into_iter()
    .map(|((v, d), n)| ((v.to_string(), d), n))
    .collect();
    let m = |rows: &[&[i64]]| Matrix::from_ints(&field, rows);
    let mut b0 = m(&[&[1], &[0]]);
    b0.set(1, 0, lambda);
    let maps: BTreeMap<(String, i64), Matrix> = [
        ("a", 0, m(&[&[1]])),
        ("a", -1, Matrix::identity(&field, 2)),
        ("a", -2, Matrix::identity(&field, 2)),
        ("b", 0, b0),
        ("b", -1, Matrix::identity(&field, 2)),
        ("b", -2, m(&[&[0, 1]])),
        ("c", -1, m(&[&[1, 0]])),
        ("c", -2, m(&[&[1, -1]])),
    ]
    .into_iter()
    .map(|(a, d, x)| ((a.to_string(), d), x))
    .collect();
    GradedRep::new(case_a_quiver(1), field, spaces, maps)
}

/// Case (a) for a general degree gap `n`; only `n = 1` is constructed.
pub fn build_l_case_a_n(field: ExactField, lambda: &Scalar, n: i64) -> Result<GradedRep> {
    if n != 1 {
        return Err(Error::Unsupported(format!(
            "case (a) is only constructed for n = 1, got {n}"
        )));
    }
    build_l_case_a(field, lambda)
}

/// Brick over `1 ⇉ 2 ⇇ 3` with degree pairs `{0, -m}`, `{0, -n}`.
pub fn build_l_case_b(field: ExactField, lambda: &Scalar, m: i64, n: i64) -> Result<GradedRep> {
    let lambda = check_lambda(&field, lambda)?;
    coprime_pair(m, n)?;
    let mut pieces = Vec::new();
    for l in 0..m + n {
        pieces.push(("1", -l));
        pieces.push(("2", -l));
    }
    for l in 0..m {
        pieces.push(("3", -l));
    }
    let mut entries = Vec::new();
    for l in 0..m + n {
        entries.push(("a", -l, if l == 0 { lambda.clone() } else { field.one() }));
        if l < n {
            entries.push(("b", -l, field.one()));
        }
    }
    for l in 0..m {
        entries.push(("c", -l, field.one()));
        entries.push(("d", -l, field.one()));
    }
    line_rep(case_b_quiver(m, n), field, &pieces, entries)
}

fn case_c_entries(field: &ExactField, lambda: &Scalar, m: i64, n: i64) -> LineData {
    let mut pieces = Vec::new();
    for l in 0..n {
        pieces.push(("1", -l));
    }
    for l in 0..m + n {
        pieces.push(("2", -l));
    }
    let mut entries = Vec::new();
    for l in 0..n {
        entries.push(("k0", -l, field.one()));
        entries.push(("k1", -l, if l == n - 1 { lambda.clone() } else { field.one() }));
        if l < m {
            entries.push(("k2", -l, field.one()));
        }
    }
    (pieces, entries)
}

/// Brick over the Kronecker quiver with arrow degrees `0, -m, -n`.
pub fn build_l_case_c(field: ExactField, lambda: &Scalar, m: i64, n: i64) -> Result<GradedRep> {
    let lambda = check_lambda(&field, lambda)?;
    coprime_pair(m, n)?;
    let (pieces, entries) = case_c_entries(&field, &lambda, m, n);
    line_rep(kronecker_quiver(&[0, -m, -n]), field, &pieces, entries)
}

/// The case-(c) brick for `(a₁, a₂)` placed on the Kronecker quiver with
/// degrees `0, -a₁, …, -a_k`, extended by zero on the remaining arrows.
pub fn build_l_special(field: ExactField, lambda: &Scalar, a: &[i64]) -> Result<GradedRep> {
    let lambda = check_lambda(&field, lambda)?;
    if a.len() < 2 {
        return Err(Error::Precondition("need at least two degrees".into()));
    }
    if a[0] <= 0 || a.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition(format!("need 0 < a₁ ≤ … ≤ a_k, got {a:?}")));
    }
    if a.len() >= 3 && a[0] + a[1] < a[2] {
        return Err(Error::Precondition(format!(
            "need a₁ + a₂ ≥ a₃, got {} + {} < {}",
            a[0], a[1], a[2]
        )));
    }
    coprime_pair(a[0], a[1])?;
    let degrees: Vec<i64> = std::iter::once(0).chain(a.iter().map(|x| -x)).collect();
    let (pieces, entries) = case_c_entries(&field, &lambda, a[0], a[1]);
    line_rep(kronecker_quiver(&degrees), field, &pieces, entries)
}

/// Degree-0 brick `k --(1, λ, 0, …)--> k` over the `k`-Kronecker quiver.
pub fn build_l_kron_deg0(field: ExactField, lambda: &Scalar, k: usize) -> Result<GradedRep> {
    let lambda = check_lambda(&field, lambda)?;
    if k < 2 {
        return Err(Error::Precondition(format!("need at least two arrows, got {k}")));
    }
    let entries = vec![("k0", 0, field.one()), ("k1", 0, lambda)];
    line_rep(kronecker_quiver(&vec![0; k]), field, &[("1", 0), ("2", 0)], entries)
}

/// Which family to build, with its discrete parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    CaseA,
    CaseB { m: i64, n: i64 },
    CaseC { m: i64, n: i64 },
    Special { degrees: Vec<i64> },
    KroneckerDegZero { arrows: usize },
}

impl Family {
    pub fn build(&self, field: ExactField, lambda: &Scalar) -> Result<GradedRep> {
        match self {
            Family::CaseA => build_l_case_a(field, lambda),
            Family::CaseB { m, n } => build_l_case_b(field, lambda, *m, *n),
            Family::CaseC { m, n } => build_l_case_c(field, lambda, *m, *n),
            Family::Special { degrees } => build_l_special(field, lambda, degrees),
            Family::KroneckerDegZero { arrows } => build_l_kron_deg0(field, lambda, *arrows),
        }
    }

    /// Builds one member per λ; over a prime field, λ values that collide
    /// modulo `p` are rejected.
    pub fn build_all(&self, field: ExactField, lambdas: &[Scalar]) -> Result<Vec<GradedRep>> {
        let mut seen = Vec::new();
        for l in lambdas {
            let r = field
                .try_reduce(l)
                .ok_or_else(|| Error::Field(format!("λ has no image in {field}")))?;
            if seen.contains(&r) {
                return Err(Error::Precondition(format!(
                    "λ = {} repeats an earlier sample in {field}",
                    field.format_scalar(l)
                )));
            }
            seen.push(r);
        }
        lambdas.iter().map(|l| self.build(field, l)).collect()
    }

    pub fn quiver(&self) -> Result<GradedQuiver> {
        Ok(self
            .build(ExactField::Rationals, &Scalar::from_integer(1.into()))?
            .quiver()
            .clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcat::hom::hom_dims;
    use crate::repcat::psmc::check_pre_smc;

    fn q(x: i64) -> Scalar {
        Scalar::from_integer(x.into())
    }

    #[test]
    fn case_a_has_thirteen_dimensions() {
        let l = build_l_case_a(ExactField::Rationals, &q(1)).unwrap();
        assert_eq!(l.total_dim(), 13);
        assert!(build_l_case_a(ExactField::Rationals, &q(0)).is_err());
    }

    #[test]
    fn case_a_members_are_orthogonal() {
        let f = ExactField::Rationals;
        let l1 = build_l_case_a(f, &q(1)).unwrap();
        let l2 = build_l_case_a(f, &q(2)).unwrap();
        assert!(hom_dims(&l1, &l2).unwrap().is_empty());
        assert_eq!(hom_dims(&l1, &l1).unwrap(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn case_b_dimension_vector() {
        let l = build_l_case_b(ExactField::Rationals, &q(1), 1, 2).unwrap();
        let dv = l.dimension_vector();
        assert_eq!((dv["1"], dv["3"]), (3, 1));
        assert_eq!(l.support(), Some((-2, 0)));
    }

    #[test]
    fn parameter_violations() {
        let f = ExactField::Rationals;
        assert!(matches!(build_l_case_b(f, &q(1), 2, 4), Err(Error::Unsupported(_))));
        assert!(matches!(build_l_case_c(f, &q(1), 3, 2), Err(Error::Precondition(_))));
        assert!(matches!(
            build_l_special(f, &q(1), &[1, 2, 4]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            build_l_special(f, &q(1), &[2, 2, 3]),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(build_l_case_a_n(f, &q(1), 2), Err(Error::Unsupported(_))));
        assert!(build_l_kron_deg0(f, &q(1), 1).is_err());
    }

    #[test]
    fn special_with_two_degrees_is_case_c() {
        let f = ExactField::Rationals;
        assert_eq!(
            build_l_special(f, &q(3), &[1, 2]).unwrap(),
            build_l_case_c(f, &q(3), 1, 2).unwrap()
        );
    }

    #[test]
    fn colliding_samples_rejected_mod_p() {
        let f = ExactField::prime(3).unwrap();
        assert!(Family::CaseA.build_all(f, &[q(1), q(4)]).is_err());
    }

    #[test]
    fn kronecker_family_is_pre_smc() {
        let f = ExactField::Rationals;
        let family = Family::KroneckerDegZero { arrows: 2 }
            .build_all(f, &[q(1), q(2)])
            .unwrap();
        assert!(check_pre_smc(&family).unwrap().passed());
    }
}

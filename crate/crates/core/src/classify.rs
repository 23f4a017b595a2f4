//! Silting-discreteness of graded path algebras of connected acyclic quivers.
//!
//! A quiver is discrete exactly when its underlying graph is of type A, D
//! or E, or is a single cycle whose clockwise and counter-clockwise total
//! degrees differ. Both conditions are invariant under vertex potentials,
//! so no normalization is needed for the decision itself.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::qtilde::{level_report, LevelReport};
use crate::quiver::{GradedQuiver, GraphType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag")]
pub enum Reason {
    #[serde(rename = "ADE")]
    Ade {
        #[serde(rename = "type")]
        type_label: String,
    },
    AtildeUnequalTotals {
        totals: (i64, i64),
    },
    AtildeEqualTotals {
        totals: (i64, i64),
    },
    GraphOther,
    /// Refinement of `GraphOther`: the normalized degree-zero part already
    /// has a non-Dynkin component. Normalization is not canonical, so a
    /// quiver and a shift of it by a vertex potential may land on different
    /// sides of this refinement; the verdict itself never changes.
    DegreeZeroPartNotDynkin {
        component: Vec<String>,
    },
}

impl Reason {
    pub fn tag(&self) -> &'static str {
        match self {
            Reason::Ade { .. } => "ADE",
            Reason::AtildeUnequalTotals { .. } => "AtildeUnequalTotals",
            Reason::AtildeEqualTotals { .. } => "AtildeEqualTotals",
            Reason::GraphOther => "GraphOther",
            Reason::DegreeZeroPartNotDynkin { .. } => "DegreeZeroPartNotDynkin",
        }
    }

    /// The tag with the degree-zero refinement folded into `GraphOther`.
    pub fn coarse_tag(&self) -> &'static str {
        match self {
            Reason::DegreeZeroPartNotDynkin { .. } => "GraphOther",
            other => other.tag(),
        }
    }

    pub fn totals(&self) -> Option<(i64, i64)> {
        match self {
            Reason::AtildeUnequalTotals { totals } | Reason::AtildeEqualTotals { totals } => Some(*totals),
            _ => None,
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Ade { type_label } => write!(f, "underlying graph is Dynkin of type {type_label}"),
            Reason::AtildeUnequalTotals { totals: (a, b) } => {
                write!(f, "cycle with unequal total degrees ({a} vs {b})")
            }
            Reason::AtildeEqualTotals { totals: (a, b) } => write!(f, "cycle with equal total degrees ({a} = {b})"),
            Reason::GraphOther => write!(f, "underlying graph is neither Dynkin nor a single cycle"),
            Reason::DegreeZeroPartNotDynkin { component } => {
                write!(
                    f,
                    "degree-zero part has a non-Dynkin component {{{}}}",
                    component.join(", ")
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationVerdict {
    pub discrete: bool,
    pub reason: Reason,
    pub normalized_quiver: GradedQuiver,
    /// For non-discrete verdicts: how to obtain a reduction witness.
    pub witness_hint: Option<String>,
}

pub fn classify(q: &GradedQuiver) -> Result<ClassificationVerdict> {
    let (normalized, _, _) = q.normalize()?;
    let reason = match q.graph_type()? {
        t @ (GraphType::A(_) | GraphType::D(_) | GraphType::E(_)) => Reason::Ade { type_label: t.label() },
        GraphType::ACycle(cycle) => {
            let totals = cycle.totals(q);
            if totals.0 != totals.1 {
                Reason::AtildeUnequalTotals { totals }
            } else {
                Reason::AtildeEqualTotals { totals }
            }
        }
        GraphType::Other => non_dynkin_zero_component(&normalized).map_or(Reason::GraphOther, |component| {
            Reason::DegreeZeroPartNotDynkin { component }
        }),
    };
    let discrete = matches!(reason, Reason::Ade { .. } | Reason::AtildeUnequalTotals { .. });
    Ok(ClassificationVerdict {
        discrete,
        reason,
        normalized_quiver: normalized,
        witness_hint: (!discrete).then(|| "reduce".to_string()),
    })
}

fn non_dynkin_zero_component(normalized: &GradedQuiver) -> Option<Vec<String>> {
    let zero = normalized.degree_zero_part();
    zero.components().into_iter().find(|comp| {
        let keep = comp.iter().cloned().collect();
        !zero.induced(&keep).graph_type().map(|t| t.is_dynkin()).unwrap_or(false)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Consistency {
    /// Level data agree with the verdict.
    Consistent,
    /// A discrete verdict with a non-Dynkin level.
    Inconsistent,
    /// A non-discrete verdict whose tested levels are all Dynkin; a larger
    /// bound may be needed.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionTwoReport {
    pub discrete: bool,
    pub levels: Vec<LevelReport>,
    pub first_non_dynkin_level: Option<i64>,
    pub consistency: Consistency,
}

/// Builds every level quiver up to `n_max` and compares the finiteness of
/// each with the verdict of [`classify`].
pub fn check_condition_two(q: &GradedQuiver, n_max: i64) -> Result<ConditionTwoReport> {
    let verdict = classify(q)?;
    let levels = (0..=n_max).map(|n| level_report(q, n)).collect::<Result<Vec<_>>>()?;
    let first_non_dynkin_level = levels.iter().find(|l| !l.dynkin_union()).map(|l| l.n);
    let consistency = match (verdict.discrete, first_non_dynkin_level) {
        (true, None) | (false, Some(_)) => Consistency::Consistent,
        (true, Some(_)) => Consistency::Inconsistent,
        (false, None) => Consistency::Inconclusive,
    };
    Ok(ConditionTwoReport {
        discrete: verdict.discrete,
        levels,
        first_non_dynkin_level,
        consistency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn dynkin_is_discrete() {
        let q = GradedQuiver::from_spec(
            &["1", "2", "3", "4", "5"],
            &[
                ("a", "1", "2", 3),
                ("b", "2", "3", -7),
                ("c", "3", "4", 2),
                ("d", "5", "3", -1),
            ],
        )
        .unwrap();
        let v = classify(&q).unwrap();
        assert!(v.discrete);
        assert_eq!(
            v.reason,
            Reason::Ade {
                type_label: "D5".into()
            }
        );
    }

    #[test]
    fn cycle_totals_decide() {
        let flat = GradedQuiver::from_spec(
            &["1", "2", "3", "4"],
            &[
                ("a", "1", "2", 0),
                ("b", "2", "3", 0),
                ("c", "1", "4", 0),
                ("d", "4", "3", 0),
            ],
        )
        .unwrap();
        let v = classify(&flat).unwrap();
        assert!(!v.discrete);
        assert_eq!(v.reason.totals(), Some((0, 0)));
        let tilted = GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "2", "3", 0), ("c", "1", "3", -1)],
        )
        .unwrap();
        assert!(classify(&tilted).unwrap().discrete);
    }

    #[test]
    fn other_graphs() {
        let q = GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "1", "2", -1), ("c", "2", "3", 0)],
        )
        .unwrap();
        let v = classify(&q).unwrap();
        assert!(!v.discrete);
        assert_eq!(v.reason, Reason::GraphOther);
        let k3 = GradedQuiver::from_spec(
            &["1", "2"],
            &[("a", "1", "2", 0), ("b", "1", "2", 0), ("c", "1", "2", 0)],
        )
        .unwrap();
        assert_eq!(classify(&k3).unwrap().reason.tag(), "DegreeZeroPartNotDynkin");
    }

    #[test]
    fn rejects_bad_input() {
        let q = GradedQuiver::from_spec(&["1", "2"], &[]).unwrap();
        assert!(matches!(classify(&q), Err(Error::Disconnected)));
        let c = GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0), ("b", "2", "1", 0)]).unwrap();
        assert!(matches!(classify(&c), Err(Error::Cyclic)));
    }

    #[test]
    fn condition_two_levels() {
        let q = GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "1", "2", -1), ("c", "2", "3", 0)],
        )
        .unwrap();
        let r = check_condition_two(&q, 2).unwrap();
        assert_eq!(r.first_non_dynkin_level, Some(2));
        assert_eq!(r.consistency, Consistency::Consistent);
        let tilde = GradedQuiver::from_spec(
            &["1", "2", "3"],
            &[("a", "1", "2", 0), ("b", "2", "3", 0), ("c", "1", "3", -1)],
        )
        .unwrap();
        let r = check_condition_two(&tilde, 4).unwrap();
        assert!(r.levels.iter().all(LevelReport::dynkin_union));
        let point = GradedQuiver::from_spec(&["1"], &[]).unwrap();
        assert!(check_condition_two(&point, 0).unwrap().levels[0].dynkin_union());
    }
}

//! Benchmark fixtures.

use gqpa_core::repcat::builders::Family;
use gqpa_core::{ExactField, GradedQuiver, GradedRep, Scalar};

/// Path quiver `1 → 2 → … → k` with alternating degrees `0, -1`.
pub fn graded_path(k: usize) -> GradedQuiver {
    let vs: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let names: Vec<String> = (1..k).map(|i| format!("a{i}")).collect();
    let arrows: Vec<(&str, &str, &str, i64)> = (1..k)
        .map(|i| {
            (
                names[i - 1].as_str(),
                vs[i - 1].as_str(),
                vs[i].as_str(),
                -((i % 2) as i64),
            )
        })
        .collect();
    let vrefs: Vec<&str> = vs.iter().map(String::as_str).collect();
    GradedQuiver::from_spec(&vrefs, &arrows).expect("well-formed")
}

pub fn family_members(family: &Family, field: ExactField, count: i64) -> Vec<GradedRep> {
    let lambdas: Vec<Scalar> = (1..=count).map(|l| Scalar::from_integer(l.into())).collect();
    family.build_all(field, &lambdas).expect("buildable family")
}

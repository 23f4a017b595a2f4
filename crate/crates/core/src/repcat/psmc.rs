use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;

use super::hom::hom_dims;
use super::rep::GradedRep;
use super::resolution::ext1_graded;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// `End(L_i)^0` is not one-dimensional.
    EndomorphismNotOneDimensional,
    /// `Hom(L_i, L_j)^0 != 0` for `i != j`.
    OffDiagonalHom,
    NegativeHom,
    NegativeExt,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::EndomorphismNotOneDimensional => "endomorphism space not one-dimensional",
            ViolationKind::OffDiagonalHom => "nonzero degree-0 Hom between distinct members",
            ViolationKind::NegativeHom => "nonzero Hom in negative degree",
            ViolationKind::NegativeExt => "nonzero Ext1 in negative degree",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub i: usize,
    pub j: usize,
    pub degree: i64,
    pub dim: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} for pair ({}, {}) in degree {} (dimension {})",
            self.kind, self.i, self.j, self.degree, self.dim
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub hom0: usize,
    pub hom_negative: BTreeMap<i64, usize>,
    pub ext1_negative: BTreeMap<i64, usize>,
}

impl PairEntry {
    fn first_violation(&self) -> Option<Violation> {
        let v = |kind, degree, dim| {
            Some(Violation {
                kind,
                i: self.i,
                j: self.j,
                degree,
                dim,
            })
        };
        if self.i == self.j && self.hom0 != 1 {
            return v(ViolationKind::EndomorphismNotOneDimensional, 0, self.hom0);
        }
        if self.i != self.j && self.hom0 != 0 {
            return v(ViolationKind::OffDiagonalHom, 0, self.hom0);
        }
        if let Some((&h, &d)) = self.hom_negative.iter().next_back() {
            return v(ViolationKind::NegativeHom, h, d);
        }
        if let Some((&h, &d)) = self.ext1_negative.iter().next_back() {
            return v(ViolationKind::NegativeExt, h, d);
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsmcReport {
    pub entries: Vec<PairEntry>,
    pub violation: Option<Violation>,
}

impl PsmcReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn fmt_dims(m: &BTreeMap<i64, usize>) -> String {
    if m.is_empty() {
        return "0".into();
    }
    m.iter().map(|(h, d)| format!("{h}:{d}")).collect::<Vec<_>>().join(",")
}

impl fmt::Display for PsmcReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>3} {:>3} {:>5}  {:<16} {:<16}",
            "i", "j", "Hom0", "Hom<0", "Ext1<0"
        )?;
        for e in &self.entries {
            writeln!(
                f,
                "{:>3} {:>3} {:>5}  {:<16} {:<16}",
                e.i,
                e.j,
                e.hom0,
                fmt_dims(&e.hom_negative),
                fmt_dims(&e.ext1_negative)
            )?;
        }
        match &self.violation {
            None => write!(f, "verdict: pass"),
            Some(v) => write!(f, "verdict: fail: {v}"),
        }
    }
}

fn pair_entry(collection: &[GradedRep], i: usize, j: usize) -> Result<PairEntry> {
    let (m, n) = (&collection[i], &collection[j]);
    let hom = hom_dims(m, n)?;
    let ext = ext1_graded(m, n)?;
    Ok(PairEntry {
        i,
        j,
        hom0: hom.get(&0).copied().unwrap_or(0),
        hom_negative: hom.into_iter().filter(|&(h, d)| h < 0 && d > 0).collect(),
        ext1_negative: ext.into_iter().filter(|&(h, d)| h < 0 && d > 0).collect(),
    })
}

/// Evaluates every ordered pair; the verdict reports the first violation in
/// pair order, checking the Hom⁰ condition, then negative Hom, then Ext¹.
/// Pairs are computed on separate threads.
pub fn check_pre_smc(collection: &[GradedRep]) -> Result<PsmcReport> {
    if let Some(first) = collection.first() {
        for other in &collection[1..] {
            first.check_compatible(other)?;
        }
    }
    let k = collection.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(pairs.len().max(1));
    let chunk = pairs.len().div_ceil(workers.max(1)).max(1);
    let results: Vec<Result<PairEntry>> = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&(i, j)| pair_entry(collection, i, j))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("pair worker panicked"))
            .collect()
    });
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let violation = entries.iter().find_map(PairEntry::first_violation);
    Ok(PsmcReport { entries, violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExactField;
    use crate::quiver::GradedQuiver;

    fn a2() -> GradedQuiver {
        GradedQuiver::from_spec(&["1", "2"], &[("a", "1", "2", 0)]).unwrap()
    }

    fn simple(v: &str) -> GradedRep {
        GradedRep::simple(a2(), ExactField::Rationals, v, 0).unwrap()
    }

    #[test]
    fn simples_form_a_pre_smc() {
        let report = check_pre_smc(&[simple("1"), simple("2")]).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.entries.len(), 4);
    }

    #[test]
    fn duplicate_fails_off_diagonal() {
        let report = check_pre_smc(&[simple("1"), simple("1")]).unwrap();
        assert_eq!(report.violation.unwrap().kind, ViolationKind::OffDiagonalHom);
    }

    #[test]
    fn shifted_copy_has_negative_hom() {
        let report = check_pre_smc(&[simple("1"), simple("1").shift(1)]).unwrap();
        let v = report.violation.unwrap();
        assert_eq!((v.kind, v.i, v.j, v.degree), (ViolationKind::NegativeHom, 0, 1, -1));
    }

    #[test]
    fn shifted_extension_has_negative_ext() {
        let report = check_pre_smc(&[simple("1"), simple("2").shift(1)]).unwrap();
        let v = report.violation.unwrap();
        assert_eq!((v.kind, v.degree, v.dim), (ViolationKind::NegativeExt, -1, 1));
    }
}

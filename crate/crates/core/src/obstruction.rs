//! Positivity obstructions from the extreme degrees of the Jones polynomial
//! and the extreme quantum gradings of Khovanov homology.
//!
//! A `Fail` certifies that the link is not positive. A `Pass` certifies
//! nothing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::khovanov::{kh1_rank, BigradedGroups};
use crate::laurent::HalfInt;

pub const KH1_CAVEAT: &str =
    "p1 read from rank Kh^1, which equals p1 for positive links; a Fail still rules out positivity";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("no bound for p1 = {p1}; only 0, 1 and 2 are covered")]
    NotApplicable { p1: u64 },
    #[error("Khovanov test needs both extreme quantum gradings")]
    MissingGradings,
    #[error("Khovanov homology is empty")]
    EmptyHomology,
    #[error("malformed report record: {0}")]
    MalformedRecord(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionInput {
    pub p1: u64,
    pub n: u64,
    pub lead_conway: i64,
    pub jones_min: HalfInt,
    pub jones_max: HalfInt,
    pub j_lower: Option<i64>,
    pub j_upper: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestKind {
    JonesTest,
    KhovanovTest,
    KhovanovFromKh1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub test: TestKind,
    pub applicable: bool,
    pub p1: u64,
    pub lhs: HalfInt,
    /// Absent when the test does not apply.
    pub rhs: Option<HalfInt>,
    pub gamma: Option<i64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strength {
    JonesOnlyFails,
    KhovanovOnlyFails,
    BothFail,
    NeitherFails,
}

pub fn gamma(p1: u64, lead_conway: i64) -> Result<i64, ObstructionError> {
    match p1 {
        0 => Ok(0),
        1 => Ok(2 * lead_conway - 2),
        2 => Ok(lead_conway),
        _ => Err(ObstructionError::NotApplicable { p1 }),
    }
}

fn report(test: TestKind, p1: u64, lhs: HalfInt, bound: Option<(HalfInt, i64)>) -> ObstructionReport {
    let (rhs, gamma, verdict) = match bound {
        Some((rhs, g)) => (Some(rhs), Some(g), if lhs <= rhs { Verdict::Pass } else { Verdict::Fail }),
        None => (None, None, Verdict::NotApplicable),
    };
    ObstructionReport { test, applicable: bound.is_some(), p1, lhs, rhs, gamma, verdict, note: None }
}

/// `max deg V <= 4 min deg V + (n - 1)/2 + gamma`.
pub fn jones_test(input: &ObstructionInput) -> ObstructionReport {
    let bound = gamma(input.p1, input.lead_conway).ok().map(|g| {
        let rhs = input.jones_min.scale(4) + HalfInt::from_doubled(input.n as i64 - 1) + HalfInt::from_int(g);
        (rhs, g)
    });
    report(TestKind::JonesTest, input.p1, input.jones_max, bound)
}

/// `j_upper <= 4 j_lower + n + 4 + 2 gamma`, which is the case table
/// `+4`, `+4 lc`, `+4 + 2 lc` for p1 = 0, 1, 2.
pub fn khovanov_test(input: &ObstructionInput) -> Result<ObstructionReport, ObstructionError> {
    let (Some(lo), Some(hi)) = (input.j_lower, input.j_upper) else {
        return Err(ObstructionError::MissingGradings);
    };
    let bound = gamma(input.p1, input.lead_conway).ok().map(|g| {
        let rhs = 4 * lo + input.n as i64 + 4 + 2 * g;
        (HalfInt::from_int(rhs), g)
    });
    Ok(report(TestKind::KhovanovTest, input.p1, HalfInt::from_int(hi), bound))
}

/// The Khovanov test with p1 taken as the rank of `Kh^1`.
pub fn khovanov_test_from_kh1(kh: &BigradedGroups, n: u64, lead_conway: i64) -> Result<ObstructionReport, ObstructionError> {
    let (lo, hi) = kh.j_range().ok_or(ObstructionError::EmptyHomology)?;
    let input = ObstructionInput {
        p1: kh1_rank(kh),
        n,
        lead_conway,
        jones_min: HalfInt::ZERO,
        jones_max: HalfInt::ZERO,
        j_lower: Some(lo),
        j_upper: Some(hi),
    };
    let mut r = khovanov_test(&input)?;
    r.test = TestKind::KhovanovFromKh1;
    r.note = Some(KH1_CAVEAT.to_string());
    Ok(r)
}

/// `None` unless both reports apply.
pub fn strength_comparison(jones: &ObstructionReport, khovanov: &ObstructionReport) -> Option<Strength> {
    if !jones.applicable || !khovanov.applicable {
        return None;
    }
    Some(match (jones.verdict == Verdict::Fail, khovanov.verdict == Verdict::Fail) {
        (true, true) => Strength::BothFail,
        (true, false) => Strength::JonesOnlyFails,
        (false, true) => Strength::KhovanovOnlyFails,
        (false, false) => Strength::NeitherFails,
    })
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl ObstructionReport {
    /// `key: value` lines. A failing verdict carries the `not positive`
    /// annotation.
    pub fn to_record_text(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".to_string());
        let mut s = format!(
            "test: {}\napplicable: {}\np1: {}\nlhs: {}\nrhs: {}\ngamma: {}\nverdict: {}\n",
            self.test,
            self.applicable,
            self.p1,
            self.lhs,
            opt(self.rhs.map(|r| r.to_string())),
            opt(self.gamma.map(|g| g.to_string())),
            self.verdict,
        );
        if self.verdict == Verdict::Fail {
            s.push_str("conclusion: not positive\n");
        }
        if let Some(n) = &self.note {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }

    pub fn from_record_text(text: &str) -> Result<Self, ObstructionError> {
        let bad = |m: &str| ObstructionError::MalformedRecord(m.to_string());
        let mut kv = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line.split_once(':').ok_or_else(|| bad(line))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| kv.get(k).map(String::as_str).ok_or_else(|| bad(&format!("missing {k}")));
        let half = |v: &str| v.parse::<HalfInt>().map_err(|e| bad(&e));
        let test = match get("test")? {
            "JonesTest" => TestKind::JonesTest,
            "KhovanovTest" => TestKind::KhovanovTest,
            "KhovanovFromKh1" => TestKind::KhovanovFromKh1,
            other => return Err(bad(other)),
        };
        let verdict = match get("verdict")? {
            "Pass" => Verdict::Pass,
            "Fail" => Verdict::Fail,
            "NotApplicable" => Verdict::NotApplicable,
            other => return Err(bad(other)),
        };
        let rhs = match get("rhs")? {
            "-" => None,
            v => Some(half(v)?),
        };
        let gamma = match get("gamma")? {
            "-" => None,
            v => Some(v.parse().map_err(|_| bad(v))?),
        };
        Ok(ObstructionReport {
            test,
            applicable: get("applicable")?.parse().map_err(|_| bad("applicable"))?,
            p1: get("p1")?.parse().map_err(|_| bad("p1"))?,
            lhs: half(get("lhs")?)?,
            rhs,
            gamma,
            verdict,
            note: kv.get("note").cloned(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::khovanov::parse_kh_polynomial;
    use proptest::prelude::*;

    fn input(p1: u64, n: u64, lc: i64, min: i64, max: i64, j: Option<(i64, i64)>) -> ObstructionInput {
        ObstructionInput {
            p1,
            n,
            lead_conway: lc,
            jones_min: min.into(),
            jones_max: max.into(),
            j_lower: j.map(|x| x.0),
            j_upper: j.map(|x| x.1),
        }
    }

    #[test]
    fn gamma_table() {
        assert_eq!(gamma(0, 17), Ok(0));
        assert_eq!(gamma(1, 3), Ok(4));
        assert_eq!(gamma(2, 4), Ok(4));
        assert_eq!(gamma(3, 1), Err(ObstructionError::NotApplicable { p1: 3 }));
    }

    #[test]
    fn knot_12n749() {
        let i = input(0, 1, 0, 3, 10, Some((3, 21)));
        let j = jones_test(&i);
        assert_eq!((j.verdict, j.lhs, j.rhs), (Verdict::Pass, 10.into(), Some(12.into())));
        let k = khovanov_test(&i).unwrap();
        assert_eq!((k.verdict, k.lhs, k.rhs), (Verdict::Fail, 21.into(), Some(17.into())));
        assert_eq!(strength_comparison(&j, &k), Some(Strength::KhovanovOnlyFails));
    }

    #[test]
    fn equality_cases() {
        let trefoil = input(0, 1, 1, 1, 4, Some((1, 9)));
        assert_eq!(jones_test(&trefoil).rhs, Some(4.into()));
        assert_eq!(khovanov_test(&trefoil).unwrap().rhs, Some(9.into()));
        let k74 = input(2, 1, 4, 1, 8, Some((1, 17)));
        assert_eq!(jones_test(&k74).rhs, Some(8.into()));
        let r = khovanov_test(&k74).unwrap();
        assert_eq!((r.verdict, r.rhs, r.gamma), (Verdict::Pass, Some(17.into()), Some(4)));
        assert_eq!(strength_comparison(&jones_test(&k74), &r), Some(Strength::NeitherFails));
    }

    #[test]
    fn half_integer_bound_for_two_components() {
        // positive Hopf link: V = -t^(1/2) - t^(5/2)
        let mut i = input(0, 2, 1, 0, 0, Some((0, 6)));
        i.jones_min = HalfInt::from_doubled(1);
        i.jones_max = HalfInt::from_doubled(5);
        let r = jones_test(&i);
        assert_eq!((r.lhs, r.rhs, r.verdict), (HalfInt::from_doubled(5), Some(HalfInt::from_doubled(5)), Verdict::Pass));
        assert_eq!(khovanov_test(&i).unwrap().rhs, Some(6.into()));
    }

    #[test]
    fn not_applicable_and_missing_data() {
        let i = input(3, 1, 1, 1, 8, Some((1, 17)));
        let r = jones_test(&i);
        assert_eq!((r.applicable, r.verdict, r.rhs, r.gamma), (false, Verdict::NotApplicable, None, None));
        assert_eq!(khovanov_test(&i).unwrap().verdict, Verdict::NotApplicable);
        assert_eq!(strength_comparison(&r, &khovanov_test(&i).unwrap()), None);
        assert_eq!(khovanov_test(&input(0, 1, 1, 1, 4, None)), Err(ObstructionError::MissingGradings));
    }

    #[test]
    fn kh1_variant() {
        let unknot = parse_kh_polynomial("q^-1 + q").unwrap();
        let r = khovanov_test_from_kh1(&unknot, 1, 1).unwrap();
        assert_eq!((r.p1, r.lhs, r.rhs, r.verdict), (0, 1.into(), Some(1.into()), Verdict::Pass));
        assert_eq!(r.note.as_deref(), Some(KH1_CAVEAT));
        let k74 = parse_kh_polynomial(
            "q + q^3 + 2tq^3 + t^2q^5 + 2t^2q^5T^2 + 2t^2q^7 + t^3q^7 + t^3q^7T^2 + t^3q^9 + 2t^4q^9 + t^4q^9T^2 \
             + t^4q^11 + 2t^5q^11T^2 + 2t^5q^13 + t^6q^13 + t^7q^15T^2 + t^7q^17",
        )
        .unwrap();
        let r = khovanov_test_from_kh1(&k74, 1, 4).unwrap();
        assert_eq!((r.p1, r.lhs, r.rhs, r.verdict), (2, 17.into(), Some(17.into()), Verdict::Pass));
        assert_eq!(khovanov_test_from_kh1(&BigradedGroups::new(), 1, 1), Err(ObstructionError::EmptyHomology));
    }

    #[test]
    fn record_text_round_trip() {
        let r = khovanov_test(&input(0, 1, 0, 3, 10, Some((3, 21)))).unwrap();
        let text = r.to_record_text();
        assert!(text.contains("verdict: Fail\nconclusion: not positive\n"));
        assert_eq!(ObstructionReport::from_record_text(&text).unwrap(), r);
        let na = jones_test(&input(5, 2, 1, 1, 3, None));
        assert_eq!(ObstructionReport::from_record_text(&na.to_record_text()).unwrap(), na);
    }

    proptest! {
        #[test]
        fn verdict_follows_from_fields(p1 in 0u64..4, n in 1u64..4, lc in -3i64..6, min in -10i64..10, span in 0i64..30, lo in -10i64..10, jspan in 0i64..40) {
            let mut i = input(p1, n, lc, 0, 0, Some((lo, lo + jspan)));
            i.jones_min = HalfInt::from_doubled(min);
            i.jones_max = HalfInt::from_doubled(min + span);
            for r in [jones_test(&i), khovanov_test(&i).unwrap()] {
                prop_assert_eq!(r.applicable, p1 <= 2);
                match r.rhs {
                    Some(rhs) => prop_assert_eq!(r.verdict == Verdict::Pass, r.lhs <= rhs),
                    None => prop_assert_eq!(r.verdict, Verdict::NotApplicable),
                }
            }
        }
    }
}

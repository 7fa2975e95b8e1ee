//! Exhaustive checks over closures of positive braid words: the positive
//! diagram grading laws and the soundness of both obstruction tests.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conway::{conway_oriented, DEFAULT_SKEIN_BUDGET};
use crate::diagram::{braid_closure, BraidWord, Diagram};
use crate::jones::{jones_polynomial, jones_summary, lickorish_bounds, v_to_unnormalized};
use crate::khovanov::{
    euler_characteristic, kh1_rank, khovanov_homology_capped, potential_gradings, BigradedGroups, DEFAULT_KH_CAP,
};
use crate::laurent::{small, HalfInt, LaurentPoly};
use crate::obstruction::{jones_test, khovanov_test, ObstructionInput, ObstructionReport, TestKind, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySpec {
    pub max_strands: usize,
    pub max_length: usize,
    pub kh_cap: usize,
    /// Compute Khovanov homology for every diagram instead of once per
    /// (Jones, Conway) class.
    pub kh_per_diagram: bool,
}

impl SurveySpec {
    pub fn new(max_strands: usize, max_length: usize) -> Self {
        SurveySpec { max_strands, max_length, kh_cap: DEFAULT_KH_CAP, kh_per_diagram: false }
    }

    /// Parses `strands=<n>,length=<m>`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut spec = SurveySpec::new(0, 0);
        for part in text.split([',', ';']).map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let v: usize = v.trim().parse().map_err(|_| format!("bad number in {part:?}"))?;
            match k.trim() {
                "strands" => spec.max_strands = v,
                "length" => spec.max_length = v,
                other => return Err(format!("unknown survey key {other:?}")),
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Law {
    /// chi(Kh) = (q + q^-1) V
    EulerCharacteristic,
    /// j_lower = c - |s_A|
    LowerGrading,
    /// min deg V = (c - |s_A| + 1)/2
    LickorishMin,
    /// max deg V <= (2c + |s_B| - 1)/2
    LickorishMax,
    /// j_min(D) <= j_lower <= j_upper <= j_max(D)
    Sandwich,
    /// j_max(D) = 2c + |s_B|
    PositivePotential,
    /// rank Kh^1 = p1
    Kh1Rank,
    JonesSoundness,
    KhovanovSoundness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub word: String,
    pub law: Law,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub word: String,
    pub crossings: usize,
    pub components: usize,
    pub s_a: usize,
    pub s_b: usize,
    pub class: usize,
    pub jones: String,
    pub conway: String,
    pub p1: u64,
    pub lead_conway: i64,
    pub j_lower: i64,
    pub j_upper: i64,
    pub j_min_potential: i64,
    pub j_max_potential: i64,
    pub kh1_rank: u64,
    pub reports: Vec<ObstructionReport>,
    /// Tests whose bound is attained exactly.
    pub equality: Vec<TestKind>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub words: usize,
    pub diagrams: usize,
    pub classes: usize,
    pub records: Vec<SurveyRecord>,
    pub skipped: Vec<String>,
    pub violations: Vec<Violation>,
}

impl SurveyReport {
    pub fn count(&self, law: Law) -> usize {
        self.violations.iter().filter(|v| v.law == law).count()
    }

    pub fn equality_cases(&self) -> impl Iterator<Item = &SurveyRecord> {
        self.records.iter().filter(|r| !r.equality.is_empty())
    }
}

/// Positive words on `strands` strands of length exactly `len` that use
/// every generator, so that the closure is a non-split diagram.
pub fn positive_words(strands: usize, len: usize) -> Vec<Vec<i32>> {
    let g = strands.saturating_sub(1);
    if g == 0 || len < g {
        return vec![];
    }
    let total = (g as u64).checked_pow(len as u32).expect("word count fits in u64");
    (0..total)
        .filter_map(|mut code| {
            let mut w = Vec::with_capacity(len);
            let mut used = 0u64;
            for _ in 0..len {
                let letter = (code % g as u64) as i32 + 1;
                code /= g as u64;
                used |= 1 << (letter - 1);
                w.push(letter);
            }
            (used.count_ones() as usize == g).then_some(w)
        })
        .collect()
}

struct Prepared {
    word: String,
    diagram: Diagram,
    jones: LaurentPoly,
    conway: LaurentPoly,
}

pub fn cmd_survey(spec: &SurveySpec) -> SurveyReport {
    let mut report = SurveyReport::default();
    let mut seen = HashSet::new();
    let mut diagrams = Vec::new();
    for strands in 2..=spec.max_strands {
        for len in 1..=spec.max_length {
            for w in positive_words(strands, len) {
                report.words += 1;
                let word = BraidWord::new(w, strands).expect("generated words are valid");
                let d = braid_closure(&word);
                let key = d.orient().expect("braid closures are oriented").canonical_key();
                if seen.insert(key) {
                    diagrams.push((word.to_string(), d));
                }
            }
        }
    }
    report.diagrams = diagrams.len();

    let prepared: Vec<Prepared> = diagrams
        .into_par_iter()
        .map(|(word, d)| {
            let jones = jones_polynomial(&d).expect("bracket of a valid diagram");
            let od = d.orient().expect("braid closures are oriented");
            let conway = conway_oriented(&od, DEFAULT_SKEIN_BUDGET).expect("skein budget suffices for survey sizes");
            Prepared { word, diagram: d, jones, conway }
        })
        .collect();

    // fingerprint classes, represented by their smallest diagram
    let mut classes: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();
    for (k, p) in prepared.iter().enumerate() {
        classes.entry((p.jones.to_text("t"), p.conway.to_text("z"))).or_default().push(k);
    }
    let class_of: BTreeMap<usize, usize> =
        classes.values().enumerate().flat_map(|(c, members)| members.iter().map(move |&m| (m, c))).collect();
    report.classes = classes.len();
    let reps: Vec<usize> = classes
        .values()
        .map(|m| *m.iter().min_by_key(|&&k| (prepared[k].diagram.crossing_count(), k)).expect("nonempty class"))
        .collect();

    let kh_targets: Vec<usize> = if spec.kh_per_diagram { (0..prepared.len()).collect() } else { reps.clone() };
    let kh: BTreeMap<usize, Result<BigradedGroups, String>> = kh_targets
        .par_iter()
        .map(|&k| (k, khovanov_homology_capped(&prepared[k].diagram, spec.kh_cap).map_err(|e| e.to_string())))
        .collect();

    let results: Vec<(Option<SurveyRecord>, Vec<Violation>, Option<String>)> = (0..prepared.len())
        .into_par_iter()
        .map(|k| {
            let source = if spec.kh_per_diagram { k } else { reps[class_of[&k]] };
            match &kh[&source] {
                Ok(groups) => {
                    let (rec, v) = check_diagram(&prepared[k], class_of[&k], groups);
                    (Some(rec), v, None)
                }
                Err(e) => (None, vec![], Some(format!("{}: {e}", prepared[k].word))),
            }
        })
        .collect();
    for (rec, v, skip) in results {
        report.records.extend(rec);
        report.violations.extend(v);
        report.skipped.extend(skip);
    }
    report
}

fn check_diagram(p: &Prepared, class: usize, kh: &BigradedGroups) -> (SurveyRecord, Vec<Violation>) {
    let d = &p.diagram;
    let mut violations = Vec::new();
    let mut fail = |law: Law, detail: String| violations.push(Violation { word: p.word.clone(), law, detail });

    let c = d.crossing_count() as i64;
    let s_a = d.a_state_circles();
    let s_b = d.b_state_circles();
    let n = d.components();
    let summary = jones_summary(&p.jones).expect("Jones polynomial of a link is nonzero");
    let (lick_min, lick_max) = lickorish_bounds(d).expect("positive braid closures are positive diagrams");
    let (j_min_pot, j_max_pot) = potential_gradings(d).expect("oriented");
    let (j_lower, j_upper) = kh.j_range().expect("Khovanov homology of a link is nonzero");
    let kh1 = kh1_rank(kh);
    let lead = p.conway.lead_coeff().map(small).unwrap_or(0);

    let expected_chi = v_to_unnormalized(&p.jones).expect("Jones exponents have one parity");
    if euler_characteristic(kh) != expected_chi {
        fail(Law::EulerCharacteristic, format!("chi(Kh) = {}, expected {}", euler_characteristic(kh).to_text("q"), expected_chi.to_text("q")));
    }
    if j_lower != c - s_a as i64 {
        fail(Law::LowerGrading, format!("j_lower {j_lower} != c - |s_A| = {}", c - s_a as i64));
    }
    if summary.min_deg != lick_min {
        fail(Law::LickorishMin, format!("min deg V {} != {lick_min}", summary.min_deg));
    }
    if summary.max_deg > lick_max {
        fail(Law::LickorishMax, format!("max deg V {} > {lick_max}", summary.max_deg));
    }
    if !(j_min_pot <= j_lower && j_lower <= j_upper && j_upper <= j_max_pot) {
        fail(Law::Sandwich, format!("{j_min_pot} <= {j_lower} <= {j_upper} <= {j_max_pot} fails"));
    }
    if j_max_pot != 2 * c + s_b as i64 {
        fail(Law::PositivePotential, format!("j_max(D) {j_max_pot} != 2c + |s_B| = {}", 2 * c + s_b as i64));
    }
    if kh1 != summary.p1 {
        fail(Law::Kh1Rank, format!("rank Kh^1 = {kh1}, p1 = {}", summary.p1));
    }

    let input = ObstructionInput {
        p1: summary.p1,
        n: n as u64,
        lead_conway: lead,
        jones_min: summary.min_deg,
        jones_max: summary.max_deg,
        j_lower: Some(j_lower),
        j_upper: Some(j_upper),
    };
    let jr = jones_test(&input);
    let kr = khovanov_test(&input).expect("gradings present");
    let mut equality = Vec::new();
    for r in [&jr, &kr] {
        if r.verdict == Verdict::Fail {
            let law = if r.test == TestKind::JonesTest { Law::JonesSoundness } else { Law::KhovanovSoundness };
            fail(law, format!("{} > {}", r.lhs, r.rhs.unwrap_or(HalfInt::ZERO)));
        }
        if r.rhs == Some(r.lhs) {
            equality.push(r.test);
        }
    }
    let rec = SurveyRecord {
        word: p.word.clone(),
        crossings: c as usize,
        components: n,
        s_a,
        s_b,
        class,
        jones: p.jones.to_text("t"),
        conway: p.conway.to_text("z"),
        p1: summary.p1,
        lead_conway: lead,
        j_lower,
        j_upper,
        j_min_potential: j_min_pot,
        j_max_potential: j_max_pot,
        kh1_rank: kh1,
        reports: vec![jr, kr],
        equality,
    };
    (rec, violations)
}

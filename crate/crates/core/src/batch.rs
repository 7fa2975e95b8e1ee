//! Per-record computation and obstruction testing, run in parallel over a
//! batch with output kept in input order.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conway::{conway_oriented, DEFAULT_SKEIN_BUDGET};
use crate::diagram::Diagram;
use crate::ingest::LinkRecord;
use crate::jones::{jones_polynomial_capped, jones_summary, JonesSummary, DEFAULT_BRACKET_CAP};
use crate::khovanov::{extreme_gradings, khovanov_homology_capped, BigradedGroups, GradingSummary, DEFAULT_KH_CAP};
use crate::laurent::{small, LaurentPoly};
use crate::obstruction::{
    jones_test, khovanov_test, khovanov_test_from_kh1, strength_comparison, ObstructionInput, ObstructionReport,
    Strength,
};

pub const SCHEMA_VERSION: u32 = 1;

/// How ingested invariants are matched to the positive-diagram convention.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MirrorMode {
    /// Mirror when the link is known to be positive but the ingested Jones
    /// polynomial has negative minimum degree.
    #[default]
    Auto,
    Never,
    Always,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Wants {
    pub jones: bool,
    pub conway: bool,
    pub kh: bool,
}

impl Wants {
    pub const ALL: Wants = Wants { jones: true, conway: true, kh: true };
}

#[derive(Clone, Debug)]
pub struct Config {
    pub wants: Wants,
    pub kh_cap: usize,
    pub bracket_cap: usize,
    pub skein_budget: usize,
    pub mirror: MirrorMode,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            wants: Wants::ALL,
            kh_cap: DEFAULT_KH_CAP,
            bracket_cap: DEFAULT_BRACKET_CAP,
            skein_budget: DEFAULT_SKEIN_BUDGET,
            mirror: MirrorMode::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// One output record. `errors` are hard failures (including disagreement
/// between computed and ingested invariants); `flags` are skipped work and
/// assumptions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordResult {
    pub schema_version: u32,
    pub index: usize,
    pub name: String,
    pub status: Status,
    pub errors: Vec<String>,
    pub flags: Vec<String>,
    pub mirrored: bool,
    pub components: Option<u64>,
    pub crossings: Option<usize>,
    pub reduced_crossings: Option<usize>,
    pub positive_diagram: Option<bool>,
    pub jones: Option<String>,
    pub jones_summary: Option<JonesSummary>,
    pub conway: Option<String>,
    pub lead_conway: Option<i64>,
    pub kh: Option<BigradedGroups>,
    pub j_range: Option<[i64; 2]>,
    pub gradings: Option<GradingSummary>,
    pub reports: Vec<ObstructionReport>,
    pub strength: Option<Strength>,
    pub elapsed_ms: u64,
}

impl RecordResult {
    fn new(index: usize, name: &str) -> Self {
        RecordResult {
            schema_version: SCHEMA_VERSION,
            index,
            name: name.to_string(),
            status: Status::Ok,
            errors: vec![],
            flags: vec![],
            mirrored: false,
            components: None,
            crossings: None,
            reduced_crossings: None,
            positive_diagram: None,
            jones: None,
            jones_summary: None,
            conway: None,
            lead_conway: None,
            kh: None,
            j_range: None,
            gradings: None,
            reports: vec![],
            strength: None,
            elapsed_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("== {} [{}]\n", self.name, if self.status == Status::Ok { "ok" } else { "error" });
        let mut line = |k: &str, v: String| s.push_str(&format!("  {k:<18} {v}\n"));
        if let Some(c) = self.crossings {
            line("crossings", format!("{c} (reduced {})", self.reduced_crossings.unwrap_or(c)));
        }
        if let Some(p) = self.positive_diagram {
            line("positive diagram", p.to_string());
        }
        if let Some(n) = self.components {
            line("components", n.to_string());
        }
        if self.mirrored {
            line("mirrored input", "true".into());
        }
        if let Some(v) = &self.jones {
            line("jones", v.clone());
        }
        if let Some(js) = &self.jones_summary {
            line("jones degrees", format!("[{}, {}], p1 = {}", js.min_deg, js.max_deg, js.p1));
        }
        if let Some(c) = &self.conway {
            line("conway", c.clone());
        }
        if let Some(kh) = &self.kh {
            line("khovanov", kh.to_text());
        }
        if let Some(g) = &self.gradings {
            line(
                "gradings",
                format!(
                    "j_min(D) {} <= j_lower {} <= j_upper {} <= j_max(D) {}",
                    g.j_min_potential, g.j_lower, g.j_upper, g.j_max_potential
                ),
            );
        } else if let Some([lo, hi]) = self.j_range {
            line("gradings", format!("j_lower {lo}, j_upper {hi}"));
        }
        for r in &self.reports {
            let rhs = r.rhs.map_or("-".to_string(), |x| x.to_string());
            let suffix = if r.verdict == crate::obstruction::Verdict::Fail { " (not positive)" } else { "" };
            line(&format!("{}", r.test), format!("{} <= {} : {}{}", r.lhs, rhs, r.verdict, suffix));
        }
        if let Some(st) = self.strength {
            line("comparison", st.to_string());
        }
        for f in &self.flags {
            line("flag", f.clone());
        }
        for e in &self.errors {
            line("error", e.clone());
        }
        s
    }
}

fn mirror_conway(c: &LaurentPoly) -> LaurentPoly {
    // z -> -z
    c.map_terms(|e| e, |e| (e / 2).rem_euclid(2) == 1)
}

/// Applies the mirror knob to the ingested invariants, returning whether
/// they were mirrored.
fn normalize_mirror(rec: &mut LinkRecord, mode: MirrorMode, diagram_positive: bool) -> bool {
    let mirror = match mode {
        MirrorMode::Never => false,
        MirrorMode::Always => true,
        MirrorMode::Auto => {
            let claims_positive = rec.positive == Some(true) || diagram_positive;
            claims_positive && rec.jones.as_ref().and_then(|v| v.min_deg()).is_some_and(|m| m.doubled() < 0)
        }
    };
    if mirror {
        rec.jones = rec.jones.as_ref().map(|v| v.invert_variable());
        rec.conway = rec.conway.as_ref().map(mirror_conway);
        rec.kh = rec.kh.as_ref().map(|k| k.mirror());
    }
    mirror
}

fn merge<T: PartialEq + Clone>(
    out: &mut RecordResult,
    what: &str,
    computed: Option<T>,
    ingested: Option<T>,
    show: impl Fn(&T) -> String,
) -> Option<T> {
    match (computed, ingested) {
        (Some(c), Some(i)) => {
            if c != i {
                out.errors.push(format!("{what} disagreement: computed {}, ingested {}", show(&c), show(&i)));
            }
            Some(c)
        }
        (c, i) => c.or(i),
    }
}

/// Computes the requested invariants and, if `run_tests`, the obstruction
/// reports.
pub fn process_record(index: usize, rec: &LinkRecord, cfg: &Config, run_tests: bool) -> RecordResult {
    let start = Instant::now();
    let mut out = RecordResult::new(index, &rec.name);
    let result = catch_unwind(AssertUnwindSafe(|| {
        let mut local = out.clone();
        process_inner(&mut local, rec, cfg, run_tests);
        local
    }));
    match result {
        Ok(r) => out = r,
        Err(_) => out.errors.push("internal error while processing record".into()),
    }
    if !out.errors.is_empty() {
        out.status = Status::Error;
    }
    out.elapsed_ms = start.elapsed().as_millis() as u64;
    out
}

fn process_inner(out: &mut RecordResult, rec: &LinkRecord, cfg: &Config, run_tests: bool) {
    out.errors.extend(rec.errors.iter().cloned());
    let mut rec = rec.clone();
    let wants = if run_tests { Wants::ALL } else { cfg.wants };

    let diagram = rec.diagram();
    let mut reduced: Option<Diagram> = None;
    let mut positive = false;
    if let Some(d) = &diagram {
        out.crossings = Some(d.crossing_count());
        match d.reduce_nugatory() {
            Ok(r) => {
                positive = r.is_positive().unwrap_or(false);
                out.positive_diagram = Some(d.is_positive().unwrap_or(false));
                out.reduced_crossings = Some(r.crossing_count());
                out.components = Some(r.components() as u64);
                reduced = Some(r);
            }
            Err(e) => out.errors.push(e.to_string()),
        }
    }
    out.mirrored = normalize_mirror(&mut rec, cfg.mirror, positive);
    if let (Some(n), Some(m)) = (out.components, rec.components) {
        if n != m {
            out.errors.push(format!("components disagreement: computed {n}, ingested {m}"));
        }
    }
    out.components = out.components.or(rec.components);

    let mut jones = None;
    let mut conway = None;
    let mut kh = None;
    if let Some(d) = &reduced {
        if wants.jones {
            match jones_polynomial_capped(d, cfg.bracket_cap) {
                Ok(v) => jones = Some(v),
                Err(e) => out.errors.push(format!("jones: {e}")),
            }
        }
        if wants.conway {
            match d.orient().map_err(|e| e.to_string()).and_then(|od| conway_oriented(&od, cfg.skein_budget).map_err(|e| e.to_string())) {
                Ok(c) => conway = Some(c),
                Err(e) => out.flags.push(format!("conway skipped: {e}")),
            }
        }
        if wants.kh {
            match khovanov_homology_capped(d, cfg.kh_cap) {
                Ok(k) => kh = Some(k),
                Err(e @ crate::khovanov::KhError::CrossingCapExceeded { .. }) => {
                    out.flags.push(format!("khovanov skipped: {e}"))
                }
                Err(e) => out.errors.push(format!("khovanov: {e}")),
            }
        }
    }
    let jones = merge(out, "jones", jones, rec.jones.clone(), |v| v.to_text("t"));
    let conway = merge(out, "conway", conway, rec.conway.clone(), |c| c.to_text("z"));
    let kh = merge(out, "khovanov", kh, rec.kh.clone(), |k| k.to_text());

    if let Some(v) = &jones {
        out.jones = Some(v.to_text("t"));
        match jones_summary(v) {
            Ok(s) => out.jones_summary = Some(s),
            Err(e) => out.errors.push(format!("jones: {e}")),
        }
        if out.components.is_none() && v.has_integer_exponents() {
            out.components = Some(1);
            out.flags.push("component count not given; assumed 1".into());
        }
    }
    if let Some(c) = &conway {
        out.conway = Some(c.to_text("z"));
        out.lead_conway = Some(c.lead_coeff().map(small).unwrap_or(0));
    }
    if let Some(k) = &kh {
        out.j_range = k.j_range().map(|(a, b)| [a, b]);
        if let Some(d) = &reduced {
            if let Ok(g) = extreme_gradings(k, d) {
                out.gradings = Some(g);
            }
        }
    }
    out.kh = kh;

    if run_tests {
        run_obstructions(out);
    }
}

fn run_obstructions(out: &mut RecordResult) {
    let Some(js) = out.jones_summary.clone() else {
        out.errors.push("obstruction tests need a Jones polynomial".into());
        return;
    };
    let Some(n) = out.components else {
        out.errors.push("obstruction tests need the component count".into());
        return;
    };
    let lead = match (js.p1, out.lead_conway) {
        (_, Some(l)) => l,
        (0, None) => 0,
        (p1, None) if p1 >= 3 => 0,
        _ => {
            out.errors.push("obstruction tests need the leading Conway coefficient when p1 is 1 or 2".into());
            return;
        }
    };
    let input = ObstructionInput {
        p1: js.p1,
        n,
        lead_conway: lead,
        jones_min: js.min_deg,
        jones_max: js.max_deg,
        j_lower: out.j_range.map(|r| r[0]),
        j_upper: out.j_range.map(|r| r[1]),
    };
    let jr = jones_test(&input);
    out.reports.push(jr.clone());
    match khovanov_test(&input) {
        Ok(kr) => {
            out.strength = strength_comparison(&jr, &kr);
            out.reports.push(kr);
            if let Some(kh) = &out.kh {
                if let Ok(r) = khovanov_test_from_kh1(kh, n, lead) {
                    out.reports.push(r);
                }
            }
        }
        Err(_) => out.flags.push("khovanov test skipped: no Khovanov homology".into()),
    }
}

pub fn cmd_compute(records: &[LinkRecord], cfg: &Config) -> Vec<RecordResult> {
    records.par_iter().enumerate().map(|(i, r)| process_record(i, r, cfg, false)).collect()
}

pub fn cmd_test(records: &[LinkRecord], cfg: &Config) -> Vec<RecordResult> {
    records.par_iter().enumerate().map(|(i, r)| process_record(i, r, cfg, true)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::obstruction::Verdict;

    fn ingested(jones: &str, kh: Option<&str>) -> LinkRecord {
        LinkRecord {
            name: "x".into(),
            jones: Some(LaurentPoly::parse(jones, 't').unwrap()),
            kh: kh.map(|k| crate::khovanov::parse_kh_polynomial(k).unwrap()),
            ..Default::default()
        }
    }

    #[test]
    fn compute_trefoil() {
        let r = process_record(0, &LinkRecord::from_diagram("3_1", fixtures::trefoil()), &Config::default(), false);
        assert_eq!(r.status, Status::Ok, "{:?}", r.errors);
        assert_eq!(r.jones.as_deref(), Some("t + t^3 - t^4"));
        assert_eq!(r.conway.as_deref(), Some("1 + z^2"));
        assert_eq!(r.j_range, Some([1, 9]));
        assert!(r.reports.is_empty());
    }

    #[test]
    fn kink_reduces_to_unknot() {
        let r = process_record(0, &LinkRecord::from_diagram("kink", fixtures::braid("strands=2; 1")), &Config::default(), false);
        assert_eq!((r.crossings, r.reduced_crossings), (Some(1), Some(0)));
        assert_eq!(r.jones.as_deref(), Some("1"));
        assert_eq!(r.kh.unwrap().to_text(), "q^-1 + q^1");
    }

    #[test]
    fn headline_record() {
        let r = process_record(0, &ingested(fixtures::K12N749_JONES, Some(fixtures::K12N749_KH)), &Config::default(), true);
        assert_eq!(r.status, Status::Ok, "{:?}", r.errors);
        assert_eq!(r.reports[0].verdict, Verdict::Pass);
        assert_eq!(r.reports[1].verdict, Verdict::Fail);
        assert_eq!(r.strength, Some(Strength::KhovanovOnlyFails));
        assert!(r.flags.iter().any(|f| f.contains("assumed 1")));
    }

    #[test]
    fn disagreement_is_an_error() {
        let mut rec = LinkRecord::from_diagram("3_1", fixtures::trefoil());
        rec.jones = Some(LaurentPoly::parse("t + t^3", 't').unwrap());
        let r = process_record(0, &rec, &Config::default(), false);
        assert_eq!(r.status, Status::Error);
        assert!(r.errors[0].starts_with("jones disagreement"));
    }

    #[test]
    fn mirror_knob() {
        let mut rec = LinkRecord::from_diagram("3_1", fixtures::trefoil());
        rec.jones = Some(LaurentPoly::parse("t^-1 + t^-3 - t^-4", 't').unwrap());
        rec.conway = Some(LaurentPoly::parse("1 + z^2", 'z').unwrap());
        let r = process_record(0, &rec, &Config::default(), false);
        assert!(r.mirrored);
        assert_eq!(r.status, Status::Ok, "{:?}", r.errors);
        let never = Config { mirror: MirrorMode::Never, ..Config::default() };
        assert_eq!(process_record(0, &rec, &never, false).status, Status::Error);
    }

    #[test]
    fn p1_three_is_not_applicable() {
        let r = process_record(0, &ingested("t - 3t^2 + 2t^3", Some("q + q^3 + 3tq^3")), &Config::default(), true);
        assert!(r.reports.iter().all(|x| x.verdict == Verdict::NotApplicable));
        assert_eq!(r.strength, None);
    }

    #[test]
    fn batch_keeps_order_and_isolates_failures() {
        let mut recs = vec![LinkRecord::from_diagram("a", fixtures::trefoil())];
        recs.push(LinkRecord { name: "bad".into(), errors: vec!["unparseable".into()], ..Default::default() });
        recs.push(LinkRecord::from_diagram("c", fixtures::hopf()));
        let out = cmd_test(&recs, &Config::default());
        assert_eq!(out.iter().map(|r| r.name.as_str()).collect::<Vec<_>>(), ["a", "bad", "c"]);
        assert_eq!(out.iter().map(|r| r.status).collect::<Vec<_>>(), [Status::Ok, Status::Error, Status::Ok]);
        let hopf = &out[2];
        assert_eq!(hopf.reports[0].rhs, Some(crate::laurent::HalfInt::from_doubled(5)));
    }

    #[test]
    fn output_is_deterministic() {
        let recs = vec![LinkRecord::from_diagram("a", fixtures::knot_7_4())];
        let strip = |mut r: RecordResult| {
            r.elapsed_ms = 0;
            r.to_json()
        };
        let a: Vec<String> = cmd_test(&recs, &Config::default()).into_iter().map(strip).collect();
        let b: Vec<String> = cmd_test(&recs, &Config::default()).into_iter().map(strip).collect();
        assert_eq!(a, b);
        let back: RecordResult = serde_json::from_str(&a[0]).unwrap();
        assert_eq!(strip(back), a[0]);
    }
}

//! Report types shared by the text and JSON renderers.
//!
//! Every rational is carried as its exact `a/b` string next to a six-digit
//! decimal. Field order is fixed by the struct definitions, so JSON output is
//! byte-identical for identical input.

use std::fmt::Write as _;

use negprob::{QuasiDistribution, Rational};
use serde::Serialize;

use crate::published::Discrepancy;

const DECIMAL_DIGITS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Num {
    pub exact: String,
    pub decimal: String,
}

impl Num {
    pub fn new(r: &Rational) -> Num {
        Num {
            exact: r.to_string(),
            decimal: r.to_decimal_string(DECIMAL_DIGITS),
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({})", self.exact, self.decimal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomRow {
    /// Sign pattern in variable order, e.g. `+-+`.
    pub atom: String,
    pub p: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<Num>,
}

pub fn atom_rows(dist: &QuasiDistribution, upper: Option<&[Rational]>) -> Vec<AtomRow> {
    dist.iter()
        .map(|(atom, w)| AtomRow {
            atom: atom.signs(),
            p: Num::new(w),
            upper: upper.map(|u| Num::new(&u[atom.index()])),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentRow {
    pub moment: String,
    pub value: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScoreRow {
    pub label: String,
    pub required: Num,
    pub actual: Num,
    pub satisfied: bool,
}

impl ScoreRow {
    pub fn from_core(r: &negprob::negprob::ScorecardRow) -> ScoreRow {
        ScoreRow {
            label: r.label.clone(),
            required: Num::new(&r.required),
            actual: Num::new(&r.actual),
            satisfied: r.satisfied(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SzReport {
    pub sum: Num,
    pub lower: Num,
    pub upper: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub headline: String,
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<SzReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<AtomRow>>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub headline: String,
    pub negative_mass: Num,
    pub l1_norm: Num,
    pub upper_total: Num,
    pub distribution: Vec<AtomRow>,
    pub scorecard: Vec<ScoreRow>,
    pub certificate: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_scorecard: Option<Vec<ScoreRow>>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub headline: String,
    pub target: String,
    pub low: Num,
    pub high: Num,
    pub semantic_low: Num,
    pub semantic_high: Num,
    pub mass_budget: Num,
    pub budget_kind: String,
    pub low_witness: Vec<AtomRow>,
    pub high_witness: Vec<AtomRow>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRow {
    pub expert: String,
    pub pair: String,
    pub epsilon: Num,
    pub k: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BayesReport {
    pub headline: String,
    pub likelihood: String,
    pub steps: Vec<StepRow>,
    pub k: Num,
    pub posterior: Vec<AtomRow>,
    pub moments: Vec<MomentRow>,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Ok,
    Mismatch,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub headline: String,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn mismatches(&self) -> usize {
        self.checks.iter().filter(|c| c.status == CheckStatus::Mismatch).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Check(CheckReport),
    Solve(SolveReport),
    Bounds(BoundsReport),
    Bayes(BayesReport),
    Oracle(OracleReport),
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self, variables: &[String]) -> String {
        let mut out = String::new();
        match self {
            Report::Check(r) => {
                line(&mut out, &r.headline);
                if let Some(sz) = &r.closed_form {
                    line(
                        &mut out,
                        &format!(
                            "correlation sum: {}; required within [{}, {}]",
                            sz.sum, sz.lower, sz.upper
                        ),
                    );
                }
                if let Some(w) = &r.witness {
                    line(&mut out, "witness:");
                    table(&mut out, variables, w, false);
                }
                discrepancies(&mut out, &r.discrepancies);
            }
            Report::Solve(r) => {
                line(&mut out, &r.headline);
                line(&mut out, &format!("negative mass: {}", r.negative_mass));
                line(&mut out, &format!("l1 norm: {}", r.l1_norm));
                line(&mut out, &format!("upper measure total: {}", r.upper_total));
                table(&mut out, variables, &r.distribution, true);
                scorecard(&mut out, "constraints:", &r.scorecard);
                line(&mut out, &format!("optimal basis: {}", r.certificate.join(" ")));
                if let Some(card) = &r.family_scorecard {
                    scorecard(&mut out, "published family at delta = 0:", card);
                }
                discrepancies(&mut out, &r.discrepancies);
            }
            Report::Bounds(r) => {
                line(&mut out, &r.headline);
                line(&mut out, &format!("low: {}", r.low));
                line(&mut out, &format!("high: {}", r.high));
                line(
                    &mut out,
                    &format!("semantic range of a ±1 moment: [{}, {}]", r.semantic_low.exact, r.semantic_high.exact),
                );
                line(&mut out, &format!("mass budget ({}): {}", r.budget_kind, r.mass_budget));
                line(&mut out, "low witness:");
                table(&mut out, variables, &r.low_witness, false);
                line(&mut out, "high witness:");
                table(&mut out, variables, &r.high_witness, false);
                discrepancies(&mut out, &r.discrepancies);
            }
            Report::Bayes(r) => {
                line(&mut out, &r.headline);
                line(&mut out, &format!("likelihood: {}", r.likelihood));
                for s in &r.steps {
                    line(
                        &mut out,
                        &format!("update {} on {} eps {}: k = {}", s.expert, s.pair, s.epsilon.exact, s.k),
                    );
                }
                line(&mut out, &format!("total evidence k = {}", r.k));
                line(&mut out, "posterior:");
                table(&mut out, variables, &r.posterior, false);
                for m in &r.moments {
                    line(&mut out, &format!("E({}) = {}", m.moment, m.value));
                }
                discrepancies(&mut out, &r.discrepancies);
            }
            Report::Oracle(r) => {
                line(&mut out, &r.headline);
                for c in &r.checks {
                    let status = match c.status {
                        CheckStatus::Ok => "ok",
                        CheckStatus::Mismatch => "MISMATCH",
                        CheckStatus::Skipped => "skipped",
                    };
                    line(&mut out, &format!("[{status}] {}: {}", c.name, c.detail));
                }
            }
        }
        out
    }
}

fn line(out: &mut String, s: &str) {
    out.push_str(s);
    out.push('\n');
}

fn table(out: &mut String, variables: &[String], rows: &[AtomRow], with_upper: bool) {
    let head = variables.join(" ");
    let width = rows.iter().map(|r| r.p.to_string().len()).max().unwrap_or(0).max(1);
    let atom_width = rows.first().map_or(0, |r| r.atom.len()).max(head.len());
    let _ = write!(out, "  {head:<atom_width$}  {:<width$}", "p");
    if with_upper {
        let _ = write!(out, "  p*");
    }
    let trimmed = out.trim_end_matches(' ').len();
    out.truncate(trimmed);
    out.push('\n');
    for r in rows {
        let p = r.p.to_string();
        let _ = write!(out, "  {:<atom_width$}  {p:<width$}", r.atom);
        if let (true, Some(u)) = (with_upper, &r.upper) {
            let _ = write!(out, "  {u}");
        }
        let trimmed = out.trim_end_matches(' ').len();
        out.truncate(trimmed);
        out.push('\n');
    }
}

fn scorecard(out: &mut String, title: &str, rows: &[ScoreRow]) {
    line(out, title);
    for r in rows {
        let mark = if r.satisfied { "ok" } else { "VIOLATED" };
        let what = if r.label == "sum" {
            "sum of weights".to_string()
        } else {
            format!("E({})", r.label)
        };
        line(
            out,
            &format!("  {what}: required {}, actual {} {mark}", r.required.exact, r.actual.exact),
        );
    }
}

fn discrepancies(out: &mut String, items: &[Discrepancy]) {
    if items.is_empty() {
        return;
    }
    line(out, "published vs computed:");
    for d in items {
        line(out, &format!("  {}: published {}; computed {}", d.topic, d.published, d.computed));
        line(out, &format!("    {}", d.note));
    }
}

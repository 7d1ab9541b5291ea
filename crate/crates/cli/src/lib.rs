//! Command-line front end for the `negprob` engine.
//!
//! [`run_text`] parses a problem file and dispatches one [`Command`];
//! the binary is a thin argument parser around it.

pub mod problem;
pub mod published;
pub mod report;

use std::fmt;
use std::str::FromStr;

use negprob::bayes::{self, ExpertJudgment, LikelihoodModel};
use negprob::feasibility::{joint_exists, suppes_zanotti};
use negprob::lp::LpError;
use negprob::negprob::{
    delta_family, minimize_negative_mass, moment_range, scorecard, upper_probability, Budget,
};
use negprob::{from_full_moments, oracle, q, MomentSystem, QuasiDistribution, Rational, VarSet};

use problem::{parse_likelihood_table, parse_problem, ParseOptions, PriorDecl, ProblemFile};
use report::{
    atom_rows, BayesReport, BoundsReport, CheckReport, CheckStatus, MomentRow, Num, OracleCheck,
    OracleReport, Report, ScoreRow, SolveReport, StepRow, SzReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_PROPER_JOINT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ORACLE_MISMATCH: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Solve,
    Bounds,
    Bayes,
    Oracle,
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "check" => Ok(Command::Check),
            "solve" => Ok(Command::Solve),
            "bounds" => Ok(Command::Bounds),
            "bayes" => Ok(Command::Bayes),
            "oracle" => Ok(Command::Oracle),
            other => Err(format!("unknown command `{other}`")),
        }
    }
}

/// Raw option values; each command reads the ones it understands.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub json: bool,
    /// `minimal` or a rational.
    pub budget: Option<String>,
    /// Comma-separated variable names.
    pub target: Option<String>,
    /// Comma-separated expert names.
    pub order: Option<String>,
    /// `quadratic` or `table:<file>`.
    pub likelihood: Option<String>,
    /// Accept decimals such as `0.25` as exact ratios.
    pub decimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

impl Outcome {
    fn input_error(message: impl fmt::Display) -> Outcome {
        Outcome {
            output: format!("error: {message}\n"),
            exit_code: EXIT_INPUT,
        }
    }
}

#[derive(Debug)]
struct InputError(String);

impl<E: fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Run<T> = std::result::Result<T, InputError>;

/// Parses `text` and runs `command` on it.
pub fn run_text(command: Command, text: &str, flags: &Flags) -> Outcome {
    match parse_problem(text, ParseOptions { allow_decimal: flags.decimal }) {
        Ok(p) => run(command, &p, flags),
        Err(e) => Outcome::input_error(e),
    }
}

pub fn run(command: Command, problem: &ProblemFile, flags: &Flags) -> Outcome {
    let result = match command {
        Command::Check => check(problem).map(|(r, exists)| {
            (Report::Check(r), if exists { EXIT_OK } else { EXIT_NO_PROPER_JOINT })
        }),
        Command::Solve => solve(problem).map(|r| (Report::Solve(r), EXIT_OK)),
        Command::Bounds => bounds(problem, flags).map(|r| (Report::Bounds(r), EXIT_OK)),
        Command::Bayes => bayes_command(problem, flags).map(|r| (Report::Bayes(r), EXIT_OK)),
        Command::Oracle => run_oracle(problem, flags).map(|r| {
            let code = if r.mismatches() == 0 { EXIT_OK } else { EXIT_ORACLE_MISMATCH };
            (Report::Oracle(r), code)
        }),
    };
    match result {
        Ok((report, exit_code)) => Outcome {
            output: if flags.json {
                report.to_json()
            } else {
                report.to_text(&problem.variables)
            },
            exit_code,
        },
        Err(InputError(message)) => Outcome::input_error(message),
    }
}

fn check(problem: &ProblemFile) -> Run<(CheckReport, bool)> {
    let system = problem.system()?;
    let verdict = joint_exists(&system)?;
    let headline = match (&verdict.sz_detail, verdict.exists) {
        (Some(sz), false) if sz.lhs_sum < -Rational::one() => {
            format!("no proper joint; SZ sum = {} < -1", sz.lhs_sum)
        }
        (Some(sz), false) => format!(
            "no proper joint; SZ sum = {} > {} = 1 + 2*min",
            sz.lhs_sum, sz.upper_rhs
        ),
        (Some(sz), true) => format!("proper joint exists; SZ sum = {}", sz.lhs_sum),
        (None, false) => "no proper joint".to_string(),
        (None, true) => "proper joint exists".to_string(),
    };
    let closed_form = verdict.sz_detail.as_ref().map(|sz| SzReport {
        sum: Num::new(&sz.lhs_sum),
        lower: Num::new(&-Rational::one()),
        upper: Num::new(&sz.upper_rhs),
    });
    let mut discrepancies = Vec::new();
    if published::is_canonical_instance(&system) {
        discrepancies.push(published::correlation_labels());
    }
    Ok((
        CheckReport {
            headline,
            exists: verdict.exists,
            closed_form,
            witness: verdict.witness.as_ref().map(|w| atom_rows(w, None)),
            discrepancies,
        },
        verdict.exists,
    ))
}

fn solve(problem: &ProblemFile) -> Run<SolveReport> {
    let system = problem.system()?;
    let sol = minimize_negative_mass(&system)?;
    let upper = upper_probability(&sol.distribution);
    let card = scorecard(&system, &sol.distribution)?;
    let mut family_scorecard = None;
    let mut discrepancies = Vec::new();
    if published::is_canonical_instance(&system) {
        discrepancies.push(published::mass(&sol.mass));
    }
    if published::is_printed_assignment(&system) {
        let family = family_on(&system, &Rational::zero())?;
        family_scorecard = Some(scorecard(&system, &family)?.iter().map(ScoreRow::from_core).collect());
        discrepancies.push(published::family());
    }
    Ok(SolveReport {
        headline: format!(
            "minimal negative mass = {}; Σp* = {}",
            sol.mass, upper.total
        ),
        negative_mass: Num::new(&sol.mass),
        l1_norm: Num::new(&sol.l1_norm),
        upper_total: Num::new(&upper.total),
        distribution: atom_rows(&sol.distribution, Some(&upper.weights)),
        scorecard: card.iter().map(ScoreRow::from_core).collect(),
        certificate: sol.certificate,
        family_scorecard,
        discrepancies,
    })
}

/// The published family placed on the system's own variable names.
fn family_on(system: &MomentSystem, delta: &Rational) -> Run<QuasiDistribution> {
    let d = delta_family(delta);
    Ok(QuasiDistribution::new(system.space().clone(), d.weights().to_vec())?)
}

fn parse_budget(flags: &Flags) -> Run<Budget> {
    match flags.budget.as_deref() {
        None | Some("minimal") => Ok(Budget::Minimal),
        Some(text) => {
            let m = Rational::parse_with(text, flags.decimal)
                .map_err(|e| InputError(format!("--budget: {e}")))?;
            if m.is_negative() {
                return Err(InputError(format!("--budget: {m} is negative")));
            }
            Ok(Budget::Mass(m))
        }
    }
}

fn parse_target(system: &MomentSystem, flags: &Flags) -> Run<VarSet> {
    match flags.target.as_deref() {
        None => Ok(system.space().full_set()),
        Some(text) => {
            let names: Vec<&str> = text.split(',').map(str::trim).collect();
            Ok(system.space().subset(&names)?)
        }
    }
}

fn bounds(problem: &ProblemFile, flags: &Flags) -> Run<BoundsReport> {
    let system = problem.system()?;
    let target = parse_target(&system, flags)?;
    let budget = parse_budget(flags)?;
    let interval = moment_range(&system, target, &budget)?;
    let label = format!("E({})", system.space().subset_label(target));
    let mut discrepancies = Vec::new();
    if published::is_canonical_instance(&system)
        && target == system.space().full_set()
        && budget == Budget::Minimal
    {
        discrepancies = published::triple_range(&interval.low, &interval.high);
    }
    Ok(BoundsReport {
        headline: format!("{} <= {label} <= {}", interval.low, interval.high),
        target: label,
        low: Num::new(&interval.low),
        high: Num::new(&interval.high),
        semantic_low: Num::new(&-Rational::one()),
        semantic_high: Num::new(&Rational::one()),
        mass_budget: Num::new(&interval.mass_budget),
        budget_kind: match budget {
            Budget::Minimal => "minimal".into(),
            Budget::Mass(_) => "at most".into(),
        },
        low_witness: atom_rows(&interval.low_witness, None),
        high_witness: atom_rows(&interval.high_witness, None),
        discrepancies,
    })
}

fn likelihood_model(problem: &ProblemFile, flags: &Flags) -> Run<(LikelihoodModel, String)> {
    match flags.likelihood.as_deref() {
        None => {
            let model = problem.likelihood_model()?;
            let name = match model {
                LikelihoodModel::Quadratic => "quadratic".to_string(),
                LikelihoodModel::Table(_) => "table (problem file)".to_string(),
            };
            Ok((model, name))
        }
        Some("quadratic") => Ok((LikelihoodModel::Quadratic, "quadratic".into())),
        Some(spec) => match spec.strip_prefix("table:") {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| InputError(format!("--likelihood: {path}: {e}")))?;
                let model = parse_likelihood_table(&text)
                    .map_err(|e| InputError(format!("--likelihood: {path}: {e}")))?;
                Ok((model, format!("table ({path})")))
            }
            None => Err(InputError(format!(
                "--likelihood: expected `quadratic` or `table:<file>`, got `{spec}`"
            ))),
        },
    }
}

fn ordered_judgments(problem: &ProblemFile, flags: &Flags) -> Run<Vec<ExpertJudgment>> {
    let all = problem.expert_judgments()?;
    let Some(order) = flags.order.as_deref() else {
        return Ok(all);
    };
    let mut out = Vec::new();
    let mut seen: Vec<&str> = Vec::new();
    for name in order.split(',').map(str::trim) {
        if seen.contains(&name) {
            return Err(InputError(format!("--order: expert `{name}` listed twice")));
        }
        seen.push(name);
        let before = out.len();
        out.extend(all.iter().filter(|j| j.expert == name).cloned());
        if out.len() == before {
            return Err(InputError(format!("--order: no judgment from expert `{name}`")));
        }
    }
    Ok(out)
}

fn bayes_command(problem: &ProblemFile, flags: &Flags) -> Run<BayesReport> {
    let space = problem.space()?;
    let prior = problem.prior_distribution()?;
    let judgments = ordered_judgments(problem, flags)?;
    let (model, likelihood) = likelihood_model(problem, flags)?;
    let pooled = bayes::pool(&prior, &judgments, &model)?;

    let steps = judgments
        .iter()
        .zip(&pooled.step_k)
        .map(|(j, k)| StepRow {
            expert: j.expert.clone(),
            pair: space.subset_label(j.pair_set()),
            epsilon: Num::new(&j.epsilon),
            k: Num::new(k),
        })
        .collect();
    let moments: Vec<MomentRow> = pooled
        .moments
        .iter()
        .map(|(s, m)| MomentRow {
            moment: space.subset_label(*s),
            value: Num::new(m),
        })
        .collect();
    let headline = match space.len() {
        3 => format!(
            "posterior after {} judgment(s); E({}) = {}",
            judgments.len(),
            space.subset_label(space.full_set()),
            pooled.moment(space.full_set()).expect("order three is reported")
        ),
        _ => format!("posterior after {} judgment(s)", judgments.len()),
    };

    let mut discrepancies = Vec::new();
    if space.len() == 3 && matches!(problem.prior, None | Some(PriorDecl::Uniform)) {
        discrepancies.push(published::prior());
        if is_published_pooling_example(&judgments) {
            discrepancies.push(published::epsilon_assignment());
        }
    }
    Ok(BayesReport {
        headline,
        likelihood,
        steps,
        k: Num::new(&pooled.k),
        posterior: atom_rows(&pooled.posterior, None),
        moments,
        discrepancies,
    })
}

// Three judgments on three distinct pairs with values {0, -1/2, -1}.
fn is_published_pooling_example(judgments: &[ExpertJudgment]) -> bool {
    if judgments.len() != 3 {
        return false;
    }
    let mut pairs: Vec<_> = judgments.iter().map(|j| j.pair_set()).collect();
    pairs.sort();
    pairs.dedup();
    let mut eps: Vec<Rational> = judgments.iter().map(|j| j.epsilon.clone()).collect();
    eps.sort();
    pairs.len() == 3 && eps == [q(-1, 1), q(-1, 2), Rational::zero()]
}

struct Checks(Vec<OracleCheck>);

impl Checks {
    fn record(&mut self, name: &str, agree: bool, detail: String) {
        self.0.push(OracleCheck {
            name: name.into(),
            status: if agree { CheckStatus::Ok } else { CheckStatus::Mismatch },
            detail,
        });
    }

    fn skip(&mut self, name: &str, detail: String) {
        self.0.push(OracleCheck {
            name: name.into(),
            status: CheckStatus::Skipped,
            detail,
        });
    }

    // Oracle-side failures from size guards are skips; anything else is a
    // real error of the oracle path and counts as a mismatch.
    fn oracle_error(&mut self, name: &str, e: negprob::Error) {
        match e {
            negprob::Error::TooManyVariables { .. }
            | negprob::Error::Lp(LpError::TooManyBases(_))
            | negprob::Error::Lp(LpError::DimensionTooLarge { .. }) => self.skip(name, format!("beyond oracle size: {e}")),
            other => self.record(name, false, format!("oracle failed: {other}")),
        }
    }
}

fn run_oracle(problem: &ProblemFile, flags: &Flags) -> Run<OracleReport> {
    let system = problem.system()?;
    let space = system.space();
    let mut checks = Checks(Vec::new());

    // Feasibility
    let verdict = joint_exists(&system)?;
    match oracle::proper_joint_by_vertices(&system) {
        Ok(v) => checks.record(
            "proper joint: LP vs vertex enumeration",
            v == verdict.exists,
            format!("LP {}, vertices {}", verdict.exists, v),
        ),
        Err(e) => checks.oracle_error("proper joint: LP vs vertex enumeration", e),
    }
    if let Some((xy, yz, xz)) = system.zero_mean_pairwise() {
        let closed = suppes_zanotti(&xy, &yz, &xz)?;
        checks.record(
            "proper joint: LP vs closed-form correlation test",
            closed.exists == verdict.exists,
            format!("LP {}, closed form {}", verdict.exists, closed.exists),
        );
    }
    if let Some(w) = &verdict.witness {
        checks.record(
            "feasibility witness is proper and meets every constraint",
            w.is_proper() && system.is_satisfied_by(w),
            format!("{} atoms", w.weights().len()),
        );
    }

    // Minimal mass
    let sol = minimize_negative_mass(&system)?;
    match oracle::min_mass_by_vertices(&system) {
        Ok((m, vertex)) => checks.record(
            "minimal mass: LP vs split-polyhedron vertices",
            m == sol.mass && system.is_satisfied_by(&vertex),
            format!("LP {}, vertices {}", sol.mass, m),
        ),
        Err(e) => checks.oracle_error("minimal mass: LP vs split-polyhedron vertices", e),
    }
    checks.record(
        "proper joint exists iff minimal mass is zero",
        verdict.exists == sol.mass.is_zero(),
        format!("exists {}, mass {}", verdict.exists, sol.mass),
    );
    checks.record(
        "minimal solution meets every constraint",
        system.is_satisfied_by(&sol.distribution),
        format!("{} constraints", system.constraints().len()),
    );
    let l1 = Rational::one() + &sol.mass * q(2, 1);
    checks.record(
        "l1 norm = 1 + 2 * negative mass",
        sol.l1_norm == l1 && sol.distribution.l1_norm() == l1,
        format!("l1 {}, mass {}", sol.l1_norm, sol.mass),
    );
    let upper = upper_probability(&sol.distribution);
    checks.record(
        "upper measure total - 1 = negative mass",
        &upper.total - Rational::one() == sol.mass,
        format!("total {}", upper.total),
    );
    let moments = sol.distribution.all_moments();
    let parity = "parity expansion reproduces the minimal solution";
    match moments.iter().find(|(_, m)| !m.in_unit_interval()) {
        None => {
            let round_trip = from_full_moments(system.space(), &moments)?;
            checks.record(parity, round_trip == sol.distribution, format!("{} moments", moments.len()));
        }
        Some((s, m)) => checks.skip(
            parity,
            format!("E({}) = {m} lies outside [-1, 1], where the inversion is not defined", space.subset_label(*s)),
        ),
    }

    // Ranges of every unconstrained moment
    let free: Vec<VarSet> = space
        .nonempty_subsets()
        .into_iter()
        .filter(|s| system.target(*s).is_none())
        .collect();
    for target in free {
        let label = format!("range of E({})", space.subset_label(target));
        for budget in [Budget::Minimal, Budget::Mass(&sol.mass + q(1, 2))] {
            let interval = moment_range(&system, target, &budget)?;
            let name = format!("{label} at mass {}: LP vs budget-polytope vertices", interval.mass_budget);
            let witnessed = [(&interval.low_witness, &interval.low), (&interval.high_witness, &interval.high)]
                .iter()
                .all(|(w, v)| {
                    system.is_satisfied_by(w)
                        && w.negative_mass() <= interval.mass_budget
                        && w.moment(target).as_ref() == Ok(*v)
                        && upper_probability(w).total - Rational::one() == w.negative_mass()
                });
            match oracle::range_by_vertices(&system, target, &interval.mass_budget) {
                Ok((lo, hi)) => checks.record(
                    &name,
                    witnessed && lo == interval.low && hi == interval.high,
                    format!("LP [{}, {}], vertices [{lo}, {hi}]", interval.low, interval.high),
                ),
                Err(e) => checks.oracle_error(&name, e),
            }
        }
    }

    // Pooling
    if !problem.judgments.is_empty() {
        let prior = problem.prior_distribution()?;
        let judgments = ordered_judgments(problem, flags)?;
        let (model, _) = likelihood_model(problem, flags)?;
        match bayes::pool(&prior, &judgments, &model) {
            Ok(pooled) => {
                let (direct, total) = oracle::posterior_by_product(&prior, &judgments, &model)?;
                checks.record(
                    "pooling: sequential updates vs one normalized product",
                    direct == pooled.posterior && total == pooled.k,
                    format!("k {}", pooled.k),
                );
                let mut reversed = judgments.clone();
                reversed.reverse();
                let again = bayes::pool(&prior, &reversed, &model)?;
                checks.record(
                    "pooling: reversed order gives the same posterior",
                    again.posterior == pooled.posterior,
                    format!("{} judgment(s)", judgments.len()),
                );
                if prior == bayes::uniform_prior(space) {
                    let odd_zero = pooled
                        .moments
                        .iter()
                        .filter(|(s, _)| s.len() % 2 == 1)
                        .all(|(_, m)| m.is_zero());
                    checks.record(
                        "pooling: odd moments stay at the uniform prior's zero",
                        odd_zero,
                        "pairwise evidence is symmetric under flipping every sign".into(),
                    );
                }
            }
            Err(negprob::Error::ZeroEvidence(expert)) => {
                checks.skip("pooling", format!("evidence from {expert} has zero probability"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    // Published family
    if published::is_printed_assignment(&system) {
        let failing = |delta: &Rational| -> Run<Vec<String>> {
            let d = family_on(&system, delta)?;
            Ok(scorecard(&system, &d)?
                .into_iter()
                .filter(|r| !r.satisfied())
                .map(|r| r.label)
                .collect())
        };
        let at_zero = failing(&Rational::zero())?;
        let at_fix = failing(&q(-1, 16))?;
        let d0 = family_on(&system, &Rational::zero())?;
        checks.record(
            "published family: only E(X) fails at delta = 0, nothing at delta = -1/16",
            at_zero == ["X"] && at_fix.is_empty() && d0.negative_mass() == q(1, 8),
            format!("failing at 0: {at_zero:?}; at -1/16: {at_fix:?}"),
        );
    }

    let report = OracleReport {
        headline: String::new(),
        checks: checks.0,
    };
    let mismatches = report.mismatches();
    let skipped = report.checks.iter().filter(|c| c.status == CheckStatus::Skipped).count();
    let headline = if mismatches == 0 {
        format!("all {} oracle checks agree ({skipped} skipped)", report.checks.len() - skipped)
    } else {
        format!("{mismatches} oracle mismatch(es)")
    };
    Ok(OracleReport { headline, ..report })
}

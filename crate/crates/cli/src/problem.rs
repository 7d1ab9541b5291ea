//! Line-oriented problem files.
//!
//! ```text
//! # three experts, one correlation each
//! var X
//! var Y
//! var Z
//! mean X = 0
//! corr X Y = 0 from A
//! corr X Z = -1/2 from B
//! moment X Y Z = 1/4
//! judgment A X Y eps 0
//! prior uniform
//! likelihood quadratic
//! ```
//!
//! Values are exact rationals (`a/b` or integers). Decimals such as `0.5`
//! are rejected unless [`ParseOptions::allow_decimal`] is set.

use std::fmt;

use negprob::bayes::{ExpertJudgment, LikelihoodModel, LikelihoodTable};
use negprob::rational::ParseRationalError;
use negprob::{MomentSystem, QuasiDistribution, Rational, SampleSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Mean,
    Corr,
    Moment,
}

impl ConstraintKind {
    fn keyword(self) -> &'static str {
        match self {
            ConstraintKind::Mean => "mean",
            ConstraintKind::Corr => "corr",
            ConstraintKind::Moment => "moment",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintDecl {
    pub kind: ConstraintKind,
    pub variables: Vec<String>,
    pub value: Rational,
    pub expert: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JudgmentDecl {
    pub expert: String,
    pub pair: (String, String),
    pub epsilon: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PriorDecl {
    Uniform,
    Weights(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LikelihoodDecl {
    Quadratic,
    Table(Vec<(Rational, Rational, Rational)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub constraints: Vec<ConstraintDecl>,
    pub judgments: Vec<JudgmentDecl>,
    pub prior: Option<PriorDecl>,
    pub likelihood: Option<LikelihoodDecl>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    pub allow_decimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let col = |byte: usize| code[..byte].chars().count() + 1;
    for (i, ch) in code.char_indices() {
        if ch.is_whitespace() || ch == '=' {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &code[s..i],
                    column: col(s),
                });
            }
            if ch == '=' {
                tokens.push(Token {
                    text: "=",
                    column: col(i),
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &code[s..],
            column: col(s),
        });
    }
    tokens
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    end_column: usize,
    options: ParseOptions,
}

impl<'a> LineParser<'a> {
    fn error_at(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(*t)
            }
            None => Err(self.error_at(self.end_column, format!("expected {what}"))),
        }
    }

    fn expect(&mut self, text: &str) -> Result<(), ParseError> {
        let t = self.next(&format!("`{text}`"))?;
        if t.text != text {
            return Err(self.error_at(t.column, format!("expected `{text}`, found `{}`", t.text)));
        }
        Ok(())
    }

    fn rational(&mut self, what: &str) -> Result<(Rational, usize), ParseError> {
        let t = self.next(what)?;
        Rational::parse_with(t.text, self.options.allow_decimal)
            .map(|r| (r, t.column))
            .map_err(|e| {
                let msg = match e {
                    ParseRationalError::DecimalNotAllowed(s) => {
                        format!("decimal `{s}` not accepted; write it as a ratio or pass --decimal")
                    }
                    other => other.to_string(),
                };
                self.error_at(t.column, msg)
            })
    }

    fn unit_value(&mut self, what: &str) -> Result<Rational, ParseError> {
        let (v, column) = self.rational(what)?;
        if !v.in_unit_interval() {
            return Err(self.error_at(column, format!("value {v} is out of range [-1, 1]")));
        }
        Ok(v)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) => Err(self.error_at(t.column, format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

const KEYWORDS: [&str; 7] = ["var", "mean", "corr", "moment", "judgment", "prior", "likelihood"];

pub fn parse_problem(text: &str, options: ParseOptions) -> Result<ProblemFile, ParseError> {
    let mut problem = ProblemFile::default();
    let mut table: Option<Vec<(Rational, Rational, Rational)>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            line: idx + 1,
            tokens,
            pos: 0,
            end_column: raw.split('#').next().unwrap_or("").trim_end().chars().count() + 1,
            options,
        };
        let keyword = p.next("keyword")?;
        let var_ref = |p: &LineParser<'_>, t: Token<'_>, vars: &[String]| -> Result<String, ParseError> {
            if vars.iter().any(|v| v == t.text) {
                Ok(t.text.to_string())
            } else {
                Err(p.error_at(t.column, format!("unknown variable `{}`", t.text)))
            }
        };
        match keyword.text {
            "var" => {
                let mut any = false;
                while let Some(t) = p.peek() {
                    p.pos += 1;
                    if !is_identifier(t.text) || KEYWORDS.contains(&t.text) {
                        return Err(p.error_at(t.column, format!("invalid variable name `{}`", t.text)));
                    }
                    if problem.variables.iter().any(|v| v == t.text) {
                        return Err(p.error_at(t.column, format!("duplicate variable `{}`", t.text)));
                    }
                    if problem.variables.len() == negprob::space::MAX_VARIABLES {
                        return Err(p.error_at(
                            t.column,
                            format!("at most {} variables are supported", negprob::space::MAX_VARIABLES),
                        ));
                    }
                    problem.variables.push(t.text.to_string());
                    any = true;
                }
                if !any {
                    return Err(p.error_at(p.end_column, "expected variable name"));
                }
            }
            "mean" | "corr" | "moment" => {
                let kind = match keyword.text {
                    "mean" => ConstraintKind::Mean,
                    "corr" => ConstraintKind::Corr,
                    _ => ConstraintKind::Moment,
                };
                let mut variables: Vec<String> = Vec::new();
                while let Some(t) = p.peek() {
                    if t.text == "=" {
                        break;
                    }
                    if !is_identifier(t.text) {
                        return Err(p.error_at(t.column, format!("expected `=`, found `{}`", t.text)));
                    }
                    p.pos += 1;
                    let name = var_ref(&p, t, &problem.variables)?;
                    if variables.contains(&name) {
                        return Err(p.error_at(t.column, format!("variable `{name}` repeated")));
                    }
                    variables.push(name);
                }
                let arity_ok = match kind {
                    ConstraintKind::Mean => variables.len() == 1,
                    ConstraintKind::Corr => variables.len() == 2,
                    ConstraintKind::Moment => !variables.is_empty(),
                };
                if !arity_ok {
                    let expected = match kind {
                        ConstraintKind::Mean => "one variable",
                        ConstraintKind::Corr => "two variables",
                        ConstraintKind::Moment => "at least one variable",
                    };
                    return Err(p.error_at(keyword.column, format!("`{}` takes {expected}", keyword.text)));
                }
                p.expect("=")?;
                let value = p.unit_value("value")?;
                let mut expert = None;
                if let Some(t) = p.peek() {
                    if t.text == "from" {
                        p.pos += 1;
                        let e = p.next("expert name")?;
                        expert = Some(e.text.to_string());
                    }
                }
                p.finish()?;
                let mut sorted = variables.clone();
                sorted.sort();
                let duplicate = problem.constraints.iter().any(|c| {
                    let mut other = c.variables.clone();
                    other.sort();
                    other == sorted
                });
                if duplicate {
                    return Err(p.error_at(
                        keyword.column,
                        format!("duplicate constraint on {}", variables.join(" ")),
                    ));
                }
                problem.constraints.push(ConstraintDecl {
                    kind,
                    variables,
                    value,
                    expert,
                });
            }
            "judgment" => {
                let expert = p.next("expert name")?.text.to_string();
                let u = p.next("variable")?;
                let u = var_ref(&p, u, &problem.variables)?;
                let v = p.next("variable")?;
                let v_col = v.column;
                let v = var_ref(&p, v, &problem.variables)?;
                if u == v {
                    return Err(p.error_at(v_col, "a judgment needs two distinct variables"));
                }
                p.expect("eps")?;
                let epsilon = p.unit_value("eps value")?;
                p.finish()?;
                problem.judgments.push(JudgmentDecl {
                    expert,
                    pair: (u, v),
                    epsilon,
                });
            }
            "prior" => {
                if problem.prior.is_some() {
                    return Err(p.error_at(keyword.column, "prior declared twice"));
                }
                let kind = p.next("`uniform` or `weights`")?;
                match kind.text {
                    "uniform" => {
                        p.finish()?;
                        problem.prior = Some(PriorDecl::Uniform);
                    }
                    "weights" => {
                        let mut ws = Vec::new();
                        while p.peek().is_some() {
                            let (w, column) = p.rational("weight")?;
                            if w.is_negative() {
                                return Err(p.error_at(column, "prior weights must be nonnegative"));
                            }
                            ws.push(w);
                        }
                        problem.prior = Some(PriorDecl::Weights(ws));
                    }
                    other => {
                        return Err(p.error_at(kind.column, format!("unknown prior `{other}`")));
                    }
                }
            }
            "likelihood" => {
                let kind = p.next("`quadratic` or `table`")?;
                match kind.text {
                    "quadratic" => {
                        p.finish()?;
                        if table.is_some() || problem.likelihood.is_some() {
                            return Err(p.error_at(kind.column, "likelihood declared twice"));
                        }
                        problem.likelihood = Some(LikelihoodDecl::Quadratic);
                    }
                    "table" => {
                        if problem.likelihood.is_some() {
                            return Err(p.error_at(kind.column, "likelihood declared twice"));
                        }
                        let eps = p.unit_value("eps")?;
                        let mut probs = Vec::with_capacity(2);
                        for what in ["agree likelihood", "disagree likelihood"] {
                            let (v, column) = p.rational(what)?;
                            if v.is_negative() || v > Rational::one() {
                                return Err(p.error_at(column, format!("likelihood {v} is out of range [0, 1]")));
                            }
                            probs.push(v);
                        }
                        p.finish()?;
                        let entries = table.get_or_insert_with(Vec::new);
                        if entries.iter().any(|(e, _, _)| *e == eps) {
                            return Err(p.error_at(kind.column, format!("duplicate table entry for eps {eps}")));
                        }
                        let disagree = probs.pop().expect("two values");
                        let agree = probs.pop().expect("two values");
                        entries.push((eps, agree, disagree));
                    }
                    other => {
                        return Err(p.error_at(kind.column, format!("unknown likelihood `{other}`")));
                    }
                }
            }
            other => {
                return Err(p.error_at(keyword.column, format!("unknown directive `{other}`")));
            }
        }
    }
    if let Some(entries) = table {
        problem.likelihood = Some(LikelihoodDecl::Table(entries));
    }
    if problem.variables.is_empty() {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            message: "no variables declared".into(),
        });
    }
    if let Some(PriorDecl::Weights(ws)) = &problem.prior {
        let expected = 1usize << problem.variables.len();
        if ws.len() != expected {
            return Err(ParseError {
                line: prior_line(text),
                column: 1,
                message: format!("prior needs {expected} weights, got {}", ws.len()),
            });
        }
        let total: Rational = ws.iter().sum();
        if total != 1 {
            return Err(ParseError {
                line: prior_line(text),
                column: 1,
                message: format!("prior weights sum to {total}, not 1"),
            });
        }
    }
    Ok(problem)
}

fn prior_line(text: &str) -> usize {
    text.lines()
        .position(|l| l.trim_start().starts_with("prior"))
        .map_or(1, |i| i + 1)
}

impl ProblemFile {
    pub fn space(&self) -> negprob::Result<SampleSpace> {
        SampleSpace::new(&self.variables)
    }

    pub fn system(&self) -> negprob::Result<MomentSystem> {
        let space = self.space()?;
        let mut system = MomentSystem::new(space.clone());
        for c in &self.constraints {
            let subset = space.subset(&c.variables)?;
            system.add(subset, c.value.clone(), c.expert.clone())?;
        }
        Ok(system)
    }

    pub fn prior_distribution(&self) -> negprob::Result<QuasiDistribution> {
        let space = self.space()?;
        match &self.prior {
            None | Some(PriorDecl::Uniform) => Ok(negprob::bayes::uniform_prior(&space)),
            Some(PriorDecl::Weights(ws)) => QuasiDistribution::new(space, ws.clone()),
        }
    }

    pub fn expert_judgments(&self) -> negprob::Result<Vec<ExpertJudgment>> {
        let space = self.space()?;
        self.judgments
            .iter()
            .map(|j| ExpertJudgment::new(&space, j.expert.clone(), &j.pair.0, &j.pair.1, j.epsilon.clone()))
            .collect()
    }

    pub fn likelihood_model(&self) -> negprob::Result<LikelihoodModel> {
        match &self.likelihood {
            None | Some(LikelihoodDecl::Quadratic) => Ok(LikelihoodModel::Quadratic),
            Some(LikelihoodDecl::Table(entries)) => {
                let mut t = LikelihoodTable::new();
                for (e, a, d) in entries {
                    t.insert(e.clone(), a.clone(), d.clone())?;
                }
                Ok(LikelihoodModel::Table(t))
            }
        }
    }
}

/// Canonical text form; parsing it yields an identical [`ProblemFile`].
impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.variables {
            writeln!(f, "var {v}")?;
        }
        for c in &self.constraints {
            write!(f, "{} {} = {}", c.kind.keyword(), c.variables.join(" "), c.value)?;
            if let Some(e) = &c.expert {
                write!(f, " from {e}")?;
            }
            writeln!(f)?;
        }
        for j in &self.judgments {
            writeln!(f, "judgment {} {} {} eps {}", j.expert, j.pair.0, j.pair.1, j.epsilon)?;
        }
        match &self.prior {
            None => {}
            Some(PriorDecl::Uniform) => writeln!(f, "prior uniform")?,
            Some(PriorDecl::Weights(ws)) => {
                write!(f, "prior weights")?;
                for w in ws {
                    write!(f, " {w}")?;
                }
                writeln!(f)?;
            }
        }
        match &self.likelihood {
            None => {}
            Some(LikelihoodDecl::Quadratic) => writeln!(f, "likelihood quadratic")?,
            Some(LikelihoodDecl::Table(entries)) => {
                for (e, a, d) in entries {
                    writeln!(f, "likelihood table {e} {a} {d}")?;
                }
            }
        }
        Ok(())
    }
}

/// Reads a likelihood table file: one `<eps> <agree> <disagree>` per line.
pub fn parse_likelihood_table(text: &str) -> Result<LikelihoodModel, ParseError> {
    let mut table = LikelihoodTable::new();
    for (idx, raw) in text.lines().enumerate() {
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            line: idx + 1,
            tokens,
            pos: 0,
            end_column: raw.trim_end().chars().count() + 1,
            options: ParseOptions::default(),
        };
        let eps = p.unit_value("eps")?;
        let (agree, ca) = p.rational("agree likelihood")?;
        let (disagree, _) = p.rational("disagree likelihood")?;
        p.finish()?;
        table
            .insert(eps, agree, disagree)
            .map_err(|e| p.error_at(ca, e.to_string()))?;
    }
    Ok(LikelihoodModel::Table(table))
}

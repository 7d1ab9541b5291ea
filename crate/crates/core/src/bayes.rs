//! Sequential Bayesian pooling of pairwise expert judgments.
//!
//! A decision maker starts from a prior over atoms and treats each expert's
//! reported correlation `ε` for a pair `(U, V)` as evidence whose likelihood
//! depends on an atom only through the product `u·v`. The default quadratic
//! model gives
//!
//! ```text
//! P(ε | u·v = -1) = (1 - ε)² / 4
//! P(ε | u·v = +1) = 1 - (1 - ε)² / 4
//! ```
//!
//! Pairwise evidence never moves an odd moment away from a prior that is
//! symmetric under flipping every sign: the likelihood of `ω` and `-ω`
//! coincide, so the posterior keeps that symmetry and `E(XYZ)` stays 0.

use std::collections::BTreeMap;

use crate::distribution::QuasiDistribution;
use crate::error::{Error, Result};
use crate::rational::{q, Rational};
use crate::space::{Atom, SampleSpace, VarSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpertJudgment {
    pub expert: String,
    pub pair: (usize, usize),
    pub epsilon: Rational,
}

impl ExpertJudgment {
    pub fn new(space: &SampleSpace, expert: impl Into<String>, u: &str, v: &str, epsilon: Rational) -> Result<Self> {
        let a = space.index_of(u)?;
        let b = space.index_of(v)?;
        if a == b {
            return Err(Error::DegeneratePair(u.to_string()));
        }
        if !epsilon.in_unit_interval() {
            return Err(Error::OutOfRange {
                what: format!("eps for {u} {v}"),
                value: epsilon,
            });
        }
        Ok(ExpertJudgment {
            expert: expert.into(),
            pair: (a, b),
            epsilon,
        })
    }

    pub fn pair_set(&self) -> VarSet {
        VarSet::from_indices([self.pair.0, self.pair.1])
    }
}

/// Likelihood values per reported `ε`: `(agree, disagree)` where agree means
/// `u·v = +1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LikelihoodTable {
    entries: BTreeMap<Rational, (Rational, Rational)>,
}

impl LikelihoodTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, epsilon: Rational, agree: Rational, disagree: Rational) -> Result<()> {
        if !epsilon.in_unit_interval() {
            return Err(Error::OutOfRange {
                what: "table eps".into(),
                value: epsilon,
            });
        }
        for v in [&agree, &disagree] {
            if v.is_negative() || *v > Rational::one() {
                return Err(Error::LikelihoodOutOfRange(v.clone()));
            }
        }
        self.entries.insert(epsilon, (agree, disagree));
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Rational, &(Rational, Rational))> {
        self.entries.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum LikelihoodModel {
    #[default]
    Quadratic,
    Table(LikelihoodTable),
}

impl LikelihoodModel {
    /// Likelihood of reporting `epsilon` given the sign of `u·v`.
    pub fn value(&self, epsilon: &Rational, agree: bool) -> Result<Rational> {
        if !epsilon.in_unit_interval() {
            return Err(Error::OutOfRange {
                what: "eps".into(),
                value: epsilon.clone(),
            });
        }
        match self {
            LikelihoodModel::Quadratic => {
                let d = Rational::one() - epsilon;
                let off = &d * &d * q(1, 4);
                Ok(if agree { Rational::one() - off } else { off })
            }
            LikelihoodModel::Table(t) => {
                let (a, d) = t
                    .entries
                    .get(epsilon)
                    .ok_or_else(|| Error::MissingTableEntry(epsilon.clone()))?;
                Ok(if agree { a.clone() } else { d.clone() })
            }
        }
    }
}

/// Likelihood of a judgment at one atom.
pub fn likelihood(model: &LikelihoodModel, epsilon: &Rational, pair: (usize, usize), atom: Atom) -> Result<Rational> {
    model.value(epsilon, atom.value(pair.0) == atom.value(pair.1))
}

pub fn uniform_prior(space: &SampleSpace) -> QuasiDistribution {
    QuasiDistribution::uniform(space.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosteriorReport {
    pub posterior: QuasiDistribution,
    /// Total evidence `Σ prior·∏likelihood`; the product of the per-step values.
    pub k: Rational,
    pub step_k: Vec<Rational>,
    /// Every moment of order one to three, by subset.
    pub moments: Vec<(VarSet, Rational)>,
}

impl PosteriorReport {
    fn new(posterior: QuasiDistribution, step_k: Vec<Rational>) -> Self {
        let k = step_k.iter().cloned().product();
        let moments = posterior
            .space()
            .nonempty_subsets()
            .into_iter()
            .filter(|s| s.len() <= 3)
            .map(|s| {
                let m = posterior.moment(s).expect("own subset");
                (s, m)
            })
            .collect();
        PosteriorReport {
            posterior,
            k,
            step_k,
            moments,
        }
    }

    pub fn moment(&self, subset: VarSet) -> Option<&Rational> {
        self.moments.iter().find(|(s, _)| *s == subset).map(|(_, m)| m)
    }
}

fn check_proper(prior: &QuasiDistribution) -> Result<()> {
    match prior.weights().iter().position(Rational::is_negative) {
        Some(i) => Err(Error::ImproperPrior(i)),
        None => Ok(()),
    }
}

fn check_pair(space: &SampleSpace, j: &ExpertJudgment) -> Result<()> {
    for v in [j.pair.0, j.pair.1] {
        if v >= space.len() {
            return Err(Error::UnknownVariable(format!("#{v}")));
        }
    }
    if j.pair.0 == j.pair.1 {
        return Err(Error::DegeneratePair(space.variables()[j.pair.0].clone()));
    }
    Ok(())
}

fn step(prior: &QuasiDistribution, judgment: &ExpertJudgment, model: &LikelihoodModel) -> Result<(QuasiDistribution, Rational)> {
    check_pair(prior.space(), judgment)?;
    let unnormalized = prior
        .iter()
        .map(|(atom, w)| Ok(likelihood(model, &judgment.epsilon, judgment.pair, atom)? * w))
        .collect::<Result<Vec<Rational>>>()?;
    let k: Rational = unnormalized.iter().sum();
    if k.is_zero() {
        return Err(Error::ZeroEvidence(judgment.expert.clone()));
    }
    let inv = k.recip();
    let weights = unnormalized.into_iter().map(|w| w * &inv).collect();
    Ok((QuasiDistribution::new(prior.space().clone(), weights)?, k))
}

/// One Bayes step: `posterior(ω) = L(ω)·prior(ω) / k`.
pub fn update(prior: &QuasiDistribution, judgment: &ExpertJudgment, model: &LikelihoodModel) -> Result<PosteriorReport> {
    check_proper(prior)?;
    let (posterior, k) = step(prior, judgment, model)?;
    Ok(PosteriorReport::new(posterior, vec![k]))
}

/// Applies [`update`] for each judgment in order.
pub fn pool(prior: &QuasiDistribution, judgments: &[ExpertJudgment], model: &LikelihoodModel) -> Result<PosteriorReport> {
    check_proper(prior)?;
    let mut current = prior.clone();
    let mut ks = Vec::with_capacity(judgments.len());
    for j in judgments {
        let (next, k) = step(&current, j, model)?;
        current = next;
        ks.push(k);
    }
    Ok(PosteriorReport::new(current, ks))
}

//! Brute-force cross-checks that avoid the simplex entirely.
//!
//! Each function recomputes a quantity the solvers produce, using basis
//! enumeration ([`crate::lp::enumerate_vertices`], [`crate::lp::split_vertices`])
//! or direct products, so agreement is a meaningful certificate.

use crate::bayes::{likelihood, ExpertJudgment, LikelihoodModel};
use crate::distribution::QuasiDistribution;
use crate::error::{Error, Result};
use crate::lp::{enumerate_vertices, split_vertices, Bounds, LinearConstraint, Polytope, Relation};
use crate::rational::Rational;
use crate::space::VarSet;
use crate::system::MomentSystem;

/// Largest space the budget-polytope oracles accept (`2^3 = 8` coordinates).
pub const MAX_ORACLE_VARIABLES: usize = 3;

fn too_large(system: &MomentSystem) -> Result<()> {
    if system.space().len() > MAX_ORACLE_VARIABLES {
        return Err(Error::TooManyVariables {
            got: system.space().len(),
            max: MAX_ORACLE_VARIABLES,
        });
    }
    Ok(())
}

/// Minimal negative mass as the minimum over all vertices of the split
/// polyhedron. Returns the mass and one attaining vertex.
pub fn min_mass_by_vertices(system: &MomentSystem) -> Result<(Rational, QuasiDistribution)> {
    let (rows, rhs) = system.affine_rows();
    let vertices = split_vertices(&rows, &rhs)?;
    let best = vertices
        .into_iter()
        .map(|w| {
            let mass: Rational = w.iter().map(Rational::negative_part).sum();
            (mass, w)
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .ok_or(Error::AffinelyInconsistent)?;
    let dist = QuasiDistribution::new(system.space().clone(), best.1)?;
    Ok((best.0, dist))
}

fn weight_polytope(system: &MomentSystem) -> Polytope {
    let n = system.space().atom_count();
    let (rows, rhs) = system.affine_rows();
    let mut p = Polytope::new(n);
    for (row, b) in rows.into_iter().zip(rhs) {
        p.constraints.push(LinearConstraint::new(row, Relation::Eq, b));
    }
    p
}

/// Vertices of `{w : system holds, negative mass of w <= budget}`.
///
/// The mass bound is written as `-Σ_{i∈S} w_i <= budget` for every nonempty
/// set `S` of atoms, which is exact because the negative mass is the largest
/// of those sums.
pub fn budget_vertices(system: &MomentSystem, budget: &Rational) -> Result<Vec<QuasiDistribution>> {
    too_large(system)?;
    let n = system.space().atom_count();
    let mut p = weight_polytope(system);
    for mask in 1u32..(1 << n) {
        let row = (0..n)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    -Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        p.constraints
            .push(LinearConstraint::new(row, Relation::Le, budget.clone()));
    }
    enumerate_vertices(&p)?
        .into_iter()
        .map(|w| QuasiDistribution::new(system.space().clone(), w))
        .collect()
}

/// Extreme values of `E(target)` over [`budget_vertices`].
pub fn range_by_vertices(system: &MomentSystem, target: VarSet, budget: &Rational) -> Result<(Rational, Rational)> {
    let vertices = budget_vertices(system, budget)?;
    let values = vertices
        .iter()
        .map(|d| d.moment(target))
        .collect::<Result<Vec<_>>>()?;
    let low = values.iter().min().cloned().ok_or(Error::BudgetBelowMinimal {
        budget: Box::new(budget.clone()),
        minimal: Box::new(Rational::zero()),
    })?;
    let high = values.iter().max().cloned().expect("nonempty");
    Ok((low, high))
}

/// Whether a proper joint exists, by listing the vertices of
/// `{w >= 0 : system holds}`.
pub fn proper_joint_by_vertices(system: &MomentSystem) -> Result<bool> {
    too_large(system)?;
    let mut p = weight_polytope(system);
    p.bounds = vec![Bounds::nonneg(); system.space().atom_count()];
    Ok(!enumerate_vertices(&p)?.is_empty())
}

/// Pooled posterior as one normalized product `prior·∏L / Σ(prior·∏L)`.
pub fn posterior_by_product(
    prior: &QuasiDistribution,
    judgments: &[ExpertJudgment],
    model: &LikelihoodModel,
) -> Result<(QuasiDistribution, Rational)> {
    let mut unnormalized = Vec::with_capacity(prior.weights().len());
    for (atom, w) in prior.iter() {
        let mut v = w.clone();
        for j in judgments {
            v *= &likelihood(model, &j.epsilon, j.pair, atom)?;
        }
        unnormalized.push(v);
    }
    let total: Rational = unnormalized.iter().sum();
    if total.is_zero() {
        return Err(Error::ZeroEvidence("product".into()));
    }
    let weights = unnormalized.iter().map(|v| v / &total).collect();
    Ok((QuasiDistribution::new(prior.space().clone(), weights)?, total))
}

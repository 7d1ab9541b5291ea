//! Minimal-negative-mass signed distributions.
//!
//! A moment system that admits no proper joint distribution still admits
//! signed measures that reproduce every constrained moment. Among those, the
//! ones with the least total negative weight are the closest to a proper
//! joint; this module finds them, bounds unconstrained moments over them, and
//! clamps them to an upper probability measure.
//!
//! Everything is solved in the split form `w = p⁺ − p⁻` with `p⁺, p⁻ ≥ 0`.

use std::thread;

use crate::distribution::QuasiDistribution;
use crate::error::{Error, Result};
use crate::lp::{self, Bounds, LpProblem, LpSolution, Optimum, Relation, Sense};
use crate::rational::{q, Rational};
use crate::space::{SampleSpace, VarSet};
use crate::system::MomentSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalSolution {
    pub distribution: QuasiDistribution,
    pub mass: Rational,
    pub l1_norm: Rational,
    /// Basic columns of the optimal simplex basis.
    pub certificate: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Budget {
    /// The minimal negative mass of the system itself.
    Minimal,
    Mass(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentInterval {
    pub target: VarSet,
    pub low: Rational,
    pub high: Rational,
    pub mass_budget: Rational,
    pub low_witness: QuasiDistribution,
    pub high_witness: QuasiDistribution,
}

/// Nonnegative clamp of a signed distribution. Its total exceeds one by
/// exactly the negative mass that was removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperMeasure {
    pub space: SampleSpace,
    pub weights: Vec<Rational>,
    pub total: Rational,
}

// Columns 0..N are p⁺, N..2N are p⁻.
fn split_problem(system: &MomentSystem, sense: Sense) -> LpProblem {
    let space = system.space();
    let n = space.atom_count();
    let mut problem = LpProblem::new(sense);
    for atom in space.atoms() {
        problem.add_variable(format!("p+[{atom}]"), Rational::zero(), Bounds::nonneg());
    }
    for atom in space.atoms() {
        problem.add_variable(format!("p-[{atom}]"), Rational::zero(), Bounds::nonneg());
    }
    let (rows, rhs) = system.affine_rows();
    for (row, b) in rows.iter().zip(rhs) {
        let mut terms = Vec::with_capacity(2 * n);
        for (i, a) in row.iter().enumerate() {
            terms.push((i, a.clone()));
            terms.push((n + i, -a));
        }
        problem.add_constraint(&terms, Relation::Eq, b);
    }
    problem
}

fn signed_weights(point: &[Rational]) -> Vec<Rational> {
    let n = point.len() / 2;
    (0..n).map(|i| &point[i] - &point[n + i]).collect()
}

/// Signed distribution of least negative mass reproducing every constraint.
///
/// The optimum is generally not unique; the simplex returns a deterministic
/// basic solution.
pub fn minimize_negative_mass(system: &MomentSystem) -> Result<MinimalSolution> {
    let mut problem = split_problem(system, Sense::Minimize);
    for c in problem.objective.iter_mut() {
        *c = Rational::one();
    }
    let opt = match lp::solve(&problem)? {
        LpSolution::Optimal(o) => o,
        LpSolution::Infeasible => return Err(Error::AffinelyInconsistent),
        LpSolution::Unbounded => unreachable!("L1 objective is bounded below"),
    };
    let distribution = QuasiDistribution::new(system.space().clone(), signed_weights(&opt.point))?;
    let l1_norm = distribution.l1_norm();
    debug_assert_eq!(l1_norm, opt.value, "split optimum must be complementary");
    let mass = distribution.negative_mass();
    Ok(MinimalSolution {
        distribution,
        mass,
        l1_norm,
        certificate: opt.basis,
    })
}

/// Exact range of `E(target)` over signed distributions that satisfy the
/// system with negative mass at most the budget.
///
/// With [`Budget::Minimal`] the optimization runs over the face where the
/// negative part equals the system's minimal mass.
pub fn moment_range(system: &MomentSystem, target: VarSet, budget: &Budget) -> Result<MomentInterval> {
    let space = system.space();
    if target.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !space.contains_set(target) {
        return Err(Error::UnknownVariable(format!("mask {:#b}", target.mask())));
    }
    if system.target(target).is_some() {
        return Err(Error::TargetConstrained(format!(
            "E({})",
            space.subset_label(target)
        )));
    }
    let minimal = minimize_negative_mass(system)?.mass;
    let (mass_budget, relation) = match budget {
        Budget::Minimal => (minimal, Relation::Eq),
        Budget::Mass(m) => {
            if *m < minimal {
                return Err(Error::BudgetBelowMinimal {
                    budget: Box::new(m.clone()),
                    minimal: Box::new(minimal),
                });
            }
            (m.clone(), Relation::Le)
        }
    };

    let n = space.atom_count();
    let base = {
        let mut p = split_problem(system, Sense::Minimize);
        let terms: Vec<(usize, Rational)> = (n..2 * n).map(|j| (j, Rational::one())).collect();
        p.add_constraint(&terms, relation, mass_budget.clone());
        for (i, atom) in space.atoms().enumerate() {
            let chi = Rational::from_integer(atom.character(target) as i64);
            p.objective[n + i] = -&chi;
            p.objective[i] = chi;
        }
        p
    };
    let mut upper = base.clone();
    upper.sense = Sense::Maximize;

    let (low, high) = thread::scope(|s| {
        let lo = s.spawn(|| lp::solve(&base));
        let hi = lp::solve(&upper);
        (lo.join().expect("range solver thread panicked"), hi)
    });
    let endpoint = |sol: LpSolution| -> Result<(Rational, QuasiDistribution)> {
        match sol {
            LpSolution::Optimal(Optimum { value, point, .. }) => {
                let w = QuasiDistribution::new(space.clone(), signed_weights(&point))?;
                Ok((value, w))
            }
            LpSolution::Infeasible => Err(Error::AffinelyInconsistent),
            LpSolution::Unbounded => Err(Error::UnboundedRange),
        }
    };
    let (low, low_witness) = endpoint(low?)?;
    let (high, high_witness) = endpoint(high?)?;
    Ok(MomentInterval {
        target,
        low,
        high,
        mass_budget,
        low_witness,
        high_witness,
    })
}

/// Clamps negative atoms to zero.
pub fn upper_probability(dist: &QuasiDistribution) -> UpperMeasure {
    let weights: Vec<Rational> = dist.weights().iter().map(Rational::positive_part).collect();
    let total = weights.iter().sum();
    UpperMeasure {
        space: dist.space().clone(),
        weights,
        total,
    }
}

/// The three-variable instance `E(X)=E(Y)=E(Z)=0`, `E(XY)=0`,
/// `E(XZ)=-1/2`, `E(YZ)=-1`.
pub fn canonical_system() -> MomentSystem {
    let mut sys = MomentSystem::new(SampleSpace::new(&["X", "Y", "Z"]).expect("valid names"));
    for v in ["X", "Y", "Z"] {
        sys.constrain(&[v], Rational::zero()).expect("valid");
    }
    sys.constrain(&["X", "Y"], Rational::zero()).expect("valid");
    sys.constrain(&["X", "Z"], q(-1, 2)).expect("valid");
    sys.constrain(&["Y", "Z"], q(-1, 1)).expect("valid");
    sys
}

/// The published one-parameter family of signed solutions over `X, Y, Z`:
///
/// ```text
/// p(+++) = -p(-++) = -1/8 - δ
/// p(+-+) =  p(-+-) =  3/16
/// p(++-) =  p(--+) =  5/16
/// p(+--) = -p(---) = -δ
/// ```
///
/// It sums to one and meets `E(Y) = E(Z) = 0` and the three pairwise values
/// of [`canonical_system`], with `E(XYZ) = -1/4 - 4δ`. It does not meet
/// `E(X) = 0`: `E(X) = -1/4 - 4δ` as well, which vanishes only at
/// `δ = -1/16`. Kept as a regression fixture for that reason.
pub fn delta_family(delta: &Rational) -> QuasiDistribution {
    let eighth = q(1, 8);
    let weights = vec![
        -&eighth - delta,
        q(5, 16),
        q(3, 16),
        -delta,
        &eighth + delta,
        q(3, 16),
        q(5, 16),
        delta.clone(),
    ];
    QuasiDistribution::new(SampleSpace::new(&["X", "Y", "Z"]).expect("valid names"), weights)
        .expect("family sums to one")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScorecardRow {
    /// `sum`, or the moment label such as `XZ`.
    pub label: String,
    pub required: Rational,
    pub actual: Rational,
}

impl ScorecardRow {
    pub fn satisfied(&self) -> bool {
        self.required == self.actual
    }
}

/// Checks a distribution against normalization and every constraint of a
/// system, row by row.
pub fn scorecard(system: &MomentSystem, dist: &QuasiDistribution) -> Result<Vec<ScorecardRow>> {
    if dist.space() != system.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut rows = vec![ScorecardRow {
        label: "sum".into(),
        required: Rational::one(),
        actual: dist.weights().iter().sum(),
    }];
    for c in system.constraints() {
        rows.push(ScorecardRow {
            label: system.space().subset_label(c.subset),
            required: c.target.clone(),
            actual: dist.moment(c.subset)?,
        });
    }
    Ok(rows)
}

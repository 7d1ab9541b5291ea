//! Existence of a proper joint distribution for a moment system.

use crate::distribution::QuasiDistribution;
use crate::error::{Error, Result};
use crate::lp::{self, Bounds, LpProblem, LpSolution, Relation, Sense};
use crate::rational::Rational;
use crate::system::MomentSystem;

/// Both sides of the three-variable correlation test
/// `-1 <= E(XY)+E(YZ)+E(XZ) <= 1 + 2·min(E(XY), E(YZ), E(XZ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SzDetail {
    pub lhs_sum: Rational,
    pub upper_rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub exists: bool,
    /// Nonnegative distribution meeting every constraint, when one exists and
    /// the verdict came from the LP.
    pub witness: Option<QuasiDistribution>,
    pub sz_detail: Option<SzDetail>,
}

/// Closed-form existence test for three zero-mean ±1 variables.
pub fn suppes_zanotti(e_xy: &Rational, e_yz: &Rational, e_xz: &Rational) -> Result<FeasibilityVerdict> {
    for (name, v) in [("E(XY)", e_xy), ("E(YZ)", e_yz), ("E(XZ)", e_xz)] {
        if !v.in_unit_interval() {
            return Err(Error::OutOfRange {
                what: name.into(),
                value: v.clone(),
            });
        }
    }
    let lhs_sum = e_xy + e_yz + e_xz;
    let min = e_xy.clone().min(e_yz.clone()).min(e_xz.clone());
    let upper_rhs = Rational::one() + Rational::from_integer(2) * min;
    let exists = lhs_sum >= -Rational::one() && lhs_sum <= upper_rhs;
    Ok(FeasibilityVerdict {
        exists,
        witness: None,
        sz_detail: Some(SzDetail { lhs_sum, upper_rhs }),
    })
}

/// LP phase-1 test: is `{weights >= 0, Σ = 1, every constraint}` nonempty?
///
/// Unconstrained moments are left free. The closed-form detail is attached
/// when the system is the zero-mean three-variable pairwise case.
pub fn joint_exists(system: &MomentSystem) -> Result<FeasibilityVerdict> {
    let space = system.space();
    let mut problem = LpProblem::new(Sense::Minimize);
    for atom in space.atoms() {
        problem.add_variable(format!("p[{atom}]"), Rational::zero(), Bounds::nonneg());
    }
    let (rows, rhs) = system.affine_rows();
    for (row, b) in rows.into_iter().zip(rhs) {
        let terms: Vec<(usize, Rational)> = row.into_iter().enumerate().collect();
        problem.add_constraint(&terms, Relation::Eq, b);
    }
    let sz_detail = match system.zero_mean_pairwise() {
        Some((xy, yz, xz)) => suppes_zanotti(&xy, &yz, &xz)?.sz_detail,
        None => None,
    };
    match lp::solve(&problem)? {
        LpSolution::Optimal(opt) => {
            let witness = QuasiDistribution::new(space.clone(), opt.point)?;
            Ok(FeasibilityVerdict {
                exists: true,
                witness: Some(witness),
                sz_detail,
            })
        }
        LpSolution::Infeasible => Ok(FeasibilityVerdict {
            exists: false,
            witness: None,
            sz_detail,
        }),
        LpSolution::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

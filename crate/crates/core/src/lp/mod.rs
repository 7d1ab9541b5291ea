//! Exact rational linear programming.
//!
//! [`solve`] runs a dense two-phase simplex with Bland's rule, so termination
//! is guaranteed and every status decision is made without tolerances.
//! [`enumerate_vertices`] and [`split_vertices`] list polytope vertices by
//! basis enumeration; they are slow but share no code path with the simplex
//! and serve as its oracle.

mod linalg;
mod simplex;
mod vertices;

use crate::rational::Rational;

pub use simplex::solve;
pub use vertices::{enumerate_vertices, split_vertices, MAX_VERTEX_DIMENSION};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("problem has no variables")]
    NoVariables,
    #[error("{what} has {got} entries, expected {expected}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("vertex enumeration is limited to dimension {max}, got {got}")]
    DimensionTooLarge { got: usize, max: usize },
    #[error("vertex enumeration would visit {0} candidate bases")]
    TooManyBases(u128),
    #[error("constraint region is unbounded")]
    UnboundedRegion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bounds {
    pub fn free() -> Self {
        Bounds::default()
    }

    pub fn nonneg() -> Self {
        Bounds {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        Bounds {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

/// `Σ coefficients·x  relation  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        LinearConstraint {
            coefficients,
            relation,
            rhs,
        }
    }

    pub fn lhs(&self, point: &[Rational]) -> Rational {
        linalg::dot(&self.coefficients, point)
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub variables: Vec<String>,
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<LinearConstraint>,
    pub bounds: Vec<Bounds>,
}

impl LpProblem {
    pub fn new(sense: Sense) -> Self {
        LpProblem {
            variables: Vec::new(),
            sense,
            objective: Vec::new(),
            constraints: Vec::new(),
            bounds: Vec::new(),
        }
    }

    /// Adds a variable and returns its column. Existing constraints are
    /// padded with a zero coefficient.
    pub fn add_variable(&mut self, name: impl Into<String>, cost: Rational, bounds: Bounds) -> usize {
        self.variables.push(name.into());
        self.objective.push(cost);
        self.bounds.push(bounds);
        for c in &mut self.constraints {
            c.coefficients.push(Rational::zero());
        }
        self.variables.len() - 1
    }

    /// Adds a constraint from sparse `(column, coefficient)` terms.
    pub fn add_constraint(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) {
        let mut coefficients = vec![Rational::zero(); self.variables.len()];
        for (j, c) in terms {
            coefficients[*j] += c;
        }
        self.constraints
            .push(LinearConstraint::new(coefficients, relation, rhs));
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.variables.len();
        if n == 0 {
            return Err(LpError::NoVariables);
        }
        let check = |what: String, got: usize| {
            if got == n {
                Ok(())
            } else {
                Err(LpError::DimensionMismatch {
                    what,
                    expected: n,
                    got,
                })
            }
        };
        check("objective".into(), self.objective.len())?;
        check("bounds".into(), self.bounds.len())?;
        for (i, c) in self.constraints.iter().enumerate() {
            check(format!("constraint {i}"), c.coefficients.len())?;
        }
        Ok(())
    }

    /// Exact feasibility check of a point against every constraint and bound.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        point.len() == self.variables.len()
            && self.constraints.iter().all(|c| c.is_satisfied(point))
            && self.bounds.iter().zip(point).all(|(b, x)| {
                b.lower.as_ref().is_none_or(|l| x >= l) && b.upper.as_ref().is_none_or(|u| x <= u)
            })
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        linalg::dot(&self.objective, point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rational,
    pub point: Vec<Rational>,
    /// Names of the basic columns at the optimal vertex (structural columns
    /// by name, `name+`/`name-` for split free variables, `slack#i` for the
    /// slack of constraint `i`, `upper#name` for upper-bound rows).
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpSolution {
    Optimal(Optimum),
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal(_) => LpStatus::Optimal,
            LpSolution::Infeasible => LpStatus::Infeasible,
            LpSolution::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn optimum(&self) -> Option<&Optimum> {
        match self {
            LpSolution::Optimal(o) => Some(o),
            _ => None,
        }
    }

    pub fn into_optimum(self) -> Option<Optimum> {
        match self {
            LpSolution::Optimal(o) => Some(o),
            _ => None,
        }
    }
}

/// A region `{x : constraints hold, bounds hold}` in `dimension` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    pub dimension: usize,
    pub constraints: Vec<LinearConstraint>,
    pub bounds: Vec<Bounds>,
}

impl Polytope {
    pub fn new(dimension: usize) -> Self {
        Polytope {
            dimension,
            constraints: Vec::new(),
            bounds: vec![Bounds::free(); dimension],
        }
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.dimension
            && self.constraints.iter().all(|c| c.is_satisfied(point))
            && self.bounds.iter().zip(point).all(|(b, x)| {
                b.lower.as_ref().is_none_or(|l| x >= l) && b.upper.as_ref().is_none_or(|u| x <= u)
            })
    }
}

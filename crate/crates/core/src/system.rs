use crate::distribution::QuasiDistribution;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::space::{SampleSpace, VarSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentConstraint {
    pub subset: VarSet,
    pub target: Rational,
    /// Expert (or other source) the value came from, if any.
    pub source: Option<String>,
}

/// A partial moment specification `E(∏ S) = value` over a sample space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentSystem {
    space: SampleSpace,
    constraints: Vec<MomentConstraint>,
}

impl MomentSystem {
    pub fn new(space: SampleSpace) -> Self {
        MomentSystem {
            space,
            constraints: Vec::new(),
        }
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn constraints(&self) -> &[MomentConstraint] {
        &self.constraints
    }

    pub fn add(
        &mut self,
        subset: VarSet,
        target: Rational,
        source: Option<String>,
    ) -> Result<&mut Self> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !self.space.contains_set(subset) {
            return Err(Error::UnknownVariable(format!("mask {:#b}", subset.mask())));
        }
        let label = self.space.subset_label(subset);
        if !target.in_unit_interval() {
            return Err(Error::OutOfRange {
                what: format!("E({label})"),
                value: target,
            });
        }
        if self.target(subset).is_some() {
            return Err(Error::DuplicateConstraint(format!("E({label})")));
        }
        self.constraints.push(MomentConstraint {
            subset,
            target,
            source,
        });
        Ok(self)
    }

    /// Adds a constraint by variable names.
    pub fn constrain<S: AsRef<str>>(&mut self, names: &[S], target: Rational) -> Result<&mut Self> {
        let subset = self.space.subset(names)?;
        self.add(subset, target, None)
    }

    pub fn target(&self, subset: VarSet) -> Option<&Rational> {
        self.constraints
            .iter()
            .find(|c| c.subset == subset)
            .map(|c| &c.target)
    }

    /// Whether `dist` reproduces every constrained moment exactly.
    pub fn is_satisfied_by(&self, dist: &QuasiDistribution) -> bool {
        dist.space() == &self.space
            && self.constraints.iter().all(|c| {
                dist.moment(c.subset)
                    .map(|m| m == c.target)
                    .unwrap_or(false)
            })
    }

    /// Affine rows over atom weights: normalization first, then one row of
    /// parity characters per constraint, in insertion order.
    pub fn affine_rows(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut rows = vec![vec![Rational::one(); self.space.atom_count()]];
        let mut rhs = vec![Rational::one()];
        for c in &self.constraints {
            rows.push(
                self.space
                    .atoms()
                    .map(|a| Rational::from_integer(a.character(c.subset) as i64))
                    .collect(),
            );
            rhs.push(c.target.clone());
        }
        (rows, rhs)
    }

    /// Means zero and exactly the three pairwise correlations constrained
    /// over a three-variable space. Returns `(E(XY), E(YZ), E(XZ))`.
    pub fn zero_mean_pairwise(&self) -> Option<(Rational, Rational, Rational)> {
        if self.space.len() != 3 || self.constraints.len() != 6 {
            return None;
        }
        for v in 0..3 {
            if !self.target(VarSet::from_indices([v]))?.is_zero() {
                return None;
            }
        }
        let pair = |a, b| self.target(VarSet::from_indices([a, b])).cloned();
        Some((pair(0, 1)?, pair(1, 2)?, pair(0, 2)?))
    }
}

//! Signed distributions over the atoms of a sample space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::space::{Atom, SampleSpace, VarSet};

/// Exact signed measure over atoms, normalized to total weight 1.
///
/// Weights are stored in the canonical atom order of the space. Individual
/// weights may be negative; event measures are sums of atom weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiDistribution {
    space: SampleSpace,
    weights: Vec<Rational>,
}

impl QuasiDistribution {
    pub fn new(space: SampleSpace, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != space.atom_count() {
            return Err(Error::WeightCount {
                expected: space.atom_count(),
                got: weights.len(),
            });
        }
        let total: Rational = weights.iter().sum();
        if total != 1 {
            return Err(Error::NotNormalized(total));
        }
        Ok(QuasiDistribution { space, weights })
    }

    pub fn uniform(space: SampleSpace) -> Self {
        let w = Rational::pow2_recip(space.len() as u32);
        let weights = vec![w; space.atom_count()];
        QuasiDistribution { space, weights }
    }

    /// Unit mass on a single atom.
    pub fn point_mass(space: SampleSpace, atom: Atom) -> Self {
        let mut weights = vec![Rational::zero(); space.atom_count()];
        weights[atom.index()] = Rational::one();
        QuasiDistribution { space, weights }
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, atom: Atom) -> &Rational {
        &self.weights[atom.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, &Rational)> + '_ {
        self.space.atoms().zip(self.weights.iter())
    }

    pub fn is_proper(&self) -> bool {
        self.weights.iter().all(|w| !w.is_negative())
    }

    /// `E(∏_{v∈S} v)` by direct summation over atoms.
    pub fn moment(&self, subset: VarSet) -> Result<Rational> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !self.space.contains_set(subset) {
            let bad = subset
                .indices()
                .find(|&i| i >= self.space.len())
                .unwrap_or_default();
            return Err(Error::UnknownVariable(format!("#{bad}")));
        }
        let mut acc = Rational::zero();
        for (atom, w) in self.iter() {
            if atom.character(subset) == 1 {
                acc += w;
            } else {
                acc -= w;
            }
        }
        Ok(acc)
    }

    pub fn moment_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Rational> {
        self.moment(self.space.subset(names)?)
    }

    /// Measure of the event `{ω : pred(ω)}`.
    pub fn event_probability<F: Fn(Atom) -> bool>(&self, pred: F) -> Rational {
        self.iter().filter(|(a, _)| pred(*a)).map(|(_, w)| w).sum()
    }

    /// Total weight on negative atoms, as a nonnegative magnitude.
    pub fn negative_mass(&self) -> Rational {
        self.weights.iter().map(Rational::negative_part).sum()
    }

    pub fn l1_norm(&self) -> Rational {
        self.weights.iter().map(Rational::abs).sum()
    }

    /// Every nonempty moment of the distribution, keyed by subset.
    pub fn all_moments(&self) -> BTreeMap<VarSet, Rational> {
        self.space
            .nonempty_subsets()
            .into_iter()
            .map(|s| {
                let m = self.moment(s).expect("subset from own space");
                (s, m)
            })
            .collect()
    }
}

/// The unique signed measure with the given moments, via the parity expansion
/// `p(ω) = 2^{-n} [1 + Σ_S m_S χ_S(ω)]`.
///
/// Every nonempty subset must be present and lie in `[-1, 1]`.
pub fn from_full_moments(
    space: &SampleSpace,
    moments: &BTreeMap<VarSet, Rational>,
) -> Result<QuasiDistribution> {
    let n = space.len();
    let size = space.atom_count();
    // coefficient array indexed by subset mask
    let mut coeffs = vec![Rational::zero(); size];
    coeffs[0] = Rational::one();
    for s in space.nonempty_subsets() {
        let value = moments
            .get(&s)
            .ok_or_else(|| Error::MissingMoment(space.subset_label(s)))?;
        if !value.in_unit_interval() {
            return Err(Error::OutOfRange {
                what: format!("E({})", space.subset_label(s)),
                value: value.clone(),
            });
        }
        coeffs[s.mask() as usize] = value.clone();
    }
    for key in moments.keys() {
        if key.is_empty() || !space.contains_set(*key) {
            return Err(Error::UnknownVariable(format!("mask {:#b}", key.mask())));
        }
    }

    // Walsh-Hadamard butterfly: afterwards coeffs[M] = Σ_S m_S (-1)^{|S ∩ M|},
    // where M is the set of variables at -1.
    let mut h = 1;
    while h < size {
        for block in (0..size).step_by(2 * h) {
            for j in block..block + h {
                let a = coeffs[j].clone();
                let b = coeffs[j + h].clone();
                coeffs[j] = &a + &b;
                coeffs[j + h] = a - b;
            }
        }
        h <<= 1;
    }

    let scale = Rational::pow2_recip(n as u32);
    let weights = space
        .atoms()
        .map(|atom| {
            let minus = (0..n)
                .filter(|&i| !atom.is_plus(i))
                .fold(0usize, |m, i| m | (1 << i));
            &coeffs[minus] * &scale
        })
        .collect();
    QuasiDistribution::new(space.clone(), weights)
}

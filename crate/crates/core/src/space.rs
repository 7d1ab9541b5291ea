//! Sample spaces of ±1-valued variables.
//!
//! Atoms are enumerated in a fixed canonical order: the first declared
//! variable is the most significant bit of the atom index, `+1` maps to bit 0
//! and `-1` to bit 1. For three variables `X, Y, Z` the order is
//! `+++, ++-, +-+, +--, -++, -+-, --+, ---`.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VARIABLES: usize = 16;

/// Set of variables, stored as a bitmask over declaration positions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct VarSet(u32);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn from_mask(mask: u32) -> Self {
        VarSet(mask)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        VarSet(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << index) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }
}

/// One complete ±1 assignment.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Atom {
    // bit i set <=> variable i takes the value -1
    minus: u32,
    n: u8,
}

impl Atom {
    /// Atom at position `index` of the canonical order.
    pub fn from_index(index: usize, n: usize) -> Atom {
        let mut minus = 0u32;
        for i in 0..n {
            if index & (1 << (n - 1 - i)) != 0 {
                minus |= 1 << i;
            }
        }
        Atom { minus, n: n as u8 }
    }

    /// Builds an atom from per-variable signs (`true` = +1).
    pub fn from_signs(signs: &[bool]) -> Atom {
        let minus = signs
            .iter()
            .enumerate()
            .filter(|(_, plus)| !**plus)
            .fold(0u32, |m, (i, _)| m | (1 << i));
        Atom {
            minus,
            n: signs.len() as u8,
        }
    }

    pub fn index(self) -> usize {
        let n = self.n as usize;
        (0..n)
            .filter(|i| self.minus & (1 << i) != 0)
            .fold(0usize, |acc, i| acc | (1 << (n - 1 - i)))
    }

    /// Value of variable `var`: `+1` or `-1`.
    pub fn value(self, var: usize) -> i8 {
        if self.minus & (1 << var) != 0 {
            -1
        } else {
            1
        }
    }

    pub fn is_plus(self, var: usize) -> bool {
        self.value(var) == 1
    }

    /// Parity character `χ_S(ω) = ∏_{v∈S} ω(v)`.
    pub fn character(self, subset: VarSet) -> i8 {
        if (self.minus & subset.0).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Compact sign string such as `+-+`.
    pub fn signs(self) -> String {
        (0..self.n as usize)
            .map(|i| if self.is_plus(i) { '+' } else { '-' })
            .collect()
    }

    /// The atom with every sign flipped.
    pub fn flipped(self) -> Atom {
        Atom {
            minus: !self.minus & ((1u32 << self.n) - 1),
            n: self.n,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.signs())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct SampleSpace {
    variables: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl SampleSpace {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<SampleSpace> {
        if names.is_empty() {
            return Err(Error::EmptySpace);
        }
        if names.len() > MAX_VARIABLES {
            return Err(Error::TooManyVariables {
                got: names.len(),
                max: MAX_VARIABLES,
            });
        }
        let mut variables: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            if !valid_name(name) {
                return Err(Error::InvalidVariableName(name.to_string()));
            }
            if variables.iter().any(|v| v == name) {
                return Err(Error::DuplicateVariable(name.to_string()));
            }
            variables.push(name.to_string());
        }
        Ok(SampleSpace { variables })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        1 << self.variables.len()
    }

    pub fn atom(&self, index: usize) -> Atom {
        Atom::from_index(index, self.len())
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        let n = self.len();
        (0..self.atom_count()).map(move |i| Atom::from_index(i, n))
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Resolves names to a subset; rejects empty, unknown and repeated names.
    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        if names.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut set = VarSet::EMPTY;
        for name in names {
            let idx = self.index_of(name.as_ref())?;
            if set.contains(idx) {
                return Err(Error::RepeatedInSubset(name.as_ref().to_string()));
            }
            set = set.union(VarSet::from_indices([idx]));
        }
        Ok(set)
    }

    pub fn full_set(&self) -> VarSet {
        VarSet((1u32 << self.len()) - 1)
    }

    /// Every nonempty subset, ordered by size then by declaration order.
    pub fn nonempty_subsets(&self) -> Vec<VarSet> {
        let mut subsets: Vec<VarSet> = (1..(1u32 << self.len())).map(VarSet).collect();
        subsets.sort_by_key(|s| (s.len(), self.subset_key(*s)));
        subsets
    }

    fn subset_key(&self, s: VarSet) -> Vec<usize> {
        s.indices().collect()
    }

    pub fn contains_set(&self, s: VarSet) -> bool {
        s.0 & !self.full_set().0 == 0
    }

    pub fn subset_names(&self, s: VarSet) -> Vec<&str> {
        s.indices().map(|i| self.variables[i].as_str()).collect()
    }

    /// `XY`-style label, or `X,Y` when any name is longer than one char.
    pub fn subset_label(&self, s: VarSet) -> String {
        let names = self.subset_names(s);
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(",")
        }
    }

    /// Human-readable atom label, e.g. `X=+1,Y=-1`.
    pub fn atom_label(&self, atom: Atom) -> String {
        self.variables
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{v}={:+}", atom.value(i)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

//! Exact-rational engine for inconsistent moment judgments over ±1-valued
//! random variables.
//!
//! Given a partial moment specification (for example three experts each
//! reporting one pairwise correlation), the crate answers:
//!
//! * whether a proper joint distribution exists ([`feasibility`]);
//! * the signed distribution of minimal negative mass that reproduces the
//!   moments, and the ranges of unconstrained moments under a mass budget
//!   ([`negprob`]);
//! * what sequential Bayesian pooling of the same judgments produces
//!   ([`bayes`]).
//!
//! All arithmetic is exact ([`Rational`]). The simplex engine in [`lp`] is
//! cross-checked by basis-enumeration and parity-expansion oracles.

pub mod bayes;
pub mod distribution;
pub mod error;
pub mod feasibility;
pub mod lp;
pub mod negprob;
pub mod oracle;
pub mod rational;
pub mod space;
pub mod system;

pub use distribution::{from_full_moments, QuasiDistribution};
pub use error::{Error, Result};
pub use rational::{q, Rational};
pub use space::{Atom, SampleSpace, VarSet};
pub use system::{MomentConstraint, MomentSystem};

//! Exact additive-combinatorics toolkit for sets of Szemerédi–Trotter type.
//!
//! Everything here is a pure function over immutable values: finite sets of
//! rationals, their sum/difference representation functions, higher
//! energies, correlation tensors, the convolution operators `T^g_A` and their
//! spectra, the tail profile behind the SzT condition, seeded set families,
//! and the per-instance inequality checks built from all of the above.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, suite
//! configuration and the command-line driver live in the `szt` crate.

#![no_std]

extern crate alloc;

pub mod conv;
pub mod energies;
pub mod error;
pub mod families;
pub mod harness;
pub mod numeric;
pub mod operators;
pub mod rational;
pub mod report;
pub mod set;
pub mod szt;

pub use conv::{convolve_minus, convolve_plus, level_set, MultiplicityMap};
pub use energies::{
    correlation_tensor, energy_bruteforce, energy_fractional, energy_k, mixed_energy,
    weighted_corr, CorrelationTensor, EnergyValue,
};
pub use error::{Error, Result};
pub use families::{apply_convex_map, generate, ConvexMap, FamilyKind, FamilySpec};
pub use operators::{
    apply_action, build_operator, eigen_spectrum, singular_spectrum, DenseOperator,
    OperatorKind, SpectrumKind, SpectrumResult, WeightFunction,
};
pub use rational::Rational;
pub use report::{InequalityReport, Relation};
pub use set::FiniteRealSet;
pub use harness::{evaluate, CheckOptions, Sign, Statement};
pub use szt::{
    default_probes, estimate_c, family_c, q_of, q_prime, tail_profile, CKind, SzTEstimate, TailProfile,
};

/// Work limits shared by the enumeration-heavy operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    /// Maximum number of tuple evaluations for brute-force oracles and
    /// correlation tensors.
    pub tuples: u64,
    /// Maximum number of entries in a dense operator.
    pub dense_entries: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            tuples: 100_000_000,
            dense_entries: 4_000_000,
        }
    }
}

//! Exact ZW-calculus engine.
//!
//! Diagrams are [`Term`]s built from generators with sequential and parallel
//! composition. They are interpreted as [`SparseMap`]s over a commutative
//! ring, normalised to [`NormalForm`]s, and checked against a catalogue of
//! rewrite rules. The [`qudit`] module covers the anyonic generalisation.

pub mod error;
pub mod normalform;
pub mod qudit;
pub mod ring;
pub mod rules;
pub mod semantics;
pub mod term;

pub use error::{Result, ZwError};
pub use normalform::{BentNormalForm, NormalForm, PreNormalForm};
pub use ring::{GaussianRational, RingDescriptor, RingKind, Scalar, Zn};
pub use rules::{Bounds, RuleInstance, RuleReport};
pub use semantics::{Parity, SparseMap};
pub use term::{Generator, Term};

pub use num_bigint::BigInt;
pub use num_complex::Complex64;

pub type Z2 = Zn<2>;

pub type IntTerm = Term<BigInt>;
pub type GaussianTerm = Term<GaussianRational>;
pub type ComplexTerm = Term<Complex64>;

pub type IntMap = SparseMap<BigInt>;
pub type GaussianMap = SparseMap<GaussianRational>;
pub type ComplexMap = SparseMap<Complex64>;

pub type IntNormalForm = NormalForm<BigInt>;
pub type GaussianNormalForm = NormalForm<GaussianRational>;

//! Exact computations on moduli spaces of stable curves: stable graphs,
//! tautological classes, Hodge integrals, Pixton's double ramification
//! formula, and the relations and identities built from them.

pub mod bigphase;
pub mod engine;
pub mod error;
pub mod exact;
pub mod givental;
pub mod golden;
pub mod graphs;
pub mod integrals;
pub mod par;
pub mod pixton;
pub mod relations;
pub mod series;
pub mod strata;

pub use engine::Engine;
pub use error::{Error, Result};
pub use exact::Rational;

//! Exact computation of the twisted Zhu bimodules `A_{g,n,m}(V) = V / O_{g,n,m}(V)`
//! on concrete vertex operator algebras, together with executable checks of
//! `O_{g,n,m}(V) = O'_{g,n,m}(V)` at finite weight cutoffs.

mod error;
pub mod dual;
pub mod frac;
pub mod identities;
pub mod linalg;
pub mod model;
pub mod monomial;
pub mod rational;
pub mod report;
pub mod series;
pub mod subspace;
pub mod twisted;
pub mod zhu;

pub use error::Error;
pub use frac::FracIndex;
pub use model::{Model, ModelKind};
pub use monomial::{Monomial, Vector};
pub use rational::Rational;

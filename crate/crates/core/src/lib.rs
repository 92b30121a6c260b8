//! Lattice point counts of L_p Minkowski combinations and certified checkers
//! for discrete L_p Brunn–Minkowski and Borell–Brascamp–Lieb inequalities.

pub mod certified;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod lattice;
pub mod means;
pub mod functions;
pub mod rational;
pub mod report;
pub mod verification;

pub use certified::CertifiedReal;
pub use error::{Error, Result};
pub use rational::{Exponent, Rational};

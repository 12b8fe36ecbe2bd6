//! Lattice-based integer factoring with an Ising/QAOA refinement stage.
//!
//! The pipeline builds a prime lattice for a semiprime `N`, reduces it with
//! LLL, rounds the target with Babai's nearest-plane algorithm, encodes the
//! local refinement around the Babai point as an Ising Hamiltonian, harvests
//! smooth relations from low-energy states and combines them over GF(2) into
//! a congruence of squares.

pub mod comparison;
pub mod error;
pub mod exec;
pub mod fixed;
pub mod instance;
pub mod ising;
pub mod lattice;
pub mod mgd;
pub mod numtheory;
pub mod pipeline;
pub mod postproc;
pub mod qsim;
pub mod relations;
pub mod route;

pub use error::{Error, Result};

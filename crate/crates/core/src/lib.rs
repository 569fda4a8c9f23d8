//! Bayesian linear regression under global-local shrinkage priors: the R2-D2
//! prior and the Dirichlet-Laplace, Horseshoe and Horseshoe+ comparators.

pub mod density;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod gibbs;
pub mod priors;
pub mod quad;
pub mod rngdist;
pub mod specialfns;

pub use error::{Error, Result};

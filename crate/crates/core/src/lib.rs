//! Exact analysis of multivariate hypergeometric terms given by their shift
//! quotients.

pub mod cli;
pub mod error;
pub mod factored;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod oresato;
pub mod poly;
pub mod rat;
pub mod structure;
pub mod termratio;

pub use error::{Error, Result};
pub use factored::FactoredRational;
pub use oresato::{decompose, gp_eval, Chain, OreSatoForm};
pub use rat::Rat;
pub use termratio::{Seed, TermSpec};
pub use io::Json;
pub use oracle::{grid_compare, propagate, GridReport, Propagation};
pub use structure::{
    build_structure, closed_form_eval, factorial_eval, pochhammer_eval, split_factorial, to_pochhammer, Eval,
    FactorialForm, PiecewiseStructure, PochhammerForm, Undefined,
};

pub mod bridge;
pub mod cli;
pub mod clone;
pub mod corpus;
pub mod error;
pub mod fin_cat;
pub mod presheaf;
pub mod report;
pub mod subst;

pub use error::{Error, Result};

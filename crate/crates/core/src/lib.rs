pub mod banded;
pub mod certify;
pub mod constants;
pub mod error;
pub mod gridfn;
pub mod ineqlab;
pub mod mpsolve;
pub mod par;
pub mod potential;
pub mod report;
pub mod roots;
pub mod stencil;

pub use error::{Error, Result};
pub use gridfn::GridFunction;
pub use potential::Potential;

pub mod algebra;
pub mod error;
pub mod evans;

pub use error::{EvansError, Result};
pub mod expansion;
pub mod ode;
pub mod operator;
pub mod reduction;
pub mod stokes;

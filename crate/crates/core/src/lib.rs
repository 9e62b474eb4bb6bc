//! Formal normal forms for para-CR hypersurfaces `y = F(a, b, x)` and
//! second-order ODEs `y'' = B(x, y, y')`, computed on truncated weighted
//! jets in exact rational arithmetic.

pub mod autodetect;
pub mod cli;
pub mod cmoperator;
pub mod error;
pub mod jetring;
pub mod linalg;
pub mod odebridge;
pub mod regnorm;
pub mod singnorm;

pub use error::{Error, Result};

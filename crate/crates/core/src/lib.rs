pub mod cli;
pub mod diffops;
pub mod error;
pub mod hcseries;
pub mod hyper;
pub mod jacobi;
pub mod linalg;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};

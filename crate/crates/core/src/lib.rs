pub mod complexes;
pub mod document;
pub mod error;
pub mod factorization;
pub mod linalg;
pub mod postnikov;
pub mod quiver;
pub mod suite;
pub mod tstructure;

pub use error::{Error, Result};

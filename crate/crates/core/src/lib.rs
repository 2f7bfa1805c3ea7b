pub mod counting;
pub mod deligne;
pub mod error;
pub mod exact;
pub mod involutions;
pub mod symplectic;
pub mod weil;

pub use error::{Error, Result};

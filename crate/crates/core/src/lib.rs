//! μ-Markoff maps on the Farey tree, their sink constants, and the
//! trace-systole bounds they imply for small surfaces.

pub mod charvar;
pub mod cubic;
pub mod dot;
pub mod error;
pub mod farey;
pub mod io;
pub mod markoff;
pub mod scalar;
pub mod systole;
pub mod verify;

pub use error::{Error, Result};
pub use farey::{Color, Slope, TreeEdge, Triangle, Word};
pub use markoff::{MarkoffMap, MarkoffTriple, MuParams};
pub use num_complex::Complex64;

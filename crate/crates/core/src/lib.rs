//! Leavitt path algebras of finite graphs, their spatial Lᵖ-representations
//! on finite measure spaces, and certified matrix p-norm bounds.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod lpa;
pub mod quiver;
pub mod reps;
pub mod scalar;
pub mod semigroup;
pub mod spatial;

pub use error::{Error, Result};
pub use quiver::{EdgeId, Path, Quiver, VertexId};
pub use scalar::GaussianRational;

//! Finite measure spaces, spatial partial isometries and p-norm bounds.

mod matrix;
mod norm;
mod space;

pub use matrix::CMatrix;
pub use norm::{block_sup_norm, boyd_trace, opnorm_p, opnorm_spatial, pnorm, NormBounds, NormOptions};
pub use space::{
    is_spatial_partial_isometry, spatial_from_system, Atom, AtomJson, Certificate, FiniteMeasureSpace, MatrixJson,
    SpaceJson, SpatialMatrix, SpatialSystem, SPATIAL_TOL,
};

//! Generalized Hartogs triangles: exact reproducing-kernel coefficients,
//! domain geometry, kernels, weighted multishift probes, subnormality
//! certificates and hereditary functional calculus for matrix tuples.

pub mod coeff;
pub mod geometry;
pub mod hereditary;
pub mod kernel;
pub mod lattice;
pub mod polytuple;
pub mod quadrature;
pub mod shiftops;
pub mod subnormality;

pub use coeff::{CoeffError, CoeffTable};
pub use lattice::LatticeWindow;
pub use polytuple::{MultiIndex, PolyTuple, Polynomial, UnivariatePoly};

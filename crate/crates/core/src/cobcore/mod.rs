//! Oriented smoothings, dotted cobordisms in reduced form, and matrices of
//! cobordisms.

pub mod cob;
pub mod lin;
pub mod mat;
pub mod smoothing;

pub use cob::{Circles, Cob};
pub use lin::{compose_cob, identity_cobordism, CobLin};
pub use mat::{cells_compose, mat_compose, Cells, MatMorphism, MatObject};
pub use smoothing::{GradedSmoothing, OrientedSmoothing, Polarity};

//! Exact computations on the boundary of the cone of sums of nonnegative
//! circuit functions: circuits, regular subdivisions, tropical complexes,
//! discriminant charts and the univariate boundary strata.

pub mod circuits;
pub mod discriminant;
pub mod equality;
pub mod error;
pub mod expsum;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod rat;
pub mod subdivision;
pub mod univariate;

pub use error::{Result, SoncError};
pub use geometry::{Face, SupportSet};
pub use rat::Rat;

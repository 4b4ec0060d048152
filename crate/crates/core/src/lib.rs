//! Coherent tangent bundles of fronts and smooth maps between surfaces.

pub mod bundle;
pub mod catalog;
pub mod curves;
pub mod error;
pub mod gauss_bonnet;
pub mod geometry;
pub mod grid;
pub mod regions;
pub mod singular;
pub mod taylor;

pub use error::{FrontError, Result};
pub use geometry::{AmbientKind, Mode, ParamDomain, Point2, Surface, Topology};

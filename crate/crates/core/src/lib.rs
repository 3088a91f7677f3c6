//! Auslander–Reiten theory for finitely presented representations of
//! strongly locally finite quivers.

pub mod ar;
pub mod batch;
pub mod components;
pub mod derived;
pub mod error;
pub mod hom;
pub mod linalg;
pub mod notation;
pub mod poly;
pub mod quiver;
pub mod rep;
pub mod strings;

pub use error::{Error, Result};

//! Traced monoidal categories, the Geometry-of-Interaction construction, a
//! projector-based realisation of GoI composition in finite-dimensional
//! Hilbert spaces, and a relational abstraction of it.

pub mod axioms;
pub mod bridge;
pub mod error;
pub mod goi;
pub mod linalg;
pub mod mll;
pub mod projector;
pub mod rel;
pub mod traced;

pub use error::{Error, Result};
pub use goi::{Goi, GoiMorphism, GoiObject};
pub use linalg::{FdSpace, LinMap, TensorSpace, Vector, C64};
pub use rel::{Carrier, Rel};
pub use traced::{CategoryKind, FdVec, RelPlus, RelTimes, TracedCategory};

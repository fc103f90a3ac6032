//! An affine λ-calculus over the multiplicative connectives, compiled into
//! the GoI category over finite-dimensional vector spaces.

pub mod compile;
pub mod parse;
pub mod reduce;
pub mod syntax;
pub mod typeck;

pub use compile::{compile, compile_source, denote, Compiled};
pub use parse::{parse, parse_type};
pub use reduce::beta_reduce;
pub use syntax::{Term, Type};
pub use typeck::{typecheck, TypeError, TypedTerm};

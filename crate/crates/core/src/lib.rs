//! Exact-arithmetic toolkit for the Bruhat-Tits tree of PGL2 over a local
//! field: matrix decompositions of GL2(F), the tree of lattice classes with
//! its PGL2 action, automorphism classification, and finite-ball verification
//! of the geometric decomposition and local-agreement properties.

pub mod field;
pub mod gl2;
pub mod tree;
pub mod geometry;
pub mod verify;

pub use field::{Backend, Field, FieldError, Scalar, Valuation};
pub use gl2::Mat2;
pub use tree::{Edge, End, Path, Vertex};

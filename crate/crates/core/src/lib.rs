//! Exact computational checks of fiberwise acyclicity and flatness
//! criteria for complexes of modules over `Z`, `Z/n`, `Z_(p)`, `F_p` and `Q`.

pub mod arith;
pub mod cli;
pub mod complex;
pub mod criteria;
pub mod document;
pub mod error;
pub mod homotopy;
pub mod koszul;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod random;
pub mod resolution;
pub mod ring;
pub mod towers;

pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use ring::{BaseRing, Prime, RingElement, RingKind, Spectrum};
pub use module::{FpModule, InvariantFactors, ModuleMap};
pub use complex::{BoundedComplex, ChainMap, FiberProfile};
pub use homotopy::{null_homotopy, HomotopyCertificate};

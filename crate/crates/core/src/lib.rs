//! Exact computational algebra of multimodules over Z/nZ.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod conjugation;
pub mod constructions;
pub mod diffop;
pub mod duality;
pub mod error;
pub mod howell;
pub mod inner_product;
pub mod involution;
pub mod mapspace;
pub mod mat;
pub mod oracle;
pub mod module;
pub mod morphism;
pub mod multimodule;
pub mod report;
pub mod smith;
pub mod trace;
pub mod zn;

pub use algebra::Algebra;
pub use conjugation::{AlgebraInvolution, AlgebraMap, Conjugation, Variance};
pub use error::{Error, Result};
pub use mat::Mat;
pub use mapspace::{Factorization, MapSpace};
pub use module::{iso_test, FpModule, IsoResult, ModuleMap, Presentation};
pub use report::{Report, Violation, Witness};
pub use zn::Modulus;

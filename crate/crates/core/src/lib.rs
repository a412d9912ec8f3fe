//! Inhomogeneous Diophantine approximation via negative continued fractions.

pub mod cantor;
pub mod error;
pub mod expansions;
pub mod figure;
pub mod hallray;
pub mod ncf;
pub mod numerics;
pub mod par;
pub mod spectrum;
pub mod word;

pub use error::{Error, Result};
pub use ncf::{NcfExpansion, StructuralBounds};
pub use numerics::{RealHandle, Surd};
pub use par::Execution;
pub use word::PeriodicWord;

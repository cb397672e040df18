//! Exact symbolic computations with chiral differential operators on the
//! upper half plane: the `SL(2, ℝ)` action, invariant vectors built from
//! modular forms, and the characters that count them.

pub mod adjoint;
pub mod character;
pub mod coeff;
pub mod error;
pub mod json;
pub mod lifting;
pub mod modealgebra;
pub mod partitions;
pub mod quasimod;
pub mod sl2;

pub use error::{Error, Result};

// The guide's chapters, compiled so their snippets run as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/partitions.md")]
    mod partitions {}
    #[doc = include_str!("../../../book/src/modes.md")]
    mod modes {}
    #[doc = include_str!("../../../book/src/adjoint.md")]
    mod adjoint {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    mod lifting {}
    #[doc = include_str!("../../../book/src/invariance.md")]
    mod invariance {}
    #[doc = include_str!("../../../book/src/character.md")]
    mod character {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

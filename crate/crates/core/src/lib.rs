pub mod cli;
pub mod complex;
pub mod error;
pub mod floquet;
pub mod lowernorm;
pub mod models;
pub mod operators;
pub mod spectra;
pub mod words;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/lower-norm.md")]
    mod lower_norm {}
    #[doc = include_str!("../../../book/src/pseudospectra.md")]
    mod pseudospectra {}
    #[doc = include_str!("../../../book/src/floquet.md")]
    mod floquet {}
    #[doc = include_str!("../../../book/src/comparison.md")]
    mod comparison {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
}

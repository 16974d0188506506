//! Text normalization and sparse n-gram featurization.

mod normalize;
mod vectorize;
mod vocab;

pub use normalize::{normalize, Normalizer};
pub use vectorize::{vectorize, DocVector};
pub use vocab::{build_vocabulary, Vocabulary};

//! Binary code-tuples with bounded decoding delay: prefix sets, decodability,
//! stationary analysis, class membership, length-preserving transformations,
//! a lookahead codec and a bounded optimality search.

pub mod alphabet;
pub mod analysis;
pub mod bits;
pub mod classes;
pub mod codec;
pub mod dist;
pub mod error;
pub mod goldens;
pub mod markov;
pub mod prefix_sets;
pub mod reproduction;
pub mod search;
pub mod transforms;
pub mod tuple;

pub use alphabet::{Alphabet, SourceSeq, Symbol};
pub use bits::BitSeq;
pub use dist::SourceDist;
pub use error::{Error, ParseError, Result};
pub use tuple::CodeTuple;

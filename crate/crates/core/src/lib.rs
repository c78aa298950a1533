//! Exact numerical theory of exceptional collections on blow-ups of the
//! projective plane in at most eight points.

pub mod chern;
pub mod error;
pub mod json;
pub mod log;
pub mod markov;
pub mod mutation;
pub mod pairs;
pub mod picard;
pub mod pipeline;
pub mod stability;

pub use chern::KClass;
pub use error::{Error, ErrorKind, Result};
pub use picard::{DivisorClass, Surface};
pub use stability::{GradedObject, SlopeVector};
pub use log::{MutationLog, Step};
pub use mutation::{BraidWord, Collection, Direction};
pub use pairs::PairType;

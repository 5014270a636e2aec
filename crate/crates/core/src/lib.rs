//! Exact computations on the variety of uniform matrix product states
//! `uMPS(m, n, d)`: the linear span of the variety as a `GL_n` character,
//! the five-variable trace parametrization for `m = n = 2`, characters of
//! low-degree ideal components, and Cayley-Hamilton trace relations that
//! produce linear equations on the variety.

pub mod caps;
pub mod ch_relations;
pub mod combinatorics;
pub mod error;
pub mod exact_algebra;
pub mod par;
pub mod span_character;
pub mod trace_calculus;
pub mod trace_param;

pub use caps::ResourceCaps;
pub use error::{Error, Result};
pub use par::Exec;

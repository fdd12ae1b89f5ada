//! Executable Galois–Tukey calculus for combinatorial cardinal invariants.
//!
//! The crate works over a decidable fragment of the reals:
//! [`UPSet`] (ultimately periodic subsets of ω) and [`APFunc`]
//! (arithmetically periodic functions ω → ω). On top of that it provides
//!
//! * [`triples`]: Vojtáš triples, duality, morphism checking, the catalog of
//!   natural triples, the built-in morphisms and refutation gadgets;
//! * [`bp`]: the continuous map ψ: ω^ω → [ω]^ω with centered image and
//!   bounded almost-containment sets, together with exact intersection
//!   computations and a bound extractor;
//! * [`splitting`]: the arithmetic order calculus on (n, m)-splitting triples;
//! * [`adversary`]: the interval-partition / predictor construction against
//!   continuous maps on 2^ω.

pub mod adversary;
pub mod bp;
mod error;
pub mod exec;
pub mod graph;
pub mod reals;
pub mod splitting;
pub mod triples;

pub use error::{Error, Result};
pub use reals::{APFunc, NColoring, UPSet};

//! Finitely presented groups at desk scale: lower central quotients through a
//! nilpotent quotient algorithm, coset enumeration and low-index subgroups,
//! Reidemeister-Schreier rewriting, homology of presentation complexes and Lück
//! approximation of the first L2 Betti number.
//!
//! All answers are exact. Expensive operations take [`Caps`] and fail with a cap
//! error instead of returning a truncated result.

pub mod constructions;
pub mod error;
pub mod homcalc;
pub mod l2betti;
pub mod nilquot;
pub mod resources;
pub mod subgroups;
pub mod words;
pub mod zlinalg;

pub use error::{Error, Result};
pub use resources::Caps;
pub use words::{Presentation, Word};

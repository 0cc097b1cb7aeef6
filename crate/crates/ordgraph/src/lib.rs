//! ordgraph: an exact symbolic toolkit for finitely presented ordinal graphs.
//!
//! Everything here is exact: ordinal arithmetic in Cantor normal form,
//! normal-form path words with unique factorization, decidable structural
//! predicates, eventually periodic boundary paths, and operator identities
//! verified over matrices of Laurent polynomials with Gaussian-rational
//! coefficients. No floating point, no tolerances.

pub mod boundary;
pub mod conditions;
pub mod fixtures;
pub mod ordinal;
pub mod patheng;
pub mod presentation;
pub mod report;
pub mod shift;
pub mod starops;

pub use ordinal::Ordinal;
pub use patheng::Path;
pub use presentation::Presentation;

//! Schur multipliers `M(G) = H₂(G; Z)` of groups described compositionally,
//! with two independent ways of checking the answers: the homology of a
//! presentation complex, and brute-force bar-resolution homology of small
//! multiplication tables.
//!
//! ```
//! use schur::compose::{parse_expr, schur_multiplier};
//!
//! let (m, _) = schur_multiplier(&parse_expr("Z/6 x Z/4")?)?;
//! assert_eq!(m.to_string(), "Z/2");
//! # Ok::<(), schur::Error>(())
//! ```

pub mod abelian;
pub mod amalgam;
pub mod bar_oracle;
pub mod compose;
pub mod error;
pub mod presentation;
pub mod smith;

pub use abelian::FgAbelianGroup;
pub use error::{Error, Result};
pub use smith::{cokernel_group, homology, snf, IntMatrix, SnfResult};

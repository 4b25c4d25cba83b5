//! Exact primitive idempotents of the group algebras of G(m,1,N), built by
//! the fusion procedure and cross-checked against the Jucys–Murphy spectrum.
//!
//! ```
//! use cyclofusion::fusion::{inductive_evaluation, FusionInput};
//! use cyclofusion::oracle::check_eigenvalues;
//! use cyclofusion::tableaux::StandardMultiTableau;
//!
//! let t = StandardMultiTableau::from_rows(&[vec![vec![1, 3]], vec![vec![2]]])?;
//! let e = inductive_evaluation(&FusionInput::new(&t, 10_000)?)?;
//! assert_eq!(&e * &e, e);
//! assert!(check_eigenvalues(&e, &t).all_pass());
//! # Ok::<(), cyclofusion::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module.

pub mod algebra;
pub mod cli;
pub mod cyclo;
pub mod error;
pub mod fusion;
pub mod group;
pub mod oracle;
pub mod ratfun;
pub mod tableaux;
pub mod verify;

pub use error::{Error, Result};

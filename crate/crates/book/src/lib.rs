//! Runs the code listings of the guide in `book/` as doctests. Each chapter
//! is its own module so a failure points at the chapter it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/cyclotomic.md")]
pub mod cyclotomic {}

#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}

#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}

#[doc = include_str!("../../../book/src/ratfun.md")]
pub mod ratfun {}

#[doc = include_str!("../../../book/src/tableaux.md")]
pub mod tableaux {}

#[doc = include_str!("../../../book/src/fusion.md")]
pub mod fusion {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

//! The guide, compiled.
//!
//! mdbook renders `book/` for reading; this crate re-includes every chapter
//! as rustdoc so that `cargo test --doc -p busylt-guide` executes each code
//! sample exactly as printed. A sample that drifts from the library fails
//! the build instead of rotting on the page.
//!
//! One module per chapter, so a failing doctest names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/catastrophe-races.md")]
pub mod catastrophe_races {}

#[doc = include_str!("../../../book/src/busy-periods.md")]
pub mod busy_periods {}

#[doc = include_str!("../../../book/src/branching.md")]
pub mod branching {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/stability-boundary.md")]
pub mod stability_boundary {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

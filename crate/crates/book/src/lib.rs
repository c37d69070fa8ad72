//! Runs the guide's code blocks as doctests. One module per chapter so a
//! failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/datasets.md")]
pub mod datasets {}
#[doc = include_str!("../../../book/src/reflection.md")]
pub mod reflection {}
#[doc = include_str!("../../../book/src/scattering.md")]
pub mod scattering {}
#[doc = include_str!("../../../book/src/partition.md")]
pub mod partition {}
#[doc = include_str!("../../../book/src/pathloss.md")]
pub mod pathloss {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

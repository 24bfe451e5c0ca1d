//! Graphical 2-matchings from fractional 2-matchings and from subtour LP
//! solutions, built with exact arithmetic and checked against the 4/3 and
//! 10/9 cost bounds.
//!
//! The pieces, bottom-up:
//!
//! * [`rat`], [`graph`], [`instance`], [`generate`]: exact numbers, multigraphs,
//!   complete metric instances and their generators.
//! * [`lp`]: an exact simplex solver.
//! * [`matching`]: minimum-cost perfect matching (blossom), a brute-force
//!   oracle and matching-polytope membership.
//! * [`f2m`]: the fractional 2-matching LP and its component decomposition.
//! * [`gadgets`]: the auxiliary cubic graphs whose perfect matchings tell how
//!   to turn a fractional component into a graphical 2-matching.
//! * [`g2m`]: graphical 2-matchings and shortcutting.
//! * [`mincut`], [`subtour`]: global minimum cuts and the subtour LP by
//!   cutting planes.
//! * [`twomo`]: 2-matchings with optional vertices, their polytope and the
//!   reduction to perfect matching.
//! * [`pipeline`], [`report`], [`verify`]: end-to-end runs with certificates.

pub mod error;
pub mod f2m;
pub mod g2m;
pub mod gadgets;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod matching;
pub mod mincut;
pub mod pipeline;
pub mod rat;
pub mod report;
pub mod subtour;
pub mod twomo;
pub mod verify;

pub use error::{Error, Result};
pub use rat::Rat;

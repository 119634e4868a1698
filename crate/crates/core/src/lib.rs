//! Revealed-preference analysis of self-punishing choice.
//!
//! A decision maker with a latent linear order `⊳` may pick from each menu
//! the maximum of a *harmful distortion* `⊳_i` of it, which sends the top `i`
//! alternatives to the bottom in reverse order. The degree of
//! self-punishment `sp(c)` of a choice is the least, over base orders, of
//! the largest distortion index needed to explain every pick.
//!
//! The crate computes `sp(c)` both by exhaustive search and through the
//! selection axioms that characterize it, recovers the base orders that
//! achieve it, and surveys how `sp` is distributed over all choices.

pub mod axioms;
pub mod census;
pub mod dataset;
pub mod degree;
pub mod distortion;
pub mod elicit;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod rationalize;
pub mod report;

pub use error::{Error, Result};
pub use model::{max_of, validate_choice, Alt, ChoiceFunction, GroundSet, LinearOrder, Menu, Reversal};

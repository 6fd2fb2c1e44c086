//! Text-only troll account detection.
//!
//! The pipeline discovers themes with LDA, builds theme-conditioned lexicon
//! features and writing-style profiling features per account, and evaluates
//! a logistic-regression classifier with stratified cross-validation. The
//! [`analysis`] module holds the significance tests and emotion profiles.

pub mod analysis;
pub mod corpus;
pub mod lexicons;
pub mod model;
pub mod pipeline;
pub mod preprocess;
pub mod features;
pub mod synthetic;
pub mod topics;

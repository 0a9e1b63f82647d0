//! Detection of AI-generated scientific abstracts.
//!
//! The crate is organised as a pipeline: [`corpus`] records are tokenized by
//! [`textproc`], scored by the n-gram language model in [`lm`], turned into
//! the 27-dimension stylometric vector of [`features`], and classified by the
//! interpretable logistic detector in [`detector`]. [`explain`] produces
//! local word-level attributions for any scorer, and [`eval`] computes the
//! metrics and regression reports.

pub mod textproc;
pub mod eval;
pub mod lm;
pub mod features;
pub mod corpus;
pub mod detector;
pub mod explain;

mod label;

pub use label::Label;

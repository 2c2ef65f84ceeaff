//! Psychometric scoring of ESG news sentiment.
//!
//! The crate turns dated, sentiment-labelled news records into a
//! month-as-item dichotomous response matrix ([`ingest`]), fits the Rasch
//! model to it by joint maximum likelihood ([`rasch`]), evaluates binary
//! classifiers ([`metrics`]) and ranks candidate classifier configurations
//! with weighted TOPSIS ([`topsis`]). [`svg`] renders item curves without a
//! plotting dependency.

pub mod error;
pub mod ingest;
pub mod metrics;
pub mod rasch;
pub mod svg;
pub mod topsis;

pub use error::{Error, Result};

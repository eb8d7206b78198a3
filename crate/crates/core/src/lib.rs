//! Counterfactual augmentation (CFA) for imbalanced binary classification.
//!
//! CFA creates minority instances by transplanting the difference features of
//! an existing majority/minority counterfactual pair onto an unpaired majority
//! instance, so every synthetic value is copied from a real instance. The
//! crate also provides SMOTE, Borderline-SMOTE, ADASYN and Safe-Level-SMOTE,
//! three from-scratch classifiers and a cross-validated benchmark harness.
//!
//! ```
//! use cfa::dataset::{Dataset, Label};
//! use cfa::resample::{resample, Method, ResamplePlan};
//!
//! let rows = vec![
//!     vec![1.0, 1.0, 5.0], vec![1.0, 1.0, 9.0], vec![4.0, 3.0, 7.0],
//!     vec![2.0, 6.0, 1.0], vec![1.0, 1.0, 1.0],
//! ];
//! let labels = vec![Label::Negative, Label::Positive, Label::Negative, Label::Negative, Label::Negative];
//! let ds = Dataset::from_rows(rows, labels).unwrap();
//! let plan = ResamplePlan::new(Method::cfa()).with_seed(1);
//! let out = resample(&ds, &plan).unwrap();
//! assert!(out.dataset.count(Label::Positive) >= 1);
//! ```

pub mod cf_engine;
pub mod classifiers;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod neighbors;
pub mod resample;
pub mod smote_family;

pub use error::{Error, Result};

//! Non-extensive entropy with a Gaussian information gain, and a
//! co-occurrence based texture pipeline built on it.
//!
//! * [`measures`]: the entropy family over [`ProbDist`] and [`JointDist`],
//!   plus Shannon, Rényi, Tsallis and Pal & Pal for comparison.
//! * [`glcm`]: gray-level co-occurrence matrices, their probabilities and the
//!   Haralick correlation feature.
//! * [`fbim`]: 8 × d_max polar interaction maps of any feature.
//! * [`dataset`]: PGM I/O, tiling, per-tile features and seeded splits.
//! * [`classifier`]: 1-NN and nearest-centroid evaluation.
//!
//! ```
//! use texent_core::{entropy, normalized_entropy, ProbDist};
//!
//! let p = ProbDist::new(vec![0.25, 0.75]).unwrap();
//! assert!((entropy(&p) - 0.6621904).abs() < 1e-7);
//! assert!((normalized_entropy(&p).unwrap() - 0.7162221).abs() < 1e-7);
//! ```

pub mod classifier;
pub mod dataset;
pub mod error;
pub mod fbim;
pub mod glcm;
pub mod measures;
pub mod numfmt;
pub mod synthetic;

pub use classifier::{
    classify, comparison_csv, cross_validate, evaluate, folds, repeated_cross_validation, train,
    AccuracyTable, ClassifierKind, EvalReport, TrainedModel,
};
pub use dataset::{
    extract_feature, split, tile, FeatureSpec, LabeledFeatureSet, Record, SplitSpec,
};
pub use error::{Error, Result};
pub use fbim::{compute_fbim, fbim_from_csv, fbim_to_csv, fbim_to_image, Fbim, Feature};
pub use glcm::{
    compute_glcm, correlation, glcm_entropy, glcp, offset_of, Glcm, GrayImage, SpacingVector,
};
pub use measures::{
    apply_measure, conditional_entropy_x_given_y, conditional_entropy_y_given_x, entropy,
    entropy_bounds, info_gain, joint_entropy, normalized_entropy, pal_pal, relative_entropy, renyi,
    shannon, tsallis, EntropyMeasure, JointDist, ProbDist,
};

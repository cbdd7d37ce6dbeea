//! Topological weighted centroid analysis of planar point sets.
//!
//! Start from a [`PointSet`], locate its Alpha Point with [`alpha_sweep`],
//! derive the kernel bandwidth with [`beta_sweep`], and from there build scalar
//! fields ([`fields`]), the nonlinear spanning tree and Markov attractors
//! ([`dynamics`]), or the meta-distance clustering ([`metadistance`]).
//! [`pipeline`] runs everything end to end and writes the artifacts.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::should_implement_trait)]

pub mod dataset;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod indirect;
pub mod loo;
pub mod sweep;

pub use dataset::{euclidean_matrix, load_points, Crs, DistanceMatrix, GridWindow, PointSet, ScalarFieldGrid};
pub use error::{Result, TwcError};
pub use geometry::Point2;
pub use indirect::{indirect_geometry, recursive_collapse, IndirectGeometry};
pub use loo::{loo_alpha, loo_alpha_with, LooReport};
pub use sweep::{
    alpha_sweep, alpha_sweep_with, beta_sweep, beta_sweep_with, entropy, free_energy, twc, weights_alpha,
    weights_beta, AlphaResult, BetaResult, SelfTerm, SweepConfig, SweepTrace, Unbracketed,
};
pub mod metadistance;
pub mod pipeline;
pub mod reference;
pub use pipeline::{cmd_analyze, cmd_field, cmd_loo, cmd_metadist, GeoFrame, RunConfig, StageError};

//! Embeddings on pseudo-hyperboloids `Q^{p,q}_β`.
//!
//! The crate covers the geometry of the manifold, its exponential and
//! logarithm maps, a pseudo-Riemannian gradient descent, and a softmax
//! ranking loss for embedding weighted graphs.

pub mod embedding;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod maps;
pub mod metrics;
pub mod optim;
pub mod synthetic;

pub use embedding::{
    constraint_satisfaction, init_embeddings, loss, loss_gradients, train, train_euclidean, EmbeddingSet,
    Euclidean, NegativeSampling, PairGeometry, TrainingConfig, WeakerSets,
};
pub use error::{Error, Result};
pub use geometry::{
    normalize_to_manifold, project_to_tangent, quadratic_norm, scalar_product, AmbientSpace, ManifoldPoint,
    Signature, TangentVector,
};
pub use graph::{karate_club, load_graph, weaker_set, Edge, WeakerSampling, WeightedGraph};
pub use maps::{
    anti_isometry, dissimilarity, exp_map, extrinsic_distance, geodesic, geodesic_distance, log_map, phi,
    phi_jvp, phi_vjp, psi, psi_inverse, GeodesicClass, SphereCrossEuclidean,
};
pub use metrics::{delta_scores, leader_ranks, recall_at_1, spearman_rho, spearman_top_k};
pub use optim::{
    descent_direction, optimize, optimize_via_phi, optimize_with_monitor, precondition, pseudo_riemannian_gradient,
    step, Control, ObjectiveEvaluation, OptimizationResult, OptimizerConfig, OptimizerMode, StopRule, TraceRecord,
};

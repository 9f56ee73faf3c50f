//! Partitioning engines: the K-means baseline and K-expectile clustering with
//! fixed or adaptive asymmetry levels.

mod engine;
mod init;
mod types;

pub use engine::{
    adaptive_tau_cluster, adaptive_tau_cluster_from, adaptive_tau_cluster_observed, assign,
    fixed_tau_cluster, fixed_tau_cluster_from, fixed_tau_cluster_observed, init_centroids, kmeans,
    kmeans_from, objective, repair_empty_clusters, update_centroids, update_tau,
    within_sum_of_squares, Phase, StepRecord,
};
pub use init::kmeanspp_seeds;
pub use types::{
    resolve_tau, CentroidSet, ClusterConfig, ClusterResult, Membership, TauMatrix, TauSpec,
    TauUpdateRule,
};

pub(crate) use init::rng_from_seed;

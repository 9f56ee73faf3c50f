//! Assignment, centroid and τ updates, and the three partitioning loops.

use rayon::prelude::*;

use crate::clustering::init::{check_k, kmeanspp_seeds};
use crate::clustering::types::{
    CentroidSet, ClusterConfig, ClusterResult, Membership, TauMatrix, TauSpec, TauUpdateRule,
};
use crate::error::{Error, Result};
use crate::expectile::{
    laws_fixed_point, one_sided_deviations, tau_distance_unchecked, AsymmetryLevel, LawsConfig,
    TAU_FLOOR,
};
use crate::matrix::DataMatrix;

/// Below this many distance evaluations the assignment runs on the calling thread.
const PARALLEL_ASSIGN_THRESHOLD: usize = 1 << 14;

/// One phase of an outer iteration, reported to an observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// New membership at fixed centroids and τ.
    Assign,
    /// Empty clusters re-seeded.
    Repair,
    /// New centroids at fixed membership and τ.
    Centroids,
    /// New τ at fixed membership and centroids.
    Tau,
}

/// Objective immediately before and after one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub iteration: usize,
    pub phase: Phase,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scheme {
    KMeans,
    FixedTau,
    AdaptiveTau,
}

fn check_shapes(data: &DataMatrix, centroids: &CentroidSet, tau: &TauMatrix) -> Result<()> {
    if centroids.dim() != data.ncols() {
        return Err(Error::DimensionMismatch {
            expected: data.ncols(),
            actual: centroids.dim(),
            context: "centroid dimension",
        });
    }
    if tau.k() != centroids.k() || tau.dim() != data.ncols() {
        return Err(Error::DimensionMismatch {
            expected: centroids.k() * data.ncols(),
            actual: tau.k() * tau.dim(),
            context: "tau matrix shape",
        });
    }
    Ok(())
}

fn check_membership(data: &DataMatrix, membership: &Membership, k: usize) -> Result<()> {
    if membership.len() != data.nrows() {
        return Err(Error::DimensionMismatch {
            expected: data.nrows(),
            actual: membership.len(),
            context: "membership length",
        });
    }
    if membership.k() > k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: membership.k(),
            context: "cluster count",
        });
    }
    Ok(())
}

fn nearest(x: &[f64], centroids: &CentroidSet, tau: &TauMatrix) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for c in 0..centroids.k() {
        let d = tau_distance_unchecked(x, centroids.center(c), tau.row(c));
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

/// Assign every observation to the cluster with the smallest τ-distance; ties go to the lowest index.
pub fn assign(data: &DataMatrix, centroids: &CentroidSet, tau: &TauMatrix) -> Result<Membership> {
    check_shapes(data, centroids, tau)?;
    Ok(assign_unchecked(data, centroids, tau))
}

fn assign_unchecked(data: &DataMatrix, centroids: &CentroidSet, tau: &TauMatrix) -> Membership {
    let work = data.nrows() * centroids.k() * data.ncols();
    let labels = if work >= PARALLEL_ASSIGN_THRESHOLD {
        data.as_flat()
            .par_chunks_exact(data.ncols())
            .map(|x| nearest(x, centroids, tau))
            .collect()
    } else {
        data.rows().map(|x| nearest(x, centroids, tau)).collect()
    };
    Membership::from_raw(labels, centroids.k())
}

/// Within-cluster τ-variance: the sum over observations of the τ-distance to their own center.
pub fn objective(
    data: &DataMatrix,
    membership: &Membership,
    centroids: &CentroidSet,
    tau: &TauMatrix,
) -> Result<f64> {
    check_shapes(data, centroids, tau)?;
    check_membership(data, membership, centroids.k())?;
    Ok(objective_unchecked(data, membership, centroids, tau))
}

fn objective_unchecked(
    data: &DataMatrix,
    membership: &Membership,
    centroids: &CentroidSet,
    tau: &TauMatrix,
) -> f64 {
    data.rows()
        .zip(membership.labels())
        .map(|(x, &c)| tau_distance_unchecked(x, centroids.center(c), tau.row(c)))
        .sum()
}

/// K-means objective: total within-cluster sum of squared Euclidean distances.
pub fn within_sum_of_squares(
    data: &DataMatrix,
    membership: &Membership,
    centroids: &CentroidSet,
) -> Result<f64> {
    if centroids.dim() != data.ncols() {
        return Err(Error::DimensionMismatch {
            expected: data.ncols(),
            actual: centroids.dim(),
            context: "centroid dimension",
        });
    }
    check_membership(data, membership, centroids.k())?;
    Ok(wss_unchecked(data, membership, centroids))
}

fn wss_unchecked(data: &DataMatrix, membership: &Membership, centroids: &CentroidSet) -> f64 {
    data.rows()
        .zip(membership.labels())
        .map(|(x, &c)| {
            x.iter()
                .zip(centroids.center(c))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .sum()
}

/// Column-major copy of each cluster's rows, one buffer per cluster.
fn cluster_columns(data: &DataMatrix, membership: &Membership) -> Vec<Vec<f64>> {
    let p = data.ncols();
    membership
        .groups()
        .into_iter()
        .map(|rows| {
            let m = rows.len();
            let mut buf = vec![0.0; m * p];
            for (slot, &i) in rows.iter().enumerate() {
                for (j, &x) in data.row(i).iter().enumerate() {
                    buf[j * m + slot] = x;
                }
            }
            buf
        })
        .collect()
}

fn first_empty(columns: &[Vec<f64>]) -> Option<usize> {
    columns.iter().position(|c| c.is_empty())
}

/// Per-cluster, per-dimension τ-expectiles computed with LAWS.
pub fn update_centroids(
    data: &DataMatrix,
    membership: &Membership,
    tau: &TauMatrix,
    laws: LawsConfig,
) -> Result<CentroidSet> {
    if tau.dim() != data.ncols() {
        return Err(Error::DimensionMismatch {
            expected: data.ncols(),
            actual: tau.dim(),
            context: "tau dimension",
        });
    }
    check_membership(data, membership, tau.k())?;
    let membership = Membership::from_raw(membership.labels().to_vec(), tau.k());
    let columns = cluster_columns(data, &membership);
    if let Some(c) = first_empty(&columns) {
        return Err(Error::EmptyCluster(c));
    }
    Ok(expectile_centers(&columns, tau, data.ncols(), laws))
}

fn expectile_centers(
    columns: &[Vec<f64>],
    tau: &TauMatrix,
    p: usize,
    laws: LawsConfig,
) -> CentroidSet {
    let values: Vec<f64> = columns
        .par_iter()
        .enumerate()
        .flat_map_iter(|(c, buf)| {
            let m = buf.len() / p;
            buf.chunks_exact(m)
                .enumerate()
                .map(move |(j, col)| laws_fixed_point(col, tau.get(c, j), laws).0)
        })
        .collect();
    CentroidSet::from_flat(columns.len(), p, values).expect("expectiles of finite data are finite")
}

fn mean_centers(columns: &[Vec<f64>], p: usize) -> CentroidSet {
    let mut values = Vec::with_capacity(columns.len() * p);
    for buf in columns {
        let m = buf.len() / p;
        values.extend(
            buf.chunks_exact(m)
                .map(|col| col.iter().sum::<f64>() / m as f64),
        );
    }
    CentroidSet::from_flat(columns.len(), p, values).expect("means of finite data are finite")
}

/// Re-estimate τ for every (cluster, dimension) from the cluster's values and its center.
///
/// Results are clamped to `[0.01, 0.99]`. A column with values only above its
/// center yields `0.99`, only below yields `0.01`, and a column equal to its
/// center everywhere yields `0.5`.
pub fn update_tau(
    data: &DataMatrix,
    membership: &Membership,
    centroids: &CentroidSet,
    rule: TauUpdateRule,
) -> Result<TauMatrix> {
    if centroids.dim() != data.ncols() {
        return Err(Error::DimensionMismatch {
            expected: data.ncols(),
            actual: centroids.dim(),
            context: "centroid dimension",
        });
    }
    check_membership(data, membership, centroids.k())?;
    let membership = Membership::from_raw(membership.labels().to_vec(), centroids.k());
    let columns = cluster_columns(data, &membership);
    if let Some(c) = first_empty(&columns) {
        return Err(Error::EmptyCluster(c));
    }
    Ok(tau_from_columns(&columns, centroids, rule))
}

fn tau_from_columns(
    columns: &[Vec<f64>],
    centroids: &CentroidSet,
    rule: TauUpdateRule,
) -> TauMatrix {
    let p = centroids.dim();
    let mut tau = TauMatrix::filled(columns.len(), p, AsymmetryLevel::HALF);
    for (c, buf) in columns.iter().enumerate() {
        let m = buf.len() / p;
        for (j, col) in buf.chunks_exact(m).enumerate() {
            tau.set(c, j, column_tau(col, centroids.center(c)[j], rule));
        }
    }
    tau
}

fn column_tau(values: &[f64], theta: f64, rule: TauUpdateRule) -> AsymmetryLevel {
    let (above, below) = one_sided_deviations(values, theta);
    let level = match (above > 0.0, below > 0.0) {
        (false, false) => 0.5,
        (true, false) => 1.0 - TAU_FLOOR,
        (false, true) => TAU_FLOOR,
        (true, true) => {
            let gamma = match rule {
                TauUpdateRule::Consistent => below / above,
                TauUpdateRule::CountWeighted => {
                    let n_above = values.iter().filter(|&&x| x > theta).count() as f64;
                    let n_below = values.iter().filter(|&&x| x < theta).count() as f64;
                    (n_below * below) / (n_above * above)
                }
            };
            gamma / (1.0 + gamma)
        }
    };
    AsymmetryLevel::new(level.clamp(TAU_FLOOR, 1.0 - TAU_FLOOR)).expect("clamped level is interior")
}

/// Re-seed every empty cluster at the observation farthest (in τ-distance) from
/// its current center, moving that observation into the empty cluster.
///
/// Donors are drawn only from clusters with at least two members, so each repair
/// fills one cluster without emptying another. Ties go to the lowest row index.
/// Returns the number of clusters repaired.
pub fn repair_empty_clusters(
    data: &DataMatrix,
    membership: &mut Membership,
    centroids: &mut CentroidSet,
    tau: &TauMatrix,
) -> Result<usize> {
    check_shapes(data, centroids, tau)?;
    check_membership(data, membership, centroids.k())?;
    if membership.k() < centroids.k() {
        *membership = Membership::from_raw(membership.labels().to_vec(), centroids.k());
    }
    Ok(repair_unchecked(data, membership, centroids, tau))
}

fn repair_unchecked(
    data: &DataMatrix,
    membership: &mut Membership,
    centroids: &mut CentroidSet,
    tau: &TauMatrix,
) -> usize {
    let mut sizes = membership.cluster_sizes();
    let mut repairs = 0;
    while let Some(empty) = sizes.iter().position(|&s| s == 0) {
        let mut donor = None;
        let mut best = f64::NEG_INFINITY;
        for (i, (x, &c)) in data.rows().zip(membership.labels()).enumerate() {
            if sizes[c] < 2 {
                continue;
            }
            let d = tau_distance_unchecked(x, centroids.center(c), tau.row(c));
            if d > best {
                best = d;
                donor = Some(i);
            }
        }
        // k ≤ n guarantees a cluster with two or more members while one is empty.
        let Some(i) = donor else { break };
        let from = membership.labels()[i];
        sizes[from] -= 1;
        sizes[empty] += 1;
        membership.set(i, empty);
        centroids.center_mut(empty).copy_from_slice(data.row(i));
        repairs += 1;
    }
    repairs
}

/// K-means centroids from k-means++ seeding; the starting point of both K-expectile schemes.
pub fn init_centroids(data: &DataMatrix, k: usize, seed: u64) -> Result<CentroidSet> {
    let config = ClusterConfig::default().with_seed(seed);
    Ok(kmeans(data, k, &config)?.centroids)
}

/// Lloyd's algorithm from k-means++ seeding.
pub fn kmeans(data: &DataMatrix, k: usize, config: &ClusterConfig) -> Result<ClusterResult> {
    check_k(data, k)?;
    let init = kmeanspp_seeds(data, k, config.seed)?;
    kmeans_from(data, init, config)
}

/// Lloyd's algorithm from explicit starting centroids.
pub fn kmeans_from(
    data: &DataMatrix,
    init: CentroidSet,
    config: &ClusterConfig,
) -> Result<ClusterResult> {
    let tau = TauMatrix::filled(init.k(), data.ncols(), AsymmetryLevel::HALF);
    run(data, init, tau, Scheme::KMeans, config, None)
}

/// K-expectile clustering with a fixed τ shape.
pub fn fixed_tau_cluster(
    data: &DataMatrix,
    k: usize,
    spec: &TauSpec,
    config: &ClusterConfig,
) -> Result<ClusterResult> {
    check_k(data, k)?;
    let tau = spec.resolve(k, data.ncols())?;
    let init = init_centroids(data, k, config.seed)?;
    fixed_tau_cluster_from(data, init, tau, config)
}

pub fn fixed_tau_cluster_from(
    data: &DataMatrix,
    init: CentroidSet,
    tau: TauMatrix,
    config: &ClusterConfig,
) -> Result<ClusterResult> {
    run(data, init, tau, Scheme::FixedTau, config, None)
}

/// K-expectile clustering that learns a `K × p` τ matrix, starting from τ = 0.5.
pub fn adaptive_tau_cluster(
    data: &DataMatrix,
    k: usize,
    config: &ClusterConfig,
) -> Result<ClusterResult> {
    check_k(data, k)?;
    let init = init_centroids(data, k, config.seed)?;
    adaptive_tau_cluster_from(data, init, config)
}

pub fn adaptive_tau_cluster_from(
    data: &DataMatrix,
    init: CentroidSet,
    config: &ClusterConfig,
) -> Result<ClusterResult> {
    let tau = TauMatrix::filled(init.k(), data.ncols(), AsymmetryLevel::HALF);
    run(data, init, tau, Scheme::AdaptiveTau, config, None)
}

/// [`adaptive_tau_cluster_from`] reporting the objective around every phase.
pub fn adaptive_tau_cluster_observed(
    data: &DataMatrix,
    init: CentroidSet,
    config: &ClusterConfig,
    observer: &mut dyn FnMut(StepRecord),
) -> Result<ClusterResult> {
    let tau = TauMatrix::filled(init.k(), data.ncols(), AsymmetryLevel::HALF);
    run(data, init, tau, Scheme::AdaptiveTau, config, Some(observer))
}

/// [`fixed_tau_cluster_from`] reporting the objective around every phase.
pub fn fixed_tau_cluster_observed(
    data: &DataMatrix,
    init: CentroidSet,
    tau: TauMatrix,
    config: &ClusterConfig,
    observer: &mut dyn FnMut(StepRecord),
) -> Result<ClusterResult> {
    run(data, init, tau, Scheme::FixedTau, config, Some(observer))
}

fn run(
    data: &DataMatrix,
    mut centroids: CentroidSet,
    mut tau: TauMatrix,
    scheme: Scheme,
    config: &ClusterConfig,
    mut observer: Option<&mut dyn FnMut(StepRecord)>,
) -> Result<ClusterResult> {
    check_k(data, centroids.k())?;
    check_shapes(data, &centroids, &tau)?;
    if !(config.tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tol must be >= 0, got {}",
            config.tol
        )));
    }
    let p = data.ncols();
    let observing = observer.is_some();
    let mut notify = |iteration: usize, phase: Phase, before: f64, after: f64| {
        if let Some(obs) = observer.as_mut() {
            obs(StepRecord {
                iteration,
                phase,
                before,
                after,
            });
        }
    };

    let mut membership: Option<Membership> = None;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    loop {
        let mut assigned = assign_unchecked(data, &centroids, &tau);
        if let Some(previous) = membership.as_ref().filter(|_| observing) {
            let before = objective_unchecked(data, previous, &centroids, &tau);
            let after = objective_unchecked(data, &assigned, &centroids, &tau);
            notify(iterations + 1, Phase::Assign, before, after);
        }
        let before_repair = if observing {
            objective_unchecked(data, &assigned, &centroids, &tau)
        } else {
            0.0
        };
        if repair_unchecked(data, &mut assigned, &mut centroids, &tau) > 0 && observing {
            let after = objective_unchecked(data, &assigned, &centroids, &tau);
            notify(iterations + 1, Phase::Repair, before_repair, after);
        }
        let current = membership.insert(assigned);

        if converged || iterations == config.max_iter {
            break;
        }
        iterations += 1;

        let columns = cluster_columns(data, current);
        let updated = match scheme {
            Scheme::KMeans => mean_centers(&columns, p),
            Scheme::FixedTau | Scheme::AdaptiveTau => {
                expectile_centers(&columns, &tau, p, config.laws)
            }
        };
        if observing {
            notify(
                iterations,
                Phase::Centroids,
                objective_unchecked(data, current, &centroids, &tau),
                objective_unchecked(data, current, &updated, &tau),
            );
        }
        if scheme == Scheme::AdaptiveTau {
            let learned = tau_from_columns(&columns, &updated, config.tau_update);
            if observing {
                notify(
                    iterations,
                    Phase::Tau,
                    objective_unchecked(data, current, &updated, &tau),
                    objective_unchecked(data, current, &updated, &learned),
                );
            }
            tau = learned;
        }

        let movement = updated.max_abs_diff(&centroids);
        centroids = updated;
        trace.push(match scheme {
            Scheme::KMeans => wss_unchecked(data, current, &centroids),
            _ => objective_unchecked(data, current, &centroids, &tau),
        });
        converged = movement <= config.tol;
    }

    Ok(ClusterResult {
        membership: membership.expect("at least one assignment"),
        centroids,
        tau,
        objective_trace: trace,
        iterations,
        converged,
        seed: config.seed,
    })
}

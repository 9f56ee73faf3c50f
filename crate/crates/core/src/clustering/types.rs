use crate::error::{Error, Result};
use crate::expectile::{AsymmetryLevel, LawsConfig};

/// Cluster id per observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    labels: Vec<usize>,
    k: usize,
}

impl Membership {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some((index, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::LabelOutOfRange { index, label, k });
        }
        Ok(Membership { labels, k })
    }

    /// Infers `k` as one more than the largest label.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        Membership { labels, k }
    }

    pub(crate) fn from_raw(labels: Vec<usize>, k: usize) -> Self {
        debug_assert!(labels.iter().all(|&l| l < k));
        Membership { labels, k }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Row indices per cluster, each in ascending order.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            groups[l].push(i);
        }
        groups
    }

    pub(crate) fn set(&mut self, i: usize, label: usize) {
        debug_assert!(label < self.k);
        self.labels[i] = label;
    }
}

/// `K` cluster centers of dimension `p`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet {
    k: usize,
    p: usize,
    values: Vec<f64>,
}

impl CentroidSet {
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidParameter(
                "centroid set must be nonempty".into(),
            ));
        }
        let p = rows[0].as_ref().len();
        let mut values = Vec::with_capacity(k * p);
        for r in rows {
            let r = r.as_ref();
            if r.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    actual: r.len(),
                    context: "centroid length",
                });
            }
            values.extend_from_slice(r);
        }
        CentroidSet::from_flat(k, p, values)
    }

    pub fn from_flat(k: usize, p: usize, values: Vec<f64>) -> Result<Self> {
        if k == 0 || p == 0 || values.len() != k * p {
            return Err(Error::DimensionMismatch {
                expected: k * p,
                actual: values.len(),
                context: "centroid buffer",
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(CentroidSet { k, p, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn center(&self, c: usize) -> &[f64] {
        &self.values[c * self.p..(c + 1) * self.p]
    }

    pub(crate) fn center_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.values[c * self.p..(c + 1) * self.p]
    }

    pub fn centers(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.p)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    /// Largest absolute coordinate change between two centroid sets of equal shape.
    pub fn max_abs_diff(&self, other: &CentroidSet) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// User-facing description of the asymmetry levels for fixed-τ clustering.
#[derive(Debug, Clone, PartialEq)]
pub enum TauSpec {
    Scalar(AsymmetryLevel),
    PerDimension(Vec<AsymmetryLevel>),
    PerCluster(Vec<AsymmetryLevel>),
    Full(TauMatrix),
}

impl TauSpec {
    pub fn scalar(tau: f64) -> Result<Self> {
        Ok(TauSpec::Scalar(AsymmetryLevel::new(tau)?))
    }

    pub fn per_dimension(taus: &[f64]) -> Result<Self> {
        Ok(TauSpec::PerDimension(levels(taus)?))
    }

    pub fn per_cluster(taus: &[f64]) -> Result<Self> {
        Ok(TauSpec::PerCluster(levels(taus)?))
    }

    /// Broadcast to a `k × p` matrix.
    pub fn resolve(&self, k: usize, p: usize) -> Result<TauMatrix> {
        match self {
            TauSpec::Scalar(t) => Ok(TauMatrix::filled(k, p, *t)),
            TauSpec::PerDimension(v) => {
                if v.len() != p {
                    return Err(Error::DimensionMismatch {
                        expected: p,
                        actual: v.len(),
                        context: "per-dimension tau",
                    });
                }
                let values = (0..k).flat_map(|_| v.iter().copied()).collect();
                Ok(TauMatrix { k, p, values })
            }
            TauSpec::PerCluster(v) => {
                if v.len() != k {
                    return Err(Error::DimensionMismatch {
                        expected: k,
                        actual: v.len(),
                        context: "per-cluster tau",
                    });
                }
                let values = v.iter().flat_map(|&t| std::iter::repeat_n(t, p)).collect();
                Ok(TauMatrix { k, p, values })
            }
            TauSpec::Full(m) => {
                if m.k != k || m.p != p {
                    return Err(Error::DimensionMismatch {
                        expected: k * p,
                        actual: m.k * m.p,
                        context: "tau matrix shape",
                    });
                }
                Ok(m.clone())
            }
        }
    }
}

/// Free-function form of [`TauSpec::resolve`].
pub fn resolve_tau(spec: &TauSpec, k: usize, p: usize) -> Result<TauMatrix> {
    spec.resolve(k, p)
}

fn levels(taus: &[f64]) -> Result<Vec<AsymmetryLevel>> {
    taus.iter().map(|&t| AsymmetryLevel::new(t)).collect()
}

/// `K × p` matrix of asymmetry levels; row `c` belongs to cluster `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauMatrix {
    k: usize,
    p: usize,
    values: Vec<AsymmetryLevel>,
}

impl TauMatrix {
    pub fn filled(k: usize, p: usize, tau: AsymmetryLevel) -> Self {
        TauMatrix {
            k,
            p,
            values: vec![tau; k * p],
        }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let k = rows.len();
        let p = rows.first().map_or(0, |r| r.as_ref().len());
        if k == 0 || p == 0 {
            return Err(Error::InvalidParameter(
                "tau matrix must be nonempty".into(),
            ));
        }
        let mut values = Vec::with_capacity(k * p);
        for r in rows {
            let r = r.as_ref();
            if r.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    actual: r.len(),
                    context: "tau matrix row",
                });
            }
            values.extend(levels(r)?);
        }
        Ok(TauMatrix { k, p, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn row(&self, c: usize) -> &[AsymmetryLevel] {
        &self.values[c * self.p..(c + 1) * self.p]
    }

    #[inline]
    pub fn get(&self, c: usize, j: usize) -> AsymmetryLevel {
        self.values[c * self.p + j]
    }

    pub(crate) fn set(&mut self, c: usize, j: usize, tau: AsymmetryLevel) {
        self.values[c * self.p + j] = tau;
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[AsymmetryLevel]> + '_ {
        self.values.chunks_exact(self.p)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows()
            .map(|r| r.iter().map(|t| t.value()).collect())
            .collect()
    }
}

/// How the adaptive scheme re-estimates τ from a cluster and its center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauUpdateRule {
    /// `τ/(1−τ) = Σ₍ₓ<θ₎(θ−x) / Σ₍ₓ>θ₎(x−θ)`: the level at which θ is the exact expectile.
    #[default]
    Consistent,
    /// The count-weighted ratio `n⁻·Σ₍ₓ<θ₎(θ−x) / (n⁺·Σ₍ₓ>θ₎(x−θ))`.
    CountWeighted,
}

/// Iteration controls shared by all engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterConfig {
    pub seed: u64,
    pub max_iter: usize,
    /// Stop once the ∞-norm of the centroid change is at most `tol`.
    pub tol: f64,
    pub laws: LawsConfig,
    pub tau_update: TauUpdateRule,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            seed: 0,
            max_iter: 300,
            tol: 1e-6,
            laws: LawsConfig::default(),
            tau_update: TauUpdateRule::default(),
        }
    }
}

impl ClusterConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    pub membership: Membership,
    pub centroids: CentroidSet,
    pub tau: TauMatrix,
    /// Objective after each outer iteration.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
}

impl ClusterResult {
    pub fn objective(&self) -> f64 {
        self.objective_trace.last().copied().unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_scalar() {
        let m = TauSpec::scalar(0.5).unwrap().resolve(2, 3).unwrap();
        assert_eq!(m.to_rows(), vec![vec![0.5; 3]; 2]);
    }

    #[test]
    fn resolve_per_cluster_group_levels() {
        let m = TauSpec::per_cluster(&[0.2, 0.7, 0.1, 0.9])
            .unwrap()
            .resolve(4, 3)
            .unwrap();
        for (row, t) in m.to_rows().iter().zip([0.2, 0.7, 0.1, 0.9]) {
            assert_eq!(row, &vec![t; 3]);
        }
    }

    #[test]
    fn resolve_per_dimension_levels() {
        let m = TauSpec::per_dimension(&[0.1, 0.8, 0.9])
            .unwrap()
            .resolve(4, 3)
            .unwrap();
        assert_eq!(m.to_rows(), vec![vec![0.1, 0.8, 0.9]; 4]);
    }

    #[test]
    fn resolve_rejects_shape_mismatch() {
        assert!(TauSpec::per_dimension(&[0.1, 0.2])
            .unwrap()
            .resolve(2, 3)
            .is_err());
        assert!(TauSpec::per_cluster(&[0.1, 0.2])
            .unwrap()
            .resolve(3, 2)
            .is_err());
        let full = TauMatrix::from_rows(&[[0.3, 0.4]]).unwrap();
        assert!(TauSpec::Full(full.clone()).resolve(2, 2).is_err());
        assert_eq!(TauSpec::Full(full.clone()).resolve(1, 2).unwrap(), full);
    }

    #[test]
    fn tau_spec_validates_levels() {
        assert!(TauSpec::scalar(1.0).is_err());
        assert!(TauSpec::per_cluster(&[0.2, 0.0]).is_err());
        assert!(TauMatrix::from_rows(&[[0.5, 1.2]]).is_err());
    }

    #[test]
    fn membership_checks_labels() {
        assert!(Membership::new(vec![0, 2], 2).is_err());
        let m = Membership::from_labels(vec![0, 2]);
        assert_eq!(m.k(), 3);
        assert_eq!(m.cluster_sizes(), vec![1, 0, 1]);
    }
}

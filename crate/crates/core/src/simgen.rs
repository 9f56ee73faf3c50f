//! Seeded generators for the synthetic benchmark families, with ground-truth labels.
//!
//! Every dataset stores its clusters as contiguous row blocks: cluster 0 first,
//! then cluster 1, and so on. Sizes are equal up to one (the first `n mod k`
//! clusters get the extra row). A generator is a pure function of its
//! [`SampleSpec`], seed included.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, ChiSquared, Distribution, Normal, StandardNormal};

use crate::clustering::{rng_from_seed, Membership};
use crate::error::{Error, Result};
use crate::expectile::AsymmetryLevel;
use crate::matrix::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gaussian,
    AsymNormal,
    Beta,
    SkewedT,
    FDist,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::AsymNormal => "asymnormal",
            Family::Beta => "beta",
            Family::SkewedT => "skewt",
            Family::FDist => "f",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Family::Gaussian),
            "asymnormal" => Ok(Family::AsymNormal),
            "beta" => Ok(Family::Beta),
            "skewt" => Ok(Family::SkewedT),
            "f" => Ok(Family::FDist),
            other => Err(Error::InvalidParameter(format!(
                "unknown family {other:?} (expected gaussian, asymnormal, beta, skewt or f)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSpec {
    pub family: Family,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(family: Family, n: usize, p: usize, k: usize, seed: u64) -> Self {
        SampleSpec {
            family,
            n,
            p,
            k,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.n < self.k {
            return Err(Error::InvalidParameter(format!(
                "need n >= k >= 1, got n={} k={}",
                self.n, self.k
            )));
        }
        if self.p == 0 {
            return Err(Error::InvalidParameter("p must be at least 1".into()));
        }
        if matches!(self.family, Family::Beta | Family::SkewedT | Family::FDist) && self.k != 3 {
            return Err(Error::InvalidParameter(format!(
                "family {} requires k = 3, got {}",
                self.family, self.k
            )));
        }
        if self.family == Family::SkewedT && !self.p.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "family skewt requires an even dimension, got p={}",
                self.p
            )));
        }
        Ok(())
    }

    fn expect_family(&self, family: Family) -> Result<()> {
        if self.family != family {
            return Err(Error::InvalidParameter(format!(
                "spec family {} passed to the {} generator",
                self.family, family
            )));
        }
        self.validate()
    }

    /// Per-cluster sizes, differing by at most one.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let base = self.n / self.k;
        let extra = self.n % self.k;
        (0..self.k).map(|c| base + usize::from(c < extra)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub data: DataMatrix,
    pub labels: Membership,
    pub spec: SampleSpec,
}

/// Generate a dataset for any family.
pub fn generate(spec: &SampleSpec) -> Result<LabeledDataset> {
    match spec.family {
        Family::Gaussian => gen_gaussian(spec),
        Family::AsymNormal => gen_asym_normal(spec),
        Family::Beta => gen_beta(spec),
        Family::SkewedT => gen_skewed_t(spec),
        Family::FDist => gen_f(spec),
    }
}

/// Fills rows cluster by cluster; `draw(rng, cluster, dim)` yields one entry.
fn fill<F>(spec: &SampleSpec, rng: &mut ChaCha8Rng, mut draw: F) -> Result<LabeledDataset>
where
    F: FnMut(&mut ChaCha8Rng, usize, usize) -> f64,
{
    let mut values = Vec::with_capacity(spec.n * spec.p);
    let mut labels = Vec::with_capacity(spec.n);
    for (c, size) in spec.cluster_sizes().into_iter().enumerate() {
        for _ in 0..size {
            for j in 0..spec.p {
                values.push(draw(rng, c, j));
            }
            labels.push(c);
        }
    }
    Ok(LabeledDataset {
        data: DataMatrix::from_flat(spec.n, spec.p, values)?,
        labels: Membership::new(labels, spec.k)?,
        spec: *spec,
    })
}

/// Unit-variance Gaussian clusters. The first mean has integer coordinates
/// drawn from `1..=10`; cluster `c` (0-based) is shifted by `2c` in every coordinate.
pub fn gen_gaussian(spec: &SampleSpec) -> Result<LabeledDataset> {
    spec.expect_family(Family::Gaussian)?;
    let mut rng = rng_from_seed(spec.seed);
    let base: Vec<f64> = (0..spec.p).map(|_| rng.gen_range(1..=10) as f64).collect();
    fill(spec, &mut rng, |rng, c, j| {
        let z: f64 = rng.sample(StandardNormal);
        base[j] + 2.0 * c as f64 + z
    })
}

/// Map a centered Gaussian draw onto the asymmetric normal whose τ-expectile is `e_tau`.
pub fn asym_normal_transform(z: f64, tau: AsymmetryLevel, e_tau: f64) -> f64 {
    let t = tau.value();
    let (sl, sr) = ((1.0 - t).sqrt(), t.sqrt());
    let coefficient = if z < 0.0 {
        2.0 * sr / ((sl + sr) * sl)
    } else {
        2.0 * sl / ((sl + sr) * sr)
    };
    coefficient * z + e_tau
}

/// Parameters drawn by [`gen_asym_normal_detailed`], indexed `[cluster][dim]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymNormalParams {
    pub tau: Vec<Vec<f64>>,
    pub location: Vec<Vec<f64>>,
}

pub fn gen_asym_normal(spec: &SampleSpec) -> Result<LabeledDataset> {
    gen_asym_normal_detailed(spec, None).map(|(d, _)| d)
}

/// Asymmetric-normal clusters built from `N(0, 25)` draws.
///
/// Each (cluster, dim) draws its level from `U[0.1, 0.9]` unless `forced_tau`
/// is given. Cluster-0 locations are `U(0, 10)`; cluster `c` adds
/// `7·(−1)^(j+1)·c` in dimension `j` (0-based).
pub fn gen_asym_normal_detailed(
    spec: &SampleSpec,
    forced_tau: Option<AsymmetryLevel>,
) -> Result<(LabeledDataset, AsymNormalParams)> {
    spec.expect_family(Family::AsymNormal)?;
    let mut rng = rng_from_seed(spec.seed);
    let tau: Vec<Vec<f64>> = (0..spec.k)
        .map(|_| {
            (0..spec.p)
                .map(|_| match forced_tau {
                    Some(t) => t.value(),
                    None => rng.gen_range(0.1..=0.9),
                })
                .collect()
        })
        .collect();
    let base: Vec<f64> = (0..spec.p).map(|_| rng.gen_range(0.0..10.0)).collect();
    let location: Vec<Vec<f64>> = (0..spec.k)
        .map(|c| {
            base.iter()
                .enumerate()
                .map(|(j, &e)| {
                    // 1-based dimension index m = j + 1, sign (−1)^m.
                    let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
                    e + 7.0 * sign * c as f64
                })
                .collect()
        })
        .collect();
    let levels: Vec<Vec<AsymmetryLevel>> = tau
        .iter()
        .map(|row| row.iter().map(|&t| AsymmetryLevel::new(t)).collect())
        .collect::<Result<_>>()?;
    let normal = Normal::new(0.0, 5.0).expect("valid normal");
    let dataset = fill(spec, &mut rng, |rng, c, j| {
        asym_normal_transform(normal.sample(rng), levels[c][j], location[c][j])
    })?;
    Ok((dataset, AsymNormalParams { tau, location }))
}

/// Beta parameters drawn by [`gen_beta_detailed`], per dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

pub fn gen_beta(spec: &SampleSpec) -> Result<LabeledDataset> {
    gen_beta_detailed(spec).map(|(d, _)| d)
}

/// Beta clusters with `a_j ∈ 1..=10`, `b_j ∈ 10..=20`. Odd clusters (1-based)
/// draw every dimension from `Beta(a_j, b_j)`, even clusters from `Beta(b_j, a_j)`.
pub fn gen_beta_detailed(spec: &SampleSpec) -> Result<(LabeledDataset, BetaParams)> {
    spec.expect_family(Family::Beta)?;
    let mut rng = rng_from_seed(spec.seed);
    let a: Vec<f64> = (0..spec.p).map(|_| rng.gen_range(1..=10) as f64).collect();
    let b: Vec<f64> = (0..spec.p).map(|_| rng.gen_range(10..=20) as f64).collect();
    let odd: Vec<Beta<f64>> = (0..spec.p)
        .map(|j| Beta::new(a[j], b[j]).expect("positive shapes"))
        .collect();
    let even: Vec<Beta<f64>> = (0..spec.p)
        .map(|j| Beta::new(b[j], a[j]).expect("positive shapes"))
        .collect();
    let dataset = fill(spec, &mut rng, |rng, c, j| {
        // c is 0-based, so c even means an odd 1-based cluster.
        if c % 2 == 0 {
            odd[j].sample(rng)
        } else {
            even[j].sample(rng)
        }
    })?;
    Ok((dataset, BetaParams { a, b }))
}

/// Noncentral t variate `(Z + nc) / sqrt(χ²_df / df)`.
pub fn noncentral_t<R: Rng + ?Sized>(rng: &mut R, chi: &ChiSquared<f64>, df: f64, nc: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    (z + nc) / (chi.sample(rng) / df).sqrt()
}

/// Shape of the skewed-t family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewedTParams {
    pub df: f64,
    pub noncentrality: [f64; 3],
    pub scale: f64,
    pub base_location: [[f64; 2]; 3],
    /// Half-width of the uniform jitter applied to each block's location.
    pub jitter: f64,
}

impl Default for SkewedTParams {
    fn default() -> Self {
        SkewedTParams {
            df: 10.0,
            noncentrality: [3.0, -1.5, 2.5],
            scale: 0.5,
            base_location: [[0.0, 2.0], [1.0, 0.0], [0.5, 1.0]],
            jitter: 0.5,
        }
    }
}

pub fn gen_skewed_t(spec: &SampleSpec) -> Result<LabeledDataset> {
    gen_skewed_t_with(spec, &SkewedTParams::default()).map(|(d, _)| d)
}

/// Skewed-t clusters built from two-dimensional blocks repeated up to `p`.
///
/// Block `b` of cluster `c` is `scale·T + loc` with `T` noncentral t and
/// `loc` the cluster's base location plus fresh `U(−jitter, jitter)` noise.
/// Returns the jittered locations, indexed `[cluster][dim]`.
pub fn gen_skewed_t_with(
    spec: &SampleSpec,
    params: &SkewedTParams,
) -> Result<(LabeledDataset, Vec<Vec<f64>>)> {
    spec.expect_family(Family::SkewedT)?;
    if !(params.df > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "df must be positive, got {}",
            params.df
        )));
    }
    let mut rng = rng_from_seed(spec.seed);
    let location: Vec<Vec<f64>> = (0..spec.k)
        .map(|c| {
            (0..spec.p)
                .map(|j| {
                    let jitter = if params.jitter > 0.0 {
                        rng.gen_range(-params.jitter..params.jitter)
                    } else {
                        0.0
                    };
                    params.base_location[c][j % 2] + jitter
                })
                .collect()
        })
        .collect();
    let chi = ChiSquared::new(params.df).expect("positive df");
    let dataset = fill(spec, &mut rng, |rng, c, j| {
        params.scale * noncentral_t(rng, &chi, params.df, params.noncentrality[c]) + location[c][j]
    })?;
    Ok((dataset, location))
}

/// `F(d1, d2)` variate as a ratio of scaled chi-square draws.
pub fn f_variate<R: Rng + ?Sized>(rng: &mut R, d1: f64, d2: f64) -> f64 {
    let x1 = ChiSquared::new(d1).expect("positive df").sample(rng) / d1;
    let x2 = ChiSquared::new(d2).expect("positive df").sample(rng) / d2;
    x1 / x2
}

/// Degrees of freedom and shift for every `[cluster][dim]` of the F family.
#[derive(Debug, Clone, PartialEq)]
pub struct FParams {
    pub d1: Vec<Vec<f64>>,
    pub d2: Vec<Vec<f64>>,
    pub shift: Vec<f64>,
}

pub fn gen_f(spec: &SampleSpec) -> Result<LabeledDataset> {
    gen_f_detailed(spec).map(|(d, _)| d)
}

/// Three F-distributed clusters; odd and even dimensions (1-based) swap roles.
///
/// * cluster 1: `F(a,a)+1` / `F(b,b)+1`, `a ∈ 51..=60`, `b ∈ 21..=30`
/// * cluster 2: `F(b,b)` / `F(a,a)`, `a ∈ 5..=15`, `b ∈ 25..=35`
/// * cluster 3: `F(a,b)` / `F(b,a)`, `a ∈ 15..=25`, `b ∈ 60..=70`
pub fn gen_f_detailed(spec: &SampleSpec) -> Result<(LabeledDataset, FParams)> {
    spec.expect_family(Family::FDist)?;
    let mut rng = rng_from_seed(spec.seed);
    let ranges = [
        ((51, 60), (21, 30)),
        ((5, 15), (25, 35)),
        ((15, 25), (60, 70)),
    ];
    let mut d1 = vec![vec![0.0; spec.p]; 3];
    let mut d2 = vec![vec![0.0; spec.p]; 3];
    for (c, &((alo, ahi), (blo, bhi))) in ranges.iter().enumerate() {
        for j in 0..spec.p {
            let a = rng.gen_range(alo..=ahi) as f64;
            let b = rng.gen_range(blo..=bhi) as f64;
            // j is 0-based: j even is an odd 1-based dimension.
            let odd_dim = j % 2 == 0;
            let (x, y) = match (c, odd_dim) {
                (0, true) => (a, a),
                (0, false) => (b, b),
                (1, true) => (b, b),
                (1, false) => (a, a),
                (_, true) => (a, b),
                (_, false) => (b, a),
            };
            d1[c][j] = x;
            d2[c][j] = y;
        }
    }
    let shift = vec![1.0, 0.0, 0.0];
    let dataset = fill(spec, &mut rng, |rng, c, j| {
        f_variate(rng, d1[c][j], d2[c][j]) + shift[c]
    })?;
    Ok((dataset, FParams { d1, d2, shift }))
}

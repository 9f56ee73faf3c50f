//! Clustering validation indices and image reconstruction error.

use crate::clustering::Membership;
use crate::error::{Error, Result};
use crate::io::RasterImage;
use crate::matrix::DataMatrix;

/// Cross-tabulation of two labelings: `counts[u][v]` observations have
/// predicted label `u` and reference label `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub n: u64,
}

pub fn contingency(pred: &Membership, truth: &Membership) -> Result<ContingencyTable> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            actual: pred.len(),
            context: "partition lengths",
        });
    }
    if pred.is_empty() {
        return Err(Error::InvalidParameter(
            "partitions must be nonempty".into(),
        ));
    }
    let mut counts = vec![vec![0u64; truth.k()]; pred.k()];
    for (&u, &v) in pred.labels().iter().zip(truth.labels()) {
        counts[u][v] += 1;
    }
    let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums = (0..truth.k())
        .map(|v| counts.iter().map(|r| r[v]).sum())
        .collect();
    Ok(ContingencyTable {
        counts,
        row_sums,
        col_sums,
        n: pred.len() as u64,
    })
}

fn pairs(m: u64) -> u64 {
    m * m.saturating_sub(1) / 2
}

/// Chance-corrected Rand index from the four pair counts.
///
/// `same_both`: pairs together in both partitions; `same_pred`, `same_truth`:
/// pairs together in each partition; `total`: all pairs. Two trivial
/// partitions that agree (both one block, or both all singletons) score 1.
pub fn ari_from_pair_counts(same_both: u64, same_pred: u64, same_truth: u64, total: u64) -> f64 {
    // Scaled by 2·total so the ratio is formed from exact integers and rounded once.
    let (index, a, b, total) = (
        i128::from(same_both),
        i128::from(same_pred),
        i128::from(same_truth),
        i128::from(total),
    );
    let numerator = 2 * index * total - 2 * a * b;
    let denominator = (a + b) * total - 2 * a * b;
    if denominator == 0 {
        return 1.0;
    }
    numerator as f64 / denominator as f64
}

/// Adjusted Rand Index between two partitions of the same observations.
pub fn adjusted_rand_index(pred: &Membership, truth: &Membership) -> Result<f64> {
    let table = contingency(pred, truth)?;
    if table.n < 2 {
        return Err(Error::InvalidParameter(
            "adjusted Rand index needs at least two observations".into(),
        ));
    }
    let same_both = table.counts.iter().flatten().map(|&c| pairs(c)).sum();
    let same_pred = table.row_sums.iter().map(|&c| pairs(c)).sum();
    let same_truth = table.col_sums.iter().map(|&c| pairs(c)).sum();
    Ok(ari_from_pair_counts(
        same_both,
        same_pred,
        same_truth,
        pairs(table.n),
    ))
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_partition(data: &DataMatrix, membership: &Membership) -> Result<Vec<Vec<usize>>> {
    if membership.len() != data.nrows() {
        return Err(Error::DimensionMismatch {
            expected: data.nrows(),
            actual: membership.len(),
            context: "membership length",
        });
    }
    let groups: Vec<Vec<usize>> = membership
        .groups()
        .into_iter()
        .filter(|g| !g.is_empty())
        .collect();
    if groups.len() < 2 {
        return Err(Error::TooFewClusters {
            needed: 2,
            actual: groups.len(),
        });
    }
    Ok(groups)
}

/// Mean silhouette width over all observations (Euclidean distance).
///
/// Observations in singleton clusters contribute 0, as do observations with
/// `a = b = 0`. Empty cluster ids are ignored.
pub fn silhouette(data: &DataMatrix, membership: &Membership) -> Result<f64> {
    let groups = check_partition(data, membership)?;
    let mut owner = vec![0usize; data.nrows()];
    for (g, rows) in groups.iter().enumerate() {
        for &i in rows {
            owner[i] = g;
        }
    }
    let mut total = 0.0;
    let mut sums = vec![0.0; groups.len()];
    for i in 0..data.nrows() {
        let own = owner[i];
        if groups[own].len() == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        let x = data.row(i);
        for (j, y) in data.rows().enumerate() {
            if j != i {
                sums[owner[j]] += euclidean(x, y);
            }
        }
        let a = sums[own] / (groups[own].len() - 1) as f64;
        let b = groups
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != own)
            .map(|(g, rows)| sums[g] / rows.len() as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / data.nrows() as f64)
}

/// Davies–Bouldin index (Euclidean distance to cluster means). Lower is better.
pub fn davies_bouldin(data: &DataMatrix, membership: &Membership) -> Result<f64> {
    let groups = check_partition(data, membership)?;
    let p = data.ncols();
    let means: Vec<Vec<f64>> = groups
        .iter()
        .map(|rows| {
            let mut m = vec![0.0; p];
            for &i in rows {
                for (acc, &x) in m.iter_mut().zip(data.row(i)) {
                    *acc += x;
                }
            }
            m.iter_mut().for_each(|v| *v /= rows.len() as f64);
            m
        })
        .collect();
    let spreads: Vec<f64> = groups
        .iter()
        .zip(&means)
        .map(|(rows, m)| {
            rows.iter().map(|&i| euclidean(data.row(i), m)).sum::<f64>() / rows.len() as f64
        })
        .collect();
    let k = groups.len();
    let mut total = 0.0;
    for a in 0..k {
        let mut worst = 0.0f64;
        for b in 0..k {
            if a == b {
                continue;
            }
            let d = euclidean(&means[a], &means[b]);
            if d == 0.0 {
                return Err(Error::CoincidentMeans(a.min(b), a.max(b)));
            }
            worst = worst.max((spreads[a] + spreads[b]) / d);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

/// Mean squared pixel error, computed per channel and averaged over the three channels.
pub fn mse_image(original: &RasterImage, approx: &RasterImage) -> Result<f64> {
    if original.width() != approx.width() || original.height() != approx.height() {
        return Err(Error::DimensionMismatch {
            expected: original.width() * original.height(),
            actual: approx.width() * approx.height(),
            context: "image dimensions",
        });
    }
    let mut per_channel = [0.0f64; 3];
    for (a, b) in original.pixels().iter().zip(approx.pixels()) {
        for ch in 0..3 {
            let d = f64::from(a[ch]) - f64::from(b[ch]);
            per_channel[ch] += d * d;
        }
    }
    let count = original.pixels().len() as f64;
    Ok(per_channel.iter().map(|s| s / count).sum::<f64>() / 3.0)
}

/// Peak signal-to-noise ratio in decibels. Zero error is reported as [`Error::InfinitePsnr`].
pub fn psnr(mse: f64, max_value: f64) -> Result<f64> {
    if mse == 0.0 {
        return Err(Error::InfinitePsnr);
    }
    if !(mse > 0.0) || !(max_value > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "psnr needs positive mse and max value, got {mse} and {max_value}"
        )));
    }
    Ok(10.0 * (max_value * max_value / mse).log10())
}

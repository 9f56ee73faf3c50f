use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clustering::types::CentroidSet;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn check_k(data: &DataMatrix, k: usize) -> Result<()> {
    if k == 0 || k > data.nrows() {
        return Err(Error::InvalidK { k, n: data.nrows() });
    }
    Ok(())
}

fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// k-means++ seeding: first center uniform, each further center drawn with
/// probability proportional to its squared distance from the nearest chosen
/// center. When every remaining point coincides with a chosen center, the
/// next center is the lowest-index point not yet chosen.
pub fn kmeanspp_seeds(data: &DataMatrix, k: usize, seed: u64) -> Result<CentroidSet> {
    check_k(data, k)?;
    let n = data.nrows();
    let mut rng = rng_from_seed(seed);
    let mut chosen = Vec::with_capacity(k);
    let mut taken = vec![false; n];

    let first = rng.gen_range(0..n);
    chosen.push(first);
    taken[first] = true;
    let mut nearest: Vec<f64> = data
        .rows()
        .map(|r| squared_euclidean(r, data.row(first)))
        .collect();

    while chosen.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in nearest.iter().enumerate() {
                acc += d;
                if d > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave the target just past the last positive weight.
            pick.unwrap_or_else(|| nearest.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            taken.iter().position(|&t| !t).unwrap()
        };
        chosen.push(next);
        taken[next] = true;
        for (i, row) in data.rows().enumerate() {
            let d = squared_euclidean(row, data.row(next));
            if d < nearest[i] {
                nearest[i] = d;
            }
        }
    }

    let rows: Vec<&[f64]> = chosen.iter().map(|&i| data.row(i)).collect();
    CentroidSet::from_rows(&rows)
}

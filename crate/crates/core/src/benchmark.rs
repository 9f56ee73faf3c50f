//! Repeated-simulation benchmarks scored by the adjusted Rand index.
//!
//! Repetition `r` (0-based) regenerates the data with seed `seed + r` and runs
//! every algorithm with that same seed. Results are aggregated in repetition
//! order, so a parallel run yields the same report bytes as a sequential one.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::clustering::{adaptive_tau_cluster, kmeans, ClusterConfig};
use crate::error::{Error, Result};
use crate::metrics::adjusted_rand_index;
use crate::simgen::{generate, Family, SampleSpec};

/// Column order of the report table.
pub const REPORT_COLUMNS: &str = "family,n,p,k,algorithm,mean_ari_x100,std_ari_x100,reps,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Adaptive-τ K-expectile clustering.
    KExpectile,
    KMeans,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::KExpectile => "kexpectile",
            Algorithm::KMeans => "kmeans",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "kexpectile" => Ok(Algorithm::KExpectile),
            "kmeans" => Ok(Algorithm::KMeans),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm {other:?} (expected kexpectile or kmeans)"
            ))),
        }
    }
}

/// Parse a comma-separated algorithm list such as `kexpectile,kmeans`.
pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>> {
    let algorithms: Vec<Algorithm> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if algorithms.is_empty() {
        return Err(Error::InvalidParameter("algorithm list is empty".into()));
    }
    Ok(algorithms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkPlan {
    pub family: Family,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub reps: usize,
    pub algorithms: Vec<Algorithm>,
    /// Base seed; repetition `r` uses `seed + r`.
    pub seed: u64,
    /// Iteration controls for every run. Its `seed` field is overridden per repetition.
    pub config: ClusterConfig,
}

impl BenchmarkPlan {
    pub fn new(family: Family, n: usize, p: usize, k: usize, reps: usize, seed: u64) -> Self {
        BenchmarkPlan {
            family,
            n,
            p,
            k,
            reps,
            algorithms: vec![Algorithm::KExpectile, Algorithm::KMeans],
            seed,
            config: ClusterConfig::default(),
        }
    }

    pub fn rep_seed(&self, rep: usize) -> u64 {
        self.seed.wrapping_add(rep as u64)
    }

    fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParameter("algorithm list is empty".into()));
        }
        SampleSpec::new(self.family, self.n, self.p, self.k, self.seed).validate()
    }
}

/// Aggregate for one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub algorithm: Algorithm,
    pub mean_ari_x100: f64,
    /// Sample standard deviation (denominator `reps − 1`); 0 when `reps = 1`.
    pub std_ari_x100: f64,
    /// ARI×100 of every repetition, in repetition order.
    pub per_rep: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub plan: BenchmarkPlan,
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkReport {
    pub fn row(&self, algorithm: Algorithm) -> Option<&BenchmarkRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }

    /// Render as CSV: two `#` comment lines, the header, then one row per algorithm.
    pub fn to_csv(&self) -> String {
        let plan = &self.plan;
        let mut out = String::new();
        let last = plan.rep_seed(plan.reps - 1);
        let _ = writeln!(
            out,
            "# repetition r in 0..{} uses seed {}+r for data and clustering (seeds {}..={})",
            plan.reps, plan.seed, plan.seed, last
        );
        let _ = writeln!(
            out,
            "# ari_x100 = 100 * adjusted Rand index against the generating labels"
        );
        let _ = writeln!(out, "{REPORT_COLUMNS}");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.6},{:.6},{},{}",
                plan.family,
                plan.n,
                plan.p,
                plan.k,
                row.algorithm,
                row.mean_ari_x100,
                row.std_ari_x100,
                plan.reps,
                plan.seed
            );
        }
        out
    }
}

fn run_rep(plan: &BenchmarkPlan, rep: usize) -> Result<Vec<f64>> {
    let seed = plan.rep_seed(rep);
    let data = generate(&SampleSpec::new(plan.family, plan.n, plan.p, plan.k, seed))?;
    let config = plan.config.with_seed(seed);
    plan.algorithms
        .iter()
        .map(|alg| {
            let result = match alg {
                Algorithm::KExpectile => adaptive_tau_cluster(&data.data, plan.k, &config)?,
                Algorithm::KMeans => kmeans(&data.data, plan.k, &config)?,
            };
            Ok(100.0 * adjusted_rand_index(&result.membership, &data.labels)?)
        })
        .collect()
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Run every repetition, in parallel when `parallel` is set.
pub fn run_benchmark(plan: &BenchmarkPlan, parallel: bool) -> Result<BenchmarkReport> {
    plan.validate()?;
    let scores: Vec<Vec<f64>> = if parallel {
        (0..plan.reps)
            .into_par_iter()
            .map(|r| run_rep(plan, r))
            .collect::<Result<_>>()?
    } else {
        (0..plan.reps)
            .map(|r| run_rep(plan, r))
            .collect::<Result<_>>()?
    };
    let rows = plan
        .algorithms
        .iter()
        .enumerate()
        .map(|(a, &algorithm)| {
            let per_rep: Vec<f64> = scores.iter().map(|s| s[a]).collect();
            let (mean_ari_x100, std_ari_x100) = mean_and_std(&per_rep);
            BenchmarkRow {
                algorithm,
                mean_ari_x100,
                std_ari_x100,
                per_rep,
            }
        })
        .collect();
    Ok(BenchmarkReport {
        plan: plan.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for alg in [Algorithm::KExpectile, Algorithm::KMeans] {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
        }
        assert!("ward".parse::<Algorithm>().is_err());
        assert_eq!(
            parse_algorithms("kexpectile,kmeans").unwrap(),
            vec![Algorithm::KExpectile, Algorithm::KMeans]
        );
        assert!(parse_algorithms("").is_err());
        assert!(parse_algorithms("kmeans,spectral").is_err());
    }

    #[test]
    fn single_rep_has_zero_std() {
        let mut plan = BenchmarkPlan::new(Family::Gaussian, 60, 2, 3, 1, 7);
        plan.algorithms = vec![Algorithm::KMeans];
        let report = run_benchmark(&plan, false).unwrap();
        let row = report.row(Algorithm::KMeans).unwrap();
        assert_eq!(row.std_ari_x100, 0.0);
        assert_eq!(row.per_rep.len(), 1);
        assert_eq!(row.mean_ari_x100, row.per_rep[0]);
    }

    #[test]
    fn report_layout() {
        let plan = BenchmarkPlan::new(Family::Gaussian, 60, 2, 3, 3, 10);
        let csv = run_benchmark(&plan, false).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with('#') && lines[0].contains("seeds 10..=12"));
        assert_eq!(lines[2], REPORT_COLUMNS);
        assert!(lines[3].starts_with("gaussian,60,2,3,kexpectile,"));
        assert!(lines[4].starts_with("gaussian,60,2,3,kmeans,"));
        assert!(lines[4].ends_with(",3,10"));
    }

    #[test]
    fn parallel_matches_sequential() {
        let plan = BenchmarkPlan::new(Family::AsymNormal, 90, 4, 3, 6, 3);
        let a = run_benchmark(&plan, true).unwrap();
        let b = run_benchmark(&plan, false).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn rejects_bad_plans() {
        let plan = BenchmarkPlan::new(Family::Gaussian, 60, 2, 3, 0, 1);
        assert!(run_benchmark(&plan, false).is_err());
        let plan = BenchmarkPlan::new(Family::SkewedT, 60, 3, 3, 2, 1);
        assert!(run_benchmark(&plan, false).is_err());
    }
}

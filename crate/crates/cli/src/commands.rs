use std::fs;

use anyhow::{bail, ensure, Context, Result};
use kexpectile::benchmark::{parse_algorithms, run_benchmark, BenchmarkPlan};
use kexpectile::clustering::{
    adaptive_tau_cluster, fixed_tau_cluster, kmeans, ClusterConfig, ClusterResult, TauSpec,
    TauUpdateRule,
};
use kexpectile::io::{
    read_csv_matrix, read_labels_csv, read_ppm, scale_by_std, write_labels_csv, write_matrix_csv,
    write_ppm, write_rows_csv,
};
use kexpectile::metrics::{adjusted_rand_index, davies_bouldin, silhouette};
use kexpectile::segment::{segment_image, segment_quality, SegmentMode};
use kexpectile::simgen::{generate, Family, SampleSpec};
use kexpectile::DataMatrix;

use crate::tau_spec::parse_tau_spec;
use crate::{
    BenchmarkArgs, ClusterArgs, EvalArgs, Metric, Mode, SegmentArgs, SimulateArgs, TauUpdate,
};

fn tau_rule(update: TauUpdate) -> TauUpdateRule {
    match update {
        TauUpdate::Consistent => TauUpdateRule::Consistent,
        TauUpdate::PaperLiteral => TauUpdateRule::CountWeighted,
    }
}

/// `--tau` must be present exactly when the mode is `fixed`.
fn tau_for_mode(mode: Mode, tau: Option<&str>) -> Result<Option<TauSpec>> {
    match (mode, tau) {
        (Mode::Fixed, Some(spec)) => Ok(Some(parse_tau_spec(spec).context("--tau")?)),
        (Mode::Fixed, None) => bail!("--tau is required with --mode fixed"),
        (_, Some(_)) => bail!("--tau is only accepted with --mode fixed"),
        (_, None) => Ok(None),
    }
}

fn parse_family(name: &str) -> Result<Family> {
    name.parse().context("--family")
}

fn warn_if_unconverged(result: &ClusterResult) {
    if !result.converged {
        eprintln!(
            "warning: stopped after {} iterations without meeting the tolerance",
            result.iterations
        );
    }
}

pub fn cluster(args: &ClusterArgs) -> Result<()> {
    let tau = tau_for_mode(args.mode, args.tau.as_deref())?;
    let raw = read_csv_matrix(&args.input, args.header)
        .with_context(|| format!("--input {}", args.input.display()))?;
    let (data, scaling) = if args.scale {
        let (scaled, scaling) = scale_by_std(&raw).context("--scale")?;
        (scaled, Some(scaling))
    } else {
        (raw, None)
    };
    let config = ClusterConfig {
        seed: args.seed,
        max_iter: args.max_iter,
        tol: args.tol,
        tau_update: tau_rule(args.tau_update),
        ..ClusterConfig::default()
    };
    let result = match (args.mode, &tau) {
        (Mode::Kmeans, _) => kmeans(&data, args.k, &config),
        (Mode::Fixed, Some(spec)) => fixed_tau_cluster(&data, args.k, spec, &config),
        (Mode::Adaptive, _) => adaptive_tau_cluster(&data, args.k, &config),
        (Mode::Fixed, None) => unreachable!("checked by tau_for_mode"),
    }
    .with_context(|| format!("clustering with --k {}", args.k))?;
    warn_if_unconverged(&result);

    write_labels_csv(&args.labels_out, &result.membership)
        .with_context(|| format!("--labels-out {}", args.labels_out.display()))?;
    // Centers are reported in the units of the input file.
    let centers = DataMatrix::from_flat(
        result.centroids.k(),
        data.ncols(),
        result.centroids.as_flat().to_vec(),
    )?;
    let centers = match &scaling {
        Some(s) => s.unscale(&centers)?,
        None => centers,
    };
    write_matrix_csv(&args.centers_out, &centers)
        .with_context(|| format!("--centers-out {}", args.centers_out.display()))?;
    if let Some(path) = &args.tau_out {
        write_rows_csv(path, None, result.tau.to_rows())
            .with_context(|| format!("--tau-out {}", path.display()))?;
    }

    println!("objective: {}", result.objective());
    println!("iterations: {}", result.iterations);
    println!("converged: {}", result.converged);
    if args.k >= 2 {
        println!("silhouette: {}", silhouette(&data, &result.membership)?);
        println!(
            "davies_bouldin: {}",
            davies_bouldin(&data, &result.membership)?
        );
    }
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let spec = SampleSpec::new(
        parse_family(&args.family)?,
        args.n,
        args.p,
        args.kclusters,
        args.seed,
    );
    let ds = generate(&spec)?;
    write_matrix_csv(&args.data_out, &ds.data)
        .with_context(|| format!("--data-out {}", args.data_out.display()))?;
    write_labels_csv(&args.labels_out, &ds.labels)
        .with_context(|| format!("--labels-out {}", args.labels_out.display()))?;
    Ok(())
}

pub fn benchmark(args: &BenchmarkArgs) -> Result<()> {
    let mut plan = BenchmarkPlan::new(
        parse_family(&args.family)?,
        args.n,
        args.p,
        args.kclusters,
        args.reps,
        args.seed,
    );
    plan.algorithms = parse_algorithms(&args.algorithms).context("--algorithms")?;
    plan.config.tau_update = tau_rule(args.tau_update);
    let report = run_benchmark(&plan, true)?;
    fs::write(&args.report, report.to_csv())
        .with_context(|| format!("--report {}", args.report.display()))?;
    Ok(())
}

pub fn segment(args: &SegmentArgs) -> Result<()> {
    let tau = tau_for_mode(args.mode, args.tau.as_deref())?;
    let image =
        read_ppm(&args.image).with_context(|| format!("--image {}", args.image.display()))?;
    let mode = match (args.mode, tau) {
        (Mode::Kmeans, _) => SegmentMode::KMeans,
        (Mode::Fixed, Some(spec)) => SegmentMode::Fixed(spec),
        (Mode::Adaptive, _) => SegmentMode::Adaptive,
        (Mode::Fixed, None) => unreachable!("checked by tau_for_mode"),
    };
    let config = ClusterConfig {
        seed: args.seed,
        tau_update: tau_rule(args.tau_update),
        ..ClusterConfig::default()
    };
    let seg = segment_image(&image, args.k, &mode, &config)
        .with_context(|| format!("segmenting with --k {}", args.k))?;
    warn_if_unconverged(&seg.result);
    let out = match args.only_cluster {
        Some(c) => seg.only_cluster(c).context("--only-cluster")?,
        None => seg.image.clone(),
    };
    write_ppm(&args.out, &out).with_context(|| format!("--out {}", args.out.display()))?;
    if args.metrics {
        let q = segment_quality(&image, &seg.image)?;
        println!("rgb_mse: {:.6}", q.rgb_mse);
        println!("rgb_psnr: {:.6}", q.rgb_psnr);
        println!("gray_mse: {:.6}", q.gray_mse);
        println!("gray_psnr: {:.6}", q.gray_psnr);
    }
    Ok(())
}

pub fn eval(args: &EvalArgs) -> Result<()> {
    let pred =
        read_labels_csv(&args.pred).with_context(|| format!("--pred {}", args.pred.display()))?;
    let truth = read_labels_csv(&args.truth)
        .with_context(|| format!("--truth {}", args.truth.display()))?;
    ensure!(
        pred.len() == truth.len(),
        "--pred has {} labels but --truth has {}",
        pred.len(),
        truth.len()
    );
    match args.metric {
        Metric::Ari => println!("{:.6}", adjusted_rand_index(&pred, &truth)?),
    }
    Ok(())
}

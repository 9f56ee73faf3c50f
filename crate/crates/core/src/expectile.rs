//! Scalar and per-dimension expectile machinery.
//!
//! The τ-expectile of a sample minimizes the asymmetric quadratic loss
//! `τ·(u)₊² + (1−τ)·(−u)₊²`. Positive residuals (values above the center)
//! carry weight τ, negative residuals carry 1−τ, so τ=0.5 recovers the mean.

use crate::error::{Error, Result, Side};

/// Lower clamp bound applied to learned asymmetry levels. The upper bound is `1 - TAU_FLOOR`.
pub const TAU_FLOOR: f64 = 0.01;

/// An asymmetry level τ in the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[repr(transparent)]
pub struct AsymmetryLevel(f64);

impl AsymmetryLevel {
    pub const HALF: AsymmetryLevel = AsymmetryLevel(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(AsymmetryLevel(value))
        } else {
            Err(Error::InvalidTau(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Clamp into `[TAU_FLOOR, 1 - TAU_FLOOR]`.
    pub fn clamped(self) -> Self {
        AsymmetryLevel(self.0.clamp(TAU_FLOOR, 1.0 - TAU_FLOOR))
    }

    /// Weight of a residual `x - center` under this level. Values strictly
    /// below the center get `1 - τ`, all others `τ`.
    #[inline]
    pub fn weight(self, x: f64, center: f64) -> f64 {
        if x < center {
            1.0 - self.0
        } else {
            self.0
        }
    }
}

impl TryFrom<f64> for AsymmetryLevel {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        AsymmetryLevel::new(value)
    }
}

impl From<AsymmetryLevel> for f64 {
    fn from(tau: AsymmetryLevel) -> f64 {
        tau.0
    }
}

/// A nonempty, finite sample of reals.
#[derive(Debug, Clone, Copy)]
pub struct ValueSeries<'a>(&'a [f64]);

impl<'a> ValueSeries<'a> {
    pub fn new(values: &'a [f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(ValueSeries(values))
    }

    pub fn values(&self) -> &'a [f64] {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(self.0)
    }
}

/// Stopping rule for [`laws_expectile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawsConfig {
    /// Stop once `|μᵗ − μᵗ⁻¹| ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LawsConfig {
    fn default() -> Self {
        LawsConfig {
            tol: 1e-8,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectileEstimate {
    pub mu: f64,
    pub iterations: usize,
    pub foc_residual: f64,
    pub converged: bool,
}

/// Asymmetric quadratic loss `τ·(u)₊² + (1−τ)·(−u)₊²`.
#[inline]
pub fn rho_tau(u: f64, tau: AsymmetryLevel) -> f64 {
    if u > 0.0 {
        tau.0 * u * u
    } else {
        (1.0 - tau.0) * u * u
    }
}

/// Sum over coordinates of the τ-weighted squared difference between `x` and `theta`.
pub fn tau_distance(x: &[f64], theta: &[f64], tau: &[AsymmetryLevel]) -> Result<f64> {
    if theta.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: theta.len(),
            context: "theta",
        });
    }
    if tau.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: tau.len(),
            context: "tau",
        });
    }
    Ok(tau_distance_unchecked(x, theta, tau))
}

#[inline]
pub(crate) fn tau_distance_unchecked(x: &[f64], theta: &[f64], tau: &[AsymmetryLevel]) -> f64 {
    let mut acc = 0.0;
    for ((&xj, &tj), &tau_j) in x.iter().zip(theta).zip(tau) {
        let d = xj - tj;
        acc += tau_j.weight(xj, tj) * d * d;
    }
    acc
}

/// Empirical τ-expectile by the iterated weighted-mean (LAWS) fixed point.
///
/// Starts at the sample mean, then alternates weight assignment and the
/// closed-form weighted-mean update until successive iterates agree within
/// `config.tol`. Non-convergence is reported through
/// [`ExpectileEstimate::converged`].
pub fn laws_expectile(
    series: ValueSeries<'_>,
    tau: AsymmetryLevel,
    config: LawsConfig,
) -> ExpectileEstimate {
    let values = series.values();
    let (mu, iterations, converged) = laws_fixed_point(values, tau, config);
    ExpectileEstimate {
        mu,
        iterations,
        foc_residual: foc_residual_unchecked(values, tau, mu),
        converged,
    }
}

pub(crate) fn laws_fixed_point(
    values: &[f64],
    tau: AsymmetryLevel,
    config: LawsConfig,
) -> (f64, usize, bool) {
    let t = tau.value();
    let mut mu = mean(values);
    for iteration in 1..=config.max_iter {
        // Points at or below the center share the lower weight. Summing in index
        // order keeps τ = 0.5 bit-identical to the arithmetic mean.
        let (mut num, mut den) = (0.0, 0.0);
        for &x in values {
            let w = if x > mu { t } else { 1.0 - t };
            num += w * x;
            den += w;
        }
        let next = num / den;
        let delta = (next - mu).abs();
        mu = next;
        if delta <= config.tol {
            return (mu, iteration, true);
        }
    }
    (mu, config.max_iter, false)
}

/// Normalized first-order-condition residual of `mu` as the τ-expectile of `series`.
///
/// `|τ·Σ₍ₓ>μ₎(x−μ) − (1−τ)·Σ₍ₓ<μ₎(μ−x)| / Σ|x−μ|`, or 0 when every value equals `mu`.
pub fn foc_residual(series: ValueSeries<'_>, tau: AsymmetryLevel, mu: f64) -> f64 {
    foc_residual_unchecked(series.values(), tau, mu)
}

pub(crate) fn foc_residual_unchecked(values: &[f64], tau: AsymmetryLevel, mu: f64) -> f64 {
    let (above, below) = one_sided_deviations(values, mu);
    let total = above + below;
    if total <= f64::MIN_POSITIVE {
        return 0.0;
    }
    (tau.value() * above - (1.0 - tau.value()) * below).abs() / total
}

/// Level τ that makes `theta` the exact empirical τ-expectile of `series`, before clamping.
///
/// Solves `τ/(1−τ) = Σ₍ₓ<θ₎(θ−x) / Σ₍ₓ>θ₎(x−θ)`. Fails with [`Error::OneSided`]
/// unless values exist strictly on both sides of `theta`.
pub fn solve_tau_unclamped(series: ValueSeries<'_>, theta: f64) -> Result<AsymmetryLevel> {
    let (above, below) = one_sided_deviations(series.values(), theta);
    let tau = tau_from_deviation_sums(above, below)?;
    // Extreme ratios can round to exactly 0 or 1.
    Ok(AsymmetryLevel(tau.clamp(f64::EPSILON, 1.0 - f64::EPSILON)))
}

/// [`solve_tau_unclamped`] clamped to `[TAU_FLOOR, 1 − TAU_FLOOR]`.
pub fn solve_tau_for_center(series: ValueSeries<'_>, theta: f64) -> Result<AsymmetryLevel> {
    solve_tau_unclamped(series, theta).map(AsymmetryLevel::clamped)
}

fn tau_from_deviation_sums(above: f64, below: f64) -> Result<f64> {
    match (above > 0.0, below > 0.0) {
        (true, true) => {
            let gamma = below / above;
            Ok(gamma / (1.0 + gamma))
        }
        (true, false) => Err(Error::OneSided { side: Side::Above }),
        // No value above the center (covers the all-equal case as well).
        _ => Err(Error::OneSided { side: Side::Below }),
    }
}

/// `(Σ₍ₓ>c₎(x−c), Σ₍ₓ<c₎(c−x))`
pub(crate) fn one_sided_deviations(values: &[f64], center: f64) -> (f64, f64) {
    let mut above = 0.0;
    let mut below = 0.0;
    for &x in values {
        if x > center {
            above += x - center;
        } else if x < center {
            below += center - x;
        }
    }
    (above, below)
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;

    fn tau(v: f64) -> AsymmetryLevel {
        AsymmetryLevel::new(v).unwrap()
    }

    fn laws(values: &[f64], t: f64) -> ExpectileEstimate {
        laws_expectile(
            ValueSeries::new(values).unwrap(),
            tau(t),
            LawsConfig::default(),
        )
    }

    /// Independent oracle: bisection on the monotone first-order condition.
    fn bisect_expectile(values: &[f64], t: f64) -> f64 {
        let g = |mu: f64| {
            let (above, below) = one_sided_deviations(values, mu);
            t * above - (1.0 - t) * below
        };
        let mut lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn asymmetry_level_rejects_boundaries() {
        for bad in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(AsymmetryLevel::new(bad).is_err(), "{bad}");
        }
        assert!(AsymmetryLevel::new(0.3).is_ok());
    }

    #[test]
    fn value_series_rejects_empty_and_non_finite() {
        assert!(matches!(ValueSeries::new(&[]), Err(Error::EmptySeries)));
        assert!(matches!(
            ValueSeries::new(&[1.0, f64::INFINITY]),
            Err(Error::NonFinite { index: 1, .. })
        ));
    }

    #[test]
    fn rho_tau_examples() {
        assert_eq!(rho_tau(0.0, tau(0.3)), 0.0);
        assert_abs_diff_eq!(rho_tau(1.0, tau(0.3)), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(rho_tau(-1.0, tau(0.3)), 0.7, epsilon = 1e-15);
        assert_eq!(rho_tau(2.0, tau(0.5)), 2.0);
    }

    #[test]
    fn tau_distance_examples() {
        let t = [tau(0.3), tau(0.8)];
        assert_eq!(tau_distance(&[1.5, -2.0], &[1.5, -2.0], &t).unwrap(), 0.0);
        assert_abs_diff_eq!(
            tau_distance(&[1.0], &[2.0], &[tau(0.3)]).unwrap(),
            0.7,
            epsilon = 1e-15
        );
        assert_eq!(
            tau_distance(&[1.0, 1.0], &[0.0, 0.0], &[tau(0.5), tau(0.5)]).unwrap(),
            1.0
        );
    }

    #[test]
    fn tau_distance_rejects_mismatched_lengths() {
        assert!(matches!(
            tau_distance(&[1.0, 2.0], &[1.0], &[tau(0.5), tau(0.5)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            tau_distance(&[1.0, 2.0], &[1.0, 2.0], &[tau(0.5)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn laws_degenerate_sample() {
        let est = laws(&[4.2, 4.2, 4.2], 0.8);
        assert_eq!(est.mu, 4.2);
        assert!(est.iterations <= 1);
        assert!(est.converged);
        assert_eq!(est.foc_residual, 0.0);
    }

    #[test]
    fn laws_examples() {
        assert_abs_diff_eq!(laws(&[0.0, 1.0], 0.25).mu, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(laws(&[1.0, 2.0, 3.0], 0.9).mu, 30.0 / 11.0, epsilon = 1e-12);
        assert_abs_diff_eq!(laws(&[1.0, 2.0, 3.0], 0.5).mu, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn laws_reports_non_convergence() {
        let config = LawsConfig {
            tol: 0.0,
            max_iter: 1,
        };
        let est = laws_expectile(
            ValueSeries::new(&[0.0, 0.0, 0.0, 10.0]).unwrap(),
            tau(0.9),
            config,
        );
        assert!(!est.converged);
        assert_eq!(est.iterations, 1);
    }

    #[test]
    fn foc_residual_examples() {
        let s = ValueSeries::new(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(foc_residual(s, tau(0.25), 0.25), 0.0, epsilon = 1e-15);
        assert_eq!(foc_residual(s, tau(0.5), 0.5), 0.0);
        assert_eq!(foc_residual(s, tau(0.5), 0.0), 0.5);
    }

    #[test]
    fn solve_tau_examples() {
        let s = ValueSeries::new(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(
            solve_tau_for_center(s, 0.25).unwrap().value(),
            0.25,
            epsilon = 1e-15
        );
        assert_eq!(solve_tau_for_center(s, 0.5).unwrap().value(), 0.5);
        let s = ValueSeries::new(&[1.0, 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(
            solve_tau_for_center(s, 30.0 / 11.0).unwrap().value(),
            0.9,
            epsilon = 1e-12
        );
    }

    #[test]
    fn solve_tau_one_sided() {
        let s = ValueSeries::new(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            solve_tau_for_center(s, 0.5),
            Err(Error::OneSided { side: Side::Above })
        ));
        assert!(matches!(
            solve_tau_for_center(s, 2.0),
            Err(Error::OneSided { side: Side::Below })
        ));
    }

    #[test]
    fn solve_tau_clamps() {
        // 99 points at 0, one at 1000: the center 0.001 needs τ ≈ 1e-7.
        let mut values = vec![0.0; 99];
        values.push(1000.0);
        let s = ValueSeries::new(&values).unwrap();
        assert!(solve_tau_unclamped(s, 0.001).unwrap().value() < 0.01);
        assert_eq!(solve_tau_for_center(s, 0.001).unwrap().value(), TAU_FLOOR);
    }

    fn series_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-100.0..100.0f64, 2..60)
            .prop_filter("nonconstant", |v| v.iter().any(|&x| x != v[0]))
    }

    proptest! {
        #[test]
        fn laws_matches_bisection_oracle(values in series_strategy(), t in 0.02..0.98f64) {
            let est = laws(&values, t);
            let oracle = bisect_expectile(&values, t);
            let scale = values.iter().map(|x| x.abs()).fold(1.0, f64::max);
            prop_assert!((est.mu - oracle).abs() <= 1e-9 * scale, "{} vs {}", est.mu, oracle);
            prop_assert!(est.foc_residual <= 1e-9);
        }

        #[test]
        fn solve_tau_round_trip(values in series_strategy(), t in 0.05..0.95f64) {
            let est = laws(&values, t);
            let back = solve_tau_unclamped(ValueSeries::new(&values).unwrap(), est.mu).unwrap();
            prop_assert!((back.value() - t).abs() <= 1e-6);
        }

        #[test]
        fn laws_monotone_in_tau(values in series_strategy(), a in 0.01..0.99f64, b in 0.01..0.99f64) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(lo < hi);
            prop_assert!(laws(&values, lo).mu <= laws(&values, hi).mu + 1e-12);
        }

        #[test]
        fn laws_within_range_and_locally_optimal(values in series_strategy(), t in 0.01..0.99f64) {
            let mu = laws(&values, t).mu;
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(min <= mu && mu <= max);
            let loss = |c: f64| values.iter().map(|&x| rho_tau(x - c, tau(t))).sum::<f64>();
            let delta = 1e-4 * (max - min);
            prop_assert!(loss(mu) <= loss(mu + delta));
            prop_assert!(loss(mu) <= loss(mu - delta));
        }

        #[test]
        fn laws_half_is_mean(values in series_strategy()) {
            let m = mean(&values);
            prop_assert!((laws(&values, 0.5).mu - m).abs() <= 1e-10);
        }

        #[test]
        fn half_tau_distance_is_half_squared_euclidean(
            pair in (1usize..10).prop_flat_map(|p| (
                prop::collection::vec(-50.0..50.0f64, p),
                prop::collection::vec(-50.0..50.0f64, p),
            ))
        ) {
            let (x, theta) = pair;
            let half = vec![AsymmetryLevel::HALF; x.len()];
            let sq: f64 = x.iter().zip(&theta).map(|(a, b)| (a - b) * (a - b)).sum();
            prop_assert_eq!(tau_distance(&x, &theta, &half).unwrap(), 0.5 * sq);
        }
    }
}

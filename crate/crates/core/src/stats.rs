//! Kolmogorov-Smirnov tests, exponential rate fitting, exponential
//! nonlinear least squares, and Pearson correlation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hist::Histogram;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    /// Supremum distance between the two CDFs.
    pub statistic: f64,
    pub p_value: f64,
    /// Sample size entering the asymptotic law.
    pub n_eff: f64,
}

/// Kolmogorov survival function `Q(λ) = 2 Σ (-1)^{j-1} exp(-2 j² λ²)`,
/// clamped to `[0, 1]`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    // The alternating series converges slowly for small λ; use the
    // Jacobi-theta form of the same function there.
    if lambda < 1.18 {
        let a = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = [1.0f64, 9.0, 25.0, 49.0, 81.0].iter().map(|&j2| (a * j2).exp()).sum();
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda * s;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value with the small-sample correction
/// `λ = (√n + 0.12 + 0.11/√n)·D`.
pub fn ks_p_value(statistic: f64, n_eff: f64) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    let sqrt_n = n_eff.sqrt();
    kolmogorov_q((sqrt_n + 0.12 + 0.11 / sqrt_n) * statistic)
}

/// Reference exponential law for one-sample tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpReference {
    /// `F(x) = 1 - exp(-rate·x)`, compared with the right-continuous
    /// empirical CDF at every jump. Ties make the p-value conservative.
    #[default]
    Continuous,
    /// The law of `floor(X)` for `X ~ Exp(rate)`:
    /// `F(m) = 1 - exp(-rate·(m+1))` on the integers. For integer data
    /// such as yearly counts.
    Floor,
}

impl ExpReference {
    fn cdf(self, rate: f64, x: f64) -> f64 {
        match self {
            ExpReference::Continuous => 1.0 - (-rate * x).exp(),
            ExpReference::Floor => 1.0 - (-rate * (x.floor() + 1.0)).exp(),
        }
    }
}

/// Empirical CDF of a sorted sample: distinct values with the mass
/// strictly below and at-or-below each.
struct Ecdf {
    values: Vec<f64>,
    below: Vec<f64>,
    at_or_below: Vec<f64>,
    n: usize,
}

impl Ecdf {
    fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample("KS test"));
        }
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(Error::Degenerate("sample contains non-finite values"));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut ecdf = Ecdf {
            values: Vec::new(),
            below: Vec::new(),
            at_or_below: Vec::new(),
            n: sorted.len(),
        };
        let mut i = 0;
        while i < sorted.len() {
            let v = sorted[i];
            let start = i;
            while i < sorted.len() && sorted[i] == v {
                i += 1;
            }
            ecdf.values.push(v);
            ecdf.below.push(start as f64 / n);
            ecdf.at_or_below.push(i as f64 / n);
        }
        Ok(ecdf)
    }

    fn distance_to_exp(&self, rate: f64, reference: ExpReference) -> f64 {
        let mut d: f64 = 0.0;
        match reference {
            ExpReference::Continuous => {
                for ((&v, &lo), &hi) in self.values.iter().zip(&self.below).zip(&self.at_or_below) {
                    let f = reference.cdf(rate, v);
                    d = d.max((hi - f).abs()).max((lo - f).abs());
                }
            }
            ExpReference::Floor => {
                // Both CDFs are step functions on the integers; compare at
                // every integer up to the largest observation.
                let max = self.values.last().copied().unwrap_or(0.0).floor().max(0.0) as u64;
                let mut j = 0;
                for m in 0..=max {
                    let m = m as f64;
                    while j < self.values.len() && self.values[j] <= m {
                        j += 1;
                    }
                    let emp = if j == 0 { 0.0 } else { self.at_or_below[j - 1] };
                    d = d.max((emp - reference.cdf(rate, m)).abs());
                }
                // Mass below zero, if any, sits under a zero reference CDF.
                if self.values[0] < 0.0 {
                    let neg = self.values.iter().zip(&self.at_or_below).filter(|(v, _)| **v < 0.0);
                    d = d.max(neg.map(|(_, &c)| c).fold(0.0, f64::max));
                }
            }
        }
        d
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::params("rate", format!("must be positive, got {rate}")));
    }
    Ok(())
}

/// One-sample KS test against an exponential law.
pub fn ks_exp(sample: &[f64], rate: f64, reference: ExpReference) -> Result<KsResult> {
    check_rate(rate)?;
    let ecdf = Ecdf::new(sample)?;
    let statistic = ecdf.distance_to_exp(rate, reference);
    let n_eff = ecdf.n as f64;
    Ok(KsResult {
        statistic,
        p_value: ks_p_value(statistic, n_eff),
        n_eff,
    })
}

/// One-sample KS test against `Exp(rate)`.
pub fn ks_one_sample_exp(sample: &[f64], rate: f64) -> Result<KsResult> {
    ks_exp(sample, rate, ExpReference::Continuous)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpRateFit {
    pub rate: f64,
    pub reference: ExpReference,
    pub ks: KsResult,
}

pub const RATE_GRID_LO: f64 = 1e-3;
pub const RATE_GRID_HI: f64 = 10.0;
pub const RATE_GRID_STEP: f64 = 1e-3;

/// Rate that maximises the KS p-value (equivalently, minimises D): a
/// scan of `[0.001, 10]` in steps of 0.001 followed by golden-section
/// refinement around the best grid point.
pub fn fit_exp_rate_max_p(sample: &[f64], reference: ExpReference) -> Result<ExpRateFit> {
    let ecdf = Ecdf::new(sample)?;
    if ecdf.values.iter().any(|&v| v < 0.0) {
        return Err(Error::Degenerate("exponential fit needs non-negative data"));
    }
    if ecdf.values.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("exponential fit needs a positive mean"));
    }
    let d = |rate: f64| ecdf.distance_to_exp(rate, reference);
    let steps = ((RATE_GRID_HI - RATE_GRID_LO) / RATE_GRID_STEP).round() as usize;
    let (mut best_rate, mut best_d) = (RATE_GRID_LO, f64::INFINITY);
    for i in 0..=steps {
        let rate = RATE_GRID_LO + i as f64 * RATE_GRID_STEP;
        let di = d(rate);
        if di < best_d {
            best_rate = rate;
            best_d = di;
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (
        (best_rate - RATE_GRID_STEP).max(RATE_GRID_LO * 0.5),
        best_rate + RATE_GRID_STEP,
    );
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (d(x1), d(x2));
    for _ in 0..60 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = d(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = d(x2);
        }
    }
    let (refined, refined_d) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if refined_d < best_d {
        best_rate = refined;
        best_d = refined_d;
    }
    let n_eff = ecdf.n as f64;
    Ok(ExpRateFit {
        rate: best_rate,
        reference,
        ks: KsResult {
            statistic: best_d,
            p_value: ks_p_value(best_d, n_eff),
            n_eff,
        },
    })
}

fn two_sample(values: impl Iterator<Item = (f64, f64, f64)>, nx: f64, ny: f64) -> KsResult {
    // `values` yields (value, weight in x, weight in y) sorted by value with
    // ties already merged.
    let (mut cx, mut cy, mut d) = (0.0f64, 0.0f64, 0.0f64);
    for (_, wx, wy) in values {
        cx += wx;
        cy += wy;
        d = d.max((cx / nx - cy / ny).abs());
    }
    let n_eff = nx * ny / (nx + ny);
    KsResult {
        statistic: d,
        p_value: ks_p_value(d, n_eff),
        n_eff,
    }
}

/// Two-sample KS test on raw samples.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<KsResult> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySample("two-sample KS test"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("sample contains non-finite values"));
    }
    let mut merged: Vec<(f64, f64, f64)> = x
        .iter()
        .map(|&v| (v, 1.0, 0.0))
        .chain(y.iter().map(|&v| (v, 0.0, 1.0)))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut grouped: Vec<(f64, f64, f64)> = Vec::new();
    for (v, wx, wy) in merged {
        match grouped.last_mut() {
            Some(last) if last.0 == v => {
                last.1 += wx;
                last.2 += wy;
            }
            _ => grouped.push((v, wx, wy)),
        }
    }
    Ok(two_sample(grouped.into_iter(), x.len() as f64, y.len() as f64))
}

/// Two-sample KS test on samples given as frequency tables.
pub fn ks_two_sample_hist(x: &Histogram, y: &Histogram) -> Result<KsResult> {
    let (nx, ny) = (x.total(), y.total());
    if nx == 0 || ny == 0 {
        return Err(Error::EmptySample("two-sample KS test"));
    }
    let mut keys: Vec<u32> = x.iter().map(|(v, _)| v).chain(y.iter().map(|(v, _)| v)).collect();
    keys.sort_unstable();
    keys.dedup();
    let rows = keys.into_iter().map(|v| (v as f64, x.get(v) as f64, y.get(v) as f64));
    Ok(two_sample(rows, nx as f64, ny as f64))
}

/// Product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            context: "pearson",
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::EmptySample("correlation needs two points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate("zero variance"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Least-squares fit of `y ≈ exp(a + b·d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlsFit {
    pub a: f64,
    pub b: f64,
    pub se_a: f64,
    pub se_b: f64,
    pub fitted: Vec<f64>,
    /// Residual sum of squares.
    pub rss: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub const NLS_MAX_ITERATIONS: usize = 200;
pub const NLS_TOLERANCE: f64 = 1e-9;

/// Jacobian rows `[∂f/∂a, ∂f/∂b]` of `f = exp(a + b·d)`.
pub fn nls_exp_jacobian(d: &[f64], a: f64, b: f64) -> Vec<[f64; 2]> {
    d.iter()
        .map(|&di| {
            let f = (a + b * di).exp();
            [f, di * f]
        })
        .collect()
}

fn rss_at(d: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    d.iter().zip(y).map(|(&di, &yi)| (yi - (a + b * di).exp()).powi(2)).sum()
}

/// Solves the 2x2 normal equations; returns `(inverse, solution)`.
fn solve_normal(jac: &[[f64; 2]], resid: &[f64]) -> Result<([[f64; 2]; 2], [f64; 2])> {
    let (mut m00, mut m01, mut m11, mut g0, mut g1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (row, &r) in jac.iter().zip(resid) {
        m00 += row[0] * row[0];
        m01 += row[0] * row[1];
        m11 += row[1] * row[1];
        g0 += row[0] * r;
        g1 += row[1] * r;
    }
    let det = m00 * m11 - m01 * m01;
    if !(det.is_finite() && det.abs() > 1e-300 && det.abs() > 1e-14 * m00 * m11) {
        return Err(Error::Singular);
    }
    let inv = [[m11 / det, -m01 / det], [-m01 / det, m00 / det]];
    let step = [inv[0][0] * g0 + inv[0][1] * g1, inv[1][0] * g0 + inv[1][1] * g1];
    Ok((inv, step))
}

/// Damped Gauss-Newton fit of `y ≈ exp(a + b·d)`, started from the
/// log-linear regression on the positive observations. Stops when every
/// parameter moves by less than 1e-9 relative, or after 200 iterations
/// with `converged = false`.
pub fn nls_exp(d: &[f64], y: &[f64]) -> Result<NlsFit> {
    if d.len() != y.len() {
        return Err(Error::DimensionMismatch {
            context: "nls_exp",
            expected: d.len(),
            found: y.len(),
        });
    }
    if d.len() < 3 {
        return Err(Error::EmptySample("exponential fit needs three points"));
    }
    if y.iter().any(|&v| !(v >= 0.0 && v.is_finite())) || d.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("exponential fit needs finite non-negative responses"));
    }

    let positive: Vec<(f64, f64)> = d.iter().zip(y).filter(|(_, &v)| v > 0.0).map(|(&x, &v)| (x, v.ln())).collect();
    if positive.len() < 2 {
        return Err(Error::Degenerate("log-linear start needs two positive responses"));
    }
    let m = positive.len() as f64;
    let mx = positive.iter().map(|p| p.0).sum::<f64>() / m;
    let my = positive.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = positive.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Singular);
    }
    let mut b = positive.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    let mut a = my - b * mx;

    let mut rss = rss_at(d, y, a, b);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < NLS_MAX_ITERATIONS {
        iterations += 1;
        let jac = nls_exp_jacobian(d, a, b);
        let resid: Vec<f64> = jac.iter().zip(y).map(|(row, &yi)| yi - row[0]).collect();
        let (_, delta) = solve_normal(&jac, &resid)?;
        let small = |step: f64, p: f64| step.abs() <= NLS_TOLERANCE * p.abs().max(NLS_TOLERANCE);
        if small(delta[0], a) && small(delta[1], b) {
            converged = true;
            break;
        }
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let (na, nb) = (a + scale * delta[0], b + scale * delta[1]);
            let candidate = rss_at(d, y, na, nb);
            if candidate.is_finite() && candidate <= rss {
                let moved = small(na - a, a) && small(nb - b, b);
                a = na;
                b = nb;
                rss = candidate;
                accepted = true;
                converged = moved;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            // No descent along the Gauss-Newton direction: numerically at the
            // minimum only if the proposed step was already negligible.
            converged = small(delta[0] * 1e-3, a) && small(delta[1] * 1e-3, b);
            break;
        }
        if converged {
            break;
        }
    }

    let jac = nls_exp_jacobian(d, a, b);
    let resid: Vec<f64> = jac.iter().zip(y).map(|(row, &yi)| yi - row[0]).collect();
    let (inv, _) = solve_normal(&jac, &resid)?;
    let sigma2 = rss / (d.len() as f64 - 2.0);
    Ok(NlsFit {
        a,
        b,
        se_a: (inv[0][0] * sigma2).max(0.0).sqrt(),
        se_b: (inv[1][1] * sigma2).max(0.0).sqrt(),
        fitted: jac.iter().map(|row| row[0]).collect(),
        rss,
        iterations,
        converged,
    })
}

/// Exponential fit to a frequency table over `lo..=hi` (zeros included).
pub fn nls_exp_hist(h: &Histogram, lo: u32, hi: u32) -> Result<NlsFit> {
    let d: Vec<f64> = (lo..=hi).map(f64::from).collect();
    let y: Vec<f64> = h.dense(lo, hi).into_iter().map(|c| c as f64).collect();
    nls_exp(&d, &y)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::Rng;

    use super::*;
    use crate::rng::seeded;

    fn exp_sample<R: Rng>(rng: &mut R, rate: f64, n: usize) -> Vec<f64> {
        (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln() / rate).collect()
    }

    fn exp_quantiles(rate: f64, n: usize) -> Vec<f64> {
        (1..=n).map(|i| -(1.0 - (i as f64 - 0.5) / n as f64).ln() / rate).collect()
    }

    #[test]
    fn q_function_limits_and_known_values() {
        assert_eq!(kolmogorov_q(0.0), 1.0);
        assert!(kolmogorov_q(10.0) < 1e-40);
        // Tabulated: Q(1.0) = 0.26999967, Q(1.36) ~ 0.0494.
        assert!((kolmogorov_q(1.0) - 0.269_999_67).abs() < 1e-6);
        assert!((kolmogorov_q(1.36) - 0.049_4).abs() < 1e-3);
        // The two branches agree where they meet.
        assert!((kolmogorov_q(1.18 - 1e-12) - kolmogorov_q(1.18)).abs() < 1e-9);
    }

    #[test]
    fn exact_quantiles_fit_tightly() {
        let r = ks_one_sample_exp(&exp_quantiles(1.0, 1000), 1.0).unwrap();
        assert!(r.statistic < 0.001);
        assert!(r.p_value > 0.99);
    }

    #[test]
    fn wrong_rate_is_far() {
        // Sample spread like Exp(0.26) against Exp(1): the CDF gap peaks at
        // x = ln(1/0.26)/0.74 where it equals 0.26^(0.26/0.74) - 0.26^(1/0.74).
        let x_star = (1.0f64 / 0.26).ln() / 0.74;
        let gap = (-0.26 * x_star).exp() - (-x_star).exp();
        let r = ks_one_sample_exp(&exp_quantiles(0.26, 2000), 1.0).unwrap();
        assert!(gap > 0.3);
        assert!((r.statistic - gap).abs() < 2e-3, "{} vs {gap}", r.statistic);
    }

    #[test]
    fn zero_distance_clamps_p() {
        assert_eq!(ks_p_value(0.0, 10.0), 1.0);
    }

    #[test]
    fn one_sample_errors() {
        assert!(matches!(ks_one_sample_exp(&[], 1.0), Err(Error::EmptySample(_))));
        assert!(ks_one_sample_exp(&[1.0], 0.0).is_err());
        assert!(fit_exp_rate_max_p(&[0.0, 0.0], ExpReference::Continuous).is_err());
    }

    #[test]
    fn ties_use_right_continuous_ecdf() {
        // Two copies of ln 2 against Exp(1): F = 0.5, ECDF jumps 0 -> 1.
        let r = ks_one_sample_exp(&[2f64.ln(), 2f64.ln()], 1.0).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-12);
    }

    #[test]
    fn floor_reference_on_integers() {
        // Sample with the exact floor-exponential frequencies has D ~ 0.
        let rate: f64 = 0.5;
        let mut sample = Vec::new();
        for m in 0..40u32 {
            let p = (-rate * m as f64).exp() - (-rate * (m + 1) as f64).exp();
            sample.extend(std::iter::repeat_n(m as f64, (p * 100_000.0).round() as usize));
        }
        let r = ks_exp(&sample, rate, ExpReference::Floor).unwrap();
        assert!(r.statistic < 1e-4, "{}", r.statistic);
        let fit = fit_exp_rate_max_p(&sample, ExpReference::Floor).unwrap();
        assert!((fit.rate - rate).abs() < 1e-3, "{}", fit.rate);
    }

    #[test]
    fn rate_fit_on_random_draws() {
        let sample = exp_sample(&mut seeded(11), 0.26, 10_000);
        let fit = fit_exp_rate_max_p(&sample, ExpReference::Continuous).unwrap();
        assert!((0.24..=0.28).contains(&fit.rate), "{}", fit.rate);
    }

    #[test]
    fn rate_fit_on_quantiles() {
        let fit = fit_exp_rate_max_p(&exp_quantiles(2.0, 500), ExpReference::Continuous).unwrap();
        assert!((fit.rate - 2.0).abs() <= RATE_GRID_STEP, "{}", fit.rate);
        assert!(fit.ks.p_value > 0.99);
    }

    #[test]
    fn two_sample_extremes() {
        let x = [1.0, 2.0, 2.0, 3.0];
        let same = ks_two_sample(&x, &x).unwrap();
        assert_eq!((same.statistic, same.p_value), (0.0, 1.0));
        let apart = ks_two_sample(&x, &[10.0, 11.0]).unwrap();
        assert_eq!(apart.statistic, 1.0);
        assert!(ks_two_sample(&[], &x).is_err());
    }

    #[test]
    fn histogram_form_matches_raw_form() {
        let mut rng = seeded(12);
        let xs: Vec<u32> = (0..300).map(|_| rng.random_range(0..12)).collect();
        let ys: Vec<u32> = (0..170).map(|_| rng.random_range(2..15)).collect();
        let raw = ks_two_sample(
            &xs.iter().map(|&v| v as f64).collect::<Vec<_>>(),
            &ys.iter().map(|&v| v as f64).collect::<Vec<_>>(),
        )
        .unwrap();
        let hist = ks_two_sample_hist(&Histogram::from_values(xs), &Histogram::from_values(ys)).unwrap();
        assert!((raw.statistic - hist.statistic).abs() < 1e-12);
        assert!((raw.p_value - hist.p_value).abs() < 1e-12);
    }

    #[test]
    fn pearson_signs_and_errors() {
        let x = [1.0, 2.0, 4.0, 7.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert!(pearson(&x, &[1.0; 4]).is_err());
        assert!(pearson(&x, &[1.0; 3]).is_err());
    }

    #[test]
    fn nls_exact_model() {
        let d: Vec<f64> = (1..=7).map(f64::from).collect();
        let y: Vec<f64> = d.iter().map(|&x| (2.0 - x).exp()).collect();
        let fit = nls_exp(&d, &y).unwrap();
        assert!(fit.converged);
        assert!((fit.a - 2.0).abs() < 1e-10 && (fit.b + 1.0).abs() < 1e-10);
        assert!(fit.rss < 1e-20);
    }

    #[test]
    fn nls_duration_table() {
        let d: Vec<f64> = (1..=7).map(f64::from).collect();
        let y = [164.0, 58.0, 20.0, 6.0, 5.0, 1.0, 1.0];
        let fit = nls_exp(&d, &y).unwrap();
        assert!(fit.converged);
        assert!((fit.b + 1.043).abs() < 5e-4, "{}", fit.b);
        assert!((fit.se_b - 0.018).abs() < 5e-4, "{}", fit.se_b);
        let rounded: Vec<f64> = fit.fitted.iter().map(|v| v.round()).collect();
        assert_eq!(rounded, vec![164.0, 58.0, 20.0, 7.0, 3.0, 1.0, 0.0]);
    }

    #[test]
    fn nls_errors() {
        assert!(nls_exp(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(nls_exp(&[1.0, 2.0, 3.0], &[1.0, -2.0, 1.0]).is_err());
        assert!(nls_exp(&[1.0, 2.0, 3.0], &[0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let d: Vec<f64> = (1..=7).map(f64::from).collect();
        let fit = nls_exp(&d, &[164.0, 58.0, 20.0, 6.0, 5.0, 1.0, 1.0]).unwrap();
        let f = |a: f64, b: f64, x: f64| (a + b * x).exp();
        let h = 1e-6;
        for (row, &x) in nls_exp_jacobian(&d, fit.a, fit.b).iter().zip(&d) {
            let da = (f(fit.a + h, fit.b, x) - f(fit.a - h, fit.b, x)) / (2.0 * h);
            let db = (f(fit.a, fit.b + h, x) - f(fit.a, fit.b - h, x)) / (2.0 * h);
            assert!(((row[0] - da) / da).abs() < 1e-6);
            assert!(((row[1] - db) / db).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn two_sample_self_comparison(x in prop::collection::vec(-50.0..50.0f64, 1..60)) {
            let r = ks_two_sample(&x, &x).unwrap();
            prop_assert_eq!(r.statistic, 0.0);
            prop_assert_eq!(r.p_value, 1.0);
        }

        #[test]
        fn one_sample_scale_invariance(x in prop::collection::vec(0.0..20.0f64, 1..60), c in 0.1..10.0f64, rate in 0.05..3.0f64) {
            let base = ks_one_sample_exp(&x, rate).unwrap().statistic;
            let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
            let other = ks_one_sample_exp(&scaled, rate / c).unwrap().statistic;
            prop_assert!((base - other).abs() < 1e-9);
        }

        #[test]
        fn pearson_affine_invariance(
            x in prop::collection::vec(-10.0..10.0f64, 3..30),
            scale in 0.1..5.0f64,
            shift in -5.0..5.0f64,
        ) {
            let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * v + i as f64).collect();
            if let Ok(r) = pearson(&x, &y) {
                let x2: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
                prop_assert!((pearson(&x2, &y).unwrap() - r).abs() < 1e-9);
            }
        }

        #[test]
        fn nls_recovers_exact_parameters(a in -1.0..6.0f64, b in -2.0..-0.2f64) {
            let d: Vec<f64> = (1..=8).map(f64::from).collect();
            let y: Vec<f64> = d.iter().map(|&x| (a + b * x).exp()).collect();
            let fit = nls_exp(&d, &y).unwrap();
            prop_assert!((fit.a - a).abs() < 1e-8 && (fit.b - b).abs() < 1e-8);
            let scale: f64 = y.iter().map(|v| v * v).sum();
            prop_assert!(fit.rss <= 1e-20 * scale.max(1.0));
        }
    }
}

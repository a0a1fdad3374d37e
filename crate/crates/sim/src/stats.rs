//! Statistics helpers for comparing simulation against analysis.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Binomial standard error `sqrt(p (1 - p) / n)` of an empirical proportion.
pub fn binomial_std_error(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Wilson score interval for a binomial proportion.
///
/// # Arguments
/// * `z` - two-sided normal quantile, e.g. 1.96 for 95% confidence.
pub fn wilson_interval(hits: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Two-sided Kolmogorov-Smirnov statistic of samples against a continuous
/// CDF. Samples need not be sorted.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("comparable samples"));
    let n = sorted.len() as f64;
    let mut d = 0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Asymptotic two-sided KS p-value with the Stephens finite-sample
/// correction `d (sqrt(n) + 0.12 + 0.11 / sqrt(n))`.
pub fn ks_p_value(statistic: f64, n: usize) -> f64 {
    let root = (n as f64).sqrt();
    let lambda = statistic * (root + 0.12 + 0.11 / root);
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.0 {
        // theta-function form of the Kolmogorov tail; the alternating series
        // below would need about 1/lambda terms here
        let scale = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut tail = 0f64;
        for k in 0..20u32 {
            let odd = f64::from(2 * k + 1);
            let term = (-odd * odd * scale).exp();
            tail += term;
            if term < 1e-16 * tail {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * tail
    } else {
        let mut sum = 0f64;
        for k in 1..=100u32 {
            let term = (-2.0 * f64::from(k * k) * lambda * lambda).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-16 * sum.abs() {
                break;
            }
        }
        2.0 * sum
    };
    p.clamp(0.0, 1.0)
}

/// Pearson chi-square statistic over equal-probability bins of a continuous
/// distribution, given its quantile function. Returns the statistic and the
/// degrees of freedom `bins - 1`.
pub fn chi_square_equal_bins(
    samples: &[f64],
    quantile: impl Fn(f64) -> f64,
    bins: usize,
) -> (f64, usize) {
    assert!(bins >= 2, "need at least two bins");
    let edges: Vec<f64> = (1..bins).map(|j| quantile(j as f64 / bins as f64)).collect();
    let mut observed = vec![0u64; bins];
    for &x in samples {
        let bin = edges.partition_point(|&e| e <= x);
        observed[bin] += 1;
    }
    let expected = samples.len() as f64 / bins as f64;
    let statistic = observed
        .iter()
        .map(|&o| {
            let diff = o as f64 - expected;
            diff * diff / expected
        })
        .sum();
    (statistic, bins - 1)
}

/// Upper-tail p-value of a chi-square statistic.
pub fn chi_square_p_value(statistic: f64, dof: usize) -> f64 {
    ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .sf(statistic)
}

//! Discrete power-law fitting and goodness of fit for degree sequences.
//!
//! The model is `P(k) = k^-gamma / zeta(gamma, k_min)` for integers `k >= k_min`.
//! The exponent is fitted by maximum likelihood, the cutoff `k_min` by
//! minimising the Kolmogorov-Smirnov distance between the empirical and the
//! fitted tail, and plausibility is judged by a semi-parametric bootstrap.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// `B_{2j} / (2j)!` for `j = 1..=8`.
const EM_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
];

/// Hurwitz zeta `sum_{k>=0} (a + k)^-s` for `s > 1`, `a > 0`.
///
/// Direct summation up to a shift where the Euler-Maclaurin tail is accurate
/// well below 1e-10 relative.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    debug_assert!(s > 1.0 && a > 0.0);
    let shift_to = 16.0_f64.max(s + 4.0);
    let mut sum = 0.0;
    let mut x = a;
    while x < shift_to {
        sum += x.powf(-s);
        x += 1.0;
    }
    let x_pow = x.powf(-s);
    sum += x * x_pow / (s - 1.0) + 0.5 * x_pow;
    // term_j = C_j * s(s+1)...(s+2j-2) * x^(-s-2j+1)
    let inv_x2 = 1.0 / (x * x);
    let mut rising = s;
    let mut power = x_pow / x;
    for (j, c) in EM_COEFFS.iter().enumerate() {
        let term = c * rising * power;
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        power *= inv_x2;
    }
    sum
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MleEstimate {
    pub gamma: f64,
    pub log_likelihood: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Positive exponent: `P(k) ∝ k^-gamma`.
    pub gamma: f64,
    pub k_min: u64,
    pub n_tail: usize,
    pub n_total: usize,
    pub ks_statistic: f64,
    pub log_likelihood: f64,
    pub distinct_values: usize,
    /// Fewer than ten distinct values were available to choose `k_min` from.
    pub low_confidence: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub p_value: f64,
    pub bootstrap_count: usize,
    /// Standard error bound `1 / (2 sqrt(bootstrap_count))`.
    pub precision: f64,
}

/// Sorted distinct values with multiplicities.
#[derive(Debug)]
struct Histogram {
    values: Vec<u64>,
    counts: Vec<usize>,
    /// `suffix_n[j]` = number of samples `>= values[j]`.
    suffix_n: Vec<usize>,
    /// `suffix_ln[j]` = sum of `ln x` over samples `>= values[j]`.
    suffix_ln: Vec<f64>,
}

impl Histogram {
    fn new(samples: &[u64]) -> Histogram {
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        let mut values = Vec::new();
        let mut counts = Vec::new();
        for &x in &sorted {
            if values.last() == Some(&x) {
                *counts.last_mut().unwrap() += 1;
            } else {
                values.push(x);
                counts.push(1);
            }
        }
        let d = values.len();
        let mut suffix_n = vec![0; d + 1];
        let mut suffix_ln = vec![0.0; d + 1];
        for j in (0..d).rev() {
            suffix_n[j] = suffix_n[j + 1] + counts[j];
            suffix_ln[j] = suffix_ln[j + 1] + counts[j] as f64 * (values[j] as f64).ln();
        }
        suffix_n.pop();
        suffix_ln.pop();
        Histogram {
            values,
            counts,
            suffix_n,
            suffix_ln,
        }
    }

    /// Index of the first distinct value `>= k_min`.
    fn tail_start(&self, k_min: u64) -> usize {
        self.values.partition_point(|&v| v < k_min)
    }

    fn mle(&self, start: usize, k_min: u64) -> Result<MleEstimate> {
        let n = self.suffix_n.get(start).copied().unwrap_or(0);
        if n < 2 {
            return Err(Error::domain(format!(
                "power-law fit needs at least 2 samples >= {k_min}, found {n}"
            )));
        }
        if self.values[start] == *self.values.last().unwrap() {
            return Err(Error::domain(format!(
                "degenerate tail: every sample >= {k_min} equals {}; the exponent diverges",
                self.values[start]
            )));
        }
        Ok(maximize_likelihood(n, self.suffix_ln[start], k_min))
    }

    /// Largest gap between the empirical and model probabilities of `X < x`
    /// over the distinct tail values `x`.
    fn ks(&self, start: usize, gamma: f64, k_min: u64) -> f64 {
        let n = self.suffix_n[start] as f64;
        let zeta_min = hurwitz_zeta(gamma, k_min as f64);
        let mut below_count = 0usize;
        // Running sum_{k = k_min}^{x - 1} k^-gamma.
        let mut partial = 0.0;
        let mut reached = k_min;
        let mut worst: f64 = 0.0;
        for j in start..self.values.len() {
            let x = self.values[j];
            if x - reached <= 64 {
                for k in reached..x {
                    partial += (k as f64).powf(-gamma);
                }
            } else {
                partial = zeta_min - hurwitz_zeta(gamma, x as f64);
            }
            reached = x;
            let model = partial / zeta_min;
            let empirical = below_count as f64 / n;
            worst = worst.max((model - empirical).abs());
            below_count += self.counts[j];
        }
        worst
    }
}

/// Log-likelihood `-n ln zeta(gamma, k_min) - gamma * sum ln x`.
fn log_likelihood(gamma: f64, n: usize, sum_ln: f64, k_min: u64) -> f64 {
    -(n as f64) * hurwitz_zeta(gamma, k_min as f64).ln() - gamma * sum_ln
}

/// Golden-section search; the likelihood is concave in `gamma`.
fn maximize_likelihood(n: usize, sum_ln: f64, k_min: u64) -> MleEstimate {
    let f = |g: f64| log_likelihood(g, n, sum_ln, k_min);
    let mut lo = 1.0 + 1e-9;
    let mut hi = 4.0;
    // Grow the bracket until the maximum is inside it.
    while f(hi) > f(hi - 1e-3) && hi < 1e4 {
        lo = hi - 1e-3;
        hi *= 2.0;
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-10 * hi.max(1.0) {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let gamma = 0.5 * (lo + hi);
    MleEstimate {
        gamma,
        log_likelihood: f(gamma),
    }
}

/// Maximum-likelihood exponent for the samples `>= k_min`.
pub fn mle_gamma(samples: &[u64], k_min: u64) -> Result<MleEstimate> {
    if k_min == 0 {
        return Err(Error::domain("k_min must be at least 1"));
    }
    let hist = Histogram::new(samples);
    hist.mle(hist.tail_start(k_min), k_min)
}

/// KS distance between the samples `>= k_min` and the model with the given exponent.
/// Invariant under sample order.
pub fn ks_distance(samples: &[u64], gamma: f64, k_min: u64) -> Result<f64> {
    if k_min == 0 || gamma <= 1.0 {
        return Err(Error::domain("ks_distance needs gamma > 1 and k_min >= 1"));
    }
    let hist = Histogram::new(samples);
    let start = hist.tail_start(k_min);
    if start == hist.values.len() {
        return Err(Error::domain(format!("no samples >= {k_min}")));
    }
    Ok(hist.ks(start, gamma, k_min))
}

/// Fewest distinct values a tail above a raised cutoff must keep.
const MIN_TAIL_DISTINCT: usize = 3;

/// Fits the exponent for every observed value as `k_min` and keeps the one
/// with the smallest KS distance; ties go to the smaller cutoff. Cutoffs above
/// the smallest value must leave at least three distinct values in the tail.
pub fn select_kmin(samples: &[u64]) -> Result<PowerLawFit> {
    if samples.contains(&0) {
        return Err(Error::domain("power-law samples must be positive"));
    }
    let hist = Histogram::new(samples);
    if hist.values.len() < 2 {
        return Err(Error::domain(
            "cannot fit a power law: fewer than two distinct sample values",
        ));
    }
    let mut best: Option<PowerLawFit> = None;
    for start in 0..hist.values.len() {
        let k_min = hist.values[start];
        // With two distinct tail values the one-parameter fit matches the only
        // interior CDF point, so the distance is ~0 regardless of the data.
        if start > 0 && hist.values.len() - start < MIN_TAIL_DISTINCT {
            break;
        }
        let Ok(est) = hist.mle(start, k_min) else {
            continue;
        };
        let ks = hist.ks(start, est.gamma, k_min);
        if best.as_ref().map_or(true, |b| ks < b.ks_statistic) {
            best = Some(PowerLawFit {
                gamma: est.gamma,
                k_min,
                n_tail: hist.suffix_n[start],
                n_total: samples.len(),
                ks_statistic: ks,
                log_likelihood: est.log_likelihood,
                distinct_values: hist.values.len(),
                low_confidence: hist.values.len() < 10,
            });
        }
    }
    best.ok_or_else(|| Error::domain("no admissible k_min"))
}

/// Exact sampler for the discrete power law on `k >= k_min`.
///
/// Inverts the complementary CDF `zeta(gamma, k) / zeta(gamma, k_min)`: a table
/// covers the first values, beyond it the inversion brackets and bisects.
#[derive(Clone, Debug)]
pub struct DiscretePowerLaw {
    gamma: f64,
    k_min: u64,
    zeta_min: f64,
    /// `ccdf[i]` = P(X >= k_min + i).
    ccdf: Vec<f64>,
}

const SAMPLER_TABLE: usize = 2048;

impl DiscretePowerLaw {
    pub fn new(gamma: f64, k_min: u64) -> Result<Self> {
        if !(gamma > 1.0) || k_min == 0 {
            return Err(Error::domain("discrete power law needs gamma > 1 and k_min >= 1"));
        }
        let zeta_min = hurwitz_zeta(gamma, k_min as f64);
        let mut ccdf = Vec::with_capacity(SAMPLER_TABLE);
        let mut rest = zeta_min;
        for i in 0..SAMPLER_TABLE as u64 {
            ccdf.push(rest / zeta_min);
            rest -= ((k_min + i) as f64).powf(-gamma);
        }
        Ok(DiscretePowerLaw {
            gamma,
            k_min,
            zeta_min,
            ccdf,
        })
    }

    fn tail_ccdf(&self, k: u64) -> f64 {
        if let Some(&c) = self.ccdf.get((k - self.k_min) as usize) {
            c
        } else {
            hurwitz_zeta(self.gamma, k as f64) / self.zeta_min
        }
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        // u in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        // Largest k with P(X >= k) >= u.
        let last = *self.ccdf.last().unwrap();
        if u > last {
            let i = self.ccdf.partition_point(|&c| c >= u);
            return self.k_min + i as u64 - 1;
        }
        let mut lo = self.k_min + self.ccdf.len() as u64 - 1;
        let mut hi = lo.saturating_mul(2);
        while self.tail_ccdf(hi) >= u {
            lo = hi;
            if hi >= u64::MAX / 4 {
                return hi;
            }
            hi = hi.saturating_mul(2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.tail_ccdf(mid) >= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Semi-parametric bootstrap p-value of the fitted power law.
///
/// Each replicate has the original sample size; every draw comes from the
/// fitted tail with probability `n_tail / n` and otherwise from the observed
/// values below `k_min`. The replicate is refitted from scratch (including
/// `k_min`) and counts against the fit when its KS distance is at least the
/// observed one. Replicate `r` uses random stream `(seed, r)`.
pub fn gof_pvalue(samples: &[u64], fit: &PowerLawFit, bootstrap_count: usize, seed: u64) -> Result<GofResult> {
    if bootstrap_count < 100 {
        return Err(Error::domain("goodness of fit needs at least 100 bootstrap replicates"));
    }
    if fit.n_total != samples.len() {
        return Err(Error::domain("fit was not produced from these samples"));
    }
    let model = DiscretePowerLaw::new(fit.gamma, fit.k_min)?;
    let body: Vec<u64> = samples.iter().copied().filter(|&x| x < fit.k_min).collect();
    let n = samples.len();
    let tail_prob = fit.n_tail as f64 / n as f64;

    let exceed: usize = (0..bootstrap_count as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::child(seed, r);
            let synthetic: Vec<u64> = (0..n)
                .map(|_| {
                    if body.is_empty() || rng.random::<f64>() < tail_prob {
                        model.sample(&mut rng)
                    } else {
                        body[rng.random_range(0..body.len())]
                    }
                })
                .collect();
            // A replicate too degenerate to refit is as far from a power law as it gets.
            let ks = select_kmin(&synthetic).map_or(f64::INFINITY, |f| f.ks_statistic);
            usize::from(ks >= fit.ks_statistic)
        })
        .sum();

    Ok(GofResult {
        p_value: exceed as f64 / bootstrap_count as f64,
        bootstrap_count,
        precision: 1.0 / (2.0 * (bootstrap_count as f64).sqrt()),
    })
}

/// Positive node degrees of a graph plus the number of isolated nodes, which
/// are excluded from fitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSamples {
    pub degrees: Vec<u64>,
    pub zero_degree: usize,
}

pub fn degree_samples(g: &Graph) -> DegreeSamples {
    let all = g.degrees();
    let zero_degree = all.iter().filter(|&&d| d == 0).count();
    DegreeSamples {
        degrees: all.into_iter().filter(|&d| d > 0).map(|d| d as u64).collect(),
        zero_degree,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CcdfRow {
    pub k: u64,
    pub count: usize,
    /// Fraction of nodes with degree `>= k`.
    pub ccdf: f64,
}

/// Degree histogram with empirical complementary CDF, over all nodes.
pub fn degree_ccdf(g: &Graph) -> Vec<CcdfRow> {
    let degrees: Vec<u64> = g.degrees().into_iter().map(|d| d as u64).collect();
    let n = degrees.len() as f64;
    let hist = Histogram::new(&degrees);
    hist.values
        .iter()
        .zip(&hist.counts)
        .zip(&hist.suffix_n)
        .map(|((&k, &count), &at_least)| CcdfRow {
            k,
            count,
            ccdf: at_least as f64 / n,
        })
        .collect()
}

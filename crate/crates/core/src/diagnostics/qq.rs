use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::acf::act_window;

/// Minimum points per sample for a QQ comparison.
pub const MIN_QQ_LEN: usize = 100;

/// One QQ point with its reference band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QqRow {
    /// Probability level in `(0, 1)`.
    pub quantile: f64,
    pub sample_q: f64,
    pub ref_q: f64,
    pub band_lo: f64,
    pub band_hi: f64,
}

impl QqRow {
    pub fn inside(&self) -> bool {
        self.band_lo <= self.sample_q && self.sample_q <= self.band_hi
    }
}

/// Quantile of sorted data by linear interpolation between order
/// statistics (`h = (n - 1) p`).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Compares sample quantiles with reference quantiles at levels
/// `k / (n_quantiles + 1)`. The band at each level holds the central 95%
/// of that quantile over `n_resamples` subsamples of the reference, drawn
/// without replacement, each as large as the sample's effective size.
pub fn qq_compare(
    sample: &[f64],
    reference: &[f64],
    n_quantiles: usize,
    n_resamples: usize,
    seed: u64,
) -> Result<Vec<QqRow>> {
    if sample.len() < MIN_QQ_LEN || reference.len() < MIN_QQ_LEN {
        return Err(Error::invalid(format!("QQ comparison needs at least {MIN_QQ_LEN} points per sample")));
    }
    if n_quantiles == 0 || n_resamples < 2 {
        return Err(Error::invalid("need at least one quantile level and two resamples"));
    }
    if sample.iter().chain(reference).any(|x| !x.is_finite()) {
        return Err(Error::invalid("QQ inputs must be finite"));
    }
    let act = act_window(sample)?.act.max(1.0);
    let size = ((sample.len() as f64 / act).round() as usize).max(2);
    if size > reference.len() {
        return Err(Error::invalid(format!(
            "reference has {} points, fewer than the sample's effective size {size}",
            reference.len()
        )));
    }

    let levels: Vec<f64> = (1..=n_quantiles).map(|k| k as f64 / (n_quantiles + 1) as f64).collect();
    let s_sorted = sorted(sample);
    let r_sorted = sorted(reference);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_level: Vec<Vec<f64>> = vec![Vec::with_capacity(n_resamples); n_quantiles];
    let mut buf = Vec::with_capacity(size);
    for _ in 0..n_resamples {
        buf.clear();
        buf.extend(index::sample(&mut rng, reference.len(), size).into_iter().map(|i| reference[i]));
        buf.sort_by(f64::total_cmp);
        for (k, &p) in levels.iter().enumerate() {
            per_level[k].push(quantile_sorted(&buf, p));
        }
    }
    Ok(levels
        .iter()
        .zip(per_level)
        .map(|(&p, draws)| {
            let d = sorted(&draws);
            QqRow {
                quantile: p,
                sample_q: quantile_sorted(&s_sorted, p),
                ref_q: quantile_sorted(&r_sorted, p),
                band_lo: quantile_sorted(&d, 0.025),
                band_hi: quantile_sorted(&d, 0.975),
            }
        })
        .collect())
}

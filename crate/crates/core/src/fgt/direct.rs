use crate::dataset::GaussianSource;
use crate::error::{invalid, Result};

/// `G(y_j) = sum_i q_i exp(-|x_i - y_j|^2 / (2 sigma^2))` over every pair.
pub fn direct_gauss(sources: &[GaussianSource], targets: &[Vec<f64>], sigma: f64) -> Result<Vec<f64>> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    let d = match (sources.first(), targets.first()) {
        (Some(s), _) => s.dim(),
        (None, Some(t)) => t.len(),
        (None, None) => return Ok(Vec::new()),
    };
    if sources.iter().any(|s| s.dim() != d) || targets.iter().any(|t| t.len() != d) {
        return Err(invalid("sources and targets must share one dimension"));
    }
    let inv = 1.0 / (2.0 * sigma * sigma);
    Ok(targets
        .iter()
        .map(|y| direct_at(sources.iter(), y, inv))
        .collect())
}

/// Direct sum at one target; `inv = 1 / (2 sigma^2)`.
#[inline]
pub(crate) fn direct_at<'a>(sources: impl Iterator<Item = &'a GaussianSource>, y: &[f64], inv: f64) -> f64 {
    sources
        .map(|s| {
            let r2: f64 = s.position.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            s.weight * (-r2 * inv).exp()
        })
        .sum()
}

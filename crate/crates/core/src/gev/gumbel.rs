use super::{check_fit_data, gev_log_likelihood, FitMethod, FitResult, GevError, GevParams};

const MAX_ITERATIONS: usize = 500;
const REL_TOL: f64 = 1e-9;

/// Gumbel (ξ = 0) maximum likelihood through its estimating equations:
///
/// ```text
/// σ = X̄ − Σ Xᵢ e^(−Xᵢ/σ) / Σ e^(−Xᵢ/σ)
/// μ = −σ ln( (1/n) Σ e^(−Xᵢ/σ) )
/// ```
///
/// The first is iterated as a fixed point from `σ₀ = sd·√6/π` until the
/// step falls below `1e-9·σ`. Both sums are evaluated on data centered at
/// the sample mean and shifted by the minimum so the exponentials stay in
/// `(0, 1]`.
pub fn fit_gumbel_fixed_point(data: &[f64]) -> Result<FitResult, GevError> {
    let (mean, sd) = check_fit_data(data)?;
    let centered: Vec<f64> = data.iter().map(|x| x - mean).collect();
    let min = centered.iter().copied().fold(f64::INFINITY, f64::min);

    let weights = |sigma: f64| -> Vec<f64> { centered.iter().map(|y| (-(y - min) / sigma).exp()).collect() };

    let mut sigma = sd * 6f64.sqrt() / std::f64::consts::PI;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let w = weights(sigma);
        let total: f64 = w.iter().sum();
        let weighted: f64 = centered.iter().zip(&w).map(|(y, w)| y * w).sum();
        let next = -weighted / total;
        if !(next.is_finite() && next > 0.0) {
            break;
        }
        let step = (next - sigma).abs();
        sigma = next;
        if step < REL_TOL * sigma {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(GevError::NonConvergence {
            method: FitMethod::GumbelFixedPoint,
            iterations,
        });
    }

    let w = weights(sigma);
    let mean_w = w.iter().sum::<f64>() / w.len() as f64;
    let location = mean + min - sigma * mean_w.ln();
    let params = GevParams::gumbel(location, sigma)?;
    let log_likelihood = gev_log_likelihood(data, &params)?;
    Ok(FitResult {
        params,
        log_likelihood,
        converged,
        iterations,
        method: FitMethod::GumbelFixedPoint,
    })
}

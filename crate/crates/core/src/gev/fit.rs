use super::simplex::{minimize, SimplexOptions};
use super::{check_fit_data, gev_log_likelihood, FitMethod, FitResult, GevError, GevParams};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const INITIAL_SHAPE: f64 = 0.1;

/// Moment-based starting point for standardized data (mean 0, sd 1).
fn moment_start() -> (f64, f64) {
    let scale = 6f64.sqrt() / std::f64::consts::PI;
    (-EULER_GAMMA * scale, scale)
}

fn neg_log_likelihood(data: &[f64], location: f64, log_scale: f64, shape: f64) -> f64 {
    // The likelihood is unbounded as ξ → -1 from below.
    if shape <= -1.0 || !log_scale.is_finite() {
        return f64::INFINITY;
    }
    let scale = log_scale.exp();
    let p = GevParams { location, scale, shape };
    -data.iter().map(|&x| p.log_pdf(x)).sum::<f64>()
}

/// Three-parameter maximum likelihood by simplex search.
///
/// Data are standardized to zero mean and unit variance before the search,
/// which runs over `(μ, ln σ, ξ)` from the moment start
/// `σ₀ = sd·√6/π, μ₀ = mean − γσ₀, ξ₀ = 0.1`. Points outside the support
/// have zero likelihood, so the support constraint needs no explicit bound.
pub fn fit_gev_mle(data: &[f64]) -> Result<FitResult, GevError> {
    let (mean, sd) = check_fit_data(data)?;
    let z: Vec<f64> = data.iter().map(|x| (x - mean) / sd).collect();
    let (mu0, sigma0) = moment_start();
    let mut shape0 = INITIAL_SHAPE;
    if !neg_log_likelihood(&z, mu0, sigma0.ln(), shape0).is_finite() {
        shape0 = 0.0;
    }

    let res = minimize(
        |v| neg_log_likelihood(&z, v[0], v[1], v[2]),
        &[mu0, sigma0.ln(), shape0],
        &[0.2, 0.2, 0.1],
        SimplexOptions::default(),
    );
    finish(
        data,
        mean,
        sd,
        res.x[0],
        res.x[1],
        res.x[2],
        res.iterations,
        res.converged,
    )
}

/// Maximum likelihood for location and scale with the shape held at `shape`.
pub fn fit_gev_mle_with_shape(data: &[f64], shape: f64) -> Result<FitResult, GevError> {
    let (mean, sd) = check_fit_data(data)?;
    if !shape.is_finite() {
        return Err(GevError::InvalidParams("shape must be finite".into()));
    }
    let z: Vec<f64> = data.iter().map(|x| (x - mean) / sd).collect();
    let (mu0, sigma0) = moment_start();
    let res = minimize(
        |v| neg_log_likelihood(&z, v[0], v[1], shape),
        &[mu0, sigma0.ln()],
        &[0.2, 0.2],
        SimplexOptions::default(),
    );
    finish(data, mean, sd, res.x[0], res.x[1], shape, res.iterations, res.converged)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    data: &[f64],
    mean: f64,
    sd: f64,
    location: f64,
    log_scale: f64,
    shape: f64,
    iterations: usize,
    converged: bool,
) -> Result<FitResult, GevError> {
    let params = GevParams::new(mean + sd * location, sd * log_scale.exp(), shape)?;
    let log_likelihood = gev_log_likelihood(data, &params)?;
    Ok(FitResult {
        params,
        log_likelihood,
        converged: converged && log_likelihood.is_finite(),
        iterations,
        method: FitMethod::FullMle,
    })
}

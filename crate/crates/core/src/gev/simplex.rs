//! Nelder–Mead minimization with restarts.

#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexOptions {
    /// Stop once every vertex lies within this distance of the best one.
    pub x_tol: f64,
    pub max_iterations: usize,
    pub max_restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-10,
            max_iterations: 20_000,
            max_restarts: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SimplexResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with initial per-axis `steps`. Non-finite values
/// (including `+inf` for infeasible points) are never accepted as improvements.
///
/// After convergence the simplex is rebuilt around the best point and the
/// search repeated until a restart no longer improves the value.
pub(crate) fn minimize<F>(f: F, x0: &[f64], steps: &[f64], opts: SimplexOptions) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = x0.to_vec();
    let mut best_val = sanitize(f(x0));
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..=opts.max_restarts {
        let budget = opts.max_iterations.saturating_sub(iterations);
        if budget == 0 {
            converged = false;
            break;
        }
        let (x, v, it, ok) = run(&f, &best, steps, opts.x_tol, budget);
        iterations += it;
        converged = ok;
        let improved = v < best_val - 1e-14 * best_val.abs().max(1.0);
        if v <= best_val {
            best = x;
            best_val = v;
        }
        if !ok || !improved {
            break;
        }
    }
    SimplexResult {
        x: best,
        iterations,
        converged,
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn run<F>(f: &F, x0: &[f64], steps: &[f64], x_tol: f64, budget: usize) -> (Vec<f64>, f64, usize, bool)
where
    F: Fn(&[f64]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let dim = x0.len();
    let eval = |x: &[f64]| sanitize(f(x));
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    pts.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += steps[i];
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p)).collect();

    let mut it = 0;
    while it < budget {
        it += 1;
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let diameter = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter <= x_tol && vals[0].is_finite() {
            return (pts.swap_remove(0), vals[0], it, true);
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|j| pts[..dim].iter().map(|p| p[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&pts[dim]).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(REFLECT);
        let fr = eval(&xr);
        if fr < vals[0] {
            let xe = along(EXPAND);
            let fe = eval(&xe);
            if fe < fr {
                pts[dim] = xe;
                vals[dim] = fe;
            } else {
                pts[dim] = xr;
                vals[dim] = fr;
            }
            continue;
        }
        if fr < vals[dim - 1] {
            pts[dim] = xr;
            vals[dim] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[dim] {
            let xc = along(CONTRACT * REFLECT);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(-CONTRACT);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < vals[dim].min(fr) {
            pts[dim] = xc;
            vals[dim] = fc;
            continue;
        }
        for i in 1..=dim {
            let p: Vec<f64> = pts[i].iter().zip(&pts[0]).map(|(x, b)| b + SHRINK * (x - b)).collect();
            vals[i] = eval(&p);
            pts[i] = p;
        }
    }
    let best = (0..=dim).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    (pts[best].clone(), vals[best], it, false)
}

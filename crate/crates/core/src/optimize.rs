//! Small derivative-free minimizers used by the measurement searches.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Location and value of a minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum1d {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. The endpoints are never evaluated.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Minimum1d {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        Minimum1d { x: c, value: fc }
    } else {
        Minimum1d { x: d, value: fd }
    }
}

/// Evaluates `f` on `points` evenly spaced nodes of `[a, b]` (endpoints
/// included), then refines the best node with golden-section search inside
/// its neighbouring cell.
///
/// The returned value is never worse than the best grid node; ties on the
/// grid go to the lowest index.
pub fn grid_golden<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    points: usize,
    tol: f64,
) -> Minimum1d {
    assert!(points >= 2, "grid needs at least two nodes");
    let step = (b - a) / (points - 1) as f64;
    let mut best = Minimum1d {
        x: a,
        value: f(a),
    };
    let mut best_i = 0;
    for i in 1..points {
        let x = if i == points - 1 { b } else { a + step * i as f64 };
        let v = f(x);
        if v < best.value {
            best = Minimum1d { x, value: v };
            best_i = i;
        }
    }
    let lo = if best_i == 0 { a } else { best.x - step };
    let hi = if best_i == points - 1 { b } else { best.x + step };
    let refined = golden_section(&mut f, lo, hi, tol);
    if refined.value < best.value {
        refined
    } else {
        best
    }
}

/// Result of a multivariate search.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimumNd {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.3,
            f_tol: 1e-13,
            max_evaluations: 20_000,
        }
    }
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½,
/// shrink ½).
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: NelderMeadOptions,
) -> MinimumNd {
    let dim = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };
    while evals < opts.max_evaluations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        if spread.abs() <= opts.f_tol {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let worst = simplex[dim].0.clone();
        let reflected = lerp(&centroid, &worst, -1.0);
        let fr = eval(&reflected, &mut evals);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst, -2.0);
            let fe = eval(&expanded, &mut evals);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let (toward, ft) = if fr < simplex[dim].1 {
                (reflected, fr)
            } else {
                (worst, simplex[dim].1)
            };
            let contracted = lerp(&centroid, &toward, 0.5);
            let fc = eval(&contracted, &mut evals);
            if fc < ft {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    *x = lerp(&best, x, 0.5);
                    *v = eval(x, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    MinimumNd {
        x,
        value,
        evaluations: evals,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BfgsOptions {
    /// Central-difference step for the gradient.
    pub fd_step: f64,
    pub grad_tol: f64,
    pub max_iterations: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            fd_step: 1e-6,
            grad_tol: 1e-9,
            max_iterations: 500,
        }
    }
}

fn fd_gradient<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], h: f64, evals: &mut usize) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            *evals += 2;
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Quasi-Newton minimization with finite-difference gradients and an
/// Armijo backtracking line search.
pub fn bfgs<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: BfgsOptions) -> MinimumNd {
    let dim = x0.len();
    let mut evals = 1usize;
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut g = fd_gradient(&mut f, &x, opts.fd_step, &mut evals);
    // Inverse Hessian approximation, row-major.
    let mut h = vec![0.0; dim * dim];
    for i in 0..dim {
        h[i * dim + i] = 1.0;
    }
    for _ in 0..opts.max_iterations {
        if dot(&g, &g).sqrt() < opts.grad_tol {
            break;
        }
        let mut dir: Vec<f64> = (0..dim)
            .map(|i| -(0..dim).map(|j| h[i * dim + j] * g[j]).sum::<f64>())
            .collect();
        let mut slope = dot(&dir, &g);
        if slope >= 0.0 {
            // Lost positive definiteness; fall back to steepest descent.
            for i in 0..dim {
                for j in 0..dim {
                    h[i * dim + j] = if i == j { 1.0 } else { 0.0 };
                }
            }
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&dir, &g);
        }
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-12 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + t * di).collect();
            let ft = f(&trial);
            evals += 1;
            if ft <= fx + 1e-4 * t * slope {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            break;
        };
        let g_new = fd_gradient(&mut f, &x_new, opts.fd_step, &mut evals);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        let improvement = fx - f_new;
        x = x_new;
        fx = f_new;
        g = g_new;
        if sy > 1e-16 {
            let hy: Vec<f64> = (0..dim)
                .map(|i| (0..dim).map(|j| h[i * dim + j] * y[j]).sum())
                .collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..dim {
                for j in 0..dim {
                    h[i * dim + j] += rho * rho * (sy + yhy) * s[i] * s[j]
                        - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        if improvement.abs() < 1e-16 && dot(&g, &g).sqrt() < 1e-6 {
            break;
        }
    }
    MinimumNd {
        x,
        value: fx,
        evaluations: evals,
    }
}

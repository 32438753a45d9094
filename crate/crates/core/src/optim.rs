//! Derivative-free minimization used for correction-gate calibration and
//! the dressed-state darkening search.
//!
//! Plain Nelder-Mead with the standard (non-adaptive) coefficients plus
//! deterministic seeded restarts: restart 0 starts from the caller's point,
//! later restarts perturb it with a seeded RNG, and the best result wins.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Options for a Nelder-Mead run.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Convergence tolerance on both simplex spread and value spread.
    pub tolerance: f64,
    /// Maximum objective evaluations per restart.
    pub max_evals: usize,
    /// Number of deterministic restarts.
    pub restarts: usize,
    /// Initial simplex edge length.
    pub initial_step: f64,
    /// Scale of the random perturbation applied to restart starting points.
    pub perturbation: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            tolerance: 1e-10,
            max_evals: 5000,
            restarts: 8,
            initial_step: 0.1,
            perturbation: 0.5,
        }
    }
}

/// Minimum found by [`minimize`].
#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimize `f` starting from `x0` with seeded deterministic restarts.
pub fn minimize<F>(f: F, x0: &[f64], seed: u64, options: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Minimum> = None;
    let mut total_evals = 0usize;
    for restart in 0..options.restarts.max(1) {
        let start: Vec<f64> = if restart == 0 {
            x0.to_vec()
        } else {
            // Alternate between perturbing the origin and the running best.
            let base = if restart % 2 == 0 {
                best.as_ref().map(|b| b.x.clone()).unwrap_or_else(|| x0.to_vec())
            } else {
                x0.to_vec()
            };
            base.iter()
                .map(|&v| v + options.perturbation * rng.gen_range(-1.0..1.0))
                .collect()
        };
        let result = single_run(&f, &start, options);
        total_evals += result.evaluations;
        if best.as_ref().map_or(true, |b| result.value < b.value) {
            best = Some(result);
        }
    }
    let mut best = best.expect("at least one restart");
    best.evaluations = total_evals;
    best
}

fn single_run<F>(f: &F, x0: &[f64], options: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let (alpha, gamma, rho, sigma) = (1.0f64, 2.0f64, 0.5f64, 0.5f64);
    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    // Initial simplex: x0 plus axis steps.
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n + 1);
    simplex.push((eval(x0, &mut evals), x0.to_vec()));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += options.initial_step;
        simplex.push((eval(&x, &mut evals), x));
    }

    while evals < options.max_evals {
        simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objective"));
        let value_spread = simplex[n].0 - simplex[0].0;
        let point_spread = simplex[1..]
            .iter()
            .map(|(_, x)| {
                x.iter()
                    .zip(simplex[0].1.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if value_spread < options.tolerance && point_spread < options.tolerance {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(_, x)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();

        let reflected: Vec<f64> = centroid
            .iter()
            .zip(worst.1.iter())
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let f_reflected = eval(&reflected, &mut evals);

        if f_reflected < simplex[0].0 {
            let expanded: Vec<f64> = centroid
                .iter()
                .zip(reflected.iter())
                .map(|(c, r)| c + gamma * (r - c))
                .collect();
            let f_expanded = eval(&expanded, &mut evals);
            simplex[n] = if f_expanded < f_reflected {
                (f_expanded, expanded)
            } else {
                (f_reflected, reflected)
            };
        } else if f_reflected < simplex[n - 1].0 {
            simplex[n] = (f_reflected, reflected);
        } else {
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(worst.1.iter())
                .map(|(c, w)| c + rho * (w - c))
                .collect();
            let f_contracted = eval(&contracted, &mut evals);
            if f_contracted < worst.0 {
                simplex[n] = (f_contracted, contracted);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (x, b) in entry.1.iter_mut().zip(best.iter()) {
                        *x = b + sigma * (*x - b);
                    }
                    entry.0 = eval(&entry.1.clone(), &mut evals);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objective"));
    Minimum {
        x: simplex[0].1.clone(),
        value: simplex[0].0,
        evaluations: evals,
    }
}

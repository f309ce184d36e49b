//! Nelder-Mead simplex minimization.
//!
//! The objective may return `+inf` (or NaN, treated as `+inf`) to mark
//! infeasible points; reflection then moves the simplex back into the
//! feasible region without any gradient information.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Hard cap on objective evaluations for one run.
    pub max_evals: usize,
    /// Converged when (f_worst - f_best) / max(1, |f_best|) drops below this.
    pub rel_tol: f64,
    /// Relative displacement used to seed the initial simplex.
    pub init_rel_step: f64,
    /// Absolute displacement for coordinates that start at zero.
    pub init_abs_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            rel_tol: 1e-8,
            init_rel_step: 0.05,
            init_abs_step: 0.01,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub n_evals: usize,
    pub converged: bool,
}

const ALPHA: f64 = 1.0; // reflection
const GAMMA: f64 = 2.0; // expansion
const RHO: f64 = 0.5; // contraction
const SIGMA: f64 = 0.5; // shrink

pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n >= 1, "objective must have at least one coordinate");
    let mut n_evals = 0usize;
    let mut eval = |x: &[f64], n_evals: &mut usize| -> f64 {
        *n_evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = eval(x0, &mut n_evals);
    simplex.push((x0.to_vec(), fx0));
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += if v[i] != 0.0 {
            opts.init_rel_step * v[i]
        } else {
            opts.init_abs_step
        };
        let fv = eval(&v, &mut n_evals);
        simplex.push((v, fv));
    }

    let better = |a: f64, b: f64| a < b || (a == b && false);
    let mut converged = false;

    while n_evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let f_best = simplex[0].1;
        let f_worst = simplex[n].1;
        if f_best.is_finite()
            && f_worst.is_finite()
            && (f_worst - f_best) <= opts.rel_tol * f_best.abs().max(1.0)
        {
            converged = true;
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; n];
        for (v, _) in simplex.iter().take(n) {
            for (c, vi) in centroid.iter_mut().zip(v) {
                *c += vi / n as f64;
            }
        }

        let worst = simplex[n].0.clone();
        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let fr = eval(&reflected, &mut n_evals);

        if better(fr, simplex[0].1) {
            // try expanding past the reflection
            let expanded: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + GAMMA * ALPHA * (c - w))
                .collect();
            let fe = eval(&expanded, &mut n_evals);
            simplex[n] = if better(fe, fr) { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if better(fr, simplex[n - 1].1) {
            simplex[n] = (reflected, fr);
            continue;
        }

        // contraction: outside if the reflection improved on the worst point
        let (cand, fc) = if better(fr, simplex[n].1) {
            let outside: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(c, r)| c + RHO * (r - c))
                .collect();
            let v = eval(&outside, &mut n_evals);
            (outside, v)
        } else {
            let inside: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + RHO * (w - c))
                .collect();
            let v = eval(&inside, &mut n_evals);
            (inside, v)
        };
        if better(fc, simplex[n].1.min(fr)) {
            simplex[n] = (cand, fc);
            continue;
        }

        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let v: Vec<f64> = best
                .iter()
                .zip(&entry.0)
                .map(|(b, x)| b + SIGMA * (x - b))
                .collect();
            let fv = eval(&v, &mut n_evals);
            *entry = (v, fv);
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    NelderMeadResult {
        x: simplex[0].0.clone(),
        fx: simplex[0].1,
        n_evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 2.0).powi(2) + (x[1] + 1.0).powi(2);
        let r = nelder_mead(f, &[0.0, 0.0], &NelderMeadOptions::default());
        assert!(r.converged);
        assert_relative_eq!(r.x[0], 2.0, epsilon = 1e-5);
        assert_relative_eq!(r.x[1], -1.0, epsilon = 1e-5);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_evals: 4000,
            rel_tol: 1e-12,
            ..Default::default()
        };
        let r = nelder_mead(f, &[-1.2, 1.0], &opts);
        assert!(r.converged);
        assert_relative_eq!(r.x[0], 1.0, epsilon = 1e-3);
        assert_relative_eq!(r.x[1], 1.0, epsilon = 1e-3);
    }

    #[test]
    fn reflects_away_from_infinite_wall() {
        // +inf for x < 0.5 must not stall the simplex
        let f = |x: &[f64]| {
            if x[0] < 0.5 {
                f64::INFINITY
            } else {
                (x[0] - 3.0).powi(2) + x[1].powi(2)
            }
        };
        let r = nelder_mead(f, &[0.6, 0.8], &NelderMeadOptions::default());
        assert!(r.converged);
        assert_relative_eq!(r.x[0], 3.0, epsilon = 1e-4);
    }

    #[test]
    fn nan_is_treated_as_infeasible() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 1.0).powi(2)
            }
        };
        let r = nelder_mead(f, &[0.2], &NelderMeadOptions::default());
        assert!(r.converged);
        assert_relative_eq!(r.x[0], 1.0, epsilon = 1e-5);
    }

    #[test]
    fn deterministic_result() {
        let f = |x: &[f64]| x[0].powi(2) + (x[1] - 0.7).powi(4) + (x[0] * x[1]).abs();
        let a = nelder_mead(f, &[1.3, -0.4], &NelderMeadOptions::default());
        let b = nelder_mead(f, &[1.3, -0.4], &NelderMeadOptions::default());
        assert_eq!(a.x, b.x);
        assert_eq!(a.fx.to_bits(), b.fx.to_bits());
        assert_eq!(a.n_evals, b.n_evals);
    }
}

//! Adaptive Simpson quadrature with Richardson extrapolation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Bisections forced before the error estimate may accept a panel;
    /// guards against narrow features the three seed nodes would miss.
    pub min_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_depth: 48,
            min_depth: 5,
        }
    }
}

/// Integrate `f` over `[a, b]`. The integrand may fail (for example a
/// special-function sentinel); failures propagate to the caller.
pub fn adaptive_quad<F>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(spec.abs_tol > 0.0 && spec.rel_tol > 0.0) {
        return Err(Error::Domain("quadrature tolerances must be positive".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("quadrature interval must be finite".into()));
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (eval(f, a)?, eval(f, m)?, eval(f, b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, spec.abs_tol, spec, spec.max_depth)
}

fn eval<F>(f: &F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let v = f(x)?;
    if v.is_nan() {
        return Err(Error::EvalFailure(format!("integrand returned NaN at x={x}")));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    spec: &QuadratureSpec,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (eval(f, lm)?, eval(f, rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let refined = left + right;
    let err = refined - whole;
    let tol = abs_tol.max(spec.rel_tol * refined.abs());
    if err.abs() <= 15.0 * tol {
        return Ok(refined + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence(format!(
            "max depth reached on [{a}, {b}] (err {err:.3e})"
        )));
    }
    let half_tol = 0.5 * abs_tol;
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, half_tol, spec, depth - 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, half_tol, spec, depth - 1)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomial() {
        let spec = QuadratureSpec::default();
        let v = adaptive_quad(&|x| Ok(x * x), 0.0, 1.0, &spec).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn integrates_peaked_gaussian() {
        let spec = QuadratureSpec::default();
        let f = |x: f64| Ok((-0.5 * (x / 0.01f64).powi(2)).exp() / (0.01 * (2.0 * std::f64::consts::PI).sqrt()));
        let v = adaptive_quad(&f, -1.0, 1.0, &spec).unwrap();
        assert_relative_eq!(v, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn bisection_invariance() {
        // splitting the interval at an interior point changes the result by < 2*abs_tol
        let spec = QuadratureSpec::default();
        let f = |x: f64| Ok((x.sin() + 1.2).powi(2));
        let whole = adaptive_quad(&f, 0.0, 3.0, &spec).unwrap();
        let split = adaptive_quad(&f, 0.0, 1.1, &spec).unwrap() + adaptive_quad(&f, 1.1, 3.0, &spec).unwrap();
        assert!((whole - split).abs() < 2.0 * spec.abs_tol.max(spec.rel_tol * whole.abs()));
    }

    #[test]
    fn propagates_integrand_failure() {
        let spec = QuadratureSpec::default();
        let f = |x: f64| {
            if x > 0.5 {
                Err(crate::error::Error::EvalFailure("boom".into()))
            } else {
                Ok(x)
            }
        };
        assert!(adaptive_quad(&f, 0.0, 1.0, &spec).is_err());
    }

    #[test]
    fn depth_exhaustion_reports_nonconvergence() {
        let spec = QuadratureSpec {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_depth: 2,
        };
        let f = |x: f64| Ok(1.0 / (1e-6 + (x - 0.3).abs()).sqrt());
        match adaptive_quad(&f, 0.0, 1.0, &spec) {
            Err(crate::error::Error::QuadratureNonConvergence(_)) => {}
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}

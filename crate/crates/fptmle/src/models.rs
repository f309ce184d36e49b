//! The three diffusion models (WD, OU, SR): free transition laws, drift and
//! diffusion coefficients, the lambda function entering the bridge-crossing
//! correction, and mean first-passage times.

use crate::error::{Error, Result};
use crate::numerics::quad::{adaptive_quad, QuadratureSpec};
use crate::numerics::special::{erfcx, ncx2_cdf, ncx2_log_pdf, normal_cdf, normal_log_pdf};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Wiener process with drift: dX = mu dt + sigma dW.
    Wd,
    /// Ornstein-Uhlenbeck: dX = (-beta X + mu) dt + sigma dW.
    Ou,
    /// Square-root (CIR/Feller): dX = (-beta X + mu) dt + sigma sqrt(X) dW.
    Sr,
}

impl ModelKind {
    pub fn n_params(self) -> usize {
        match self {
            ModelKind::Wd => 2,
            ModelKind::Ou | ModelKind::Sr => 3,
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Wd => &["mu", "sigma"],
            ModelKind::Ou | ModelKind::Sr => &["mu", "beta", "sigma"],
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelKind::Wd => write!(f, "wd"),
            ModelKind::Ou => write!(f, "ou"),
            ModelKind::Sr => write!(f, "sr"),
        }
    }
}

/// A model together with its parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Wd { mu: f64, sigma: f64 },
    Ou { mu: f64, beta: f64, sigma: f64 },
    Sr { mu: f64, beta: f64, sigma: f64 },
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Wd { .. } => ModelKind::Wd,
            ModelSpec::Ou { .. } => ModelKind::Ou,
            ModelSpec::Sr { .. } => ModelKind::Sr,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            ModelSpec::Wd { mu, sigma } => vec![mu, sigma],
            ModelSpec::Ou { mu, beta, sigma } | ModelSpec::Sr { mu, beta, sigma } => {
                vec![mu, beta, sigma]
            }
        }
    }

    pub fn from_params(kind: ModelKind, p: &[f64]) -> Result<Self> {
        match (kind, p) {
            (ModelKind::Wd, [mu, sigma]) => Ok(ModelSpec::Wd { mu: *mu, sigma: *sigma }),
            (ModelKind::Ou, [mu, beta, sigma]) => Ok(ModelSpec::Ou {
                mu: *mu,
                beta: *beta,
                sigma: *sigma,
            }),
            (ModelKind::Sr, [mu, beta, sigma]) => Ok(ModelSpec::Sr {
                mu: *mu,
                beta: *beta,
                sigma: *sigma,
            }),
            _ => Err(Error::Domain(format!(
                "parameter vector of length {} does not fit model {kind}",
                p.len()
            ))),
        }
    }

    /// Feasibility on the closure of the parameter space: sigma > 0 always,
    /// beta >= 0 for OU/SR (the boundary beta = 0 is an admissible optimizer
    /// probe), and the SR entrance-boundary condition 2 mu >= sigma^2.
    pub fn is_feasible(&self) -> bool {
        match *self {
            ModelSpec::Wd { mu, sigma } => sigma > 0.0 && mu.is_finite(),
            ModelSpec::Ou { mu, beta, sigma } => sigma > 0.0 && beta >= 0.0 && mu.is_finite(),
            ModelSpec::Sr { mu, beta, sigma } => {
                sigma > 0.0 && beta >= 0.0 && 2.0 * mu >= sigma * sigma
            }
        }
    }

    /// Lower endpoint of the state space.
    pub fn state_lower(&self) -> f64 {
        match self {
            ModelSpec::Sr { .. } => 0.0,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn in_state_space(&self, x: f64) -> bool {
        x.is_finite() && x > self.state_lower()
    }

    fn check_state(&self, x: f64, what: &str) -> Result<()> {
        if self.in_state_space(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{what} = {x} outside the state space of {}",
                self.kind()
            )))
        }
    }

    /// Drift coefficient at `x`.
    pub fn drift(&self, x: f64) -> Result<f64> {
        self.check_state(x, "state")?;
        Ok(match *self {
            ModelSpec::Wd { mu, .. } => mu,
            ModelSpec::Ou { mu, beta, .. } | ModelSpec::Sr { mu, beta, .. } => mu - beta * x,
        })
    }

    /// Diffusion coefficient at `x`.
    pub fn diffusion(&self, x: f64) -> Result<f64> {
        self.check_state(x, "state")?;
        Ok(match *self {
            ModelSpec::Wd { sigma, .. } | ModelSpec::Ou { sigma, .. } => sigma,
            ModelSpec::Sr { sigma, .. } => sigma * x.sqrt(),
        })
    }

    /// Derivative of the diffusion coefficient at `x`.
    pub fn diffusion_prime(&self, x: f64) -> Result<f64> {
        self.check_state(x, "state")?;
        Ok(match *self {
            ModelSpec::Wd { .. } | ModelSpec::Ou { .. } => 0.0,
            ModelSpec::Sr { sigma, .. } => 0.5 * sigma / x.sqrt(),
        })
    }

    /// lambda(y) = sigma(y) * (mu/sigma - sigma'/2)'(y) + (mu/sigma - sigma'/2)^2(y),
    /// in closed form per model.
    pub fn lambda_fn(&self, y: f64) -> Result<f64> {
        self.check_state(y, "state")?;
        Ok(match *self {
            ModelSpec::Wd { mu, sigma } => (mu / sigma).powi(2),
            ModelSpec::Ou { mu, beta, sigma } => {
                let d = mu - beta * y;
                -beta + d * d / (sigma * sigma)
            }
            ModelSpec::Sr { mu, beta, sigma } => {
                let a = mu / sigma - 0.25 * sigma;
                (a * a - 0.5 * mu + 0.125 * sigma * sigma) / y - 0.5 * beta
                    - 2.0 * a * beta / sigma
                    + beta * beta * y / (sigma * sigma)
            }
        })
    }

    /// Conditional mean and variance of the free OU/WD transition over `dt`.
    /// Stable down to beta = 0 (where it degenerates to the WD law).
    pub(crate) fn gaussian_moments(&self, x: f64, dt: f64) -> Option<(f64, f64)> {
        match *self {
            ModelSpec::Wd { mu, sigma } => Some((x + mu * dt, sigma * sigma * dt)),
            ModelSpec::Ou { mu, beta, sigma } => {
                let (phi1, phi2) = if beta == 0.0 {
                    (dt, dt)
                } else {
                    (
                        -(-beta * dt).exp_m1() / beta,
                        -(-2.0 * beta * dt).exp_m1() / (2.0 * beta),
                    )
                };
                let m = x * (-beta * dt).exp() + mu * phi1;
                Some((m, sigma * sigma * phi2))
            }
            ModelSpec::Sr { .. } => None,
        }
    }

    /// Scale, degrees of freedom and non-centrality of the SR transition:
    /// X_dt | X_0 = x is c^{-1} times a non-central chi-square with k dof and
    /// non-centrality lambda_nc, where c = 4 beta / (sigma^2 (1 - e^{-beta dt})).
    pub(crate) fn sr_transition(&self, x: f64, dt: f64) -> Option<(f64, f64, f64)> {
        match *self {
            ModelSpec::Sr { mu, beta, sigma } => {
                let s2 = sigma * sigma;
                let c = if beta == 0.0 {
                    4.0 / (s2 * dt)
                } else {
                    4.0 * beta / (s2 * (-(-beta * dt).exp_m1()))
                };
                let k = 4.0 * mu / s2;
                let lambda = c * x * (-beta * dt).exp();
                Some((c, k, lambda))
            }
            _ => None,
        }
    }

    /// Log of the free (unconstrained) transition density of `y` given `x` over `dt`.
    pub fn free_log_density(&self, y: f64, dt: f64, x: f64) -> Result<f64> {
        if dt <= 0.0 {
            return Err(Error::Domain(format!("dt = {dt} must be positive")));
        }
        self.check_state(x, "from-state")?;
        self.check_state(y, "to-state")?;
        match self.gaussian_moments(x, dt) {
            Some((m, v)) => Ok(normal_log_pdf(y, m, v)),
            None => {
                let (c, k, lambda) = self.sr_transition(x, dt).expect("sr transition");
                Ok(c.ln() + ncx2_log_pdf(c * y, k, lambda)?)
            }
        }
    }

    /// Free transition density of `y` given `x` over `dt`.
    pub fn free_density(&self, y: f64, dt: f64, x: f64) -> Result<f64> {
        Ok(self.free_log_density(y, dt, x)?.exp())
    }

    /// P(X_dt > b | X_0 = x) under the free law.
    pub fn free_cdf_above(&self, b: f64, dt: f64, x: f64) -> Result<f64> {
        if dt <= 0.0 {
            return Err(Error::Domain(format!("dt = {dt} must be positive")));
        }
        self.check_state(x, "from-state")?;
        match self.gaussian_moments(x, dt) {
            Some((m, v)) => Ok(normal_cdf(-(b - m) / v.sqrt())),
            None => {
                let (c, k, lambda) = self.sr_transition(x, dt).expect("sr transition");
                if b <= 0.0 {
                    return Ok(1.0);
                }
                Ok(1.0 - ncx2_cdf(c * b, k, lambda)?)
            }
        }
    }

    /// Mean first-passage time through `cfg.b` starting from `cfg.x0`:
    /// closed form for WD, Siegert-type integrals for OU and SR. Validation
    /// only; never called inside the optimizer.
    pub fn mean_fpt(&self, cfg: &ThresholdConfig) -> Result<f64> {
        cfg.validate_for(self)?;
        let spec = QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-8,
            max_depth: 52,
        };
        match *self {
            ModelSpec::Wd { mu, .. } => {
                if mu <= 0.0 {
                    return Err(Error::Divergence(
                        "WD mean first-passage time requires mu > 0".into(),
                    ));
                }
                Ok((cfg.b - cfg.x0) / mu)
            }
            ModelSpec::Ou { mu, beta, sigma } => {
                if beta <= 0.0 {
                    return Err(Error::Domain("OU mean FPT requires beta > 0".into()));
                }
                // E(T) = sqrt(pi)/beta * int_{v(x0)}^{v(b)} e^{w^2} (1 + erf w) dw
                // with v(z) = (z - mu/beta) sqrt(beta) / sigma.
                let v = |z: f64| (z - mu / beta) * beta.sqrt() / sigma;
                let (lo, hi) = (v(cfg.x0), v(cfg.b));
                if hi > 26.0 {
                    return Err(Error::Divergence(
                        "OU mean FPT integrand overflows (threshold too deep in the tail)".into(),
                    ));
                }
                let integrand = |w: f64| -> Result<f64> {
                    if w <= 0.0 {
                        Ok(erfcx(-w))
                    } else {
                        Ok(2.0 * (w * w).exp() - erfcx(w))
                    }
                };
                let i = adaptive_quad(&integrand, lo, hi, &spec)?;
                Ok(std::f64::consts::PI.sqrt() / beta * i)
            }
            ModelSpec::Sr { mu, beta, sigma } => {
                if beta <= 0.0 {
                    return Err(Error::Domain("SR mean FPT requires beta > 0".into()));
                }
                let s2 = sigma * sigma;
                let q = 2.0 * mu / s2;
                let c = 2.0 * beta / s2;
                let lg = ln_gamma(q);
                let integrand = |z: f64| -> Result<f64> {
                    let log_pref = c * z - q * z.ln() - q * c.ln() + lg;
                    Ok(log_pref.exp() * gamma_lr(q, c * z))
                };
                let i = adaptive_quad(&integrand, cfg.x0, cfg.b, &spec)?;
                Ok(2.0 / s2 * i)
            }
        }
    }
}

/// Threshold, initial state and sampling step shared by simulation and
/// estimation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub b: f64,
    pub x0: f64,
    pub delta: f64,
}

impl ThresholdConfig {
    pub fn new(b: f64, x0: f64, delta: f64) -> Result<Self> {
        let cfg = Self { b, x0, delta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x0 < self.b) {
            return Err(Error::Domain(format!(
                "x0 = {} must lie strictly below the threshold b = {}",
                self.x0, self.b
            )));
        }
        if !(self.delta > 0.0) {
            return Err(Error::Domain(format!("delta = {} must be positive", self.delta)));
        }
        Ok(())
    }

    pub fn validate_for(&self, model: &ModelSpec) -> Result<()> {
        self.validate()?;
        if model.kind() == ModelKind::Sr && (self.x0 <= 0.0 || self.b <= 0.0) {
            return Err(Error::Domain(
                "SR requires a positive initial state and threshold".into(),
            ));
        }
        Ok(())
    }
}

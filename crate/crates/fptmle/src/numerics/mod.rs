//! Shared numerical kernels: special functions, adaptive quadrature,
//! the Nelder-Mead simplex, and deterministic keyed RNG streams.

mod erf;
pub mod optim;
pub mod quad;
pub mod rng;
pub mod special;

pub use optim::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use quad::{adaptive_quad, QuadratureSpec};
pub use rng::keyed_stream;
pub use special::{
    erf, erfc, erfcx, ncx2_cdf, ncx2_log_pdf, ncx2_pdf, normal_cdf, normal_log_pdf, normal_pdf,
    student_t_quantile,
};

use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{func}: argument {arg} is a pole")]
    Pole { func: &'static str, arg: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("{func}: result overflows f64 (log-magnitude {log_magnitude:.1})")]
    Overflow {
        func: &'static str,
        log_magnitude: f64,
    },

    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("bounce cap of {cap} reached at t = {t} without a collapse verdict")]
    BounceCap { cap: u64, t: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("origin fit is ill-conditioned (condition number {cond:e}); enlarge delta")]
    IllConditioned { cond: f64 },

    #[error("origin mass became negative ({m:e}) at t = {t}")]
    NegativeOriginMass { m: f64, t: f64 },

    #[error("no convergence after {steps} steps (last residual {residual:e})")]
    NoConvergence { steps: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

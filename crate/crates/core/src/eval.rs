//! Result and tolerance types shared by the quadrature-based evaluators.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Tolerances and term budget for an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyPolicy {
    pub target_rel_tol: f64,
    pub target_abs_tol: f64,
    pub max_terms: usize,
}

impl Default for AccuracyPolicy {
    fn default() -> Self {
        AccuracyPolicy {
            target_rel_tol: 1e-12,
            target_abs_tol: 1e-300,
            max_terms: 4000,
        }
    }
}

impl AccuracyPolicy {
    pub fn with_rel_tol(rel: f64) -> Self {
        AccuracyPolicy {
            target_rel_tol: rel,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_rel_tol > 0.0) || !(self.target_abs_tol > 0.0) {
            return domain("tolerances must be positive");
        }
        if self.max_terms < 1 {
            return domain("max_terms must be at least 1");
        }
        Ok(())
    }
}

/// A scalar produced by a numerical procedure together with its error estimate.
///
/// `log_value` is always the natural log of `|value|` when `value` is
/// representable, and stays meaningful when `value` underflows to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub log_value: f64,
    pub abs_err_est: f64,
    pub rel_err_est: f64,
    pub nodes_used: usize,
}

impl EvalResult {
    pub fn from_value(value: f64, abs_err: f64, nodes: usize) -> Self {
        let rel = if value != 0.0 {
            abs_err / value.abs()
        } else {
            f64::INFINITY
        };
        EvalResult {
            value,
            log_value: value.abs().ln(),
            abs_err_est: abs_err,
            rel_err_est: rel,
            nodes_used: nodes,
        }
    }

    /// Builds a result from a log-magnitude (the value carries a positive sign).
    pub fn from_log(log_value: f64, rel_err: f64, nodes: usize) -> Self {
        let value = log_value.exp();
        EvalResult {
            value,
            log_value,
            abs_err_est: rel_err * value,
            rel_err_est: rel_err,
            nodes_used: nodes,
        }
    }

    pub fn exact(value: f64) -> Self {
        Self::from_value(value, 0.0, 0)
    }
}

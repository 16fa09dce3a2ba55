//! Quadrature for weakly singular kernels.
//!
//! [`weakly_singular_integral`] is the product trapezoidal rule on a uniform
//! mesh. The fractional operators use [`frac_kernel_integral`], which splits
//! the interval in half: Gauss-Jacobi on the half touching the kernel
//! singularity and tanh-sinh on the half touching the base point, where
//! integrands of the form s^σ live.

mod gauss;
mod kernel;
mod tanh_sinh;
mod trapezoid;

pub use gauss::{gauss_jacobi, GaussRule};
pub use kernel::{frac_kernel_integral, kernel_product_integral, KernelNode};
pub use tanh_sinh::tanh_sinh;
pub use trapezoid::{product_trapezoid, weakly_singular_integral};
pub(crate) use trapezoid::trapezoid_frac_kernel;

use crate::error::{FracError, Result};

/// Which rule evaluates the fractional kernel integral inside the operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Gauss-Jacobi plus tanh-sinh, refined until `tol` is met.
    Adaptive,
    /// Uniform product trapezoid with `nodes` panels, doubled up to
    /// `refinement` times.
    ProductTrapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub nodes: usize,
    pub refinement: usize,
    pub tol: f64,
    pub rule: QuadRule,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            nodes: 512,
            refinement: 2,
            tol: 1e-8,
            rule: QuadRule::Adaptive,
        }
    }
}

impl QuadConfig {
    pub fn new(nodes: usize, refinement: usize, tol: f64) -> Result<Self> {
        let c = QuadConfig {
            nodes,
            refinement,
            tol,
            rule: QuadRule::Adaptive,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_rule(mut self, rule: QuadRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 9 {
            return Err(FracError::invalid(format!(
                "quadrature nodes must be at least 9, got {}",
                self.nodes
            )));
        }
        if self.refinement < 1 {
            return Err(FracError::invalid("quadrature refinement must be at least 1"));
        }
        if !(self.tol > 1e-15 && self.tol < 1e-2) {
            return Err(FracError::invalid(format!(
                "quadrature tolerance must lie in (1e-15, 1e-2), got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// A value with an error estimate and the work spent computing it.
///
/// For the product trapezoid `panels_used` is the finest mesh size; for the
/// adaptive rule it counts integrand evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub err_est: f64,
    pub panels_used: usize,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            err_est: 0.0,
            panels_used: 0,
        }
    }

    pub fn new(value: f64, err_est: f64, panels_used: usize) -> Self {
        EvalResult {
            value,
            err_est,
            panels_used,
        }
    }
}

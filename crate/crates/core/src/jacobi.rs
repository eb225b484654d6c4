//! Rank-one building blocks: the Jacobi function φ, the Harish-Chandra
//! solution Φ that behaves like e^{(λ−ρ)t} at infinity, and the rank-one
//! c-function linking them.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{
    check_finite, gauss_2f1, log_gamma, near_integer, near_nonpositive_integer, ComplexScalar, F21Params, F21_Z_MAX,
    POLE_TOL,
};

/// Spectral parameters closer than this to 1, 2, 3, … make Φ degenerate.
pub const LAMBDA_INT_TOL: f64 = 1e-10;

/// Beyond tanh²t = 0.9 the Pfaff series for φ converges too slowly and the
/// connection formula takes over.
const PFAFF_W_MAX: f64 = 0.9;

/// Near-integer λ on the connection-formula path: distance below which the
/// value is recovered from a circle of evaluations around λ.
const CONNECTION_INT_GAP: f64 = 0.2;
const CIRCLE_RADIUS: f64 = 0.35;
const CIRCLE_POINTS: usize = 64;

/// The Jacobi parameters (α, β) of a BC₁ multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl JacobiParams {
    pub fn new(alpha: impl Into<Complex64>, beta: impl Into<Complex64>) -> Result<Self> {
        let p = JacobiParams {
            alpha: alpha.into(),
            beta: beta.into(),
        };
        check_finite(p.alpha, "alpha")?;
        check_finite(p.beta, "beta")?;
        if matches!(near_integer(p.alpha, POLE_TOL), Some(m) if m <= -1) {
            return Err(Error::Parameter(format!("alpha = {} is a negative integer", p.alpha)));
        }
        Ok(p)
    }

    /// α = k_s + k_l − 1/2, β = k_l − 1/2.
    pub fn from_multiplicities(k_short: impl Into<Complex64>, k_long: impl Into<Complex64>) -> Result<Self> {
        let ks = k_short.into();
        let kl = k_long.into();
        JacobiParams::new(ks + kl - 0.5, kl - 0.5)
    }

    /// ρ = α + β + 1 = k_s + 2k_l.
    pub fn rho(&self) -> Complex64 {
        self.alpha + self.beta + 1.0
    }
}

/// ln(2 cosh t) without overflow for large t.
fn ln_two_cosh(t: f64) -> f64 {
    let t = t.abs();
    t + (-2.0 * t).exp().ln_1p()
}

fn phi_pfaff(p: &JacobiParams, lambda: Complex64, t: f64) -> Result<Complex64> {
    let rho = p.rho();
    let sh = t.sinh();
    gauss_2f1(&F21Params::new(
        (rho - lambda) / 2.0,
        (rho + lambda) / 2.0,
        p.alpha + 1.0,
        -sh * sh,
    ))
}

fn phi_connection(p: &JacobiParams, lambda: Complex64, t: f64) -> Result<Complex64> {
    let plus = c_rank1(p, lambda)? * jacobi_phi_asymptotic(p, lambda, t)?;
    let minus = c_rank1(p, -lambda)? * jacobi_phi_asymptotic(p, -lambda, t)?;
    Ok(plus + minus)
}

/// Jacobi function φ^{(α,β)}_{iλ}(t) = ₂F₁(½(ρ−λ), ½(ρ+λ); α+1; −sinh²t).
///
/// Even in λ and in t, equal to 1 at t = 0. For tanh²t > 0.9 the value is
/// assembled from the connection formula c(λ)Φ_λ + c(−λ)Φ_{−λ}; when λ is
/// close to an integer there, the mean-value property of the entire
/// function λ ↦ φ is used on a circle that stays clear of the integers.
pub fn jacobi_phi(p: &JacobiParams, lambda: ComplexScalar, t: f64) -> Result<ComplexScalar> {
    check_finite(lambda, "lambda")?;
    if !t.is_finite() {
        return Err(Error::NotFinite(format!("t = {t}")));
    }
    let t = t.abs();
    if t == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if t.tanh().powi(2) <= PFAFF_W_MAX {
        return phi_pfaff(p, lambda, t);
    }
    phi_large_t(p, lambda, t)
}

fn phi_large_t(p: &JacobiParams, lambda: Complex64, t: f64) -> Result<Complex64> {
    match near_integer(lambda, CONNECTION_INT_GAP) {
        None => phi_connection(p, lambda, t),
        Some(_) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..CIRCLE_POINTS {
                let theta = 2.0 * PI * (j as f64 + 0.5) / CIRCLE_POINTS as f64;
                let node = lambda + Complex64::from_polar(CIRCLE_RADIUS, theta);
                acc += phi_connection(p, node, t)?;
            }
            Ok(acc / CIRCLE_POINTS as f64)
        }
    }
}

/// Harish-Chandra solution
/// Φ^{(α,β)}_{−iλ}(t) = (2cosh t)^{λ−ρ} ₂F₁(½(ρ−λ), ½(α−β+1−λ); 1−λ; cosh⁻²t),
/// asymptotic to e^{(λ−ρ)t} as t → ∞.
pub fn jacobi_phi_asymptotic(p: &JacobiParams, lambda: ComplexScalar, t: f64) -> Result<ComplexScalar> {
    check_finite(lambda, "lambda")?;
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!("Harish-Chandra solution needs t > 0, got {t}")));
    }
    if matches!(near_integer(lambda, LAMBDA_INT_TOL), Some(m) if m >= 1) {
        return Err(Error::DegenerateLambda(format!(
            "lambda = {lambda} is a positive integer"
        )));
    }
    let z = t.cosh().powi(-2);
    if z > F21_Z_MAX {
        return Err(Error::Domain(format!(
            "t = {t} too small for the Harish-Chandra series"
        )));
    }
    let rho = p.rho();
    let hyper = gauss_2f1(&F21Params::new(
        (rho - lambda) / 2.0,
        (p.alpha - p.beta + 1.0 - lambda) / 2.0,
        1.0 - lambda,
        z,
    ))
    .map_err(|e| match e {
        Error::Pole(msg) => Error::DegenerateLambda(msg),
        other => other,
    })?;
    Ok(((lambda - rho) * ln_two_cosh(t)).exp() * hyper)
}

/// Rank-one c-function
/// c_{α,β}(−iλ) = 2^{ρ−λ} Γ(α+1) Γ(λ) / (Γ(½(λ+ρ)) Γ(½(λ+α−β+1))).
pub fn c_rank1(p: &JacobiParams, lambda: ComplexScalar) -> Result<ComplexScalar> {
    check_finite(lambda, "lambda")?;
    let rho = p.rho();
    if near_nonpositive_integer(p.alpha + 1.0, POLE_TOL) {
        return Err(Error::Pole(format!("Gamma(alpha + 1) with alpha = {}", p.alpha)));
    }
    if near_nonpositive_integer(lambda, POLE_TOL) {
        return Err(Error::Pole(format!("Gamma(lambda) with lambda = {lambda}")));
    }
    let d1 = (lambda + rho) / 2.0;
    let d2 = (lambda + p.alpha - p.beta + 1.0) / 2.0;
    if near_nonpositive_integer(d1, POLE_TOL) || near_nonpositive_integer(d2, POLE_TOL) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let log = (rho - lambda) * LN_2 + log_gamma(p.alpha + 1.0)? + log_gamma(lambda)? - log_gamma(d1)? - log_gamma(d2)?;
    check_finite(log.exp(), "c-function")
}

use alloc::boxed::Box;

use crate::model::{DensityMatrix, Regime};

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("|M| = {m_abs} exceeds the squeezing bound sqrt(N(N+1)) = {bound}")]
    MSqueezeBound { m_abs: f64, bound: f64 },
    #[error("mean photon number N = {0} must be finite and non-negative")]
    PhotonNumber(f64),
    #[error("squeezing magnitude |M| = {0} must be finite and non-negative")]
    SqueezeMagnitude(f64),
    #[error("single-atom emission rate gamma0 = {0} must be positive")]
    NegativeRate(f64),
    #[error("collective damping ratio gamma_hat = {0} lies outside [0, 1]")]
    GammaHatRange(f64),
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid density matrix: {reason} ({value:e})")]
    InvalidState { reason: &'static str, value: f64 },
    #[error("operation requires the {expected} regime, got gamma_hat = {gamma_hat}")]
    Regime { expected: Regime, gamma_hat: f64 },
    #[error("fidelity F = {0} lies outside [0, 1]")]
    FidelityRange(f64),
    #[error("F = {fidelity} is below the critical fidelity F_cr = {critical}")]
    BelowCritical { fidelity: f64, critical: f64 },
    #[error("state is not of X form (largest off-X entry {0:e})")]
    NotXForm(f64),
    #[error("adaptive step underflow at t = {t} (step {step:e})")]
    StepUnderflow { t: f64, step: f64 },
    #[error("no stationary state reached by t = {elapsed} (residual {residual:e})")]
    NotConverged {
        best: Box<DensityMatrix>,
        elapsed: f64,
        residual: f64,
    },
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(&'static str),
}

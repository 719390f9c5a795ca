//! Time integration of `dρ/dt = L̃ρ`.
//!
//! The workhorse is an adaptive Dormand–Prince 5(4) integrator acting on the
//! collective-basis matrix through [`CollectiveRhs`]. With `std` enabled an
//! exact propagator `exp(L̃t)` is available as a cross-check.
//!
//! All times are in units of `1/γ₀`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::liouvillian::CollectiveRhs;
use crate::model::{Basis, DensityMatrix, Params, Regime};
use crate::{math, Op4, C64};

/// Prefactor of [`default_horizon`].
pub const HORIZON_SCALE: f64 = 50.0;

/// Smallest step the adaptive controller may take.
pub const MIN_STEP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Initial step.
    pub step: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Horizon for [`evolve_to_stationary`]; `None` picks [`default_horizon`].
    pub t_max: Option<f64>,
    /// Threshold on `‖L̃ρ‖₁` for declaring convergence.
    pub stationarity_eps: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 0.01,
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            t_max: None,
            stationarity_eps: 1e-10,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.step) {
            return Err(Error::InvalidConfig("step must be positive"));
        }
        if !positive(self.rel_tol) || self.rel_tol < 1e-14 {
            return Err(Error::InvalidConfig("rel_tol must be at least 1e-14"));
        }
        if !positive(self.abs_tol) {
            return Err(Error::InvalidConfig("abs_tol must be positive"));
        }
        if !positive(self.stationarity_eps) {
            return Err(Error::InvalidConfig("stationarity_eps must be positive"));
        }
        if let Some(t) = self.t_max {
            if !positive(t) {
                return Err(Error::InvalidConfig("t_max must be positive"));
            }
        }
        Ok(())
    }

    pub fn horizon(&self, params: &Params) -> f64 {
        self.t_max.unwrap_or_else(|| default_horizon(params))
    }
}

/// `50/(1+2N−2|M|) · min(max(1, 1/(1−γ̂)), 10³)`.
///
/// Near the Dicke limit the slowest rate is about `(1−γ̂)(1+2N)`. Strong
/// squeezing slows one dipole quadrature further, to `(1+2N−2|M|)/2`, which
/// near the bound is close to `1/(4(1+2N))`.
pub fn default_horizon(params: &Params) -> f64 {
    let gh = params.gamma_hat();
    let stretch = if gh >= 1.0 { 1e3 } else { (1.0 / (1.0 - gh)).clamp(1.0, 1e3) };
    HORIZON_SCALE / (1.0 + 2.0 * params.n() - 2.0 * params.m_abs()) * stretch
}

// Dormand–Prince 5(4) tableau. The system is autonomous, so the nodes are unused.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Result of one Dormand–Prince step.
#[derive(Debug, Clone)]
pub struct Step {
    /// Fifth-order solution.
    pub y: Op4,
    /// Embedded error estimate `y₅ − y₄`.
    pub error: Op4,
    /// `f(y)` at the new point, reusable as the first stage of the next step.
    pub dy: Op4,
}

/// One Dormand–Prince step of size `h` for the autonomous system `y' = f(y)`
/// given `k1 = f(y)`.
pub fn dopri_step<F: Fn(&Op4) -> Op4>(f: &F, y: &Op4, k1: &Op4, h: f64) -> Step {
    let h = r(h);
    let k2 = f(&(y + k1 * (h * A21)));
    let k3 = f(&(y + (k1 * r(A31) + k2 * r(A32)) * h));
    let k4 = f(&(y + (k1 * r(A41) + k2 * r(A42) + k3 * r(A43)) * h));
    let k5 = f(&(y + (k1 * r(A51) + k2 * r(A52) + k3 * r(A53) + k4 * r(A54)) * h));
    let k6 = f(&(y + (k1 * r(A61) + k2 * r(A62) + k3 * r(A63) + k4 * r(A64) + k5 * r(A65)) * h));
    let y_new = y + (k1 * r(B1) + k3 * r(B3) + k4 * r(B4) + k5 * r(B5) + k6 * r(B6)) * h;
    let k7 = f(&y_new);
    let error = (k1 * r(E1) + k3 * r(E3) + k4 * r(E4) + k5 * r(E5) + k6 * r(E6) + k7 * r(E7)) * h;
    Step {
        y: y_new,
        error,
        dy: k7,
    }
}

/// Step cap `2/‖L̃‖∞`, which keeps every mode inside the region where the
/// Dormand–Prince amplification factor is well below one. Without it the
/// controller parks the step at the stability edge, fast modes stop decaying
/// and `‖L̃ρ‖` stalls near the tolerance.
pub fn stable_step(params: &Params) -> f64 {
    let gen = crate::liouvillian::build_generator(params);
    let norm = gen
        .matrix()
        .row_iter()
        .map(|r| r.iter().map(|z| math::abs(*z)).sum::<f64>())
        .fold(0.0, f64::max);
    2.0 / norm
}

fn l1(m: &Op4) -> f64 {
    m.iter().map(|z| math::abs(*z)).sum()
}

/// Adaptive integrator state, advancing a collective-basis density matrix.
#[derive(Debug, Clone)]
pub struct Propagator {
    rhs: CollectiveRhs,
    cfg: IntegratorConfig,
    t: f64,
    h: f64,
    h_max: f64,
    y: Op4,
    dy: Op4,
    accepted: usize,
    rejected: usize,
}

impl Propagator {
    pub fn new(rho0: &DensityMatrix, params: &Params, cfg: IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        let rhs = CollectiveRhs::new(params);
        let h_max = stable_step(params);
        let y = rho0.to_collective().into_matrix();
        let dy = rhs.eval(&y);
        Ok(Self {
            rhs,
            cfg,
            t: 0.0,
            h: cfg.step.min(h_max),
            h_max,
            y,
            dy,
            accepted: 0,
            rejected: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Current state, collective basis, without any cleanup.
    pub fn raw(&self) -> &Op4 {
        &self.y
    }

    /// `‖L̃ρ‖₁` at the current point.
    pub fn residual(&self) -> f64 {
        l1(&self.dy)
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected
    }

    fn error_norm(&self, err: &Op4, y_new: &Op4) -> f64 {
        let mut acc = 0.0;
        for ((e, a), b) in err.iter().zip(self.y.iter()).zip(y_new.iter()) {
            let scale = self.cfg.abs_tol + self.cfg.rel_tol * math::abs(*a).max(math::abs(*b));
            acc += e.norm_sqr() / (scale * scale);
        }
        math::sqrt(acc / 16.0)
    }

    /// Takes one accepted step, not going past `t_end`. Returns `false` when
    /// already at `t_end`.
    pub fn step_towards(&mut self, t_end: f64) -> Result<bool> {
        let remaining = t_end - self.t;
        if remaining <= 0.0 {
            return Ok(false);
        }
        let f = |m: &Op4| self.rhs.eval(m);
        loop {
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            if h < MIN_STEP && !last {
                return Err(Error::StepUnderflow { t: self.t, step: h });
            }
            let step = dopri_step(&f, &self.y, &self.dy, h);
            let err = self.error_norm(&step.error, &step.y);
            let factor = if err == 0.0 {
                5.0
            } else if err.is_finite() {
                (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
            } else {
                0.2
            };
            if err <= 1.0 {
                self.t = if last { t_end } else { self.t + h };
                self.y = step.y;
                self.dy = step.dy;
                self.accepted += 1;
                // A clipped final step says nothing about the natural size.
                if !last || factor < 1.0 {
                    self.h = (h * factor).min(self.h_max);
                }
                return Ok(true);
            }
            self.rejected += 1;
            self.h = h * factor.min(1.0);
        }
    }

    pub fn advance_to(&mut self, t_end: f64) -> Result<()> {
        while self.step_towards(t_end)? {}
        Ok(())
    }

    /// Hermitized, trace-normalized copy of the current state and the size of
    /// the correction that was applied.
    pub fn cleaned(&self) -> (DensityMatrix, f64) {
        clean(&self.y)
    }
}

fn clean(y: &Op4) -> (DensityMatrix, f64) {
    let h = (y + y.adjoint()) * r(0.5);
    let tr = h.trace().re;
    let out = h / r(tr);
    let correction = (out - y).iter().map(|z| math::abs(*z)).fold(0.0, f64::max);
    (DensityMatrix::from_matrix_unchecked(out, Basis::Collective), correction)
}

/// Final state of an integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolved {
    /// Collective basis.
    pub state: DensityMatrix,
    pub time: f64,
    /// Largest entry change made by re-symmetrizing and renormalizing.
    pub correction: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Evolved {
    fn from(p: &Propagator) -> Self {
        let (state, correction) = p.cleaned();
        Self {
            state,
            time: p.t,
            correction,
            accepted_steps: p.accepted,
            rejected_steps: p.rejected,
        }
    }
}

/// `ρ(t)` starting from `rho0`.
pub fn integrate(rho0: &DensityMatrix, params: &Params, t: f64, cfg: &IntegratorConfig) -> Result<Evolved> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidConfig("duration must be finite and non-negative"));
    }
    let mut p = Propagator::new(rho0, params, *cfg)?;
    p.advance_to(t)?;
    Ok(Evolved::from(&p))
}

/// One sample of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    /// Collective basis, cleaned.
    pub state: DensityMatrix,
    pub residual: f64,
}

/// `ρ(t)` at each of `times`, which must be non-decreasing and non-negative.
pub fn integrate_sampled(
    rho0: &DensityMatrix,
    params: &Params,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<Sample>> {
    let sorted = times.windows(2).all(|w| w[0] <= w[1]);
    if !sorted || !times.first().is_none_or(|t| *t >= 0.0) {
        return Err(Error::InvalidConfig("sample times must be sorted and non-negative"));
    }
    let mut p = Propagator::new(rho0, params, *cfg)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        p.advance_to(t)?;
        out.push(Sample {
            t,
            state: p.cleaned().0,
            residual: p.residual(),
        });
    }
    Ok(out)
}

/// `n + 1` evenly spaced times on `[0, t]`.
pub fn uniform_times(t: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|i| t * i as f64 / n as f64).collect()
}

/// Converged long-time state.
#[derive(Debug, Clone, PartialEq)]
pub struct Stationary {
    /// Collective basis.
    pub state: DensityMatrix,
    pub elapsed: f64,
    pub residual: f64,
    pub correction: f64,
}

/// Integrates until `‖L̃ρ‖₁ ≤ stationarity_eps`.
///
/// Gives up at the configured horizon with [`Error::NotConverged`], which
/// carries the last state reached.
pub fn evolve_to_stationary(rho0: &DensityMatrix, params: &Params, cfg: &IntegratorConfig) -> Result<Stationary> {
    let horizon = cfg.horizon(params);
    let mut p = Propagator::new(rho0, params, *cfg)?;
    loop {
        let (state, correction) = p.cleaned();
        let residual = l1(&p.rhs.eval(state.matrix()));
        if residual <= cfg.stationarity_eps {
            return Ok(Stationary {
                state,
                elapsed: p.t,
                residual,
                correction,
            });
        }
        if p.t >= horizon {
            return Err(Error::NotConverged {
                best: Box::new(state),
                elapsed: p.t,
                residual,
            });
        }
        p.step_towards(horizon)?;
    }
}

/// Exact propagation `vec ρ(t) = exp(L̃t) vec ρ(0)`.
#[cfg(feature = "std")]
pub fn integrate_exact(rho0: &DensityMatrix, params: &Params, t: f64) -> Result<DensityMatrix> {
    use crate::liouvillian::{collective_generator, unvectorize, vectorize};
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidConfig("duration must be finite and non-negative"));
    }
    let gen = collective_generator(params);
    let prop = (gen.matrix() * r(t)).exp();
    let y = unvectorize(&(prop * vectorize(rho0.to_collective().matrix())));
    Ok(clean(&y).0)
}

/// Fidelity drift `max_t |F(t) − F(0)|` over a sampled Dicke trajectory.
pub fn fidelity_drift(samples: &[Sample], params: &Params) -> Result<f64> {
    params.require(Regime::Dicke)?;
    let f = |s: &Sample| s.state.to_collective().entry(2, 2).re;
    let Some(first) = samples.first() else {
        return Ok(0.0);
    };
    let f0 = f(first);
    Ok(samples.iter().map(|s| (f(s) - f0).abs()).fold(0.0, f64::max))
}

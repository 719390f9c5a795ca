//! Closed-form asymptotic states.
//!
//! For spatially separated atoms (`γ̂ < 1`) the dynamics relaxes to a unique
//! X-shaped state. In the Dicke limit (`γ̂ = 1`) the antisymmetric population
//! is conserved and the long-time state is fixed by the initial fidelity
//! `F = ⟨a|ρ|a⟩`:
//!
//! ```text
//! ρ_as(F) = F |a⟩⟨a| + (1 − F) ρ₀,
//! ```
//!
//! where `ρ₀` is the stationary state orthogonal to `|a⟩`. Above the critical
//! fidelity `ρ_as` splits into a Gibbs state, `|a⟩` and a pure superposition of
//! `|00⟩` and `|11⟩`.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::model::{canonical, max_abs, Basis, DensityMatrix, Params, Regime};
use crate::{math, Ket4, Op4, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Builds a Hermitian X-shaped matrix in the canonical basis from its
/// diagonal and the upper anti-diagonal entries `ρ₁₄`, `ρ₂₃`.
pub(crate) fn x_matrix(diag: [f64; 4], r14: C64, r23: C64) -> Op4 {
    use canonical::{E00, E01, E10, E11};
    let mut m = Op4::from_diagonal(&nalgebra::Vector4::from(diag.map(c)));
    m[(E11, E00)] = r14;
    m[(E00, E11)] = r14.conj();
    m[(E10, E01)] = r23;
    m[(E01, E10)] = r23.conj();
    m
}

/// Unnormalized matrix elements of the unique asymptotic state; the state is
/// these divided by `u0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniqueCoefficients {
    pub u0: f64,
    pub a0: f64,
    pub c0: f64,
    pub d0: f64,
    pub b0: f64,
    pub z0: C64,
}

impl UniqueCoefficients {
    pub fn new(params: &Params) -> Self {
        let n = params.n();
        let m = params.m();
        let m2 = params.m_abs() * params.m_abs();
        let gh = params.gamma_hat();
        let d = params.delta();
        let s = 1.0 + 2.0 * n;
        let common = s * s - 4.0 * m2 + 4.0 * d * d;
        let shift = m2 * gh * gh;
        Self {
            u0: s * s * (s * s + 4.0 * d * d) + 4.0 * m2 * (gh * gh - s * s),
            a0: n * n * common + shift,
            c0: n * (n + 1.0) * common + shift,
            d0: (1.0 + n) * (1.0 + n) * common + shift,
            b0: -2.0 * gh * m2,
            z0: -C64::new(s, -2.0 * d) * m * gh,
        }
    }
}

/// Unnormalized matrix elements of the Dicke-limit state `ρ₀` (the `F = 0`
/// member of the family): `ρ₁₁ = a/u`, `ρ_ss = c/u`, `ρ₄₄ = d/u`, `ρ₁₄ = z/u`.
///
/// With `K = N(N+1) − |M|²`, `a` and `d` are mirror images under `N → N+1`
/// and `u = a + c + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DickeCoefficients {
    pub u: f64,
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub z: C64,
}

impl DickeCoefficients {
    pub fn new(params: &Params) -> Self {
        let n = params.n();
        let m = params.m();
        let m2 = params.m_abs() * params.m_abs();
        let d = params.delta();
        let d2 = d * d;
        let s = 1.0 + 2.0 * n;
        // Validation admits |M| a hair above the bound; K is never negative.
        let k = (n * (n + 1.0) - m2).max(0.0);
        let np1 = n + 1.0;
        let cubic = 1.0 + 3.0 * n + 3.0 * n * n;
        Self {
            u: s * s * (cubic - 3.0 * m2) + 4.0 * cubic * d2,
            a: 4.0 * n * n * k + m2 + n * n * (1.0 + 4.0 * d2),
            c: s * s * k + 4.0 * n * np1 * d2,
            d: 4.0 * np1 * np1 * k + m2 + np1 * np1 * (1.0 + 4.0 * d2),
            z: -C64::new(s, -2.0 * d) * m,
        }
    }

    pub fn z_abs(&self) -> f64 {
        math::abs(self.z)
    }

    pub fn sqrt_ad(&self) -> f64 {
        math::sqrt(self.a * self.d)
    }
}

/// The unique stationary state for `γ̂ < 1`, in the canonical basis.
pub fn unique_asymptotic(params: &Params) -> Result<DensityMatrix> {
    params.require(Regime::Separated)?;
    let k = UniqueCoefficients::new(params);
    debug_assert!((k.a0 + 2.0 * k.c0 + k.d0 - k.u0).abs() <= 1e-9 * k.u0.abs().max(1.0));
    let m = x_matrix(
        [k.a0 / k.u0, k.c0 / k.u0, k.c0 / k.u0, k.d0 / k.u0],
        k.z0 / k.u0,
        c(k.b0 / k.u0),
    );
    Ok(DensityMatrix::from_matrix_unchecked(m, Basis::Canonical))
}

fn check_fidelity(f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::FidelityRange(f))
    }
}

/// Dicke-limit asymptotic state reached from any initial state with
/// antisymmetric fidelity `f`.
pub fn dicke_asymptotic(params: &Params, f: f64) -> Result<DensityMatrix> {
    params.require(Regime::Dicke)?;
    check_fidelity(f)?;
    let k = DickeCoefficients::new(params);
    let w = (1.0 - f) / k.u;
    let mid = 0.5 * w * k.c;
    let m = x_matrix(
        [w * k.a, mid + 0.5 * f, mid + 0.5 * f, w * k.d],
        k.z * w,
        c(mid - 0.5 * f),
    );
    Ok(DensityMatrix::from_matrix_unchecked(m, Basis::Canonical))
}

/// Two-atom squeezed state
/// `|N,θ⟩ = sqrt((1+N)/(1+2N)) |00⟩ + e^{iθ} sqrt(N/(1+2N)) |11⟩`.
pub fn two_atom_squeezed_state(n: f64, theta: f64) -> Ket4 {
    let s = 1.0 + 2.0 * n;
    let mut v = Ket4::zeros();
    v[canonical::E00] = c(math::sqrt((1.0 + n) / s));
    v[canonical::E11] = math::polar(math::sqrt(n / s), theta);
    v
}

/// The squeeze parameter `ξ` with `S(ξ)|00⟩ = |N,θ⟩`.
pub fn squeeze_parameter(n: f64, theta: f64) -> C64 {
    let r = libm::acos(math::sqrt((1.0 + n) / (1.0 + 2.0 * n)));
    math::polar(r, theta + core::f64::consts::PI)
}

/// Atomic squeezing transformation `S(ξ) = exp(ξ̄ σ₋σ₋ − ξ σ₊σ₊)`.
///
/// The generator only couples `|11⟩` and `|00⟩` and squares to `−|ξ|²` on that
/// block, so the exponential is `cos|ξ| + sin|ξ| · G/|ξ|` there and the
/// identity elsewhere.
pub fn atomic_squeeze_unitary(xi: C64) -> Op4 {
    use canonical::{E00, E11};
    let r = math::abs(xi);
    let mut s = Op4::identity();
    if r == 0.0 {
        return s;
    }
    let (cos, sinc) = (math::cos(r), math::sin(r) / r);
    s[(E11, E11)] = c(cos);
    s[(E00, E00)] = c(cos);
    s[(E11, E00)] = -xi * sinc;
    s[(E00, E11)] = xi.conj() * sinc;
    s
}

/// The 2×2 block of `S(ξ)` on (|11⟩, |00⟩).
pub fn squeeze_block(xi: C64) -> Matrix2<C64> {
    let s = atomic_squeeze_unitary(xi);
    Matrix2::new(s[(0, 0)], s[(0, 3)], s[(3, 0)], s[(3, 3)])
}

/// `F_cr = c/(c + u)`; above it `ρ_as` admits the Gibbs mixture form.
pub fn critical_fidelity(params: &Params) -> f64 {
    let k = DickeCoefficients::new(params);
    if k.c == 0.0 {
        return 0.0;
    }
    k.c / (k.c + k.u)
}

/// `ρ_as = (1 − p − q) ρ_β + p |a⟩⟨a| + q |ψ⟩⟨ψ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDecomposition {
    /// Weight of `|a⟩⟨a|`.
    pub p: f64,
    /// Weight of `|ψ⟩⟨ψ|`.
    pub q: f64,
    /// Gibbs state `e^{−βH_a}/Z`, diagonal in the canonical basis.
    pub gibbs: DensityMatrix,
    /// `sqrt(d/(a+d)) |00⟩ + e^{iφ} sqrt(a/(a+d)) |11⟩`, `φ = arg z`.
    pub psi: Ket4,
    /// `βω = ½ ln(d/a)`, when finite.
    pub beta_omega: Option<f64>,
    /// `βω₁ = ln(c / (sqrt(ad) − |z|))`, when finite.
    pub beta_omega1: Option<f64>,
    /// The Gibbs component has vanishing weight or `(β, ω₁)` is singular.
    pub degenerate: bool,
}

impl MixtureDecomposition {
    pub fn gibbs_weight(&self) -> f64 {
        1.0 - self.p - self.q
    }

    /// `(1 − p − q) ρ_β + p |a⟩⟨a| + q |ψ⟩⟨ψ|` in the canonical basis.
    pub fn reconstruct(&self) -> DensityMatrix {
        let a = DensityMatrix::antisymmetric().to_canonical().into_matrix();
        let psi = self.psi * self.psi.adjoint();
        let m = self.gibbs.matrix() * c(self.gibbs_weight()) + a * c(self.p) + psi * c(self.q);
        DensityMatrix::from_matrix_unchecked(m, Basis::Canonical)
    }

    /// `e^{−βH_a}/Z` built from `βω` and `βω₁`, with
    /// `H_a = (ω/2)(σ₃ᴬ + σ₃ᴮ) + (ω₁/2)(1 + σ₃ᴬσ₃ᴮ)`.
    pub fn gibbs_from_temperature(&self) -> Option<DensityMatrix> {
        let (bw, bw1) = (self.beta_omega?, self.beta_omega1?);
        // H_a eigenvalues on |11⟩, |10⟩, |01⟩, |00⟩: ω + ω₁, 0, 0, −ω + ω₁.
        let w = [math::exp(-bw - bw1), 1.0, 1.0, math::exp(bw - bw1)];
        let z: f64 = w.iter().sum();
        let m = Op4::from_diagonal(&nalgebra::Vector4::from(w.map(|x| c(x / z))));
        Some(DensityMatrix::from_matrix_unchecked(m, Basis::Canonical))
    }

    /// `β` and `ω₁` for the display convention `ω = 1`.
    pub fn beta_and_omega1(&self) -> Option<(f64, f64)> {
        let (bw, bw1) = (self.beta_omega?, self.beta_omega1?);
        (bw != 0.0).then(|| (bw, bw1 / bw))
    }
}

/// Splits `ρ_as(f)` into Gibbs, antisymmetric and pure symmetric parts.
pub fn decompose(params: &Params, f: f64) -> Result<MixtureDecomposition> {
    params.require(Regime::Dicke)?;
    check_fidelity(f)?;
    let f_cr = critical_fidelity(params);
    if f < f_cr - 1e-12 {
        return Err(Error::BelowCritical {
            fidelity: f,
            critical: f_cr,
        });
    }
    let k = DickeCoefficients::new(params);
    let (a, cc, d, u) = (k.a, k.c, k.d, k.u);
    let z_abs = k.z_abs();
    let sqrt_ad = k.sqrt_ad();
    let ratio = cc / u;

    let p = (1.0 + ratio) * f - ratio;
    // |z| ≤ sqrt(ad) by positivity; z = 0 forces q = 0 and φ = 0.
    let (q, phase, gap) = if z_abs == 0.0 {
        (0.0, 0.0, sqrt_ad)
    } else {
        (
            z_abs * (a + d) / (u * sqrt_ad) * (1.0 - f),
            math::arg(k.z),
            (sqrt_ad - z_abs).max(0.0),
        )
    };

    // Residual diagonal after removing p|a⟩⟨a| and q|ψ⟩⟨ψ|, up to (1 − F)/u.
    let (g11, g00) = if z_abs == 0.0 {
        (a, d)
    } else {
        (math::sqrt(a / d) * gap, math::sqrt(d / a) * gap)
    };
    let total = g11 + 2.0 * cc + g00;
    let scale = u.abs().max(1.0);
    let empty = total <= 1e-12 * scale;
    let gibbs = if empty {
        // Zero weight: any state will do, use the thermal-like diagonal.
        let norm = a + cc + d;
        Op4::from_diagonal(&nalgebra::Vector4::new(
            c(a / norm),
            c(0.5 * cc / norm),
            c(0.5 * cc / norm),
            c(d / norm),
        ))
    } else {
        Op4::from_diagonal(&nalgebra::Vector4::new(
            c(g11 / total),
            c(cc / total),
            c(cc / total),
            c(g00 / total),
        ))
    };

    let s = a + d;
    let mut psi = Ket4::zeros();
    psi[canonical::E00] = c(math::sqrt(d / s));
    psi[canonical::E11] = math::polar(math::sqrt(a / s), phase);

    let beta_omega = (a > 0.0).then(|| 0.5 * math::ln(d / a));
    let beta_omega1 = (cc > 0.0 && gap > 0.0).then(|| math::ln(cc / gap));
    let near = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
    let degenerate = empty
        || beta_omega.is_none()
        || beta_omega1.is_none()
        || near(a, d)
        || near(sqrt_ad, z_abs);

    Ok(MixtureDecomposition {
        p,
        q,
        gibbs: DensityMatrix::from_matrix_unchecked(gibbs, Basis::Canonical),
        psi,
        beta_omega,
        beta_omega1,
        degenerate,
    })
}

/// Largest entrywise deviation of the reconstruction from `ρ_as(f)`.
pub fn reconstruction_residual(params: &Params, f: f64, mix: &MixtureDecomposition) -> Result<f64> {
    let target = dicke_asymptotic(params, f)?;
    Ok(max_abs(&(mix.reconstruct().into_matrix() - target.into_matrix())))
}

//! Wootters concurrence and the Dicke-limit entanglement thresholds.

use crate::asymptotic::{unique_asymptotic, DickeCoefficients};
use crate::error::{Error, Result};
use crate::model::{canonical, DensityMatrix, Params, Regime};
use crate::{math, Op4, C64};

/// Entries outside the X pattern above this magnitude reject the X formula.
pub const X_FORM_TOL: f64 = 1e-12;

fn spin_flip_matrix() -> Op4 {
    // σ_y ⊗ σ_y is real and anti-diagonal with entries (−1, 1, 1, −1).
    Op4::from_fn(|i, j| {
        if i + j == 3 {
            C64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Positive square root, with eigenvalues at the rounding floor set to zero.
fn hermitian_sqrt(m: &Op4) -> Op4 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let floor = 16.0 * f64::EPSILON * top;
    let v = eig.eigenvectors;
    let d = Op4::from_diagonal(&eig.eigenvalues.map(|l| {
        C64::new(if l > floor { math::sqrt(l) } else { 0.0 }, 0.0)
    }));
    v * d * v.adjoint()
}

/// Square roots of the eigenvalues of `ρ ρ̃` in decreasing order, where
/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
///
/// They are the singular values of `sqrt(ρ) sqrt(ρ̃)`, which the SVD resolves
/// to absolute rounding accuracy even when some of them vanish.
pub fn wootters_values(rho: &DensityMatrix) -> [f64; 4] {
    let m = rho.to_canonical().into_matrix();
    let yy = spin_flip_matrix();
    let root = hermitian_sqrt(&m);
    let root_tilde = yy * root.conjugate() * yy;
    let sv = (root * root_tilde).singular_values();
    let mut s = [sv[0], sv[1], sv[2], sv[3]];
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `C(ρ) = max(0, s₁ − s₂ − s₃ − s₄)`.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let s = wootters_values(rho);
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// Concurrence of an X-shaped state:
/// `max(0, 2(|ρ₁₄| − sqrt(ρ₂₂ρ₃₃)), 2(|ρ₂₃| − sqrt(ρ₁₁ρ₄₄)))`.
pub fn concurrence_x(rho: &DensityMatrix) -> Result<f64> {
    use canonical::{E00, E01, E10, E11};
    let m = rho.to_canonical().into_matrix();
    let off = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && i + j != 3)
        .map(|(i, j)| math::abs(m[(i, j)]))
        .fold(0.0, f64::max);
    if off > X_FORM_TOL {
        return Err(Error::NotXForm(off));
    }
    let p = |i: usize| m[(i, i)].re.max(0.0);
    let c1 = 2.0 * (math::abs(m[(E11, E00)]) - math::sqrt(p(E10) * p(E01)));
    let c2 = 2.0 * (math::abs(m[(E10, E01)]) - math::sqrt(p(E11) * p(E00)));
    Ok(c1.max(c2).max(0.0))
}

/// Concurrence of the unique asymptotic state for `γ̂ < 1`.
pub fn concurrence_unique(params: &Params) -> Result<f64> {
    concurrence_x(&unique_asymptotic(params)?)
}

/// Fidelity thresholds of the Dicke-limit asymptotic state.
///
/// The state is entangled for `F < f1` and for `F > f2` and separable in
/// between. `f_cr` is where the Gibbs mixture form becomes available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub f_cr: f64,
    pub f1: f64,
    pub f2: f64,
}

struct Lines {
    u: f64,
    lo: f64,
    hi: f64,
}

impl Lines {
    fn new(k: &DickeCoefficients) -> Self {
        Self {
            u: k.u,
            lo: k.c - 2.0 * k.z_abs(),
            hi: k.c + 2.0 * k.sqrt_ad(),
        }
    }

    // Two-photon-coherence branch, falling from (2|z| − c)/u at F = 0.
    fn c1(&self, f: f64) -> f64 {
        (self.lo / self.u - 1.0) * f - self.lo / self.u
    }

    // Antisymmetric branch, rising to 1 at F = 1.
    fn c2(&self, f: f64) -> f64 {
        (1.0 + self.hi / self.u) * f - self.hi / self.u
    }
}

pub fn thresholds(params: &Params) -> Result<Thresholds> {
    params.require(Regime::Dicke)?;
    let k = DickeCoefficients::new(params);
    let l = Lines::new(&k);
    let f_cr = if k.c == 0.0 { 0.0 } else { k.c / (k.c + k.u) };
    Ok(Thresholds {
        f_cr,
        f1: (l.lo / (l.lo - l.u)).max(0.0),
        f2: l.hi / (l.hi + l.u),
    })
}

/// Piecewise-linear concurrence of the Dicke-limit asymptotic state.
pub fn asymptotic_concurrence(params: &Params, f: f64) -> Result<f64> {
    params.require(Regime::Dicke)?;
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::FidelityRange(f));
    }
    let l = Lines::new(&DickeCoefficients::new(params));
    Ok(l.c1(f).max(l.c2(f)).max(0.0))
}

/// `C₀ = 2 sqrt(N(N+1))/(1+2N)`, the concurrence of the two-atom squeezed
/// state.
pub fn c0(n: f64) -> f64 {
    2.0 * math::sqrt(n * (n + 1.0)) / (1.0 + 2.0 * n)
}

/// `|(1 + C₀)F − C₀|`: the Dicke-limit concurrence for a minimum-uncertainty
/// bath at resonance.
pub fn resonant_min_uncertainty_profile(n: f64, f: f64) -> f64 {
    let c = c0(n);
    ((1.0 + c) * f - c).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::dicke_asymptotic;
    use crate::model::{AtomParams, Basis, BathParams, Qubit};
    use crate::Ket4;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn ket(amps: [f64; 4]) -> DensityMatrix {
        let v = Ket4::from(amps.map(|x| C64::new(x, 0.0)));
        DensityMatrix::from_pure(&v, Basis::Canonical).unwrap()
    }

    #[test]
    fn bell_and_product_states() {
        for rho in [
            DensityMatrix::symmetric(),
            DensityMatrix::antisymmetric(),
            ket([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]),
        ] {
            assert!((concurrence(&rho) - 1.0).abs() < 1e-12);
            assert!((concurrence_x(&rho).unwrap() - 1.0).abs() < 1e-12);
        }
        let prod = DensityMatrix::product(&Qubit::bloch(0.7, 1.1), &Qubit::bloch(2.0, -0.4));
        assert!(concurrence(&prod) < 1e-12);
        assert_eq!(concurrence(&DensityMatrix::mixed()), 0.0);
        assert_eq!(concurrence_x(&DensityMatrix::excited()).unwrap(), 0.0);
    }

    #[test]
    fn pure_state_concurrence_is_twice_determinant() {
        let (a, b, c, d): (f64, f64, f64, f64) = (0.3, -0.5, 0.6, 0.2);
        let n = (a * a + b * b + c * c + d * d).sqrt();
        let rho = ket([a / n, b / n, c / n, d / n]);
        let expected = 2.0 * (a * d - b * c).abs() / (n * n);
        assert!((concurrence(&rho) - expected).abs() < 1e-12);
    }

    #[test]
    fn werner_state() {
        let bell = ket([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).into_matrix();
        for p in [0.2, 1.0 / 3.0, 0.5, 0.9] {
            let m = bell * C64::new(p, 0.0) + Op4::identity() * C64::new((1.0 - p) / 4.0, 0.0);
            let rho = DensityMatrix::new(m, Basis::Canonical).unwrap();
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence(&rho) - expected).abs() < 1e-12);
            assert!((concurrence_x(&rho).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn x_formula_rejects_general_state() {
        let rho = ket([0.5, 0.5, 0.5, 0.5]);
        assert!(matches!(concurrence_x(&rho), Err(Error::NotXForm(_))));
    }

    #[test]
    fn resonant_thresholds() {
        for n in [0.1, 1.0, 5.0] {
            let p = Params::new(BathParams::min_uncertainty(n, 0.9), AtomParams::dicke(0.0, 0.0)).unwrap();
            let t = thresholds(&p).unwrap();
            let c = c0(n);
            assert!((t.f1 - c / (1.0 + c)).abs() < 1e-14);
            assert!((t.f2 - t.f1).abs() < 1e-12);
            for f in [0.0, 0.2, 0.5, 0.77, 1.0] {
                let got = asymptotic_concurrence(&p, f).unwrap();
                assert!((got - resonant_min_uncertainty_profile(n, f)).abs() < 1e-12);
            }
        }
        assert!((c0(1.0) - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn detuned_thresholds() {
        let p = Params::new(BathParams::min_uncertainty(1.0, 0.0), AtomParams::dicke(0.0, 0.8)).unwrap();
        let t = thresholds(&p).unwrap();
        assert!((t.f1 - 0.143130).abs() < 5e-6);
        assert!((t.f2 - 0.472619).abs() < 5e-6);
        assert!((t.f_cr - 0.159800).abs() < 5e-6);
        assert_eq!(asymptotic_concurrence(&p, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn piecewise_matches_state_concurrence() {
        let p = Params::new(BathParams::new(0.7, 0.6, 2.0), AtomParams::dicke(0.2, 0.45)).unwrap();
        for i in 0..=20 {
            let f = i as f64 / 20.0;
            let rho = dicke_asymptotic(&p, f).unwrap();
            let want = asymptotic_concurrence(&p, f).unwrap();
            assert!((concurrence_x(&rho).unwrap() - want).abs() < 1e-12);
            assert!((concurrence(&rho) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn thermal_unique_state_is_separable() {
        let p = Params::new(BathParams::thermal(0.5), AtomParams::new(0.8, 0.0, 0.0)).unwrap();
        assert_eq!(concurrence_unique(&p).unwrap(), 0.0);
    }
}

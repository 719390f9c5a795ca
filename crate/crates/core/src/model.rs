//! Reservoir and atom parameters, two-atom states and basis bookkeeping.
//!
//! Single-atom kets are ordered `|1⟩` (excited), `|0⟩` (ground), so the
//! canonical two-atom basis is `|11⟩, |10⟩, |01⟩, |00⟩`. The collective basis
//! is `|e⟩, |s⟩, |a⟩, |g⟩` with
//!
//! ```text
//! |e⟩ = |11⟩,  |s⟩ = (|01⟩ + |10⟩)/√2,  |a⟩ = (|10⟩ − |01⟩)/√2,  |g⟩ = |00⟩.
//! ```
//!
//! Rates are measured in units of the single-atom emission rate `γ₀`; it is
//! carried along for labelling only.

use core::f64::consts::{FRAC_1_SQRT_2, TAU};
use core::fmt;

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::math;
use crate::{Ket4, Op4, C64};

/// Entrywise Hermiticity tolerance for a valid state.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for a valid state.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_FLOOR: f64 = -1e-9;

/// γ̂ values this close to one are snapped to the Dicke limit.
const DICKE_SNAP: f64 = 1e-12;

/// Index of each collective state in the collective basis.
pub mod collective {
    pub const E: usize = 0;
    pub const S: usize = 1;
    pub const A: usize = 2;
    pub const G: usize = 3;
}

/// Index of each product state in the canonical basis.
pub mod canonical {
    pub const E11: usize = 0;
    pub const E10: usize = 1;
    pub const E01: usize = 2;
    pub const E00: usize = 3;
}

/// Broadband squeezed reservoir: mean photon number `N` and the squeezing
/// correlation `M = |M| e^{iϑ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub n_mean: f64,
    pub m_abs: f64,
    pub m_phase: f64,
}

impl BathParams {
    pub fn new(n_mean: f64, m_abs: f64, m_phase: f64) -> Self {
        Self {
            n_mean,
            m_abs,
            m_phase,
        }
    }

    pub fn vacuum() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn thermal(n_mean: f64) -> Self {
        Self::new(n_mean, 0.0, 0.0)
    }

    /// Minimum-uncertainty squeezing, `|M| = sqrt(N(N+1))`.
    pub fn min_uncertainty(n_mean: f64, m_phase: f64) -> Self {
        Self::new(n_mean, squeeze_bound(n_mean), m_phase)
    }

    pub fn m(&self) -> C64 {
        math::polar(self.m_abs, self.m_phase)
    }

    /// Largest admissible `|M|` for this photon number.
    pub fn squeeze_bound(&self) -> f64 {
        squeeze_bound(self.n_mean)
    }

    pub fn is_min_uncertainty(&self, tol: f64) -> bool {
        (self.squeeze_bound() - self.m_abs).abs() <= tol
    }
}

fn squeeze_bound(n: f64) -> f64 {
    math::sqrt(n * (n + 1.0))
}

/// Atomic and geometric description of the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomParams {
    /// Single-atom spontaneous emission rate.
    pub gamma0: f64,
    /// Collective damping ratio `γ/γ₀`.
    pub gamma_hat: f64,
    /// Dipole-dipole coupling `Ω`, in the same units as `gamma0`.
    pub omega_dd: f64,
    /// Normalized detuning `δ₀/γ₀`.
    pub delta: f64,
}

impl AtomParams {
    pub fn new(gamma_hat: f64, omega_dd: f64, delta: f64) -> Self {
        Self {
            gamma0: 1.0,
            gamma_hat,
            omega_dd,
            delta,
        }
    }

    /// Atoms close enough that `γ = γ₀`.
    pub fn dicke(omega_dd: f64, delta: f64) -> Self {
        Self::new(1.0, omega_dd, delta)
    }

    pub fn with_gamma0(mut self, gamma0: f64) -> Self {
        self.gamma0 = gamma0;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `γ̂ < 1`: a unique asymptotic state.
    Separated,
    /// `γ̂ = 1`: a one-parameter family labelled by the fidelity.
    Dicke,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Separated => f.write_str("separated (gamma_hat < 1)"),
            Regime::Dicke => f.write_str("Dicke (gamma_hat = 1)"),
        }
    }
}

/// Validated parameter bundle. Construct with [`validate`] or [`Params::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    bath: BathParams,
    atoms: AtomParams,
}

/// Checks every parameter invariant and returns the validated bundle.
pub fn validate(bath: BathParams, atoms: AtomParams) -> Result<Params> {
    Params::new(bath, atoms)
}

impl Params {
    pub fn new(mut bath: BathParams, mut atoms: AtomParams) -> Result<Self> {
        let finite = [
            ("n_mean", bath.n_mean),
            ("m_abs", bath.m_abs),
            ("m_phase", bath.m_phase),
            ("gamma0", atoms.gamma0),
            ("gamma_hat", atoms.gamma_hat),
            ("omega_dd", atoms.omega_dd),
            ("delta", atoms.delta),
        ];
        if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(name));
        }
        if bath.n_mean < 0.0 {
            return Err(Error::PhotonNumber(bath.n_mean));
        }
        if bath.m_abs < 0.0 {
            return Err(Error::SqueezeMagnitude(bath.m_abs));
        }
        let bound = bath.squeeze_bound();
        // Slack for |M| computed as sqrt(N(N+1)) through a different route.
        if bath.m_abs > bound + 1e-12 * bound.max(1.0) {
            return Err(Error::MSqueezeBound {
                m_abs: bath.m_abs,
                bound,
            });
        }
        if atoms.gamma0 <= 0.0 {
            return Err(Error::NegativeRate(atoms.gamma0));
        }
        if !(0.0..=1.0 + DICKE_SNAP).contains(&atoms.gamma_hat) {
            return Err(Error::GammaHatRange(atoms.gamma_hat));
        }
        if atoms.gamma_hat >= 1.0 - DICKE_SNAP {
            atoms.gamma_hat = 1.0;
        }
        let wrapped = libm::fmod(bath.m_phase, TAU);
        bath.m_phase = if wrapped < 0.0 { wrapped + TAU } else { wrapped };
        Ok(Self { bath, atoms })
    }

    pub fn bath(&self) -> &BathParams {
        &self.bath
    }

    pub fn atoms(&self) -> &AtomParams {
        &self.atoms
    }

    pub fn regime(&self) -> Regime {
        if self.atoms.gamma_hat == 1.0 {
            Regime::Dicke
        } else {
            Regime::Separated
        }
    }

    pub fn n(&self) -> f64 {
        self.bath.n_mean
    }

    pub fn m(&self) -> C64 {
        self.bath.m()
    }

    pub fn m_abs(&self) -> f64 {
        self.bath.m_abs
    }

    pub fn gamma_hat(&self) -> f64 {
        self.atoms.gamma_hat
    }

    pub fn delta(&self) -> f64 {
        self.atoms.delta
    }

    /// Dipole-dipole coupling in units of `γ₀`.
    pub fn omega(&self) -> f64 {
        self.atoms.omega_dd / self.atoms.gamma0
    }

    pub(crate) fn require(&self, regime: Regime) -> Result<()> {
        if self.regime() == regime {
            Ok(())
        } else {
            Err(Error::Regime {
                expected: regime,
                gamma_hat: self.atoms.gamma_hat,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `|11⟩, |10⟩, |01⟩, |00⟩`
    Canonical,
    /// `|e⟩, |s⟩, |a⟩, |g⟩`
    Collective,
}

/// The fixed unitary taking canonical coordinates to collective ones.
///
/// The matrix is real, symmetric and its own inverse.
#[derive(Debug, Clone, Copy, Default)]
pub struct CollectiveBasisMap;

impl CollectiveBasisMap {
    /// Rows are `⟨e|, ⟨s|, ⟨a|, ⟨g|` in canonical coordinates.
    pub fn matrix() -> Op4 {
        let r = FRAC_1_SQRT_2;
        nalgebra::Matrix4::<f64>::new(
            1.0, 0.0, 0.0, 0.0, //
            0.0, r, r, 0.0, //
            0.0, r, -r, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        )
        .map(|x| C64::new(x, 0.0))
    }

    pub fn to_collective(m: &Op4) -> Op4 {
        let u = Self::matrix();
        u * m * u.adjoint()
    }

    pub fn from_collective(m: &Op4) -> Op4 {
        let u = Self::matrix();
        u.adjoint() * m * u
    }
}

/// A two-atom density matrix tagged with the basis its entries refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Op4,
    basis: Basis,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Op4, basis: Basis) -> Result<Self> {
        let rho = Self { m, basis };
        rho.check()?;
        Ok(rho)
    }

    /// Wraps a matrix without checking the state invariants.
    pub fn from_matrix_unchecked(m: Op4, basis: Basis) -> Self {
        Self { m, basis }
    }

    /// `|v⟩⟨v|` for a normalized ket.
    pub fn from_pure(v: &Ket4, basis: Basis) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            m: v * v.adjoint(),
            basis,
        })
    }

    pub fn excited() -> Self {
        Self::basis_projector(collective::E)
    }

    pub fn symmetric() -> Self {
        Self::basis_projector(collective::S)
    }

    pub fn antisymmetric() -> Self {
        Self::basis_projector(collective::A)
    }

    pub fn ground() -> Self {
        Self::basis_projector(collective::G)
    }

    fn basis_projector(k: usize) -> Self {
        let mut m = Op4::zeros();
        m[(k, k)] = C64::new(1.0, 0.0);
        Self {
            m,
            basis: Basis::Collective,
        }
    }

    /// `|φ⟩⟨φ| ⊗ |ψ⟩⟨ψ|` in the canonical basis.
    pub fn product(phi: &Qubit, psi: &Qubit) -> Self {
        let v = phi.tensor(psi);
        Self {
            m: v * v.adjoint(),
            basis: Basis::Canonical,
        }
    }

    /// Maximally mixed state.
    pub fn mixed() -> Self {
        Self {
            m: Op4::identity() * C64::new(0.25, 0.0),
            basis: Basis::Canonical,
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn matrix(&self) -> &Op4 {
        &self.m
    }

    pub fn into_matrix(self) -> Op4 {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn to_collective(&self) -> Self {
        match self.basis {
            Basis::Collective => *self,
            Basis::Canonical => Self {
                m: CollectiveBasisMap::to_collective(&self.m),
                basis: Basis::Collective,
            },
        }
    }

    pub fn to_canonical(&self) -> Self {
        match self.basis {
            Basis::Canonical => *self,
            Basis::Collective => Self {
                m: CollectiveBasisMap::from_collective(&self.m),
                basis: Basis::Canonical,
            },
        }
    }

    pub fn in_basis(&self, basis: Basis) -> Self {
        match basis {
            Basis::Canonical => self.to_canonical(),
            Basis::Collective => self.to_collective(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(self.m - self.m.adjoint()))
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (self.m + self.m.adjoint()) * C64::new(0.5, 0.0);
        h.symmetric_eigen().eigenvalues.min()
    }

    fn check(&self) -> Result<()> {
        if self.m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState {
                reason: "non-finite entry",
                value: f64::NAN,
            });
        }
        let herm = self.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState {
                reason: "not Hermitian",
                value: herm,
            });
        }
        let tr = math::abs(self.trace() - C64::new(1.0, 0.0));
        if tr > TRACE_TOL {
            return Err(Error::InvalidState {
                reason: "trace differs from one",
                value: tr,
            });
        }
        let min = self.min_eigenvalue();
        if min < PSD_FLOOR {
            return Err(Error::InvalidState {
                reason: "negative eigenvalue",
                value: min,
            });
        }
        Ok(())
    }

    /// Largest entrywise difference after expressing `other` in this basis.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs(&(self.m - other.in_basis(self.basis).m))
    }
}

pub(crate) fn max_abs(m: &Op4) -> f64 {
    m.iter().map(|z| math::abs(*z)).fold(0.0, f64::max)
}

/// Single-atom pure state, amplitudes ordered (excited, ground).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit(Vector2<C64>);

impl Qubit {
    pub fn new(excited: C64, ground: C64) -> Self {
        Self(Vector2::new(excited, ground))
    }

    pub fn ground() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn excited() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`; θ = 0 is the ground state.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        Self::new(
            math::polar(math::sin(theta / 2.0), phi),
            C64::new(math::cos(theta / 2.0), 0.0),
        )
    }

    pub fn amplitudes(&self) -> &Vector2<C64> {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Qubit) -> C64 {
        self.0.dotc(&other.0)
    }

    /// `|self⟩ ⊗ |other⟩` in the canonical basis.
    pub fn tensor(&self, other: &Qubit) -> Ket4 {
        let (a, b) = (&self.0, &other.0);
        Ket4::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    }
}

/// Fidelity `⟨a|ρ|a⟩` with the antisymmetric state.
pub fn fidelity_antisymmetric(rho: &DensityMatrix) -> f64 {
    rho.to_collective().m[(collective::A, collective::A)].re
}

/// Fidelity of `|φ⟩ ⊗ |ψ⟩` with the antisymmetric state, `(1 − |⟨φ|ψ⟩|²)/2`.
pub fn product_state_fidelity(phi: &Qubit, psi: &Qubit) -> Result<f64> {
    for q in [phi, psi] {
        let n = q.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(n));
        }
    }
    Ok(0.5 * (1.0 - phi.inner(psi).norm_sqr()))
}

//! The rotating-frame generator `L̃ = −i[H̃, ·] + L̃_D`.
//!
//! Two independent routes are provided. [`build_generator`] assembles the
//! 16×16 superoperator from Kronecker products of the atomic ladder
//! operators in the canonical basis. [`CollectiveRhs`] evaluates `L̃ρ` directly
//! from the closed blocks of equations for the collective-basis matrix
//! elements; it is what the time integrator calls.
//!
//! Density matrices are vectorized column by column, `vec(ρ)[i + 4j] = ρ_ij`,
//! so that `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.

use alloc::vec::Vec;

use nalgebra::{Matrix2, SMatrix, SVector};

use crate::model::{collective, fidelity_antisymmetric, Basis, CollectiveBasisMap, DensityMatrix, Params};
use crate::{math, Op4, C64};

pub type Mat16 = SMatrix<C64, 16, 16>;
pub type Vec16 = SVector<C64, 16>;

/// Relative singular-value cutoff for the nullspace.
pub const NULLSPACE_RTOL: f64 = 1e-10;

pub fn vectorize(m: &Op4) -> Vec16 {
    Vec16::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &Vec16) -> Op4 {
    Op4::from_column_slice(v.as_slice())
}

/// A linear map on 4×4 matrices, stored as a 16×16 matrix acting on
/// column-stacked vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    matrix: Mat16,
    basis: Basis,
}

impl Superoperator {
    pub fn matrix(&self) -> &Mat16 {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Applies the map to a matrix expressed in [`Self::basis`].
    pub fn apply(&self, m: &Op4) -> Op4 {
        unvectorize(&(self.matrix * vectorize(m)))
    }

    /// Applies the map to a state, returning the result in the state's basis.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Op4 {
        let out = self.apply(rho.in_basis(self.basis).matrix());
        change_basis(&out, self.basis, rho.basis())
    }

    /// Same map acting on collective-basis matrices.
    pub fn to_collective(&self) -> Self {
        match self.basis {
            Basis::Collective => self.clone(),
            Basis::Canonical => {
                // U is real and symmetric, so vec(U X U†) = (U ⊗ U) vec(X).
                let u = CollectiveBasisMap::matrix();
                let w = u.kronecker(&u);
                Self {
                    matrix: w * self.matrix * w,
                    basis: Basis::Collective,
                }
            }
        }
    }
}

fn change_basis(m: &Op4, from: Basis, to: Basis) -> Op4 {
    match (from, to) {
        (Basis::Canonical, Basis::Collective) => CollectiveBasisMap::to_collective(m),
        (Basis::Collective, Basis::Canonical) => CollectiveBasisMap::from_collective(m),
        _ => *m,
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `σ₊ = |1⟩⟨0|` with single-atom ordering (|1⟩, |0⟩).
fn sigma_plus() -> Matrix2<C64> {
    Matrix2::new(c(0.0), c(1.0), c(0.0), c(0.0))
}

fn sigma_z() -> Matrix2<C64> {
    Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0))
}

/// Ladder and inversion operators of atoms A and B on the pair.
struct AtomOps {
    plus: [Op4; 2],
    minus: [Op4; 2],
    z: [Op4; 2],
}

impl AtomOps {
    fn new() -> Self {
        let id = Matrix2::<C64>::identity();
        let sp = sigma_plus();
        let sz = sigma_z();
        let plus = [sp.kronecker(&id), id.kronecker(&sp)];
        let minus = [plus[0].adjoint(), plus[1].adjoint()];
        let z = [sz.kronecker(&id), id.kronecker(&sz)];
        Self { plus, minus, z }
    }
}

/// Superoperator of `ρ ↦ (coef/2)(2XρY − YXρ − ρYX)`.
fn dissipator_term(coef: C64, x: &Op4, y: &Op4) -> Mat16 {
    let id = Op4::identity();
    let yx = y * x;
    (y.transpose().kronecker(x) * c(2.0) - id.kronecker(&yx) - yx.transpose().kronecker(&id))
        * (coef * 0.5)
}

/// The rotating-frame Hamiltonian in units of `γ₀`.
pub fn hamiltonian(params: &Params) -> Op4 {
    let ops = AtomOps::new();
    let detuning = (ops.z[0] + ops.z[1]) * c(0.5 * params.delta());
    let exchange = (ops.plus[0] * ops.minus[1] + ops.plus[1] * ops.minus[0]) * c(params.omega());
    detuning + exchange
}

/// Assembles `L̃` in the canonical basis, in units of `γ₀`.
pub fn build_generator(params: &Params) -> Superoperator {
    let ops = AtomOps::new();
    let id = Op4::identity();
    let h = hamiltonian(params);
    let i = C64::new(0.0, 1.0);
    let mut l = (id.kronecker(&h) - h.transpose().kronecker(&id)) * (-i);

    let n = params.n();
    let m = params.m();
    let g = params.gamma_hat();
    for j in 0..2 {
        for k in 0..2 {
            let rate = if j == k { 1.0 } else { g };
            if rate == 0.0 {
                continue;
            }
            let (pj, mj, pk, mk) = (&ops.plus[j], &ops.minus[j], &ops.plus[k], &ops.minus[k]);
            l += dissipator_term(c(rate * (1.0 + n)), mj, pk);
            l += dissipator_term(c(rate * n), pj, mk);
            l += dissipator_term(m * rate, pj, pk);
            l += dissipator_term(m.conj() * rate, mj, mk);
        }
    }
    Superoperator {
        matrix: l,
        basis: Basis::Canonical,
    }
}

/// Explicit equations of motion for the collective-basis matrix elements.
///
/// The elements split into closed blocks: the populations with `ρ_eg`, the
/// coherences `{ρ_es, ρ_ea, ρ_sg, ρ_ag}`, and `ρ_sa` on its own. Rates are in
/// units of `γ₀` and `g = γ̂`.
#[derive(Debug, Clone, Copy)]
pub struct CollectiveRhs {
    n: f64,
    g: f64,
    m: C64,
    // diagonal decay/rotation constants of the coherence equations
    k_es: C64,
    k_ea: C64,
    k_eg: C64,
    k_sa: C64,
    k_sg: C64,
    k_ag: C64,
}

impl CollectiveRhs {
    pub fn new(params: &Params) -> Self {
        let n = params.n();
        let g = params.gamma_hat();
        let d = params.delta();
        let w = params.omega();
        let i = C64::new(0.0, 1.0);
        Self {
            n,
            g,
            m: params.m(),
            k_es: c(-(n * g + 2.0 * n + 0.5 * g + 1.5)) + i * (w - d),
            k_ea: c(n * g - 2.0 * n + 0.5 * g - 1.5) - i * (w + d),
            k_eg: c(-(2.0 * n + 1.0)) - i * (2.0 * d),
            k_sa: c(-(2.0 * n + 1.0)) - i * (2.0 * w),
            k_sg: c(-(n * g + 2.0 * n + 0.5 * g + 0.5)) - i * (w + d),
            k_ag: c(n * g - 2.0 * n + 0.5 * g - 0.5) + i * (w - d),
        }
    }

    /// `dρ/dt` for a collective-basis matrix.
    pub fn eval(&self, r: &Op4) -> Op4 {
        let up = self.upper(r);
        let lo = self.upper(&r.adjoint());
        let mut out = Op4::zeros();
        for row in 0..4 {
            for col in 0..4 {
                out[(row, col)] = if row <= col {
                    up[(row, col)]
                } else {
                    // L(ρ)† = L(ρ†)
                    lo[(col, row)].conj()
                };
            }
        }
        out
    }

    /// Upper triangle (diagonal included) of `L̃ρ`; the lower triangle of the
    /// returned matrix is zero.
    fn upper(&self, r: &Op4) -> Op4 {
        use collective::{A, E, G, S};
        let (n, g, m) = (self.n, self.g, self.m);
        let mc = m.conj();
        let (gp, gm) = (1.0 + g, 1.0 - g);
        let x = |a: usize, b: usize| r[(a, b)];
        let mut o = Op4::zeros();

        o[(E, E)] = -(m * x(G, E) + mc * x(E, G)) * g + x(A, A) * (n * gm)
            - x(E, E) * (2.0 * (n + 1.0))
            + x(S, S) * (n * gp);
        o[(S, S)] = (x(E, E) * (n + 1.0) + mc * x(E, G) + m * x(G, E) + x(G, G) * n
            - x(S, S) * (2.0 * n + 1.0))
            * gp;
        o[(A, A)] = (x(E, E) * (n + 1.0) - mc * x(E, G) - m * x(G, E) + x(G, G) * n
            - x(A, A) * (2.0 * n + 1.0))
            * gm;
        o[(G, G)] = -(m * x(G, E) + mc * x(E, G)) * g - x(G, G) * (2.0 * n)
            + x(A, A) * ((n + 1.0) * gm)
            + x(S, S) * ((n + 1.0) * gp);
        o[(E, G)] = -m * (x(E, E) + x(G, G)) * g - m * x(A, A) * gm
            + m * x(S, S) * gp
            + self.k_eg * x(E, G);

        o[(E, S)] = self.k_es * x(E, S) - m * x(G, S) * g
            + m * x(S, E) * gp
            + x(S, G) * (n * gp);
        o[(E, A)] = self.k_ea * x(E, A) - m * x(G, A) * g + m * x(A, E) * gm
            - x(A, G) * (n * gm);
        o[(S, G)] = self.k_sg * x(S, G) - m * x(S, E) * g
            + x(E, S) * ((n + 1.0) * gp)
            + m * x(G, S) * gp;
        o[(A, G)] = self.k_ag * x(A, G) - m * x(A, E) * g - x(E, A) * ((n + 1.0) * gm)
            + m * x(G, A) * gm;

        o[(S, A)] = self.k_sa * x(S, A);
        o
    }
}

/// `L̃ρ` for a collective-basis state.
pub fn rhs_collective(rho: &DensityMatrix, params: &Params) -> Op4 {
    CollectiveRhs::new(params).eval(rho.to_collective().matrix())
}

/// Structure of the kernel of `L̃` restricted to states.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum StationarySpace {
    /// One-dimensional kernel: the unique stationary state.
    Unique(DensityMatrix),
    /// Two-dimensional kernel spanned by the stationary states with
    /// antisymmetric fidelity 0 and 1; every stationary state is an affine
    /// combination of the two.
    Family {
        at_zero: DensityMatrix,
        at_one: DensityMatrix,
    },
    /// Any other kernel; the raw basis is kept in [`Nullspace::basis`].
    Other,
}

impl StationarySpace {
    /// Member of the fidelity-labelled family.
    pub fn at_fidelity(&self, f: f64) -> Option<DensityMatrix> {
        match self {
            StationarySpace::Family { at_zero, at_one } => {
                let m = at_zero.matrix() * c(1.0 - f) + at_one.matrix() * c(f);
                Some(DensityMatrix::from_matrix_unchecked(m, at_zero.basis()))
            }
            _ => None,
        }
    }
}

/// Numerical kernel of a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Nullspace {
    pub dimension: usize,
    /// Cutoff below which a singular value counts as zero.
    pub threshold: f64,
    /// Smallest singular value above the cutoff.
    pub smallest_nonzero: f64,
    /// Set when the rank decision is within three decades of the cutoff.
    pub ill_conditioned: bool,
    /// Kernel basis as matrices in the generator's basis.
    pub basis: Vec<Op4>,
    pub space: StationarySpace,
}

/// Kernel of `L̃` from a singular-value decomposition of its matrix.
pub fn stationary_space(gen: &Superoperator) -> Nullspace {
    let svd = gen.matrix.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let largest = sigma.max();
    let threshold = NULLSPACE_RTOL * largest;

    let mut basis = Vec::new();
    let mut smallest_nonzero = f64::INFINITY;
    for (k, &s) in sigma.iter().enumerate() {
        if s <= threshold {
            let v: Vec16 = v_t.row(k).adjoint();
            basis.push(unvectorize(&v));
        } else {
            smallest_nonzero = smallest_nonzero.min(s);
        }
    }
    let dimension = basis.len();
    let ill_conditioned = smallest_nonzero < 1e3 * threshold;
    let space = classify(&basis, gen.basis);
    Nullspace {
        dimension,
        threshold,
        smallest_nonzero,
        ill_conditioned,
        basis,
        space,
    }
}

fn hermitize(m: &Op4) -> Op4 {
    (m + m.adjoint()) * c(0.5)
}

fn classify(kernel: &[Op4], basis: Basis) -> StationarySpace {
    match kernel {
        [x] => {
            let tr = x.trace();
            if math::abs(tr) < 1e-12 {
                return StationarySpace::Other;
            }
            let rho = hermitize(&(x / tr));
            StationarySpace::Unique(DensityMatrix::from_matrix_unchecked(rho, basis))
        }
        [x0, x1] => {
            let fid = |x: &Op4| {
                let y = DensityMatrix::from_matrix_unchecked(*x, basis).to_collective();
                y.entry(collective::A, collective::A)
            };
            // Solve for coefficients with (trace, fidelity) = (1, 0) and (1, 1).
            let (t0, t1, f0, f1) = (x0.trace(), x1.trace(), fid(x0), fid(x1));
            let det = t0 * f1 - t1 * f0;
            if math::abs(det) < 1e-12 {
                return StationarySpace::Other;
            }
            let combine = |target_f: f64| {
                let a = (f1 - t1 * target_f) / det;
                let b = (t0 * target_f - f0) / det;
                hermitize(&(x0 * a + x1 * b))
            };
            StationarySpace::Family {
                at_zero: DensityMatrix::from_matrix_unchecked(combine(0.0), basis),
                at_one: DensityMatrix::from_matrix_unchecked(combine(1.0), basis),
            }
        }
        _ => StationarySpace::Other,
    }
}

/// Convergence rate of the slowest decaying mode, `min{−Re λ : λ ≠ 0}` over
/// the generator spectrum. Purely imaginary modes give zero.
pub fn spectral_gap(gen: &Superoperator) -> f64 {
    let eig = nalgebra::Schur::new(gen.matrix)
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let scale = eig.iter().map(|z| math::abs(*z)).fold(0.0, f64::max);
    eig.iter()
        .filter(|z| math::abs(**z) > 1e-9 * scale.max(1.0))
        .map(|z| -z.re)
        .fold(f64::INFINITY, f64::min)
}

/// `‖L̃ρ‖₁`, the entrywise absolute sum of the time derivative.
pub fn stationarity_residual(rhs: &CollectiveRhs, rho_collective: &Op4) -> f64 {
    rhs.eval(rho_collective).iter().map(|z| math::abs(*z)).sum()
}

/// Antisymmetric fidelity of every kernel element, for diagnostics.
pub fn kernel_fidelities(space: &StationarySpace) -> Option<(f64, f64)> {
    match space {
        StationarySpace::Family { at_zero, at_one } => {
            Some((fidelity_antisymmetric(at_zero), fidelity_antisymmetric(at_one)))
        }
        _ => None,
    }
}

/// The generator in the collective basis.
pub fn collective_generator(params: &Params) -> Superoperator {
    build_generator(params).to_collective()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{max_abs, AtomParams, BathParams, Qubit};
    use core::f64::consts::SQRT_2;

    fn params(n: f64, m_abs: f64, phase: f64, gh: f64, w: f64, d: f64) -> Params {
        Params::new(BathParams::new(n, m_abs, phase), AtomParams::new(gh, w, d)).unwrap()
    }

    fn sample_states() -> [DensityMatrix; 4] {
        let plus = Qubit::bloch(1.1, 0.4);
        let minus = Qubit::bloch(2.3, -1.7);
        let mixed = {
            let a = DensityMatrix::product(&plus, &minus).into_matrix();
            let b = DensityMatrix::product(&minus, &Qubit::excited()).into_matrix();
            let s = DensityMatrix::symmetric().to_canonical().into_matrix();
            DensityMatrix::from_matrix_unchecked(a * c(0.5) + b * c(0.3) + s * c(0.2), Basis::Canonical)
        };
        [
            DensityMatrix::product(&plus, &minus),
            DensityMatrix::excited(),
            DensityMatrix::antisymmetric(),
            mixed,
        ]
    }

    #[test]
    fn generator_matches_collective_blocks() {
        let p = params(0.7, 0.6, 1.3, 0.45, 0.35, -0.8);
        let gen = build_generator(&p);
        let rhs = CollectiveRhs::new(&p);
        for rho in sample_states() {
            let via_gen = DensityMatrix::from_matrix_unchecked(gen.apply_state(&rho), rho.basis())
                .to_collective()
                .into_matrix();
            let via_rhs = rhs.eval(rho.to_collective().matrix());
            assert!(max_abs(&(via_gen - via_rhs)) < 1e-12);
        }
    }

    #[test]
    fn trace_row_vanishes() {
        let p = params(1.3, 1.0, 0.2, 0.6, 0.1, 0.9);
        let gen = build_generator(&p);
        // Trace functional picks the diagonal entries 0, 5, 10, 15.
        for col in 0..16 {
            let s: C64 = [0, 5, 10, 15].iter().map(|&r| gen.matrix()[(r, col)]).sum();
            assert!(math::abs(s) < 1e-13);
        }
    }

    #[test]
    fn antisymmetric_state_decouples_in_dicke_limit() {
        let p = params(1.4, 1.1, 2.0, 1.0, 0.3, 0.7);
        let out = build_generator(&p).apply_state(&DensityMatrix::antisymmetric());
        assert!(max_abs(&out) < 1e-12);
        let rhs = CollectiveRhs::new(&p);
        for rho in sample_states() {
            let d = rhs.eval(rho.to_collective().matrix());
            assert_eq!(d[(collective::A, collective::A)], c(0.0));
        }
    }

    #[test]
    fn symmetric_state_decays_with_enhanced_rate_in_vacuum() {
        let gh = 0.6;
        let p = params(0.0, 0.0, 0.0, gh, 0.0, 0.0);
        let d = rhs_collective(&DensityMatrix::symmetric(), &p);
        assert!((d[(collective::S, collective::S)].re + (1.0 + gh)).abs() < 1e-15);
    }

    #[test]
    fn sa_coherence_equation() {
        let (n, w) = (0.8, 0.45);
        let p = params(n, 0.5, 0.3, 0.7, w, 1.1);
        let mut r = Op4::zeros();
        r[(collective::A, collective::S)] = c(1.0);
        let d = CollectiveRhs::new(&p).eval(&r);
        let expected = -(C64::new(1.0 + 2.0 * n, -2.0 * w));
        assert!(math::abs(d[(collective::A, collective::S)] - expected) < 1e-15);
    }

    #[test]
    fn nullspace_dimensions() {
        let sep = stationary_space(&build_generator(&params(1.0, SQRT_2, 0.0, 0.85, 0.0, 0.0)));
        assert_eq!(sep.dimension, 1);
        assert!(matches!(sep.space, StationarySpace::Unique(_)));
        // Ω = 0 at the decoherence-free point: the |a⟩–|N,θ⟩ coherences are
        // stationary as well, so the operator kernel is four-dimensional.
        let dfs = stationary_space(&build_generator(&params(1.0, SQRT_2, 0.0, 1.0, 0.0, 0.0)));
        assert_eq!(dfs.dimension, 4);
        assert_eq!(dfs.space, StationarySpace::Other);
        let dicke = stationary_space(&build_generator(&params(1.0, SQRT_2, 0.0, 1.0, 0.3, 0.0)));
        assert_eq!(dicke.dimension, 2);
        let (f0, f1) = kernel_fidelities(&dicke.space).unwrap();
        assert!(f0.abs() < 1e-12 && (f1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_atoms_in_vacuum_relax_to_ground() {
        let ns = stationary_space(&build_generator(&params(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)));
        match ns.space {
            StationarySpace::Unique(rho) => {
                assert!(rho.max_abs_diff(&DensityMatrix::ground()) < 1e-12)
            }
            other => panic!("expected unique state, got {other:?}"),
        }
    }

    #[test]
    fn vacuum_rates_in_spectrum() {
        let gh = 0.4;
        let gen = build_generator(&params(0.0, 0.0, 0.0, gh, 0.0, 0.0));
        let eig = nalgebra::Schur::new(*gen.matrix()).eigenvalues().unwrap();
        for rate in [1.0 + gh, 1.0 - gh] {
            assert!(eig.iter().any(|z| math::abs(*z + c(rate)) < 1e-10), "missing -{rate}");
        }
        // Slowest mode is the a–g coherence, damped at (γ₀ − γ)/2.
        assert!((spectral_gap(&gen) - 0.5 * (1.0 - gh)).abs() < 1e-10);
    }

    #[test]
    fn collective_superoperator_agrees_with_rhs() {
        let p = params(0.3, 0.2, 4.0, 0.9, -0.2, 0.1);
        let gen = build_generator(&p).to_collective();
        let rhs = CollectiveRhs::new(&p);
        for rho in sample_states() {
            let r = rho.to_collective().into_matrix();
            assert!(max_abs(&(gen.apply(&r) - rhs.eval(&r))) < 1e-12);
        }
    }
}

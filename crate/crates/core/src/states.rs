//! Separable pure states, their canonical two-qubit form, and the diagonal /
//! real product mixed states used by the necessity bound.
//!
//! Any pair of product pure states `|u1^A>|u1^B>`, `|u2^A>|u2^B>` lives in a
//! 2x2-dimensional subspace. [`canonicalize`] picks orthonormal frames there so
//! that the first state becomes `|0>|0>` and the second becomes
//!
//! ```text
//! [1-a1  b1]     [1-a2  b2]
//! [ b1   a1]  (x) [ b2   a2]     with b_i = sqrt(a_i (1 - a_i)) >= 0.
//! ```

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{c, inner, kron_vec, norm, re, ComplexMatrix, HermitianMatrix, C64};

pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Residual below which `u2 - <u1|u2> u1` counts as zero (parallel factors).
const PARALLEL_TOL: f64 = 1e-12;
/// Inputs whose canonical form violates `beta^2 = alpha (1 - alpha)` by more
/// than this are rejected.
pub const PURITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Requires `sum |amplitude|^2 = 1` within [`NORMALIZATION_TOL`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if let Some(k) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        for z in &mut amplitudes {
            *z /= n;
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| re(x)).collect())
    }

    /// Standard basis vector `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amplitudes = vec![re(0.0); dim];
        amplitudes[k] = re(1.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `|<self|other>|^2 = Tr(rho_self rho_other)`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        inner(&self.amplitudes, &other.amplitudes).norm_sqr()
    }

    pub fn density(&self) -> HermitianMatrix {
        HermitianMatrix::projector(&self.amplitudes)
    }
}

/// `|a> (x) |b>` on `H_A (x) H_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureProductState {
    pub a: PureState,
    pub b: PureState,
}

impl PureProductState {
    pub fn new(a: PureState, b: PureState) -> Self {
        Self { a, b }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a.dim(), self.b.dim())
    }

    pub fn vector(&self) -> Vec<C64> {
        kron_vec(self.a.amplitudes(), self.b.amplitudes())
    }

    /// `|a><a| (x) |b><b|` with bipartite dimensions attached.
    pub fn density(&self) -> HermitianMatrix {
        self.a.density().tensor(&self.b.density())
    }

    /// `Tr rho_self rho_other`, the product of the two side overlaps.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.a.fidelity(&other.a) * self.b.fidelity(&other.b)
    }
}

pub fn density(s: &PureProductState) -> HermitianMatrix {
    s.density()
}

/// Canonical form of a pair of separable pure states.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalPair {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Orthonormal 2-frame in `H_A`; `frame_a[0]` is the first state's A factor.
    pub frame_a: [Vec<C64>; 2],
    pub frame_b: [Vec<C64>; 2],
    pub embed_dims: (usize, usize),
}

impl CanonicalPair {
    /// Pair given directly by `(alpha1, alpha2)` on two qubits with standard
    /// frames.
    pub fn from_alphas(alpha1: f64, alpha2: f64) -> Result<Self> {
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::Domain { name, value: a });
            }
        }
        let std = || [PureState::basis(2, 0).amplitudes, PureState::basis(2, 1).amplitudes];
        Ok(Self {
            alpha1,
            alpha2,
            beta1: (alpha1 * (1.0 - alpha1)).sqrt(),
            beta2: (alpha2 * (1.0 - alpha2)).sqrt(),
            frame_a: std(),
            frame_b: std(),
            embed_dims: (2, 2),
        })
    }

    /// `alpha1 + alpha2`.
    pub fn gamma(&self) -> f64 {
        self.alpha1 + self.alpha2
    }

    /// Both states in frame coordinates: `|0>|0>` and
    /// `(sqrt(1-a1), sqrt(a1)) (x) (sqrt(1-a2), sqrt(a2))`.
    pub fn canonical_states(&self) -> (PureProductState, PureProductState) {
        let side = |a: f64| PureState { amplitudes: vec![re((1.0 - a).sqrt()), re(a.sqrt())] };
        (
            PureProductState::new(PureState::basis(2, 0), PureState::basis(2, 0)),
            PureProductState::new(side(self.alpha1), side(self.alpha2)),
        )
    }

    /// The two 4x4 densities in canonical coordinates.
    pub fn canonical_densities(&self) -> (HermitianMatrix, HermitianMatrix) {
        let rho1 = HermitianMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0]).with_bipartite(2, 2).expect("2x2");
        let side = |a: f64, b: f64| HermitianMatrix::from_real(2, &[1.0 - a, b, b, a]).expect("symmetric");
        let rho2 = side(self.alpha1, self.beta1).tensor(&side(self.alpha2, self.beta2));
        (rho1, rho2)
    }

    /// Frame for side A as a `d_A x 2` matrix.
    pub fn frame_matrix_a(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.frame_a)
    }

    pub fn frame_matrix_b(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.frame_b)
    }

    /// The pair mapped back into the original spaces (equal to the inputs of
    /// [`canonicalize`] up to a global phase on the second state).
    pub fn embedded_states(&self) -> (PureProductState, PureProductState) {
        let lift = |f: &[Vec<C64>; 2], a: f64| {
            let (x, y) = ((1.0 - a).sqrt(), a.sqrt());
            PureState { amplitudes: f[0].iter().zip(&f[1]).map(|(p, q)| p * x + q * y).collect() }
        };
        (
            PureProductState::new(
                PureState { amplitudes: self.frame_a[0].clone() },
                PureState { amplitudes: self.frame_b[0].clone() },
            ),
            PureProductState::new(lift(&self.frame_a, self.alpha1), lift(&self.frame_b, self.alpha2)),
        )
    }
}

fn canonical_side(u1: &PureState, u2: &PureState) -> Result<(f64, f64, [Vec<C64>; 2])> {
    let d = u1.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: d });
    }
    if u2.dim() != d {
        return Err(Error::DimensionMismatch { left: d, right: u2.dim() });
    }
    let (v1, v2) = (u1.amplitudes(), u2.amplitudes());
    let ov = inner(v1, v2);
    let mut w: Vec<C64> = v2.iter().zip(v1).map(|(b, a)| b - ov * a).collect();
    let again = inner(v1, &w);
    for (wi, ai) in w.iter_mut().zip(v1) {
        *wi -= again * ai;
    }
    let wn = norm(&w);
    let alpha = (1.0 - ov.norm_sqr()).clamp(0.0, 1.0);

    let second = if wn > PARALLEL_TOL {
        // Absorb the phase of <u1|u2> into the second frame vector so that
        // u2 = e^{i phi} (|c| f0 + |w| f1) and the off-diagonal is real.
        let phase = if ov.norm() > 0.0 { (ov / ov.norm()).conj() } else { re(1.0) };
        w.iter().map(|z| z / wn * phase).collect()
    } else {
        orthogonal_basis_completion(v1)
    };
    let beta = ov.norm() * wn;
    let defect = (beta * beta - alpha * (1.0 - alpha)).abs();
    if defect > PURITY_TOL {
        return Err(Error::NotPure(defect));
    }
    let beta = if wn > PARALLEL_TOL { beta } else { 0.0 };
    Ok((alpha, beta, [v1.to_vec(), second]))
}

/// Lowest-index standard basis vector with a usable component orthogonal to
/// `u`, Gram-Schmidt'd against `u`.
fn orthogonal_basis_completion(u: &[C64]) -> Vec<C64> {
    let d = u.len();
    for k in 0..d {
        let mut e = vec![re(0.0); d];
        e[k] = re(1.0);
        let p = u[k].conj();
        for (ei, ui) in e.iter_mut().zip(u) {
            *ei -= p * ui;
        }
        let q = inner(u, &e);
        for (ei, ui) in e.iter_mut().zip(u) {
            *ei -= q * ui;
        }
        let n = norm(&e);
        if n > 1e-6 {
            return e.into_iter().map(|z| z / n).collect();
        }
    }
    unreachable!("a unit vector in dimension >= 2 has an orthogonal complement")
}

/// Reduces a pair of separable pure states to the canonical two-qubit form.
pub fn canonicalize(s1: &PureProductState, s2: &PureProductState) -> Result<CanonicalPair> {
    let (alpha1, beta1, frame_a) = canonical_side(&s1.a, &s2.a)?;
    let (alpha2, beta2, frame_b) = canonical_side(&s1.b, &s2.b)?;
    Ok(CanonicalPair { alpha1, alpha2, beta1, beta2, frame_a, frame_b, embed_dims: s1.dims() })
}

/// Polar angle of a qubit state on the Bloch sphere, in `[0, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BlochAngle(f64);

impl BlochAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain { name: "theta", value: theta });
        }
        Ok(Self(theta))
    }

    /// Angle whose canonical parameter is `alpha = sin^2(theta / 2)`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain { name: "alpha", value: alpha });
        }
        Ok(Self(2.0 * alpha.sqrt().asin()))
    }

    pub fn theta(self) -> f64 {
        self.0
    }

    pub fn alpha(self) -> f64 {
        let s = (self.0 / 2.0).sin();
        s * s
    }

    pub fn beta(self) -> f64 {
        let h = self.0 / 2.0;
        h.sin() * h.cos()
    }
}

/// Canonical pair for second-state Bloch angles `theta_A`, `theta_B`
/// measured from `|0>`.
pub fn from_bloch(theta_a: BlochAngle, theta_b: BlochAngle) -> CanonicalPair {
    let mut pair = CanonicalPair::from_alphas(theta_a.alpha(), theta_b.alpha()).expect("alpha in [0, 1]");
    pair.beta1 = theta_a.beta();
    pair.beta2 = theta_b.beta();
    pair
}

/// Haar-random state: normalized complex Gaussian vector.
pub fn random_pure_state<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        if let Ok(s) = PureState::normalized(v) {
            return s;
        }
    }
}

/// Deterministic in `seed`.
pub fn random_pure_product(seed: u64, d_a: usize, d_b: usize) -> PureProductState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_pure_state(&mut rng, d_a);
    let b = random_pure_state(&mut rng, d_b);
    PureProductState::new(a, b)
}

/// A pair of two-qubit product states: `rho1 = diag(1-p1, p1) (x) diag(1-p2, p2)`
/// and `rho2 = [[1-a1, b1], [b1, a1]] (x) [[1-a2, b2], [b2, a2]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductMixedState {
    pub p1: f64,
    pub p2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl ProductMixedState {
    pub fn new(p1: f64, p2: f64, alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain { name, value: v });
            }
        }
        for (name, b, a) in [("beta1", beta1, alpha1), ("beta2", beta2, alpha2)] {
            if b.is_nan() || b < 0.0 || b * b > a * (1.0 - a) + 1e-12 {
                return Err(Error::Domain { name, value: b });
            }
        }
        Ok(Self { p1, p2, alpha1, alpha2, beta1, beta2 })
    }

    /// The pure case `p1 = p2 = 0`, `beta_i = sqrt(alpha_i (1 - alpha_i))`.
    pub fn pure(alpha1: f64, alpha2: f64) -> Result<Self> {
        let b = |a: f64| (a * (1.0 - a)).max(0.0).sqrt();
        Self::new(0.0, 0.0, alpha1, alpha2, b(alpha1), b(alpha2))
    }

    pub fn from_canonical(pair: &CanonicalPair) -> Result<Self> {
        Self::new(0.0, 0.0, pair.alpha1, pair.alpha2, pair.beta1, pair.beta2)
    }

    pub fn is_pure_case(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }

    pub fn densities(&self) -> (HermitianMatrix, HermitianMatrix) {
        let diag = |p: f64| HermitianMatrix::diagonal(&[1.0 - p, p]);
        let offd = |a: f64, b: f64| HermitianMatrix::from_real(2, &[1.0 - a, b, b, a]).expect("symmetric");
        (
            diag(self.p1).tensor(&diag(self.p2)),
            offd(self.alpha1, self.beta1).tensor(&offd(self.alpha2, self.beta2)),
        )
    }
}

pub fn mixed_density(m: &ProductMixedState) -> (HermitianMatrix, HermitianMatrix) {
    m.densities()
}

//! Deciding and realizing perfect discrimination of two separable pure
//! states with measurements drawn from the dual of the separable cone.
//!
//! A pair is perfectly distinguishable exactly when
//! `Tr rho1^A rho2^A + Tr rho1^B rho2^B <= 1`, i.e. when the canonical
//! parameters satisfy `gamma = alpha1 + alpha2 >= 1`. The measurement is
//! always of the form `{T1 + Gamma(T1), T2 + Gamma(T2)}` with explicit PSD
//! `T1`, `T2`, so every effect ships with its own membership certificate.

use crate::cone::{is_in_dual_cone_with, ConeMembership, DecompositionCertificate, SeeSawOptions};
use crate::error::{Error, Result};
use crate::linalg::{kron_vec, HermitianMatrix, C64};
use crate::states::{canonicalize, CanonicalPair, PureProductState, PureState};

/// Absolute tolerance on the distinguishability inequality; the boundary
/// `gamma = 1` counts as distinguishable.
pub const VERDICT_TOL: f64 = 1e-12;
/// Default cap on the total dimension of a materialized multicopy space.
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    pub matrix: HermitianMatrix,
    pub certificate: Option<DecompositionCertificate>,
}

impl Effect {
    pub fn certified(t: HermitianMatrix, t_prime: HermitianMatrix) -> Result<Self> {
        let dims = t.bipartite_dims().ok_or(Error::MissingBipartite)?;
        let certificate = DecompositionCertificate { t, t_prime };
        Ok(Self { matrix: certificate.compose(dims)?, certificate: Some(certificate) })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub effects: Vec<Effect>,
}

impl Measurement {
    pub fn new(effects: Vec<Effect>) -> Result<Self> {
        let first = effects.first().ok_or(Error::EffectCount { expected: 1, got: 0 })?.matrix.dim();
        if let Some(e) = effects.iter().find(|e| e.matrix.dim() != first) {
            return Err(Error::DimensionMismatch { left: first, right: e.matrix.dim() });
        }
        Ok(Self { effects })
    }

    pub fn dim(&self) -> usize {
        self.effects[0].matrix.dim()
    }

    pub fn sum(&self) -> HermitianMatrix {
        self.effects
            .iter()
            .map(|e| e.matrix.clone())
            .reduce(|a, b| &a + &b)
            .expect("non-empty")
    }

    /// `||sum_i M_i - I||_F`.
    pub fn completeness_residual(&self) -> f64 {
        (&self.sum() - &HermitianMatrix::identity(self.dim())).frobenius_norm()
    }

    /// Attaches bipartite dimensions to every effect and certificate part.
    pub fn with_bipartite(mut self, d_a: usize, d_b: usize) -> Result<Self> {
        for e in &mut self.effects {
            e.matrix = e.matrix.clone().with_bipartite(d_a, d_b)?;
            if let Some(c) = &mut e.certificate {
                c.t = c.t.clone().with_bipartite(d_a, d_b)?;
                c.t_prime = c.t_prime.clone().with_bipartite(d_a, d_b)?;
            }
        }
        Ok(self)
    }
}

/// Distinguishability of a pair under separable-cone measurements and under
/// ordinary quantum measurements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub sep_distinguishable: bool,
    pub qt_distinguishable: bool,
    /// `Tr rho1^A rho2^A + Tr rho1^B rho2^B`.
    pub lhs_sep: f64,
    /// `Tr rho1^A rho2^A * Tr rho1^B rho2^B`.
    pub lhs_qt: f64,
}

impl Verdict {
    pub fn from_overlaps(overlap_a: f64, overlap_b: f64) -> Self {
        let lhs_sep = overlap_a + overlap_b;
        let lhs_qt = overlap_a * overlap_b;
        Self {
            sep_distinguishable: lhs_sep <= 1.0 + VERDICT_TOL,
            qt_distinguishable: lhs_qt <= VERDICT_TOL,
            lhs_sep,
            lhs_qt,
        }
    }
}

pub fn decide_sep(s1: &PureProductState, s2: &PureProductState) -> Result<Verdict> {
    if s1.dims() != s2.dims() {
        let (l, r) = (s1.dims(), s2.dims());
        return Err(Error::DimensionMismatch { left: l.0 * l.1, right: r.0 * r.1 });
    }
    Ok(Verdict::from_overlaps(s1.a.fidelity(&s2.a), s1.b.fidelity(&s2.b)))
}

pub fn decide_canonical(pair: &CanonicalPair) -> Verdict {
    Verdict::from_overlaps(1.0 - pair.alpha1, 1.0 - pair.alpha2)
}

fn t_matrix(scale: f64, rows: [[f64; 4]; 4]) -> HermitianMatrix {
    let flat: Vec<f64> = rows.iter().flatten().map(|x| x * scale).collect();
    HermitianMatrix::from_real(4, &flat)
        .expect("symmetric by construction")
        .with_bipartite(2, 2)
        .expect("4 = 2 x 2")
}

/// The boundary case `alpha1 + alpha2 = 1`: two constant PSD matrices.
pub fn boundary_t_matrices() -> (HermitianMatrix, HermitianMatrix) {
    let t1 = t_matrix(0.5, [
        [1.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 1.0],
    ]);
    let t2 = t_matrix(0.5, [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ]);
    (t1, t2)
}

/// `T1`, `T2` for `gamma = alpha1 + alpha2 > 1` (both alphas then nonzero).
/// `T1` annihilates the second state's vector and `T2` the first's.
pub fn interior_t_matrices(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> (HermitianMatrix, HermitianMatrix) {
    let g = alpha1 + alpha2;
    assert!(alpha1 > 0.0 && alpha2 > 0.0, "gamma > 1 forces both alphas positive");
    let k = beta1 * beta2 * g / (alpha1 * alpha2);
    let r1 = (g - 1.0) * beta1 / alpha1;
    let r2 = (g - 1.0) * beta2 / alpha2;
    let s = 1.0 / (2.0 * g);
    let t1 = t_matrix(s, [
        [g, 0.0, 0.0, -k],
        [0.0, g - 1.0, 0.0, -r1],
        [0.0, 0.0, g - 1.0, -r2],
        [-k, -r1, -r2, 2.0 - g],
    ]);
    let t2 = t_matrix(s, [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, k, r1],
        [0.0, k, 1.0, r2],
        [0.0, r1, r2, 2.0 * (g - 1.0)],
    ]);
    (t1, t2)
}

/// Perfectly discriminating measurement on the canonical two-qubit subspace
/// (first state `|00>`, basis order `|00>, |01>, |10>, |11>`).
pub fn construct_measurement(pair: &CanonicalPair) -> Result<Measurement> {
    let gamma = pair.gamma();
    if gamma < 1.0 - VERDICT_TOL {
        return Err(Error::NotDistinguishable { gamma });
    }
    let (t1, t2) = if (gamma - 1.0).abs() <= VERDICT_TOL || gamma < 1.0 {
        boundary_t_matrices()
    } else {
        interior_t_matrices(pair.alpha1, pair.alpha2, pair.beta1, pair.beta2)
    };
    Measurement::new(vec![
        Effect::certified(t1.clone(), t1)?,
        Effect::certified(t2.clone(), t2)?,
    ])
}

/// Carries a measurement on the canonical 2x2 subspace into `H_A (x) H_B`.
///
/// With `W = F_A (x) F_B` (the frames as columns), each effect becomes
/// `W M W^dagger`; the certificate `(T, T')` becomes
/// `(W T W^dagger, W' T' W'^dagger)` with `W' = F_A (x) conj(F_B)`, which keeps
/// `T + Gamma(T')` intact. The complement `I - W W^dagger` (PSD) is added to
/// the first effect's `T` so the effects sum to the identity.
pub fn extend_to_full(m: &Measurement, pair: &CanonicalPair) -> Result<Measurement> {
    let (d_a, d_b) = pair.embed_dims;
    if d_a < 2 || d_b < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: d_a.min(d_b) });
    }
    let fa = pair.frame_matrix_a();
    let fb = pair.frame_matrix_b();
    let defect = fa.orthonormality_defect().max(fb.orthonormality_defect());
    if defect > 1e-10 {
        return Err(Error::FrameNotOrthonormal(defect));
    }
    let w = fa.kron(&fb);
    let w_conj_b = fa.kron(&fb.conj());
    let n = d_a * d_b;
    let tag = |h: HermitianMatrix| h.with_bipartite(d_a, d_b);
    let complement = &HermitianMatrix::identity(n) - &HermitianMatrix::identity(4).congruence(&w);

    let mut effects = Vec::with_capacity(m.effects.len());
    for (k, e) in m.effects.iter().enumerate() {
        let extra = if k == 0 { Some(&complement) } else { None };
        let effect = match &e.certificate {
            Some(cert) => {
                let mut t = cert.t.congruence(&w);
                if let Some(q) = extra {
                    t = &t + q;
                }
                Effect::certified(tag(t)?, tag(cert.t_prime.congruence(&w_conj_b))?)?
            }
            None => {
                let mut mat = e.matrix.congruence(&w);
                if let Some(q) = extra {
                    mat = &mat + q;
                }
                Effect { matrix: tag(mat)?, certificate: None }
            }
        };
        effects.push(effect);
    }
    Measurement::new(effects)
}

/// Canonicalize, construct and embed in one step.
pub fn construct_for_states(s1: &PureProductState, s2: &PureProductState) -> Result<(CanonicalPair, Measurement)> {
    let pair = canonicalize(s1, s2)?;
    let m = construct_measurement(&pair)?;
    let full = extend_to_full(&m, &pair)?;
    Ok((pair, full))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminationReport {
    /// `probability_matrix[i][j] = Tr rho_i M_j`.
    pub probability_matrix: Vec<Vec<f64>>,
    pub completeness_residual: f64,
    pub cone_results: Vec<ConeMembership>,
    /// `max_ij |Tr rho_i M_j - delta_ij|`.
    pub max_deviation: f64,
}

impl DiscriminationReport {
    pub fn all_members(&self) -> bool {
        self.cone_results.iter().all(|c| c.member)
    }

    pub fn is_perfect(&self, tol: f64) -> bool {
        self.max_deviation <= tol && self.completeness_residual <= tol && self.all_members()
    }
}

/// Probability matrix, completeness residual and per-effect dual-cone status
/// (certificate when present, see-saw otherwise). Effects inherit the
/// states' bipartite dimensions.
pub fn verify_perfect(
    rho1: &HermitianMatrix,
    rho2: &HermitianMatrix,
    m: &Measurement,
    tol: f64,
) -> Result<DiscriminationReport> {
    verify_states(&[rho1, rho2], m, tol)
}

/// [`verify_perfect`] for any number of states.
pub fn verify_states(states: &[&HermitianMatrix], m: &Measurement, tol: f64) -> Result<DiscriminationReport> {
    verify_states_with(states, m, &SeeSawOptions { tol, ..SeeSawOptions::default() })
}

/// [`verify_states`] with explicit see-saw settings for uncertified effects.
pub fn verify_states_with(
    states: &[&HermitianMatrix],
    m: &Measurement,
    opts: &SeeSawOptions,
) -> Result<DiscriminationReport> {
    let dims = states
        .first()
        .and_then(|r| r.bipartite_dims())
        .ok_or(Error::MissingBipartite)?;
    let n = dims.0 * dims.1;
    for r in states.iter().map(|r| r.dim()).chain(std::iter::once(m.dim())) {
        if r != n {
            return Err(Error::DimensionMismatch { left: n, right: r });
        }
    }
    let m = m.clone().with_bipartite(dims.0, dims.1)?;
    let mut probability_matrix = Vec::with_capacity(states.len());
    let mut max_deviation = 0.0f64;
    for (i, rho) in states.iter().enumerate() {
        let mut row = Vec::with_capacity(m.effects.len());
        for (j, e) in m.effects.iter().enumerate() {
            let p = rho.trace_product(&e.matrix)?;
            let target = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((p - target).abs());
            row.push(p);
        }
        probability_matrix.push(row);
    }
    let cone_results = m
        .effects
        .iter()
        .map(|e| is_in_dual_cone_with(&e.matrix, e.certificate.as_ref(), opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscriminationReport {
        probability_matrix,
        completeness_residual: m.completeness_residual(),
        cone_results,
        max_deviation,
    })
}

/// Smallest `n >= 1` with `2 f^n <= 1`; `2n` copies of each state are then
/// perfectly distinguishable.
pub fn min_copies(f: f64) -> Result<u64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Domain { name: "overlap", value: f });
    }
    if f == 1.0 {
        return Err(Error::IdenticalStates(f));
    }
    if f == 0.0 {
        return Ok(1);
    }
    let holds = |n: u64| 2.0 * f.powf(n as f64) <= 1.0;
    let mut n = ((2f64.ln() / -f.ln()).ceil() as u64).max(1);
    while n > 1 && holds(n - 1) {
        n -= 1;
    }
    while !holds(n) {
        n += 1;
    }
    Ok(n)
}

/// Canonical `alpha` of each side of the `(n : n)` split of `2n` copies,
/// `1 - f^n`, without materializing any vector.
pub fn multicopy_alpha(f: f64, copies_per_side: u32) -> f64 {
    1.0 - f.powi(copies_per_side as i32)
}

#[derive(Clone, Debug)]
pub struct MulticopyMeasurement {
    pub copies_per_side: u32,
    /// `Tr rho1 rho2` for a single copy.
    pub overlap: f64,
    pub pair: CanonicalPair,
    pub rho1: HermitianMatrix,
    pub rho2: HermitianMatrix,
    pub measurement: Measurement,
}

/// Measurement on `(H_A (x) H_B)^{(x) 2n}`, bipartitioned as `n` copies
/// against `n` copies, that perfectly discriminates `rho1^{(x) 2n}` from
/// `rho2^{(x) 2n}`.
pub fn multicopy_measurement(
    s1: &PureProductState,
    s2: &PureProductState,
    copies_per_side: u32,
    dimension_cap: usize,
) -> Result<MulticopyMeasurement> {
    let overlap = s1.overlap(s2);
    if overlap >= 1.0 - VERDICT_TOL {
        return Err(Error::IdenticalStates(overlap));
    }
    let n = copies_per_side.max(1);
    if copies_per_side == 0 || 2.0 * multicopy_alpha(overlap, n) < 1.0 - VERDICT_TOL {
        return Err(Error::CopiesBelowThreshold { copies: copies_per_side, overlap });
    }
    let (d_a, d_b) = s1.dims();
    let side = (d_a * d_b).checked_pow(n).ok_or(Error::DimensionCap { dim: usize::MAX, cap: dimension_cap })?;
    let total = side.checked_mul(side).ok_or(Error::DimensionCap { dim: usize::MAX, cap: dimension_cap })?;
    if total > dimension_cap {
        return Err(Error::DimensionCap { dim: total, cap: dimension_cap });
    }
    let power = |s: &PureProductState| -> Result<PureState> {
        let v = s.vector();
        let mut acc: Vec<C64> = v.clone();
        for _ in 1..n {
            acc = kron_vec(&acc, &v);
        }
        PureState::normalized(acc)
    };
    let (v1, v2) = (power(s1)?, power(s2)?);
    let big1 = PureProductState::new(v1.clone(), v1);
    let big2 = PureProductState::new(v2.clone(), v2);
    let (pair, measurement) = construct_for_states(&big1, &big2)?;
    Ok(MulticopyMeasurement {
        copies_per_side: n,
        overlap,
        pair,
        rho1: big1.density(),
        rho2: big2.density(),
        measurement,
    })
}

/// `d_A d_B` product basis states with the matching projective measurement;
/// every effect is PSD (certificate `(P, 0)`).
pub fn capacity_family(d_a: usize, d_b: usize) -> Result<(Vec<PureProductState>, Measurement)> {
    if d_a == 0 || d_b == 0 {
        return Err(Error::DimensionTooSmall { min: 1, got: 0 });
    }
    let mut states = Vec::with_capacity(d_a * d_b);
    let mut effects = Vec::with_capacity(d_a * d_b);
    for i in 0..d_a {
        for j in 0..d_b {
            let s = PureProductState::new(PureState::basis(d_a, i), PureState::basis(d_b, j));
            let p = s.density();
            let zero = HermitianMatrix::zeros(d_a * d_b).with_bipartite(d_a, d_b)?;
            effects.push(Effect::certified(p, zero)?);
            states.push(s);
        }
    }
    Ok((states, Measurement::new(effects)?))
}

//! Membership in the dual of the separable cone, and the structure every
//! perfectly discriminating two-qubit measurement must have.
//!
//! Two membership routes are provided. A decomposition certificate
//! `Y = T + Gamma(T')` with `T, T'` PSD proves membership in any dimension
//! (and such a certificate exists for every member when both sides are
//! qubits). Without a certificate, [`block_positivity_min`] minimizes
//! `<a (x) b| Y |a (x) b>` over product vectors by alternating exact
//! eigen-minimization. A negative value found that way is a certified
//! non-membership witness; a non-negative value is strong evidence only.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::discrimination::{Effect, Measurement};
use crate::error::{Error, Result};
use crate::linalg::{c, re, HermitianMatrix, C64};
use crate::par::{map_indexed, Parallelism};
use crate::states::{random_pure_state, ProductMixedState, PureProductState, PureState};

/// Default absolute tolerance on the minimum product expectation.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-8;
/// See-saw stops once an iteration changes the objective by less than this.
pub const SEE_SAW_STATIONARY: f64 = 1e-12;
const GRID_STARTS: usize = 12;

/// `Y = T + Gamma(T')` with `T`, `T'` positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionCertificate {
    pub t: HermitianMatrix,
    pub t_prime: HermitianMatrix,
}

impl DecompositionCertificate {
    pub fn symmetric(t: HermitianMatrix) -> Self {
        Self { t_prime: t.clone(), t }
    }

    /// `T + Gamma(T')`, using `dims` when the parts carry no bipartite tag.
    pub fn compose(&self, dims: (usize, usize)) -> Result<HermitianMatrix> {
        let tp = with_dims(&self.t_prime, dims)?;
        Ok(&with_dims(&self.t, dims)? + &tp.partial_transpose()?)
    }
}

fn with_dims(m: &HermitianMatrix, dims: (usize, usize)) -> Result<HermitianMatrix> {
    match m.bipartite_dims() {
        Some(d) if d == dims => Ok(m.clone()),
        _ => m.clone().with_bipartite(dims.0, dims.1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipMethod {
    Certificate,
    SeeSaw,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeMembership {
    pub member: bool,
    /// See-saw: best `<ab|Y|ab>` found. Certificate: the lower bound
    /// `lambda_min(T) + lambda_min(T')` on the minimum product expectation,
    /// valid when the decomposition residual is small.
    pub min_product_value: f64,
    pub witness_vector: Option<PureProductState>,
    pub method: MembershipMethod,
    /// False when the best see-saw run hit its iteration cap.
    pub converged: bool,
    /// `||Y - (T + Gamma(T'))||_F` on the certificate route.
    pub certificate_residual: Option<f64>,
}

/// Checks `Y = T + Gamma(T')` within `tol * max(1, ||Y||_F)` (Frobenius) and
/// `T`, `T'` PSD within `tol * max(1, ||.||_F)`.
pub fn verify_certificate(
    y: &HermitianMatrix,
    t: &HermitianMatrix,
    t_prime: &HermitianMatrix,
    tol: f64,
) -> Result<ConeMembership> {
    let dims = y.bipartite_dims().ok_or(Error::MissingBipartite)?;
    for m in [t, t_prime] {
        if m.dim() != y.dim() {
            return Err(Error::DimensionMismatch { left: y.dim(), right: m.dim() });
        }
    }
    let cert = DecompositionCertificate { t: t.clone(), t_prime: t_prime.clone() };
    let residual = (y - &cert.compose(dims)?).frobenius_norm();
    let lt = t.min_eigenvalue()?;
    let ltp = t_prime.min_eigenvalue()?;
    let psd = lt >= -tol * t.frobenius_norm().max(1.0) && ltp >= -tol * t_prime.frobenius_norm().max(1.0);
    Ok(ConeMembership {
        member: psd && residual <= tol * y.frobenius_norm().max(1.0),
        min_product_value: lt + ltp,
        witness_vector: None,
        method: MembershipMethod::Certificate,
        converged: true,
        certificate_residual: Some(residual),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SeeSawOptions {
    pub restarts: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub parallelism: Parallelism,
}

impl Default for SeeSawOptions {
    fn default() -> Self {
        Self { restarts: 24, iters: 200, tol: DEFAULT_MEMBERSHIP_TOL, seed: 0, parallelism: Parallelism::Parallel }
    }
}

/// One see-saw trajectory.
#[derive(Clone, Debug)]
pub struct SeeSawRun {
    /// Objective after every half-step.
    pub values: Vec<f64>,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub converged: bool,
}

impl SeeSawRun {
    pub fn value(&self) -> f64 {
        *self.values.last().expect("at least one half-step")
    }
}

/// `(<a| (x) I) Y (|a> (x) I)`.
fn contract_a(y: &HermitianMatrix, a: &[C64], (da, db): (usize, usize)) -> Result<HermitianMatrix> {
    let n = da * db;
    let e = y.entries();
    HermitianMatrix::from_fn(db, |k, l| {
        let mut acc = re(0.0);
        for i in 0..da {
            let ai = a[i].conj();
            for j in 0..da {
                acc += ai * a[j] * e[(i * db + k) * n + j * db + l];
            }
        }
        acc
    })
}

/// `(I (x) <b|) Y (I (x) |b>)`.
fn contract_b(y: &HermitianMatrix, b: &[C64], (da, db): (usize, usize)) -> Result<HermitianMatrix> {
    let n = da * db;
    let e = y.entries();
    HermitianMatrix::from_fn(da, |i, j| {
        let mut acc = re(0.0);
        for k in 0..db {
            let bk = b[k].conj();
            for l in 0..db {
                acc += bk * b[l] * e[(i * db + k) * n + j * db + l];
            }
        }
        acc
    })
}

fn lowest(m: &HermitianMatrix) -> Result<(f64, Vec<C64>)> {
    let e = m.eig()?;
    Ok((e.values[0], e.vector(0)))
}

/// Runs the alternation from a fixed A-side start.
pub fn see_saw_from(y: &HermitianMatrix, a0: &[C64], iters: usize) -> Result<SeeSawRun> {
    let dims = y.bipartite_dims().ok_or(Error::MissingBipartite)?;
    if a0.len() != dims.0 {
        return Err(Error::DimensionMismatch { left: dims.0, right: a0.len() });
    }
    let mut a = a0.to_vec();
    let mut b = Vec::new();
    let mut values = Vec::with_capacity(2 * iters.max(1));
    let mut converged = false;
    let mut prev = f64::INFINITY;
    for _ in 0..iters.max(1) {
        let (vb, nb) = lowest(&contract_a(y, &a, dims)?)?;
        b = nb;
        values.push(vb);
        let (va, na) = lowest(&contract_b(y, &b, dims)?)?;
        a = na;
        values.push(va);
        if (prev - va).abs() < SEE_SAW_STATIONARY {
            converged = true;
            break;
        }
        prev = va;
    }
    Ok(SeeSawRun { values, a, b, converged })
}

/// Deterministic spread of starting states on the A side: the 12 icosahedron
/// vertices on the Bloch sphere for qubits, basis vectors and their pairwise
/// superpositions otherwise.
pub fn grid_starts(d: usize) -> Vec<Vec<C64>> {
    if d == 2 {
        let g = (1.0 + 5f64.sqrt()) / 2.0;
        let mut pts = Vec::with_capacity(12);
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                pts.push([0.0, s1, s2 * g]);
                pts.push([s1, s2 * g, 0.0]);
                pts.push([s2 * g, 0.0, s1]);
            }
        }
        return pts
            .into_iter()
            .map(|[x, y, z]| {
                let r = (x * x + y * y + z * z).sqrt();
                let theta = (z / r).acos();
                let phi = y.atan2(x);
                vec![re((theta / 2.0).cos()), C64::from_polar((theta / 2.0).sin(), phi)]
            })
            .collect();
    }
    let mut out: Vec<Vec<C64>> = (0..d).map(|k| PureState::basis(d, k).amplitudes().to_vec()).collect();
    'outer: for i in 0..d {
        for j in (i + 1)..d {
            for ph in [re(1.0), c(0.0, 1.0), re(-1.0)] {
                if out.len() >= GRID_STARTS {
                    break 'outer;
                }
                let mut v = vec![re(0.0); d];
                v[i] = re(FRAC_1_SQRT_2);
                v[j] = ph * FRAC_1_SQRT_2;
                out.push(v);
            }
        }
    }
    out.truncate(GRID_STARTS);
    out
}

/// Minimum of `<a (x) b| Y |a (x) b>` over product unit vectors by multi-start
/// see-saw. Restarts are independent and run in parallel when enabled; the
/// reduction keeps the lowest value (ties go to the lower restart index).
pub fn block_positivity_min(y: &HermitianMatrix, opts: &SeeSawOptions) -> Result<ConeMembership> {
    let (da, _) = y.bipartite_dims().ok_or(Error::MissingBipartite)?;
    let mut starts = grid_starts(da);
    starts.truncate(opts.restarts.min(GRID_STARTS));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    while starts.len() < opts.restarts.max(1) {
        starts.push(random_pure_state(&mut rng, da).amplitudes().to_vec());
    }
    let runs = map_indexed(starts.len(), opts.parallelism, |k| see_saw_from(y, &starts[k], opts.iters));
    let mut best: Option<SeeSawRun> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.value() < b.value()) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let value = best.value();
    let witness = PureProductState::new(PureState::normalized(best.a.clone())?, PureState::normalized(best.b.clone())?);
    Ok(ConeMembership {
        member: value >= -opts.tol,
        min_product_value: value,
        witness_vector: Some(witness),
        method: MembershipMethod::SeeSaw,
        converged: best.converged,
        certificate_residual: None,
    })
}

/// Certificate route when one is supplied, see-saw with default settings
/// otherwise.
pub fn is_in_dual_cone(
    y: &HermitianMatrix,
    certificate: Option<&DecompositionCertificate>,
    tol: f64,
) -> Result<ConeMembership> {
    is_in_dual_cone_with(y, certificate, &SeeSawOptions { tol, ..SeeSawOptions::default() })
}

/// [`is_in_dual_cone`] with explicit see-saw settings; `opts.tol` is also the
/// certificate tolerance.
pub fn is_in_dual_cone_with(
    y: &HermitianMatrix,
    certificate: Option<&DecompositionCertificate>,
    opts: &SeeSawOptions,
) -> Result<ConeMembership> {
    match certificate {
        Some(cert) => verify_certificate(y, &cert.t, &cert.t_prime, opts.tol),
        None => block_positivity_min(y, opts),
    }
}

/// Replaces each certificate `(S, S')` by `(T, T)` with `T = (S + S') / 2`.
/// Statistics on partial-transpose-invariant states are unchanged.
pub fn symmetrize(effects: &[Effect]) -> Result<Vec<Effect>> {
    effects
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let cert = e.certificate.as_ref().ok_or(Error::MissingCertificate(k))?;
            let dims = e.matrix.bipartite_dims().ok_or(Error::MissingBipartite)?;
            let t = (&with_dims(&cert.t, dims)? + &with_dims(&cert.t_prime, dims)?).scale(0.5);
            let matrix = &t + &t.partial_transpose()?;
            Ok(Effect { matrix, certificate: Some(DecompositionCertificate::symmetric(t)) })
        })
        .collect()
}

/// Free parameters of a two-qubit `T` with `T + Gamma(T) = I`:
///
/// ```text
///       [ 1/2   -i x1    0     -z   ]
///   T = [ i x1   1/2     z      0   ]
///       [  0    conj z  1/2   -i x2 ]
///       [-conj z  0     i x2   1/2  ]
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TParams {
    pub x1: f64,
    pub x2: f64,
    pub z: C64,
}

impl TParams {
    pub fn to_matrix(&self) -> HermitianMatrix {
        let (x1, x2, z) = (self.x1, self.x2, self.z);
        let h = re(0.5);
        let o = re(0.0);
        HermitianMatrix::new(
            4,
            vec![
                h, c(0.0, -x1), o, -z,
                c(0.0, x1), h, z, o,
                o, z.conj(), h, c(0.0, -x2),
                -z.conj(), o, c(0.0, x2), h,
            ],
        )
        .expect("pattern is Hermitian")
        .with_bipartite(2, 2)
        .expect("4 = 2 x 2")
    }
}

const PATTERN_TOL: f64 = 1e-9;

pub fn extract_t_params(t: &HermitianMatrix) -> Result<TParams> {
    if t.dim() != 4 {
        return Err(Error::DimensionMismatch { left: 4, right: t.dim() });
    }
    let t = with_dims(t, (2, 2))?;
    let resid = (&(&t + &t.partial_transpose()?) - &HermitianMatrix::identity(4)).frobenius_norm();
    if resid > PATTERN_TOL {
        return Err(Error::NotUnitDecomposition(resid));
    }
    let z = t.get(1, 2);
    let x1 = -t.get(0, 1).im;
    let x2 = -t.get(2, 3).im;
    let expected = TParams { x1, x2, z }.to_matrix();
    for i in 0..4 {
        for j in 0..4 {
            let deviation = (t.get(i, j) - expected.get(i, j)).norm();
            if deviation > PATTERN_TOL {
                return Err(Error::PatternViolation { row: i, col: j, deviation });
            }
        }
    }
    Ok(TParams { x1, x2, z })
}

/// Necessary condition on a perfectly distinguishable product pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NecessityReport {
    /// `Tr rho1 rho2`.
    pub trace_overlap: f64,
    /// `beta1 beta2 |(2 p1 - 1)(2 p2 - 1)|`.
    pub bound: f64,
    pub satisfied: bool,
    /// `alpha1 + alpha2` when `p1 = p2 = 0`; the pure-case reading of the
    /// bound is `alpha1 + alpha2 >= 1`.
    pub pure_condition: Option<f64>,
}

impl NecessityReport {
    pub fn pure_condition_holds(&self) -> Option<bool> {
        self.pure_condition.map(|g| g >= 1.0 - 1e-12)
    }
}

pub fn necessity_bound(m: &ProductMixedState) -> Result<NecessityReport> {
    let (rho1, rho2) = m.densities();
    let trace_overlap = rho1.trace_product(&rho2)?;
    let bound = m.beta1 * m.beta2 * ((2.0 * m.p1 - 1.0) * (2.0 * m.p2 - 1.0)).abs();
    Ok(NecessityReport {
        trace_overlap,
        bound,
        satisfied: trace_overlap <= bound + 1e-10,
        pure_condition: m.is_pure_case().then_some(m.alpha1 + m.alpha2),
    })
}

/// Residual of `Tr rho1 rho2 = 2 Re(z) beta1 beta2 (2 p1 - 1)(2 p2 - 1)` for a
/// two-effect measurement that discriminates the pair perfectly. Each
/// certificate `(S, S')` is symmetrized before `z` is read off
/// `T = T1 + T2`.
pub fn verify_overlap_identity(m: &ProductMixedState, measurement: &Measurement, tol: f64) -> Result<f64> {
    if measurement.effects.len() != 2 {
        return Err(Error::EffectCount { expected: 2, got: measurement.effects.len() });
    }
    let measurement = &measurement.clone().with_bipartite(2, 2)?;
    let (rho1, rho2) = m.densities();
    let mut worst = 0.0f64;
    for (i, rho) in [&rho1, &rho2].into_iter().enumerate() {
        for (j, eff) in measurement.effects.iter().enumerate() {
            let p = rho.trace_product(&eff.matrix)?;
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p - target).abs());
        }
    }
    if worst > tol {
        return Err(Error::NotPerfect(worst));
    }
    let sym = symmetrize(&measurement.effects)?;
    let t_sum = sym
        .iter()
        .map(|e| e.certificate.as_ref().expect("symmetrize attaches certificates").t.clone())
        .reduce(|a, b| &a + &b)
        .expect("two effects");
    let params = extract_t_params(&t_sum)?;
    let overlap = rho1.trace_product(&rho2)?;
    let rhs = 2.0 * params.z.re * m.beta1 * m.beta2 * (2.0 * m.p1 - 1.0) * (2.0 * m.p2 - 1.0);
    Ok((overlap - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrimination::construct_measurement;
    use crate::states::CanonicalPair;

    fn half_swap() -> HermitianMatrix {
        let s = FRAC_1_SQRT_2;
        HermitianMatrix::projector(&[re(s), re(0.0), re(0.0), re(s)])
            .with_bipartite(2, 2)
            .unwrap()
            .partial_transpose()
            .unwrap()
    }

    fn example_one_t1() -> HermitianMatrix {
        HermitianMatrix::from_real(4, &[
            0.5, 0.0, 0.0, -0.5,
            0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0,
            -0.5, 0.0, 0.0, 0.5,
        ])
        .unwrap()
        .with_bipartite(2, 2)
        .unwrap()
    }

    #[test]
    fn certificate_examples() {
        let t1 = example_one_t1();
        let y = &t1 + &t1.partial_transpose().unwrap();
        let ok = verify_certificate(&y, &t1, &t1, 1e-9).unwrap();
        assert!(ok.member);
        assert_eq!(ok.method, MembershipMethod::Certificate);

        let i4 = HermitianMatrix::identity(4).with_bipartite(2, 2).unwrap();
        let half = i4.scale(0.5);
        assert!(verify_certificate(&i4, &half, &half, 1e-9).unwrap().member);

        let wrong = verify_certificate(&i4, &t1, &t1, 1e-9).unwrap();
        assert!(!wrong.member);
        assert_eq!(wrong.method, MembershipMethod::Certificate);
    }

    #[test]
    fn certificate_rejects_non_psd_parts() {
        let i4 = HermitianMatrix::identity(4).with_bipartite(2, 2).unwrap();
        let t = HermitianMatrix::diagonal(&[1.5, 0.5, 0.5, 0.5]).with_bipartite(2, 2).unwrap();
        let tp = HermitianMatrix::diagonal(&[-0.5, 0.5, 0.5, 0.5]).with_bipartite(2, 2).unwrap();
        // T + Gamma(T') = I exactly, but T' is not PSD.
        let r = verify_certificate(&i4, &t, &tp, 1e-9).unwrap();
        assert!(r.certificate_residual.unwrap() < 1e-15);
        assert!(!r.member);
    }

    #[test]
    fn see_saw_on_psd_and_half_swap() {
        let opts = SeeSawOptions::default();
        let g = HermitianMatrix::from_real(4, &[
            2.0, 0.3, 0.0, 0.1,
            0.3, 1.0, 0.2, 0.0,
            0.0, 0.2, 1.5, 0.4,
            0.1, 0.0, 0.4, 0.8,
        ])
        .unwrap()
        .with_bipartite(2, 2)
        .unwrap();
        assert!(g.is_psd(0.0));
        assert!(block_positivity_min(&g, &opts).unwrap().member);

        let hs = half_swap();
        assert!(!hs.is_psd(1e-10));
        let r = block_positivity_min(&hs, &opts).unwrap();
        assert!(r.member);
        assert!(r.min_product_value.abs() <= 1e-8, "{}", r.min_product_value);
    }

    #[test]
    fn see_saw_finds_diagonal_witness() {
        let y = HermitianMatrix::diagonal(&[1.0, -0.1, 1.0, 1.0]).with_bipartite(2, 2).unwrap();
        let r = block_positivity_min(&y, &SeeSawOptions::default()).unwrap();
        assert!(!r.member);
        assert!((r.min_product_value + 0.1).abs() < 1e-12);
        let w = r.witness_vector.unwrap();
        assert!(w.a.fidelity(&PureState::basis(2, 0)) > 1.0 - 1e-12);
        assert!(w.b.fidelity(&PureState::basis(2, 1)) > 1.0 - 1e-12);
        assert!((y.expectation(&w.vector()) + 0.1).abs() < 1e-12);
    }

    #[test]
    fn see_saw_values_never_increase() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let g: Vec<C64> = (0..16).map(|_| random_pure_state(&mut rng, 1).amplitudes()[0] * 0.7).collect();
            let y = HermitianMatrix::from_fn(4, |i, j| (g[i * 4 + j] + g[j * 4 + i].conj()) * 0.5)
                .unwrap()
                .with_bipartite(2, 2)
                .unwrap();
            let start = random_pure_state(&mut rng, 2);
            let run = see_saw_from(&y, start.amplitudes(), 200).unwrap();
            for w in run.values.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "{:?}", run.values);
            }
        }
    }

    #[test]
    fn dual_cone_trivial_cases() {
        let neg = HermitianMatrix::identity(4).scale(-1.0).with_bipartite(2, 2).unwrap();
        assert!(!is_in_dual_cone(&neg, None, 1e-8).unwrap().member);
        let zero = HermitianMatrix::zeros(4).with_bipartite(2, 2).unwrap();
        assert!(is_in_dual_cone(&zero, None, 1e-8).unwrap().member);
        assert_eq!(is_in_dual_cone(&HermitianMatrix::identity(4), None, 1e-8), Err(Error::MissingBipartite));
    }

    #[test]
    fn see_saw_works_beyond_qubits() {
        // Gamma of the maximally entangled projector on 3x3 is SWAP/3: block
        // positive with minimum 0.
        let mut v = vec![re(0.0); 9];
        for k in 0..3 {
            v[k * 3 + k] = re(1.0 / 3f64.sqrt());
        }
        let y = HermitianMatrix::projector(&v).with_bipartite(3, 3).unwrap().partial_transpose().unwrap();
        let r = block_positivity_min(&y, &SeeSawOptions::default()).unwrap();
        assert!(r.member && r.min_product_value.abs() < 1e-8);
        let d = HermitianMatrix::diagonal(&[1.0, 1.0, 1.0, 1.0, 1.0, -0.2]).with_bipartite(3, 2).unwrap();
        let r = block_positivity_min(&d, &SeeSawOptions::default()).unwrap();
        assert!(!r.member && (r.min_product_value + 0.2).abs() < 1e-12);
    }

    #[test]
    fn symmetrize_examples() {
        let s = HermitianMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0]).with_bipartite(2, 2).unwrap();
        let sp = HermitianMatrix::diagonal(&[0.0, 0.0, 0.0, 1.0]).with_bipartite(2, 2).unwrap();
        let y = &s + &sp.partial_transpose().unwrap();
        let eff = Effect { matrix: y.clone(), certificate: Some(DecompositionCertificate { t: s, t_prime: sp }) };
        let out = symmetrize(std::slice::from_ref(&eff)).unwrap();
        let t = &out[0].certificate.as_ref().unwrap().t;
        assert!(t.max_abs_diff(&HermitianMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5])) < 1e-15);
        for seed in 0..20 {
            let m = ProductMixedState::new(
                0.05 * seed as f64,
                0.3,
                0.4,
                0.9,
                (0.24f64).sqrt() * 0.5,
                0.3,
            )
            .unwrap();
            let (r1, r2) = m.densities();
            for rho in [&r1, &r2] {
                let before = rho.trace_product(&eff.matrix).unwrap();
                let after = rho.trace_product(&out[0].matrix).unwrap();
                assert!((before - after).abs() < 1e-14);
            }
        }

        let m = construct_measurement(&CanonicalPair::from_alphas(0.7, 0.6).unwrap()).unwrap();
        let again = symmetrize(&m.effects).unwrap();
        for (a, b) in m.effects.iter().zip(&again) {
            assert!(a.matrix.max_abs_diff(&b.matrix) < 1e-15);
        }

        let bare = Effect { matrix: y, certificate: None };
        assert_eq!(symmetrize(&[bare]), Err(Error::MissingCertificate(0)));
    }

    #[test]
    fn t_params_examples() {
        let half = HermitianMatrix::identity(4).scale(0.5);
        let p = extract_t_params(&half).unwrap();
        assert_eq!((p.x1, p.x2, p.z), (0.0, 0.0, re(0.0)));

        let m = construct_measurement(&CanonicalPair::from_alphas(0.5, 0.5).unwrap()).unwrap();
        let t = &m.effects[0].certificate.as_ref().unwrap().t + &m.effects[1].certificate.as_ref().unwrap().t;
        let p = extract_t_params(&t).unwrap();
        assert_eq!((p.x1, p.x2), (0.0, 0.0));
        assert!((p.z - re(0.5)).norm() < 1e-15);

        let (a1, a2) = (0.6, 0.6);
        let m = construct_measurement(&CanonicalPair::from_alphas(a1, a2).unwrap()).unwrap();
        let t = &m.effects[0].certificate.as_ref().unwrap().t + &m.effects[1].certificate.as_ref().unwrap().t;
        let p = extract_t_params(&t).unwrap();
        let b = (a1 * (1.0 - a1)).sqrt();
        assert!((p.z - re(b * b / (2.0 * a1 * a2))).norm() < 1e-15);

        let complex = TParams { x1: 0.1, x2: -0.2, z: c(0.2, 0.1) };
        let back = extract_t_params(&complex.to_matrix()).unwrap();
        assert!((back.z - complex.z).norm() < 1e-15 && (back.x1 - 0.1).abs() < 1e-15);
    }

    #[test]
    fn t_params_errors() {
        assert!(matches!(extract_t_params(&HermitianMatrix::identity(4)), Err(Error::NotUnitDecomposition(_))));
        assert!(matches!(extract_t_params(&HermitianMatrix::identity(2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn necessity_examples() {
        let b = 0.24f64.sqrt();
        let r = necessity_bound(&ProductMixedState::new(0.0, 0.0, 0.6, 0.6, b, b).unwrap()).unwrap();
        assert!((r.trace_overlap - 0.16).abs() < 1e-15);
        assert!((r.bound - 0.24).abs() < 1e-15);
        assert!(r.satisfied);
        assert!((r.pure_condition.unwrap() - 1.2).abs() < 1e-15);

        let r = necessity_bound(&ProductMixedState::new(0.0, 0.0, 0.5, 0.5, 0.0, 0.5).unwrap()).unwrap();
        assert_eq!(r.bound, 0.0);
        assert!(!r.satisfied);
        let orth = necessity_bound(&ProductMixedState::new(0.0, 0.0, 1.0, 0.5, 0.0, 0.5).unwrap()).unwrap();
        assert!(orth.satisfied && orth.trace_overlap == 0.0);

        let r = necessity_bound(&ProductMixedState::new(0.5, 0.1, 0.5, 0.5, 0.5, 0.5).unwrap()).unwrap();
        assert_eq!(r.bound, 0.0);
        assert_eq!(r.pure_condition, None);
    }

    #[test]
    fn overlap_identity_examples() {
        for (a1, a2) in [(0.5, 0.5), (0.3, 0.7), (0.6, 0.6), (0.9, 0.45)] {
            let pair = CanonicalPair::from_alphas(a1, a2).unwrap();
            let m = construct_measurement(&pair).unwrap();
            let st = ProductMixedState::pure(a1, a2).unwrap();
            let r = verify_overlap_identity(&st, &m, 1e-10).unwrap();
            assert!(r <= 1e-12, "({a1},{a2}) residual {r}");
        }
        // orthogonal pair, projective measurement written as T + Gamma(T)
        let st = ProductMixedState::pure(1.0, 0.3).unwrap();
        let e1 = HermitianMatrix::diagonal(&[1.0, 1.0, 0.0, 0.0]).with_bipartite(2, 2).unwrap();
        let e2 = HermitianMatrix::diagonal(&[0.0, 0.0, 1.0, 1.0]).with_bipartite(2, 2).unwrap();
        let m = Measurement::new(vec![
            Effect { certificate: Some(DecompositionCertificate::symmetric(e1.scale(0.5))), matrix: e1 },
            Effect { certificate: Some(DecompositionCertificate::symmetric(e2.scale(0.5))), matrix: e2 },
        ])
        .unwrap();
        assert_eq!(verify_overlap_identity(&st, &m, 1e-10).unwrap(), 0.0);

        let bad = ProductMixedState::pure(0.3, 0.3).unwrap();
        let m = construct_measurement(&CanonicalPair::from_alphas(0.5, 0.5).unwrap()).unwrap();
        assert!(matches!(verify_overlap_identity(&bad, &m, 1e-10), Err(Error::NotPerfect(_))));
    }
}

//! Batch evaluation: the `(alpha1, alpha2)` region grid and seeded random
//! soundness sweeps. Grid points and samples are independent, so both run
//! through [`crate::par`].

use std::io::{self, Write};

use crate::cone::{necessity_bound, NecessityReport};
use crate::discrimination::{construct_for_states, decide_canonical, decide_sep, verify_perfect, DiscriminationReport, Verdict};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Parallelism};
use crate::states::{canonicalize, random_pure_product, CanonicalPair, ProductMixedState};

pub const SWEEP_HEADER: &str = "alpha1,alpha2,gamma,sep_ok,qt_ok,trace_overlap";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma: f64,
    pub sep_ok: bool,
    pub qt_ok: bool,
    /// `Tr rho1 rho2 = (1 - alpha1)(1 - alpha2)`.
    pub trace_overlap: f64,
}

impl SweepRow {
    pub fn at(alpha1: f64, alpha2: f64) -> Self {
        let pair = CanonicalPair::from_alphas(alpha1, alpha2).expect("grid inside [0, 1]");
        let v: Verdict = decide_canonical(&pair);
        Self {
            alpha1,
            alpha2,
            gamma: pair.gamma(),
            sep_ok: v.sep_distinguishable,
            qt_ok: v.qt_distinguishable,
            trace_overlap: v.lhs_qt,
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.alpha1, self.alpha2, self.gamma, self.sep_ok, self.qt_ok, self.trace_overlap
        )
    }
}

/// Grid values `0, step, 2 step, ...` up to 1.
pub fn grid_values(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::Domain { name: "grid_step", value: step });
    }
    let m = (1.0 / step + 1e-9).floor() as usize;
    Ok((0..=m).map(|i| (i as f64 * step).min(1.0)).collect())
}

/// Rows in `alpha1`-major order regardless of `mode`.
pub fn sweep_grid(step: f64, mode: Parallelism) -> Result<Vec<SweepRow>> {
    let vals = grid_values(step)?;
    let k = vals.len();
    Ok(map_indexed(k * k, mode, |idx| SweepRow::at(vals[idx / k], vals[idx % k])))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

/// Outcome of deciding, constructing and verifying one random pair.
#[derive(Clone, Debug)]
pub struct PairCheck {
    pub seed: u64,
    pub verdict: Verdict,
    pub pair: CanonicalPair,
    /// Present iff construction succeeded.
    pub report: Option<DiscriminationReport>,
    /// Necessity bound on the canonical (pure) form.
    pub necessity: NecessityReport,
}

pub fn check_random_pair(seed: u64, dims: (usize, usize), tol: f64) -> Result<PairCheck> {
    let s1 = random_pure_product(seed.wrapping_mul(2), dims.0, dims.1);
    let s2 = random_pure_product(seed.wrapping_mul(2).wrapping_add(1), dims.0, dims.1);
    let verdict = decide_sep(&s1, &s2)?;
    let pair = canonicalize(&s1, &s2)?;
    let report = match construct_for_states(&s1, &s2) {
        Ok((_, m)) => Some(verify_perfect(&s1.density(), &s2.density(), &m, tol)?),
        Err(Error::NotDistinguishable { .. }) => None,
        Err(e) => return Err(e),
    };
    let necessity = necessity_bound(&ProductMixedState::from_canonical(&pair)?)?;
    Ok(PairCheck { seed, verdict, pair, report, necessity })
}

/// `count` independent [`check_random_pair`] runs seeded `base_seed + i`.
pub fn soundness_sweep(
    count: usize,
    base_seed: u64,
    dims: (usize, usize),
    tol: f64,
    mode: Parallelism,
) -> Result<Vec<PairCheck>> {
    map_indexed(count, mode, |i| check_random_pair(base_seed.wrapping_add(i as u64), dims, tol))
        .into_iter()
        .collect()
}

//! Random sign-vector fingerprint sets.
//!
//! Vectors are drawn uniformly from `{+1, -1}^d / √d` and stored as sign bits
//! (a set bit means `-1/√d`). Two vectors agreeing in `a` coordinates have
//! inner product exactly `(2a - d)/d`, so audits work with integer counts.

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::qstate::{ceil_log2, PureState};
use crate::rng;
use crate::scalar::{Real, Scalar};

/// Largest set size accepted by the all-pairs audit.
pub const AUDIT_MAX_COUNT: usize = 1 << 14;
/// Relative singular-value threshold for numerical rank.
pub const RANK_RTOL: f64 = 1e-9;

fn check_open_unit(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// Smallest integer `d >= 4n / (δ² log₂ e)`.
pub fn required_dimension(n: u32, delta: f64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    check_open_unit(delta)?;
    Ok((4.0 * n as f64 / (delta * delta * std::f64::consts::LOG2_E)).ceil() as u64)
}

/// `log₂` of the union bound `2^{2n - δ² d log₂e / 2}` on the probability that
/// some pair among `2^n` random vectors has overlap above `δ`.
pub fn union_bound_log2(n: u32, d: u64, delta: f64) -> f64 {
    2.0 * n as f64 - delta * delta * d as f64 * std::f64::consts::LOG2_E / 2.0
}

/// Per-pair tail bound `2 e^{-δ² d / 2}`.
pub fn chernoff_bound(d: u64, delta: f64) -> f64 {
    2.0 * (-delta * delta * d as f64 / 2.0).exp()
}

/// Exact probability that two independent uniform sign vectors in dimension
/// `d` have `|<v,w>| > δ`: the two-sided tail of a fair binomial, counted as
/// `#{a : |2a - d| > δd} / 2^d`.
pub fn pair_violation_probability(d: u64, delta: f64) -> f64 {
    let limit = delta * d as f64;
    let mut coeff = BigUint::one();
    let mut tail = BigUint::zero();
    for a in 0..=d {
        if ((2 * a as i64 - d as i64).abs() as f64) > limit {
            tail += &coeff;
        }
        coeff = coeff * (d - a) / (a + 1);
    }
    f64::from_ratio(&tail, &(BigUint::one() << d as usize))
}

/// `log₂(1/δ)`: qubits needed for `1/δ` states with pairwise overlap at most δ.
pub fn qubit_lower_bound_from_delta(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    Ok(-delta.log2())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorSet {
    d: usize,
    seed: u64,
    delta_target: Option<f64>,
    signs: Vec<BitString>,
}

/// `count` vectors in dimension `d`; vector `i` comes from sub-stream `i`.
pub fn sample_vector_set(count: usize, d: usize, seed: u64) -> Result<VectorSet> {
    if count < 2 {
        return Err(Error::Domain(format!("a vector set needs count >= 2, got {count}")));
    }
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let signs = (0..count as u64)
        .into_par_iter()
        .map(|i| BitString::random(d, &mut rng::stream(seed, i)))
        .collect();
    Ok(VectorSet { d, seed, delta_target: None, signs })
}

impl VectorSet {
    /// Builds a set from explicit sign patterns (`true` = negative entry).
    pub fn from_signs(signs: Vec<BitString>) -> Result<Self> {
        let d = signs.first().map(BitString::len).unwrap_or(0);
        if d == 0 || signs.iter().any(|s| s.len() != d) {
            return Err(Error::InputShape("sign patterns must share a positive length".into()));
        }
        Ok(VectorSet { d, seed: 0, delta_target: None, signs })
    }

    pub fn with_delta_target(mut self, delta: f64) -> Self {
        self.delta_target = Some(delta);
        self
    }

    pub fn delta_target(&self) -> Option<f64> {
        self.delta_target
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn count(&self) -> usize {
        self.signs.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn signs(&self, i: usize) -> &BitString {
        &self.signs[i]
    }

    /// Coordinates where vectors `i` and `j` have the same sign.
    pub fn agreements(&self, i: usize, j: usize) -> u64 {
        self.d as u64 - self.signs[i].distance(&self.signs[j])
    }

    /// `<v_i, v_j> = (2a - d)/d` exactly.
    pub fn overlap(&self, i: usize, j: usize) -> Ratio<i64> {
        let a = self.agreements(i, j) as i64;
        Ratio::new(2 * a - self.d as i64, self.d as i64)
    }

    /// Squared norm of vector `i` as an exact rational: `d · (1/d)`.
    pub fn norm_sqr_exact(&self, i: usize) -> Ratio<i64> {
        let _ = &self.signs[i];
        (0..self.d).fold(Ratio::from_integer(0), |acc, _| acc + Ratio::new(1, self.d as i64))
    }

    pub fn vector<T: Real>(&self, i: usize) -> Vec<T> {
        let amp = T::one() / T::from_count(self.d as u64).sqrt();
        self.signs[i].iter().map(|neg| if neg { -amp } else { amp }).collect()
    }

    /// Vector `i` as a single-register state of dimension `d`.
    pub fn fingerprint_state<T: Real>(&self, i: usize) -> Result<PureState<T>> {
        let amps = self.vector::<T>(i).into_iter().map(|a| Complex::new(a, T::zero())).collect();
        PureState::new(vec![self.d], amps)
    }

    /// `⌈log₂ d⌉` qubits hold one fingerprint.
    pub fn qubits(&self) -> u32 {
        ceil_log2(self.d as u64)
    }
}

/// Pairwise overlap summary of a [`VectorSet`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapAudit {
    pub d: usize,
    pub count: usize,
    pub delta: f64,
    pub max_abs_overlap: f64,
    pub violating_pairs: u64,
    pub total_pairs: u64,
    pub chernoff_bound: f64,
    pub seed: u64,
}

/// Exact audit of all `count·(count-1)/2` pairs.
pub fn audit_overlaps(set: &VectorSet, delta: f64) -> Result<OverlapAudit> {
    if set.count() > AUDIT_MAX_COUNT {
        return Err(Error::Capability(format!(
            "pairwise audit of {} vectors exceeds the guard of {AUDIT_MAX_COUNT}",
            set.count()
        )));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [0, 1], got {delta}")));
    }
    let d = set.d as i64;
    let limit = delta * d as f64;
    // per row: (largest |2a - d|, violations)
    let (gap, violations) = (0..set.count())
        .into_par_iter()
        .map(|i| {
            let mut gap = 0i64;
            let mut bad = 0u64;
            for j in (i + 1)..set.count() {
                let g = (2 * set.agreements(i, j) as i64 - d).abs();
                gap = gap.max(g);
                bad += (g as f64 > limit) as u64;
            }
            (gap, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    let count = set.count() as u64;
    Ok(OverlapAudit {
        d: set.d,
        count: set.count(),
        delta,
        max_abs_overlap: gap as f64 / d as f64,
        violating_pairs: violations,
        total_pairs: count * (count - 1) / 2,
        chernoff_bound: chernoff_bound(set.d as u64, delta),
        seed: set.seed,
    })
}

/// Violation statistics over independently sampled pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairAudit {
    pub d: usize,
    pub pairs: u64,
    pub delta: f64,
    pub violating_pairs: u64,
    pub violation_rate: f64,
    pub chernoff_bound: f64,
    /// Three binomial standard deviations at the bound value.
    pub slack: f64,
    pub within_bound: bool,
    pub seed: u64,
}

/// Samples `pairs` independent pairs in dimension `d` and counts
/// `|<v,w>| > δ`. The rate is compared against the Chernoff bound plus 3σ.
pub fn audit_random_pairs(d: usize, pairs: u64, delta: f64, seed: u64) -> Result<PairAudit> {
    if d == 0 || pairs == 0 {
        return Err(Error::Domain("pair audit needs d >= 1 and pairs >= 1".into()));
    }
    check_open_unit(delta)?;
    let limit = delta * d as f64;
    let blocks = pairs.div_ceil(rng::BLOCK);
    let violations: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut r = rng::stream(seed, b);
            let len = rng::BLOCK.min(pairs - b * rng::BLOCK);
            (0..len)
                .filter(|_| {
                    let v = BitString::random(d, &mut r);
                    let w = BitString::random(d, &mut r);
                    let a = d as i64 - v.distance(&w) as i64;
                    ((2 * a - d as i64).abs() as f64) > limit
                })
                .count() as u64
        })
        .sum();
    let bound = chernoff_bound(d as u64, delta);
    let slack = rng::three_sigma(bound.min(1.0), pairs);
    let rate = violations as f64 / pairs as f64;
    Ok(PairAudit {
        d,
        pairs,
        delta,
        violating_pairs: violations,
        violation_rate: rate,
        chernoff_bound: bound,
        slack,
        within_bound: rate <= bound + slack,
        seed,
    })
}

/// Result of the Gram-matrix check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramCheck {
    pub size: usize,
    /// `1 > Σ_{j≠i} |C_ij|` for every row.
    pub dominant: bool,
    pub rank: usize,
    /// `(a - 1)·δ < 1` and every off-diagonal `|C_ij| <= δ`.
    pub premise: bool,
    pub max_off_diagonal_row_sum: f64,
}

/// Builds `C_ij = <v_i, v_j>` for unit vectors and reports strict diagonal
/// dominance and numerical rank.
///
/// Fails with [`Error::Verification`] if a dominant matrix is rank deficient.
pub fn gram_dominance_check(vectors: &[Vec<f64>], delta: f64) -> Result<GramCheck> {
    let a = vectors.len();
    if a == 0 {
        return Err(Error::InputShape("no vectors".into()));
    }
    let dim = vectors[0].len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::InputShape("vectors have different dimensions".into()));
    }
    for (i, v) in vectors.iter().enumerate() {
        let n: f64 = v.iter().map(|x| x * x).sum();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("vector {i} is not unit norm (|v|² = {n})")));
        }
    }
    let gram = DMatrix::from_fn(a, a, |i, j| {
        if i == j {
            1.0
        } else {
            vectors[i].iter().zip(&vectors[j]).map(|(x, y)| x * y).sum()
        }
    });
    let row_sums: Vec<f64> = (0..a)
        .map(|i| (0..a).filter(|&j| j != i).map(|j| gram[(i, j)].abs()).sum())
        .collect();
    let max_row = row_sums.iter().copied().fold(0.0, f64::max);
    let dominant = row_sums.iter().all(|&s| s < 1.0);
    let overlaps_ok = (0..a).all(|i| (0..a).all(|j| i == j || gram[(i, j)].abs() <= delta));
    let premise = (a as f64 - 1.0) * delta < 1.0 && overlaps_ok;
    let sv = gram.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > RANK_RTOL * top).count();
    if dominant && rank != a {
        return Err(Error::Verification(format!(
            "strictly dominant {a}×{a} Gram matrix has numerical rank {rank}"
        )));
    }
    Ok(GramCheck {
        size: a,
        dominant,
        rank,
        premise,
        max_off_diagonal_row_sum: max_row,
    })
}

/// Draws sets of `count` vectors in dimension `d` until every pairwise
/// `|overlap| <= δ`. Attempt `t` uses seed `(seed, t)`.
pub fn sample_audited_set(count: usize, d: usize, delta: f64, seed: u64, max_attempts: u64) -> Result<VectorSet> {
    for attempt in 0..max_attempts {
        let set = sample_vector_set(count, d, rng::sub_seed(seed, attempt))?;
        if audit_overlaps(&set, delta)?.violating_pairs == 0 {
            return Ok(set.with_delta_target(delta));
        }
    }
    Err(Error::Capability(format!(
        "no set of {count} vectors in dimension {d} with overlaps <= {delta} after {max_attempts} attempts"
    )))
}

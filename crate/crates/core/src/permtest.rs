//! The permutation test on `k` copies of each of two states.
//!
//! The test projects `|φ>^{⊗k} ⊗ |ψ>^{⊗k}` onto the symmetric subspace of the
//! `2k` registers and answers "equal" on success. This module evaluates the
//! acceptance probability in closed form
//! `p_eq = Σ_j C(k,j)² γ^{2j} / C(2k,k)` (with `γ = |<φ|ψ>|`), by explicit
//! symmetrization of the state vector, and by sampling, together with the
//! error bounds that bracket it and the two-state instance that lower-bounds
//! every distinguisher.

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{PureState, MAX_AMPLITUDES};
use crate::rng;
use crate::scalar::{Real, Scalar};

/// Work budget `(2k)!·D^{2k}` for explicit enumeration of all permutations.
pub const ENUMERATION_MAX_WORK: u128 = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermMethod {
    ClosedForm,
    Projection,
    Sampled,
}

/// `k` copies per state and a promised overlap bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermTestSpec {
    pub k: u32,
    pub delta: f64,
}

impl PermTestSpec {
    pub fn new(k: u32, delta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("the permutation test needs k >= 1".into()));
        }
        check_unit("delta", delta)?;
        Ok(PermTestSpec { k, delta })
    }

    pub fn bounds(&self) -> Result<PermBounds> {
        Ok(PermBounds {
            lower: distinguisher_lower_bound(self.k, self.delta)?,
            upper: p_eq_upper_bound(self.k, self.delta)?,
            asymptotic: p_eq_asymptotic(self.k, self.delta)?,
            swap_repetitions: swap_repetition_error(self.k, self.delta)?,
        })
    }
}

/// Reference values for the error of the test at `(k, δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermBounds {
    pub lower: f64,
    pub upper: f64,
    pub asymptotic: f64,
    pub swap_repetitions: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermTestOutcome<T> {
    pub p_equal: T,
    pub method: PermMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn check_unit<T: Scalar>(name: &str, v: T) -> Result<()> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v:?}")));
    }
    Ok(())
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    Ok(())
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    (0..r).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// `Σ_{j=0}^{k} C(k,j)² γ^{2j} / C(2k,k)`.
///
/// Every coefficient `C(k,j)² / C(2k,k)` is formed from exact integers and
/// converted once, so the value is exact for rational `γ` and free of
/// factorial overflow for floats at any `k`.
pub fn p_eq_closed_form<T: Scalar>(k: u32, gamma: T) -> Result<T> {
    check_k(k)?;
    check_unit("gamma", gamma.clone())?;
    let k = k as u64;
    let central = binomial(2 * k, k);
    let g2 = gamma.clone() * gamma;
    let mut power = T::one();
    let mut row = BigUint::one();
    let mut sum = T::zero();
    for j in 0..=k {
        sum = sum + T::from_ratio(&(&row * &row), &central) * power.clone();
        power = power * g2.clone();
        row = row * BigUint::from(k - j) / BigUint::from(j + 1);
    }
    Ok(sum)
}

/// `(k!)²/(2k)! · (1 + δ)^{2k}`. May exceed 1.
pub fn p_eq_upper_bound<T: Scalar>(k: u32, delta: T) -> Result<T> {
    check_k(k)?;
    check_unit("delta", delta.clone())?;
    let sq = (T::one() + delta.clone()) * (T::one() + delta);
    Ok((1..=k as u64).fold(T::one(), |acc, j| {
        acc * sq.clone() * T::from_ratio(&BigUint::from(j), &BigUint::from(k as u64 + j))
    }))
}

/// `¼ ((1 + δ)/2)^{2k}`: no test on `k` copies of each state errs less.
pub fn distinguisher_lower_bound<T: Scalar>(k: u32, delta: T) -> Result<T> {
    check_k(k)?;
    check_unit("delta", delta.clone())?;
    let two = T::from_count(2);
    let base = (T::one() + delta) / two;
    Ok(base.pow_u(2 * k as u64) / T::from_count(4))
}

/// `((1 + δ²)/2)^k`: error of `k` independent SWAP tests.
pub fn swap_repetition_error<T: Scalar>(k: u32, delta: T) -> Result<T> {
    check_k(k)?;
    check_unit("delta", delta.clone())?;
    let base = (T::one() + delta.clone() * delta) / T::from_count(2);
    Ok(base.pow_u(k as u64))
}

/// `√(πk) ((1 + δ)/2)^{2k}`.
pub fn p_eq_asymptotic<T: Real>(k: u32, delta: T) -> Result<T> {
    check_k(k)?;
    check_unit("delta", delta)?;
    let base = (T::one() + delta) / T::lit(2.0);
    Ok((T::PI() * T::from_count(k as u64)).sqrt() * base.powi(2 * k as i32))
}

/// `(k!)²·4^k / ((2k)!·√(πk))`, which tends to 1.
pub fn stirling_prefactor_ratio(k: u32) -> Result<f64> {
    check_k(k)?;
    let four_k = BigUint::one() << (2 * k as usize);
    let ratio = f64::from_ratio(&four_k, &binomial(2 * k as u64, k as u64));
    Ok(ratio / (std::f64::consts::PI * k as f64).sqrt())
}

/// Minimal error for discriminating two pure states with `|<a|b>| = c`:
/// `(1 - √(1 - c²))/2`.
pub fn helstrom_error<T: Real>(overlap: T) -> Result<T> {
    check_unit("overlap", overlap)?;
    let s = (T::one() - overlap * overlap).max(T::zero()).sqrt();
    Ok((T::one() - s) / T::lit(2.0))
}

/// Qubits `|0>` and `γ|0> + √(1-γ²)|1>`, whose overlap is exactly `γ` up to
/// rounding.
pub fn qubit_pair_with_overlap<T: Real>(gamma: T) -> Result<(PureState<T>, PureState<T>)> {
    check_unit("gamma", gamma)?;
    let a = PureState::basis(vec![2], 0)?;
    let s = (T::one() - gamma * gamma).max(T::zero()).sqrt();
    let b = PureState::from_real(vec![2], &[gamma, s])?;
    Ok((a, b))
}

/// States a distinguisher must separate: `|a> = |0>^{⊗2k}` and
/// `|b> = |φ₂>^{⊗k} ⊗ |ψ₂>^{⊗k}` with `<φ₂|ψ₂> = δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HardInstance<T> {
    pub a: PureState<T>,
    pub b: PureState<T>,
    /// `<a|b>` computed from the constructed vectors.
    pub overlap: T,
}

/// Builds the hard instance and checks `<a|b> = ((1 + δ)/2)^k`.
pub fn build_hard_instance<T: Real>(k: u32, delta: T) -> Result<HardInstance<T>> {
    check_k(k)?;
    check_unit("delta", delta)?;
    if (1usize << (2 * k.min(31))) > MAX_AMPLITUDES {
        return Err(Error::Capability(format!(
            "hard instance on {} qubits exceeds the amplitude guard",
            2 * k
        )));
    }
    let theta = delta.acos();
    let (c, s) = ((theta / T::lit(2.0)).cos(), (theta / T::lit(2.0)).sin());
    let zero = PureState::basis(vec![2], 0)?;
    let phi2 = PureState::from_real(vec![2], &[c, s])?;
    let psi2 = PureState::from_real(vec![2], &[c, -s])?;
    let a = zero.tensor_power(2 * k as usize)?;
    let b = phi2.tensor_power(k as usize)?.tensor(&psi2.tensor_power(k as usize)?)?;
    let ip = a.inner_product(&b)?;
    let expected = ((T::one() + delta) / T::lit(2.0)).powi(k as i32);
    if (ip.re - expected).abs() > T::norm_tol() || ip.im.abs() > T::norm_tol() {
        return Err(Error::Verification(format!(
            "hard-instance overlap {} differs from ((1+δ)/2)^k = {expected}",
            ip.re
        )));
    }
    Ok(HardInstance { a, b, overlap: ip.re })
}

/// Register layout of `registers` copies of a `dim`-level system.
struct Layout {
    dim: usize,
    registers: usize,
    strides: Vec<usize>,
}

impl Layout {
    fn new(dim: usize, registers: usize) -> Self {
        let strides = (0..registers).map(|p| dim.pow((registers - 1 - p) as u32)).collect();
        Layout { dim, registers, strides }
    }

    fn size(&self) -> usize {
        self.dim.pow(self.registers as u32)
    }

    fn digit(&self, t: usize, p: usize) -> usize {
        (t / self.strides[p]) % self.dim
    }

    /// Index with the digits of registers `i` and `j` exchanged.
    fn transpose(&self, t: usize, i: usize, j: usize) -> usize {
        let (di, dj) = (self.digit(t, i), self.digit(t, j));
        t + dj * self.strides[i] + di * self.strides[j] - di * self.strides[i] - dj * self.strides[j]
    }
}

/// `Σ_{σ ∈ S_r} σ(v)` by the coset factorization
/// `Σ_{S_r} = (1 + Σ_{i<r} (i r)) · Σ_{S_{r-1}}`.
///
/// Every permutation of the `r` registers is counted exactly once; the cost
/// is `O(r² D^r)` instead of `O(r! D^r)`.
pub fn symmetrize_sum<T: Real>(v: &[Complex<T>], dim: usize, registers: usize) -> Vec<Complex<T>> {
    let layout = Layout::new(dim, registers);
    assert_eq!(v.len(), layout.size());
    let mut w = v.to_vec();
    for j in 1..registers {
        let prev = w.clone();
        for i in 0..j {
            for (t, amp) in prev.iter().enumerate() {
                w[layout.transpose(t, i, j)] += amp;
            }
        }
    }
    w
}

/// `Σ_{σ ∈ S_r} σ(v)` by explicit enumeration of all `r!` permutations.
///
/// Permutations are grouped by their first image; groups are summed in
/// parallel and merged in index order so the result is bit-stable.
pub fn symmetrize_sum_enumerated<T: Real>(v: &[Complex<T>], dim: usize, registers: usize) -> Vec<Complex<T>> {
    let layout = Layout::new(dim, registers);
    assert_eq!(v.len(), layout.size());
    let digits: Vec<Vec<usize>> = (0..v.len())
        .map(|t| (0..registers).map(|p| layout.digit(t, p)).collect())
        .collect();
    let partials: Vec<Vec<Complex<T>>> = (0..registers)
        .into_par_iter()
        .map(|first| {
            let mut acc = vec![Complex::zero(); v.len()];
            let rest: Vec<usize> = (0..registers).filter(|&p| p != first).collect();
            for_each_permutation(rest, |tail| {
                for (t, amp) in v.iter().enumerate() {
                    let d = &digits[t];
                    let mut idx = d[first] * layout.strides[0];
                    for (p, &src) in tail.iter().enumerate() {
                        idx += d[src] * layout.strides[p + 1];
                    }
                    acc[idx] += amp;
                }
            });
            acc
        })
        .collect();
    let mut out = vec![Complex::zero(); v.len()];
    for part in partials {
        for (o, p) in out.iter_mut().zip(part) {
            *o += p;
        }
    }
    out
}

/// Heap's algorithm.
fn for_each_permutation<F: FnMut(&[usize])>(mut items: Vec<usize>, mut f: F) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(&items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(&items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn factorial<T: Real>(r: usize) -> T {
    (1..=r as u64).fold(T::one(), |acc, v| acc * T::from_count(v))
}

/// Guard for the projection route: `k <= 5` for qubits, `k <= 3` for
/// dimension up to 4, otherwise `D^{2k}` within the amplitude guard and
/// `(2k)!·D^{2k} <= 2^28`.
pub fn projection_within_guard(dim: usize, k: u32) -> bool {
    let registers = 2 * k;
    let Some(size) = dim.checked_pow(registers) else {
        return false;
    };
    if size > MAX_AMPLITUDES {
        return false;
    }
    match dim {
        0 => false,
        1 | 2 => k <= 5,
        3 | 4 => k <= 3,
        _ => {
            let fact: u128 = (1..=registers as u128).product();
            fact.saturating_mul(size as u128) <= ENUMERATION_MAX_WORK
        }
    }
}

/// `‖ (1/(2k)!) Σ_σ σ(|φ>^{⊗k}|ψ>^{⊗k}) ‖²` from the materialized product
/// state.
pub fn p_eq_projection<T: Real>(phi: &PureState<T>, psi: &PureState<T>, k: u32) -> Result<T> {
    check_k(k)?;
    if phi.shape() != psi.shape() {
        return Err(Error::InputShape(format!(
            "permutation test on shapes {:?} and {:?}",
            phi.shape(),
            psi.shape()
        )));
    }
    let dim = phi.dim();
    if !projection_within_guard(dim, k) {
        return Err(Error::Capability(format!(
            "symmetric projection of 2k = {} registers of dimension {dim} exceeds the guard",
            2 * k
        )));
    }
    let (phi, psi) = (phi.flattened(), psi.flattened());
    let product = phi.tensor_power(k as usize)?.tensor(&psi.tensor_power(k as usize)?)?;
    let registers = 2 * k as usize;
    let sym = symmetrize_sum(product.amplitudes(), dim, registers);
    let norm = factorial::<T>(registers);
    Ok(sym.iter().map(|a| a.norm_sqr()).fold(T::zero(), |s, v| s + v) / (norm * norm))
}

/// Outcome of the projection route packaged as a [`PermTestOutcome`].
pub fn perm_test_projection<T: Real>(phi: &PureState<T>, psi: &PureState<T>, k: u32) -> Result<PermTestOutcome<T>> {
    Ok(PermTestOutcome {
        p_equal: p_eq_projection(phi, psi, k)?,
        method: PermMethod::Projection,
        trials: None,
        seed: None,
    })
}

/// Samples `trials` verdicts; `p_equal` is the fraction answering "equal".
pub fn simulate_perm_test<T: Real>(
    phi: &PureState<T>,
    psi: &PureState<T>,
    k: u32,
    trials: u64,
    seed: u64,
) -> Result<PermTestOutcome<T>> {
    if trials == 0 {
        return Err(Error::Config("sampling needs trials >= 1".into()));
    }
    let p = p_eq_projection(phi, psi, k)?.to_f64_lossy();
    let equal = rng::bernoulli_count(p, trials, seed);
    Ok(PermTestOutcome {
        p_equal: T::from_count(equal) / T::from_count(trials),
        method: PermMethod::Sampled,
        trials: Some(trials),
        seed: Some(seed),
    })
}

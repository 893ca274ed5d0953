//! The SWAP test on two registers, evaluated three ways.
//!
//! * [`swap_test_analytic`] uses `P(1) = 1/2 - |<φ|ψ>|²/2`.
//! * [`swap_test_circuit`] simulates `(H ⊗ I) c-SWAP (H ⊗ I) |0>|φ>|ψ>` on the
//!   full joint state vector and reads off the Born probability.
//! * [`swap_test_sample`] draws independent measurement outcomes.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{PureState, MAX_AMPLITUDES};
use crate::rng;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapMethod {
    Analytic,
    Circuit,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapTestResult<T> {
    pub p_one: T,
    pub p_zero: T,
    pub method: SwapMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl<T: Real> SwapTestResult<T> {
    fn exact(p_one: T, method: SwapMethod) -> Self {
        SwapTestResult {
            p_one,
            p_zero: T::one() - p_one,
            method,
            trials: None,
            seed: None,
        }
    }
}

fn same_shape<T: Real>(phi: &PureState<T>, psi: &PureState<T>) -> Result<()> {
    if phi.shape() != psi.shape() {
        return Err(Error::InputShape(format!(
            "SWAP test on registers of shapes {:?} and {:?}",
            phi.shape(),
            psi.shape()
        )));
    }
    Ok(())
}

/// `P(1) = 1/2 - |<φ|ψ>|²/2`, clamped to `[0, 1/2]` against rounding.
/// Registers holding identical amplitude vectors give exactly zero.
pub fn swap_test_analytic<T: Real>(phi: &PureState<T>, psi: &PureState<T>) -> Result<SwapTestResult<T>> {
    same_shape(phi, psi)?;
    if phi.amplitudes() == psi.amplitudes() {
        return Ok(SwapTestResult::exact(T::zero(), SwapMethod::Analytic));
    }
    let overlap = phi.inner_product(psi)?.norm_sqr();
    let half = T::lit(0.5);
    let p_one = (half - half * overlap).max(T::zero()).min(half);
    Ok(SwapTestResult::exact(p_one, SwapMethod::Analytic))
}

/// Joint state `|c>|a>|b>` with flat index `c·D² + a·D + b`.
struct Joint<T> {
    dim: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> Joint<T> {
    fn product(phi: &PureState<T>, psi: &PureState<T>) -> Self {
        let dim = phi.dim();
        let mut amps = vec![Complex::zero(); 2 * dim * dim];
        for (a, pa) in phi.amplitudes().iter().enumerate() {
            for (b, pb) in psi.amplitudes().iter().enumerate() {
                amps[a * dim + b] = pa * pb;
            }
        }
        Joint { dim, amps }
    }

    fn hadamard_on_control(&mut self) {
        let half = self.amps.len() / 2;
        let r = T::FRAC_1_SQRT_2();
        let (lo, hi) = self.amps.split_at_mut(half);
        for (z, o) in lo.iter_mut().zip(hi.iter_mut()) {
            let (a, b) = (*z, *o);
            *z = (a + b).scale(r);
            *o = (a - b).scale(r);
        }
    }

    /// Exchanges the two register coordinates on the control = 1 half.
    fn controlled_swap(&mut self) {
        let (d, off) = (self.dim, self.dim * self.dim);
        for a in 0..d {
            for b in (a + 1)..d {
                self.amps.swap(off + a * d + b, off + b * d + a);
            }
        }
    }

    fn prob_control_one(&self) -> T {
        self.amps[self.amps.len() / 2..]
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |s, v| s + v)
    }
}

/// Expected pre-measurement state
/// `½|0>(|φψ> + |ψφ>) + ½|1>(|φψ> - |ψφ>)`.
fn expected_final_state<T: Real>(phi: &PureState<T>, psi: &PureState<T>) -> Vec<Complex<T>> {
    let d = phi.dim();
    let half = T::lit(0.5);
    let mut out = vec![Complex::zero(); 2 * d * d];
    let (p, q) = (phi.amplitudes(), psi.amplitudes());
    for a in 0..d {
        for b in 0..d {
            let fwd = p[a] * q[b];
            let rev = q[a] * p[b];
            out[a * d + b] = (fwd + rev).scale(half);
            out[d * d + a * d + b] = (fwd - rev).scale(half);
        }
    }
    out
}

/// State-vector simulation of the SWAP-test circuit.
///
/// Fails with [`Error::Verification`] if the simulated pre-measurement state
/// deviates from the closed form by more than [`Real::verify_tol`] in any
/// amplitude.
pub fn swap_test_circuit<T: Real>(phi: &PureState<T>, psi: &PureState<T>) -> Result<SwapTestResult<T>> {
    same_shape(phi, psi)?;
    let d = phi.dim();
    if d.checked_mul(d).and_then(|v| v.checked_mul(2)).is_none_or(|v| v > MAX_AMPLITUDES) {
        return Err(Error::Capability(format!(
            "SWAP-test joint state of 2·{d}² amplitudes exceeds the {MAX_AMPLITUDES} guard"
        )));
    }
    let state = swap_test_final_state(phi, psi);
    let expected = expected_final_state(phi, psi);
    let dev = state
        .amps
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).norm())
        .fold(T::zero(), T::max);
    if dev > T::verify_tol() {
        return Err(Error::Verification(format!(
            "pre-measurement state deviates from the closed form by {dev:e}"
        )));
    }
    Ok(SwapTestResult::exact(state.prob_control_one(), SwapMethod::Circuit))
}

fn swap_test_final_state<T: Real>(phi: &PureState<T>, psi: &PureState<T>) -> Joint<T> {
    let mut joint = Joint::product(phi, psi);
    joint.hadamard_on_control();
    joint.controlled_swap();
    joint.hadamard_on_control();
    joint
}

/// Pre-measurement amplitudes of the circuit, indexed `c·D² + a·D + b`.
pub fn swap_test_state<T: Real>(phi: &PureState<T>, psi: &PureState<T>) -> Result<Vec<Complex<T>>> {
    same_shape(phi, psi)?;
    Ok(swap_test_final_state(phi, psi).amps)
}

/// Empirical frequency of outcome 1 over `trials` independent measurements.
pub fn swap_test_sample<T: Real>(
    phi: &PureState<T>,
    psi: &PureState<T>,
    trials: u64,
    seed: u64,
) -> Result<SwapTestResult<T>> {
    if trials == 0 {
        return Err(Error::Config("sampling needs trials >= 1".into()));
    }
    let p = swap_test_analytic(phi, psi)?.p_one.to_f64_lossy();
    let ones = rng::bernoulli_count(p, trials, seed);
    let freq = T::from_count(ones) / T::from_count(trials);
    Ok(SwapTestResult {
        p_one: freq,
        p_zero: T::one() - freq,
        method: SwapMethod::Sampled,
        trials: Some(trials),
        seed: Some(seed),
    })
}

/// Smallest `k` with `((1 + δ²)/2)^k <= ε`: repetitions of the SWAP test
/// needed when distinct states have overlap at most `δ`.
pub fn repetitions_for_error(epsilon: f64, delta: f64) -> Result<u32> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!(
            "delta must lie in [0, 1), got {delta}; coinciding states cannot be separated"
        )));
    }
    let base = (1.0 + delta * delta) / 2.0;
    let mut k = ((epsilon.ln() / base.ln()).ceil() as u32).max(1);
    while k > 1 && base.powi(k as i32 - 1) <= epsilon {
        k -= 1;
    }
    while base.powi(k as i32) > epsilon {
        k += 1;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::codes::BinaryCode;
    use crate::qstate::Fingerprint;
    use approx::assert_abs_diff_eq;

    fn fp_pair() -> (PureState<f64>, PureState<f64>) {
        let h = BinaryCode::hadamard(1).unwrap();
        let a = Fingerprint::new(&h, &BitString::zeros(1)).unwrap();
        let b = Fingerprint::new(&h, &"1".parse().unwrap()).unwrap();
        (a.state, b.state)
    }

    #[test]
    fn analytic_values() {
        let (a, b) = fp_pair();
        assert_abs_diff_eq!(swap_test_analytic(&a, &a).unwrap().p_one, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(swap_test_analytic(&a, &b).unwrap().p_one, 0.375, epsilon = 1e-15);
        let z = PureState::<f64>::basis(vec![2], 0).unwrap();
        let o = PureState::<f64>::basis(vec![2], 1).unwrap();
        assert_eq!(swap_test_analytic(&z, &o).unwrap().p_one, 0.5);
    }

    #[test]
    fn circuit_matches_analytic_on_fingerprints() {
        let (a, b) = fp_pair();
        let c = swap_test_circuit(&a, &b).unwrap();
        assert_abs_diff_eq!(c.p_one, 0.375, epsilon = 1e-12);
        assert!(swap_test_circuit(&a, &a).unwrap().p_one.abs() <= 1e-12);
        assert_abs_diff_eq!(c.p_one + c.p_zero, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn random_states_agree() {
        let mut r = rng::master(17);
        for _ in 0..50 {
            let a = PureState::<f64>::random(vec![2, 2, 2], &mut r).unwrap();
            let b = PureState::<f64>::random(vec![2, 2, 2], &mut r).unwrap();
            let an = swap_test_analytic(&a, &b).unwrap().p_one;
            let ci = swap_test_circuit(&a, &b).unwrap().p_one;
            assert!((an - ci).abs() <= 1e-10);
            assert!(an <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn sampling() {
        let (a, b) = fp_pair();
        assert_eq!(swap_test_sample(&a, &a, 10_000, 1).unwrap().p_one, 0.0);
        let s = swap_test_sample(&a, &b, 1_000_000, 99).unwrap();
        assert!((s.p_one - 0.375).abs() <= 3.0 * (0.375f64 * 0.625 / 1e6).sqrt());
        let one = swap_test_sample(&a, &b, 1, 4).unwrap().p_one;
        assert!(one == 0.0 || one == 1.0);
        assert_eq!(s, swap_test_sample(&a, &b, 1_000_000, 99).unwrap());
        assert!(swap_test_sample(&a, &b, 0, 4).is_err());
    }

    #[test]
    fn repetitions() {
        assert_eq!(repetitions_for_error(0.01, 0.5).unwrap(), 10);
        assert_eq!(repetitions_for_error(0.5, 0.0).unwrap(), 1);
        assert_eq!(repetitions_for_error(0.25, 0.0).unwrap(), 2);
        assert!(matches!(repetitions_for_error(0.1, 1.0), Err(Error::Domain(_))));
        assert!(repetitions_for_error(0.0, 0.5).is_err());
    }

    #[test]
    fn shape_mismatch() {
        let a = PureState::<f64>::basis(vec![2], 0).unwrap();
        let b = PureState::<f64>::basis(vec![3], 0).unwrap();
        assert!(matches!(swap_test_analytic(&a, &b), Err(Error::InputShape(_))));
        assert!(matches!(swap_test_circuit(&a, &b), Err(Error::InputShape(_))));
    }

    #[test]
    fn single_precision_circuit() {
        let mut r = rng::master(8);
        let a = PureState::<f32>::random(vec![4], &mut r).unwrap();
        let b = PureState::<f32>::random(vec![4], &mut r).unwrap();
        let an = swap_test_analytic(&a, &b).unwrap().p_one;
        let ci = swap_test_circuit(&a, &b).unwrap().p_one;
        assert!((an - ci).abs() < 1e-5);
    }
}

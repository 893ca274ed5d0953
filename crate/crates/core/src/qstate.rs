//! Pure states as dense complex amplitude vectors over a declared register
//! shape, and the code-based fingerprint states
//! `|h_x> = m^{-1/2} Σ_i |i>|E_i(x)>`.
//!
//! Flat indices are row-major: the first register is the most significant
//! digit. A fingerprint has shape `[m, 2]`, so basis state `(i, b)` with a
//! 0-based position `i` sits at flat index `2i + b`.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::codes::BinaryCode;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maximum number of amplitudes in any materialized state.
pub const MAX_AMPLITUDES: usize = 1 << 22;
/// Maximum codeword length accepted for fingerprint states.
pub const MAX_FINGERPRINT_M: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct PureState<T> {
    shape: Vec<usize>,
    amplitudes: Vec<Complex<T>>,
}

fn checked_dim(shape: &[usize]) -> Result<usize> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InputShape(format!("invalid register shape {shape:?}")));
    }
    shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&d| d <= MAX_AMPLITUDES)
        .ok_or_else(|| {
            Error::Capability(format!(
                "register shape {shape:?} exceeds the {MAX_AMPLITUDES}-amplitude guard"
            ))
        })
}

impl<T: Real> PureState<T> {
    /// Wraps amplitudes that are already normalized.
    pub fn new(shape: Vec<usize>, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let dim = checked_dim(&shape)?;
        if amplitudes.len() != dim {
            return Err(Error::InputShape(format!(
                "{} amplitudes for shape {shape:?} of dimension {dim}",
                amplitudes.len()
            )));
        }
        let state = PureState { shape, amplitudes };
        let err = (state.norm_sqr() - T::one()).abs();
        if err.is_nan() || err > T::norm_tol() {
            return Err(Error::Domain(format!("state is not normalized (|norm² - 1| = {err:e})")));
        }
        Ok(state)
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(shape: Vec<usize>, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).fold(T::zero(), |s, v| s + v).sqrt();
        if norm <= T::zero() || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        for a in amplitudes.iter_mut() {
            *a = a.unscale(norm);
        }
        PureState::new(shape, amplitudes)
    }

    /// Real amplitudes, rescaled to unit norm.
    pub fn from_real(shape: Vec<usize>, amplitudes: &[T]) -> Result<Self> {
        PureState::normalized(shape, amplitudes.iter().map(|&a| Complex::new(a, T::zero())).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(shape: Vec<usize>, index: usize) -> Result<Self> {
        let dim = checked_dim(&shape)?;
        if index >= dim {
            return Err(Error::InputShape(format!("basis index {index} >= dimension {dim}")));
        }
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Ok(PureState { shape, amplitudes })
    }

    /// Haar-random state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(shape: Vec<usize>, rng: &mut R) -> Result<Self> {
        let dim = checked_dim(&shape)?;
        let amplitudes = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(T::lit(re), T::lit(im))
            })
            .collect();
        PureState::normalized(shape, amplitudes)
    }

    /// Qubit `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`.
    pub fn qubit(theta: T, phase: T) -> Self {
        let half = theta / T::lit(2.0);
        PureState {
            shape: vec![2],
            amplitudes: vec![
                Complex::new(half.cos(), T::zero()),
                Complex::from_polar(half.sin(), phase),
            ],
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).fold(T::zero(), |s, v| s + v)
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: T) -> Self {
        let phase = Complex::from_polar(T::one(), theta);
        PureState {
            shape: self.shape.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }

    /// Same amplitudes viewed as a single register of dimension `dim()`.
    pub fn flattened(&self) -> Self {
        PureState {
            shape: vec![self.dim()],
            amplitudes: self.amplitudes.clone(),
        }
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &PureState<T>) -> Result<Complex<T>> {
        if self.shape != other.shape {
            return Err(Error::InputShape(format!(
                "inner product of shapes {:?} and {:?}",
                self.shape, other.shape
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|self> ⊗ |other>`; the shape is the concatenation.
    pub fn tensor(&self, other: &PureState<T>) -> Result<Self> {
        let shape: Vec<usize> = self.shape.iter().chain(&other.shape).copied().collect();
        checked_dim(&shape)?;
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(PureState { shape, amplitudes })
    }

    /// `|self>^{⊗k}` for `k >= 1`.
    pub fn tensor_power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("tensor power needs k >= 1".into()));
        }
        (1..k).try_fold(self.clone(), |acc, _| acc.tensor(self))
    }

    pub(crate) fn from_parts_unchecked(shape: Vec<usize>, amplitudes: Vec<Complex<T>>) -> Self {
        PureState { shape, amplitudes }
    }
}

/// `⌈log₂ m⌉ + 1`: index qubits plus the bit qubit.
pub fn qubits_required(code: &BinaryCode) -> u32 {
    ceil_log2(code.m() as u64) + 1
}

pub(crate) fn ceil_log2(v: u64) -> u32 {
    if v <= 1 {
        0
    } else {
        u64::BITS - (v - 1).leading_zeros()
    }
}

/// Fingerprint state of a message under a code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Fingerprint<T> {
    pub state: PureState<T>,
    pub x: BitString,
    pub code_id: String,
    pub qubit_count: u32,
}

impl<T: Real> Fingerprint<T> {
    /// Builds `|h_x>`: amplitude `1/√m` on `(i, E_i(x))` for every position.
    pub fn new(code: &BinaryCode, x: &BitString) -> Result<Self> {
        let m = code.m();
        if m > MAX_FINGERPRINT_M {
            return Err(Error::Capability(format!(
                "fingerprint with m = {m} exceeds the guard m <= {MAX_FINGERPRINT_M}"
            )));
        }
        let word = code.encode(x)?;
        let amp = Complex::new(T::one() / T::from_count(m as u64).sqrt(), T::zero());
        let mut amplitudes = vec![Complex::zero(); 2 * m];
        for (i, b) in word.iter().enumerate() {
            amplitudes[2 * i + b as usize] = amp;
        }
        Ok(Fingerprint {
            state: PureState::from_parts_unchecked(vec![m, 2], amplitudes),
            x: x.clone(),
            code_id: code.id(),
            qubit_count: qubits_required(code),
        })
    }

    /// Flat indices carrying nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        self.state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Shorthand for [`Fingerprint::new`].
pub fn make_fingerprint<T: Real>(code: &BinaryCode, x: &BitString) -> Result<Fingerprint<T>> {
    Fingerprint::new(code, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::{codes::Generator, Rational};
    use approx::assert_abs_diff_eq;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_n1_fingerprints() {
        let h = BinaryCode::hadamard(1).unwrap();
        let f0: Fingerprint<f64> = make_fingerprint(&h, &bs("0")).unwrap();
        let f1: Fingerprint<f64> = make_fingerprint(&h, &bs("1")).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(f0.support(), vec![0, 2]);
        assert_eq!(f1.support(), vec![0, 3]);
        assert_abs_diff_eq!(f0.state.amplitudes()[2].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(f0.state.norm_sqr(), 1.0, epsilon = 1e-15);
        let ip = f0.state.inner_product(&f1.state).unwrap();
        assert_abs_diff_eq!(ip.re, 0.5, epsilon = 1e-15);
        assert_eq!(ip.im, 0.0);
        assert_eq!(f0.qubit_count, 2);
    }

    #[test]
    fn qubit_counts() {
        assert_eq!(qubits_required(&BinaryCode::hadamard(8).unwrap()), 9);
        let rep = BinaryCode::from_generator(Generator::repetition(8, 3).unwrap()).unwrap();
        assert_eq!(qubits_required(&rep), 6);
        let tiny = BinaryCode::from_generator(Generator::repetition(1, 2).unwrap()).unwrap();
        assert_eq!(qubits_required(&tiny), 2);
    }

    #[test]
    fn fingerprint_guard() {
        let h = BinaryCode::hadamard(21).unwrap();
        let x = BitString::zeros(21);
        assert!(matches!(Fingerprint::<f64>::new(&h, &x), Err(Error::Capability(_))));
    }

    #[test]
    fn inner_product_equals_agreement() {
        let code = BinaryCode::random_linear(5, 3, 4).unwrap();
        for a in 0..32u64 {
            for b in 0..32u64 {
                let (x, y) = (BitString::from_u64_lsb(a, 5), BitString::from_u64_lsb(b, 5));
                let fx: Fingerprint<f64> = Fingerprint::new(&code, &x).unwrap();
                let fy: Fingerprint<f64> = Fingerprint::new(&code, &y).unwrap();
                let ip = fx.state.inner_product(&fy.state).unwrap();
                let agree: Rational = code.agreement_fraction(&x, &y).unwrap();
                let exact = *agree.numer() as f64 / *agree.denom() as f64;
                assert_abs_diff_eq!(ip.re, exact, epsilon = 1e-14);
                assert_eq!(ip.im, 0.0);
            }
        }
    }

    #[test]
    fn tensor_basics() {
        let z = PureState::<f64>::basis(vec![2], 0).unwrap();
        let zz = z.tensor(&z).unwrap();
        assert_eq!(zz.shape(), &[2, 2]);
        assert_eq!(zz.amplitudes()[0], Complex::one());
        let trivial = PureState::<f64>::basis(vec![1], 0).unwrap();
        let mut r = rng::master(5);
        let s = PureState::<f64>::random(vec![3], &mut r).unwrap();
        let ext = s.tensor(&trivial).unwrap();
        assert_eq!(ext.shape(), &[3, 1]);
        assert_eq!(ext.amplitudes(), s.amplitudes());
    }

    #[test]
    fn tensor_power_overlap() {
        let a = PureState::<f64>::qubit(0.0, 0.0);
        // <0|θ> = cos(θ/2) = 1/2
        let b = PureState::<f64>::qubit(2.0 * (0.5f64).acos(), 0.0);
        let ip = a.tensor_power(3).unwrap().inner_product(&b.tensor_power(3).unwrap()).unwrap();
        assert_abs_diff_eq!(ip.re, 0.125, epsilon = 1e-14);
    }

    #[test]
    fn shape_errors() {
        let a = PureState::<f64>::basis(vec![2], 0).unwrap();
        let b = PureState::<f64>::basis(vec![4], 0).unwrap();
        assert!(matches!(a.inner_product(&b), Err(Error::InputShape(_))));
        assert!(PureState::<f64>::new(vec![2], vec![Complex::one(), Complex::one()]).is_err());
        assert!(matches!(
            PureState::<f64>::basis(vec![1 << 12, 1 << 11], 0),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn single_precision_states() {
        let mut r = rng::master(2);
        let a = PureState::<f32>::random(vec![4], &mut r).unwrap();
        assert!((a.inner_product(&a).unwrap().re - 1.0).abs() < 1e-5);
    }

    #[test]
    fn json_layout() {
        let s = PureState::<f64>::basis(vec![2], 1).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["shape"], serde_json::json!([2]));
        assert_eq!(v["amplitudes"], serde_json::json!([[0.0, 0.0], [1.0, 0.0]]));
        let back: PureState<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}

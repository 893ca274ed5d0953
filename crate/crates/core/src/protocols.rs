//! Simultaneous-message equality protocols and a seeded experiment runner.
//!
//! Alice holds `x`, Bob holds `y`, each sends one message to a referee who
//! decides whether `x = y`. Three protocols are simulated:
//!
//! * `quantum`: both send `k` copies of their fingerprint state; the referee
//!   runs `k` SWAP tests and answers "unequal" iff some test outputs 1.
//! * `shared-key`: a uniformly random key selects `r` codeword positions;
//!   both send those bits and the referee compares them.
//! * `mixture`: each party sends `(i, E_i(·))` for an independent uniform
//!   position; the referee answers "equal" iff the positions collide and the
//!   bits match.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::codes::{BinaryCode, CodeSpec};
use crate::error::{Error, Result};
use crate::qstate::{ceil_log2, qubits_required, Fingerprint};
use crate::rng::{self, StreamRng};
use crate::swaptest::swap_test_analytic;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    Unequal,
}

impl Verdict {
    fn of(equal: bool) -> Self {
        if equal {
            Verdict::Equal
        } else {
            Verdict::Unequal
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostUnit {
    Bits,
    Qubits,
}

/// Referee output together with the ground truth and per-party message size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolVerdict {
    pub verdict: Verdict,
    pub truth: Verdict,
    pub cost_alice: u64,
    pub cost_bob: u64,
    pub unit: CostUnit,
}

impl ProtocolVerdict {
    pub fn is_wrong(&self) -> bool {
        self.verdict != self.truth
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolId {
    Quantum,
    SharedKey,
    Mixture,
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProtocolId::Quantum => "quantum",
            ProtocolId::SharedKey => "shared-key",
            ProtocolId::Mixture => "mixture",
        })
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum" | "quantum-smp" => Ok(ProtocolId::Quantum),
            "shared-key" | "classical-shared-key" => Ok(ProtocolId::SharedKey),
            "mixture" | "classical-mixture" => Ok(ProtocolId::Mixture),
            other => Err(Error::Config(format!("unknown protocol {other:?}"))),
        }
    }
}

fn check_pair(code: &BinaryCode, x: &BitString, y: &BitString) -> Result<()> {
    if x.len() != code.n() || y.len() != code.n() {
        return Err(Error::InputShape(format!(
            "inputs of {} and {} bits for a code with n = {}",
            x.len(),
            y.len(),
            code.n()
        )));
    }
    Ok(())
}

fn truth(x: &BitString, y: &BitString) -> Verdict {
    Verdict::of(x == y)
}

/// Quantum fingerprint protocol with `k` SWAP tests.
pub fn run_quantum_smp(code: &BinaryCode, x: &BitString, y: &BitString, k: u32, seed: u64) -> Result<ProtocolVerdict> {
    let mut rng = rng::master(seed);
    quantum_trial(code, x, y, k, &mut rng)
}

fn quantum_trial(code: &BinaryCode, x: &BitString, y: &BitString, k: u32, rng: &mut StreamRng) -> Result<ProtocolVerdict> {
    if k == 0 {
        return Err(Error::Config("the quantum protocol needs k >= 1 repetitions".into()));
    }
    check_pair(code, x, y)?;
    let hx: Fingerprint<f64> = Fingerprint::new(code, x)?;
    let hy: Fingerprint<f64> = Fingerprint::new(code, y)?;
    let p_one = swap_test_analytic(&hx.state, &hy.state)?.p_one;
    let any_one = (0..k).any(|_| rng.random::<f64>() < p_one);
    let cost = k as u64 * qubits_required(code) as u64;
    Ok(ProtocolVerdict {
        verdict: Verdict::of(!any_one),
        truth: truth(x, y),
        cost_alice: cost,
        cost_bob: cost,
        unit: CostUnit::Qubits,
    })
}

/// Shared-key protocol comparing `r` key-selected codeword bits.
pub fn run_classical_shared_key(code: &BinaryCode, x: &BitString, y: &BitString, r: u32, seed: u64) -> Result<ProtocolVerdict> {
    let mut rng = rng::master(seed);
    shared_key_trial(code, x, y, r, &mut rng)
}

fn shared_key_trial(code: &BinaryCode, x: &BitString, y: &BitString, r: u32, rng: &mut StreamRng) -> Result<ProtocolVerdict> {
    if r == 0 {
        return Err(Error::Config("the shared-key protocol needs r >= 1 indices".into()));
    }
    check_pair(code, x, y)?;
    let m = code.m();
    // the key is local to this call and never reported
    let key: Vec<usize> = (0..r).map(|_| rng.random_range(0..m)).collect();
    let alice: Vec<bool> = key.iter().map(|&i| code.bit0(x, i)).collect();
    let bob: Vec<bool> = key.iter().map(|&i| code.bit0(y, i)).collect();
    Ok(ProtocolVerdict {
        verdict: Verdict::of(alice == bob),
        truth: truth(x, y),
        cost_alice: r as u64,
        cost_bob: r as u64,
        unit: CostUnit::Bits,
    })
}

/// Classical-mixture protocol with independent positions.
pub fn run_classical_mixture(code: &BinaryCode, x: &BitString, y: &BitString, seed: u64) -> Result<ProtocolVerdict> {
    let mut rng = rng::master(seed);
    mixture_trial(code, x, y, &mut rng)
}

fn mixture_trial(code: &BinaryCode, x: &BitString, y: &BitString, rng: &mut StreamRng) -> Result<ProtocolVerdict> {
    check_pair(code, x, y)?;
    let m = code.m();
    let i = rng.random_range(0..m);
    let j = rng.random_range(0..m);
    let alice = (i, code.bit0(x, i));
    let bob = (j, code.bit0(y, j));
    let cost = ceil_log2(m as u64) as u64 + 1;
    Ok(ProtocolVerdict {
        verdict: Verdict::of(alice == bob),
        truth: truth(x, y),
        cost_alice: cost,
        cost_bob: cost,
        unit: CostUnit::Bits,
    })
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Protocol choice with its repetition parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub id: ProtocolId,
    /// `k` for the quantum protocol, `r` for the shared-key protocol.
    pub repetitions: u32,
}

impl ProtocolConfig {
    pub fn new(id: ProtocolId, repetitions: u32) -> Result<Self> {
        if repetitions == 0 && id != ProtocolId::Mixture {
            return Err(Error::Config(format!("protocol {id} needs at least one repetition")));
        }
        Ok(ProtocolConfig { id, repetitions })
    }

    pub fn parse(id: &str, repetitions: u32) -> Result<Self> {
        ProtocolConfig::new(id.parse()?, repetitions)
    }

    pub fn run(&self, code: &BinaryCode, x: &BitString, y: &BitString, seed: u64) -> Result<ProtocolVerdict> {
        let mut rng = rng::master(seed);
        self.trial(code, x, y, &mut rng)
    }

    fn trial(&self, code: &BinaryCode, x: &BitString, y: &BitString, rng: &mut StreamRng) -> Result<ProtocolVerdict> {
        match self.id {
            ProtocolId::Quantum => quantum_trial(code, x, y, self.repetitions, rng),
            ProtocolId::SharedKey => shared_key_trial(code, x, y, self.repetitions, rng),
            ProtocolId::Mixture => mixture_trial(code, x, y, rng),
        }
    }

    /// Exact probability of a wrong verdict on the pair `(x, y)`.
    pub fn exact_error(&self, code: &BinaryCode, x: &BitString, y: &BitString) -> Result<f64> {
        check_pair(code, x, y)?;
        let m = code.m() as f64;
        if x == y {
            return Ok(match self.id {
                ProtocolId::Quantum | ProtocolId::SharedKey => 0.0,
                ProtocolId::Mixture => 1.0 - 1.0 / m,
            });
        }
        let gamma = ratio_f64(code.agreement_fraction(x, y)?);
        Ok(match self.id {
            ProtocolId::Quantum => (0.5 * (1.0 + gamma * gamma)).powi(self.repetitions as i32),
            ProtocolId::SharedKey => gamma.powi(self.repetitions as i32),
            ProtocolId::Mixture => gamma / m,
        })
    }

    /// Worst-case error on unequal inputs given the code's certified agreement
    /// bound, when the protocol has one.
    pub fn theory_bound(&self, code: &BinaryCode) -> Option<f64> {
        let delta = code.certify_distance().ok()?.delta_f64();
        match self.id {
            ProtocolId::Quantum => Some((0.5 * (1.0 + delta * delta)).powi(self.repetitions as i32)),
            ProtocolId::SharedKey => Some(delta.powi(self.repetitions as i32)),
            ProtocolId::Mixture => None,
        }
    }

    pub fn message_cost(&self, code: &BinaryCode) -> MessageCost {
        let log_m = ceil_log2(code.m() as u64) as u64;
        let reps = self.repetitions as u64;
        match self.id {
            ProtocolId::Quantum => {
                let q = reps * qubits_required(code) as u64;
                MessageCost { alice: q, bob: q, unit: CostUnit::Qubits, key_bits: 0 }
            }
            ProtocolId::SharedKey => MessageCost {
                alice: reps,
                bob: reps,
                unit: CostUnit::Bits,
                key_bits: reps * log_m,
            },
            ProtocolId::Mixture => MessageCost {
                alice: log_m + 1,
                bob: log_m + 1,
                unit: CostUnit::Bits,
                key_bits: 0,
            },
        }
    }
}

/// Per-party message size. The shared key is reported separately and not
/// counted as communication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageCost {
    pub alice: u64,
    pub bob: u64,
    pub unit: CostUnit,
    pub key_bits: u64,
}

/// Side-by-side per-party costs of every protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostTable {
    pub trivial_bits: u64,
    pub shared_key_bits: u64,
    pub shared_key_key_bits: u64,
    pub quantum_qubits: u64,
    pub mixture_bits: u64,
}

pub fn message_costs(code: &BinaryCode, k: u32, r: u32) -> CostTable {
    let log_m = ceil_log2(code.m() as u64) as u64;
    CostTable {
        trivial_bits: code.n() as u64,
        shared_key_bits: r as u64,
        shared_key_key_bits: r as u64 * log_m,
        quantum_qubits: k as u64 * qubits_required(code) as u64,
        mixture_bits: log_m + 1,
    }
}

/// How experiment inputs are drawn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSource {
    /// Independent uniform `x` and `y`.
    RandomPairs,
    ForcedEqual,
    /// Uniform `x`, uniform `y ≠ x`.
    ForcedUnequal,
    /// Trial `t` uses entry `t mod len`.
    AdversarialList(Vec<(BitString, BitString)>),
}

impl PairSource {
    pub fn name(&self) -> &'static str {
        match self {
            PairSource::RandomPairs => "random-pairs",
            PairSource::ForcedEqual => "forced-equal",
            PairSource::ForcedUnequal => "forced-unequal",
            PairSource::AdversarialList(_) => "adversarial-list",
        }
    }

    fn draw(&self, code: &BinaryCode, trial: u64, rng: &mut StreamRng) -> (BitString, BitString) {
        match self {
            PairSource::RandomPairs => (code.random_message(rng), code.random_message(rng)),
            PairSource::ForcedEqual => {
                let x = code.random_message(rng);
                (x.clone(), x)
            }
            PairSource::ForcedUnequal => {
                let x = code.random_message(rng);
                loop {
                    let y = code.random_message(rng);
                    if y != x {
                        return (x, y);
                    }
                }
            }
            PairSource::AdversarialList(list) => list[(trial % list.len() as u64) as usize].clone(),
        }
    }

    fn validate(&self, code: &BinaryCode) -> Result<()> {
        match self {
            PairSource::ForcedUnequal if code.n() == 0 => {
                Err(Error::Config("forced-unequal pairs need n >= 1".into()))
            }
            PairSource::AdversarialList(list) => {
                if list.is_empty() {
                    return Err(Error::Config("adversarial pair list is empty".into()));
                }
                list.iter().try_for_each(|(x, y)| check_pair(code, x, y))
            }
            _ => Ok(()),
        }
    }
}

/// Seeded Monte Carlo summary of one protocol on one code.
///
/// Error rates are split by ground truth. `expected_error_*` is the mean of
/// the exact per-pair error probabilities over the inputs actually drawn, and
/// the confidence radii are three binomial standard deviations at that mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub protocol_id: ProtocolId,
    pub repetitions: u32,
    pub code_id: String,
    pub code: CodeSpec,
    pub n: usize,
    pub m: usize,
    pub pair_source: String,
    pub trials: u64,
    pub seed: u64,
    pub trials_equal: u64,
    pub trials_unequal: u64,
    pub errors_equal: u64,
    pub errors_unequal: u64,
    pub empirical_error_equal: Option<f64>,
    pub empirical_error_unequal: Option<f64>,
    pub expected_error_equal: Option<f64>,
    pub expected_error_unequal: Option<f64>,
    pub confidence_radius_equal: Option<f64>,
    pub confidence_radius_unequal: Option<f64>,
    pub theory_error_bound: Option<f64>,
    pub message_cost: MessageCost,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    equal: u64,
    unequal: u64,
    wrong_equal: u64,
    wrong_unequal: u64,
    expected_equal: f64,
    expected_unequal: f64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.equal += o.equal;
        self.unequal += o.unequal;
        self.wrong_equal += o.wrong_equal;
        self.wrong_unequal += o.wrong_unequal;
        self.expected_equal += o.expected_equal;
        self.expected_unequal += o.expected_unequal;
        self
    }
}

/// Runs `trials` independent protocol executions.
///
/// Trial `t` draws its inputs and protocol randomness from the sub-stream
/// `(seed, t)`. Trials run in parallel in fixed blocks whose tallies are
/// merged in block order, so the report is identical for identical inputs.
pub fn run_experiment(
    protocol: ProtocolConfig,
    code: &BinaryCode,
    trials: u64,
    pairs: &PairSource,
    seed: u64,
) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(Error::Config("an experiment needs trials >= 1".into()));
    }
    pairs.validate(code)?;
    let blocks = trials.div_ceil(rng::BLOCK);
    let tallies = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut tally = Tally::default();
            for t in b * rng::BLOCK..((b + 1) * rng::BLOCK).min(trials) {
                let mut rng = rng::stream(seed, t);
                let (x, y) = pairs.draw(code, t, &mut rng);
                let v = protocol.trial(code, &x, &y, &mut rng)?;
                let p = protocol.exact_error(code, &x, &y)?;
                if v.truth == Verdict::Equal {
                    tally.equal += 1;
                    tally.wrong_equal += v.is_wrong() as u64;
                    tally.expected_equal += p;
                } else {
                    tally.unequal += 1;
                    tally.wrong_unequal += v.is_wrong() as u64;
                    tally.expected_unequal += p;
                }
            }
            Ok(tally)
        })
        .collect::<Result<Vec<Tally>>>()?;
    let tally = tallies.into_iter().fold(Tally::default(), Tally::merge);

    let rate = |wrong: u64, of: u64| (of > 0).then(|| wrong as f64 / of as f64);
    let mean = |sum: f64, of: u64| (of > 0).then(|| (sum / of as f64).clamp(0.0, 1.0));
    let expected_equal = mean(tally.expected_equal, tally.equal);
    let expected_unequal = mean(tally.expected_unequal, tally.unequal);

    Ok(ExperimentReport {
        protocol_id: protocol.id,
        repetitions: protocol.repetitions,
        code_id: code.id(),
        code: code.spec(),
        n: code.n(),
        m: code.m(),
        pair_source: pairs.name().to_string(),
        trials,
        seed,
        trials_equal: tally.equal,
        trials_unequal: tally.unequal,
        errors_equal: tally.wrong_equal,
        errors_unequal: tally.wrong_unequal,
        empirical_error_equal: rate(tally.wrong_equal, tally.equal),
        empirical_error_unequal: rate(tally.wrong_unequal, tally.unequal),
        expected_error_equal: expected_equal,
        expected_error_unequal: expected_unequal,
        confidence_radius_equal: expected_equal.map(|p| rng::three_sigma(p, tally.equal)),
        confidence_radius_unequal: expected_unequal.map(|p| rng::three_sigma(p, tally.unequal)),
        theory_error_bound: protocol.theory_bound(code),
        message_cost: protocol.message_cost(code),
    })
}

/// Flat CSV projection of [`ExperimentReport`]; empty cells for absent values.
#[derive(Serialize)]
struct ExperimentRow<'a> {
    protocol_id: String,
    repetitions: u32,
    code_id: &'a str,
    n: usize,
    m: usize,
    pair_source: &'a str,
    trials: u64,
    seed: u64,
    trials_equal: u64,
    trials_unequal: u64,
    errors_equal: u64,
    errors_unequal: u64,
    empirical_error_equal: Option<f64>,
    empirical_error_unequal: Option<f64>,
    expected_error_equal: Option<f64>,
    expected_error_unequal: Option<f64>,
    confidence_radius_equal: Option<f64>,
    confidence_radius_unequal: Option<f64>,
    theory_error_bound: Option<f64>,
    cost_alice: u64,
    cost_bob: u64,
    cost_unit: &'static str,
    key_bits: u64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn row(&self) -> ExperimentRow<'_> {
        ExperimentRow {
            protocol_id: self.protocol_id.to_string(),
            repetitions: self.repetitions,
            code_id: &self.code_id,
            n: self.n,
            m: self.m,
            pair_source: &self.pair_source,
            trials: self.trials,
            seed: self.seed,
            trials_equal: self.trials_equal,
            trials_unequal: self.trials_unequal,
            errors_equal: self.errors_equal,
            errors_unequal: self.errors_unequal,
            empirical_error_equal: self.empirical_error_equal,
            empirical_error_unequal: self.empirical_error_unequal,
            expected_error_equal: self.expected_error_equal,
            expected_error_unequal: self.expected_error_unequal,
            confidence_radius_equal: self.confidence_radius_equal,
            confidence_radius_unequal: self.confidence_radius_unequal,
            theory_error_bound: self.theory_error_bound,
            cost_alice: self.message_cost.alice,
            cost_bob: self.message_cost.bob,
            cost_unit: match self.message_cost.unit {
                CostUnit::Bits => "bits",
                CostUnit::Qubits => "qubits",
            },
            key_bits: self.message_cost.key_bits,
        }
    }

    /// Header line plus one data row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(self.row())?;
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    /// Whether the empirical unequal-input error lies within its 3σ radius of
    /// the expected value.
    pub fn unequal_within_radius(&self) -> Option<bool> {
        Some((self.empirical_error_unequal? - self.expected_error_unequal?).abs() <= self.confidence_radius_unequal?)
    }

    pub fn equal_within_radius(&self) -> Option<bool> {
        Some((self.empirical_error_equal? - self.expected_error_equal?).abs() <= self.confidence_radius_equal?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::Generator;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn equal_inputs_never_fail() {
        let h = BinaryCode::hadamard(4).unwrap();
        let x = bs("1011");
        for seed in 0..200 {
            assert_eq!(run_quantum_smp(&h, &x, &x, 3, seed).unwrap().verdict, Verdict::Equal);
            assert_eq!(run_classical_shared_key(&h, &x, &x, 3, seed).unwrap().verdict, Verdict::Equal);
        }
    }

    #[test]
    fn zero_repetitions_rejected() {
        let h = BinaryCode::hadamard(2).unwrap();
        assert!(matches!(run_quantum_smp(&h, &bs("01"), &bs("10"), 0, 1), Err(Error::Config(_))));
        assert!(matches!(run_classical_shared_key(&h, &bs("01"), &bs("10"), 0, 1), Err(Error::Config(_))));
        assert!(matches!("telepathy".parse::<ProtocolId>(), Err(Error::Config(_))));
    }

    #[test]
    fn costs() {
        let h = BinaryCode::hadamard(8).unwrap();
        let v = run_quantum_smp(&h, &bs("00000000"), &bs("00000001"), 5, 2).unwrap();
        assert_eq!((v.cost_alice, v.unit), (45, CostUnit::Qubits));
        let t = message_costs(&h, 5, 10);
        assert_eq!(t.quantum_qubits, 45);
        assert_eq!(t.trivial_bits, 8);
        assert_eq!((t.shared_key_bits, t.shared_key_key_bits), (10, 80));
        assert_eq!(t.mixture_bits, 9);
    }

    #[test]
    fn exact_errors() {
        let h = BinaryCode::hadamard(3).unwrap();
        let (x, y) = (bs("001"), bs("100"));
        let q = ProtocolConfig::new(ProtocolId::Quantum, 10).unwrap();
        assert!((q.exact_error(&h, &x, &y).unwrap() - 0.625f64.powi(10)).abs() < 1e-15);
        let s = ProtocolConfig::new(ProtocolId::SharedKey, 10).unwrap();
        assert_eq!(s.exact_error(&h, &x, &y).unwrap(), 2f64.powi(-10));
        let mix = ProtocolConfig::new(ProtocolId::Mixture, 0).unwrap();
        assert_eq!(mix.exact_error(&h, &x, &y).unwrap(), 1.0 / 16.0);
        assert_eq!(mix.exact_error(&h, &x, &x).unwrap(), 1.0 - 1.0 / 8.0);
    }

    #[test]
    fn degenerate_mixture_is_single_shared_bit() {
        let code = BinaryCode::declared_linear(Generator::from_rows(1, vec![1]).unwrap(), Rational::new(0, 1)).unwrap();
        for seed in 0..20 {
            let v = run_classical_mixture(&code, &bs("1"), &bs("1"), seed).unwrap();
            assert_eq!(v.verdict, Verdict::Equal);
            let w = run_classical_mixture(&code, &bs("1"), &bs("0"), seed).unwrap();
            assert_eq!(w.verdict, Verdict::Unequal);
        }
    }

    #[test]
    fn experiment_determinism_and_one_sidedness() {
        let h = BinaryCode::hadamard(6).unwrap();
        let p = ProtocolConfig::new(ProtocolId::Quantum, 2).unwrap();
        let a = run_experiment(p, &h, 5000, &PairSource::RandomPairs, 8).unwrap();
        let b = run_experiment(p, &h, 5000, &PairSource::RandomPairs, 8).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(a.errors_equal, 0);
        assert_eq!(a.trials_equal + a.trials_unequal, 5000);
        let csv = a.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("protocol_id,repetitions,code_id"));
    }

    #[test]
    fn adversarial_list_cycles() {
        let h = BinaryCode::hadamard(3).unwrap();
        let list = PairSource::AdversarialList(vec![(bs("000"), bs("000")), (bs("000"), bs("111"))]);
        let p = ProtocolConfig::new(ProtocolId::SharedKey, 1).unwrap();
        let r = run_experiment(p, &h, 1000, &list, 1).unwrap();
        assert_eq!((r.trials_equal, r.trials_unequal), (500, 500));
        let bad = PairSource::AdversarialList(vec![(bs("00"), bs("000"))]);
        assert!(run_experiment(p, &h, 10, &bad, 1).is_err());
    }
}

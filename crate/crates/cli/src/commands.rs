use qfingerprint::nearset::{self, VectorSet};
use qfingerprint::permtest::{self, PermMethod, PermTestOutcome, PermTestSpec};
use qfingerprint::protocols::{run_experiment, PairSource, ProtocolConfig, ProtocolId};
use qfingerprint::qstate::{qubits_required, Fingerprint};
use qfingerprint::swaptest::{swap_test_analytic, swap_test_circuit, swap_test_sample};
use qfingerprint::{rng, BinaryCode, BitString, Error, Result, State};
use serde_json::{json, Value};

use crate::output::{skipped, to_value, Report};
use crate::{CodeChoice, CodeOpts, CodesArgs, NearsetArgs, PairChoice, PermArgs, SmpArgs, StateSource, SwapArgs};

/// Sub-stream tags of the master seed.
const INPUT_STREAM: u64 = 0;
const SAMPLE_STREAM: u64 = 1;

fn build_code(opts: &CodeOpts, seed: u64) -> Result<BinaryCode> {
    match opts.kind {
        CodeChoice::Hadamard => BinaryCode::hadamard(opts.n),
        CodeChoice::RandomLinear => BinaryCode::random_linear(opts.n, opts.c, opts.code_seed.unwrap_or(seed)),
    }
}

fn check_len(flag: &str, x: &BitString, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::InputShape(format!("--{flag} has {} bits but the code expects n = {n}", x.len())));
    }
    Ok(())
}

fn sign_vectors(dim: usize, seed: u64) -> Result<(State, State)> {
    let set: VectorSet = nearset::sample_vector_set(2, dim, seed)?;
    Ok((set.fingerprint_state(0)?, set.fingerprint_state(1)?))
}

pub fn swap_test(a: &SwapArgs, seed: u64) -> Result<Report> {
    let mut inputs = rng::stream(seed, INPUT_STREAM);
    let mut result = serde_json::Map::new();
    result.insert("states".into(), to_value(&a.states)?);
    let (phi, psi) = match a.states {
        StateSource::Fingerprint => {
            let code = build_code(&a.code, seed)?;
            let x = match &a.x {
                Some(x) => x.clone(),
                None => code.random_message(&mut inputs),
            };
            let y = match (&a.y, a.x_equals_y) {
                (_, true) => x.clone(),
                (Some(y), false) => y.clone(),
                (None, false) => code.random_message(&mut inputs),
            };
            check_len("x", &x, code.n())?;
            check_len("y", &y, code.n())?;
            let hx = Fingerprint::<f64>::new(&code, &x)?;
            let hy = Fingerprint::<f64>::new(&code, &y)?;
            result.insert("code_id".into(), json!(code.id()));
            result.insert("code".into(), to_value(&code.spec())?);
            result.insert("x".into(), json!(x.to_string()));
            result.insert("y".into(), json!(y.to_string()));
            result.insert("agreement_fraction".into(), json!(code.agreement_fraction(&x, &y)?.to_string()));
            result.insert("qubits".into(), json!(qubits_required(&code)));
            (hx.state, hy.state)
        }
        StateSource::Random | StateSource::SignVector => {
            if a.x.is_some() || a.y.is_some() {
                return Err(Error::Config("--x and --y apply to fingerprint states only".into()));
            }
            let (phi, psi) = match a.states {
                StateSource::Random => {
                    let phi = State::random(vec![a.dim], &mut inputs)?;
                    let psi = if a.x_equals_y { phi.clone() } else { State::random(vec![a.dim], &mut inputs)? };
                    (phi, psi)
                }
                _ => {
                    let (phi, psi) = sign_vectors(a.dim, rng::sub_seed(seed, INPUT_STREAM))?;
                    let psi = if a.x_equals_y { phi.clone() } else { psi };
                    (phi, psi)
                }
            };
            result.insert("dim".into(), json!(a.dim));
            (phi, psi)
        }
    };
    result.insert("overlap".into(), json!(phi.inner_product(&psi)?.norm()));

    let analytic = swap_test_analytic(&phi, &psi)?;
    let circuit = match swap_test_circuit(&phi, &psi) {
        Ok(r) => Some(r),
        Err(Error::Capability(msg)) => {
            result.insert("circuit".into(), skipped(&msg));
            None
        }
        Err(e) => return Err(e),
    };
    let sampled = swap_test_sample(&phi, &psi, a.trials, rng::sub_seed(seed, SAMPLE_STREAM))?;
    result.insert("analytic".into(), to_value(&analytic)?);
    if let Some(c) = &circuit {
        result.insert("circuit".into(), to_value(c)?);
    }
    result.insert("sampled".into(), to_value(&sampled)?);
    result.insert(
        "deltas".into(),
        json!({
            "circuit_minus_analytic": circuit.as_ref().map(|c| c.p_one - analytic.p_one),
            "sampled_minus_analytic": sampled.p_one - analytic.p_one,
            "sampled_three_sigma": rng::three_sigma(analytic.p_one, a.trials),
        }),
    );
    Ok(Report {
        command: "swap-test",
        seed,
        config: to_value(a)?,
        result: Value::Object(result),
        rows_key: None,
    })
}

pub fn perm_test(a: &PermArgs, seed: u64) -> Result<Report> {
    let spec = PermTestSpec::new(a.k, a.gamma)?;
    if a.trials == 0 {
        return Err(Error::Config("--trials must be >= 1".into()));
    }
    let closed = permtest::p_eq_closed_form(a.k, a.gamma)?;
    let bounds = spec.bounds()?;
    let sample_seed = rng::sub_seed(seed, SAMPLE_STREAM);

    let (phi, psi) = permtest::qubit_pair_with_overlap(a.gamma)?;
    let (projection, sampled) = if permtest::projection_within_guard(phi.dim(), a.k) {
        let p = permtest::perm_test_projection(&phi, &psi, a.k)?;
        let s = permtest::simulate_perm_test(&phi, &psi, a.k, a.trials, sample_seed)?;
        (to_value(&p)?, s)
    } else {
        let reason = format!("symmetric projection of {} qubit registers exceeds the simulation guard", 2 * a.k);
        let hits = rng::bernoulli_count(closed, a.trials, sample_seed);
        let s = PermTestOutcome {
            p_equal: hits as f64 / a.trials as f64,
            method: PermMethod::Sampled,
            trials: Some(a.trials),
            seed: Some(sample_seed),
        };
        (skipped(&reason), s)
    };
    let hard_overlap = ((1.0 + a.gamma) / 2.0).powi(a.k as i32);
    let result = json!({
        "k": a.k,
        "gamma": a.gamma,
        "p_equal": closed,
        "method": PermMethod::ClosedForm,
        "closed_form": closed,
        "projection_minus_closed_form": projection.get("p_equal").and_then(Value::as_f64).map(|p| p - closed),
        "projection": projection,
        "sampled": to_value(&sampled)?,
        "sampled_minus_closed_form": sampled.p_equal - closed,
        "sampled_three_sigma": rng::three_sigma(closed, a.trials),
        "bounds": to_value(&bounds)?,
        "stirling_prefactor_ratio": permtest::stirling_prefactor_ratio(a.k)?,
        "closed_form_over_asymptotic": closed / bounds.asymptotic,
        "hard_instance": {
            "overlap": hard_overlap,
            "helstrom_error": permtest::helstrom_error(hard_overlap)?,
        },
    });
    Ok(Report {
        command: "perm-test",
        seed,
        config: to_value(a)?,
        result,
        rows_key: None,
    })
}

pub fn smp_run(a: &SmpArgs, seed: u64) -> Result<Report> {
    let id: ProtocolId = a.protocol.parse()?;
    let repetitions = match id {
        ProtocolId::Quantum => a.k,
        ProtocolId::SharedKey => a.r,
        ProtocolId::Mixture => 1,
    };
    let protocol = ProtocolConfig::new(id, repetitions)?;
    let pairs = match a.pairs {
        PairChoice::Adversarial => PairSource::AdversarialList(a.pair.clone()),
        _ if !a.pair.is_empty() => {
            return Err(Error::Config("--pair requires --pairs adversarial".into()));
        }
        PairChoice::Random => PairSource::RandomPairs,
        PairChoice::ForcedEqual => PairSource::ForcedEqual,
        PairChoice::ForcedUnequal => PairSource::ForcedUnequal,
    };
    let code = build_code(&a.code, seed)?;
    let report = run_experiment(protocol, &code, a.trials, &pairs, seed)?;
    Ok(Report {
        command: "smp-run",
        seed,
        config: to_value(a)?,
        result: to_value(&report)?,
        rows_key: None,
    })
}

pub fn nearset(a: &NearsetArgs, seed: u64) -> Result<Report> {
    let result = if a.pair_mode {
        let d = a.d.ok_or_else(|| Error::Config("--pair-mode needs --d".into()))?;
        let mut audit = to_value(&nearset::audit_random_pairs(d, a.pairs, a.delta, seed)?)?;
        audit["mode"] = json!("pairs");
        audit
    } else {
        let required = nearset::required_dimension(a.n, a.delta)?;
        if a.n > nearset::AUDIT_MAX_COUNT.trailing_zeros() {
            return Err(Error::Capability(format!(
                "set mode samples 2^n vectors and is limited to n <= {}",
                nearset::AUDIT_MAX_COUNT.trailing_zeros()
            )));
        }
        let d = a.d.unwrap_or(required as usize);
        let audits = (0..a.seeds)
            .map(|s| {
                let set = nearset::sample_vector_set(1 << a.n, d, rng::sub_seed(seed, s))?;
                to_value(&nearset::audit_overlaps(&set, a.delta)?)
            })
            .collect::<Result<Vec<Value>>>()?;
        let violations: u64 = audits.iter().filter_map(|v| v["violating_pairs"].as_u64()).sum();
        json!({
            "mode": "set",
            "n": a.n,
            "delta": a.delta,
            "d": d,
            "required_dimension": required,
            "union_bound_log2": nearset::union_bound_log2(a.n, d as u64, a.delta),
            "qubits": (d as f64).log2().ceil() as u64,
            "total_violating_pairs": violations,
            "expected_violating_pairs": nearset::pair_violation_probability(d as u64, a.delta)
                * a.seeds as f64
                * ((1u64 << a.n) * ((1u64 << a.n) - 1) / 2) as f64,
            "audits": audits,
        })
    };
    Ok(Report {
        command: "nearset",
        seed,
        config: to_value(a)?,
        result,
        rows_key: (!a.pair_mode).then_some("audits"),
    })
}

pub fn codes(a: &CodesArgs, seed: u64) -> Result<Report> {
    let code = build_code(&a.code, seed)?;
    let certificate = code.certify_distance()?;
    let mut result = json!({
        "code_id": code.id(),
        "code": to_value(&code.spec())?,
        "n": code.n(),
        "m": code.m(),
        "qubits": qubits_required(&code),
        "certificate": to_value(&certificate)?,
    });
    if a.exhaustive {
        result["exhaustive_certificate"] = to_value(&code.certify_exhaustive()?)?;
    }
    Ok(Report {
        command: "codes",
        seed,
        config: to_value(a)?,
        result,
        rows_key: None,
    })
}

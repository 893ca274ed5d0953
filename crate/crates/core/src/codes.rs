//! Binary codes `E : {0,1}^n -> {0,1}^m` used as the classical substrate of
//! fingerprints.
//!
//! Three families are provided: the Hadamard code (`m = 2^n`, every nonzero
//! codeword has weight exactly `m/2`), random linear codes with `m = c·n`
//! sampled from a seed, and declared codes whose agreement bound is supplied
//! by the caller. Linear codes are certified by enumerating all nonzero
//! messages in Gray-code order.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::rng;
use crate::Rational;

/// Largest message length accepted by exhaustive certification.
pub const CERTIFY_MAX_N: usize = 24;
/// Work budget (messages × codeword words) for exhaustive certification.
pub const CERTIFY_MAX_WORK: u64 = 1 << 31;
/// Largest Hadamard message length whose codeword may be materialized.
pub const HADAMARD_ENCODE_MAX_N: usize = 26;
/// Message-length guard for pairwise (non-linear) certification.
pub const EXHAUSTIVE_PAIRS_MAX_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeKind {
    Hadamard,
    RandomLinear,
    Declared,
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Hadamard => "hadamard",
            CodeKind::RandomLinear => "random-linear",
            CodeKind::Declared => "declared",
        })
    }
}

/// An `m × n` matrix over GF(2), stored as one `u64` mask per row with
/// column `j` (1-based) at bit `j - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    n: usize,
    rows: Vec<u64>,
}

impl Generator {
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InputShape(format!(
                "generator message length must be in 1..=64, got {n}"
            )));
        }
        if rows.is_empty() {
            return Err(Error::InputShape("generator has no rows".into()));
        }
        let mask = column_mask(n);
        if let Some(i) = rows.iter().position(|r| r & !mask != 0) {
            return Err(Error::InputShape(format!(
                "generator row {} has bits beyond column {n}",
                i + 1
            )));
        }
        Ok(Generator { n, rows })
    }

    /// Parses rows written as hex strings, least-significant bit = column 1.
    pub fn from_hex_rows<S: AsRef<str>>(n: usize, rows: &[S]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                u64::from_str_radix(r.as_ref(), 16)
                    .map_err(|e| Error::Format(format!("generator row {:?}: {e}", r.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Generator::from_rows(n, rows)
    }

    /// Identity on the first `n` rows, zero rows after.
    pub fn identity_padded(n: usize, m: usize) -> Result<Self> {
        if m < n {
            return Err(Error::InputShape(format!("m = {m} is smaller than n = {n}")));
        }
        Generator::from_rows(n, (0..m).map(|i| if i < n { 1u64 << i } else { 0 }).collect())
    }

    /// Each message bit copied `c` times in a row.
    pub fn repetition(n: usize, c: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::InputShape("repetition factor must be positive".into()));
        }
        Generator::from_rows(n, (0..n * c).map(|i| 1u64 << (i / c)).collect())
    }

    /// Uniformly random `c·n × n` generator with linearly independent columns.
    ///
    /// Columns are drawn one at a time from the seeded stream; a column lying in
    /// the span of the earlier ones is redrawn.
    pub fn random(n: usize, c: usize, seed: u64) -> Result<Self> {
        if c < 2 {
            return Err(Error::InputShape(format!("expansion factor c must be >= 2, got {c}")));
        }
        let m = n * c;
        let mut rng = rng::master(seed);
        let mut basis: Vec<(usize, BitString)> = Vec::with_capacity(n);
        let mut columns = Vec::with_capacity(n);
        while columns.len() < n {
            let col = BitString::random(m, &mut rng);
            let mut residual = col.clone();
            for (pivot, b) in &basis {
                if residual.get(*pivot) {
                    residual.xor_assign(b);
                }
            }
            if let Some(pivot) = (0..m).find(|&i| residual.get(i)) {
                basis.push((pivot, residual));
                columns.push(col);
            }
        }
        let rows = (0..m)
            .map(|i| {
                columns
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, col)| acc | ((col.get(i) as u64) << j))
            })
            .collect();
        Generator::from_rows(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn hex_rows(&self) -> Vec<String> {
        let width = self.n.div_ceil(4);
        self.rows.iter().map(|r| format!("{r:0width$x}")).collect()
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let bit = 1u64 << col;
            if let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) {
                rows.swap(rank, p);
                let pivot = rows[rank];
                for (i, r) in rows.iter_mut().enumerate() {
                    if i != rank && *r & bit != 0 {
                        *r ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    /// `x -> Gx` is injective iff the columns are independent.
    pub fn is_injective(&self) -> bool {
        self.rank() == self.n
    }

    fn bit(&self, x_mask: u64, i: usize) -> bool {
        (self.rows[i] & x_mask).count_ones() & 1 == 1
    }

    fn column(&self, j: usize) -> BitString {
        BitString::from_bits(self.rows.iter().map(|r| (r >> j) & 1 == 1))
    }
}

fn column_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

type CustomEncoder = Arc<dyn Fn(&BitString) -> BitString + Send + Sync>;

#[derive(Clone)]
enum Encoding {
    Hadamard,
    Linear(Generator),
    Custom(CustomEncoder),
}

/// A binary code with its family and, for declared codes, the claimed bound
/// on the fraction of agreeing positions between distinct codewords.
#[derive(Clone)]
pub struct BinaryCode {
    n: usize,
    m: usize,
    kind: CodeKind,
    encoding: Encoding,
    seed: Option<u64>,
    declared_delta: Option<Rational>,
}

impl fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryCode")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("m", &self.m)
            .field("seed", &self.seed)
            .field("declared_delta", &self.declared_delta)
            .finish()
    }
}

impl BinaryCode {
    /// Hadamard code: bit `i` (0-based, `i < 2^n`) of `E(x)` is `<i, x> mod 2`
    /// with `x` read as a binary numeral.
    pub fn hadamard(n: usize) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InputShape(format!(
                "hadamard message length must be in 1..=63, got {n}"
            )));
        }
        Ok(BinaryCode {
            n,
            m: 1usize << n,
            kind: CodeKind::Hadamard,
            encoding: Encoding::Hadamard,
            seed: None,
            declared_delta: None,
        })
    }

    pub fn random_linear(n: usize, c: usize, seed: u64) -> Result<Self> {
        let generator = Generator::random(n, c, seed)?;
        Ok(BinaryCode {
            n,
            m: generator.m(),
            kind: CodeKind::RandomLinear,
            encoding: Encoding::Linear(generator),
            seed: Some(seed),
            declared_delta: None,
        })
    }

    /// Linear code with an explicit generator. `m` must be `c·n` with `c >= 2`.
    /// Injectivity is not checked here; [`BinaryCode::certify_distance`]
    /// reports a violation.
    pub fn from_generator(generator: Generator) -> Result<Self> {
        let (n, m) = (generator.n(), generator.m());
        if m % n != 0 || m / n < 2 {
            return Err(Error::InputShape(format!(
                "linear code length m = {m} is not a multiple c·n with c >= 2 (n = {n})"
            )));
        }
        Ok(BinaryCode {
            n,
            m,
            kind: CodeKind::RandomLinear,
            encoding: Encoding::Linear(generator),
            seed: None,
            declared_delta: None,
        })
    }

    /// Linear encoder of any shape carrying a caller-supplied agreement bound.
    pub fn declared_linear(generator: Generator, delta: Rational) -> Result<Self> {
        check_delta(delta)?;
        Ok(BinaryCode {
            n: generator.n(),
            m: generator.m(),
            kind: CodeKind::Declared,
            encoding: Encoding::Linear(generator),
            seed: None,
            declared_delta: Some(delta),
        })
    }

    /// Arbitrary encoder with a claimed agreement bound. The encoder must map
    /// `n`-bit strings to `m`-bit strings.
    pub fn declared<F>(n: usize, m: usize, delta: Rational, encoder: F) -> Result<Self>
    where
        F: Fn(&BitString) -> BitString + Send + Sync + 'static,
    {
        check_delta(delta)?;
        if n == 0 || m == 0 {
            return Err(Error::InputShape("declared code needs n, m >= 1".into()));
        }
        Ok(BinaryCode {
            n,
            m,
            kind: CodeKind::Declared,
            encoding: Encoding::Custom(Arc::new(encoder)),
            seed: None,
            declared_delta: Some(delta),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn declared_delta(&self) -> Option<Rational> {
        self.declared_delta
    }

    pub fn generator(&self) -> Option<&Generator> {
        match &self.encoding {
            Encoding::Linear(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self.encoding, Encoding::Custom(_))
    }

    /// Short stable identifier used in reports.
    pub fn id(&self) -> String {
        match (&self.kind, self.seed) {
            (CodeKind::Hadamard, _) => format!("hadamard:n={}", self.n),
            (CodeKind::RandomLinear, Some(seed)) => {
                format!("random-linear:n={}:m={}:seed={seed}", self.n, self.m)
            }
            (CodeKind::RandomLinear, None) => format!("linear:n={}:m={}", self.n, self.m),
            (CodeKind::Declared, _) => format!("declared:n={}:m={}", self.n, self.m),
        }
    }

    fn check_message(&self, x: &BitString) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::InputShape(format!(
                "message has {} bits, code expects n = {}",
                x.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// `E(x)`.
    pub fn encode(&self, x: &BitString) -> Result<BitString> {
        self.check_message(x)?;
        match &self.encoding {
            Encoding::Hadamard => {
                if self.n > HADAMARD_ENCODE_MAX_N {
                    return Err(Error::Capability(format!(
                        "hadamard codeword of length 2^{} is too large to materialize; use bit_at",
                        self.n
                    )));
                }
                let xv = x.to_u64_msb();
                Ok(BitString::from_bits(
                    (0..self.m as u64).map(|i| (i & xv).count_ones() & 1 == 1),
                ))
            }
            Encoding::Linear(g) => {
                let xm = x.to_u64_lsb();
                Ok(BitString::from_bits((0..self.m).map(|i| g.bit(xm, i))))
            }
            Encoding::Custom(f) => {
                let c = f(x);
                if c.len() != self.m {
                    return Err(Error::InputShape(format!(
                        "declared encoder produced {} bits, expected m = {}",
                        c.len(),
                        self.m
                    )));
                }
                Ok(c)
            }
        }
    }

    /// `E_i(x)` with `i` in `1..=m`. Hadamard and linear codes never build the
    /// full codeword.
    pub fn bit_at(&self, x: &BitString, i: usize) -> Result<bool> {
        self.check_message(x)?;
        if i == 0 || i > self.m {
            return Err(Error::InputShape(format!(
                "codeword index {i} outside 1..={}",
                self.m
            )));
        }
        Ok(self.bit0(x, i - 1))
    }

    /// 0-based bit access; `x` must already have length `n`.
    pub(crate) fn bit0(&self, x: &BitString, i: usize) -> bool {
        match &self.encoding {
            Encoding::Hadamard => ((i as u64) & x.to_u64_msb()).count_ones() & 1 == 1,
            Encoding::Linear(g) => g.bit(x.to_u64_lsb(), i),
            Encoding::Custom(f) => f(x).get(i),
        }
    }

    /// Exact `|{i : E_i(x) = E_i(y)}| / m`.
    pub fn agreement_fraction(&self, x: &BitString, y: &BitString) -> Result<Rational> {
        Ok(Rational::new(self.agreements(x, y)?, self.m as u64))
    }

    /// Number of positions where `E(x)` and `E(y)` agree.
    pub fn agreements(&self, x: &BitString, y: &BitString) -> Result<u64> {
        self.check_message(y)?;
        let (ex, ey) = (self.encode(x)?, self.encode(y)?);
        Ok(self.m as u64 - ex.distance(&ey))
    }

    /// Exact minimum distance between distinct codewords.
    ///
    /// Declared codes return their declared bound. Linear codes enumerate all
    /// `2^n - 1` nonzero messages; a zero-weight codeword is reported as an
    /// injectivity violation.
    pub fn certify_distance(&self) -> Result<DistanceCertificate> {
        if let Some(delta) = self.declared_delta {
            return Ok(DistanceCertificate::from_declared(self.m, delta));
        }
        if !matches!(self.encoding, Encoding::Custom(_)) {
            self.certify_guard()?;
        }
        let columns: Vec<BitString> = match &self.encoding {
            Encoding::Hadamard => (0..self.n)
                .map(|j| {
                    let shift = self.n - 1 - j;
                    BitString::from_bits((0..self.m as u64).map(|i| (i >> shift) & 1 == 1))
                })
                .collect(),
            Encoding::Linear(g) => (0..self.n).map(|j| g.column(j)).collect(),
            Encoding::Custom(_) => {
                return Err(Error::Capability(
                    "custom encoders need a declared bound".into(),
                ))
            }
        };
        let mut word = BitString::zeros(self.m);
        let mut best = u64::MAX;
        let mut best_msg = 0u64;
        // Gray-code walk: step t flips message bit trailing_zeros(t)
        let mut gray = 0u64;
        for t in 1u64..(1u64 << self.n) {
            let j = t.trailing_zeros() as usize;
            word.xor_assign(&columns[j]);
            gray ^= 1 << j;
            let w = word.weight();
            if w < best {
                best = w;
                best_msg = gray;
                if w == 0 {
                    break;
                }
            }
        }
        if best == 0 {
            // column j belongs to message position j in both encodings
            let msg = BitString::from_u64_lsb(best_msg, self.n);
            return Err(Error::NotInjective(msg.to_string()));
        }
        Ok(DistanceCertificate::new(
            best,
            self.m as u64,
            CertificateMethod::WeightEnumeration,
        ))
    }

    fn certify_guard(&self) -> Result<()> {
        let work = (1u64 << self.n.min(63)).saturating_mul(self.m.div_ceil(64) as u64);
        if self.n > CERTIFY_MAX_N || work > CERTIFY_MAX_WORK {
            return Err(Error::Capability(format!(
                "exhaustive certification of n = {}, m = {} exceeds the guard \
                 (n <= {CERTIFY_MAX_N}, 2^n·words <= 2^31); declare a bound instead",
                self.n, self.m
            )));
        }
        Ok(())
    }

    /// Minimum distance over all distinct pairs, for any encoder. Quadratic in
    /// `2^n`; limited to `n <= 12`.
    pub fn certify_exhaustive(&self) -> Result<DistanceCertificate> {
        if self.n > EXHAUSTIVE_PAIRS_MAX_N {
            return Err(Error::Capability(format!(
                "pairwise certification limited to n <= {EXHAUSTIVE_PAIRS_MAX_N}, got {}",
                self.n
            )));
        }
        let words = (0..1u64 << self.n)
            .map(|v| self.encode(&BitString::from_u64_lsb(v, self.n)))
            .collect::<Result<Vec<_>>>()?;
        let mut best = u64::MAX;
        for (a, wa) in words.iter().enumerate() {
            for (b, wb) in words.iter().enumerate().skip(a + 1) {
                let d = wa.distance(wb);
                if d == 0 {
                    return Err(Error::NotInjective(format!(
                        "{} and {} share a codeword",
                        BitString::from_u64_lsb(a as u64, self.n),
                        BitString::from_u64_lsb(b as u64, self.n)
                    )));
                }
                best = best.min(d);
            }
        }
        Ok(DistanceCertificate::new(best, self.m as u64, CertificateMethod::Exhaustive))
    }

    /// Serializable description.
    pub fn spec(&self) -> CodeSpec {
        let generator = match (&self.encoding, self.kind, self.seed) {
            (Encoding::Linear(_), CodeKind::RandomLinear, Some(_)) => None,
            (Encoding::Linear(g), _, _) => Some(g.hex_rows()),
            _ => None,
        };
        CodeSpec {
            kind: self.kind,
            n: self.n,
            m: self.m,
            seed: self.seed,
            generator,
            declared_delta: self.declared_delta.map(|d| d.to_string()),
        }
    }

    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        let code = match spec.kind {
            CodeKind::Hadamard => BinaryCode::hadamard(spec.n)?,
            CodeKind::RandomLinear => match (&spec.generator, spec.seed) {
                (Some(rows), _) => {
                    BinaryCode::from_generator(Generator::from_hex_rows(spec.n, rows)?)?
                }
                (None, Some(seed)) => {
                    if !spec.m.is_multiple_of(spec.n) {
                        return Err(Error::Format(format!(
                            "m = {} is not a multiple of n = {}",
                            spec.m, spec.n
                        )));
                    }
                    BinaryCode::random_linear(spec.n, spec.m / spec.n, seed)?
                }
                (None, None) => {
                    return Err(Error::Format(
                        "random-linear code needs a seed or a generator".into(),
                    ))
                }
            },
            CodeKind::Declared => {
                let delta = spec
                    .declared_delta
                    .as_deref()
                    .ok_or_else(|| Error::Format("declared code needs declared_delta".into()))?;
                let delta: Rational = delta
                    .parse()
                    .map_err(|e| Error::Format(format!("declared_delta {delta:?}: {e:?}")))?;
                let rows = spec.generator.as_ref().ok_or_else(|| {
                    Error::Format("only declared codes with a generator can be deserialized".into())
                })?;
                BinaryCode::declared_linear(Generator::from_hex_rows(spec.n, rows)?, delta)?
            }
        };
        if code.m != spec.m {
            return Err(Error::Format(format!(
                "code description says m = {}, construction gives m = {}",
                spec.m, code.m
            )));
        }
        Ok(code)
    }

    /// Uniform message of length `n`.
    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        BitString::random(self.n, rng)
    }
}

fn check_delta(delta: Rational) -> Result<()> {
    if delta > Rational::from_integer(1) {
        return Err(Error::Domain(format!("agreement bound {delta} exceeds 1")));
    }
    Ok(())
}

/// JSON form of a code: `{kind, n, m, seed?, generator?, declared_delta?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_delta: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMethod {
    Exhaustive,
    WeightEnumeration,
    Declared,
}

/// Minimum distance and the matching agreement bound `δ = 1 - d/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceCertificate {
    pub min_distance: u64,
    pub max_agreement: Rational,
    pub method: CertificateMethod,
}

impl DistanceCertificate {
    fn new(min_distance: u64, m: u64, method: CertificateMethod) -> Self {
        DistanceCertificate {
            min_distance,
            max_agreement: Rational::from_integer(1) - Rational::new(min_distance, m),
            method,
        }
    }

    /// Agreement counts are integers, so a declared `δ` certifies at most
    /// `floor(δ·m)` agreeing positions.
    fn from_declared(m: usize, delta: Rational) -> Self {
        let agree = (delta * Rational::from_integer(m as u64)).floor().to_integer();
        DistanceCertificate::new(m as u64 - agree, m as u64, CertificateMethod::Declared)
    }

    pub fn delta_f64(&self) -> f64 {
        *self.max_agreement.numer() as f64 / *self.max_agreement.denom() as f64
    }
}

impl Serialize for DistanceCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DistanceCertificate", 4)?;
        st.serialize_field("min_distance", &self.min_distance)?;
        st.serialize_field("max_agreement", &self.max_agreement.to_string())?;
        st.serialize_field("max_agreement_f64", &self.delta_f64())?;
        st.serialize_field("method", &self.method)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_small_codewords() {
        let h = BinaryCode::hadamard(2).unwrap();
        assert_eq!(h.m(), 4);
        assert_eq!(h.encode(&bs("00")).unwrap().to_string(), "0000");
        assert_eq!(h.encode(&bs("11")).unwrap().to_string(), "0110");
        assert!(h.bit_at(&bs("11"), 2).unwrap());
    }

    #[test]
    fn hadamard_bit_at_without_codeword() {
        let h = BinaryCode::hadamard(8).unwrap();
        assert!(h.bit_at(&bs("10000000"), 129).unwrap());
        let big = BinaryCode::hadamard(40).unwrap();
        let x = BitString::from_u64_msb(1 << 39 | 5, 40);
        assert!(big.bit_at(&x, (1usize << 39) + 1).unwrap());
        assert!(matches!(big.encode(&x), Err(Error::Capability(_))));
    }

    #[test]
    fn bit_at_range_and_shape() {
        let h = BinaryCode::hadamard(2).unwrap();
        assert!(matches!(h.bit_at(&bs("11"), 0), Err(Error::InputShape(_))));
        assert!(matches!(h.bit_at(&bs("11"), 5), Err(Error::InputShape(_))));
        assert!(matches!(h.encode(&bs("110")), Err(Error::InputShape(_))));
    }

    #[test]
    fn identity_padded_copies_message() {
        let code = BinaryCode::from_generator(Generator::identity_padded(3, 6).unwrap()).unwrap();
        assert_eq!(code.encode(&bs("101")).unwrap().to_string(), "101000");
        assert_eq!(code.certify_distance().unwrap().min_distance, 1);
    }

    #[test]
    fn hadamard_certificate() {
        let cert = BinaryCode::hadamard(4).unwrap().certify_distance().unwrap();
        assert_eq!(cert.min_distance, 8);
        assert_eq!(cert.max_agreement, Rational::new(1, 2));
        assert_eq!(cert.method, CertificateMethod::WeightEnumeration);
    }

    #[test]
    fn zero_column_is_rejected() {
        // column 2 never appears
        let g = Generator::from_rows(2, vec![1, 1, 1, 1]).unwrap();
        assert!(!g.is_injective());
        let code = BinaryCode::from_generator(g).unwrap();
        assert_eq!(code.certify_distance(), Err(Error::NotInjective("01".into())));
        assert!(matches!(code.certify_exhaustive(), Err(Error::NotInjective(_))));
    }

    #[test]
    fn random_linear_is_injective_and_deterministic() {
        let a = BinaryCode::random_linear(8, 8, 7).unwrap();
        let b = BinaryCode::random_linear(8, 8, 7).unwrap();
        assert_eq!(a.generator(), b.generator());
        assert!(a.generator().unwrap().is_injective());
        let cert = a.certify_distance().unwrap();
        assert!(cert.min_distance >= 1);
        assert_eq!(cert, DistanceCertificate { method: CertificateMethod::WeightEnumeration, ..a.certify_exhaustive().unwrap() });
        assert!(BinaryCode::random_linear(8, 1, 7).is_err());
    }

    #[test]
    fn repetition_agreement() {
        let code = BinaryCode::from_generator(Generator::repetition(4, 3).unwrap()).unwrap();
        let f = code.agreement_fraction(&bs("0110"), &bs("0111")).unwrap();
        assert_eq!(f, Rational::new(3, 4));
        assert_eq!(code.agreement_fraction(&bs("0110"), &bs("0110")).unwrap(), Rational::from_integer(1));
    }

    #[test]
    fn declared_bound_and_guard() {
        let g = Generator::identity_padded(3, 7).unwrap();
        let code = BinaryCode::declared_linear(g, Rational::new(9, 10)).unwrap();
        let cert = code.certify_distance().unwrap();
        assert_eq!(cert.method, CertificateMethod::Declared);
        assert_eq!(cert.min_distance, 1);
        assert_eq!(cert.max_agreement, Rational::new(6, 7));
        let big = BinaryCode::random_linear(30, 2, 1).unwrap();
        assert!(matches!(big.certify_distance(), Err(Error::Capability(_))));
    }

    #[test]
    fn custom_encoder() {
        let code = BinaryCode::declared(2, 4, Rational::new(1, 2), |x: &BitString| {
            let mut w = x.clone().to_string();
            w.push_str(&x.to_string());
            w.parse().unwrap()
        })
        .unwrap();
        assert_eq!(code.encode(&bs("10")).unwrap().to_string(), "1010");
        assert!(code.bit_at(&bs("10"), 3).unwrap());
        assert_eq!(code.certify_exhaustive().unwrap().min_distance, 2);
    }

    #[test]
    fn spec_roundtrip() {
        for code in [
            BinaryCode::hadamard(5).unwrap(),
            BinaryCode::random_linear(6, 3, 11).unwrap(),
            BinaryCode::from_generator(Generator::repetition(5, 2).unwrap()).unwrap(),
            BinaryCode::declared_linear(Generator::identity_padded(3, 5).unwrap(), Rational::new(4, 5)).unwrap(),
        ] {
            let json = serde_json::to_string(&code.spec()).unwrap();
            let back = BinaryCode::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
            assert_eq!(back.spec(), code.spec());
            assert_eq!(back.generator(), code.generator());
        }
    }

    #[test]
    fn hex_rows_lsb_is_column_one() {
        let g = Generator::identity_padded(5, 10).unwrap();
        assert_eq!(g.hex_rows()[0], "01");
        assert_eq!(g.hex_rows()[4], "10");
        let spec = BinaryCode::from_generator(g).unwrap().spec();
        let json = serde_json::to_value(&spec).unwrap();
        assert_eq!(json["kind"], "random-linear");
        assert_eq!(json["generator"][1], "02");
    }
}

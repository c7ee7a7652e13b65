//! Multiplier sequences `d_n`, the logarithmic weight, and `l²` test
//! sequences `a_n`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default decay exponent for seeded random sequences.
pub const DEFAULT_ALPHA: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MultiplierSeq {
    Constant(f64),
    Power(f64),
    /// `√n / log₂(n + 1)`.
    SqrtOverLog,
    /// `values[n - 1]`.
    Table(Vec<f64>),
}

impl MultiplierSeq {
    pub fn value(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("multiplier index must be at least 1".into()));
        }
        let x = n as f64;
        Ok(match self {
            MultiplierSeq::Constant(c) => *c,
            MultiplierSeq::Power(gamma) => x.powf(*gamma),
            MultiplierSeq::SqrtOverLog => x.sqrt() / (x + 1.0).log2(),
            MultiplierSeq::Table(values) => *values.get(n - 1).ok_or_else(|| {
                Error::Precondition(format!(
                    "multiplier table has {} entries, index {n} requested",
                    values.len()
                ))
            })?,
        })
    }

    /// `d_1..d_n`.
    pub fn values(&self, n: usize) -> Result<Vec<f64>> {
        (1..=n).map(|k| self.value(k)).collect()
    }
}

impl fmt::Display for MultiplierSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierSeq::Constant(c) => write!(f, "const:{c}"),
            MultiplierSeq::Power(g) => write!(f, "power:{g}"),
            MultiplierSeq::SqrtOverLog => f.write_str("sqrtlog"),
            MultiplierSeq::Table(values) => {
                let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse(format!("invalid {what} {s:?}")))
}

/// Numbers separated by commas and/or whitespace.
pub fn parse_number_list(s: &str) -> Result<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_f64(t, "number"))
        .collect()
}

impl FromStr for MultiplierSeq {
    type Err = Error;

    /// `const:<c>`, `power:<γ>`, `sqrtlog`, `table:<v1>,<v2>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("sqrtlog", None) => Ok(MultiplierSeq::SqrtOverLog),
            ("const", Some(a)) => Ok(MultiplierSeq::Constant(parse_f64(a, "constant")?)),
            ("power", Some(a)) => Ok(MultiplierSeq::Power(parse_f64(a, "exponent")?)),
            ("table", Some(a)) => {
                let values = parse_number_list(a)?;
                if values.is_empty() {
                    return Err(Error::Parse("empty multiplier table".into()));
                }
                Ok(MultiplierSeq::Table(values))
            }
            _ => Err(Error::Parse(format!("unknown multiplier rule {s:?}"))),
        }
    }
}

impl TryFrom<String> for MultiplierSeq {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MultiplierSeq> for String {
    fn from(m: MultiplierSeq) -> Self {
        m.to_string()
    }
}

/// Logarithmic weight convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// `log₂ k`, so the index-1 term never contributes.
    #[default]
    Paper,
    /// `log₂(k + 1)`.
    Shifted,
}

impl WeightMode {
    pub fn weight(self, k: usize) -> f64 {
        match self {
            WeightMode::Paper => (k as f64).log2(),
            WeightMode::Shifted => (k as f64 + 1.0).log2(),
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightMode::Paper => "paper",
            WeightMode::Shifted => "shifted",
        })
    }
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(WeightMode::Paper),
            "shifted" => Ok(WeightMode::Shifted),
            other => Err(Error::Parse(format!("unknown weight mode {other:?}"))),
        }
    }
}

/// `log₂ k`, with `weight(1) = 0`.
pub fn weight(k: usize) -> f64 {
    WeightMode::Paper.weight(k)
}

/// A multiplier together with the weight convention it is used with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weighting {
    pub multiplier: MultiplierSeq,
    pub mode: WeightMode,
}

impl Weighting {
    pub fn new(multiplier: MultiplierSeq, mode: WeightMode) -> Self {
        Self { multiplier, mode }
    }

    /// `d ≡ 1` with the `log₂k` weight.
    pub fn unit() -> Self {
        Self::new(MultiplierSeq::Constant(1.0), WeightMode::Paper)
    }

    pub fn paper(multiplier: MultiplierSeq) -> Self {
        Self::new(multiplier, WeightMode::Paper)
    }

    /// `d_k² · log²k` for `k = 1..n`.
    pub fn factors(&self, n: usize) -> Result<Vec<f64>> {
        (1..=n)
            .map(|k| {
                let d = self.multiplier.value(k)?;
                let w = self.mode.weight(k);
                Ok(d * d * w * w)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceDescriptor {
    UnitBasis { k: usize },
    Table,
    SeededRandom { seed: u64, alpha: f64 },
}

impl fmt::Display for SequenceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceDescriptor::UnitBasis { k } => write!(f, "unit:{k}"),
            SequenceDescriptor::Table => f.write_str("table"),
            SequenceDescriptor::SeededRandom { seed, alpha } => {
                write!(f, "random:seed={seed},alpha={alpha}")
            }
        }
    }
}

/// Finite section `a_1..a_N` of an `l²` sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceA {
    pub values: Vec<f64>,
    pub descriptor: SequenceDescriptor,
}

impl SequenceA {
    /// `e_k` of length `len`.
    pub fn unit_basis(k: usize, len: usize) -> Result<Self> {
        if k == 0 || k > len {
            return Err(Error::Precondition(format!(
                "unit-basis index {k} outside 1..={len}"
            )));
        }
        let mut values = vec![0.0; len];
        values[k - 1] = 1.0;
        Ok(Self {
            values,
            descriptor: SequenceDescriptor::UnitBasis { k },
        })
    }

    pub fn table(values: Vec<f64>) -> Self {
        Self {
            values,
            descriptor: SequenceDescriptor::Table,
        }
    }

    /// `a_k = z_k / k^α` normalized to unit `l²` norm, where `z_k` are
    /// uniform on `[-1, 1)` drawn in order from ChaCha8 seeded with `seed`.
    pub fn seeded_random(seed: u64, alpha: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Precondition(
                "random sequence length must be positive".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values: Vec<f64> = (1..=len)
            .map(|k| rng.gen_range(-1.0..1.0) / (k as f64).powf(alpha))
            .collect();
        let norm = crate::sum::compensated_sum(values.iter().map(|v| v * v)).sqrt();
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(Self {
            values,
            descriptor: SequenceDescriptor::SeededRandom { seed, alpha },
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
            descriptor: SequenceDescriptor::Table,
        }
    }
}

impl AsRef<[f64]> for SequenceA {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

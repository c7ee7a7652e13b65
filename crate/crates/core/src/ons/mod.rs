//! The three concrete orthonormal systems on `[0, 1]` with exact evaluation
//! and exact antiderivatives `Φ_n(x) = ∫_0^x φ_n`.
//!
//! Indexing without the constant:
//!
//! * trig: `φ_{2k-1} = √2 cos 2πkx`, `φ_{2k} = √2 sin 2πkx`;
//! * walsh: `φ_n = w_n` in Paley order, right-continuous, `x = 1` by left limit;
//! * haar: `φ_n = χ_{n+1}`, amplitude `2^{j/2}` for `n + 1 = 2^j + i`.
//!
//! With the constant (`"+const"`), `φ_1 = 1` and `φ_{n} = ψ_{n-1}` where `ψ`
//! is the system above, so `walsh+const` is `w_0, w_1, ...` and `haar+const`
//! is `χ_1, χ_2, ...`.

pub mod dyadic;
pub mod trig;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bv::{check_unit, BVFunction};
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

pub use dyadic::DyadicElement;
pub use trig::{Phase, TrigElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Trig,
    WalshPaley,
    Haar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SystemId {
    pub kind: SystemKind,
    pub include_constant: bool,
}

impl SystemId {
    pub const TRIG: SystemId = SystemId {
        kind: SystemKind::Trig,
        include_constant: false,
    };
    pub const WALSH: SystemId = SystemId {
        kind: SystemKind::WalshPaley,
        include_constant: false,
    };
    pub const HAAR: SystemId = SystemId {
        kind: SystemKind::Haar,
        include_constant: false,
    };

    pub fn with_constant(self) -> Self {
        Self {
            include_constant: true,
            ..self
        }
    }

    pub fn is_dyadic(&self) -> bool {
        matches!(self.kind, SystemKind::WalshPaley | SystemKind::Haar)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            SystemKind::Trig => "trig",
            SystemKind::WalshPaley => "walsh",
            SystemKind::Haar => "haar",
        };
        if self.include_constant {
            write!(f, "{base}+const")
        } else {
            f.write_str(base)
        }
    }
}

impl FromStr for SystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, include_constant) = match s.strip_suffix("+const") {
            Some(base) => (base, true),
            None => (s, false),
        };
        let kind = match base {
            "trig" => SystemKind::Trig,
            "walsh" => SystemKind::WalshPaley,
            "haar" => SystemKind::Haar,
            other => return Err(Error::Parse(format!("unknown system {other:?}"))),
        };
        Ok(Self {
            kind,
            include_constant,
        })
    }
}

impl TryFrom<String> for SystemId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SystemId> for String {
    fn from(id: SystemId) -> Self {
        id.to_string()
    }
}

/// One concrete system element.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Dyadic(DyadicElement),
    Trig(TrigElement),
}

impl Element {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Element::Dyadic(e) => e.eval(x),
            Element::Trig(e) => e.eval(x),
        }
    }

    pub fn antiderivative(&self, x: f64) -> f64 {
        match self {
            Element::Dyadic(e) => e.antiderivative(x),
            Element::Trig(e) => e.antiderivative(x),
        }
    }

    pub fn sup_antiderivative(&self) -> f64 {
        match self {
            Element::Dyadic(e) => e.sup_antiderivative(),
            Element::Trig(e) => e.sup_antiderivative(),
        }
    }

    /// `∫_a^b φ`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.antiderivative(b) - self.antiderivative(a)
    }

    /// Exact `∫_a^b f·φ`.
    pub fn integrate_against(&self, f: &BVFunction, a: f64, b: f64) -> f64 {
        match self {
            Element::Dyadic(e) => e.integrate_against(f, a, b),
            Element::Trig(e) => e.integrate_against(f, a, b),
        }
    }

    /// Exact `∫_0^1 φ ψ`.
    pub fn inner_product(&self, other: &Element) -> f64 {
        match (self, other) {
            (Element::Dyadic(a), Element::Dyadic(b)) => a.inner_product(b),
            (Element::Trig(a), Element::Trig(b)) => a.product_integral(b, 0.0, 1.0),
            (Element::Dyadic(d), Element::Trig(t)) | (Element::Trig(t), Element::Dyadic(d)) => {
                let (start, len) = d.run();
                let h = d.cell_width();
                let mut acc = NeumaierSum::new();
                for c in start..start + len {
                    let s = d.sign(c);
                    if s != 0 {
                        let a = c as f64 * h;
                        acc.add(f64::from(s) * t.integral(a, a + h));
                    }
                }
                d.amplitude() * acc.total()
            }
        }
    }

    pub fn as_dyadic(&self) -> Option<&DyadicElement> {
        match self {
            Element::Dyadic(e) => Some(e),
            Element::Trig(_) => None,
        }
    }
}

impl TrigElement {
    fn integral(&self, a: f64, b: f64) -> f64 {
        self.antiderivative(b) - self.antiderivative(a)
    }
}

/// An indexable orthonormal system `φ_1, φ_2, ...`.
pub trait Basis: Sync {
    fn element(&self, n: usize) -> Result<Element>;

    /// Whether every element is a dyadic step function.
    fn is_dyadic(&self) -> bool;

    fn label(&self) -> String;

    fn elements(&self, count: usize) -> Result<Vec<Element>> {
        (1..=count).map(|n| self.element(n)).collect()
    }
}

impl Basis for SystemId {
    fn element(&self, n: usize) -> Result<Element> {
        if n == 0 {
            return Err(Error::Domain("system index must be at least 1".into()));
        }
        let n = n as u64;
        let inner = if self.include_constant {
            if n == 1 {
                return Ok(Element::Dyadic(DyadicElement::constant()));
            }
            n - 1
        } else {
            n
        };
        Ok(match self.kind {
            SystemKind::Trig => Element::Trig(TrigElement::from_index(inner)),
            SystemKind::WalshPaley => {
                if inner >= 1 << 40 {
                    return Err(Error::Domain(format!("walsh index {inner} too large")));
                }
                Element::Dyadic(DyadicElement::walsh(inner))
            }
            SystemKind::Haar => Element::Dyadic(DyadicElement::haar(inner + 1)),
        })
    }

    fn is_dyadic(&self) -> bool {
        SystemId::is_dyadic(self)
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

/// Subsystem `φ_{n_1}, φ_{n_2}, ...` of a base system; element `k` of the
/// map is `φ_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMap {
    base: SystemId,
    indices: Vec<usize>,
}

impl IndexMap {
    pub fn new(base: SystemId, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Precondition("index map must be nonempty".into()));
        }
        if indices[0] == 0 || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "index map must be strictly increasing positive integers".into(),
            ));
        }
        Ok(Self { base, indices })
    }

    pub fn base(&self) -> SystemId {
        self.base
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

impl Basis for IndexMap {
    fn element(&self, k: usize) -> Result<Element> {
        let n = k
            .checked_sub(1)
            .and_then(|i| self.indices.get(i))
            .ok_or_else(|| {
                Error::Domain(format!("index {k} outside map of length {}", self.len()))
            })?;
        self.base.element(*n)
    }

    fn is_dyadic(&self) -> bool {
        self.base.is_dyadic()
    }

    fn label(&self) -> String {
        format!("{}[subsequence of {}]", self.base, self.len())
    }
}

fn check_index(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("system index must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `φ_n(x)`.
pub fn eval(system: SystemId, n: usize, x: f64) -> Result<f64> {
    check_index(n)?;
    check_unit(x)?;
    Ok(system.element(n)?.eval(x))
}

/// `Φ_n(x) = ∫_0^x φ_n`.
pub fn antiderivative(system: SystemId, n: usize, x: f64) -> Result<f64> {
    check_index(n)?;
    check_unit(x)?;
    Ok(system.element(n)?.antiderivative(x))
}

/// `sup_{x ∈ [0,1]} |Φ_n(x)|`.
pub fn sup_antiderivative(system: SystemId, n: usize) -> Result<f64> {
    check_index(n)?;
    Ok(system.element(n)?.sup_antiderivative())
}

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry `(i, j)`, 1-based like the system indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i - 1) * self.size + (j - 1)]
    }

    pub fn max_deviation_from_identity(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 1..=self.size {
            for j in 1..=self.size {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.get(i, j) - target).abs());
            }
        }
        worst
    }
}

/// `G_ij = ∫_0^1 φ_i φ_j` by exact piecewise integration.
pub fn gram_matrix(system: SystemId, size: usize) -> Result<GramMatrix> {
    check_index(size)?;
    let elements = system.elements(size)?;
    let mut entries = vec![0.0; size * size];
    for i in 0..size {
        for j in i..size {
            let v = elements[i].inner_product(&elements[j]);
            entries[i * size + j] = v;
            entries[j * size + i] = v;
        }
    }
    Ok(GramMatrix { size, entries })
}

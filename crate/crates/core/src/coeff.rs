//! Fourier coefficients `C_n(f) = ∫_0^1 f φ_n` of piecewise-linear functions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bv::BVFunction;
use crate::error::{Error, Result};
use crate::ons::{Basis, SystemId, SystemKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactPiecewise,
    ClosedFormTrig,
}

impl Method {
    pub fn for_system(system: SystemId) -> Self {
        match system.kind {
            SystemKind::Trig => Method::ClosedFormTrig,
            SystemKind::WalshPaley | SystemKind::Haar => Method::ExactPiecewise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffVector {
    pub system: SystemId,
    pub function_name: String,
    #[serde(rename = "N")]
    pub len: usize,
    pub values: Vec<f64>,
    pub method: Method,
    pub tol: f64,
}

/// Nominal absolute accuracy of the closed-form integrals.
pub const COEFF_TOL: f64 = 1e-12;

impl CoeffVector {
    /// `C_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    /// `Σ C_n²`.
    pub fn bessel_sum(&self) -> f64 {
        crate::sum::compensated_sum(self.values.iter().map(|c| c * c))
    }

    /// `<function>__<system>__N<len>`.
    pub fn file_stem(&self) -> String {
        format!("{}__{}__N{}", self.function_name, self.system, self.len)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,coefficient\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, crate::report::fmt_f64(*v)));
        }
        out
    }
}

/// `C_n(f)` for element `n` of any basis.
pub fn coefficient<B: Basis + ?Sized>(f: &BVFunction, basis: &B, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("coefficient index must be at least 1".into()));
    }
    Ok(basis.element(n)?.integrate_against(f, 0.0, 1.0))
}

/// `C_n(f)` splitting `[0, 1]` at the nodes of `f` and the breakpoints of `φ_n`.
pub fn fourier_coefficient(f: &BVFunction, system: SystemId, n: usize) -> Result<f64> {
    coefficient(f, &system, n)
}

/// `C_1..C_count` over any basis, computed in parallel, returned in index order.
pub fn coefficients<B: Basis + ?Sized>(
    f: &BVFunction,
    basis: &B,
    count: usize,
) -> Result<Vec<f64>> {
    (1..=count)
        .into_par_iter()
        .map(|n| coefficient(f, basis, n))
        .collect()
}

pub fn coefficient_vector(
    f: &BVFunction,
    function_name: &str,
    system: SystemId,
    len: usize,
) -> Result<CoeffVector> {
    if len == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    Ok(CoeffVector {
        system,
        function_name: function_name.to_string(),
        len,
        values: coefficients(f, &system, len)?,
        method: Method::for_system(system),
        tol: COEFF_TOL,
    })
}

//! Subsequence machinery: Parseval prefix sums of antiderivatives, the
//! `1/n` decay statistic, greedy extraction of a subsequence whose
//! antiderivatives satisfy `sup|Φ_{n_k}| < 1/k²`, and the weighted log-sum
//! over the extracted subsystem together with its summation-by-parts
//! majorant.

use serde::{Deserialize, Serialize};

use crate::bv::{check_unit, BVFunction};
use crate::coeff::coefficients;
use crate::error::{Error, Result};
use crate::multiplier::{grid_max, log_sum_from_coefficients, Integrand, Polynomial};
use crate::ons::{Basis, IndexMap, SystemId};
use crate::sequence::{MultiplierSeq, Weighting};
use crate::sum::NeumaierSum;

/// Default upper limit on the scanned index.
pub const DEFAULT_SCAN_CAP: usize = 1 << 22;

/// `Σ_{n≤N} Φ_n(x)²`; for a complete system this increases to `x`.
pub fn parseval_prefix(system: SystemId, x: f64, len: usize) -> Result<f64> {
    check_unit(x)?;
    if !system.include_constant {
        return Err(Error::Precondition(format!(
            "{system} is not complete; use the system with its constant (\"{}\")",
            system.with_constant()
        )));
    }
    let mut acc = NeumaierSum::new();
    for n in 1..=len {
        let v = system.element(n)?.antiderivative(x);
        acc.add(v * v);
    }
    Ok(acc.total())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubseqSelection {
    pub base: SystemId,
    #[serde(rename = "K")]
    pub count: usize,
    pub indices: Vec<usize>,
    /// `sup |Φ_{n_k}|`.
    pub witnesses: Vec<f64>,
}

impl SubseqSelection {
    pub fn index_map(&self) -> IndexMap {
        IndexMap::new(self.base, self.indices.clone()).expect("selection indices are increasing")
    }
}

pub fn select_subsequence(system: SystemId, count: usize) -> Result<SubseqSelection> {
    select_subsequence_capped(system, count, DEFAULT_SCAN_CAP)
}

/// Greedy scan: `n_k` is the smallest index above `n_{k-1}` with
/// `sup|Φ_n| < 1/k²`.
pub fn select_subsequence_capped(
    system: SystemId,
    count: usize,
    cap: usize,
) -> Result<SubseqSelection> {
    if count == 0 {
        return Err(Error::Precondition("K must be at least 1".into()));
    }
    let mut indices = Vec::with_capacity(count);
    let mut witnesses = Vec::with_capacity(count);
    let mut n = 0usize;
    for k in 1..=count {
        let threshold = 1.0 / (k * k) as f64;
        loop {
            n += 1;
            if n > cap {
                return Err(Error::SelectionExhausted { k, cap });
            }
            let sup = system.element(n)?.sup_antiderivative();
            if sup < threshold {
                indices.push(n);
                witnesses.push(sup);
                break;
            }
        }
    }
    Ok(SubseqSelection {
        base: system,
        count,
        indices,
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaySeries {
    pub system: SystemId,
    /// `(n, n·sup|Φ_n|)`.
    pub rows: Vec<(usize, f64)>,
    pub max: f64,
    pub argmax: usize,
}

impl DecaySeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,n_times_sup\n");
        for (n, v) in &self.rows {
            out.push_str(&format!("{n},{}\n", crate::report::fmt_f64(*v)));
        }
        out
    }
}

/// `n · sup|Φ_n|` for `n = 1..N`.
pub fn decay_check(system: SystemId, len: usize) -> Result<DecaySeries> {
    if len == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(len);
    let (mut max, mut argmax) = (f64::NEG_INFINITY, 0);
    for n in 1..=len {
        let v = n as f64 * system.element(n)?.sup_antiderivative();
        if v > max {
            max = v;
            argmax = n;
        }
        rows.push((n, v));
    }
    Ok(DecaySeries {
        system,
        rows,
        max,
        argmax,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// `C = max_{n ≤ N/2} h_n log₂(n+1) / √n`.
    pub constant: f64,
    /// `h_n log₂(n+1) / √n` for `n = 1..N`.
    pub margins: Vec<f64>,
}

/// Checks `h_n = O(√n / log₂(n+1))` on `1..N`: the ratio may not exceed its
/// maximum over the first half of the range. `h` must be eventually
/// nondecreasing, i.e. nondecreasing on the second half.
pub fn hn_admissible(h: &MultiplierSeq, len: usize) -> Result<Admissibility> {
    if len < 2 {
        return Err(Error::Precondition("admissibility needs N >= 2".into()));
    }
    let values = h.values(len)?;
    let half = len / 2;
    if values[half - 1..].windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Precondition(format!(
            "h is decreasing beyond n = {half}"
        )));
    }
    let margins: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let n = (i + 1) as f64;
            h / (n.sqrt() / (n + 1.0).log2())
        })
        .collect();
    let constant = margins[..half]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let admissible = margins.iter().all(|&m| m <= constant * (1.0 + 1e-12));
    Ok(Admissibility {
        admissible,
        constant,
        margins,
    })
}

/// Running sums `Σ_{k≤m} h_k² C_{n_k}²(f) log²k`, `m = 1..K`.
pub fn remapped_log_sum(
    f: &BVFunction,
    selection: &SubseqSelection,
    weighting: &Weighting,
) -> Result<Vec<f64>> {
    let map = selection.index_map();
    let c = coefficients(f, &map, map.len())?;
    log_sum_from_coefficients(&c, weighting)
}

/// Summation-by-parts majorant of `S_m = ∫ f Q_m(h, c, x) dx` with
/// `c_k = C_{n_k}(f)` on the grid `i/m`:
/// `S_m ≤ V(f)·G_m + Σ_i osc_i(f)·∫_cell|Q_m| + |f(1)|·|∫_0^1 Q_m|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Majorant {
    pub sum: f64,
    pub variation_term: f64,
    pub cell_term: f64,
    pub boundary_term: f64,
    /// `T_m(h, c) = √S_m`.
    pub t: f64,
}

impl Majorant {
    pub fn bound(&self) -> f64 {
        self.variation_term + self.cell_term + self.boundary_term
    }

    /// `bound / T`: the constant in `S_m = O(1)·S_m^{1/2}`.
    pub fn constant(&self) -> f64 {
        if self.t > 0.0 {
            self.bound() / self.t
        } else {
            0.0
        }
    }
}

pub fn log_sum_majorant(f: &BVFunction, map: &IndexMap, weighting: &Weighting) -> Result<Majorant> {
    let m = map.len();
    if m < 2 {
        return Err(Error::Precondition(
            "majorant needs at least two selected indices".into(),
        ));
    }
    let c = coefficients(f, map, m)?;
    let q = Polynomial::pn(map, weighting, &c, m)?;
    let sum = *log_sum_from_coefficients(&c, weighting)?
        .last()
        .expect("m >= 2");
    let gm = grid_max(&q, m);
    let cells = q.cell_abs_integrals(m)?;
    let mut cell_term = NeumaierSum::new();
    for (i, v) in cells.iter().enumerate() {
        let (a, b) = (i as f64 / m as f64, (i + 1) as f64 / m as f64);
        cell_term.add(f.oscillation_about(a, b, f.value(b)) * v);
    }
    Ok(Majorant {
        sum,
        variation_term: f.total_variation() * gm.value,
        cell_term: cell_term.total(),
        boundary_term: (f.at_one() * q.primitive(1.0)).abs(),
        t: sum.max(0.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parseval_examples() {
        let h = SystemId::HAAR.with_constant();
        assert_eq!(parseval_prefix(h, 0.5, 2).unwrap(), 0.5);
        assert!((parseval_prefix(h, 1.0 / 3.0, 1 << 12).unwrap() - 1.0 / 3.0).abs() <= 1e-3);
        for s in [h, SystemId::WALSH.with_constant()] {
            assert_eq!(parseval_prefix(s, 0.0, 100).unwrap(), 0.0);
        }
        assert!(matches!(
            parseval_prefix(SystemId::HAAR, 0.5, 4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn parseval_is_monotone_and_bounded() {
        for s in [
            SystemId::HAAR.with_constant(),
            SystemId::WALSH.with_constant(),
        ] {
            for x in [0.1, 0.25, 1.0 / 3.0, 0.77, 1.0] {
                let mut prev = 0.0;
                for len in [1, 2, 3, 8, 33, 256] {
                    let v = parseval_prefix(s, x, len).unwrap();
                    assert!(v >= prev && v <= x + 1e-12, "{s} x={x} N={len}");
                    prev = v;
                }
            }
        }
    }

    /// Exhaustive oracle: the first index at each step whose exact sup is
    /// below 1/k², found by scanning every index in order.
    fn scan_oracle(system: SystemId, count: usize) -> Vec<usize> {
        let sups: Vec<f64> = (1..=1 << 12)
            .map(|n| crate::ons::sup_antiderivative(system, n).unwrap())
            .collect();
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=count {
            let pos = (start..sups.len())
                .find(|&i| sups[i] < 1.0 / (k * k) as f64)
                .unwrap();
            out.push(pos + 1);
            start = pos + 1;
        }
        out
    }

    #[test]
    fn walsh_selection() {
        let sel = select_subsequence(SystemId::WALSH, 3).unwrap();
        assert_eq!(sel.indices, scan_oracle(SystemId::WALSH, 3));
        assert_eq!(sel.indices, vec![1, 4, 8]);
        assert!(sel.indices[2] <= 32);
        assert_eq!(sel.witnesses[0], 0.5);
    }

    #[test]
    fn haar_selection() {
        let sel = select_subsequence(SystemId::HAAR, 5).unwrap();
        assert_eq!(sel.indices, scan_oracle(SystemId::HAAR, 5));
        // 2^{-j/2-1} < 1/25 first holds at level j = 8, i.e. n = 256.
        assert_eq!(sel.indices[4], 256);
        for (k, w) in sel.witnesses.iter().enumerate() {
            assert!(*w < 1.0 / ((k + 1) * (k + 1)) as f64);
        }
        assert_eq!(sel, select_subsequence(SystemId::HAAR, 5).unwrap());
    }

    #[test]
    fn selection_cap() {
        assert_eq!(
            select_subsequence_capped(SystemId::HAAR, 5, 100),
            Err(Error::SelectionExhausted { k: 4, cap: 100 })
        );
        assert!(select_subsequence(SystemId::HAAR, 0).is_err());
    }

    #[test]
    fn selection_json_shape() {
        let sel = select_subsequence(SystemId::WALSH, 2).unwrap();
        assert_eq!(
            serde_json::to_string(&sel).unwrap(),
            r#"{"base":"walsh","K":2,"indices":[1,4],"witnesses":[0.5,0.125]}"#
        );
    }

    #[test]
    fn decay_examples() {
        assert!(decay_check(SystemId::TRIG, 1024).unwrap().max <= 1.0);
        assert!(decay_check(SystemId::WALSH, 1024).unwrap().max <= 2.0);
        assert!(decay_check(SystemId::HAAR, 1025).unwrap().max >= 8.0);
        let csv = decay_check(SystemId::WALSH, 2).unwrap().to_csv();
        assert_eq!(
            csv,
            "n,n_times_sup\n1,5.0000000000000000e-1\n2,5.0000000000000000e-1\n"
        );
    }

    #[test]
    fn admissibility() {
        let a = hn_admissible(&MultiplierSeq::SqrtOverLog, 4096).unwrap();
        assert!(a.admissible);
        assert_eq!(a.constant, 1.0);
        assert!(
            !hn_admissible(&MultiplierSeq::Power(0.5), 4096)
                .unwrap()
                .admissible
        );
        assert!(
            hn_admissible(&MultiplierSeq::Constant(1.0), 4096)
                .unwrap()
                .admissible
        );
        assert!(matches!(
            hn_admissible(&MultiplierSeq::Power(-0.5), 64),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn majorant_dominates_sum() {
        let h = Weighting::paper(MultiplierSeq::SqrtOverLog);
        let sel = select_subsequence(SystemId::HAAR, 12).unwrap();
        for e in crate::bv::catalog() {
            let maj = log_sum_majorant(&e.function, &sel.index_map(), &h).unwrap();
            assert!(maj.sum <= maj.bound() + 1e-15, "{}: {maj:?}", e.name);
        }
    }
}

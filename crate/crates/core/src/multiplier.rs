//! The weighted polynomial `P_n(d, a, x) = Σ_{k≤n} d_k² a_k log²k φ_k(x)` and
//! the functionals built from it: the grid maximum `G_n`, the weighted norm
//! `T_n`, the weighted log-sum `S_n`, the three-term summation-by-parts
//! decomposition of `∫ f g`, the functional `U_n`, and empirical
//! convergence diagnostics for `Σ d_k C_k(f) φ_k`.
//!
//! The per-cell bound is used in its linear form,
//! `∫_cell |P_n| ≤ D (log n / √n) T_n` with `D = max d_k`; no square root is
//! taken of `∫_cell |P_n|`.

use rayon::prelude::*;

use crate::bv::{plateau, BVFunction};
use crate::coeff::coefficients;
use crate::error::{Error, Result};
use crate::ons::{Basis, Element};
use crate::report::{DiagnosticsReport, ReportMetadata, ReportRow, RATIO_T_FLOOR};
use crate::sequence::{MultiplierSeq, Weighting};
use crate::sum::{compensated_sum, NeumaierSum};

pub use crate::sequence::weight;

/// Something that can be integrated against a BV function and has an
/// exact primitive.
pub trait Integrand {
    /// `∫_0^x g`.
    fn primitive(&self, x: f64) -> f64;
    /// `∫_a^b f g`.
    fn integrate_against(&self, f: &BVFunction, a: f64, b: f64) -> f64;
}

impl Integrand for Element {
    fn primitive(&self, x: f64) -> f64 {
        self.antiderivative(x)
    }

    fn integrate_against(&self, f: &BVFunction, a: f64, b: f64) -> f64 {
        Element::integrate_against(self, f, a, b)
    }
}

/// A finite combination `Σ c_k φ_k`.
#[derive(Debug, Clone)]
pub struct Polynomial {
    elements: Vec<Element>,
    coefs: Vec<f64>,
}

fn check_len(a: &[f64], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if a.len() < n {
        return Err(Error::Precondition(format!(
            "sequence has {} terms, n = {n} requested",
            a.len()
        )));
    }
    Ok(())
}

/// `d_k² a_k log²k` for `k = 1..n`.
pub fn pn_coefficients(weighting: &Weighting, a: &[f64], n: usize) -> Result<Vec<f64>> {
    check_len(a, n)?;
    Ok(weighting
        .factors(n)?
        .into_iter()
        .zip(a)
        .map(|(w, a)| w * a)
        .collect())
}

impl Polynomial {
    pub fn new(elements: Vec<Element>, coefs: Vec<f64>) -> Self {
        assert_eq!(elements.len(), coefs.len());
        Self { elements, coefs }
    }

    /// `P_n(d, a, ·)` over `basis`.
    pub fn pn<B: Basis + ?Sized>(
        basis: &B,
        weighting: &Weighting,
        a: &[f64],
        n: usize,
    ) -> Result<Self> {
        let coefs = pn_coefficients(weighting, a, n)?;
        let elements = basis.elements(n)?;
        Ok(Self { elements, coefs })
    }

    pub fn coefs(&self) -> &[f64] {
        &self.coefs
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    fn active(&self) -> impl Iterator<Item = (&Element, f64)> {
        self.elements
            .iter()
            .zip(self.coefs.iter().copied())
            .filter(|&(_, c)| c != 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        compensated_sum(self.active().map(|(e, c)| c * e.eval(x)))
    }

    /// `∫_0^1 P`.
    pub fn total_integral(&self) -> f64 {
        self.primitive(1.0)
    }

    /// `∫_0^1 P²` by orthonormality.
    pub fn l2_norm_sq(&self) -> f64 {
        compensated_sum(self.coefs.iter().map(|c| c * c))
    }

    /// `∫_{(i-1)/n}^{i/n} |P|` for `i = 1..n`, exact for dyadic systems:
    /// `P` is constant between consecutive dyadic breakpoints.
    pub fn cell_abs_integrals(&self, n: usize) -> Result<Vec<f64>> {
        let mut level = 0u32;
        let mut node_count = 0u64;
        let mut dyadic = Vec::new();
        for (e, c) in self.active() {
            let d = e.as_dyadic().ok_or_else(|| {
                Error::Unsupported("exact ∫|P| over cells requires a dyadic system".into())
            })?;
            level = level.max(d.level());
            node_count += d.run().1 + 1;
            dyadic.push((d, c));
        }
        let mut out = vec![0.0; n];
        if dyadic.is_empty() {
            return Ok(out);
        }
        let full = 1u64 << level;
        let mut numerators: Vec<u64> = if node_count > full + 1 {
            (0..=full).collect()
        } else {
            let mut v = vec![0, full];
            for (d, _) in &dyadic {
                let up = level - d.level();
                v.extend(d.run_nodes().map(|c| c << up));
            }
            v.sort_unstable();
            v.dedup();
            v
        };
        numerators.dedup();
        let inv = 2f64.powi(-(level as i32));
        let mut points: Vec<f64> = numerators.into_iter().map(|c| c as f64 * inv).collect();
        points.extend((0..=n).map(|i| i as f64 / n as f64));
        points.sort_by(f64::total_cmp);
        points.dedup();
        let pieces: Vec<(f64, f64)> = points.windows(2).map(|w| (w[0], w[1])).collect();
        let values: Vec<f64> = pieces
            .par_iter()
            .map(|&(l, r)| {
                let mid = 0.5 * (l + r);
                let v = compensated_sum(dyadic.iter().map(|(d, c)| c * d.eval(mid)));
                v.abs() * (r - l)
            })
            .collect();
        let mut sums = vec![NeumaierSum::new(); n];
        for (&(l, r), v) in pieces.iter().zip(values) {
            let cell = ((0.5 * (l + r) * n as f64).floor() as usize).min(n - 1);
            sums[cell].add(v);
        }
        for (o, s) in out.iter_mut().zip(sums) {
            *o = s.total();
        }
        Ok(out)
    }
}

impl Integrand for Polynomial {
    fn primitive(&self, x: f64) -> f64 {
        compensated_sum(self.active().map(|(e, c)| c * e.antiderivative(x)))
    }

    fn integrate_against(&self, f: &BVFunction, a: f64, b: f64) -> f64 {
        compensated_sum(self.active().map(|(e, c)| c * e.integrate_against(f, a, b)))
    }
}

/// `P_n(d, a, x)`.
pub fn pn_eval<B: Basis + ?Sized>(
    basis: &B,
    weighting: &Weighting,
    a: &[f64],
    n: usize,
    x: f64,
) -> Result<f64> {
    crate::bv::check_unit(x)?;
    Ok(Polynomial::pn(basis, weighting, a, n)?.eval(x))
}

/// `∫_0^t P_n(d, a, x) dx = Σ d_k² a_k log²k Φ_k(t)`.
pub fn pn_prefix_integral<B: Basis + ?Sized>(
    basis: &B,
    weighting: &Weighting,
    a: &[f64],
    n: usize,
    t: f64,
) -> Result<f64> {
    crate::bv::check_unit(t)?;
    Ok(Polynomial::pn(basis, weighting, a, n)?.primitive(t))
}

/// Grid maximum of `|∫_0^{i/n} P_n|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    /// `G_n`: maximum over `i = 1..n`.
    pub value: f64,
    pub argmax: usize,
    /// Maximum over `i = 1..n-1` and where it is attained (`None` for `n = 1`).
    pub interior: Option<(usize, f64)>,
}

pub fn grid_max(p: &Polynomial, n: usize) -> GridMax {
    let prefixes: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|i| p.primitive(i as f64 / n as f64).abs())
        .collect();
    let mut best = (1, prefixes[0]);
    let mut interior: Option<(usize, f64)> = None;
    for (idx, &v) in prefixes.iter().enumerate() {
        let i = idx + 1;
        if v > best.1 {
            best = (i, v);
        }
        if i < n && interior.is_none_or(|(_, b)| v > b) {
            interior = Some((i, v));
        }
    }
    GridMax {
        value: best.1,
        argmax: best.0,
        interior,
    }
}

/// `G_n(d, a) = max_{1≤i≤n} |∫_0^{i/n} P_n(d, a, x) dx|`.
pub fn g_n<B: Basis + ?Sized>(
    basis: &B,
    weighting: &Weighting,
    a: &[f64],
    n: usize,
) -> Result<f64> {
    g_n_detail(basis, weighting, a, n).map(|g| g.value)
}

pub fn g_n_detail<B: Basis + ?Sized>(
    basis: &B,
    weighting: &Weighting,
    a: &[f64],
    n: usize,
) -> Result<GridMax> {
    let p = Polynomial::pn(basis, weighting, a, n)?;
    Ok(grid_max(&p, n))
}

/// `T_n(d, a) = (Σ_{k≤n} d_k² a_k² log²k)^{1/2}`.
pub fn t_n(weighting: &Weighting, a: &[f64], n: usize) -> Result<f64> {
    check_len(a, n)?;
    let factors = weighting.factors(n)?;
    Ok(compensated_sum(factors.iter().zip(a).map(|(w, a)| w * a * a)).sqrt())
}

/// Right-hand side of the per-cell bound: `D (w(n) / √n) T_n` with
/// `D = max_{k≤n} d_k` and `w` the active log weight.
pub fn per_cell_bound(weighting: &Weighting, a: &[f64], n: usize) -> Result<f64> {
    let d_max = weighting
        .multiplier
        .values(n)?
        .into_iter()
        .fold(0.0_f64, |m, d| m.max(d.abs()));
    Ok(d_max * weighting.mode.weight(n) / (n as f64).sqrt() * t_n(weighting, a, n)?)
}

fn metadata<B: Basis + ?Sized>(basis: &B, weighting: &Weighting) -> ReportMetadata {
    ReportMetadata {
        system: basis.label(),
        multiplier: Some(weighting.multiplier.to_string()),
        weight_mode: Some(weighting.mode.to_string()),
        ..Default::default()
    }
}

/// Rows `(n, G_n, T_n, G_n/T_n)` over `n_list`.
pub fn ratio_sweep<B: Basis + ?Sized>(
    basis: &B,
    weighting: &Weighting,
    a: &[f64],
    n_list: &[usize],
) -> Result<DiagnosticsReport> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let g = g_n(basis, weighting, a, n)?;
        let t = t_n(weighting, a, n)?;
        let ratio = (t > RATIO_T_FLOOR).then(|| g / t);
        rows.push(ReportRow {
            n,
            g: Some(g),
            t: Some(t),
            ratio,
            ..Default::default()
        });
    }
    let mut report = DiagnosticsReport {
        metadata: metadata(basis, weighting),
        ..Default::default()
    };
    if rows.iter().all(|r| r.ratio.is_none()) {
        report
            .warnings
            .push("all-T-zero: no ratio is defined for the requested n".into());
    } else {
        report.rows = rows;
    }
    Ok(report)
}

/// Running sums `S_n = Σ_{k≤n} d_k² C_k²(f) log²k`, `n = 1..len`.
pub fn weighted_log_sum<B: Basis + ?Sized>(
    f: &BVFunction,
    basis: &B,
    weighting: &Weighting,
    len: usize,
) -> Result<Vec<f64>> {
    let c = coefficients(f, basis, len)?;
    log_sum_from_coefficients(&c, weighting)
}

pub fn log_sum_from_coefficients(c: &[f64], weighting: &Weighting) -> Result<Vec<f64>> {
    let factors = weighting.factors(c.len())?;
    let mut acc = NeumaierSum::new();
    Ok(factors
        .iter()
        .zip(c)
        .map(|(w, c)| {
            acc.add(w * c * c);
            acc.total()
        })
        .collect())
}

/// The three terms of `∫_0^1 f g` after summation by parts on the grid `i/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub lhs: f64,
    /// `Σ_{i<n} (f(i/n) - f((i+1)/n)) ∫_0^{i/n} g`.
    pub term1: f64,
    /// `Σ_{i≤n} ∫_{(i-1)/n}^{i/n} (f(x) - f(i/n)) g(x) dx`.
    pub term2: f64,
    /// `f(1) ∫_0^1 g`.
    pub term3: f64,
    pub residual: f64,
}

pub fn lemma_decomposition<G: Integrand + ?Sized>(
    f: &BVFunction,
    g: &G,
    n: usize,
) -> Result<Decomposition> {
    if n < 2 {
        return Err(Error::Precondition("decomposition needs n >= 2".into()));
    }
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let fv: Vec<f64> = grid.iter().map(|&x| f.value(x)).collect();
    let gp: Vec<f64> = grid.iter().map(|&x| g.primitive(x)).collect();
    let lhs = g.integrate_against(f, 0.0, 1.0);
    let term1 = compensated_sum((1..n).map(|i| (fv[i] - fv[i + 1]) * gp[i]));
    let term2 = compensated_sum(
        (1..=n).map(|i| g.integrate_against(f, grid[i - 1], grid[i]) - fv[i] * (gp[i] - gp[i - 1])),
    );
    let term3 = f.at_one() * gp[n];
    let residual = lhs - compensated_sum([term1, term2, term3]);
    Ok(Decomposition {
        lhs,
        term1,
        term2,
        term3,
        residual,
    })
}

/// `U_n(f) = T_n(b)^{-1} ∫ f P_n(d, b, x) dx`, with the integral expanded as
/// `Σ d_k² b_k log²k C_k(f)`.
pub fn u_n_functional<B: Basis + ?Sized>(
    f: &BVFunction,
    basis: &B,
    weighting: &Weighting,
    b: &[f64],
    n: usize,
) -> Result<f64> {
    let t = t_n(weighting, b, n)?;
    if t <= RATIO_T_FLOOR {
        return Err(Error::UndefinedFunctional(t));
    }
    let coefs = pn_coefficients(weighting, b, n)?;
    let c = coefficients(f, basis, n)?;
    Ok(compensated_sum(coefs.iter().zip(&c).map(|(p, c)| p * c)) / t)
}

/// `U_n` on the ramp placed at the interior grid maximiser of `P_n(d, b)`,
/// with the measured lower bound from the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauProbe {
    pub n: usize,
    pub i_n: usize,
    /// `|∫_0^{i_n/n} P_n|`.
    pub g: f64,
    pub t: f64,
    /// Measured per-cell constant `K = max_i ∫_cell |P_n| / T_n`.
    pub per_cell: f64,
    pub u: f64,
    /// `(g - K·T - |f_n(1) ∫_0^1 P_n|) / T`.
    pub lower_bound: f64,
}

pub fn plateau_probe<B: Basis + ?Sized>(
    basis: &B,
    weighting: &Weighting,
    b: &[f64],
    n: usize,
) -> Result<PlateauProbe> {
    if n < 2 {
        return Err(Error::Precondition("plateau probe needs n >= 2".into()));
    }
    let p = Polynomial::pn(basis, weighting, b, n)?;
    let t = t_n(weighting, b, n)?;
    if t <= RATIO_T_FLOOR {
        return Err(Error::UndefinedFunctional(t));
    }
    let gm = grid_max(&p, n);
    let (i_n, g) = gm.interior.expect("n >= 2 has interior grid points");
    let f = plateau(n, i_n as i64)?;
    let cells = p.cell_abs_integrals(n)?;
    let per_cell = cells.iter().fold(0.0_f64, |m, &v| m.max(v)) / t;
    let u = u_n_functional(&f, basis, weighting, b, n)?;
    let boundary = (f.at_one() * p.total_integral()).abs();
    Ok(PlateauProbe {
        n,
        i_n,
        g,
        t,
        per_cell,
        u,
        lower_bound: (g - per_cell * t - boundary) / t,
    })
}

/// `Σ_{k≤N} d_k C_k(f) φ_k(x)`.
pub fn weighted_partial_sum<B: Basis + ?Sized>(
    f: &BVFunction,
    basis: &B,
    d: &MultiplierSeq,
    len: usize,
    x: f64,
) -> Result<f64> {
    crate::bv::check_unit(x)?;
    let c = coefficients(f, basis, len)?;
    let dv = d.values(len)?;
    let elements = basis.elements(len)?;
    Ok(compensated_sum(
        elements
            .iter()
            .zip(c.iter().zip(&dv))
            .map(|(e, (c, d))| d * c * e.eval(x)),
    ))
}

/// Relative slack allowed between consecutive Cauchy gaps.
pub const GAP_SLACK: f64 = 0.10;

/// Maximum over the midpoint grid `(2j+1)/(2·grid)` of
/// `|σ_{N_{j+1}} - σ_{N_j}|` for consecutive entries of `n_list`, together
/// with the weighted log-sum at each `N_j`.
pub fn convergence_probe<B: Basis + ?Sized>(
    f: &BVFunction,
    basis: &B,
    weighting: &Weighting,
    n_list: &[usize],
    grid_size: usize,
) -> Result<DiagnosticsReport> {
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "N list must be strictly increasing and positive".into(),
        ));
    }
    if grid_size == 0 {
        return Err(Error::Precondition("grid size must be positive".into()));
    }
    let n_max = *n_list.last().expect("nonempty");
    let c = coefficients(f, basis, n_max)?;
    let dv = weighting.multiplier.values(n_max)?;
    let elements = basis.elements(n_max)?;
    let s = log_sum_from_coefficients(&c, weighting)?;
    let weights: Vec<f64> = c.iter().zip(&dv).map(|(c, d)| c * d).collect();
    let xs: Vec<f64> = (0..grid_size)
        .map(|j| (2 * j + 1) as f64 / (2 * grid_size) as f64)
        .collect();

    let gaps: Vec<f64> = n_list
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            xs.par_iter()
                .map(|&x| {
                    compensated_sum(
                        (lo..hi)
                            .filter(|&k| weights[k] != 0.0)
                            .map(|k| weights[k] * elements[k].eval(x)),
                    )
                    .abs()
                })
                .reduce(|| 0.0, f64::max)
        })
        .collect();

    let rows = n_list
        .iter()
        .enumerate()
        .map(|(j, &n)| ReportRow {
            n,
            s: Some(s[n - 1]),
            cauchy_gap: gaps.get(j).copied(),
            ..Default::default()
        })
        .collect();
    let consistent = gaps.windows(2).all(|w| w[1] <= (1.0 + GAP_SLACK) * w[0]);
    Ok(DiagnosticsReport {
        rows,
        metadata: metadata(basis, weighting),
        warnings: Vec::new(),
        consistent_with_convergence: Some(consistent),
    })
}

//! Piecewise-linear functions of bounded variation on `[0, 1]`.
//!
//! A function is stored by its nodes `0 = x_0 < ... < x_m = 1`, the left
//! limits `L_1..L_m` and the right limits `R_0..R_{m-1}`. On `(x_{i-1}, x_i)`
//! it is the straight line from `R_{i-1}` to `L_i`. Interior nodes take the
//! right limit, `f(0) = R_0` and `f(1) = L_m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBv", into = "RawBv")]
pub struct BVFunction {
    nodes: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    /// `cumulative[i] = ∫_0^{x_i} f`.
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawBv {
    nodes: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl TryFrom<RawBv> for BVFunction {
    type Error = Error;

    fn try_from(raw: RawBv) -> Result<Self> {
        BVFunction::new(raw.nodes, raw.left, raw.right)
    }
}

impl From<BVFunction> for RawBv {
    fn from(f: BVFunction) -> Self {
        RawBv {
            nodes: f.nodes,
            left: f.left,
            right: f.right,
        }
    }
}

/// One linear piece `[x0, x1]` running from `start` (right limit at `x0`)
/// to `end` (left limit at `x1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub x0: f64,
    pub x1: f64,
    pub start: f64,
    pub end: f64,
}

impl Piece {
    pub fn slope(&self) -> f64 {
        (self.end - self.start) / (self.x1 - self.x0)
    }

    pub fn at(&self, x: f64) -> f64 {
        self.start + (self.end - self.start) * ((x - self.x0) / (self.x1 - self.x0))
    }

    /// `∫_{x0}^{x} f` for `x` inside the piece.
    fn partial_integral(&self, x: f64) -> f64 {
        let t = x - self.x0;
        self.start * t + 0.5 * (self.end - self.start) * t * t / (self.x1 - self.x0)
    }
}

impl BVFunction {
    pub fn new(nodes: Vec<f64>, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        let m = nodes
            .len()
            .checked_sub(1)
            .filter(|&m| m >= 1)
            .ok_or_else(|| Error::InvalidFunction("need at least two nodes".into()))?;
        if nodes[0] != 0.0 || nodes[m] != 1.0 {
            return Err(Error::InvalidFunction(
                "nodes must start at 0 and end at 1".into(),
            ));
        }
        if nodes
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidFunction(
                "nodes must be strictly increasing".into(),
            ));
        }
        if left.len() != m || right.len() != m {
            return Err(Error::InvalidFunction(format!(
                "expected {m} left and {m} right values, got {} and {}",
                left.len(),
                right.len()
            )));
        }
        if left.iter().chain(&right).any(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction("values must be finite".into()));
        }
        let mut f = BVFunction {
            nodes,
            left,
            right,
            cumulative: Vec::new(),
        };
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(m + 1);
        cumulative.push(0.0);
        for p in f.pieces() {
            acc += 0.5 * (p.start + p.end) * (p.x1 - p.x0);
            cumulative.push(acc);
        }
        f.cumulative = cumulative;
        Ok(f)
    }

    /// Continuous piecewise-linear function through `(x_i, v_i)`.
    pub fn continuous(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != nodes.len() || values.is_empty() {
            return Err(Error::InvalidFunction("one value per node required".into()));
        }
        let left = values[1..].to_vec();
        let right = values[..values.len() - 1].to_vec();
        Self::new(nodes, left, right)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![0.0, 1.0], vec![c], vec![c]).expect("valid constant")
    }

    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0], vec![1.0], vec![0.0]).expect("valid identity")
    }

    /// Indicator-like step: `low` on `[0, at)`, `high` on `[at, 1]`.
    pub fn step(at: f64, low: f64, high: f64) -> Result<Self> {
        Self::new(vec![0.0, at, 1.0], vec![low, high], vec![low, high])
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn left_values(&self) -> &[f64] {
        &self.left
    }

    pub fn right_values(&self) -> &[f64] {
        &self.right
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        (0..self.left.len()).map(move |i| Piece {
            x0: self.nodes[i],
            x1: self.nodes[i + 1],
            start: self.right[i],
            end: self.left[i],
        })
    }

    /// Index of the piece containing `x`, with `x_i` belonging to piece `i`
    /// and `x = 1` to the last piece.
    fn piece_index(&self, x: f64) -> usize {
        let m = self.left.len();
        let idx = self.nodes.partition_point(|&node| node <= x);
        idx.saturating_sub(1).min(m - 1)
    }

    fn piece(&self, i: usize) -> Piece {
        Piece {
            x0: self.nodes[i],
            x1: self.nodes[i + 1],
            start: self.right[i],
            end: self.left[i],
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.value(x))
    }

    /// Evaluation without the domain check.
    pub(crate) fn value(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return self.left[self.left.len() - 1];
        }
        let i = self.piece_index(x);
        let p = self.piece(i);
        if x == p.x0 {
            p.start
        } else {
            p.at(x)
        }
    }

    /// Limit from the left at `x` (`f(0)` at `x = 0`).
    pub fn left_limit(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.right[0];
        }
        let idx = self.nodes.partition_point(|&node| node < x);
        let p = self.piece(idx - 1);
        if x == p.x1 {
            p.end
        } else {
            p.at(x)
        }
    }

    pub fn at_zero(&self) -> f64 {
        self.right[0]
    }

    pub fn at_one(&self) -> f64 {
        self.left[self.left.len() - 1]
    }

    pub fn is_jump_free(&self) -> bool {
        self.jumps().all(|(_, size)| size == 0.0)
    }

    /// Interior jumps as `(x_i, R_i - L_i)`.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (1..self.left.len()).map(move |i| (self.nodes[i], self.right[i] - self.left[i - 1]))
    }

    pub fn total_variation(&self) -> f64 {
        let ramps: f64 = self.pieces().map(|p| (p.end - p.start).abs()).sum();
        let jumps: f64 = self.jumps().map(|(_, j)| j.abs()).sum();
        ramps + jumps
    }

    /// Supremum norm over `[0, 1]`; extrema of a piecewise-linear function
    /// occur among its one-sided node values.
    pub fn sup_norm(&self) -> f64 {
        self.left
            .iter()
            .chain(&self.right)
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// `‖f‖_A = ∫|f'| + ‖f‖_C`, defined only for continuous `f`.
    pub fn norm_a(&self) -> Result<f64> {
        if let Some((x, _)) = self.jumps().find(|&(_, j)| j != 0.0) {
            return Err(Error::NotAbsolutelyContinuous(x));
        }
        let derivative_mass: f64 = self.pieces().map(|p| (p.end - p.start).abs()).sum();
        Ok(derivative_mass + self.sup_norm())
    }

    /// `F(x) = ∫_0^x f`.
    pub fn primitive(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let i = self.piece_index(x);
        self.cumulative[i] + self.piece(i).partial_integral(x)
    }

    /// Like [`primitive`](Self::primitive), but starts the piece search at
    /// `*hint` and updates it. Intended for nondecreasing query sequences.
    pub fn primitive_from(&self, x: f64, hint: &mut usize) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let m = self.left.len();
        let mut i = (*hint).min(m - 1);
        if self.nodes[i] > x {
            i = self.piece_index(x);
        }
        while i + 1 < m && self.nodes[i + 1] <= x {
            i += 1;
        }
        *hint = i;
        self.cumulative[i] + self.piece(i).partial_integral(x)
    }

    /// `∫_a^b f`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.primitive(b) - self.primitive(a)
    }

    /// Exact `∫_0^1 f²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.pieces()
            .map(|p| (p.x1 - p.x0) * (p.start * p.start + p.start * p.end + p.end * p.end) / 3.0)
            .sum()
    }

    /// `sup_{x ∈ [a, b]} |f(x) - c|`, using one-sided limits at the ends and
    /// at every interior node.
    pub fn oscillation_about(&self, a: f64, b: f64, c: f64) -> f64 {
        let mut best = (self.value(a) - c)
            .abs()
            .max((self.left_limit(b) - c).abs());
        best = best.max((self.value(b) - c).abs());
        for (i, &x) in self.nodes.iter().enumerate() {
            if x > a && x < b {
                best = best
                    .max((self.left[i - 1] - c).abs())
                    .max((self.right[i] - c).abs());
            }
        }
        best
    }

    /// Pieces clipped to `[a, b]`.
    pub fn pieces_in(&self, a: f64, b: f64) -> impl Iterator<Item = Piece> + '_ {
        self.pieces()
            .filter(move |p| p.x1 > a && p.x0 < b)
            .map(move |p| {
                let x0 = p.x0.max(a);
                let x1 = p.x1.min(b);
                Piece {
                    x0,
                    x1,
                    start: p.at(x0),
                    end: p.at(x1),
                }
            })
    }

    /// Same function with an extra node inserted on a linear piece.
    pub fn refined(&self, x: f64) -> Result<Self> {
        check_unit(x)?;
        if self.nodes.contains(&x) {
            return Ok(self.clone());
        }
        let i = self.piece_index(x);
        let v = self.piece(i).at(x);
        let mut nodes = self.nodes.clone();
        let mut left = self.left.clone();
        let mut right = self.right.clone();
        nodes.insert(i + 1, x);
        left.insert(i, v);
        right.insert(i + 1, v);
        Self::new(nodes, left, right)
    }

    /// `alpha·self + beta·other` on the union of both node sets.
    pub fn linear_combination(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        let mut nodes: Vec<f64> = self.nodes.iter().chain(&other.nodes).copied().collect();
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let m = nodes.len() - 1;
        let mut left = Vec::with_capacity(m);
        let mut right = Vec::with_capacity(m);
        for i in 0..m {
            right.push(alpha * self.value(nodes[i]) + beta * other.value(nodes[i]));
            left.push(
                alpha * self.left_limit(nodes[i + 1]) + beta * other.left_limit(nodes[i + 1]),
            );
        }
        Self::new(nodes, left, right)
    }
}

pub(crate) fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} outside [0, 1]")))
    }
}

/// The ramp `f_n`: 0 on `[0, i/n]`, 1 on `[(i+1)/n, 1]`, linear between.
pub fn plateau(n: usize, i: i64) -> Result<BVFunction> {
    if i < 1 || i as u128 >= n as u128 {
        return Err(Error::PlateauIndex { n, i });
    }
    let i = i as usize;
    let lo = i as f64 / n as f64;
    let (nodes, values) = if i + 1 == n {
        (vec![0.0, lo, 1.0], vec![0.0, 0.0, 1.0])
    } else {
        (
            vec![0.0, lo, (i + 1) as f64 / n as f64, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
        )
    };
    BVFunction::continuous(nodes, values)
}

/// Named test function with its recorded total variation.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub function: BVFunction,
    pub total_variation: f64,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let saw_nodes: Vec<f64> = (0..=8).map(|j| j as f64 / 8.0).collect();
    let saw_values: Vec<f64> = (0..=8).map(|j| (j % 2) as f64).collect();
    let entries = [
        ("const1", BVFunction::constant(1.0), 0.0),
        ("identity", BVFunction::identity(), 1.0),
        (
            "step13",
            BVFunction::step(1.0 / 3.0, 0.0, 1.0).expect("valid"),
            1.0,
        ),
        (
            "hat",
            BVFunction::continuous(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0]).expect("valid"),
            2.0,
        ),
        (
            "saw8",
            BVFunction::continuous(saw_nodes, saw_values).expect("valid"),
            8.0,
        ),
        (
            "stairs3",
            BVFunction::new(
                vec![0.0, 0.25, 0.5, 0.75, 1.0],
                vec![0.0, 1.0, 2.0, 3.0],
                vec![0.0, 1.0, 2.0, 3.0],
            )
            .expect("valid"),
            3.0,
        ),
    ];
    entries
        .into_iter()
        .map(|(name, function, total_variation)| CatalogEntry {
            name,
            function,
            total_variation,
        })
        .collect()
}

pub fn catalog_function(name: &str) -> Option<BVFunction> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.function)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        assert_eq!(BVFunction::identity().eval(0.3).unwrap(), 0.3);
        let step = catalog_function("step13").unwrap();
        assert_eq!(step.eval(1.0 / 3.0).unwrap(), 1.0);
        assert_eq!(step.eval(0.3).unwrap(), 0.0);
        assert_eq!(plateau(4, 2).unwrap().eval(0.625).unwrap(), 0.5);
        assert!(matches!(step.eval(1.5), Err(Error::Domain(_))));
        assert!(matches!(step.eval(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn endpoint_conventions() {
        let f = BVFunction::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0], vec![0.0, 5.0]).unwrap();
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
        assert_eq!(f.eval(0.5).unwrap(), 5.0);
        assert_eq!(f.left_limit(0.5), 1.0);
        assert_eq!(f.eval(1.0).unwrap(), 2.0);
    }

    #[test]
    fn total_variation_examples() {
        assert_eq!(BVFunction::identity().total_variation(), 1.0);
        assert_eq!(plateau(9, 4).unwrap().total_variation(), 1.0);
        assert_eq!(catalog_function("step13").unwrap().total_variation(), 1.0);
        for e in catalog() {
            assert_eq!(
                e.function.total_variation(),
                e.total_variation,
                "{}",
                e.name
            );
        }
        let f = BVFunction::continuous(vec![0.0, 0.2, 1.0], vec![0.3, 0.9, 1.7]).unwrap();
        assert!((f.total_variation() - (f.at_one() - f.at_zero())).abs() < 1e-15);
    }

    #[test]
    fn norm_a_examples() {
        assert_eq!(plateau(4, 2).unwrap().norm_a().unwrap(), 2.0);
        assert_eq!(plateau(100, 37).unwrap().norm_a().unwrap(), 2.0);
        assert_eq!(BVFunction::constant(1.0).norm_a().unwrap(), 1.0);
        assert_eq!(BVFunction::identity().norm_a().unwrap(), 2.0);
        let step = catalog_function("step13").unwrap();
        assert!(matches!(
            step.norm_a(),
            Err(Error::NotAbsolutelyContinuous(_))
        ));
    }

    #[test]
    fn plateau_shapes() {
        let p = plateau(4, 2).unwrap();
        assert_eq!(p.nodes(), &[0.0, 0.5, 0.75, 1.0]);
        assert_eq!(p.right_values(), &[0.0, 0.0, 1.0]);
        assert_eq!(p.left_values(), &[0.0, 1.0, 1.0]);
        let last = plateau(5, 4).unwrap();
        assert_eq!(last.nodes(), &[0.0, 0.8, 1.0]);
        assert_eq!(last.eval(0.9).unwrap(), 0.5);
        assert!(matches!(plateau(4, 4), Err(Error::PlateauIndex { .. })));
        assert!(matches!(plateau(4, 0), Err(Error::PlateauIndex { .. })));
        assert!(matches!(plateau(1, 1), Err(Error::PlateauIndex { .. })));
    }

    #[test]
    fn saw_and_hat() {
        let saw = catalog_function("saw8").unwrap();
        assert_eq!(saw.total_variation(), 8.0);
        assert_eq!(catalog_function("hat").unwrap().total_variation(), 2.0);
        assert_eq!(catalog_function("const1").unwrap().total_variation(), 0.0);
    }

    #[test]
    fn primitive_and_l2() {
        let id = BVFunction::identity();
        assert_eq!(id.primitive(0.5), 0.125);
        assert!((id.l2_norm_sq() - 1.0 / 3.0).abs() < 1e-16);
        let step = catalog_function("step13").unwrap();
        assert!((step.l2_norm_sq() - 2.0 / 3.0).abs() < 1e-15);
        assert!((step.primitive(1.0) - 2.0 / 3.0).abs() < 1e-15);
        let mut hint = 0;
        for j in 0..=64 {
            let x = j as f64 / 64.0;
            assert_eq!(step.primitive_from(x, &mut hint), step.primitive(x));
        }
    }

    #[test]
    fn malformed_functions_rejected() {
        assert!(BVFunction::new(vec![0.0], vec![], vec![]).is_err());
        assert!(BVFunction::new(vec![0.0, 0.5], vec![1.0], vec![1.0]).is_err());
        assert!(BVFunction::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0; 3], vec![1.0; 3]).is_err());
        assert!(BVFunction::new(vec![0.0, 1.0], vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(BVFunction::new(vec![0.0, 1.0], vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn json_shape() {
        let f = plateau(4, 2).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"nodes":[0.0,0.5,0.75,1.0],"left":[0.0,1.0,1.0],"right":[0.0,0.0,1.0]}"#
        );
        let back: BVFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(
            serde_json::from_str::<BVFunction>(r#"{"nodes":[0,2],"left":[1],"right":[1]}"#)
                .is_err()
        );
    }

    #[test]
    fn oscillation() {
        let p = plateau(4, 2).unwrap();
        assert_eq!(p.oscillation_about(0.5, 0.75, 1.0), 1.0);
        assert_eq!(p.oscillation_about(0.0, 0.25, 0.0), 0.0);
        let step = catalog_function("step13").unwrap();
        assert_eq!(step.oscillation_about(0.25, 0.5, 1.0), 1.0);
    }
}

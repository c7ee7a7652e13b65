//! Step functions on the dyadic grid: Walsh–Paley functions, Haar wavelets
//! and the constant function.

use std::sync::OnceLock;

use crate::bv::BVFunction;
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Constant,
    /// Paley index `n >= 1`.
    Walsh(u64),
    /// Support starts at cell `start`; `+` on `start`, `-` on `start + 1`.
    Haar {
        start: u64,
    },
}

/// A function `amplitude · s(c)` on cells `[c·2^-level, (c+1)·2^-level)`
/// with `s(c) ∈ {-1, 0, 1}`, nonzero only on a contiguous run of cells.
#[derive(Debug)]
pub struct DyadicElement {
    level: u32,
    amplitude: f64,
    shape: Shape,
    /// Integer prefix sums of the signs over the run, `len + 1` entries.
    prefix: OnceLock<Vec<i64>>,
}

impl Clone for DyadicElement {
    fn clone(&self) -> Self {
        Self {
            level: self.level,
            amplitude: self.amplitude,
            shape: self.shape,
            prefix: OnceLock::new(),
        }
    }
}

impl PartialEq for DyadicElement {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.amplitude == other.amplitude && self.shape == other.shape
    }
}

/// `2^(j/2)`, exact for even `j`.
pub(crate) fn haar_amplitude(j: u32) -> f64 {
    let base = 2f64.powi((j / 2) as i32);
    if j.is_multiple_of(2) {
        base
    } else {
        base * std::f64::consts::SQRT_2
    }
}

impl DyadicElement {
    pub fn constant() -> Self {
        Self {
            level: 0,
            amplitude: 1.0,
            shape: Shape::Constant,
            prefix: OnceLock::new(),
        }
    }

    /// Paley-ordered Walsh function `w_n`, `n >= 1`.
    pub fn walsh(n: u64) -> Self {
        assert!(n >= 1, "walsh index must be positive");
        let level = 64 - n.leading_zeros();
        Self {
            level,
            amplitude: 1.0,
            shape: Shape::Walsh(n),
            prefix: OnceLock::new(),
        }
    }

    /// Haar function `χ_p` for `p = 2^j + i`, `1 <= i <= 2^j` (`p >= 2`).
    pub fn haar(p: u64) -> Self {
        assert!(p >= 2, "haar index must be at least 2");
        let j = 63 - (p - 1).leading_zeros();
        let i = p - (1u64 << j);
        Self {
            level: j + 1,
            amplitude: haar_amplitude(j),
            shape: Shape::Haar { start: 2 * (i - 1) },
            prefix: OnceLock::new(),
        }
    }

    /// Grid level: cells have width `2^-level`.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn cell_width(&self) -> f64 {
        2f64.powi(-(self.level as i32))
    }

    fn cells(&self) -> u64 {
        1u64 << self.level
    }

    /// `(first cell, number of cells)` of the support run.
    pub fn run(&self) -> (u64, u64) {
        match self.shape {
            Shape::Constant => (0, 1),
            Shape::Walsh(_) => (0, self.cells()),
            Shape::Haar { start } => (start, 2),
        }
    }

    pub fn sign(&self, cell: u64) -> i8 {
        match self.shape {
            Shape::Constant => 1,
            Shape::Walsh(n) => {
                // bit_j(x) is bit (level - 1 - j) of the cell index.
                let reversed = cell.reverse_bits() >> (64 - self.level);
                if (n & reversed).count_ones().is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
            Shape::Haar { start } => {
                if cell == start {
                    1
                } else if cell == start + 1 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    /// Cell containing `x`; right-continuous, `x = 1` lands in the last cell.
    pub fn cell_of(&self, x: f64) -> u64 {
        let scaled = x * self.cells() as f64;
        (scaled.floor() as u64).min(self.cells() - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude * f64::from(self.sign(self.cell_of(x)))
    }

    fn prefix(&self) -> &[i64] {
        self.prefix.get_or_init(|| {
            let (start, len) = self.run();
            let mut acc = 0i64;
            let mut out = Vec::with_capacity(len as usize + 1);
            out.push(0);
            for c in start..start + len {
                acc += i64::from(self.sign(c));
                out.push(acc);
            }
            out
        })
    }

    /// `Φ(x) = ∫_0^x`, from prefix sums over the grid with linear
    /// interpolation inside the cell.
    pub fn antiderivative(&self, x: f64) -> f64 {
        let (start, len) = self.run();
        let h = self.cell_width();
        let c = self.cell_of(x);
        let prefix = self.prefix();
        if c < start {
            0.0
        } else if c >= start + len {
            self.amplitude * h * prefix[len as usize] as f64
        } else {
            let j = (c - start) as usize;
            let offset = x - c as f64 * h;
            self.amplitude * h * prefix[j] as f64
                + self.amplitude * f64::from(self.sign(c)) * offset
        }
    }

    /// `sup |Φ|`, attained at a grid node.
    pub fn sup_antiderivative(&self) -> f64 {
        let peak = self
            .prefix()
            .iter()
            .map(|p| p.unsigned_abs())
            .max()
            .unwrap_or(0);
        self.amplitude * self.cell_width() * peak as f64
    }

    /// Grid nodes of the support run, as numerators over `2^level`.
    pub fn run_nodes(&self) -> std::ops::RangeInclusive<u64> {
        let (start, len) = self.run();
        start..=start + len
    }

    /// Exact `∫_a^b f·φ`: on every grid cell the integrand is linear times
    /// a constant, integrated through the primitive of `f`.
    pub fn integrate_against(&self, f: &BVFunction, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let (start, len) = self.run();
        let h = self.cell_width();
        let scale = self.cells() as f64;
        let lo = start.max((a * scale).floor() as u64);
        let hi = (start + len).min((b * scale).ceil() as u64);
        let mut hint = 0usize;
        let mut acc = NeumaierSum::new();
        let mut prev: Option<(f64, f64)> = None;
        for c in lo..hi {
            let l = a.max(c as f64 * h);
            let r = b.min((c + 1) as f64 * h);
            if r <= l {
                continue;
            }
            let fl = match prev {
                Some((x, v)) if x == l => v,
                _ => f.primitive_from(l, &mut hint),
            };
            let fr = f.primitive_from(r, &mut hint);
            prev = Some((r, fr));
            let s = self.sign(c);
            if s != 0 {
                acc.add(f64::from(s) * (fr - fl));
            }
        }
        self.amplitude * acc.total()
    }

    /// `∫_0^1 φ ψ` for two dyadic elements, summed on the finer grid.
    pub fn inner_product(&self, other: &Self) -> f64 {
        let level = self.level.max(other.level);
        let (sa, la) = self.run();
        let (sb, lb) = other.run();
        let up_a = level - self.level;
        let up_b = level - other.level;
        let lo = (sa << up_a).max(sb << up_b);
        let hi = ((sa + la) << up_a).min((sb + lb) << up_b);
        let mut acc = 0i64;
        for c in lo..hi.max(lo) {
            acc += i64::from(self.sign(c >> up_a)) * i64::from(other.sign(c >> up_b));
        }
        self.amplitude * other.amplitude * 2f64.powi(-(level as i32)) * acc as f64
    }
}

//! `√2·cos(2πkx)` and `√2·sin(2πkx)` with closed-form integrals.

use std::f64::consts::{PI, SQRT_2, TAU};

use crate::bv::BVFunction;
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrigElement {
    pub frequency: u64,
    pub phase: Phase,
}

/// Fractional part of `k·x`; keeps phases exact at `x = 0` and `x = 1`.
fn turns(k: u64, x: f64) -> f64 {
    (k as f64 * x).fract()
}

fn cos_turns(k: u64, x: f64) -> f64 {
    (TAU * turns(k, x)).cos()
}

fn sin_turns(k: u64, x: f64) -> f64 {
    (TAU * turns(k, x)).sin()
}

/// `∫_a^b cos(2πmx) dx` for signed integer `m`.
fn integral_cos(m: i64, a: f64, b: f64) -> f64 {
    if m == 0 {
        return b - a;
    }
    let k = m.unsigned_abs();
    (sin_turns(k, b) - sin_turns(k, a)) / (TAU * k as f64)
}

/// `∫_a^b sin(2πmx) dx` for signed integer `m`.
fn integral_sin(m: i64, a: f64, b: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let k = m.unsigned_abs();
    let v = (cos_turns(k, a) - cos_turns(k, b)) / (TAU * k as f64);
    if m < 0 {
        -v
    } else {
        v
    }
}

impl TrigElement {
    /// Index `n` of the interleaved system without constant: `2k-1 → cos`,
    /// `2k → sin`.
    pub fn from_index(n: u64) -> Self {
        let frequency = n.div_ceil(2);
        let phase = if n % 2 == 1 { Phase::Cos } else { Phase::Sin };
        Self { frequency, phase }
    }

    fn omega(&self) -> f64 {
        TAU * self.frequency as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.phase {
            Phase::Cos => SQRT_2 * cos_turns(self.frequency, x),
            Phase::Sin => SQRT_2 * sin_turns(self.frequency, x),
        }
    }

    /// `Φ(x) = ∫_0^x`, closed form.
    pub fn antiderivative(&self, x: f64) -> f64 {
        let w = self.omega();
        match self.phase {
            Phase::Cos => SQRT_2 * sin_turns(self.frequency, x) / w,
            Phase::Sin => SQRT_2 * (1.0 - cos_turns(self.frequency, x)) / w,
        }
    }

    /// `sup |Φ|`: `√2/(2πk)` for cosines, `√2/(πk)` for sines.
    pub fn sup_antiderivative(&self) -> f64 {
        let k = self.frequency as f64;
        match self.phase {
            Phase::Cos => SQRT_2 / (TAU * k),
            Phase::Sin => SQRT_2 / (PI * k),
        }
    }

    /// Some antiderivative `Φ̃` and its antiderivative `Ψ̃`.
    fn primitives(&self, x: f64) -> (f64, f64) {
        let w = self.omega();
        let (c, s) = (cos_turns(self.frequency, x), sin_turns(self.frequency, x));
        match self.phase {
            Phase::Cos => (SQRT_2 * s / w, -SQRT_2 * c / (w * w)),
            Phase::Sin => (-SQRT_2 * c / w, -SQRT_2 * s / (w * w)),
        }
    }

    /// Exact `∫_a^b f·φ`. On a linear piece `u + s(x - p)` over `[p, q]`,
    /// `∫(x - p)φ = (q - p)Φ̃(q) - (Ψ̃(q) - Ψ̃(p))`.
    pub fn integrate_against(&self, f: &BVFunction, a: f64, b: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        for piece in f.pieces_in(a, b) {
            let (phi_p, psi_p) = self.primitives(piece.x0);
            let (phi_q, psi_q) = self.primitives(piece.x1);
            let width = piece.x1 - piece.x0;
            let slope = (piece.end - piece.start) / width;
            acc.add(piece.start * (phi_q - phi_p));
            acc.add(slope * (width * phi_q - (psi_q - psi_p)));
        }
        acc.total()
    }

    /// `∫_a^b φ ψ` via product-to-sum identities.
    pub fn product_integral(&self, other: &Self, a: f64, b: f64) -> f64 {
        let k1 = self.frequency as i64;
        let k2 = other.frequency as i64;
        // √2·√2·½ = 1
        match (self.phase, other.phase) {
            (Phase::Cos, Phase::Cos) => integral_cos(k1 - k2, a, b) + integral_cos(k1 + k2, a, b),
            (Phase::Sin, Phase::Sin) => integral_cos(k1 - k2, a, b) - integral_cos(k1 + k2, a, b),
            (Phase::Sin, Phase::Cos) => integral_sin(k1 + k2, a, b) + integral_sin(k1 - k2, a, b),
            (Phase::Cos, Phase::Sin) => integral_sin(k1 + k2, a, b) + integral_sin(k2 - k1, a, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(g: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = g(a) + g(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * g(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn indexing() {
        assert_eq!(
            TrigElement::from_index(1),
            TrigElement {
                frequency: 1,
                phase: Phase::Cos
            }
        );
        assert_eq!(
            TrigElement::from_index(2),
            TrigElement {
                frequency: 1,
                phase: Phase::Sin
            }
        );
        assert_eq!(
            TrigElement::from_index(7),
            TrigElement {
                frequency: 4,
                phase: Phase::Cos
            }
        );
    }

    #[test]
    fn antiderivative_examples() {
        let s1 = TrigElement::from_index(2);
        assert!((s1.antiderivative(0.5) - SQRT_2 / PI).abs() < 1e-15);
        assert_eq!(s1.antiderivative(1.0), 0.0);
        assert_eq!(TrigElement::from_index(1).eval(0.0), SQRT_2);
    }

    #[test]
    fn integrals_agree_with_simpson() {
        let f = BVFunction::new(vec![0.0, 0.3, 1.0], vec![0.7, -1.0], vec![0.2, 0.5]).unwrap();
        for n in 1..=9 {
            let e = TrigElement::from_index(n);
            let exact = e.integrate_against(&f, 0.1, 0.9);
            let below = |x: f64| f.left_limit(x) * e.eval(x);
            let above = |x: f64| f.value(x) * e.eval(x);
            let quad = simpson(below, 0.1, 0.3, 2000) + simpson(above, 0.3, 0.9, 2000);
            assert!((exact - quad).abs() < 1e-10, "n={n}: {exact} vs {quad}");
            let anti = e.antiderivative(0.77) - e.antiderivative(0.2);
            let quad = simpson(|x| e.eval(x), 0.2, 0.77, 2000);
            assert!((anti - quad).abs() < 1e-11);
        }
    }

    #[test]
    fn products_agree_with_simpson() {
        for i in 1..=6 {
            for j in 1..=6 {
                let (a, b) = (TrigElement::from_index(i), TrigElement::from_index(j));
                let exact = a.product_integral(&b, 0.15, 0.8);
                let quad = simpson(|x| a.eval(x) * b.eval(x), 0.15, 0.8, 4000);
                assert!((exact - quad).abs() < 1e-11, "({i},{j})");
            }
        }
    }
}

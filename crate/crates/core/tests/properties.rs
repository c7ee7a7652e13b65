use proptest::prelude::*;

use gfs_core::coeff::coefficients;
use gfs_core::multiplier::{
    g_n, grid_max, lemma_decomposition, per_cell_bound, pn_coefficients, ratio_sweep, t_n,
    u_n_functional, weighted_log_sum, Integrand, Polynomial,
};
use gfs_core::ons::gram_matrix;
use gfs_core::subseq::{
    log_sum_majorant, parseval_prefix, select_subsequence, select_subsequence_capped,
};
use gfs_core::{
    plateau, BVFunction, Basis, IndexMap, MultiplierSeq, SequenceA, SystemId, WeightMode, Weighting,
};

const SYSTEMS: [SystemId; 3] = [SystemId::TRIG, SystemId::WALSH, SystemId::HAAR];

/// Random piecewise-linear function with up to five pieces and optional jumps.
fn bv_function(jumps: bool) -> impl Strategy<Value = BVFunction> {
    (1usize..=5).prop_flat_map(move |m| {
        (
            prop::collection::vec(0.05f64..1.0, m),
            prop::collection::vec(-2.0f64..2.0, m + 1),
            prop::collection::vec(-1.0f64..1.0, m),
        )
            .prop_map(move |(widths, values, jump)| {
                let total: f64 = widths.iter().sum();
                let mut nodes = vec![0.0];
                let mut acc = 0.0;
                for w in &widths[..m - 1] {
                    acc += w / total;
                    nodes.push(acc);
                }
                nodes.push(1.0);
                let right: Vec<f64> = (0..m).map(|i| values[i]).collect();
                let left: Vec<f64> = (0..m)
                    .map(|i| {
                        if jumps && i + 1 < m {
                            values[i + 1] + jump[i]
                        } else {
                            values[i + 1]
                        }
                    })
                    .collect();
                BVFunction::new(nodes, left, right).expect("valid nodes")
            })
    })
}

fn system() -> impl Strategy<Value = SystemId> {
    prop::sample::select(SYSTEMS.to_vec())
}

fn multiplier() -> impl Strategy<Value = MultiplierSeq> {
    prop_oneof![
        (0.1f64..3.0).prop_map(MultiplierSeq::Constant),
        (0.0f64..0.5).prop_map(MultiplierSeq::Power),
        Just(MultiplierSeq::SqrtOverLog),
    ]
}

fn weighting() -> impl Strategy<Value = Weighting> {
    (
        multiplier(),
        prop::sample::select(vec![WeightMode::Paper, WeightMode::Shifted]),
    )
        .prop_map(|(m, w)| Weighting::new(m, w))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn variation_is_invariant_under_refinement(f in bv_function(true), x in 0.01f64..0.99) {
        let g = f.refined(x).unwrap();
        prop_assert!(close(f.total_variation(), g.total_variation(), 1e-13));
        prop_assert!(close(f.integral(0.0, 1.0), g.integral(0.0, 1.0), 1e-13));
    }

    #[test]
    fn norm_a_dominates_sup_and_variation(f in bv_function(false)) {
        let a = f.norm_a().unwrap();
        prop_assert!(a + 1e-14 >= f.sup_norm());
        prop_assert!(a + 1e-14 >= f.total_variation());
    }

    #[test]
    fn plateau_is_monotone_with_norm_two(n in 2usize..200, frac in 0.0f64..1.0, xs in prop::collection::vec(0.0f64..=1.0, 2..20)) {
        let i = 1 + ((n - 2) as f64 * frac) as i64;
        let f = plateau(n, i).unwrap();
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        let vals: Vec<f64> = xs.iter().map(|&x| f.eval(x).unwrap()).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(f.norm_a().unwrap(), 2.0);
    }

    #[test]
    fn coefficients_are_linear(f in bv_function(true), g in bv_function(true), s in system(), alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let h = f.linear_combination(alpha, &g, beta).unwrap();
        let (cf, cg, ch) = (coefficients(&f, &s, 24).unwrap(), coefficients(&g, &s, 24).unwrap(), coefficients(&h, &s, 24).unwrap());
        for k in 0..24 {
            prop_assert!((ch[k] - (alpha * cf[k] + beta * cg[k])).abs() < 1e-12, "k={}", k + 1);
        }
    }

    #[test]
    fn ratio_is_scale_invariant(s in system(), w in weighting(), seed in 0u64..1000, c in 0.01f64..100.0, n in 2usize..80) {
        let a = SequenceA::seeded_random(seed, 0.75, n).unwrap();
        let b = a.scaled(c);
        let r1 = g_n(&s, &w, &a.values, n).unwrap() / t_n(&w, &a.values, n).unwrap();
        let r2 = g_n(&s, &w, &b.values, n).unwrap() / t_n(&w, &b.values, n).unwrap();
        prop_assert!(close(r1, r2, 1e-12), "{} vs {}", r1, r2);
    }

    #[test]
    fn cauchy_schwarz_chain(f in bv_function(true), s in system(), w in weighting(), seed in 0u64..1000, n in 2usize..64) {
        let b = SequenceA::seeded_random(seed, 0.75, n).unwrap();
        let t = t_n(&w, &b.values, n).unwrap();
        let p = Polynomial::pn(&s, &w, &b.values, n).unwrap();
        let d_max = w.multiplier.values(n).unwrap().into_iter().fold(0.0f64, f64::max);
        let u = u_n_functional(&f, &s, &w, &b.values, n).unwrap();
        let p_norm = p.l2_norm_sq().sqrt();
        prop_assert!((u * t).abs() <= f.l2_norm_sq().sqrt() * p_norm * (1.0 + 1e-10) + 1e-14);
        prop_assert!(p_norm <= d_max * w.mode.weight(n) * t * (1.0 + 1e-12) + 1e-14);
        prop_assert!(g_n(&s, &w, &b.values, n).unwrap() <= p_norm * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn per_cell_bound_holds(dyadic in prop::sample::select(vec![SystemId::WALSH, SystemId::HAAR, SystemId::HAAR.with_constant()]), w in weighting(), seed in 0u64..1000, n in 2usize..128) {
        let b = SequenceA::seeded_random(seed, 0.75, n).unwrap();
        let p = Polynomial::pn(&dyadic, &w, &b.values, n).unwrap();
        let cells = p.cell_abs_integrals(n).unwrap();
        let bound = per_cell_bound(&w, &b.values, n).unwrap();
        let worst = cells.iter().copied().fold(0.0f64, f64::max);
        prop_assert!(worst <= bound * (1.0 + 1e-12), "{} > {}", worst, bound);
        let total: f64 = cells.iter().sum();
        prop_assert!(total + 1e-12 >= p.total_integral().abs());
    }

    #[test]
    fn remapped_polynomial_matches_explicit_sum(s in system(), w in weighting(), start in 1usize..5, steps in prop::collection::vec(1usize..7, 2..10), seed in 0u64..100, x in 0.0f64..=1.0) {
        let mut indices = vec![start];
        for st in &steps {
            indices.push(indices.last().unwrap() + st);
        }
        let m = indices.len();
        let map = IndexMap::new(s, indices.clone()).unwrap();
        let c = SequenceA::seeded_random(seed, 0.5, m).unwrap();
        let q = Polynomial::pn(&map, &w, &c.values, m).unwrap();
        let coefs = pn_coefficients(&w, &c.values, m).unwrap();
        let direct: f64 = indices.iter().zip(&coefs).map(|(&n, k)| k * s.element(n).unwrap().eval(x)).sum();
        prop_assert!((q.eval(x) - direct).abs() < 1e-12 * (1.0 + direct.abs()));
        let anti: f64 = indices.iter().zip(&coefs).map(|(&n, k)| k * s.element(n).unwrap().antiderivative(x)).sum();
        prop_assert!((q.primitive(x) - anti).abs() < 1e-12);
    }

    #[test]
    fn antiderivative_differentiates_back(s in system(), n in 1usize..300, u in 0.05f64..0.95) {
        let e = s.element(n).unwrap();
        // centre of a cell of the finest grid any of these elements uses
        let cells = 1u64 << 10;
        let x = ((u * cells as f64).floor() + 0.5) / cells as f64;
        let h = 1e-6 / cells as f64;
        let numeric = (e.antiderivative(x + h) - e.antiderivative(x - h)) / (2.0 * h);
        let scale = e.eval(x).abs().max(1.0);
        prop_assert!((numeric - e.eval(x)).abs() < 1e-6 * scale * (n as f64), "n={} x={}", n, x);
    }

    #[test]
    fn parseval_prefix_is_monotone(s in prop::sample::select(vec![SystemId::HAAR.with_constant(), SystemId::WALSH.with_constant(), SystemId::TRIG.with_constant()]), x in 0.0f64..=1.0, n in 1usize..200) {
        let p1 = parseval_prefix(s, x, n).unwrap();
        let p2 = parseval_prefix(s, x, n + 1).unwrap();
        prop_assert!(p2 + 1e-15 >= p1);
        prop_assert!(p2 <= x + 1e-12);
    }

    #[test]
    fn log_sums_are_nondecreasing(f in bv_function(true), s in system(), w in weighting()) {
        let sums = weighted_log_sum(&f, &s, &w, 128).unwrap();
        prop_assert!(sums.windows(2).all(|p| p[1] >= p[0]));
    }

    #[test]
    fn decomposition_is_exact(f in bv_function(true), s in system(), k in 1usize..=16, n in 2usize..60) {
        let g = Polynomial::new(vec![s.element(k).unwrap()], vec![1.0]);
        let d = lemma_decomposition(&f, &g, n).unwrap();
        prop_assert!(d.residual.abs() <= 1e-12, "residual {}", d.residual);
    }

    #[test]
    fn majorant_dominates_log_sum(f in bv_function(true), s in prop::sample::select(vec![SystemId::HAAR, SystemId::WALSH]), count in 2usize..10, w in weighting()) {
        let sel = select_subsequence(s, count).unwrap();
        let maj = log_sum_majorant(&f, &sel.index_map(), &w).unwrap();
        prop_assert!(maj.sum <= maj.bound() * (1.0 + 1e-10) + 1e-14, "{} > {}", maj.sum, maj.bound());
        prop_assert!(close(maj.t * maj.t, maj.sum, 1e-12));
    }

    #[test]
    fn random_sequences_are_reproducible(seed: u64, alpha in 0.0f64..2.0, len in 1usize..500) {
        let a = SequenceA::seeded_random(seed, alpha, len).unwrap();
        let b = SequenceA::seeded_random(seed, alpha, len).unwrap();
        prop_assert_eq!(&a, &b);
        let norm: f64 = a.values.iter().map(|v| v * v).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn elements_have_zero_mean() {
    for s in SYSTEMS {
        for n in 1..=4096 {
            let e = s.element(n).unwrap();
            assert!(e.integral(0.0, 1.0).abs() <= 1e-12, "{s} n={n}");
        }
    }
}

#[test]
fn gram_is_identity_up_to_64() {
    for s in SYSTEMS
        .into_iter()
        .chain(SYSTEMS.map(SystemId::with_constant))
    {
        let tol = if s.is_dyadic() { 1e-12 } else { 1e-10 };
        for size in [1, 2, 7, 33, 64] {
            let g = gram_matrix(s, size).unwrap();
            assert!(g.max_deviation_from_identity() <= tol, "{s} N={size}");
        }
    }
}

#[test]
fn selection_is_deterministic_and_admissible() {
    for s in [SystemId::HAAR, SystemId::WALSH, SystemId::TRIG] {
        let a = select_subsequence(s, 12).unwrap();
        let b = select_subsequence(s, 12).unwrap();
        assert_eq!(a, b);
        for (k, (&n, &w)) in a.indices.iter().zip(&a.witnesses).enumerate() {
            let k = (k + 1) as f64;
            assert!(w < 1.0 / (k * k));
            assert_eq!(w, s.element(n).unwrap().sup_antiderivative());
        }
        assert!(a.indices.windows(2).all(|p| p[0] < p[1]));
    }
    assert!(select_subsequence_capped(SystemId::HAAR, 6, 64).is_err());
}

#[test]
fn grid_max_is_attained_on_the_grid() {
    let w = Weighting::unit();
    let a = SequenceA::seeded_random(7, 0.75, 64).unwrap();
    let p = Polynomial::pn(&SystemId::WALSH, &w, &a.values, 64).unwrap();
    let gm = grid_max(&p, 64);
    let brute = (1..=64)
        .map(|i| p.primitive(i as f64 / 64.0).abs())
        .fold(0.0f64, f64::max);
    assert_eq!(gm.value, brute);
    let report = ratio_sweep(&SystemId::WALSH, &w, &a.values, &[64]).unwrap();
    assert_eq!(report.rows[0].g, Some(brute));
}

use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use super::*;
use crate::spatial::space::{spatial_from_system, Atom, SpatialSystem};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn opts() -> NormOptions {
    NormOptions::default()
}

/// Brute-force lower oracle for 2-column matrices: scan unit vectors
/// `(cos t, sin t·e^{iφ})` on a grid.
fn grid_max(a: &CMatrix, p: f64, steps: usize) -> f64 {
    assert_eq!(a.cols(), 2);
    let mut best: f64 = 0.0;
    for k in 0..=steps {
        let t = std::f64::consts::FRAC_PI_2 * k as f64 / steps as f64;
        for l in 0..steps {
            let phi = std::f64::consts::TAU * l as f64 / steps as f64;
            let x = [c(t.cos(), 0.0), Complex64::from_polar(t.sin(), phi)];
            best = best.max(pnorm(&a.matvec(&x), p) / pnorm(&x, p));
        }
    }
    best
}

#[test]
fn identity_is_one() {
    for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
        let b = opnorm_p(&CMatrix::identity(5), p, None, &opts()).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        assert!(b.certified);
    }
}

#[test]
fn averaging_idempotent_has_norm_one() {
    let half = CMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
    for p in [1.0, 1.5, 2.0, 3.0, 4.0] {
        let b = opnorm_p(&half, p, None, &opts()).unwrap();
        assert!(b.lower >= 1.0 - 1e-9 && b.upper <= 1.0 + 1e-9, "p={p}: {b:?}");
    }
}

#[test]
fn golden_ratio_singular_value() {
    let m = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
    let b = opnorm_p(&m, 2.0, None, &opts()).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((b.lower - phi).abs() < 1e-12 && (b.upper - phi).abs() < 1e-12);
}

#[test]
fn agrees_with_grid_oracle() {
    let ms = [
        CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]),
        CMatrix::from_real_rows(&[vec![1.0, -2.0], vec![3.0, 0.5]]),
        CMatrix::from_dense_rows(&[vec![c(1.0, 1.0), c(0.0, -1.0)], vec![c(0.5, 0.0), c(2.0, 0.0)]]).unwrap(),
        CMatrix::from_dense_rows(&[vec![c(0.0, 1.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 1.0)]]).unwrap(),
    ];
    for m in &ms {
        for p in [1.0, 1.5, 2.0, 3.0, 4.0] {
            let b = opnorm_p(m, p, None, &opts()).unwrap();
            let oracle = grid_max(m, p, 400);
            assert!(b.upper >= oracle - 1e-12, "p={p} upper {} < oracle {oracle}", b.upper);
            assert!(b.lower >= oracle - 1e-4, "p={p} lower {} far below oracle {oracle}", b.lower);
        }
    }
}

#[test]
fn block_sup_examples() {
    let blocks = [CMatrix::from_real_rows(&[vec![2.0]]), CMatrix::from_real_rows(&[vec![3.0]])];
    for p in [1.0, 1.5, 3.0] {
        let b = block_sup_norm(blocks.iter(), p, &opts()).unwrap();
        assert_eq!((b.lower, b.upper), (3.0, 3.0));
    }
    let single = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
    let b = block_sup_norm([&single], 2.0, &opts()).unwrap();
    let d = opnorm_p(&single, 2.0, None, &opts()).unwrap();
    assert_eq!((b.lower, b.upper), (d.lower, d.upper));
    let lambdas = [c(0.5, -1.0), c(2.0, 0.1), c(-1.0, 0.0)];
    let diag: Vec<CMatrix> = lambdas.iter().map(|&l| CMatrix::from_triplets(1, 1, [(0, 0, l)])).collect();
    let b = block_sup_norm(diag.iter(), 1.5, &opts()).unwrap();
    assert_eq!(b.lower, c(2.0, 0.1).norm());
    assert_eq!(b.upper, c(2.0, 0.1).norm());
}

#[test]
fn weighted_partial_permutation_pinches_max_modulus() {
    // a chain x0 -> x1 -> x2 with different moduli
    let m = CMatrix::from_triplets(3, 3, [(1, 0, c(0.0, 2.0)), (2, 1, c(-0.5, 0.0))]);
    for p in [1.0, 1.5, 3.0] {
        let b = opnorm_p(&m, p, None, &opts()).unwrap();
        assert_eq!((b.lower, b.upper), (2.0, 2.0));
    }
}

#[test]
fn certified_spatial_short_circuits() {
    let s = FiniteMeasureSpace::new(vec![
        Atom { label: "a".into(), weight: BigRational::new(2.into(), 1.into()) },
        Atom { label: "b".into(), weight: BigRational::new(1.into(), 3.into()) },
    ])
    .unwrap();
    let sys = SpatialSystem { pairs: vec![(0, 1)], phases: vec![c(0.0, 1.0)] };
    let m = spatial_from_system(&sys, 3.0, &s).unwrap();
    let b = opnorm_spatial(&m, 3.0, &s, &opts()).unwrap();
    assert_eq!((b.lower, b.upper), (1.0, 1.0));
    // the numerical route agrees
    let n = opnorm_p(&m.matrix, 3.0, Some(&s), &opts()).unwrap();
    assert!((n.lower - 1.0).abs() < 1e-12 && (n.upper - 1.0).abs() < 1e-12);
    let empty = spatial_from_system(&SpatialSystem::from_map(vec![]), 3.0, &s).unwrap();
    let b = opnorm_spatial(&empty, 3.0, &s, &opts()).unwrap();
    assert_eq!((b.lower, b.upper), (0.0, 0.0));
}

#[test]
fn exponent_range_is_checked() {
    assert!(opnorm_p(&CMatrix::identity(2), 0.5, None, &opts()).is_err());
    assert!(opnorm_p(&CMatrix::identity(2), f64::INFINITY, None, &opts()).is_err());
}

fn small_matrix() -> impl Strategy<Value = CMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| sized_matrix(r, c))
}

fn square_matrix() -> impl Strategy<Value = CMatrix> {
    (1usize..5).prop_flat_map(|n| sized_matrix(n, n))
}

fn sized_matrix(r: usize, c: usize) -> impl Strategy<Value = CMatrix> {
    let entry = prop_oneof![
        2 => Just((0.0, 0.0)),
        3 => (-3i32..=3, -3i32..=3).prop_map(|(a, b)| (a as f64 / 2.0, b as f64 / 2.0)),
    ];
    proptest::collection::vec(entry, r * c).prop_map(move |v| {
        CMatrix::from_triplets(
            r,
            c,
            v.into_iter().enumerate().map(|(k, (re, im))| (k / c, k % c, Complex64::new(re, im))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn intervals_are_sound(m in small_matrix(), pk in 0usize..5) {
        let p = [1.0, 1.5, 2.0, 3.0, 4.0][pk];
        let o = NormOptions { restarts: 4, ..opts() };
        let b = opnorm_p(&m, p, None, &o).unwrap();
        prop_assert!(b.lower <= b.upper);
        if !m.is_zero() {
            // the witness realizes the lower bound
            let realized = pnorm(&m.matvec(&b.witness), p) / pnorm(&b.witness, p);
            prop_assert!((realized - b.lower).abs() <= 1e-9 * b.lower.max(1.0));
        }
        if p == 1.0 || p == 2.0 {
            prop_assert!(b.upper - b.lower <= 1e-12 * b.upper.max(1.0));
        }
        // anchors bracket every p-norm
        let n1 = m.norm1();
        let ninf = m.norm_inf();
        prop_assert!(b.upper <= n1.max(ninf) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn rescaling_is_invisible(m in square_matrix(), pk in 0usize..3, w in proptest::collection::vec(1i64..5, 4)) {
        let p = [1.5, 2.0, 3.0][pk];
        let n = m.rows();
        let space = FiniteMeasureSpace::new(
            (0..n).map(|i| Atom { label: format!("x{i}"), weight: BigRational::new(w[i].into(), 1.into()) }).collect(),
        ).unwrap();
        // D^{-1} M D on the weighted space equals M on counting measure
        let d: Vec<f64> = (0..n).map(|i| (w[i] as f64).powf(1.0 / p)).collect();
        let conj = CMatrix::from_triplets(n, n, m.entries().map(|(i, j, z)| (i, j, z * (d[j] / d[i]))));
        let a = opnorm_p(&m, p, None, &opts()).unwrap();
        let b = opnorm_p(&conj, p, Some(&space), &opts()).unwrap();
        prop_assert!((a.lower - b.lower).abs() <= 1e-12 * a.lower.max(1.0));
        prop_assert!((a.upper - b.upper).abs() <= 1e-12 * a.upper.max(1.0));
    }

    #[test]
    fn power_iteration_is_monotone(m in small_matrix(), pk in 0usize..3, seed in any::<u64>()) {
        let p = [1.5, 3.0, 4.0][pk];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<Complex64> = (0..m.cols()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let trace = boyd_trace(&m, &x, p, 30);
        for w in trace.windows(2) {
            prop_assert!(w[1] >= w[0] * (1.0 - 1e-10) - 1e-14, "{:?}", trace);
        }
    }
}

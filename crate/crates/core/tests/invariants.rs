use nalgebra::DMatrix;
use proptest::prelude::*;
use sympspec::means::{self, WeightVector};
use sympspec::symplectic::{self, random_posdef, random_symplectic, PosDefSampler};
use sympspec::theorems::{self, Status};
use sympspec::williamson::{self, symplectic_spectrum, PosDefMatrix};

fn posdef(seed: u64, n: usize, repeated: bool) -> PosDefMatrix {
    PosDefSampler {
        condition_spread: 1.5,
        repeated,
        ..Default::default()
    }
    .sample(seed, n)
    .matrix
}

fn rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

/// Random invertible matrix with moderate condition number.
fn invertible(seed: u64, order: usize) -> DMatrix<f64> {
    let s = random_symplectic(seed, order / 2, 0.7);
    let p = random_posdef(seed ^ 0xABCD, order / 2, 0.5).matrix;
    s.matrix() * p.matrix()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_invariant_under_symplectic_congruence(seed in any::<u64>(), n in 1usize..6, spread in 0.0f64..1.5) {
        let a = posdef(seed, n, seed % 3 == 0);
        let s = random_symplectic(seed.wrapping_add(1), n, spread);
        let b = a.congruence(s.matrix()).unwrap();
        let (da, db) = (symplectic_spectrum(&a).unwrap().d, symplectic_spectrum(&b).unwrap().d);
        for (x, y) in da.iter().zip(&db) {
            prop_assert!((x - y).abs() <= 1e-8 * y);
        }
    }

    #[test]
    fn eigenbasis_pairs_satisfy_their_relations(seed in any::<u64>(), n in 1usize..6) {
        let a = posdef(seed, n, seed % 4 == 0);
        let basis = williamson::symplectic_eigenbasis(&a).unwrap();
        let j = symplectic::standard_j(n);
        for (k, (u, v)) in basis.pairs.iter().enumerate() {
            let d = basis.d[k];
            let scale = a.matrix().norm() * u.norm().max(v.norm());
            prop_assert!((a.matrix() * u - (&j * v) * d).norm() <= 1e-8 * scale);
            prop_assert!((a.matrix() * v + (&j * u) * d).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn euler_reconstructs(seed in any::<u64>(), n in 1usize..6, spread in 0.0f64..2.0) {
        let m = random_symplectic(seed, n, spread);
        let e = symplectic::euler_decompose(&m).unwrap();
        prop_assert!(rel(&e.reconstruct(), m.matrix()) <= 1e-8);
        prop_assert!(e.gamma.windows(2).all(|w| w[0] >= w[1]));
        for o in [&e.o1, &e.o2] {
            prop_assert!(symplectic::is_symplectic(o, 1e-9).unwrap().holds);
            prop_assert!((o.transpose() * o - DMatrix::identity(2 * n, 2 * n)).norm() <= 1e-8);
        }
    }

    #[test]
    fn associated_matrix_identity(seed in any::<u64>(), n in 1usize..5, spread in 0.0f64..1.5) {
        let m = random_symplectic(seed, n, spread);
        prop_assert!(symplectic::mtilde_identity_check(&m).unwrap() <= 1e-8);
    }

    #[test]
    fn associated_matrix_is_superstochastic(seed in any::<u64>(), n in 1usize..7, spread in 0.0f64..2.0) {
        let m = random_symplectic(seed, n, spread);
        let r = theorems::check_theorem6(&m).unwrap();
        prop_assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn distance_and_geodesic_are_congruence_equivariant(seed in any::<u64>(), n in 1usize..4, t in 0.0f64..=1.0) {
        let a = posdef(seed, n, false);
        let b = posdef(seed.wrapping_add(7), n, false);
        let x = invertible(seed.wrapping_add(13), 2 * n);
        let (ta, tb) = (a.congruence(&x).unwrap(), b.congruence(&x).unwrap());
        let d0 = means::riemannian_distance(&a, &b).unwrap();
        let d1 = means::riemannian_distance(&ta, &tb).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-8 * (1.0 + d0));
        let g = means::geodesic(&a, &b, t).unwrap().congruence(&x).unwrap();
        let tg = means::geodesic(&ta, &tb, t).unwrap();
        prop_assert!(rel(tg.matrix(), g.matrix()) <= 1e-8);
    }

    #[test]
    fn karcher_mean_is_congruence_equivariant(seed in any::<u64>(), n in 1usize..4) {
        let ms: Vec<PosDefMatrix> = (0..3).map(|k| posdef(seed.wrapping_add(k), n, false)).collect();
        let x = invertible(seed.wrapping_add(99), 2 * n);
        let tms: Vec<PosDefMatrix> = ms.iter().map(|a| a.congruence(&x).unwrap()).collect();
        let w = WeightVector::uniform(3);
        let tight = |xs: &[PosDefMatrix]| means::KarcherOptions {
            tol: Some(1e-12 * xs.iter().map(|a| a.matrix().norm()).fold(0.0, f64::max)),
            max_iter: 500,
            ..Default::default()
        };
        let g = means::karcher_mean(&ms, &w, &tight(&ms)).unwrap();
        let tg = means::karcher_mean(&tms, &w, &tight(&tms)).unwrap();
        prop_assert!(g.converged && tg.converged);
        let expected = g.mean.congruence(&x).unwrap();
        prop_assert!(rel(tg.mean.matrix(), expected.matrix()) <= 1e-7);
    }

    #[test]
    fn theorem_reports_are_self_contained(seed in any::<u64>(), n in 2usize..5) {
        let a = posdef(seed, n, false);
        let b = posdef(seed.wrapping_add(3), n, false);
        let reports = [
            theorems::check_theorem1(&a, 0.4).unwrap(),
            theorems::check_theorem3(&a, &b, 0.3).unwrap(),
            theorems::check_theorem7(&a, &b).unwrap(),
            theorems::check_theorem11(&a).unwrap(),
            theorems::check_interlacing(&a, 0).unwrap(),
        ];
        for r in &reports {
            let (m, h) = r.recompute().unwrap();
            prop_assert_eq!(m, r.margin);
            prop_assert_eq!(h, r.holds);
            prop_assert!(r.holds);
        }
    }
}

#[test]
fn equality_cases_have_zero_margin() {
    let d = PosDefMatrix::williamson_diagonal(&[0.5, 1.5, 4.0]).unwrap();
    let e = PosDefMatrix::williamson_diagonal(&[2.0, 1.0, 3.0]).unwrap();
    for t in [0.0, 0.25, 1.0, 2.5] {
        assert!(theorems::check_theorem1(&d, t).unwrap().margin.abs() <= 1e-10);
    }
    assert!(theorems::check_theorem3(&d, &e, 0.4).unwrap().margin.abs() <= 1e-10);
    assert!(theorems::check_theorem11(&d).unwrap().comparisons[0].margin.abs() <= 1e-10);
    let r = theorems::check_theorem4(&[d.clone(), e.clone()], &WeightVector::uniform(2)).unwrap();
    assert!(r.margin.abs() <= 1e-10);
}

#[test]
fn gaussian_examples() {
    assert!(williamson::is_gaussian(&PosDefMatrix::identity(2), 0.0).unwrap());
    let quarter = PosDefMatrix::identity(2).scaled(0.25).unwrap();
    assert!(!williamson::is_gaussian(&quarter, williamson::DEFAULT_GAUSSIAN_TOL).unwrap());
    let half = PosDefMatrix::identity(3).scaled(0.5).unwrap();
    assert!(williamson::is_gaussian(&half, williamson::DEFAULT_GAUSSIAN_TOL).unwrap());
}

mod common;

use expsys::certificates::GramFactorization;
use expsys::constructions::{sharpness_set, snap_to_lattice};
use expsys::density::{density_with, DensityMode};
use expsys::fourier::{bessel_bound, gram};
use expsys::spectral::{extract_stable_subspace, CMatrix};
use expsys::{Exec, FrequencySet, Generator, IntervalUnion};
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;

fn union_strategy(lo: f64, hi: f64) -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((lo..hi, 0.02f64..0.4), 1..4).prop_map(|v| {
        let pairs: Vec<(f64, f64)> = v.into_iter().map(|(a, l)| (a, a + l)).collect();
        IntervalUnion::from_f64(&pairs).unwrap()
    })
}

fn unit_subset_strategy() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::btree_set(1i64..64, 2..7).prop_map(|cuts| {
        let c: Vec<i64> = cuts.into_iter().collect();
        let pairs: Vec<(Rational64, Rational64)> = c
            .chunks_exact(2)
            .map(|p| (Rational64::new(p[0], 64), Rational64::new(p[1], 64)))
            .collect();
        IntervalUnion::from_rationals(&pairs).unwrap()
    })
}

fn points_strategy(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.6f64..2.0, 1..max).prop_map(|gaps| {
        let mut x = -5.0;
        gaps.into_iter()
            .map(|g| {
                x += g;
                x
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn merge_preserves_measure_and_complement_adds_up(s in unit_subset_strategy()) {
        let c = s.complement_in(&IntervalUnion::unit());
        let total = s.measure() + c.map(|c| c.measure()).unwrap_or(0.0);
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(s.shifted(Rational64::new(3, 7)).exact_measure(), s.exact_measure());
    }

    #[test]
    fn gram_is_hermitian_psd(s in union_strategy(-1.0, 1.0), pts in points_strategy(10)) {
        let f = FrequencySet::new(pts, 0.6).unwrap();
        let g = gram(&s, &f).unwrap();
        let e = g.entries();
        for j in 0..g.dim() {
            prop_assert!((e[(j, j)].re - s.measure()).abs() < 1e-14);
            for k in 0..g.dim() {
                prop_assert!((e[(j, k)] - e[(k, j)].conj()).norm() < 1e-14);
            }
        }
        prop_assert!(g.eigen().unwrap().min() >= -g.psd_tolerance());
    }

    #[test]
    fn gram_matches_antiderivative(s in union_strategy(-1.0, 1.0), pts in points_strategy(8)) {
        let f = FrequencySet::new(pts.clone(), 0.6).unwrap();
        let g = gram(&s, &f).unwrap();
        let oracle = common::synthesis(&s, &pts);
        // the crate stores ⟨e_j, e_k⟩ by rows, the oracle by columns
        prop_assert!((g.entries().transpose() - oracle).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn integer_frequencies_on_the_torus_are_bessel(s in unit_subset_strategy(), r in 2usize..20) {
        let w = Generator::integers().symmetric_window(r as f64).unwrap();
        prop_assert!(bessel_bound(&s, &w).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn residuals_shrink_with_budget(s in union_strategy(0.0, 1.0), pts in points_strategy(9), w in -4.0f64..4.0) {
        let f = FrequencySet::new(pts, 0.6).unwrap();
        let fact = GramFactorization::new(&s, &f, Exec::Sequential).unwrap();
        let budgets = [0.1, 0.5, 1.0, 3.0, 10.0];
        let comp = fact.completeness_curve(w, &budgets).unwrap();
        prop_assert!(comp.windows(2).all(|p| p[1].residual <= p[0].residual));
        let min = fact.minimality_curve(0, &budgets).unwrap();
        prop_assert!(min.windows(2).all(|p| p[1].residual <= p[0].residual));
        for c in &comp {
            prop_assert!(c.coeff_norm_sq <= c.budget * (1.0 + 1e-9));
        }
        for c in &min {
            prop_assert!(c.achieved_norm <= c.budget * (1.0 + 1e-9));
        }
    }

    #[test]
    fn completeness_residual_identity(s in union_strategy(0.0, 1.0), pts in points_strategy(9), w in -4.0f64..4.0, c in 0.05f64..4.0) {
        let f = FrequencySet::new(pts.clone(), 0.6).unwrap();
        let cert = GramFactorization::new(&s, &f, Exec::Sequential).unwrap().certify_completeness(w, c).unwrap();
        let a = nalgebra::DVector::from_vec(cert.coefficients.clone());
        let gram = common::synthesis(&s, &pts);
        let h = common::analysis(&s, &pts, w);
        let r2 = s.measure() - 2.0 * a.dotc(&h).re + a.dotc(&(&gram * &a)).re;
        prop_assert!((r2.max(0.0) - cert.residual * cert.residual).abs() < 1e-9);
    }

    #[test]
    fn translation_covariance(s in union_strategy(0.0, 1.0), pts in points_strategy(8), w in -3.0f64..3.0, t in -2.0f64..2.0) {
        let f = FrequencySet::new(pts, 0.6).unwrap();
        let moved = s.shifted(t);
        let a = GramFactorization::new(&s, &f, Exec::Sequential).unwrap();
        let b = GramFactorization::new(&moved, &f, Exec::Sequential).unwrap();
        let (ca, cb) = (a.certify_completeness(w, 1.0).unwrap(), b.certify_completeness(w, 1.0).unwrap());
        // residual² is a difference of O(|S|) terms, so compare it, not its root
        prop_assert!((ca.residual.powi(2) - cb.residual.powi(2)).abs() < 1e-12, "{} vs {}", ca.residual, cb.residual);
        let lambda = f.points()[0];
        let (ma, mb) = (a.certify_minimality(lambda, 2.0).unwrap(), b.certify_minimality(lambda, 2.0).unwrap());
        prop_assert!((ma.residual.powi(2) - mb.residual.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn snapping_keeps_points_close_and_counts_stable(pts in points_strategy(30), k in 1u32..4) {
        let f = FrequencySet::new(pts.clone(), 0.6).unwrap();
        let eta = f.separation() / (3.0 * k as f64);
        let snapped = snap_to_lattice(&f, eta.min(1.0)).unwrap();
        prop_assert_eq!(snapped.set.len(), f.len());
        prop_assert!(snapped.max_displacement() <= eta / 2.0 + 1e-12);
        // a common separation constant keeps the two radius ladders aligned
        let sep = Some(f.separation() - eta);
        let a = Generator::List { points: pts.clone(), separation: sep };
        let b = Generator::List { points: snapped.set.points().to_vec(), separation: sep };
        let a = density_with(&a, 40.0 * f.separation(), DensityMode::Upper, Exec::Sequential);
        let b = density_with(&b, 40.0 * f.separation(), DensityMode::Upper, Exec::Sequential);
        if let (Ok(a), Ok(b)) = (a, b) {
            for (x, y) in a.extremal_counts.iter().zip(&b.extremal_counts) {
                prop_assert!(x.abs_diff(*y) <= 1);
            }
        }
    }

    #[test]
    fn sharpness_identities_are_exact(dn in 1i64..99, en in 1i64..99) {
        let inst = sharpness_set(Rational64::new(dn, 100), Rational64::new(en, 100)).unwrap();
        prop_assert!(inst.identities_hold());
        prop_assert!(inst.alpha <= Rational64::new(en, 100));
    }

    #[test]
    fn stable_subspace_is_similarity_invariant(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 12;
        let d = 0.4;
        let mut e = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        e *= Complex64::new(0.9 * d * (n as f64).sqrt() / e.norm(), 0.0);
        let b = CMatrix::identity(n, n) + e;
        // a unitary from the QR factor of a random matrix
        let u = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).qr().q();
        let rotated = &u * &b * u.adjoint();
        let s1 = extract_stable_subspace(&b, d, 1.5).unwrap();
        let s2 = extract_stable_subspace(&rotated, d, 1.5).unwrap();
        prop_assert_eq!(s1.dim, s2.dim);
        prop_assert!((s1.min_gain(&b).unwrap() - s2.min_gain(&rotated).unwrap()).abs() < 1e-9);
        prop_assert!(s1.dim as f64 >= s1.dim_bound);
    }
}

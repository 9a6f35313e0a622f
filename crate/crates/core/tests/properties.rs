//! Randomized invariants across the crate, driven by proptest.

mod common;

use bertini::field::Matrix;
use bertini::jets::{fiber_dimension, xi_matrix_in_chart, xi_rank};
use bertini::linsys::LinearSystem;
use bertini::poly::{EulerVerdict, Homogeneity};
use bertini::smoothness::{quadric_matrix, singular_points_bruteforce};
use bertini::{Field, MultiPoly, ProjPoint, Scalar};
use common::*;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn domain(k: u64) -> Field {
    match k % 3 {
        0 => q(),
        1 => fp(7),
        _ => fp(101),
    }
}

fn nonzero_big() -> impl Strategy<Value = BigInt> {
    (any::<bool>(), prop::collection::vec(any::<u8>(), 1..=32)).prop_filter_map(
        "nonzero",
        |(neg, bytes)| {
            let v = BigInt::from_bytes_be(if neg { Sign::Minus } else { Sign::Plus }, &bytes);
            (v != BigInt::from(0)).then_some(v)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_plus_nullity(seed in any::<u64>(), r in 1usize..7, c in 1usize..7) {
        let mut g = rng(seed);
        let field = domain(seed);
        let m = random_matrix(&mut g, field, r, c);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), c);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn det_nonzero_iff_full_rank(seed in any::<u64>(), n in 1usize..6) {
        let mut g = rng(seed);
        let m = random_matrix(&mut g, domain(seed), n, n);
        prop_assert_eq!(!m.det().unwrap().is_zero(), m.rank() == n);
    }

    #[test]
    fn rational_reciprocal_round_trip(a in nonzero_big(), b in nonzero_big()) {
        let x = Scalar::Rational(BigRational::new(a.clone(), b.clone()));
        let y = Scalar::Rational(BigRational::new(b, a));
        prop_assert!((&x * &y).is_one());
        prop_assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn euler_identity(seed in any::<u64>(), nvars in 1usize..5, degree in 1u32..5) {
        let mut g = rng(seed);
        let field = domain(seed);
        let h = random_form(&mut g, field, nvars, degree);
        let expected = match field {
            Field::Prime(p) if (degree as u64).is_multiple_of(p) => EulerVerdict::Inapplicable,
            _ => EulerVerdict::Holds,
        };
        prop_assert_eq!(h.euler_check().unwrap(), expected);
    }

    #[test]
    fn parser_round_trip(seed in any::<u64>(), nvars in 1usize..5, degree in 0u32..4) {
        let mut g = rng(seed);
        let field = domain(seed);
        let h = random_form(&mut g, field, nvars, degree);
        prop_assume!(!h.is_zero());
        let text = h.to_string();
        prop_assert_eq!(MultiPoly::parse(&text, nvars, field).unwrap(), h);
    }

    #[test]
    fn partials_commute(seed in any::<u64>(), i in 0usize..4, j in 0usize..4) {
        let mut g = rng(seed);
        let h = random_form(&mut g, domain(seed), 4, 3);
        let a = h.partial(i).unwrap().partial(j).unwrap();
        let b = h.partial(j).unwrap().partial(i).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn eval_of_linear_change(seed in any::<u64>()) {
        let mut g = rng(seed);
        let field = domain(seed);
        let h = random_form(&mut g, field, 3, 3);
        let t = random_invertible(&mut g, field, 3);
        let v: Vec<Scalar> = (0..3).map(|_| scalar(&mut g, field, 7)).collect();
        let lhs = h.linear_change(&t).unwrap().eval(&v).unwrap();
        let rhs = h.eval(&t.mul_vec(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dehomogenize_matches_scaled_eval(seed in any::<u64>(), chart in 0usize..3, degree in 1u32..4) {
        let mut g = rng(seed);
        let field = domain(seed);
        let h = random_form(&mut g, field, 3, degree);
        let coords: Vec<Scalar> = (0..3).map(|_| scalar(&mut g, field, 7)).collect();
        prop_assume!(!coords[chart].is_zero());
        let xi = coords[chart].clone();
        let affine: Vec<Scalar> = coords
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != chart)
            .map(|(_, c)| c.checked_div(&xi).unwrap())
            .collect();
        let lhs = h.dehomogenize(chart).unwrap().eval(&affine).unwrap();
        let rhs = h.eval(&coords).unwrap().checked_div(&xi.pow(degree)).unwrap();
        prop_assert_eq!(lhs, rhs);
        // and back again
        prop_assert_eq!(h.dehomogenize(chart).unwrap().homogenize(chart, degree).unwrap(), h);
    }

    #[test]
    fn quadric_det_congruence(seed in any::<u64>()) {
        let mut g = rng(seed);
        let field = fp(101);
        let h = random_form(&mut g, field, 4, 2);
        prop_assume!(!h.is_zero());
        let t = random_invertible(&mut g, field, 4);
        let before = quadric_matrix(&h).unwrap().det().unwrap();
        let after = quadric_matrix(&h.linear_change(&t).unwrap()).unwrap().det().unwrap();
        let dt = t.det().unwrap();
        prop_assert_eq!(after, &(&dt * &dt) * &before);
    }

    #[test]
    fn gradient_is_a_times_x(seed in any::<u64>(), nvars in 1usize..5) {
        let mut g = rng(seed);
        let field = domain(seed);
        let h = random_form(&mut g, field, nvars, 2);
        prop_assume!(!h.is_zero());
        let a = quadric_matrix(&h).unwrap();
        prop_assert!(a.is_symmetric());
        let v: Vec<Scalar> = (0..nvars).map(|_| scalar(&mut g, field, 7)).collect();
        let grad: Vec<Scalar> = h.gradient().iter().map(|d| d.eval(&v).unwrap()).collect();
        prop_assert_eq!(grad, a.mul_vec(&v).unwrap());
    }

    #[test]
    fn projective_normalization(seed in any::<u64>()) {
        let mut g = rng(seed);
        let field = domain(seed);
        let p = random_point(&mut g, field, 3);
        let lambda = loop {
            let l = scalar(&mut g, field, 9);
            if !l.is_zero() {
                break l;
            }
        };
        let scaled = ProjPoint::new(p.coords().iter().map(|c| c * &lambda).collect()).unwrap();
        prop_assert_eq!(&scaled, &p);
        prop_assert_eq!(ProjPoint::new(p.coords().to_vec()).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn vanishing_members_vanish_and_are_forms(seed in any::<u64>(), n in 1usize..4, a in 1u32..4) {
        let mut g = rng(seed);
        let field = domain(seed);
        let count = g.gen_range(0..=n + 1);
        let cfg = general_points(&mut g, field, n, count);
        let l = LinearSystem::vanishing(&cfg, a).unwrap();
        for h in l.basis() {
            prop_assert_eq!(h.homogeneous_degree(), Homogeneity::Homogeneous(a));
            prop_assert_ne!(h.euler_check().unwrap(), EulerVerdict::Fails);
        }
        if !l.basis().is_empty() {
            let h = l.random_member(seed).unwrap();
            prop_assert!(!h.is_zero());
            for p in cfg.points() {
                prop_assert!(h.eval(p.coords()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn general_conditions_are_independent(seed in any::<u64>(), n in 1usize..5, a in 2u32..4) {
        let mut g = rng(seed);
        let count = g.gen_range(1..=n + 1);
        let cfg = general_points(&mut g, q(), n, count);
        let l = LinearSystem::vanishing(&cfg, a).unwrap();
        prop_assert_eq!(l.condition_rank(), count);
    }

    #[test]
    fn normalized_coordinates_send_p0_to_e0(seed in any::<u64>(), n in 1usize..5) {
        let mut g = rng(seed);
        let field = domain(seed);
        let count = g.gen_range(1..=n + 1);
        let cfg = general_points(&mut g, field, n, count);
        let t = cfg.normalize_coordinates().unwrap();
        prop_assert!(!t.det().unwrap().is_zero());
        let moved = cfg.transform(&t).unwrap();
        let mut e0 = vec![field.zero(); n + 1];
        e0[0] = field.one();
        prop_assert_eq!(moved.points()[0].coords(), &e0[..]);
        for p in moved.points() {
            prop_assert!(!p.coords()[0].is_zero());
        }
    }

    #[test]
    fn coordinate_change_equivariance(seed in any::<u64>()) {
        let mut g = rng(seed);
        let s = random_invertible(&mut g, q(), 4);
        let count = g.gen_range(1..=4);
        let cfg = general_points(&mut g, q(), 3, count);
        let moved = cfg.transform(&s).unwrap();
        prop_assert_eq!(cfg.general_position().unwrap(), moved.general_position().unwrap());
        let direct = LinearSystem::vanishing(&moved, 2).unwrap();
        let carried = LinearSystem::vanishing(&cfg, 2).unwrap().moved_by(&s).unwrap();
        prop_assert!(direct.same_span(&carried));

        let x = quadric(q());
        let l = LinearSystem::vanishing(&quadric_base_points(q()), 2).unwrap();
        let pt = quadric_point(&mut g, q());
        let spt = pt.transform(&s).unwrap();
        prop_assert_eq!(
            xi_rank(&l, &x, &pt).unwrap(),
            xi_rank(&l.moved_by(&s).unwrap(), &x.moved_by(&s).unwrap(), &spt).unwrap()
        );
    }

    #[test]
    fn jet_rank_is_chart_independent(seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = quadric(q());
        let l = LinearSystem::vanishing(&quadric_base_points(q()), 2).unwrap();
        let pt = quadric_point(&mut g, q());
        let ranks: Vec<usize> = (0..4)
            .filter(|&i| !pt.coords()[i].is_zero())
            .map(|i| xi_matrix_in_chart(&l, &x, &pt, i).unwrap().rank())
            .collect();
        prop_assert!(ranks.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn projective_space_margin(seed in any::<u64>(), n in 2usize..4, a in 2u32..4) {
        let mut g = rng(seed);
        let count = g.gen_range(0..=n + 1);
        let cfg = general_points(&mut g, q(), n, count);
        let l = LinearSystem::vanishing(&cfg, a).unwrap();
        let space = bertini::VarietySpec::projective_space(n, q());
        let mut sample: Vec<ProjPoint> = cfg.points().to_vec();
        sample.extend((0..5).map(|_| random_point(&mut g, q(), n)));
        let inc = bertini::jets::incidence_dimension(&l, &space, &sample).unwrap();
        prop_assert!(inc.margin >= 1, "margin {}", inc.margin);
        for p in cfg.points() {
            let fiber = fiber_dimension(&l, &space, p).unwrap();
            prop_assert_eq!(fiber, l.vector_dim() as i64 - 1 - n as i64);
        }
    }
}

#[test]
fn plane_quadrics_over_f5_agree_with_bruteforce() {
    // spot check with a fixed seed; the exhaustive sweep lives in the
    // acceptance suite
    let mut g = rng(5);
    for _ in 0..200 {
        let h = random_form(&mut g, fp(5), 3, 2);
        if h.is_zero() {
            continue;
        }
        let det_zero = quadric_matrix(&h).unwrap().det().unwrap().is_zero();
        assert_eq!(det_zero, !singular_points_bruteforce(&h, 5).unwrap().is_empty(), "{h}");
    }
}

#[test]
fn identity_change_is_noop() {
    let mut g = rng(1);
    let h = random_form(&mut g, q(), 4, 3);
    assert_eq!(h.linear_change(&Matrix::identity(q(), 4)).unwrap(), h);
}

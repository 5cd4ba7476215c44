use proptest::prelude::*;

use brank_core::abpdec::{mv_coefficients, AffineMatrixPoly};
use brank_core::certify::{mu, FloatSymMatrix};
use brank_core::exactla::{psd_split, signature_exact, signature_lower_bound, ExactMatrix};
use brank_core::permhess::hessian;
use brank_core::polyring::{monomial_index_set, monomial_split, Point, Polynomial};
use brank_core::rational::{binomial_usize, frac, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| frac(n, d))
}

fn polynomial(num_vars: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, num_vars), rational()), 0..6).prop_map(move |terms| {
        let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg);
        Polynomial::from_terms(num_vars, terms).unwrap()
    })
}

fn point(num_vars: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(rational(), num_vars).prop_map(Point::new)
}

fn square(n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(rational(), n * n).prop_map(move |v| ExactMatrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
}

fn symmetric(n: usize) -> impl Strategy<Value = ExactMatrix> {
    square(n).prop_map(|m| &m + &m.transpose())
}

/// Unit upper triangular, hence invertible.
fn unit_triangular(n: usize) -> impl Strategy<Value = ExactMatrix> {
    square(n).prop_map(move |m| {
        ExactMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => m[(i, j)].clone(),
            std::cmp::Ordering::Equal => frac(1, 1),
            std::cmp::Ordering::Greater => frac(0, 1),
        })
    })
}

fn float_symmetric(n: usize) -> impl Strategy<Value = FloatSymMatrix> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
        let rows: Vec<Vec<f64>> = v.chunks(n).map(<[f64]>::to_vec).collect();
        FloatSymMatrix::from_rows(&rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_roundtrip(p in polynomial(3, 3), x0 in point(3)) {
        let back = p.shift(&x0).unwrap().shift(&-&x0).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn shift_evaluates_at_offset(p in polynomial(2, 3), x0 in point(2), y in point(2)) {
        let sum = Point::new(x0.coords().iter().zip(y.coords()).map(|(a, b)| a + b).collect());
        prop_assert_eq!(p.shift(&x0).unwrap().eval(&y).unwrap(), p.eval(&sum).unwrap());
    }

    #[test]
    fn homogeneous_parts_partition(p in polynomial(3, 4)) {
        let total = (0..=4).fold(Polynomial::zero(3), |acc, j| &acc + &p.homogeneous_part(j));
        prop_assert_eq!(total, p);
    }

    #[test]
    fn index_set_counts(n in 1usize..6, k in 0usize..5) {
        prop_assert_eq!(monomial_index_set(n, k).len(), binomial_usize(n + k - 1, k));
    }

    #[test]
    fn monomial_split_reexpands(p in polynomial(3, 4), m in 0usize..=4) {
        let h = p.homogeneous_part(4);
        let dec = monomial_split(&h, m).unwrap();
        prop_assert_eq!(dec.expand(), h);
        prop_assert!(dec.len() <= monomial_index_set(3, m).len());
    }

    #[test]
    fn signature_is_congruence_invariant(m in symmetric(4), p in unit_triangular(4)) {
        let congruent = &(&p.transpose() * &m) * &p;
        prop_assert_eq!(signature_exact(&congruent).unwrap(), signature_exact(&m).unwrap());
    }

    #[test]
    fn signature_counts_rank(m in symmetric(5)) {
        let s = signature_exact(&m).unwrap();
        prop_assert_eq!(s.n_plus + s.n_minus, m.rank());
        prop_assert_eq!(s.n_plus + s.n_minus + s.n_zero, 5);
    }

    #[test]
    fn signature_bound_below_rank(q in square(4)) {
        prop_assert!(signature_lower_bound(&q).unwrap() <= q.rank());
    }

    #[test]
    fn psd_split_is_exact(m in symmetric(4)) {
        let (plus, minus) = psd_split(&m).unwrap();
        prop_assert_eq!(&plus - &minus, m.clone());
        let s = signature_exact(&m).unwrap();
        prop_assert_eq!(signature_exact(&plus).unwrap().n_minus, 0);
        prop_assert_eq!(signature_exact(&minus).unwrap().n_minus, 0);
        prop_assert_eq!(plus.rank(), s.n_plus);
        prop_assert_eq!(minus.rank(), s.n_minus);
    }

    #[test]
    fn hessian_is_twice_quadratic_part(p in polynomial(3, 3), x0 in point(3)) {
        let h = hessian(&p, &x0).unwrap();
        let x: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(3, i)).collect();
        let mut form = Polynomial::zero(3);
        for i in 0..3 {
            for j in 0..3 {
                form = &form + &(&x[i] * &x[j]).scale(&h[(i, j)]);
            }
        }
        let quad = p.shift(&x0).unwrap().homogeneous_part(2);
        prop_assert_eq!(form, quad.scale(&frac(2, 1)));
    }

    #[test]
    fn mv_top_coefficient_is_det(c in prop::collection::vec(square(3), 2)) {
        let a = AffineMatrixPoly::linear(3, c).unwrap();
        let mv = mv_coefficients(&a, &[3]).unwrap();
        prop_assert_eq!(&mv.coefficients[&3], &a.det());
    }

    #[test]
    fn mu_scale_covariant(y in float_symmetric(6), c in 0.1f64..10.0, l in 1usize..=6) {
        let lhs = mu(&y.scale(c), l).unwrap();
        let rhs = c * mu(&y, l).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * c.max(1.0) * 6.0);
    }

    #[test]
    fn mu_permutation_invariant(y in float_symmetric(5), perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(), l in 1usize..=5) {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| y.get(perm[i], perm[j])).collect()).collect();
        let permuted = FloatSymMatrix::from_rows(&rows).unwrap();
        prop_assert!((mu(&permuted, l).unwrap() - mu(&y, l).unwrap()).abs() <= 1e-9 * 5.0);
    }

    #[test]
    fn mu_of_all_is_trace(y in float_symmetric(7)) {
        prop_assert!((mu(&y, 7).unwrap() - y.trace()).abs() <= 1e-10);
    }
}

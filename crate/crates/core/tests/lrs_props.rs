use lds_core::kernel::{rat, Matrix, MultiPoly, Polynomial, Rational};
use lds_core::lrs::{lift, lrs_of_polynomial, minimal, Lrs};
use lds_core::orbit::Lds;
use proptest::prelude::*;

fn small_int() -> impl Strategy<Value = i64> {
    -4i64..=4
}

fn lrs(max_order: usize) -> impl Strategy<Value = Lrs> {
    (1..=max_order).prop_flat_map(|d| {
        (
            prop::collection::vec(small_int(), d),
            prop::collection::vec(small_int(), d),
        )
            .prop_filter_map("last coefficient nonzero", |(c, u)| {
                (*c.last().unwrap() != 0).then(|| Lrs::from_i64(&c, &u))
            })
    })
}

fn lds(max_dim: usize) -> impl Strategy<Value = Lds> {
    (1..=max_dim).prop_flat_map(|d| {
        (
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), d),
            prop::collection::vec(-3i64..=3, d),
        )
            .prop_map(|(rows, x)| {
                let rows: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                Lds::from_i64(&rows, &x)
            })
    })
}

fn coefficients_of(char_poly: &Polynomial) -> Vec<Rational> {
    let d = char_poly.deg();
    (1..=d).map(|i| -char_poly.coeff(d - i)).collect()
}

fn quadratic(dim: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u32..=2, 0usize..dim, 0usize..dim, -3i64..=3), 1..4).prop_map(
        move |terms| {
            terms
                .into_iter()
                .fold(MultiPoly::zero(dim), |acc, (deg, i, j, c)| {
                    let m = match deg {
                        0 => MultiPoly::constant(dim, rat(1)),
                        1 => MultiPoly::var(dim, i),
                        _ => MultiPoly::var(dim, i).mul(&MultiPoly::var(dim, j)),
                    };
                    acc.add(&m.scale(&rat(c)))
                })
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn powering_matches_iteration(s in lrs(4), n in 0u64..=200) {
        prop_assert_eq!(s.term_by_powering(n), s.term_by_iteration(n));
        prop_assert_eq!(s.terms(n as usize + 1)[n as usize].clone(), s.term(n));
    }

    #[test]
    fn minimal_removes_planted_factor(t in lrs(3), c in prop::sample::select(vec![-2i64, -1, 1, 2, 3])) {
        let padded = &t.char_poly() * &Polynomial::linear_root(rat(c));
        let s = Lrs::new(coefficients_of(&padded), t.terms(t.order() + 1)).unwrap();
        let m = minimal(&s);
        prop_assert!(m.order() <= t.order());
        let d = s.order();
        prop_assert_eq!(m.terms(4 * d), s.terms(4 * d));
        prop_assert_eq!(s.terms(4 * d), t.terms(4 * d));
    }

    #[test]
    fn lift_commutes_with_the_system(
        sys in lds(3),
        points in prop::collection::vec(prop::collection::vec((-9i64..=9, 1i64..=5), 3), 100),
    ) {
        let lifted = lift(&sys, 2).unwrap();
        for p in points {
            let z: Vec<Rational> = p.iter().take(sys.dim()).map(|&(n, d)| Rational::new(n.into(), d.into())).collect();
            let lhs = lifted.matrix.mul_vec(&lifted.monomial_vector(&z).unwrap()).unwrap();
            let rhs = lifted.monomial_vector(&sys.step(&z)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn polynomial_along_orbit((sys, q) in lds(3).prop_flat_map(|s| { let d = s.dim(); (Just(s), quadratic(d)) })) {
        let s = lrs_of_polynomial(&sys, &q).unwrap();
        for (n, x) in sys.orbit().take(51).enumerate() {
            prop_assert_eq!(s.term(n as u64), q.eval(&x).unwrap(), "n = {}", n);
        }
    }
}

#[test]
fn lifted_matrix_is_square_over_monomials() {
    let sys = Lds::new(Matrix::from_i64(&[&[1, 1], &[0, 1]]), vec![rat(1), rat(2)]).unwrap();
    let lifted = lift(&sys, 2).unwrap();
    assert_eq!(lifted.dim(), 6);
    assert_eq!(lifted.matrix.rows(), lifted.dim());
}

use proptest::prelude::*;
use skeinlab_core::scalars::{part0, part1, q, qi, ring_mul, FreeElement, RingMode, ScalarSeries, Q};
use skeinlab_core::{Error, Mat};

fn mode_strategy() -> impl Strategy<Value = RingMode> {
    prop_oneof![Just(RingMode::Classical), Just(RingMode::Epsilon), (1u8..=8).prop_map(RingMode::Hbar)]
}

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn series(mode: RingMode) -> impl Strategy<Value = ScalarSeries> {
    prop::collection::vec(rational(), mode.order()).prop_map(move |c| ScalarSeries::new(mode, c))
}

fn triple() -> impl Strategy<Value = (ScalarSeries, ScalarSeries, ScalarSeries)> {
    mode_strategy().prop_flat_map(|m| (series(m), series(m), series(m)))
}

fn hbar(n: &[i64]) -> ScalarSeries {
    ScalarSeries::new(RingMode::Hbar(3), n.iter().map(|&x| qi(x)).collect())
}

#[test]
fn truncated_products() {
    assert_eq!(ring_mul(&hbar(&[1, 1]), &hbar(&[1, -1])).unwrap(), hbar(&[1, 0, -1]));
    let e = ScalarSeries::param(RingMode::Epsilon);
    assert!(ring_mul(&e, &e).unwrap().is_zero());
    let ex = ScalarSeries::new(RingMode::Hbar(3), vec![qi(1), qi(1), q(1, 2)]);
    assert_eq!(ring_mul(&ex, &ex).unwrap(), hbar(&[1, 2, 2]));
}

#[test]
fn mode_mismatch_is_an_error() {
    let a = ScalarSeries::one(RingMode::Epsilon);
    let b = ScalarSeries::one(RingMode::Hbar(2));
    assert!(matches!(ring_mul(&a, &b), Err(Error::Mode(_))));
}

#[test]
fn projections() {
    let m = RingMode::Epsilon;
    let v = FreeElement::new(m, vec![ScalarSeries::new(m, vec![qi(3), qi(5)])]).unwrap();
    assert_eq!(part0(&v).entries()[0].part0(), qi(3));
    assert!(matches!(part1(&v), Err(Error::Part1Domain)));
    let w = FreeElement::new(m, vec![ScalarSeries::new(m, vec![qi(0), qi(7)])]).unwrap();
    assert_eq!(part1(&w).unwrap().entries()[0].part0(), qi(7));
    assert_eq!(hbar(&[2, 1, 4]).part0(), qi(2));
    assert_eq!(hbar(&[0, 2, 3]).part1().unwrap(), qi(2));
    assert_eq!(ScalarSeries::zero(RingMode::Hbar(3)).part1().unwrap(), qi(0));
}

#[test]
fn json_round_trip() {
    let s = ScalarSeries::new(RingMode::Hbar(3), vec![q(1, 2), qi(-3), q(5, 7)]);
    let j = serde_json::to_value(&s).unwrap();
    assert_eq!(j, serde_json::json!({"mode": "hbar", "order": 3, "coeffs": ["1/2", "-3", "5/7"]}));
    let back: ScalarSeries = serde_json::from_value(j).unwrap();
    assert_eq!(back, s);
}

#[test]
fn conversions_are_homomorphisms() {
    let a = hbar(&[1, 2, 3]);
    let b = hbar(&[4, -1, 2]);
    let ab = ring_mul(&a, &b).unwrap();
    let to_eps = |x: &ScalarSeries| x.convert(RingMode::Epsilon).unwrap();
    assert_eq!(to_eps(&ab), ring_mul(&to_eps(&a), &to_eps(&b)).unwrap());
    assert!(a.convert(RingMode::Hbar(5)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        let m = a.mode();
        prop_assert_eq!(ring_mul(&a, &b).unwrap(), ring_mul(&b, &a).unwrap());
        prop_assert_eq!(ring_mul(&ring_mul(&a, &b).unwrap(), &c).unwrap(), ring_mul(&a, &ring_mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(
            ring_mul(&a, &b.add(&c).unwrap()).unwrap(),
            ring_mul(&a, &b).unwrap().add(&ring_mul(&a, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(ring_mul(&a, &ScalarSeries::one(m)).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn part1_of_param_multiple(v in mode_strategy().prop_filter("deformed", |m| m.order() >= 2)
        .prop_flat_map(|m| prop::collection::vec(series(m), 1..5))) {
        let m = v[0].mode();
        let e = FreeElement::new(m, v).unwrap();
        prop_assert_eq!(part1(&e.times_param()).unwrap(), part0(&e));
    }

    #[test]
    fn inverse_of_units(a in mode_strategy().prop_flat_map(series)) {
        prop_assume!(!num_traits::Zero::is_zero(&a.part0()));
        let inv = a.inv().unwrap();
        prop_assert_eq!(ring_mul(&a, &inv).unwrap(), ScalarSeries::one(a.mode()));
    }

    #[test]
    fn first_order_product_rule(
        a in prop::collection::vec(-3i64..=3, 6),
        b in prop::collection::vec(-3i64..=3, 8),
        f1 in prop::collection::vec(-3i64..=3, 12),
        g1 in prop::collection::vec(-3i64..=3, 3),
    ) {
        // f0 has rank at most 2, so some g0 with g0 f0 = 0 exists.
        let c = RingMode::Classical;
        let f0 = Mat::from_ints(c, 3, 2, &a).mul(&Mat::from_ints(c, 2, 4, &b)).unwrap();
        let g0 = f0.transpose().kernel().unwrap().select_cols(&[0]).transpose();
        let lift = |m0: &Mat, m1: &Mat| {
            let mut out = m0.convert(RingMode::Epsilon).unwrap();
            for i in 0..m0.rows() {
                for j in 0..m0.cols() {
                    out.add_coeff(1, i, j, &m1.get(i, j).part0());
                }
            }
            out
        };
        let f1 = Mat::from_ints(c, 3, 4, &f1);
        let g1 = Mat::from_ints(c, 1, 3, &g1);
        let gf = lift(&g0, &g1).mul(&lift(&f0, &f1)).unwrap();
        let expect = g0.mul(&f1).unwrap().add(&g1.mul(&f0).unwrap()).unwrap();
        prop_assert_eq!(gf.part1().unwrap(), expect);
    }
}

use proptest::prelude::*;
use treealg::poly::Poly;
use treealg::rational::q;
use treealg::{OneForm, RatFunc};

const N: usize = 3;
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, N), -4i64..5), 0..4)
        .prop_map(|terms| Poly::from_terms(N, terms.into_iter().map(|(e, c)| (e, q(c)))))
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), prop::collection::vec(0u32..3, PAIRS.len()), any::<bool>()).prop_map(|(p, d, flip)| {
        let den = PAIRS.iter().zip(d).map(|(&(i, j), m)| if flip { ((j, i), m) } else { ((i, j), m) });
        RatFunc::new(p, den).unwrap()
    })
}

fn homogeneous() -> impl Strategy<Value = RatFunc> {
    ratfunc().prop_map(|f| f.homogeneous_components().into_values().next().unwrap_or_else(|| RatFunc::zero(N)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn canonical_form_is_unique(a in ratfunc(), k in 1u32..3, pair in 0usize..3) {
        // multiplying top and bottom by the same difference power changes nothing
        let (i, j) = PAIRS[pair];
        let num = a.numerator().mul_diff_pow(i, j, k);
        let den = a.denominator().iter().map(|(&p, &m)| (p, m)).chain([((i, j), k)]);
        prop_assert_eq!(RatFunc::new(num, den).unwrap(), a);
    }

    #[test]
    fn mixed_partials_commute(a in ratfunc()) {
        let xy = a.partial(0).unwrap().partial(1).unwrap();
        let yx = a.partial(1).unwrap().partial(0).unwrap();
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn leibniz_rule(a in ratfunc(), b in ratfunc()) {
        let lhs = (&a * &b).partial(2).unwrap();
        let rhs = &(&a.partial(2).unwrap() * &b) + &(&a * &b.partial(2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_on_homogeneous(f in homogeneous()) {
        if let Some(k) = f.degree() {
            prop_assert_eq!(OneForm::differential(&f).euler_contraction(), f.scale(&q(k)));
        }
    }

    #[test]
    fn components_sum_back(f in ratfunc()) {
        let sum = f.homogeneous_components().values().fold(RatFunc::zero(N), |acc, g| &acc + g);
        prop_assert_eq!(sum, f);
    }
}

use proptest::prelude::*;

use thetacat::theta::{compose, hom_set, MonotoneMap, ThetaMorphism, ThetaShape};

fn shape_strategy(n: usize) -> impl Strategy<Value = ThetaShape> {
    // a positive prefix, the rest implicit zeros
    (0..=n, prop::collection::vec(1u32..=2, n)).prop_map(move |(len, e)| ThetaShape::new(n, e[..len].to_vec()).unwrap())
}

fn three_shapes() -> impl Strategy<Value = (ThetaShape, ThetaShape, ThetaShape, ThetaShape)> {
    (1usize..=3).prop_flat_map(|n| (shape_strategy(n), shape_strategy(n), shape_strategy(n), shape_strategy(n)))
}

fn pick(hom: &[ThetaMorphism], i: usize) -> Option<&ThetaMorphism> {
    (!hom.is_empty()).then(|| &hom[i % hom.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_is_associative_and_unital((a, b, c, d) in three_shapes(), i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let (ab, bc, cd) = (hom_set(&a, &b).unwrap(), hom_set(&b, &c).unwrap(), hom_set(&c, &d).unwrap());
        let (Some(f), Some(g), Some(h)) = (pick(&ab, i), pick(&bc, j), pick(&cd, k)) else {
            return Ok(());
        };
        // diagrammatic order: compose(first, second)
        let left = compose(&compose(f, g).unwrap(), h).unwrap();
        let right = compose(f, &compose(g, h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&compose(&ThetaMorphism::identity(&a), f).unwrap(), f);
        prop_assert_eq!(&compose(f, &ThetaMorphism::identity(&b)).unwrap(), f);
    }

    #[test]
    fn canonical_forms_are_fixed_points((a, b, _, _) in three_shapes()) {
        for f in hom_set(&a, &b).unwrap() {
            let again = ThetaMorphism::canonicalize(&a, &b, &f.padded()).unwrap();
            prop_assert_eq!(&again, &f);
            let rebuilt = ThetaMorphism::from_components(a.clone(), b.clone(), f.components().to_vec()).unwrap();
            prop_assert_eq!(rebuilt, f);
        }
    }

    #[test]
    fn hom_sets_have_no_duplicates((a, b, _, _) in three_shapes()) {
        let hom = hom_set(&a, &b).unwrap();
        let mut codes: Vec<Vec<u32>> = hom.iter().map(ThetaMorphism::encoding).collect();
        codes.sort();
        codes.dedup();
        prop_assert_eq!(codes.len(), hom.len());
    }

    #[test]
    fn monotone_maps_compose(m in 0u32..4, k in 0u32..4, l in 0u32..4, i in 0usize..100, j in 0usize..100) {
        let first = MonotoneMap::all(m, k);
        let second = MonotoneMap::all(k, l);
        let (f, g) = (&first[i % first.len()], &second[j % second.len()]);
        let h = f.then(g);
        for x in 0..=m {
            prop_assert_eq!(h.apply(x), g.apply(f.apply(x)));
        }
    }
}

#[test]
fn simplex_hom_counts() {
    // |Hom((a),(b))| is the number of monotone maps [a] -> [b]
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    for a in 0..=3u32 {
        for b in 0..=3u32 {
            let s = |m: u32| ThetaShape::new(1, if m == 0 { vec![] } else { vec![m] }).unwrap();
            let count = hom_set(&s(a), &s(b)).unwrap().len() as u64;
            assert_eq!(count, binom(u64::from(a + b + 1), u64::from(a + 1)), "({a}) -> ({b})");
        }
    }
}

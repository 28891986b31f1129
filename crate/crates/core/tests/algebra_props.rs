//! Property tests for the cycle algebra and correspondences on random sums of
//! basis tuples.

use proptest::prelude::*;
use proptest::sample::subsequence;
use quadric_mdt::chow::{all_basis_elements, mul, steenrod, BasisElement, Cycle};
use quadric_mdt::corr::{compose, derivative, diagonal_class, reduce_f, reduce_g, transpose, Correspondence};
use quadric_mdt::profile::{pattern_enumerate, I1Rules, QuadricProfile};

fn any_profile(max_r: usize) -> impl Strategy<Value = QuadricProfile> {
    (1..=max_r, 0usize..5).prop_flat_map(|(r, s)| {
        let patterns = pattern_enumerate(r, s, &I1Rules::base());
        proptest::sample::select(patterns)
            .prop_map(move |pat| QuadricProfile::new(2 * r + s, r, s, pat).expect("enumerated pattern"))
    })
}

fn sum_on(context: Vec<QuadricProfile>) -> impl Strategy<Value = Cycle> {
    let basis = all_basis_elements(&context);
    let n = basis.len();
    subsequence(basis, 0..=n.min(6))
        .prop_map(move |elems| Cycle::from_elements(context.clone(), elems).expect("basis tuples are in range"))
}

fn cycles_on_x(k: usize) -> impl Strategy<Value = (QuadricProfile, Vec<Cycle>)> {
    any_profile(6).prop_flat_map(move |p| {
        let ctx = vec![p.clone()];
        (Just(p), proptest::collection::vec(sum_on(ctx), k))
    })
}

fn corrs_on_square(k: usize) -> impl Strategy<Value = (QuadricProfile, Vec<Correspondence>)> {
    any_profile(5).prop_flat_map(move |p| {
        let ctx = vec![p.clone(), p.clone()];
        let fs = proptest::collection::vec(
            sum_on(ctx).prop_map(|c| Correspondence::on_square(c).expect("square context")),
            k,
        );
        (Just(p), fs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((p, c) in cycles_on_x(3)) {
        let (x, y, z) = (&c[0], &c[1], &c[2]);
        let one = Cycle::one(vec![p]);
        prop_assert_eq!(mul(&one, x).unwrap(), x.clone());
        prop_assert_eq!(mul(x, y).unwrap(), mul(y, x).unwrap());
        prop_assert_eq!(mul(&mul(x, y).unwrap(), z).unwrap(), mul(x, &mul(y, z).unwrap()).unwrap());
        let left = mul(x, &y.add(z).unwrap()).unwrap();
        let right = mul(x, y).unwrap().add(&mul(x, z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(x.add(x).unwrap().is_zero());
    }

    #[test]
    fn steenrod_cartan_and_identity((p, c) in cycles_on_x(2)) {
        let (x, y) = (&c[0], &c[1]);
        prop_assert_eq!(&steenrod(0, x), x);
        let xy = mul(x, y).unwrap();
        for j in 0..=2 * p.r() {
            let mut rhs = Cycle::zero(vec![p.clone()]);
            for i in 0..=j {
                rhs = rhs.add(&mul(&steenrod(i, x), &steenrod(j - i, y)).unwrap()).unwrap();
            }
            prop_assert_eq!(steenrod(j, &xy), rhs, "j = {}", j);
        }
    }

    #[test]
    fn composition_is_associative_with_diagonal_unit((p, fs) in corrs_on_square(3)) {
        let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
        let delta = diagonal_class(&p);
        prop_assert_eq!(&compose(&delta, f).unwrap(), f);
        prop_assert_eq!(&compose(f, &delta).unwrap(), f);
        let left = compose(&compose(f, g).unwrap(), h).unwrap();
        let right = compose(f, &compose(g, h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn transpose_reverses_composition((_p, fs) in corrs_on_square(2)) {
        let (f, g) = (&fs[0], &fs[1]);
        prop_assert_eq!(&transpose(&transpose(f)), f);
        let lhs = transpose(&compose(f, g).unwrap());
        let rhs = compose(&transpose(g), &transpose(f)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivatives_factor(p in any_profile(5), k1 in 0usize..6, k2 in 0usize..6, pick in any::<prop::sample::Index>()) {
        let ctx = vec![p.clone(), p.clone()];
        let homogeneous: Vec<BasisElement> = all_basis_elements(&ctx)
            .into_iter()
            .filter(|e| e.dimension(&ctx) >= p.quadric_dim() + k1 + k2)
            .collect();
        prop_assume!(!homogeneous.is_empty());
        let dim = pick.get(&homogeneous).dimension(&ctx);
        let elems: Vec<BasisElement> = homogeneous.into_iter().filter(|e| e.dimension(&ctx) == dim).collect();
        let f = Correspondence::on_square(Cycle::from_elements(ctx, elems).unwrap()).unwrap();
        let direct = derivative(k1, k2, &f).unwrap();
        let split = derivative(k1, 0, &derivative(0, k2, &f).unwrap()).unwrap();
        prop_assert_eq!(direct, split);
    }

    #[test]
    fn reductions_round_trip(p in any_profile(6), arity in 1usize..3, bits in any::<u64>()) {
        for t in 0..p.height() {
            let kernel = p.kernel(t).unwrap();
            let ctx = vec![kernel; arity];
            let chosen: Vec<BasisElement> = all_basis_elements(&ctx)
                .into_iter()
                .enumerate()
                .filter(|(k, _)| (bits >> (k % 64)) & 1 == 1)
                .map(|(_, e)| e)
                .collect();
            let c = Cycle::from_elements(ctx, chosen).unwrap();
            let back = reduce_f(&p, t, &reduce_g(&p, t, &c).unwrap()).unwrap();
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn text_and_json_round_trip((p, c) in corrs_on_square(1)) {
        let f = &c[0];
        let ctx = vec![p.clone(), p.clone()];
        let parsed = Cycle::parse(&f.cycle().to_text(), ctx).unwrap();
        prop_assert_eq!(&parsed, f.cycle());
        let json = serde_json::to_string(f).unwrap();
        let back: Correspondence = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, f);
    }
}

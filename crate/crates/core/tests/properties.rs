mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ascurves::families::{Family, FamilySpec};
use ascurves::nfalg::{family_closure, NfCtx};
use ascurves::zeta::{count_series, weil_bound_holds, zeta_model};
use ascurves::{FieldCtx, RatFun};
use common::*;

fn field(p: u32, k: u32) -> FieldCtx {
    FieldCtx::build_ambient(p, &[k]).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn field_axioms(p_idx in 0usize..4, a in 0u32..1 << 12, b in 0u32..1 << 12, c in 0u32..1 << 12) {
        let (p, k) = [(2, 4), (3, 3), (5, 2), (7, 2)][p_idx];
        let ctx = field(p, k);
        let e = |v: u32| ctx.from_code(v % ctx.size());
        let (a, b, c) = (e(a), e(b), e(c));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a)), ctx.one());
        }
        prop_assert_eq!(ctx.frob(ctx.add(a, b), 1), ctx.add(ctx.frob(a, 1), ctx.frob(b, 1)));
    }

    #[test]
    fn as_reduce_leaves_order_prime_to_p(seed in any::<u64>(), p_idx in 0usize..3) {
        let (p, k) = [(2, 3), (3, 2), (5, 1)][p_idx];
        let ctx = field(p, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_ratfun(&ctx, 6, &mut rng);
        let place = random_place(&ctx, &mut rng);
        prop_assert!(as_reduce_postcondition(&f, place));
        // p-th powers reduce completely
        let g = &f.pow(p as i64) - &f;
        prop_assert!(as_reduce_postcondition(&g, place));
    }

    #[test]
    fn principal_divisors_have_degree_zero(seed in any::<u64>(), p_idx in 0usize..3) {
        let (p, k) = [(2, 4), (3, 2), (7, 1)][p_idx];
        let ctx = field(p, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_split_ratfun(&ctx, 6, &mut rng);
        prop_assert!(divisor_has_degree_zero(&f));
    }

    #[test]
    fn compose_is_associative(seed in any::<u64>()) {
        let ctx = field(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_ratfun(&ctx, 2, &mut rng);
        let g = random_ratfun(&ctx, 2, &mut rng);
        let h = random_ratfun(&ctx, 2, &mut rng);
        prop_assume!(!g.is_constant() && !h.is_constant());
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        prop_assert_eq!(f.compose(&RatFun::x(&ctx)), f);
    }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn nf_ring_axioms(seed in any::<u64>(), which in 0usize..3) {
        let (fam, q) = [(Family::Zieve, 3), (Family::Singer, 3), (Family::ZieveExtended, 3)][which];
        let ctx = fam.field(q).unwrap();
        let fs = FamilySpec::build(&ctx, fam, q).unwrap();
        let nf = NfCtx::new(&fs.spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_nf(&nf, 3, &mut rng), random_nf(&nf, 3, &mut rng), random_nf(&nf, 3, &mut rng));
        prop_assert!(ring_axioms(&nf, &a, &b, &c));
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn substitute_respects_products(seed in any::<u64>(), idx in 0usize..1000) {
        let ctx = Family::Zieve.field(3).unwrap();
        let fs = FamilySpec::build(&ctx, Family::Zieve, 3).unwrap();
        let nf = NfCtx::new(&fs.spec).unwrap();
        let group = family_closure(&fs, &nf, None).unwrap();
        let m = &group.elements[idx % group.elements.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_nf(&nf, 3, &mut rng), random_nf(&nf, 3, &mut rng));
        prop_assert!(substitute_is_homomorphism(&nf, m, &a, &b));
    }

    #[test]
    fn invariants_ignore_eta_and_representatives(seed in any::<u64>(), which in 0usize..6) {
        let (fam, q) = [
            (Family::ArtinMumford, 3),
            (Family::Singer, 5),
            (Family::ConicMixed, 4),
            (Family::ConicOneNonrational, 3),
            (Family::Zieve, 4),
            (Family::ZieveExtended, 3),
        ][which];
        let ctx = fam.field(q).unwrap();
        let fs = FamilySpec::build(&ctx, fam, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(invariants_are_choice_free(&fs.spec, &mut rng));
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn two_point_conics_are_ordinary(seed in any::<u64>(), q_idx in 0usize..3) {
        let q = [3u64, 4, 5][q_idx];
        let ctx = Family::ArtinMumford.field(q).unwrap();
        let n = if q == 4 { 2 } else { 1 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_two_point_conic(&ctx, n, &mut rng);
        prop_assert!(two_point_conic_is_ordinary(&ctx, n, &c));
    }
}

#[test]
fn closure_is_independent_of_generator_order() {
    let ctx = Family::Singer.field(3).unwrap();
    let fs = FamilySpec::build(&ctx, Family::Singer, 3).unwrap();
    let nf = NfCtx::new(&fs.spec).unwrap();
    let gens = ascurves::nfalg::family_generators(&fs, &nf).unwrap();
    let a = ascurves::nfalg::group_closure(&nf, &gens.translations, &gens.others, 1000);
    let mut others = gens.others.clone();
    others.reverse();
    let mut tr = gens.translations.clone();
    tr.reverse();
    let b = ascurves::nfalg::group_closure(&nf, &others, &tr, 1000);
    assert_eq!(a.report.order, b.report.order);
    let keys = |c: &ascurves::nfalg::Closure<'_>| {
        let mut k: Vec<Vec<u32>> = c.elements.iter().map(|m| m.key(&nf)).collect();
        k.sort();
        k
    };
    assert_eq!(keys(&a), keys(&b));
}

#[test]
fn closure_elements_verify_and_have_inverses() {
    let ctx = Family::Zieve.field(2).unwrap();
    let fs = FamilySpec::build(&ctx, Family::Zieve, 2).unwrap();
    let nf = NfCtx::new(&fs.spec).unwrap();
    let c = family_closure(&fs, &nf, None).unwrap();
    let order = c.report.order;
    let keys: std::collections::HashSet<Vec<u32>> = c.elements.iter().map(|m| m.key(&nf)).collect();
    for m in &c.elements {
        assert!(m.failing_layer(&nf).is_none());
        let k = m.order(&nf, order).expect("finite order");
        assert_eq!(order % k, 0);
        let inv = m.inverse(&nf, order).unwrap();
        assert!(keys.contains(&inv.key(&nf)));
    }
}

#[test]
fn weil_bound_on_count_series() {
    for (fam, q, m) in [
        (Family::Zieve, 2, 6),
        (Family::ArtinMumford, 3, 5),
        (Family::ConicMixed, 2, 4),
        (Family::ZieveModified, 3, 4),
        (Family::ZieveExtended, 3, 2),
    ] {
        let ctx = fam.field(q).unwrap();
        let fs = FamilySpec::build(&ctx, fam, q).unwrap();
        let spec = zeta_model(&fs).unwrap();
        let s = count_series(&spec, m).unwrap();
        assert!(weil_bound_holds(&s, fs.expected().0), "{fam} q={q}: {s:?}");
    }
}

#[test]
fn parallel_and_serial_counts_agree() {
    use ascurves::zeta::{count_field, CountModel};
    for (fam, q, m) in [
        (Family::Zieve, 2, 5),
        (Family::ConicMixed, 3, 3),
        (Family::ZieveExtended, 3, 1),
        (Family::Singer, 3, 2),
    ] {
        let ctx = fam.field(q).unwrap();
        let fs = FamilySpec::build(&ctx, fam, q).unwrap();
        let spec = zeta_model(&fs).unwrap();
        let big = count_field(&spec, m).unwrap();
        let model = CountModel::transport(&spec, &big).unwrap();
        assert_eq!(model.affine_count(), model.affine_count_serial(), "{fam} q={q} m={m}");
    }
}

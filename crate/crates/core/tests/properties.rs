use cyclofusion::algebra::{jm_j, jm_jtilde, AlgebraElement};
use cyclofusion::cyclo::{CycloScalar, Rational};
use cyclofusion::fusion::{inductive_evaluation, FusionInput};
use cyclofusion::group::GroupContext;
use cyclofusion::oracle::{check_eigenvalues, jm_idempotent};
use cyclofusion::tableaux::{enumerate_all_tableaux, f_constant, StandardMultiTableau};
use proptest::prelude::*;

type E = AlgebraElement<CycloScalar>;

fn small_case() -> impl Strategy<Value = (u32, usize)> {
    prop_oneof![
        (1u32..=1, 1usize..=4),
        (2u32..=2, 1usize..=3),
        (3u32..=3, 1usize..=2),
        (4u32..=4, 1usize..=2)
    ]
}

fn tableau_pair() -> impl Strategy<Value = (StandardMultiTableau, StandardMultiTableau)> {
    small_case().prop_flat_map(|(m, n)| {
        let all = enumerate_all_tableaux(m as usize, n);
        let k = all.len();
        (Just(all), 0..k, 0..k).prop_map(|(all, a, b)| (all[a].clone(), all[b].clone()))
    })
}

fn random_element(m: u32, n: usize) -> impl Strategy<Value = E> {
    let ctx = GroupContext::new(m, n).unwrap();
    let group = ctx.enumerate(10_000).unwrap();
    let len = group.len();
    prop::collection::vec((0..len, -3i64..=3, 0usize..m as usize), 0..6).prop_map(move |terms| {
        let mut out = E::zero(ctx);
        for (g, c, power) in terms {
            let zeta_pow = CycloScalar::zeta(m).pow(power as i64).unwrap();
            let coeff = zeta_pow.scale(&Rational::from_integer(c.into()));
            out = &out + &E::monomial(ctx, group[g].clone(), coeff).unwrap();
        }
        out
    })
}

fn fusion(t: &StandardMultiTableau) -> E {
    inductive_evaluation(&FusionInput::new(t, 10_000).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn idempotents_are_orthogonal_primitive_projections((t, u) in tableau_pair()) {
        let et = fusion(&t);
        let eu = fusion(&u);
        let prod = &et * &eu;
        if t == u {
            prop_assert_eq!(&prod, &et);
            prop_assert!(check_eigenvalues(&et, &t).all_pass());
        } else {
            prop_assert!(prod.is_zero());
        }
    }

    #[test]
    fn identity_coefficient_is_dimension_over_order((t, _) in tableau_pair()) {
        // trace of the regular representation: |G|·E(1) = d, and d = N!·f
        let e = fusion(&t);
        let ctx = e.ctx();
        let order = Rational::from_integer(ctx.order().unwrap().into());
        let n_fact: u64 = (1..=t.size() as u64).product();
        let d = f_constant(t.shape()) * Rational::from_integer(n_fact.into());
        let identity = e.coeff(&ctx.identity()).cloned().unwrap_or_else(|| CycloScalar::zero(ctx.m));
        prop_assert_eq!(identity, CycloScalar::from_rational(ctx.m, d / order));
    }

    #[test]
    fn prefix_idempotent_absorbs_extension((t, _) in tableau_pair()) {
        let ctx = GroupContext::new(t.m() as u32, t.size()).unwrap();
        let e = fusion(&t);
        let (u, _) = t.remove_last().unwrap();
        let eu = jm_idempotent(ctx, &u).unwrap();
        prop_assert_eq!(&(&eu * &e), &e);
        prop_assert_eq!(&(&e * &eu), &e);
    }

    #[test]
    fn algebra_is_associative(
        (x, y, z) in small_case().prop_flat_map(|(m, n)| (random_element(m, n), random_element(m, n), random_element(m, n)))
    ) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn jm_elements_commute_with_smaller_subgroup(
        x in small_case().prop_filter("N ≥ 2", |(_, n)| *n >= 2).prop_flat_map(|(m, n)| random_element(m, n - 1))
    ) {
        let small = x.ctx();
        let big = GroupContext::new(small.m, small.n + 1).unwrap();
        let x = x.embed(big).unwrap();
        let jt: E = jm_jtilde(big, big.n).unwrap();
        let j: E = jm_j(big, big.n).unwrap();
        prop_assert!(x.commutes_with(&jt));
        prop_assert!(x.commutes_with(&j));
    }
}

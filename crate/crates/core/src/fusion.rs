//! The fusion construction of the primitive idempotents E_T.
//!
//! Two routes are provided. [`consecutive_evaluation`] builds the full product
//! Φ with every spectral parameter `u_1..u_N` symbolic and specializes them one
//! at a time, left to right, on the assembled product. [`inductive_evaluation`]
//! builds E_T one label at a time and only ever handles the single variable
//! [`Var::U`], which keeps the coefficients small.

use crate::algebra::{baxterized_s, bj, t_of, AlgebraElement, Scalar};
use crate::cyclo::{CycloScalar, Rational};
use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::ratfun::{RatFun, Var};
use crate::tableaux::{f_constant, f_function, StandardMultiTableau};

/// A tableau together with the group algebra it lives in and its spectral data.
#[derive(Debug, Clone)]
pub struct FusionInput {
    ctx: GroupContext,
    tableau: StandardMultiTableau,
    contents: Vec<i64>,
    positions: Vec<CycloScalar>,
}

impl FusionInput {
    /// Uses the group G(m,1,N) with N the size of `tableau`.
    pub fn new(tableau: &StandardMultiTableau, limit: u64) -> Result<Self> {
        let ctx = GroupContext::new(tableau.m() as u32, tableau.size())?;
        Self::in_context(ctx, tableau, limit)
    }

    /// Works in a group with at least as many strands as `tableau` has nodes;
    /// E_T then lives in the image of the standard embedding.
    pub fn in_context(
        ctx: GroupContext,
        tableau: &StandardMultiTableau,
        limit: u64,
    ) -> Result<Self> {
        if ctx.m as usize != tableau.m() || ctx.n < tableau.size() {
            return Err(Error::ContextMismatch);
        }
        ctx.check_size(limit)?;
        Ok(FusionInput {
            ctx,
            tableau: tableau.clone(),
            contents: tableau.contents(),
            positions: tableau.positions(),
        })
    }

    pub fn ctx(&self) -> GroupContext {
        self.ctx
    }

    pub fn tableau(&self) -> &StandardMultiTableau {
        &self.tableau
    }

    pub fn contents(&self) -> &[i64] {
        &self.contents
    }

    pub fn positions(&self) -> &[CycloScalar] {
        &self.positions
    }

    fn content_scalar<S: Scalar>(&self, i: usize) -> S {
        S::from_cyclo(CycloScalar::from_integer(self.ctx.m, self.contents[i - 1]))
    }
}

fn s_of<S: Scalar>(ctx: GroupContext, i: usize) -> Result<AlgebraElement<S>> {
    AlgebraElement::from_group(ctx, ctx.generator_s(i)?)
}

fn check_phi_args<S>(ctx: GroupContext, k: usize, p: &[CycloScalar], us: &[S]) -> Result<()> {
    if k == 0 || k > ctx.n {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: ctx.n,
        });
    }
    if p.len() != k || us.len() + 1 != k {
        return Err(Error::InvalidParameter(format!(
            "φ_{k} takes {k} positions and {} spectral values",
            k - 1
        )));
    }
    Ok(())
}

/// `bs_{k−1}(p_k,p_{k−1},u,u_{k−1}) ··· bs_1(p_k,p_1,u,u_1)`, optionally followed
/// by `t(p_k)`, then `s_1 ··· s_{k−1}`.
fn phi_general<S: Scalar>(
    ctx: GroupContext,
    k: usize,
    p: &[CycloScalar],
    us: &[S],
    u: &S,
    with_t: bool,
) -> Result<AlgebraElement<S>> {
    check_phi_args(ctx, k, p, us)?;
    let pk = &p[k - 1];
    let mut out = AlgebraElement::one(ctx);
    for i in (1..k).rev() {
        out = out.checked_mul(&baxterized_s(ctx, i, pk, &p[i - 1], u, &us[i - 1])?)?;
    }
    if with_t {
        out = out.checked_mul(&t_of(ctx, pk)?)?;
    }
    for i in 1..k {
        out = out.checked_mul(&s_of(ctx, i)?)?;
    }
    Ok(out)
}

/// `φ_k(p_1..p_k, u_1..u_{k−1}, u)`. The positions are already roots of unity,
/// so every Kronecker delta is resolved on construction.
pub fn phi<S: Scalar>(
    ctx: GroupContext,
    k: usize,
    p: &[CycloScalar],
    us: &[S],
    u: &S,
) -> Result<AlgebraElement<S>> {
    phi_general(ctx, k, p, us, u, true)
}

/// `φ̃_k`: the same product as [`phi`] without the factor `t(p_k)`.
pub fn phi_tilde<S: Scalar>(
    ctx: GroupContext,
    k: usize,
    p: &[CycloScalar],
    us: &[S],
    u: &S,
) -> Result<AlgebraElement<S>> {
    phi_general(ctx, k, p, us, u, false)
}

fn spectral_vars(input: &FusionInput) -> Vec<RatFun> {
    (1..=input.tableau.size())
        .map(|i| RatFun::var(input.ctx.m, Var::spectral(i)))
        .collect()
}

/// `Φ = φ_N ··· φ_1` with the positions of T substituted and `u_1..u_N` free.
pub fn build_phi(input: &FusionInput) -> Result<AlgebraElement<RatFun>> {
    let us = spectral_vars(input);
    let mut out = AlgebraElement::one(input.ctx);
    for k in (1..=input.tableau.size()).rev() {
        let f = phi(
            input.ctx,
            k,
            &input.positions[..k],
            &us[..k - 1],
            &us[k - 1],
        )?;
        out = out.checked_mul(&f)?;
    }
    Ok(out)
}

/// `Φ = [φ̃_N ··· φ̃_1] · bj_1(p_1) ··· bj_N(p_N)`.
pub fn build_phi_tilde_form(input: &FusionInput) -> Result<AlgebraElement<RatFun>> {
    let us = spectral_vars(input);
    let n = input.tableau.size();
    let mut out = AlgebraElement::one(input.ctx);
    for k in (1..=n).rev() {
        let f = phi_tilde(
            input.ctx,
            k,
            &input.positions[..k],
            &us[..k - 1],
            &us[k - 1],
        )?;
        out = out.checked_mul(&f)?;
    }
    for k in 1..=n {
        out = out.checked_mul(&bj(input.ctx, k, &input.positions[k - 1])?)?;
    }
    Ok(out)
}

/// `f(shape) · Φ` specialized at `u_1 = c_1`, then `u_2 = c_2`, and so on.
pub fn consecutive_evaluation(input: &FusionInput) -> Result<AlgebraElement<CycloScalar>> {
    let mut cur = build_phi(input)?;
    for i in 1..=input.tableau.size() {
        cur = cur.substitute_scalars(Var::spectral(i), &input.content_scalar(i))?;
    }
    Ok(cur
        .to_cyclo()?
        .scale_rational(&f_constant(input.tableau.shape())))
}

/// One inductive step: `[F_{T,k}(u) · φ_k(p_1..p_k, c_1..c_{k−1}, u) · prev]` at `u = c_k`.
pub fn inductive_step(
    input: &FusionInput,
    k: usize,
    prev: &AlgebraElement<CycloScalar>,
) -> Result<AlgebraElement<CycloScalar>> {
    let m = input.ctx.m;
    let cs: Vec<RatFun> = (1..k).map(|i| input.content_scalar(i)).collect();
    let u = RatFun::var(m, Var::U);
    let f = f_function(&input.tableau, k)?;
    let step = phi(input.ctx, k, &input.positions[..k], &cs, &u)?
        .scale(&f)
        .checked_mul(&prev.lift())?;
    step.substitute_scalars(Var::U, &input.content_scalar(k))?
        .to_cyclo()
}

/// `E_0, E_1, …, E_N` where `E_k` is the idempotent of the prefix holding
/// labels `1..=k`, all in the context of `input`.
pub fn inductive_prefixes(input: &FusionInput) -> Result<Vec<AlgebraElement<CycloScalar>>> {
    let mut out = vec![AlgebraElement::one(input.ctx)];
    for k in 1..=input.tableau.size() {
        let next = inductive_step(input, k, out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// E_T by the univariate inductive route.
pub fn inductive_evaluation(input: &FusionInput) -> Result<AlgebraElement<CycloScalar>> {
    Ok(inductive_prefixes(input)?
        .pop()
        .expect("E_0 is always present"))
}

/// Product of the hook ratios `F_{T,k}(c_k)` over all labels; equals `f(shape)`.
pub fn telescoped_f(tableau: &StandardMultiTableau) -> Result<Rational> {
    let m = tableau.m() as u32;
    let mut acc = Rational::from_integer(1.into());
    for (k, c) in tableau.contents().into_iter().enumerate() {
        let v = f_function(tableau, k + 1)?
            .cancel_and_substitute(Var::U, &CycloScalar::from_integer(m, c))?
            .evaluate_constant()?;
        let q = v
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::InvalidParameter("hook ratio is not rational".into()))?;
        acc *= q;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::jm_j;
    use crate::cyclo::position_root;
    use crate::group::DEFAULT_SIZE_LIMIT;
    use crate::tableaux::{enumerate_all_tableaux, MultiNode};

    type E = AlgebraElement<CycloScalar>;

    fn ctx(m: u32, n: usize) -> GroupContext {
        GroupContext::new(m, n).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn input(rows: &[Vec<Vec<usize>>]) -> FusionInput {
        let t = StandardMultiTableau::from_rows(rows).unwrap();
        FusionInput::new(&t, DEFAULT_SIZE_LIMIT).unwrap()
    }

    fn s(c: GroupContext, i: usize) -> E {
        s_of(c, i).unwrap()
    }

    #[test]
    fn phi_small_cases() {
        let c = ctx(2, 3);
        let p = vec![CycloScalar::one(2), CycloScalar::from_integer(2, -1)];
        let u = RatFun::var(2, Var::U);
        let one: AlgebraElement<RatFun> = phi(c, 1, &p[..1], &[], &u).unwrap();
        assert_eq!(one, t_of(c, &p[0]).unwrap());
        // δ = 0 keeps only the plain transpositions
        let two = phi(c, 2, &p, &[RatFun::zero(2)], &u).unwrap();
        let expect = s(c, 1)
            .lift()
            .checked_mul(&t_of(c, &p[1]).unwrap())
            .unwrap();
        assert_eq!(two, expect.checked_mul(&s(c, 1).lift()).unwrap());
        assert_eq!(
            phi_tilde(c, 1, &p[..1], &[], &u).unwrap(),
            AlgebraElement::one(c)
        );
        assert!(phi(c, 2, &p, &[], &u).is_err());
        assert!(phi(c, 4, &p, &[], &u).is_err());
    }

    #[test]
    fn phi_m1_is_baxterized_symmetrizer() {
        let c = ctx(1, 2);
        let p = vec![CycloScalar::one(1); 2];
        let u1 = RatFun::var(1, Var::spectral(1));
        let u = RatFun::var(1, Var::spectral(2));
        let got = phi(c, 2, &p, std::slice::from_ref(&u1), &u).unwrap();
        let shift = (&u - &u1).reciprocal().unwrap();
        let s1 = s(c, 1).lift();
        let expect = (&s1 + &AlgebraElement::constant(c, shift))
            .checked_mul(&s1)
            .unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn phi_tilde_golden_third_factor() {
        let inp = input(&[vec![vec![1, 3]], vec![vec![2]]]);
        let c = inp.ctx();
        let zero = RatFun::zero(2);
        let u = RatFun::var(2, Var::U);
        let got = phi_tilde(c, 3, inp.positions(), &[zero.clone(), zero], &u).unwrap();
        let s1 = s(c, 1).lift();
        let s2 = s(c, 2).lift();
        let inv_u = AlgebraElement::constant(c, u.reciprocal().unwrap());
        let expect = s2.checked_mul(&(&s1 + &inv_u)).unwrap();
        let expect = expect.checked_mul(&s1).unwrap().checked_mul(&s2).unwrap();
        assert_eq!(got, expect);
        let two = phi_tilde(c, 2, &inp.positions()[..2], &[RatFun::zero(2)], &u).unwrap();
        assert_eq!(two, AlgebraElement::one(c));
    }

    #[test]
    fn build_phi_small() {
        let inp = input(&[vec![vec![1]], vec![]]);
        assert_eq!(
            build_phi(&inp).unwrap(),
            t_of(inp.ctx(), &CycloScalar::one(2)).unwrap()
        );
        let inp = input(&[vec![vec![1, 2]]]);
        let c = inp.ctx();
        let u1 = RatFun::var(1, Var::spectral(1));
        let u2 = RatFun::var(1, Var::spectral(2));
        let s1 = s(c, 1).lift();
        let shift = AlgebraElement::constant(c, (&u2 - &u1).reciprocal().unwrap());
        assert_eq!(
            build_phi(&inp).unwrap(),
            (&s1 + &shift).checked_mul(&s1).unwrap()
        );
    }

    #[test]
    fn two_forms_of_phi_agree() {
        for m in 1..=2 {
            for n in 1..=3 {
                for t in enumerate_all_tableaux(m, n) {
                    let inp = FusionInput::new(&t, DEFAULT_SIZE_LIMIT).unwrap();
                    assert_eq!(
                        build_phi(&inp).unwrap(),
                        build_phi_tilde_form(&inp).unwrap(),
                        "{t}"
                    );
                }
            }
        }
    }

    #[test]
    fn symmetric_group_rank_two() {
        let c = ctx(1, 2);
        let half = q(1, 2);
        let one = E::one(c);
        let s1 = s(c, 1);
        let sym = (&one + &s1).scale_rational(&half);
        let anti = (&one - &s1).scale_rational(&half);
        let row = input(&[vec![vec![1, 2]]]);
        let col = input(&[vec![vec![1], vec![2]]]);
        assert_eq!(consecutive_evaluation(&row).unwrap(), sym);
        assert_eq!(inductive_evaluation(&row).unwrap(), sym);
        assert_eq!(consecutive_evaluation(&col).unwrap(), anti);
        assert_eq!(inductive_evaluation(&col).unwrap(), anti);
    }

    #[test]
    fn first_inductive_step_is_projector() {
        for m in 1..=4u32 {
            for k in 1..=m as usize {
                let mut rows = vec![vec![]; m as usize];
                rows[k - 1] = vec![vec![1]];
                let inp = input(&rows);
                let got = inductive_evaluation(&inp).unwrap();
                assert_eq!(got, bj(inp.ctx(), 1, &position_root(m, k)).unwrap());
            }
        }
    }

    #[test]
    fn golden_example() {
        let inp = input(&[vec![vec![1, 3]], vec![vec![2]]]);
        let c = inp.ctx();
        let one = E::one(c);
        let (s1, s2) = (s(c, 1), s(c, 2));
        let j = |i| jm_j::<CycloScalar>(c, i).unwrap();
        let expect = s2
            .checked_mul(&(&one + &s1))
            .unwrap()
            .checked_mul(&s2)
            .unwrap();
        let expect = expect
            .checked_mul(&(&one + &j(1)))
            .unwrap()
            .checked_mul(&(&one - &j(2)))
            .unwrap()
            .checked_mul(&(&one + &j(3)))
            .unwrap()
            .scale_rational(&q(1, 16));
        assert_eq!(expect.len(), 16);
        assert!(expect
            .terms()
            .all(|(_, x)| x == &CycloScalar::from_rational(2, q(1, 16))
                || x == &CycloScalar::from_rational(2, q(-1, 16))));
        assert_eq!(consecutive_evaluation(&inp).unwrap(), expect);
        assert_eq!(inductive_evaluation(&inp).unwrap(), expect);
    }

    #[test]
    fn methods_agree_small() {
        for (m, n) in [(1, 3), (2, 2), (3, 2)] {
            for t in enumerate_all_tableaux(m, n) {
                let inp = FusionInput::new(&t, DEFAULT_SIZE_LIMIT).unwrap();
                let a = consecutive_evaluation(&inp).unwrap();
                let b = inductive_evaluation(&inp).unwrap();
                assert_eq!(a, b, "{t}");
                assert_eq!(&a * &a, a, "{t}");
            }
        }
    }

    #[test]
    fn telescoping_hook_ratios() {
        for t in enumerate_all_tableaux(2, 3) {
            assert_eq!(telescoped_f(&t).unwrap(), f_constant(t.shape()), "{t}");
        }
    }

    #[test]
    fn larger_context_embeds() {
        let t = StandardMultiTableau::new(2, vec![MultiNode::new(2, 1, 1)]).unwrap();
        let small = inductive_evaluation(&FusionInput::new(&t, 100).unwrap()).unwrap();
        let big =
            inductive_evaluation(&FusionInput::in_context(ctx(2, 3), &t, 100).unwrap()).unwrap();
        assert_eq!(small.embed(ctx(2, 3)).unwrap(), big);
        assert!(FusionInput::in_context(ctx(3, 3), &t, 100).is_err());
        assert!(matches!(
            FusionInput::in_context(ctx(2, 3), &t, 10),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }
}

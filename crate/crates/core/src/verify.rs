//! The full invariant suite behind `cyclofusion verify`.

use std::collections::HashMap;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{baxterized_s, bj, jm_j, jm_jtilde, AlgebraElement};
use crate::cyclo::{position_root, CycloScalar, Rational};
use crate::error::{Error, Result};
use crate::fusion::{
    build_phi, build_phi_tilde_form, consecutive_evaluation, inductive_prefixes, phi, FusionInput,
};
use crate::group::{ColoredPermutation, GroupContext};
use crate::oracle::{
    check_eigenvalues, completeness_check_with, jm_idempotent, jm_idempotent_literal, regular_rank,
    Report,
};
use crate::ratfun::{RatFun, Var};
use crate::tableaux::{
    enumerate_all_tableaux, f_constant, f_function, standard_tableaux_count, StandardMultiTableau,
};

type E = AlgebraElement<CycloScalar>;

/// Largest group order for which ranks come from explicit elimination.
pub const RANK_ELIMINATION_LIMIT: u128 = 200;

/// Budget, in coefficient products, for checking every ordered pair of
/// idempotents directly. Above it orthogonality is derived from the spectra.
pub const DIRECT_ORTHOGONALITY_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub m: u32,
    pub n: usize,
    pub limit: u64,
    pub jobs: usize,
    /// Replaces the first idempotent by twice itself, so that the suite must fail.
    pub inject_corruption: bool,
}

struct TableauOutcome {
    report: Report,
    e: E,
    parent: Option<E>,
    rank: Option<usize>,
}

/// Runs every check for G(m,1,N). The report order depends only on `m` and `N`.
pub fn run_verify(opts: &VerifyOptions) -> Result<Report> {
    let ctx = GroupContext::new(opts.m, opts.n)?;
    ctx.check_size(opts.limit)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut report = Report::new();
    report.extend(check_relations(ctx)?);
    report.extend(check_jm_commutation(ctx)?);
    report.extend(check_projectors(ctx)?);
    report.extend(check_conjugation_identities(ctx)?);
    report.extend(check_baxt_inv(ctx)?);

    let tableaux = enumerate_all_tableaux(opts.m as usize, opts.n);
    let order = ctx.order().unwrap_or(u128::MAX);
    let with_rank = order <= RANK_ELIMINATION_LIMIT;
    let outcomes: Vec<TableauOutcome> = pool.install(|| {
        tableaux
            .par_iter()
            .enumerate()
            .map(|(idx, t)| {
                let corrupt = opts.inject_corruption && idx == 0;
                check_tableau(ctx, t, opts.limit, corrupt, with_rank)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    for o in &outcomes {
        report.extend(o.report.clone());
    }

    let idems: Vec<&E> = outcomes.iter().map(|o| &o.e).collect();
    report.extend(pool.install(|| check_orthogonality(ctx, &tableaux, &idems, order)));

    let mut lookup: HashMap<StandardMultiTableau, E> = HashMap::new();
    for (t, o) in tableaux.iter().zip(&outcomes) {
        lookup.insert(t.clone(), o.e.clone());
        if let (Some(parent), Some((u, _))) = (&o.parent, t.remove_last()) {
            lookup.entry(u).or_insert_with(|| parent.clone());
        }
    }
    report.extend(completeness_check_with(ctx, |t| {
        lookup.get(t).cloned().ok_or(Error::ContextMismatch)
    })?);

    if with_rank {
        let total: usize = outcomes.iter().filter_map(|o| o.rank).sum();
        let pass = total as u128 == order;
        report.push(
            "rank-sum",
            format!("m={} N={}", ctx.m, ctx.n),
            pass,
            format!("ranks sum to {total}, group order {order}"),
        );
    } else {
        report.push(
            "rank-sum",
            format!("m={} N={}", ctx.m, ctx.n),
            true,
            format!("not run: group order {order} exceeds the elimination limit {RANK_ELIMINATION_LIMIT}"),
        );
    }
    Ok(report)
}

fn check_tableau(
    ctx: GroupContext,
    t: &StandardMultiTableau,
    limit: u64,
    corrupt: bool,
    with_rank: bool,
) -> Result<TableauOutcome> {
    let subject = t.to_string();
    let mut report = Report::new();
    let input = FusionInput::new(t, limit)?;

    for k in 1..=t.size() {
        let f = f_function(t, k)?
            .cancel_and_substitute(
                Var::U,
                &CycloScalar::from_integer(ctx.m, t.contents()[k - 1]),
            )?
            .evaluate_constant()?;
        let ratio = f_constant(t.prefix(k).shape()) / f_constant(t.prefix(k - 1).shape());
        report.expect_eq(
            "hook-ratio",
            format!("{subject} k={k}"),
            &f,
            &CycloScalar::from_rational(ctx.m, ratio),
        );
    }

    report.expect_eq(
        "phi-forms",
        subject.clone(),
        &build_phi(&input)?,
        &build_phi_tilde_form(&input)?,
    );

    let prefixes = inductive_prefixes(&input)?;
    let mut e = prefixes.last().expect("E_0 is present").clone();
    if corrupt {
        e = e.scale_rational(&Rational::from_integer(2.into()));
    }
    let consecutive = consecutive_evaluation(&input)?;
    let oracle = jm_idempotent(ctx, t)?;
    report.expect_eq("agreement-consecutive", subject.clone(), &e, &consecutive);
    report.expect_eq("agreement-oracle", subject.clone(), &e, &oracle);
    report.expect_eq(
        "oracle-literal",
        subject.clone(),
        &jm_idempotent_literal(ctx, t)?,
        &oracle,
    );
    report.expect_eq("idempotent", subject.clone(), &(&e * &e), &e);
    report.extend(check_eigenvalues(&e, t));

    for k in 1..=t.size() {
        let pass = check_inductive_step(&input, k, &prefixes[k - 1])?;
        report.push(
            "inductive-step",
            format!("{subject} k={k}"),
            pass,
            if pass {
                "holds in u"
            } else {
                "sides differ as functions of u"
            },
        );
    }

    let rank = if with_rank {
        let r = regular_rank(&e, limit)?;
        let d = standard_tableaux_count(t.shape());
        report.push(
            "rank",
            subject.clone(),
            r == d,
            format!("rank {r}, {d} standard tableaux of the shape"),
        );
        Some(r)
    } else {
        None
    };

    let parent = (t.size() > 0).then(|| prefixes[t.size() - 1].clone());
    Ok(TableauOutcome {
        report,
        e,
        parent,
        rank,
    })
}

/// `(u − j̃_k)·F·φ_k·E_{k−1} = (u − c_k)·bj_k(p_k)·E_{k−1}` in the variable u.
fn check_inductive_step(input: &FusionInput, k: usize, prev: &E) -> Result<bool> {
    let ctx = input.ctx();
    let m = ctx.m;
    let u = RatFun::var(m, Var::U);
    let cs: Vec<RatFun> = input.contents()[..k - 1]
        .iter()
        .map(|&c| RatFun::from_integer(m, c))
        .collect();
    let prev = prev.lift();
    let jt: AlgebraElement<RatFun> = jm_jtilde(ctx, k)?;
    let u_minus_jt = &AlgebraElement::constant(ctx, u.clone()) - &jt;
    let lhs = u_minus_jt
        .checked_mul(
            &phi(ctx, k, &input.positions()[..k], &cs, &u)?.scale(&f_function(input.tableau(), k)?),
        )?
        .checked_mul(&prev)?;
    let ck = RatFun::from_integer(m, input.contents()[k - 1]);
    let rhs = bj::<RatFun>(ctx, k, &input.positions()[k - 1])?
        .scale(&(&u - &ck))
        .checked_mul(&prev)?;
    Ok(lhs == rhs)
}

fn check_orthogonality(
    ctx: GroupContext,
    tableaux: &[StandardMultiTableau],
    idems: &[&E],
    order: u128,
) -> Report {
    let mut report = Report::new();
    let n = tableaux.len() as u128;
    let cost = n
        .saturating_mul(n.saturating_sub(1))
        .saturating_mul(order.saturating_mul(order));
    let subject = format!("m={} N={}", ctx.m, ctx.n);
    if cost <= DIRECT_ORTHOGONALITY_BUDGET {
        let pairs: Vec<(usize, usize)> = (0..tableaux.len())
            .flat_map(|a| {
                (0..tableaux.len())
                    .filter(move |&b| b != a)
                    .map(move |b| (a, b))
            })
            .collect();
        let bad: Vec<(usize, usize)> = pairs
            .par_iter()
            .filter(|&&(a, b)| !(idems[a] * idems[b]).is_zero())
            .copied()
            .collect();
        for (a, b) in &bad {
            report.push(
                "orthogonality",
                format!("{} · {}", tableaux[*a], tableaux[*b]),
                false,
                "product is nonzero",
            );
        }
        if bad.is_empty() {
            report.push(
                "orthogonality",
                subject,
                true,
                format!("{} ordered pairs multiply to 0", pairs.len()),
            );
        }
    } else {
        // E_T j̃_i E_T' = c_i(T) E_T E_T' = c_i(T') E_T E_T', likewise for j_i,
        // so verified spectra that separate T from T' force E_T E_T' = 0
        let mut spectra: Vec<(Vec<i64>, Vec<CycloScalar>)> = tableaux
            .iter()
            .map(|t| (t.contents(), t.positions()))
            .collect();
        spectra.sort();
        spectra.dedup();
        let pass = spectra.len() == tableaux.len();
        report.push(
            "orthogonality",
            subject,
            pass,
            "derived from the eigenvalue checks: all spectra are distinct",
        );
    }
    report
}

pub fn check_relations(ctx: GroupContext) -> Result<Report> {
    let mut report = Report::new();
    let subject = |s: String| format!("m={} N={} {s}", ctx.m, ctx.n);
    let id = ctx.identity();
    let mul = |a: &ColoredPermutation, b: &ColoredPermutation| a.multiply(b).expect("same group");
    if ctx.n >= 1 {
        let t = ctx.generator_t()?;
        report.expect_eq("relations", subject("t^m = 1".into()), &t.pow(ctx.m), &id);
        if ctx.n >= 2 {
            let s1 = ctx.generator_s(1)?;
            let lhs = mul(&mul(&t, &s1), &mul(&t, &s1));
            let rhs = mul(&mul(&s1, &t), &mul(&s1, &t));
            report.expect_eq(
                "relations",
                subject("t s1 t s1 = s1 t s1 t".into()),
                &lhs,
                &rhs,
            );
        }
        for i in 2..ctx.n {
            let si = ctx.generator_s(i)?;
            report.expect_eq(
                "relations",
                subject(format!("t s{i} = s{i} t")),
                &mul(&t, &si),
                &mul(&si, &t),
            );
        }
    }
    for i in 1..ctx.n {
        let si = ctx.generator_s(i)?;
        report.expect_eq(
            "relations",
            subject(format!("s{i}^2 = 1")),
            &mul(&si, &si),
            &id,
        );
        for j in i + 1..ctx.n {
            let sj = ctx.generator_s(j)?;
            if j == i + 1 {
                let lhs = mul(&mul(&si, &sj), &si);
                let rhs = mul(&mul(&sj, &si), &sj);
                report.expect_eq("relations", subject(format!("braid s{i} s{j}")), &lhs, &rhs);
            } else {
                report.expect_eq(
                    "relations",
                    subject(format!("s{i} s{j} = s{j} s{i}")),
                    &mul(&si, &sj),
                    &mul(&sj, &si),
                );
            }
        }
    }
    Ok(report)
}

pub fn check_jm_commutation(ctx: GroupContext) -> Result<Report> {
    let mut report = Report::new();
    let mut elems: Vec<(String, E)> = Vec::new();
    for i in 1..=ctx.n {
        elems.push((format!("j_{i}"), jm_j(ctx, i)?));
    }
    for i in 1..=ctx.n {
        elems.push((format!("j~_{i}"), jm_jtilde(ctx, i)?));
    }
    let mut failures = Vec::new();
    for a in 0..elems.len() {
        for b in a + 1..elems.len() {
            if !elems[a].1.commutes_with(&elems[b].1) {
                failures.push(format!("{} and {}", elems[a].0, elems[b].0));
            }
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        "all pairs commute".to_string()
    } else {
        format!("fail: {}", failures.join(", "))
    };
    report.push(
        "jm-commutation",
        format!("m={} N={}", ctx.m, ctx.n),
        pass,
        detail,
    );
    Ok(report)
}

fn roots(m: u32) -> Vec<CycloScalar> {
    (1..=m as usize).map(|k| position_root(m, k)).collect()
}

pub fn check_projectors(ctx: GroupContext) -> Result<Report> {
    let mut report = Report::new();
    for i in 1..=ctx.n {
        let ps = roots(ctx.m);
        let projectors: Vec<E> = ps.iter().map(|p| bj(ctx, i, p)).collect::<Result<_>>()?;
        let j: E = jm_j(ctx, i)?;
        let mut sum = E::zero(ctx);
        let mut pass = true;
        for (a, pa) in projectors.iter().enumerate() {
            sum = &sum + pa;
            pass &= &j * pa == pa.scale(&ps[a]);
            for (b, pb) in projectors.iter().enumerate() {
                let prod = pa * pb;
                pass &= if a == b { &prod == pa } else { prod.is_zero() };
            }
        }
        pass &= sum == E::one(ctx);
        report.push(
            "projectors",
            format!("m={} N={} bj_{i}", ctx.m, ctx.n),
            pass,
            if pass {
                "orthogonal eigenprojectors of j_i summing to 1"
            } else {
                "projector identities fail"
            },
        );
    }
    Ok(report)
}

fn s_word_elem(ctx: GroupContext, word: &[usize]) -> Result<E> {
    E::from_group(ctx, ctx.s_word(word)?)
}

/// `(1/m) Σ_{k=0}^{m−1} j_N^k j_i^{m−k}`.
fn color_average(ctx: GroupContext, i: usize) -> Result<E> {
    let jn = ctx.jm_word(ctx.n)?;
    let ji = ctx.jm_word(i)?;
    let mut out = E::zero(ctx);
    for k in 0..ctx.m {
        out = &out + &E::from_group(ctx, jn.pow(k).multiply(&ji.pow(ctx.m - k))?)?;
    }
    Ok(out.scale_rational(&Rational::new(One::one(), ctx.m.into())))
}

pub fn check_conjugation_identities(ctx: GroupContext) -> Result<Report> {
    let mut report = Report::new();
    if ctx.n < 2 {
        return Ok(report);
    }
    let n = ctx.n - 1;
    let jt_top: E = jm_jtilde(ctx, ctx.n)?;
    for l in 1..=n {
        let down: Vec<usize> = (l..=n).rev().collect();
        let up: Vec<usize> = (l..=n).collect();
        let jt_l: E = jm_jtilde(ctx, l)?;

        let mut rhs = s_word_elem(ctx, &down)?
            .checked_mul(&jt_l)?
            .checked_mul(&s_word_elem(ctx, &up)?)?;
        for i in l..=n {
            let word: Vec<usize> = (i..=n).rev().chain(i + 1..=n).collect();
            rhs = &rhs + &s_word_elem(ctx, &word)?.checked_mul(&color_average(ctx, i)?)?;
        }
        report.expect_eq(
            "conjugation-jtilde",
            format!("m={} N={} l={l}", ctx.m, ctx.n),
            &jt_top,
            &rhs,
        );

        for (pk, p) in roots(ctx.m).iter().enumerate() {
            let bjl: E = bj(ctx, l, p)?;
            let lhs = bjl
                .checked_mul(&s_word_elem(ctx, &up)?)?
                .checked_mul(&jt_top)?;
            let mut rhs = bjl
                .checked_mul(&jt_l)?
                .checked_mul(&s_word_elem(ctx, &up)?)?;
            for i in l..=n {
                let word: Vec<usize> = (l..i).chain(i + 1..=n).collect();
                let term = s_word_elem(ctx, &word)?
                    .checked_mul(&bj(ctx, i, p)?)?
                    .checked_mul(&color_average(ctx, i)?)?;
                rhs = &rhs + &term;
            }
            report.expect_eq(
                "conjugation-projected",
                format!("m={} N={} l={l} p=xi_{}", ctx.m, ctx.n, pk + 1),
                &lhs,
                &rhs,
            );
        }
    }
    Ok(report)
}

/// `bs_i(p,p',a,a')·bs_i(p',p,a',a) = ((a−a')² − δ_{p,p'})/(a−a')²` with `a = u` free.
pub fn check_baxt_inv(ctx: GroupContext) -> Result<Report> {
    let mut report = Report::new();
    let m = ctx.m;
    let u = RatFun::var(m, Var::U);
    let spectral_pairs = [
        (u.clone(), RatFun::from_integer(m, 0), "u, 0"),
        (u.clone(), RatFun::from_integer(m, 3), "u, 3"),
        (
            RatFun::var(m, Var::spectral(1)),
            RatFun::var(m, Var::spectral(2)),
            "u1, u2",
        ),
    ];
    let ps = roots(m);
    let choices: Vec<(usize, usize)> = if m == 1 {
        vec![(0, 0)]
    } else {
        vec![(0, 0), (0, 1)]
    };
    for i in 1..ctx.n {
        for &(a_idx, b_idx) in &choices {
            let (p, q) = (&ps[a_idx], &ps[b_idx]);
            for (a, b, label) in &spectral_pairs {
                let lhs = baxterized_s(ctx, i, p, q, a, b)?
                    .checked_mul(&baxterized_s(ctx, i, q, p, b, a)?)?;
                let d = a - b;
                let d2 = &d * &d;
                let delta = if a_idx == b_idx {
                    RatFun::one(m)
                } else {
                    RatFun::zero(m)
                };
                let rhs = AlgebraElement::constant(ctx, (&d2 - &delta).checked_div(&d2)?);
                report.expect_eq(
                    "baxterized-inverse",
                    format!(
                        "m={} N={} i={i} ({label}) delta={}",
                        ctx.m,
                        ctx.n,
                        u8::from(a_idx == b_idx)
                    ),
                    &lhs,
                    &rhs,
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(m: u32, n: usize) -> VerifyOptions {
        VerifyOptions {
            m,
            n,
            limit: 10_000,
            jobs: 2,
            inject_corruption: false,
        }
    }

    #[test]
    fn small_suites_pass() {
        for (m, n) in [(1, 0), (1, 2), (2, 2), (3, 2)] {
            let r = run_verify(&opts(m, n)).unwrap();
            let failures: Vec<_> = r.failures().collect();
            assert!(failures.is_empty(), "m={m} n={n}: {failures:?}");
        }
    }

    #[test]
    fn corruption_is_caught() {
        let mut o = opts(2, 2);
        o.inject_corruption = true;
        let r = run_verify(&o).unwrap();
        assert!(r.failures().any(|f| f.check == "idempotent"));
        assert!(r.failures().any(|f| f.check == "completeness"));
    }

    #[test]
    fn size_guard() {
        let mut o = opts(3, 4);
        o.limit = 100;
        assert!(matches!(
            run_verify(&o),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }
}

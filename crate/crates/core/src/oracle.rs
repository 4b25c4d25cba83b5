//! An independent construction of E_T from the Jucys–Murphy spectrum, plus
//! checks used to validate the fusion output.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{bj, jm_j, jm_jtilde, AlgebraElement};
use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};
use crate::group::{ColoredPermutation, GroupContext};
use crate::tableaux::{addable_nodes, enumerate_all_tableaux, StandardMultiTableau};

type E = AlgebraElement<CycloScalar>;

/// One line of a check report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub check: String,
    pub subject: String,
    pub pass: bool,
    pub detail: String,
}

/// An ordered list of check outcomes, serialized as a JSON array.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Report {
    entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        check: &str,
        subject: impl Into<String>,
        pass: bool,
        detail: impl Into<String>,
    ) {
        self.entries.push(CheckEntry {
            check: check.to_string(),
            subject: subject.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Records an equality check with a stock detail message.
    pub fn expect_eq<T: PartialEq>(
        &mut self,
        check: &str,
        subject: impl Into<String>,
        lhs: &T,
        rhs: &T,
    ) {
        let pass = lhs == rhs;
        self.push(
            check,
            subject,
            pass,
            if pass {
                "exact equality"
            } else {
                "sides differ"
            },
        );
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn entries(&self) -> &[CheckEntry] {
        &self.entries
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_fits(ctx: GroupContext, t: &StandardMultiTableau) -> Result<()> {
    if ctx.m as usize != t.m() || ctx.n < t.size() {
        Err(Error::ContextMismatch)
    } else {
        Ok(())
    }
}

fn spectral_factor(x: &E, target: &CycloScalar, root: &CycloScalar) -> Result<E> {
    let scale = (target - root).inv()?;
    Ok(x.shifted(root).scale(&scale))
}

/// `E_T = E_U · bj_N(p_N) · Π (j̃_N − c(β)) / (c_N − c(β))` over the addable
/// nodes β of shape(U) in the same component as the last node with a
/// different content. U is T without its last node and `E_∅ = 1`.
pub fn jm_idempotent(ctx: GroupContext, t: &StandardMultiTableau) -> Result<E> {
    check_fits(ctx, t)?;
    let m = ctx.m;
    let mut e = E::one(ctx);
    for k in 1..=t.size() {
        let prefix = t.prefix(k - 1);
        let last = t.entries()[k - 1];
        let ck = CycloScalar::from_integer(m, last.content());
        let jt = jm_jtilde::<CycloScalar>(ctx, k)?;
        e = e.checked_mul(&bj(ctx, k, &last.position_value(m))?)?;
        for beta in addable_nodes(prefix.shape()) {
            if beta.pos == last.pos && beta.content() != last.content() {
                let cb = CycloScalar::from_integer(m, beta.content());
                e = e.checked_mul(&spectral_factor(&jt, &ck, &cb)?)?;
            }
        }
    }
    Ok(e)
}

/// The unrestricted form: a content product over every addable node with a
/// different content, times a position product over every addable node with
/// a different position, with no projector inserted.
pub fn jm_idempotent_literal(ctx: GroupContext, t: &StandardMultiTableau) -> Result<E> {
    check_fits(ctx, t)?;
    let m = ctx.m;
    let mut e = E::one(ctx);
    for k in 1..=t.size() {
        let prefix = t.prefix(k - 1);
        let last = t.entries()[k - 1];
        let ck = CycloScalar::from_integer(m, last.content());
        let pk = last.position_value(m);
        let jt = jm_jtilde::<CycloScalar>(ctx, k)?;
        let j = jm_j::<CycloScalar>(ctx, k)?;
        let addable = addable_nodes(prefix.shape());
        for beta in &addable {
            if beta.content() != last.content() {
                let cb = CycloScalar::from_integer(m, beta.content());
                e = e.checked_mul(&spectral_factor(&jt, &ck, &cb)?)?;
            }
        }
        for beta in &addable {
            if beta.pos != last.pos {
                e = e.checked_mul(&spectral_factor(&j, &pk, &beta.position_value(m))?)?;
            }
        }
    }
    Ok(e)
}

/// Checks `j_i E = E j_i = p_i E` and `j̃_i E = E j̃_i = c_i E` for every label.
pub fn check_eigenvalues(e: &E, t: &StandardMultiTableau) -> Report {
    let mut report = Report::new();
    let ctx = e.ctx();
    let subject = t.to_string();
    if check_fits(ctx, t).is_err() {
        report.push(
            "eigenvalues",
            subject,
            false,
            "tableau does not fit the context",
        );
        return report;
    }
    let m = ctx.m;
    for (idx, node) in t.entries().iter().enumerate() {
        let i = idx + 1;
        let cases = [
            ("j", jm_j::<CycloScalar>(ctx, i), node.position_value(m)),
            (
                "j~",
                jm_jtilde::<CycloScalar>(ctx, i),
                CycloScalar::from_integer(m, node.content()),
            ),
        ];
        for (name, x, value) in cases {
            let x = x.expect("index in range");
            let rhs = e.scale(&value);
            for (side, lhs) in [("left", &x * e), ("right", e * &x)] {
                let pass = lhs == rhs;
                let detail = if pass {
                    format!("{name}_{i} acts by {value}")
                } else {
                    format!("{name}_{i} does not act by {value} on the {side}")
                };
                report.push(
                    "eigenvalues",
                    format!("{subject} i={i} {name} {side}"),
                    pass,
                    detail,
                );
            }
        }
    }
    report
}

/// Rank over Q(ζ_m) of left multiplication `x ↦ E·x` on the group algebra.
pub fn regular_rank(e: &E, limit: u64) -> Result<usize> {
    let ctx = e.ctx();
    let basis = ctx.enumerate(limit)?;
    let index: HashMap<&ColoredPermutation, usize> =
        basis.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let n = basis.len();
    let m = ctx.m;
    let zero = CycloScalar::zero(m);
    let scale = crate::cyclo::CycloScalar::from_rational(
        m,
        crate::cyclo::Rational::from_integer(e.common_denominator()),
    );
    let cleared = e.scale(&scale);
    // row h·g, column g, entry E(h)
    let mut mat = vec![vec![zero.clone(); n]; n];
    for (col, g) in basis.iter().enumerate() {
        for (h, c) in cleared.terms() {
            let hg = h.multiply(g)?;
            mat[index[&hg]][col] = c.clone();
        }
    }
    Ok(bareiss_rank(mat, m))
}

/// Fraction-free elimination. Divisions by the previous pivot are exact; the
/// field inverse is used to carry them out.
fn bareiss_rank(mut a: Vec<Vec<CycloScalar>>, m: u32) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = CycloScalar::one(m);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let pivot = a[rank][col].clone();
        let prev_inv = prev.inv().expect("previous pivot is nonzero");
        let (top, rest) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for c in col + 1..cols {
                let v = &(&(&pivot * &row[c]) - &(&lead * &prow[c])) * &prev_inv;
                row[c] = v;
            }
            row[col] = CycloScalar::zero(m);
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Σ_T E_T = 1 over every standard tableau of size `ctx.n`, and for each U of
/// size `ctx.n − 1`, `E_U = Σ E_T` over the one-node extensions of U.
pub fn completeness_check_with<F>(ctx: GroupContext, mut idem: F) -> Result<Report>
where
    F: FnMut(&StandardMultiTableau) -> Result<E>,
{
    let mut report = Report::new();
    let m = ctx.m as usize;
    let top = enumerate_all_tableaux(m, ctx.n);
    let mut cache: HashMap<StandardMultiTableau, E> = HashMap::new();
    let mut total = E::zero(ctx);
    for t in &top {
        let e = idem(t)?;
        total = &total + &e;
        cache.insert(t.clone(), e);
    }
    report.expect_eq(
        "completeness",
        format!("m={} N={} ({} tableaux)", ctx.m, ctx.n, top.len()),
        &total,
        &E::one(ctx),
    );
    if ctx.n == 0 {
        return Ok(report);
    }
    for u in enumerate_all_tableaux(m, ctx.n - 1) {
        let eu = idem(&u)?;
        let mut sum = E::zero(ctx);
        for t in u.extensions() {
            sum = &sum + &cache[&t];
        }
        report.expect_eq("branching", u.to_string(), &eu, &sum);
    }
    Ok(report)
}

/// [`completeness_check_with`] using the inductive fusion route.
pub fn completeness_check(ctx: GroupContext, limit: u64) -> Result<Report> {
    use crate::fusion::{inductive_evaluation, FusionInput};
    completeness_check_with(ctx, |t| {
        inductive_evaluation(&FusionInput::in_context(ctx, t, limit)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{position_root, Rational};
    use crate::group::DEFAULT_SIZE_LIMIT;
    use crate::tableaux::{enumerate_multipartitions, enumerate_standard_tableaux, MultiNode};

    fn ctx(m: u32, n: usize) -> GroupContext {
        GroupContext::new(m, n).unwrap()
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn single_node() {
        for m in 1..=4u32 {
            for k in 1..=m as usize {
                let t =
                    StandardMultiTableau::new(m as usize, vec![MultiNode::new(k, 1, 1)]).unwrap();
                let e = jm_idempotent(ctx(m, 1), &t).unwrap();
                assert_eq!(e, bj(ctx(m, 1), 1, &position_root(m, k)).unwrap());
                assert_eq!(jm_idempotent_literal(ctx(m, 1), &t).unwrap(), e);
                assert!(check_eigenvalues(&e, &t).all_pass());
            }
        }
    }

    #[test]
    fn symmetrizers() {
        let c = ctx(1, 2);
        let s1 = E::from_group(c, c.generator_s(1).unwrap()).unwrap();
        let row = StandardMultiTableau::from_rows(&[vec![vec![1, 2]]]).unwrap();
        let col = StandardMultiTableau::from_rows(&[vec![vec![1], vec![2]]]).unwrap();
        assert_eq!(
            jm_idempotent(c, &row).unwrap(),
            (&E::one(c) + &s1).scale_rational(&half())
        );
        assert_eq!(
            jm_idempotent(c, &col).unwrap(),
            (&E::one(c) - &s1).scale_rational(&half())
        );
    }

    #[test]
    fn both_oracle_forms_agree() {
        for (m, n) in [(2, 3), (3, 2), (4, 2)] {
            for t in enumerate_all_tableaux(m, n) {
                let c = ctx(m as u32, n);
                assert_eq!(
                    jm_idempotent(c, &t).unwrap(),
                    jm_idempotent_literal(c, &t).unwrap(),
                    "{t}"
                );
            }
        }
    }

    #[test]
    fn negative_control() {
        let c = ctx(2, 2);
        let t = StandardMultiTableau::from_rows(&[vec![vec![1, 2]], vec![]]).unwrap();
        let report = check_eigenvalues(&E::one(c), &t);
        assert!(!report.all_pass());
        assert!(report.failures().any(|f| f.subject.contains("i=2 j~")));
        let e = bj(ctx(2, 1), 1, &CycloScalar::one(2)).unwrap();
        let t = StandardMultiTableau::from_rows(&[vec![vec![1]], vec![]]).unwrap();
        assert!(check_eigenvalues(&e, &t).all_pass());
    }

    #[test]
    fn ranks() {
        let c = ctx(1, 2);
        assert_eq!(regular_rank(&E::one(c), 100).unwrap(), 2);
        let s1 = E::from_group(c, c.generator_s(1).unwrap()).unwrap();
        assert_eq!(
            regular_rank(&(&E::one(c) + &s1).scale_rational(&half()), 100).unwrap(),
            1
        );
        assert_eq!(regular_rank(&E::zero(c), 100).unwrap(), 0);
        let c = ctx(2, 2);
        let shape = &enumerate_multipartitions(2, 2)[2];
        for t in enumerate_standard_tableaux(shape) {
            assert_eq!(
                regular_rank(&jm_idempotent(c, &t).unwrap(), 100).unwrap(),
                2
            );
        }
        assert!(regular_rank(&E::one(ctx(3, 4)), 100).is_err());
    }

    #[test]
    fn completeness() {
        for (m, n) in [(1, 3), (2, 2), (3, 1), (4, 0)] {
            let c = ctx(m, n);
            assert!(completeness_check(c, DEFAULT_SIZE_LIMIT)
                .unwrap()
                .all_pass());
            let via_oracle = completeness_check_with(c, |t| jm_idempotent(c, t)).unwrap();
            assert!(via_oracle.all_pass());
        }
        let c = ctx(1, 3);
        let broken =
            completeness_check_with(c, |t| Ok(jm_idempotent(c, t)?.scale_rational(&half())))
                .unwrap();
        assert!(!broken.all_pass());
    }

    #[test]
    fn report_json() {
        let mut r = Report::new();
        r.push("x", "y", true, "z");
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"[{"check":"x","subject":"y","pass":true,"detail":"z"}]"#
        );
    }
}

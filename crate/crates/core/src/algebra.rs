//! The group algebra of G(m,1,N) over a pluggable scalar domain.
//!
//! Results live over [`CycloScalar`]; the fusion stages run over [`RatFun`]
//! so that the spectral parameters can stay symbolic. Both Jucys–Murphy
//! families and the Baxterized elements are built here.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cyclo::{CycloScalar, Rational};
use crate::error::{Error, Result};
use crate::group::{ColoredPermutation, GroupContext};
use crate::ratfun::{RatFun, Var};

/// Coefficient domain of an [`AlgebraElement`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn from_cyclo(c: CycloScalar) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// Hook for keeping coefficients small after accumulation.
    fn normalize(&mut self) {}
}

impl Scalar for CycloScalar {
    fn from_cyclo(c: CycloScalar) -> Self {
        c
    }
    fn is_zero(&self) -> bool {
        CycloScalar::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        CycloScalar::inv(self)
    }
}

impl Scalar for RatFun {
    fn from_cyclo(c: CycloScalar) -> Self {
        RatFun::constant(c)
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = &*self + rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        self.reciprocal()
    }
    fn normalize(&mut self) {
        self.reduce();
    }
}

/// A finite linear combination of group elements. No zero coefficients are
/// stored, so structural equality is algebraic equality.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement<S: Scalar = CycloScalar> {
    ctx: GroupContext,
    terms: BTreeMap<ColoredPermutation, S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(ctx: GroupContext) -> Self {
        AlgebraElement {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: GroupContext) -> Self {
        Self::constant(ctx, S::from_cyclo(CycloScalar::one(ctx.m)))
    }

    pub fn constant(ctx: GroupContext, c: S) -> Self {
        let mut out = Self::zero(ctx);
        out.add_term(ctx.identity(), c);
        out
    }

    pub fn from_group(ctx: GroupContext, g: ColoredPermutation) -> Result<Self> {
        Self::monomial(ctx, g, S::from_cyclo(CycloScalar::one(ctx.m)))
    }

    pub fn monomial(ctx: GroupContext, g: ColoredPermutation, c: S) -> Result<Self> {
        if !ctx.contains(&g) {
            return Err(Error::ContextMismatch);
        }
        let mut out = Self::zero(ctx);
        out.add_term(g, c);
        Ok(out)
    }

    pub fn ctx(&self) -> GroupContext {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ColoredPermutation, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &ColoredPermutation) -> Option<&S> {
        self.terms.get(g)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, g: ColoredPermutation, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                slot.get_mut().add_assign_ref(&c);
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out.normalize_terms();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Convolution product `(xy)(g) = Σ_{g = ab} x(a) y(b)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut acc: BTreeMap<ColoredPermutation, S> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let c = x.mul_ref(y);
                match acc.entry(a.compose(b)) {
                    Entry::Vacant(slot) => {
                        slot.insert(c);
                    }
                    Entry::Occupied(mut slot) => slot.get_mut().add_assign_ref(&c),
                }
            }
        }
        let mut out = Self::zero(self.ctx);
        for (g, mut c) in acc {
            if !c.is_zero() {
                c.normalize();
                out.terms.insert(g, c);
            }
        }
        Ok(out)
    }

    fn normalize_terms(&mut self) {
        for c in self.terms.values_mut() {
            c.normalize();
        }
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.ctx);
        for (g, x) in &self.terms {
            let mut y = x.mul_ref(c);
            if !y.is_zero() {
                y.normalize();
                out.terms.insert(g.clone(), y);
            }
        }
        out
    }

    pub fn scale_cyclo(&self, c: &CycloScalar) -> Self {
        self.scale(&S::from_cyclo(c.clone()))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale_cyclo(&CycloScalar::from_rational(self.ctx.m, q.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        (self * other) == (other * self)
    }

    /// `self − c·1`.
    pub fn shifted(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.add_term(self.ctx.identity(), c.neg_ref());
        out
    }

    /// Moves the element into a context with at least as many strands, via
    /// the standard embedding G(m,1,N) ⊂ G(m,1,N').
    pub fn embed(&self, ctx: GroupContext) -> Result<Self> {
        if ctx.m != self.ctx.m || ctx.n < self.ctx.n {
            return Err(Error::ContextMismatch);
        }
        let mut out = Self::zero(ctx);
        for (g, c) in &self.terms {
            let mut perm = g.perm();
            let mut colors: Vec<u32> = g.colors().iter().map(|&c| c as u32).collect();
            perm.extend(self.ctx.n + 1..=ctx.n);
            colors.resize(ctx.n, 0);
            out.terms
                .insert(ColoredPermutation::new(&ctx, &perm, &colors)?, c.clone());
        }
        Ok(out)
    }
}

impl AlgebraElement<CycloScalar> {
    /// Coefficients lifted into the rational-function domain.
    pub fn lift(&self) -> AlgebraElement<RatFun> {
        AlgebraElement {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.clone(), RatFun::constant(c.clone())))
                .collect(),
        }
    }

    /// Parses the JSON produced by the serializer.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(msg.to_string());
        let ctx: GroupContext =
            serde_json::from_value(value.get("ctx").ok_or_else(|| bad("missing ctx"))?.clone())
                .map_err(|e| Error::Parse(e.to_string()))?;
        let ctx = GroupContext::new(ctx.m, ctx.n)?;
        let mut out = Self::zero(ctx);
        let terms = value
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| bad("missing terms"))?;
        for t in terms {
            let g =
                ColoredPermutation::from_json(&ctx, t.get("g").ok_or_else(|| bad("missing g"))?)?;
            let c: CycloScalar =
                serde_json::from_value(t.get("coeff").ok_or_else(|| bad("missing coeff"))?.clone())
                    .map_err(|e| Error::Parse(e.to_string()))?;
            if c.m() != ctx.m {
                return Err(Error::MixedModulus(c.m(), ctx.m));
            }
            out.add_term(g, c);
        }
        Ok(out)
    }

    /// Least common denominator of all rational coefficients.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        let mut l = BigInt::from(1);
        for c in self.terms.values() {
            for q in c.coeffs() {
                l = l.lcm(q.denom());
            }
        }
        l
    }
}

impl AlgebraElement<RatFun> {
    /// Coefficient-wise [`RatFun::cancel_and_substitute`].
    pub fn substitute_scalars(&self, v: Var, value: &CycloScalar) -> Result<Self> {
        let mut out = Self::zero(self.ctx);
        for (g, c) in &self.terms {
            let s = c.cancel_and_substitute(v, value)?;
            if !s.is_zero() {
                out.terms.insert(g.clone(), s);
            }
        }
        Ok(out)
    }

    /// Evaluates every coefficient once no variables remain.
    pub fn to_cyclo(&self) -> Result<AlgebraElement<CycloScalar>> {
        let mut out = AlgebraElement::zero(self.ctx);
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c.evaluate_constant()?);
        }
        Ok(out)
    }
}

impl<'a, S: Scalar> std::ops::Add<&'a AlgebraElement<S>> for &'a AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn add(self, rhs: &AlgebraElement<S>) -> AlgebraElement<S> {
        self.checked_add(rhs).expect("group context mismatch")
    }
}

impl<'a, S: Scalar> std::ops::Sub<&'a AlgebraElement<S>> for &'a AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn sub(self, rhs: &AlgebraElement<S>) -> AlgebraElement<S> {
        self.checked_sub(rhs).expect("group context mismatch")
    }
}

impl<'a, S: Scalar> std::ops::Mul<&'a AlgebraElement<S>> for &'a AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn mul(self, rhs: &AlgebraElement<S>) -> AlgebraElement<S> {
        self.checked_mul(rhs).expect("group context mismatch")
    }
}

impl<S: Scalar> fmt::Debug for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| format!("({c})·{g:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for AlgebraElement<CycloScalar> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            g: &'a ColoredPermutation,
            coeff: &'a CycloScalar,
        }
        let terms: Vec<Term<'_>> = self
            .terms
            .iter()
            .map(|(g, coeff)| Term { g, coeff })
            .collect();
        let mut st = s.serialize_struct("AlgebraElement", 2)?;
        st.serialize_field("ctx", &self.ctx)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

fn one_over_m(m: u32) -> CycloScalar {
    CycloScalar::from_rational(m, Rational::new(1.into(), m.into()))
}

/// The Jucys–Murphy group element `j_i` as an algebra element.
pub fn jm_j<S: Scalar>(ctx: GroupContext, i: usize) -> Result<AlgebraElement<S>> {
    AlgebraElement::from_group(ctx, ctx.jm_word(i)?)
}

/// `j̃_i` from `j̃_1 = 0`, `j̃_{k+1} = s_k j̃_k s_k + (1/m) Σ_q j_k^q s_k j_k^{m−q}`.
pub fn jm_jtilde<S: Scalar>(ctx: GroupContext, i: usize) -> Result<AlgebraElement<S>> {
    if !(1..=ctx.n).contains(&i) {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: ctx.n,
        });
    }
    let m = ctx.m;
    let weight = S::from_cyclo(one_over_m(m));
    let mut cur: AlgebraElement<S> = AlgebraElement::zero(ctx);
    for k in 1..i {
        let s = ctx.generator_s(k)?;
        let j = ctx.jm_word(k)?;
        let mut next = AlgebraElement::zero(ctx);
        for (g, c) in &cur.terms {
            next.add_term(s.compose(g).compose(&s), c.clone());
        }
        for q in 0..m {
            let g = j.pow(q).compose(&s).compose(&j.pow(m - q));
            next.add_term(g, weight.clone());
        }
        cur = next;
    }
    Ok(cur)
}

/// `bs_i(p, p', a, a') = s_i + δ_{p,p'} / (a − a')`.
pub fn baxterized_s<S: Scalar>(
    ctx: GroupContext,
    i: usize,
    p: &CycloScalar,
    p_prime: &CycloScalar,
    a: &S,
    a_prime: &S,
) -> Result<AlgebraElement<S>> {
    let s = AlgebraElement::from_group(ctx, ctx.generator_s(i)?)?;
    if p.equals(p_prime)? {
        let mut diff = a.clone();
        diff.add_assign_ref(&a_prime.neg_ref());
        if diff.is_zero() {
            return Err(Error::SingularSpectralParameters);
        }
        let shift = diff.inv()?;
        Ok(&s + &AlgebraElement::constant(ctx, shift))
    } else {
        Ok(s)
    }
}

fn check_root_of_unity(m: u32, p: &CycloScalar) -> Result<()> {
    if p.m() != m {
        return Err(Error::MixedModulus(p.m(), m));
    }
    if !p.pow(m as i64)?.is_one() {
        return Err(Error::InvalidParameter(format!(
            "{p} is not an {m}-th root of unity"
        )));
    }
    Ok(())
}

/// The eigenprojector `bj_i(p) = (1/m) Σ_k p^{m−k} j_i^k` of `j_i` for the
/// eigenvalue `p`.
pub fn bj<S: Scalar>(ctx: GroupContext, i: usize, p: &CycloScalar) -> Result<AlgebraElement<S>> {
    check_root_of_unity(ctx.m, p)?;
    let m = ctx.m;
    let j = ctx.jm_word(i)?;
    let inv_m = one_over_m(m);
    let mut out = AlgebraElement::zero(ctx);
    for k in 0..m {
        let c = &p.pow((m - k) as i64)? * &inv_m;
        out.add_term(j.pow(k), S::from_cyclo(c));
    }
    Ok(out)
}

/// `t(p) = bj_1(p)`.
pub fn t_of<S: Scalar>(ctx: GroupContext, p: &CycloScalar) -> Result<AlgebraElement<S>> {
    bj(ctx, 1, p)
}

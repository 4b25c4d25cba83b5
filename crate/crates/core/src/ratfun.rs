//! Multivariate polynomials and rational functions over Q(ζ_m) in the
//! spectral variables, with pole-cancelling substitution.
//!
//! A [`RatFun`] keeps its denominator as a product of monic factors. Sums take
//! the least common multiple of the factor sets, which keeps the products of
//! Baxterized elements from growing quadratically in size. No general
//! multivariate gcd is attempted: cancellation happens against whole linear
//! factors `v − q`, against the evaluation point during substitution, and by
//! univariate gcd once only one variable is left.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};

/// A spectral variable. `Var(i)` for `i ≥ 1` is `u_i`; `Var::U` is the free
/// variable `u` used by univariate constructions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub const U: Var = Var(0);

    pub fn spectral(i: usize) -> Var {
        Var(i as u32)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "u"),
            i => write!(f, "u{i}"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse exponent vector, sorted by variable, no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    fn with_power(&self, v: Var, e: u32) -> Monomial {
        if e == 0 {
            return self.clone();
        }
        self.times(&Monomial(vec![(v, e)]))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial over Q(ζ_m) with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiPoly {
    m: u32,
    terms: BTreeMap<Monomial, CycloScalar>,
}

impl MultiPoly {
    pub fn zero(m: u32) -> Self {
        MultiPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CycloScalar) -> Self {
        let mut p = Self::zero(c.m());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_integer(m: u32, n: i64) -> Self {
        Self::constant(CycloScalar::from_integer(m, n))
    }

    pub fn var(m: u32, v: Var) -> Self {
        let mut p = Self::zero(m);
        p.terms.insert(Monomial::var(v), CycloScalar::one(m));
        p
    }

    /// `v − c`.
    pub fn linear(v: Var, c: &CycloScalar) -> Self {
        &Self::var(c.m(), v) - &Self::constant(c.clone())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycloScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<CycloScalar> {
        match self.terms.len() {
            0 => Some(CycloScalar::zero(self.m)),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|mono| mono.vars()).collect()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|mono| mono.degree_in(v))
            .max()
            .unwrap_or(0)
    }

    fn insert_add(&mut self, mono: Monomial, c: CycloScalar) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                if !c.is_zero() {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += &c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.m);
        }
        MultiPoly {
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(CycloScalar::one(self.m));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates `v = c`, removing `v`.
    pub fn substitute(&self, v: Var, c: &CycloScalar) -> Self {
        let mut out = Self::zero(self.m);
        let mut powers: Vec<CycloScalar> = vec![CycloScalar::one(self.m)];
        for (mono, coeff) in &self.terms {
            let e = mono.degree_in(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * c;
                powers.push(next);
            }
            out.insert_add(mono.without(v), coeff * &powers[e]);
        }
        out
    }

    /// Coefficients of the powers of `v`, lowest first; each is free of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MultiPoly> {
        let mut out = vec![Self::zero(self.m); self.degree_in(v) as usize + 1];
        for (mono, coeff) in &self.terms {
            out[mono.degree_in(v) as usize].insert_add(mono.without(v), coeff.clone());
        }
        out
    }

    fn from_coefficients_in(m: u32, v: Var, coeffs: &[MultiPoly]) -> Self {
        let mut out = Self::zero(m);
        for (e, c) in coeffs.iter().enumerate() {
            for (mono, coeff) in &c.terms {
                out.insert_add(mono.with_power(v, e as u32), coeff.clone());
            }
        }
        out
    }

    /// Exact division by `v − q` where `q` does not involve `v`; `None` if
    /// the remainder is nonzero.
    pub fn div_linear(&self, v: Var, q: &MultiPoly) -> Option<MultiPoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let a = self.coefficients_in(v);
        let d = a.len() - 1;
        if d == 0 {
            return None;
        }
        // synthetic division: b_{d-1} = a_d, b_{k-1} = a_k + q b_k
        let mut b = vec![Self::zero(self.m); d];
        b[d - 1] = a[d].clone();
        for k in (1..d).rev() {
            b[k - 1] = &a[k] + &(q * &b[k]);
        }
        let rem = &a[0] + &(q * &b[0]);
        rem.is_zero()
            .then(|| Self::from_coefficients_in(self.m, v, &b))
    }

    /// Splits off the leading coefficient: `self = lead · monic`.
    pub fn monic(&self) -> (CycloScalar, MultiPoly) {
        let (_, lead) = self
            .terms
            .last_key_value()
            .expect("monic of zero polynomial");
        let lead = lead.clone();
        let inv = lead.inv().expect("nonzero leading coefficient");
        (lead, self.scale(&inv))
    }

    /// If `self = c·(v − q)` with `c` constant and `q` free of `v`, returns `(v, c, q)`.
    fn as_linear(&self) -> Option<(Var, CycloScalar, MultiPoly)> {
        for v in self.variables() {
            if self.degree_in(v) != 1 {
                continue;
            }
            let coeffs = self.coefficients_in(v);
            if let Some(c) = coeffs[1].as_constant() {
                let q = -&coeffs[0].scale(&c.inv().ok()?);
                return Some((v, c, q));
            }
        }
        None
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.insert_add(mono.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.insert_add(mono.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.m);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_add(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(mono, c)| match (mono.is_one(), c.is_one()) {
                (true, _) => format!("({c})"),
                (false, true) => format!("{mono:?}"),
                (false, false) => format!("({c})*{mono:?}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Univariate helpers over Q(ζ_m), coefficient lists lowest degree first.

fn uni_trim(mut p: Vec<CycloScalar>) -> Vec<CycloScalar> {
    while p.len() > 1 && p.last().is_some_and(CycloScalar::is_zero) {
        p.pop();
    }
    p
}

fn uni_divrem(a: &[CycloScalar], b: &[CycloScalar]) -> (Vec<CycloScalar>, Vec<CycloScalar>) {
    let m = b[0].m();
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![CycloScalar::zero(m)], a.to_vec());
    }
    let lead_inv = b[db].inv().expect("nonzero divisor");
    let mut rem = a.to_vec();
    let mut quot = vec![CycloScalar::zero(m); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] = &rem[i + j] - &(&c * bj);
        }
        quot[i] = c;
    }
    rem.truncate(db.max(1));
    (uni_trim(quot), uni_trim(rem))
}

fn uni_is_zero(p: &[CycloScalar]) -> bool {
    p.iter().all(CycloScalar::is_zero)
}

fn uni_gcd(a: Vec<CycloScalar>, b: Vec<CycloScalar>) -> Vec<CycloScalar> {
    let (mut r0, mut r1) = (uni_trim(a), uni_trim(b));
    while !uni_is_zero(&r1) {
        let (_, r) = uni_divrem(&r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
    }
    r0
}

fn to_uni(p: &MultiPoly, v: Var) -> Vec<CycloScalar> {
    p.coefficients_in(v)
        .into_iter()
        .map(|c| c.as_constant().expect("univariate polynomial"))
        .collect()
}

fn from_uni(m: u32, v: Var, coeffs: &[CycloScalar]) -> MultiPoly {
    let coeffs: Vec<MultiPoly> = coeffs.iter().cloned().map(MultiPoly::constant).collect();
    MultiPoly::from_coefficients_in(m, v, &coeffs)
}

/// A rational function `num / Π f^e` with monic non-constant factors `f`.
#[derive(Clone)]
pub struct RatFun {
    num: MultiPoly,
    den: BTreeMap<MultiPoly, u32>,
}

fn push_factor(den: &mut BTreeMap<MultiPoly, u32>, num: &mut MultiPoly, f: MultiPoly, e: u32) {
    if e == 0 {
        return;
    }
    if let Some(c) = f.as_constant() {
        let inv = c.inv().expect("zero denominator factor");
        *num = num.scale(&inv.pow(e as i64).unwrap());
        return;
    }
    let (lead, monic) = f.monic();
    if !lead.is_one() {
        *num = num.scale(&lead.inv().unwrap().pow(e as i64).unwrap());
    }
    *den.entry(monic).or_insert(0) += e;
}

fn expand_factors<'a>(m: u32, factors: impl Iterator<Item = (&'a MultiPoly, u32)>) -> MultiPoly {
    let mut acc = MultiPoly::constant(CycloScalar::one(m));
    for (f, e) in factors {
        if e > 0 {
            acc = &acc * &f.pow(e);
        }
    }
    acc
}

impl RatFun {
    pub fn zero(m: u32) -> Self {
        Self::from_poly(MultiPoly::zero(m))
    }

    pub fn one(m: u32) -> Self {
        Self::constant(CycloScalar::one(m))
    }

    pub fn constant(c: CycloScalar) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_integer(m: u32, n: i64) -> Self {
        Self::from_poly(MultiPoly::from_integer(m, n))
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        RatFun {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn var(m: u32, v: Var) -> Self {
        Self::from_poly(MultiPoly::var(m, v))
    }

    /// `num / den`; fails if `den` is zero.
    pub fn fraction(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = Self::from_poly(num);
        push_factor(&mut out.den, &mut out.num, den, 1);
        out.normalize_zero();
        Ok(out)
    }

    pub fn m(&self) -> u32 {
        self.num.m
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    /// The expanded denominator.
    pub fn denominator(&self) -> MultiPoly {
        expand_factors(self.m(), self.den.iter().map(|(f, &e)| (f, e)))
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&MultiPoly, u32)> {
        self.den.iter().map(|(f, &e)| (f, e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut vars = self.num.variables();
        for f in self.den.keys() {
            vars.extend(f.variables());
        }
        vars
    }

    fn normalize_zero(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
        }
    }

    fn cofactor(&self, lcm: &BTreeMap<MultiPoly, u32>) -> MultiPoly {
        expand_factors(
            self.m(),
            lcm.iter()
                .map(|(f, &e)| (f, e - self.den.get(f).copied().unwrap_or(0))),
        )
    }

    fn lcm_den(&self, other: &Self) -> BTreeMap<MultiPoly, u32> {
        let mut lcm = self.den.clone();
        for (f, &e) in &other.den {
            let slot = lcm.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        lcm
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        let mut out = RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        out.normalize_zero();
        out
    }

    pub fn reciprocal(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = self.denominator();
        let mut den = BTreeMap::new();
        push_factor(&mut den, &mut num, self.num.clone(), 1);
        let mut out = RatFun { num, den };
        out.reduce();
        Ok(out)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.reciprocal()?)
    }

    /// Cancels common factors that can be found without a multivariate gcd:
    /// whole linear factors `c·(v − q)` and, for univariate functions, the gcd
    /// of the numerator with each denominator factor.
    pub fn reduce(&mut self) {
        self.normalize_zero();
        if self.den.is_empty() {
            return;
        }
        let vars = self.variables();
        if vars.len() == 1 {
            self.reduce_univariate(*vars.iter().next().unwrap());
            return;
        }
        let factors: Vec<(MultiPoly, u32)> =
            self.den.iter().map(|(f, &e)| (f.clone(), e)).collect();
        for (f, e) in factors {
            let Some((v, c, q)) = f.as_linear() else {
                continue;
            };
            let mut removed = 0;
            while removed < e {
                match self.num.div_linear(v, &q) {
                    Some(quot) => {
                        self.num = quot.scale(&c.inv().unwrap());
                        removed += 1;
                    }
                    None => break,
                }
            }
            if removed == e {
                self.den.remove(&f);
            } else if removed > 0 {
                self.den.insert(f, e - removed);
            }
        }
    }

    fn reduce_univariate(&mut self, v: Var) {
        let m = self.m();
        loop {
            let mut changed = false;
            let factors: Vec<(MultiPoly, u32)> =
                self.den.iter().map(|(f, &e)| (f.clone(), e)).collect();
            for (f, e) in factors {
                let num_u = to_uni(&self.num, v);
                let f_u = to_uni(&f, v);
                let g = uni_gcd(num_u.clone(), f_u.clone());
                if g.len() <= 1 {
                    continue;
                }
                // f^e = (f/g)^e · g^e; one copy of g cancels against the numerator
                let (num_q, _) = uni_divrem(&num_u, &g);
                let (f_q, _) = uni_divrem(&f_u, &g);
                self.num = from_uni(m, v, &num_q);
                self.den.remove(&f);
                push_factor(&mut self.den, &mut self.num, from_uni(m, v, &f_q), e);
                push_factor(&mut self.den, &mut self.num, from_uni(m, v, &g), e - 1);
                changed = true;
                break;
            }
            if !changed {
                return;
            }
        }
    }

    /// Substitutes `v = value` after cancelling every power of `v − value`
    /// common to numerator and denominator. The variable is gone afterwards.
    pub fn cancel_and_substitute(&self, v: Var, value: &CycloScalar) -> Result<Self> {
        if self.num.is_zero() {
            return Ok(Self::zero(self.m()));
        }
        let point = MultiPoly::constant(value.clone());
        let mut multiplicity = 0u32;
        let mut reduced = Vec::with_capacity(self.den.len());
        for (f, &e) in &self.den {
            let mut g = f.clone();
            while g.degree_in(v) > 0 {
                match g.div_linear(v, &point) {
                    Some(q) => {
                        g = q;
                        multiplicity += e;
                    }
                    None => break,
                }
            }
            reduced.push((g, e));
        }
        let mut num = self.num.clone();
        for _ in 0..multiplicity {
            num = num
                .div_linear(v, &point)
                .ok_or_else(|| Error::SingularSubstitution {
                    var: v.to_string(),
                    value: value.to_string(),
                })?;
        }
        let mut out = Self::from_poly(num.substitute(v, value));
        for (g, e) in reduced {
            push_factor(&mut out.den, &mut out.num, g.substitute(v, value), e);
        }
        out.reduce();
        Ok(out)
    }

    /// The value of a function without free variables.
    pub fn evaluate_constant(&self) -> Result<CycloScalar> {
        let vars = self.variables();
        if !vars.is_empty() {
            let names: Vec<String> = vars.iter().map(Var::to_string).collect();
            return Err(Error::FreeVariables(names.join(", ")));
        }
        Ok(self.num.as_constant().expect("constant numerator"))
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        if self.m() != other.m() {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        let lcm = self.lcm_den(other);
        &self.num * &self.cofactor(&lcm) == &other.num * &other.cofactor(&lcm)
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let mut out = RatFun {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
            out.normalize_zero();
            return out;
        }
        let lcm = self.lcm_den(rhs);
        let num = &(&self.num * &self.cofactor(&lcm)) + &(&rhs.num * &rhs.cofactor(&lcm));
        let mut out = RatFun { num, den: lcm };
        out.normalize_zero();
        out
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero(self.m());
        }
        let mut den = self.den.clone();
        for (f, &e) in &rhs.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        RatFun {
            num: &self.num * &rhs.num,
            den,
        }
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(p, &e)| {
                if e == 1 {
                    format!("({p})")
                } else {
                    format!("({p})^{e}")
                }
            })
            .collect();
        write!(f, "({}) / {}", self.num, den.join("*"))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const M: u32 = 3;

    fn c(n: i64) -> CycloScalar {
        CycloScalar::from_integer(M, n)
    }

    fn u() -> RatFun {
        RatFun::var(M, Var::U)
    }

    fn k(n: i64) -> RatFun {
        RatFun::from_integer(M, n)
    }

    fn lin(v: Var, n: i64) -> RatFun {
        RatFun::from_poly(MultiPoly::linear(v, &c(n)))
    }

    #[test]
    fn field_operations() {
        let inv_u = u().reciprocal().unwrap();
        assert!((&inv_u + &(-&inv_u)).is_zero());

        let mut ratio = lin(Var::U, 1).checked_div(&lin(Var::U, 1)).unwrap();
        ratio.reduce();
        assert_eq!(ratio.denominator_factors().count(), 0);
        assert_eq!(ratio.evaluate_constant().unwrap(), c(1));

        let x = lin(Var::U, 5);
        let prod = &x.reciprocal().unwrap() * &x;
        assert_eq!(prod, k(1));
        assert_eq!(k(0).reciprocal().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn substitution_cancels_linear_factors() {
        let f = (&lin(Var::U, 1) * &lin(Var::U, -2))
            .checked_div(&lin(Var::U, 1))
            .unwrap();
        let at = f.cancel_and_substitute(Var::U, &c(1)).unwrap();
        assert_eq!(at.evaluate_constant().unwrap(), c(3));

        let g = lin(Var::U, 1)
            .checked_div(&(&lin(Var::U, 1) * &lin(Var::U, 1)))
            .unwrap();
        assert!(matches!(
            g.cancel_and_substitute(Var::U, &c(1)),
            Err(Error::SingularSubstitution { .. })
        ));
    }

    #[test]
    fn substitution_is_sequential() {
        let (u1, u2) = (Var::spectral(1), Var::spectral(2));
        let diff = &RatFun::var(M, u2) - &RatFun::var(M, u1);
        let sum = &RatFun::var(M, u2) + &RatFun::var(M, u1);
        let f = diff.checked_div(&sum).unwrap();
        let after_first = f.cancel_and_substitute(u1, &c(0)).unwrap();
        assert!(!after_first.variables().contains(&u1));
        for value in [0, 1, -4] {
            let v = after_first.cancel_and_substitute(u2, &c(value)).unwrap();
            assert_eq!(v.evaluate_constant().unwrap(), c(1));
        }
    }

    #[test]
    fn constants() {
        let six_fourths = k(6).checked_div(&k(4)).unwrap();
        assert_eq!(
            six_fourths.evaluate_constant().unwrap(),
            CycloScalar::from_rational(M, num_rational::BigRational::new(3.into(), 2.into()))
        );
        let z = RatFun::constant(CycloScalar::zeta(M));
        assert_eq!(z.evaluate_constant().unwrap(), CycloScalar::zeta(M));
        let zero = (&k(1) - &k(1)).checked_div(&k(5)).unwrap();
        assert!(zero.evaluate_constant().unwrap().is_zero());
        assert!(matches!(
            u().evaluate_constant(),
            Err(Error::FreeVariables(_))
        ));
    }

    #[test]
    fn univariate_gcd_cancels_partial_factors() {
        // (u-1)(u+2) / (u^2 - 1) -> (u+2)/(u+1)
        let num = &lin(Var::U, 1) * &lin(Var::U, -2);
        let den =
            RatFun::from_poly(&MultiPoly::var(M, Var::U).pow(2) - &MultiPoly::from_integer(M, 1));
        let mut f = num.checked_div(&den).unwrap();
        f.reduce();
        assert_eq!(f.numerator(), &MultiPoly::linear(Var::U, &c(-2)));
        assert_eq!(f.denominator(), MultiPoly::linear(Var::U, &c(-1)));
        assert_eq!(
            f.cancel_and_substitute(Var::U, &c(1))
                .unwrap()
                .evaluate_constant()
                .unwrap(),
            CycloScalar::from_rational(M, num_rational::BigRational::new(3.into(), 2.into()))
        );
    }

    #[test]
    fn linear_factor_with_polynomial_offset() {
        // (u2^2 - u1^2) / (u2 - u1) = u2 + u1 without any substitution
        let (u1, u2) = (
            RatFun::var(M, Var::spectral(1)),
            RatFun::var(M, Var::spectral(2)),
        );
        let num = &(&u2 * &u2) - &(&u1 * &u1);
        let mut f = num.checked_div(&(&u2 - &u1)).unwrap();
        f.reduce();
        assert_eq!(f.denominator_factors().count(), 0);
        assert_eq!(f, &u2 + &u1);
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 0..4).prop_map(|terms| {
            terms
                .into_iter()
                .fold(MultiPoly::zero(M), |acc, (cf, e1, e2)| {
                    let mono = &MultiPoly::var(M, Var::spectral(1)).pow(e1)
                        * &MultiPoly::var(M, Var::spectral(2)).pow(e2);
                    &acc + &mono.scale(&c(cf))
                })
        })
    }

    proptest! {
        #[test]
        fn cancel_removes_artificial_pole(p in small_poly(), at in -3i64..=3) {
            let v = Var::spectral(1);
            let factor = MultiPoly::linear(v, &c(at));
            let f = RatFun::fraction(&p * &factor, factor).unwrap();
            let got = f.cancel_and_substitute(v, &c(at)).unwrap();
            prop_assert_eq!(got, RatFun::from_poly(p.substitute(v, &c(at))));
        }

        #[test]
        fn substitution_is_multiplicative(
            p in small_poly(), q in small_poly(), dp in small_poly(), dq in small_poly(), at in -3i64..=3
        ) {
            let v = Var::spectral(2);
            prop_assume!(!dp.substitute(v, &c(at)).is_zero() && !dq.substitute(v, &c(at)).is_zero());
            let f = RatFun::fraction(p, dp).unwrap();
            let g = RatFun::fraction(q, dq).unwrap();
            let lhs = (&f * &g).cancel_and_substitute(v, &c(at)).unwrap();
            let rhs = &f.cancel_and_substitute(v, &c(at)).unwrap() * &g.cancel_and_substitute(v, &c(at)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitution_commutes_with_addition(
            p in small_poly(), q in small_poly(), dp in small_poly(), dq in small_poly(), a in -3i64..=3, b in -3i64..=3
        ) {
            // evaluate both variables and compare with pointwise evaluation of the parts
            let (v1, v2) = (Var::spectral(1), Var::spectral(2));
            let regular = |d: &MultiPoly| !d.substitute(v1, &c(a)).substitute(v2, &c(b)).is_zero();
            prop_assume!(regular(&dp) && regular(&dq));
            let f = RatFun::fraction(p, dp).unwrap();
            let g = RatFun::fraction(q, dq).unwrap();
            let eval = |r: &RatFun| {
                r.cancel_and_substitute(v1, &c(a)).unwrap()
                    .cancel_and_substitute(v2, &c(b)).unwrap()
                    .evaluate_constant().unwrap()
            };
            prop_assert_eq!(eval(&(&f + &g)), &eval(&f) + &eval(&g));
            prop_assert_eq!(eval(&(&f * &g)), &eval(&f) * &eval(&g));
        }
    }
}

//! Exact arithmetic in the cyclotomic field Q(ζ_m).
//!
//! An element is stored in the power basis `1, ζ, …, ζ^(d−1)` where `d` is the
//! degree of the m-th cyclotomic polynomial Φ_m. Each operation reduces modulo
//! Φ_m, so the coefficient vector is a canonical form: two elements are equal
//! exactly when their vectors are.
//!
//! Working modulo Φ_m rather than `x^m − 1` keeps the quotient a field for
//! composite `m`, which inversion and elimination over the field rely on.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// The m-th cyclotomic polynomial, constant coefficient first.
///
/// Computed as `(x^m − 1) / Π_{d | m, d < m} Φ_d`; every division is exact
/// because all polynomials involved are monic.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic polynomial of order 0");
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = -BigInt::one();
    p[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = div_monic_exact(&p, &field(d).modulus);
        }
    }
    p
}

fn div_monic_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Degree of Φ_m, i.e. Euler's totient of `m`.
pub fn field_degree(m: u32) -> usize {
    field(m).degree()
}

#[derive(Debug)]
struct FieldData {
    m: u32,
    modulus: Vec<BigInt>,
    /// `powers[k]` is ζ^k in the power basis, for `k < max(m, 2d − 1)`.
    powers: Vec<Vec<BigInt>>,
}

impl FieldData {
    fn new(m: u32) -> Self {
        let modulus = cyclotomic_polynomial(m);
        let d = modulus.len() - 1;
        let count = (m as usize).max(2 * d - 1);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![BigInt::zero(); d];
        cur[0] = BigInt::one();
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and fold the overflow back with the monic modulus
            let top = cur[d - 1].clone();
            for j in (1..d).rev() {
                cur[j] = cur[j - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for j in 0..d {
                    cur[j] -= &top * &modulus[j];
                }
            }
        }
        FieldData { m, modulus, powers }
    }

    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

fn field(m: u32) -> Arc<FieldData> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let cache = FIELDS.get_or_init(Default::default);
    if let Some(f) = cache.lock().unwrap().get(&m) {
        return Arc::clone(f);
    }
    // build outside the lock: construction recurses into smaller fields
    let built = Arc::new(FieldData::new(m));
    let mut guard = cache.lock().unwrap();
    Arc::clone(guard.entry(m).or_insert(built))
}

/// An element of Q(ζ_m) in canonical power-basis form.
#[derive(Clone)]
pub struct CycloScalar {
    field: Arc<FieldData>,
    coeffs: Vec<Rational>,
}

impl CycloScalar {
    pub fn zero(m: u32) -> Self {
        let field = field(m);
        let coeffs = vec![Rational::zero(); field.degree()];
        CycloScalar { field, coeffs }
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, Rational::one())
    }

    pub fn from_rational(m: u32, q: Rational) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = q;
        z
    }

    pub fn from_integer(m: u32, n: i64) -> Self {
        Self::from_rational(m, Rational::from_integer(BigInt::from(n)))
    }

    /// Builds an element from power-basis coefficients, reducing modulo Φ_m
    /// if more than `deg Φ_m` coefficients are given.
    pub fn from_coeffs(m: u32, coeffs: Vec<Rational>) -> Self {
        let mut acc = Self::zero(m);
        let d = acc.field.degree();
        if coeffs.len() <= d {
            for (slot, c) in acc.coeffs.iter_mut().zip(coeffs) {
                *slot = c;
            }
            return acc;
        }
        for (k, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                acc += &(root_of_unity(m, k as i64) * &Self::from_rational(m, c));
            }
        }
        acc
    }

    /// ζ_m itself.
    pub fn zeta(m: u32) -> Self {
        root_of_unity(m, 1)
    }

    pub fn m(&self) -> u32 {
        self.field.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Structural comparison of canonical forms; fails on elements of different fields.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.same_field(other)?;
        Ok(self.coeffs == other.coeffs)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.m() == other.m() {
            Ok(())
        } else {
            Err(Error::MixedModulus(self.m(), other.m()))
        }
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.m(),
            other.m(),
            "arithmetic between Q(ζ_{}) and Q(ζ_{})",
            self.m(),
            other.m()
        );
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.m(), q.recip()));
        }
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        // a·s ≡ g (mod Φ_m) with g a nonzero constant, since Φ_m is irreducible
        let (g, s) = ext_gcd(trim(self.coeffs.clone()), modulus);
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let coeffs = s.into_iter().map(|c| c * &scale).collect();
        Ok(Self::from_coeffs(self.m(), coeffs))
    }

    pub fn pow(&self, exp: i64) -> Result<Self> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(self.m());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloScalar {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }
}

/// ζ_m^k in canonical form; `k` is taken modulo `m`.
pub fn root_of_unity(m: u32, k: i64) -> CycloScalar {
    let field = field(m);
    let idx = k.rem_euclid(m as i64) as usize;
    let coeffs = field.powers[idx]
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    CycloScalar { field, coeffs }
}

/// The k-th position value ξ_k = ζ_m^(k−1), for components `k = 1..=m`.
pub fn position_root(m: u32, k: usize) -> CycloScalar {
    root_of_unity(m, k as i64 - 1)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![Rational::zero()], a.to_vec());
    }
    let lead_inv = b[db].recip();
    let mut rem = a.to_vec();
    let mut quot = vec![Rational::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    rem.truncate(db.max(1));
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Returns `(g, s)` with `a·s ≡ g (mod b)`, `g = gcd(a, b)` up to a unit.
fn ext_gcd(a: Vec<Rational>, b: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![Rational::one()], vec![Rational::zero()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m() && self.coeffs == other.coeffs
    }
}

impl Eq for CycloScalar {}

impl PartialOrd for CycloScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycloScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m()
            .cmp(&other.m())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl<'a> Add<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&CycloScalar> for CycloScalar {
    fn add_assign(&mut self, rhs: &CycloScalar) {
        self.assert_same_field(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl<'a> Sub<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        self.assert_same_field(rhs);
        CycloScalar {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        self.assert_same_field(rhs);
        let d = self.coeffs.len();
        if d == 1 {
            return CycloScalar {
                field: Arc::clone(&self.field),
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            };
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut coeffs: Vec<Rational> = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (slot, r) in coeffs.iter_mut().zip(&self.field.powers[k]) {
                if !r.is_zero() {
                    *slot += c * Rational::from_integer(r.clone());
                }
            }
        }
        CycloScalar {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: CycloScalar) -> CycloScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if j == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{j}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.m())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    m: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycloScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson {
            m: self.m(),
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycloScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CycloJson::deserialize(deserializer)?;
        if raw.m == 0 {
            return Err(D::Error::custom("m must be positive"));
        }
        let d = field_degree(raw.m);
        if raw.coeffs.len() != d {
            return Err(D::Error::custom(format!(
                "expected {d} coefficients for m = {}, got {}",
                raw.m,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(CycloScalar::from_coeffs(raw.m, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_poly(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), int_poly(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), int_poly(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(3), int_poly(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(6), int_poly(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), int_poly(&[1, 0, -1, 0, 1]));
        assert_eq!(field_degree(5), 4);
    }

    #[test]
    fn roots_of_unity_reduce() {
        assert_eq!(root_of_unity(4, 2), CycloScalar::from_integer(4, -1));
        assert!(root_of_unity(3, 3).is_one());
        let z2 = root_of_unity(3, 2);
        assert_eq!(z2.coeffs(), &[q(-1, 1), q(-1, 1)]);
        assert_eq!(root_of_unity(5, -1), root_of_unity(5, 4));
        assert!(root_of_unity(1, 7).is_one());
    }

    #[test]
    fn field_operations() {
        let i = CycloScalar::zeta(4);
        assert_eq!(&i * &i, CycloScalar::from_integer(4, -1));

        let one = CycloScalar::one(3);
        let z = CycloScalar::zeta(3);
        assert_eq!((&one + &z).inv().unwrap(), -&z);

        assert!((CycloScalar::zeta(2) + CycloScalar::one(2)).is_zero());
        assert_eq!(CycloScalar::zero(3).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn comparisons() {
        let z = CycloScalar::zeta(3);
        let lhs = &z + &root_of_unity(3, 2);
        assert!(lhs.equals(&CycloScalar::from_integer(3, -1)).unwrap());
        assert!(CycloScalar::from_rational(1, q(0, 1)).is_zero());
        assert!(!CycloScalar::zeta(2).equals(&CycloScalar::one(2)).unwrap());
        assert_eq!(
            CycloScalar::one(2).equals(&CycloScalar::one(3)),
            Err(Error::MixedModulus(2, 3))
        );
    }

    #[test]
    fn root_orthogonality() {
        for m in 1..=8u32 {
            let zm = CycloScalar::zeta(m);
            assert!(zm.pow(m as i64).unwrap().is_one());
            for j in 0..(2 * m as i64) {
                let mut s = CycloScalar::zero(m);
                for k in 0..m as i64 {
                    s += &root_of_unity(m, j * k);
                }
                let expected = if j % m as i64 == 0 { m as i64 } else { 0 };
                assert_eq!(s, CycloScalar::from_integer(m, expected), "m={m} j={j}");
            }
        }
    }

    #[test]
    fn json_shape() {
        let x = &CycloScalar::zeta(3).scale(&q(-3, 4)) + &CycloScalar::one(3);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"m":3,"coeffs":["1/1","-3/4"]}"#);
        let back: CycloScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycloScalar>(r#"{"m":3,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn display() {
        let x = &CycloScalar::zeta(3).scale(&q(-3, 4)) + &CycloScalar::from_integer(3, 2);
        assert_eq!(x.to_string(), "2 - 3/4*z");
        assert_eq!(CycloScalar::zero(5).to_string(), "0");
    }

    fn element(m: u32) -> impl Strategy<Value = CycloScalar> {
        let d = field_degree(m);
        prop::collection::vec((-6i64..=6, 1i64..=4), d).prop_map(move |cs| {
            CycloScalar::from_coeffs(m, cs.into_iter().map(|(n, d)| q(n, d)).collect())
        })
    }

    fn modulus() -> impl Strategy<Value = u32> {
        prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 12])
    }

    proptest! {
        #[test]
        fn mul_associative((a, b, c) in modulus().prop_flat_map(|m| (element(m), element(m), element(m)))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn distributive((a, b, c) in modulus().prop_flat_map(|m| (element(m), element(m), element(m)))) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn inverse_is_two_sided(a in modulus().prop_flat_map(element)) {
            prop_assume!(!a.is_zero());
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
            prop_assert!((&inv * &a).is_one());
        }

        #[test]
        fn long_coefficient_vectors_reduce(m in modulus(), cs in prop::collection::vec(-5i64..=5, 1..20)) {
            // Σ c_k ζ^k evaluated by direct powering matches the reduced constructor
            let direct = cs.iter().enumerate().fold(CycloScalar::zero(m), |acc, (k, &c)| {
                &acc + &(&root_of_unity(m, k as i64) * &CycloScalar::from_integer(m, c))
            });
            let built = CycloScalar::from_coeffs(m, cs.iter().map(|&c| q(c, 1)).collect());
            prop_assert_eq!(direct, built);
        }
    }
}

//! Elements of the complex reflection group G(m,1,N).
//!
//! An element is stored as a monomial matrix `diag(ζ^a_1, …, ζ^a_N) · P_π`,
//! i.e. a permutation together with a color vector of residues mod `m`. This
//! pair is a canonical form, so elements can be hashed and ordered without any
//! word rewriting. Generators: `s_i` swaps strands `i, i+1`; `t` colors strand 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the group order for exhaustive constructions.
pub const DEFAULT_SIZE_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupContext {
    pub m: u32,
    pub n: usize,
}

impl GroupContext {
    pub fn new(m: u32, n: usize) -> Result<Self> {
        if m == 0 || m > 255 {
            return Err(Error::InvalidParameter(format!(
                "m = {m} must lie in 1..=255"
            )));
        }
        if n > 255 {
            return Err(Error::InvalidParameter(format!(
                "N = {n} must be at most 255"
            )));
        }
        Ok(GroupContext { m, n })
    }

    /// `m^N · N!`, or `None` if it does not fit in 128 bits.
    pub fn order(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for k in 1..=self.n as u128 {
            acc = acc.checked_mul(k)?.checked_mul(self.m as u128)?;
        }
        Some(acc)
    }

    pub fn check_size(&self, limit: u64) -> Result<()> {
        match self.order() {
            Some(o) if o <= limit as u128 => Ok(()),
            o => Err(Error::SizeLimitExceeded {
                order: o.map_or_else(|| "> 2^128".to_string(), |o| o.to_string()),
                limit,
            }),
        }
    }

    pub fn identity(&self) -> ColoredPermutation {
        ColoredPermutation {
            perm: (0..self.n as u8).collect(),
            colors: vec![0; self.n],
            m: self.m as u8,
        }
    }

    fn check_index(&self, i: usize, max: usize) -> Result<()> {
        if (1..=max).contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, max })
        }
    }

    /// The simple transposition `s_i = (i, i+1)`, `1 ≤ i ≤ N − 1`.
    pub fn generator_s(&self, i: usize) -> Result<ColoredPermutation> {
        self.check_index(i, self.n.saturating_sub(1))?;
        let mut g = self.identity();
        g.perm.swap(i - 1, i);
        Ok(g)
    }

    /// The diagonal generator `t`, coloring the first strand.
    pub fn generator_t(&self) -> Result<ColoredPermutation> {
        self.check_index(1, self.n)?;
        let mut g = self.identity();
        g.colors[0] = 1 % g.m;
        Ok(g)
    }

    /// `j_i = s_{i−1} ⋯ s_1 t s_1 ⋯ s_{i−1}`, built by the defining recursion
    /// `j_1 = t`, `j_{i+1} = s_i j_i s_i`.
    pub fn jm_word(&self, i: usize) -> Result<ColoredPermutation> {
        self.check_index(i, self.n)?;
        let mut j = self.generator_t()?;
        for k in 1..i {
            let s = self.generator_s(k)?;
            j = s.compose(&j).compose(&s);
        }
        Ok(j)
    }

    /// Product of simple transpositions in the given order, e.g. `[3, 2, 1]`
    /// is `s_3 s_2 s_1`. The empty word is the identity.
    pub fn s_word(&self, word: &[usize]) -> Result<ColoredPermutation> {
        let mut g = self.identity();
        for &i in word {
            g = g.compose(&self.generator_s(i)?);
        }
        Ok(g)
    }

    pub fn contains(&self, g: &ColoredPermutation) -> bool {
        g.m as u32 == self.m && g.perm.len() == self.n
    }

    /// Every element exactly once, ordered lexicographically by
    /// `(perm, colors)`.
    pub fn enumerate(&self, limit: u64) -> Result<Vec<ColoredPermutation>> {
        self.check_size(limit)?;
        let n = self.n;
        let mut out = Vec::with_capacity(self.order().unwrap_or(0) as usize);
        let mut perm: Vec<u8> = (0..n as u8).collect();
        loop {
            let mut colors = vec![0u8; n];
            loop {
                out.push(ColoredPermutation {
                    perm: perm.clone(),
                    colors: colors.clone(),
                    m: self.m as u8,
                });
                if !odometer(&mut colors, self.m as u8) {
                    break;
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(out)
    }
}

fn odometer(digits: &mut [u8], base: u8) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn next_permutation(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

pub fn enumerate_group(ctx: &GroupContext, limit: u64) -> Result<Vec<ColoredPermutation>> {
    ctx.enumerate(limit)
}

/// Canonical form of an element of G(m,1,N).
///
/// Ordering is lexicographic on `(perm, colors)`, which is the deterministic
/// group order used for enumeration and serialization.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredPermutation {
    // 0-based images
    perm: Vec<u8>,
    colors: Vec<u8>,
    m: u8,
}

impl ColoredPermutation {
    /// Builds an element from 1-based images and colors; colors are reduced mod `m`.
    pub fn new(ctx: &GroupContext, perm: &[usize], colors: &[u32]) -> Result<Self> {
        let n = ctx.n;
        if perm.len() != n || colors.len() != n {
            return Err(Error::InvalidParameter(format!(
                "expected {n} images and {n} colors"
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if !(1..=n).contains(&p) || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        Ok(ColoredPermutation {
            perm: perm.iter().map(|&p| (p - 1) as u8).collect(),
            colors: colors.iter().map(|&c| (c % ctx.m) as u8).collect(),
            m: ctx.m as u8,
        })
    }

    pub fn strands(&self) -> usize {
        self.perm.len()
    }

    /// 1-based images `π(1), …, π(N)`.
    pub fn perm(&self) -> Vec<usize> {
        self.perm.iter().map(|&p| p as usize + 1).collect()
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn is_identity(&self) -> bool {
        self.colors.iter().all(|&c| c == 0)
            && self.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.m != other.m || self.perm.len() != other.perm.len() {
            return Err(Error::ContextMismatch);
        }
        Ok(self.compose(other))
    }

    /// Monomial-matrix product; the caller guarantees matching contexts.
    pub(crate) fn compose(&self, other: &Self) -> Self {
        let n = self.perm.len();
        let mut perm = vec![0u8; n];
        let mut colors = self.colors.clone();
        for j in 0..n {
            let img = self.perm[other.perm[j] as usize];
            perm[j] = img;
            // color of h at strand j travels to π_g(j)
            let slot = self.perm[j] as usize;
            colors[slot] = (colors[slot] + other.colors[j]) % self.m;
        }
        ColoredPermutation {
            perm,
            colors,
            m: self.m,
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.perm.len();
        let mut perm = vec![0u8; n];
        let mut colors = vec![0u8; n];
        for i in 0..n {
            let p = self.perm[i] as usize;
            perm[p] = i as u8;
            colors[i] = (self.m - self.colors[p] % self.m) % self.m;
        }
        ColoredPermutation {
            perm,
            colors,
            m: self.m,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = ColoredPermutation {
            perm: (0..self.perm.len() as u8).collect(),
            colors: vec![0; self.perm.len()],
            m: self.m,
        };
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }
}

impl fmt::Debug for ColoredPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.perm(), self.colors)
    }
}

#[derive(Serialize, Deserialize)]
struct ColoredPermutationJson {
    perm: Vec<usize>,
    colors: Vec<u32>,
}

impl Serialize for ColoredPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ColoredPermutationJson {
            perm: self.perm(),
            colors: self.colors.iter().map(|&c| c as u32).collect(),
        }
        .serialize(s)
    }
}

impl ColoredPermutation {
    /// Parses `{"perm": [...], "colors": [...]}` within a context.
    pub fn from_json(ctx: &GroupContext, value: &serde_json::Value) -> Result<Self> {
        let raw: ColoredPermutationJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(ctx, &raw.perm, &raw.colors)
    }
}

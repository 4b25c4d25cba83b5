//! m-partitions, standard m-tableaux and their numerical data.
//!
//! A node carries its component index `pos ∈ 1..=m` together with a row and
//! column inside that component's Young diagram. Its content is `col − row`
//! and its position value is the root of unity ξ_pos = ζ_m^(pos−1).

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cyclo::{position_root, CycloScalar, Rational};
use crate::error::{Error, Result};
use crate::ratfun::{MultiPoly, RatFun, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiNode {
    pub pos: usize,
    pub row: usize,
    pub col: usize,
}

impl MultiNode {
    pub fn new(pos: usize, row: usize, col: usize) -> Self {
        MultiNode { pos, row, col }
    }

    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }

    pub fn position_value(&self, m: u32) -> CycloScalar {
        position_root(m, self.pos)
    }
}

impl fmt::Display for MultiNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(pos {}, row {}, col {})", self.pos, self.row, self.col)
    }
}

/// An m-tuple of partitions. Serialized as nested arrays, empty components
/// included: `[[2,1],[1]]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct MultiPartition {
    components: Vec<Vec<usize>>,
}

impl MultiPartition {
    pub fn new(components: Vec<Vec<usize>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidShape("need at least one component".into()));
        }
        for (k, part) in components.iter().enumerate() {
            if part.contains(&0) || part.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidShape(format!(
                    "component {} = {part:?} is not a partition",
                    k + 1
                )));
            }
        }
        Ok(MultiPartition { components })
    }

    pub fn empty(m: usize) -> Self {
        MultiPartition {
            components: vec![Vec::new(); m],
        }
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn size(&self) -> usize {
        self.components.iter().flatten().sum()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn contains(&self, node: &MultiNode) -> bool {
        node.pos >= 1
            && node.pos <= self.m()
            && node.row >= 1
            && node.col >= 1
            && self.components[node.pos - 1]
                .get(node.row - 1)
                .is_some_and(|&len| node.col <= len)
    }

    /// Nodes in component order, then row-major.
    pub fn nodes(&self) -> Vec<MultiNode> {
        let mut out = Vec::with_capacity(self.size());
        for (k, part) in self.components.iter().enumerate() {
            for (r, &len) in part.iter().enumerate() {
                for c in 1..=len {
                    out.push(MultiNode::new(k + 1, r + 1, c));
                }
            }
        }
        out
    }

    fn is_addable(&self, node: &MultiNode) -> bool {
        let Some(part) = self.components.get(node.pos.wrapping_sub(1)) else {
            return false;
        };
        let row_len = part.get(node.row - 1).copied().unwrap_or(0);
        if node.col != row_len + 1 || node.row > part.len() + 1 {
            return false;
        }
        node.row == 1 || part[node.row - 2] >= node.col
    }

    fn with_node(&self, node: &MultiNode) -> MultiPartition {
        let mut out = self.clone();
        let part = &mut out.components[node.pos - 1];
        if node.row > part.len() {
            part.push(1);
        } else {
            part[node.row - 1] += 1;
        }
        out
    }

    fn without_node(&self, node: &MultiNode) -> MultiPartition {
        let mut out = self.clone();
        let part = &mut out.components[node.pos - 1];
        part[node.row - 1] -= 1;
        if part[node.row - 1] == 0 {
            part.pop();
        }
        out
    }
}

impl<'de> Deserialize<'de> for MultiPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let components = Vec::<Vec<usize>>::deserialize(d)?;
        MultiPartition::new(components).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|p| {
                if p.is_empty() {
                    "∅".to_string()
                } else {
                    format!(
                        "({})",
                        p.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                    )
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn partitions(n: usize, max_part: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max_part)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All m-partitions of total size `n`: larger first components come first,
/// and within a component partitions are in reverse lexicographic order.
pub fn enumerate_multipartitions(m: usize, n: usize) -> Vec<MultiPartition> {
    fn go(m: usize, n: usize) -> Vec<Vec<Vec<usize>>> {
        if m == 1 {
            return partitions(n, n).into_iter().map(|p| vec![p]).collect();
        }
        let mut out = Vec::new();
        for size in (0..=n).rev() {
            for head in partitions(size, size) {
                for mut tail in go(m - 1, n - size) {
                    tail.insert(0, head.clone());
                    out.push(tail);
                }
            }
        }
        out
    }
    assert!(m >= 1, "m-partitions need m ≥ 1");
    go(m, n)
        .into_iter()
        .map(|components| MultiPartition { components })
        .collect()
}

/// Nodes that can be added while keeping an m-partition, in node order.
pub fn addable_nodes(shape: &MultiPartition) -> Vec<MultiNode> {
    let mut out = Vec::new();
    for (k, part) in shape.components.iter().enumerate() {
        for r in 0..=part.len() {
            let node = MultiNode::new(k + 1, r + 1, part.get(r).copied().unwrap_or(0) + 1);
            if shape.is_addable(&node) {
                out.push(node);
            }
        }
    }
    out
}

/// Nodes whose removal leaves an m-partition, in node order.
pub fn removable_nodes(shape: &MultiPartition) -> Vec<MultiNode> {
    let mut out = Vec::new();
    for (k, part) in shape.components.iter().enumerate() {
        for (r, &len) in part.iter().enumerate() {
            if part.get(r + 1).copied().unwrap_or(0) < len {
                out.push(MultiNode::new(k + 1, r + 1, len));
            }
        }
    }
    out
}

/// Hook length of `node`, computed inside its own component.
pub fn hook_length(shape: &MultiPartition, node: &MultiNode) -> Result<usize> {
    if !shape.contains(node) {
        return Err(Error::NodeNotInShape(node.to_string()));
    }
    let part = &shape.components[node.pos - 1];
    let arm = part[node.row - 1] - node.col;
    let leg = part[node.row..]
        .iter()
        .take_while(|&&len| len >= node.col)
        .count();
    Ok(arm + leg + 1)
}

/// `f = (Π hook lengths)^{−1}`.
pub fn f_constant(shape: &MultiPartition) -> Rational {
    let prod = shape.nodes().iter().fold(BigInt::one(), |acc, node| {
        acc * BigInt::from(hook_length(shape, node).expect("own node"))
    });
    Rational::new(BigInt::one(), prod)
}

/// A standard m-tableau, stored as the node holding each label `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StandardMultiTableau {
    m: usize,
    entries: Vec<MultiNode>,
    shape: MultiPartition,
}

impl StandardMultiTableau {
    /// Validates that every prefix of `entries` fills an m-partition.
    pub fn new(m: usize, entries: Vec<MultiNode>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidTableau("m must be positive".into()));
        }
        let mut shape = MultiPartition::empty(m);
        for (label, node) in entries.iter().enumerate() {
            if node.pos == 0 || node.pos > m || node.row == 0 || node.col == 0 {
                return Err(Error::InvalidTableau(format!(
                    "label {} sits at {node}, outside an {m}-diagram",
                    label + 1
                )));
            }
            if !shape.is_addable(node) {
                return Err(Error::InvalidTableau(format!(
                    "label {} at {node} breaks standardness",
                    label + 1
                )));
            }
            shape = shape.with_node(node);
        }
        Ok(StandardMultiTableau { m, entries, shape })
    }

    pub fn empty(m: usize) -> Self {
        StandardMultiTableau {
            m,
            entries: Vec::new(),
            shape: MultiPartition::empty(m),
        }
    }

    /// Parses `[{"pos":k,"row":x,"col":y}, ...]` in label order.
    pub fn from_json(m: usize, json: &str) -> Result<Self> {
        let entries: Vec<MultiNode> =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(m, entries)
    }

    /// Builds a tableau from the labels placed in each component, row by row:
    /// `[[[1, 3]], [[2]]]` is the 2-tableau with `1 3` in the first diagram and
    /// `2` in the second.
    pub fn from_rows(rows: &[Vec<Vec<usize>>]) -> Result<Self> {
        let n: usize = rows.iter().flatten().map(Vec::len).sum();
        let mut entries = vec![None; n];
        for (k, comp) in rows.iter().enumerate() {
            for (r, row) in comp.iter().enumerate() {
                for (c, &label) in row.iter().enumerate() {
                    let slot = entries.get_mut(label.wrapping_sub(1)).ok_or_else(|| {
                        Error::InvalidTableau(format!("label {label} out of range"))
                    })?;
                    if slot.replace(MultiNode::new(k + 1, r + 1, c + 1)).is_some() {
                        return Err(Error::InvalidTableau(format!("label {label} repeated")));
                    }
                }
            }
        }
        let entries = entries
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidTableau("labels are not 1..N".into()))?;
        Self::new(rows.len(), entries)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[MultiNode] {
        &self.entries
    }

    pub fn shape(&self) -> &MultiPartition {
        &self.shape
    }

    /// The subtableau holding labels `1..=k`.
    pub fn prefix(&self, k: usize) -> StandardMultiTableau {
        let entries = self.entries[..k].to_vec();
        let shape = entries
            .iter()
            .fold(MultiPartition::empty(self.m), |s, node| s.with_node(node));
        StandardMultiTableau {
            m: self.m,
            entries,
            shape,
        }
    }

    /// Removes the node with the largest label.
    pub fn remove_last(&self) -> Option<(StandardMultiTableau, MultiNode)> {
        let last = *self.entries.last()?;
        let mut entries = self.entries.clone();
        entries.pop();
        Some((
            StandardMultiTableau {
                m: self.m,
                entries,
                shape: self.shape.without_node(&last),
            },
            last,
        ))
    }

    /// All standard tableaux obtained by adding one node.
    pub fn extensions(&self) -> Vec<StandardMultiTableau> {
        addable_nodes(&self.shape)
            .into_iter()
            .map(|node| {
                let mut entries = self.entries.clone();
                entries.push(node);
                StandardMultiTableau {
                    m: self.m,
                    entries,
                    shape: self.shape.with_node(&node),
                }
            })
            .collect()
    }

    pub fn contents(&self) -> Vec<i64> {
        self.entries.iter().map(MultiNode::content).collect()
    }

    pub fn positions(&self) -> Vec<CycloScalar> {
        self.entries
            .iter()
            .map(|node| node.position_value(self.m as u32))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.entries).expect("nodes serialize")
    }
}

impl fmt::Display for StandardMultiTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut comps: Vec<Vec<Vec<usize>>> = self
            .shape
            .components
            .iter()
            .map(|p| p.iter().map(|&len| vec![0; len]).collect())
            .collect();
        for (label, node) in self.entries.iter().enumerate() {
            comps[node.pos - 1][node.row - 1][node.col - 1] = label + 1;
        }
        let parts: Vec<String> = comps
            .iter()
            .map(|rows| {
                if rows.is_empty() {
                    return "∅".to_string();
                }
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                    .collect();
                format!("[{}]", rows.join(" / "))
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// All standard fillings of `shape`, ordered lexicographically by entry sequence.
pub fn enumerate_standard_tableaux(shape: &MultiPartition) -> Vec<StandardMultiTableau> {
    fn go(
        target: &MultiPartition,
        cur: &mut StandardMultiTableau,
        out: &mut Vec<StandardMultiTableau>,
    ) {
        if cur.size() == target.size() {
            out.push(cur.clone());
            return;
        }
        for node in addable_nodes(&cur.shape) {
            if !target.contains(&node) {
                continue;
            }
            let prev_shape = cur.shape.clone();
            cur.shape = prev_shape.with_node(&node);
            cur.entries.push(node);
            go(target, cur, out);
            cur.entries.pop();
            cur.shape = prev_shape;
        }
    }
    let mut out = Vec::new();
    let mut cur = StandardMultiTableau::empty(shape.m());
    go(shape, &mut cur, &mut out);
    out
}

/// All standard m-tableaux of size `n`, grouped by shape in shape order.
pub fn enumerate_all_tableaux(m: usize, n: usize) -> Vec<StandardMultiTableau> {
    enumerate_multipartitions(m, n)
        .iter()
        .flat_map(enumerate_standard_tableaux)
        .collect()
}

/// Content sequence and position values of `t`.
pub fn contents_and_positions(t: &StandardMultiTableau) -> (Vec<i64>, Vec<CycloScalar>) {
    (t.contents(), t.positions())
}

/// `F(u) = (u − c_k)/u · Π_{i<k} (u − c_i)² / ((u − c_i)² − δ_{p_i, p_k})`
/// for the prefix of `t` ending at label `k`, in the variable [`Var::U`].
pub fn f_function(t: &StandardMultiTableau, k: usize) -> Result<RatFun> {
    if !(1..=t.size()).contains(&k) {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: t.size(),
        });
    }
    let m = t.m as u32;
    let lin = |c: i64| MultiPoly::linear(Var::U, &CycloScalar::from_integer(m, c));
    let last = t.entries[k - 1];
    let mut out = RatFun::fraction(lin(last.content()), MultiPoly::var(m, Var::U))?;
    for node in &t.entries[..k - 1] {
        // only nodes in the same component contribute: the ξ_k are distinct
        if node.pos != last.pos {
            continue;
        }
        let ci = node.content();
        let factor = RatFun::fraction(lin(ci).pow(2), MultiPoly::from_integer(m, 1))?
            .checked_div(&RatFun::from_poly(&lin(ci + 1) * &lin(ci - 1)))?;
        out = &out * &factor;
    }
    out.reduce();
    Ok(out)
}

/// Number of standard tableaux of `shape`.
pub fn standard_tableaux_count(shape: &MultiPartition) -> usize {
    enumerate_standard_tableaux(shape).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(c: Vec<Vec<usize>>) -> MultiPartition {
        MultiPartition::new(c).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn multipartition_enumeration() {
        let one = enumerate_multipartitions(1, 3);
        assert_eq!(
            one,
            vec![
                shape(vec![vec![3]]),
                shape(vec![vec![2, 1]]),
                shape(vec![vec![1, 1, 1]])
            ]
        );
        let two = enumerate_multipartitions(2, 2);
        assert_eq!(
            two,
            vec![
                shape(vec![vec![2], vec![]]),
                shape(vec![vec![1, 1], vec![]]),
                shape(vec![vec![1], vec![1]]),
                shape(vec![vec![], vec![2]]),
                shape(vec![vec![], vec![1, 1]]),
            ]
        );
        assert_eq!(
            enumerate_multipartitions(4, 0),
            vec![MultiPartition::empty(4)]
        );
    }

    #[test]
    fn standard_tableaux() {
        assert_eq!(
            enumerate_standard_tableaux(&shape(vec![vec![1], vec![1]])).len(),
            2
        );
        assert_eq!(
            enumerate_standard_tableaux(&shape(vec![vec![2, 1]])).len(),
            2
        );
        let counts: Vec<usize> = enumerate_multipartitions(2, 2)
            .iter()
            .map(standard_tableaux_count)
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 1, 1]);
        assert_eq!(counts.iter().map(|d| d * d).sum::<usize>(), 8);
        let all = enumerate_standard_tableaux(&shape(vec![vec![2, 1], vec![1]]));
        assert!(all.windows(2).all(|w| w[0].entries() < w[1].entries()));
    }

    #[test]
    fn addable_and_removable() {
        let s = shape(vec![vec![2], vec![1]]);
        assert_eq!(
            removable_nodes(&s),
            vec![MultiNode::new(1, 1, 2), MultiNode::new(2, 1, 1)]
        );
        let empty = MultiPartition::empty(3);
        assert_eq!(
            addable_nodes(&empty),
            (1..=3).map(|k| MultiNode::new(k, 1, 1)).collect::<Vec<_>>()
        );
        let s = shape(vec![vec![2, 1]]);
        let add = addable_nodes(&s);
        assert_eq!(
            add,
            vec![
                MultiNode::new(1, 1, 3),
                MultiNode::new(1, 2, 2),
                MultiNode::new(1, 3, 1)
            ]
        );
        assert_eq!(
            add.iter().map(MultiNode::content).collect::<Vec<_>>(),
            vec![2, 0, -2]
        );
    }

    #[test]
    fn hooks_and_f() {
        let s = shape(vec![vec![2], vec![1]]);
        let hooks: Vec<usize> = s
            .nodes()
            .iter()
            .map(|n| hook_length(&s, n).unwrap())
            .collect();
        assert_eq!(hooks, vec![2, 1, 1]);
        assert_eq!(f_constant(&s), q(1, 2));
        assert_eq!(f_constant(&shape(vec![vec![1]])), q(1, 1));
        assert_eq!(f_constant(&shape(vec![vec![2, 1]])), q(1, 3));
        assert!(matches!(
            hook_length(&s, &MultiNode::new(2, 1, 2)),
            Err(Error::NodeNotInShape(_))
        ));
    }

    #[test]
    fn contents_positions() {
        let t = StandardMultiTableau::from_rows(&[vec![vec![1, 3]], vec![vec![2]]]).unwrap();
        let (c, p) = contents_and_positions(&t);
        assert_eq!(c, vec![0, 0, 1]);
        let one = CycloScalar::one(2);
        let minus = CycloScalar::from_integer(2, -1);
        assert_eq!(p, vec![one.clone(), minus, one]);

        let col = StandardMultiTableau::from_rows(&[vec![vec![1], vec![2]]]).unwrap();
        assert_eq!(col.contents(), vec![0, -1]);
    }

    #[test]
    fn validation() {
        assert!(StandardMultiTableau::new(1, vec![MultiNode::new(1, 1, 2)]).is_err());
        assert!(StandardMultiTableau::new(2, vec![MultiNode::new(3, 1, 1)]).is_err());
        assert!(StandardMultiTableau::from_rows(&[vec![vec![2, 1]]]).is_err());
        assert!(MultiPartition::new(vec![vec![1, 2]]).is_err());
        let t = StandardMultiTableau::from_json(
            2,
            r#"[{"pos":2,"row":1,"col":1},{"pos":2,"row":1,"col":2}]"#,
        )
        .unwrap();
        assert_eq!(t.shape(), &shape(vec![vec![], vec![2]]));
        assert_eq!(serde_json::to_string(t.shape()).unwrap(), "[[],[2]]");
    }

    #[test]
    fn branching_is_consistent() {
        for t in enumerate_all_tableaux(2, 4) {
            let (u, node) = t.remove_last().unwrap();
            assert!(removable_nodes(t.shape()).contains(&node));
            assert_eq!(
                StandardMultiTableau::new(2, u.entries().to_vec()).unwrap(),
                u
            );
            assert!(u.extensions().contains(&t));
        }
    }

    #[test]
    fn f_function_first_label() {
        let t = StandardMultiTableau::from_rows(&[vec![vec![1]], vec![]]).unwrap();
        let f = f_function(&t, 1).unwrap();
        assert_eq!(f, RatFun::one(2));
        assert!(f_function(&t, 2).is_err());
    }

    #[test]
    fn f_function_golden_tableau() {
        // ({1,3},{2}), k = 3: ((u−1)/u)·(u²/(u²−1))·1 → 1/2 at u = 1
        let t = StandardMultiTableau::from_rows(&[vec![vec![1, 3]], vec![vec![2]]]).unwrap();
        let f = f_function(&t, 3).unwrap();
        let at = f
            .cancel_and_substitute(Var::U, &CycloScalar::one(2))
            .unwrap()
            .evaluate_constant()
            .unwrap();
        assert_eq!(at, CycloScalar::from_rational(2, q(1, 2)));
    }
}

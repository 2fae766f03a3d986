//! Built-in graph families and their exhaustion sequences.
//!
//! Both families represent infinite graphs by finite instances. All
//! quantities computed here (dipoles, kernel entries) are exact for the
//! infinite object whenever the instance radius exceeds the variation
//! radius of the vectors involved: `|x| + 1` for a segment dipole `v_x`,
//! the word length of `x` for a tree dipole.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgePath, GraphBuilder, VertexId, WeightedGraph};

/// The two built-in families, both with unit conductances.
///
/// * `Segment`: the integer line; instance of size `n` has vertices
///   `{−n, …, n}` and edges `(j, j+1)`.
/// * `Tree`: the binary tree; instance of depth `k` has all binary words of
///   length at most `k`, with edges `(x, x0)` and `(x, x1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Segment,
    Tree,
}

/// Exhaustion rules `F_1, F_2, …` over the non-base vertices.
///
/// `Cumulative` produces nested sets: `{±1, …, ±j}` on the segment, all
/// words of length at most `j` on the tree. `Level` produces the disjoint
/// tree level sets `{words of length exactly j}`, which drive the block
/// recursion for the level kernels; it is not nested, so monotonicity
/// arguments do not apply to it. On the segment both names yield the single
/// symmetric nested rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExhaustionRule {
    Level,
    Cumulative,
}

impl ExhaustionRule {
    pub fn name(&self) -> &'static str {
        match self {
            ExhaustionRule::Level => "level",
            ExhaustionRule::Cumulative => "cumulative",
        }
    }

    /// Whether consecutive sets of the rule are nested, `F_k ⊂ F_{k+1}`.
    pub fn is_nested(&self, family: Family) -> bool {
        match (family, self) {
            (Family::Segment, _) => true,
            (Family::Tree, ExhaustionRule::Cumulative) => true,
            (Family::Tree, ExhaustionRule::Level) => false,
        }
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Segment => "segment",
            Family::Tree => "tree",
        }
    }

    /// The base point: `0` for the segment, the empty word for the tree.
    pub fn base(&self) -> VertexId {
        match self {
            Family::Segment => VertexId::integer(0),
            Family::Tree => VertexId::word(""),
        }
    }

    /// Conductance total `μ(x)` of the infinite graph at `x`.
    pub fn mu_infinite(&self, x: &VertexId) -> Result<f64> {
        match self {
            Family::Segment => {
                x.as_integer()?;
                Ok(2.0)
            }
            Family::Tree => {
                let w = x.as_word()?;
                Ok(if w.is_empty() { 2.0 } else { 3.0 })
            }
        }
    }

    /// Smallest instance size for which the dipole `v_x` equals its
    /// infinite-graph values on the whole instance.
    pub fn variation_radius(&self, x: &VertexId) -> Result<usize> {
        match self {
            Family::Segment => Ok(x.as_integer()?.unsigned_abs() as usize + 1),
            Family::Tree => Ok(x.as_word()?.len()),
        }
    }

    /// Membership of `x` in the family's infinite vertex set.
    pub fn contains(&self, x: &VertexId) -> bool {
        match self {
            Family::Segment => x.as_integer().is_ok(),
            Family::Tree => x.as_word().is_ok(),
        }
    }

    /// The exhaustion set `F_k` for the given rule, in canonical order
    /// (numeric for the segment, length-then-lexicographic for the tree).
    /// The base point is never a member.
    pub fn exhaustion(&self, rule: ExhaustionRule, k: usize) -> Result<Vec<VertexId>> {
        if k < 1 {
            return Err(Error::SizeOutOfRange {
                what: "exhaustion index",
                min: 1,
                got: k as i64,
            });
        }
        Ok(match (self, rule) {
            (Family::Segment, _) => {
                let mut f: Vec<VertexId> = (-(k as i64)..=-1).map(VertexId::integer).collect();
                f.extend((1..=k as i64).map(VertexId::integer));
                f
            }
            (Family::Tree, ExhaustionRule::Level) => level_words(k),
            (Family::Tree, ExhaustionRule::Cumulative) => {
                (1..=k).flat_map(level_words).collect()
            }
        })
    }
}

/// All binary words of length exactly `len`, lexicographically.
pub fn level_words(len: usize) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(1 << len);
    for bits in 0..(1u64 << len) {
        let mut w = String::with_capacity(len);
        for pos in (0..len).rev() {
            w.push(if bits >> pos & 1 == 1 { '1' } else { '0' });
        }
        out.push(VertexId::word(&w));
    }
    out
}

/// Builds a finite instance of the family.
///
/// `size ≥ 1`; segment instances get vertices `{−size, …, size}`, tree
/// instances all words of length at most `size`. All weights are exactly 1.
pub fn make_family(family: Family, size: usize) -> Result<Arc<WeightedGraph>> {
    if size < 1 {
        return Err(Error::SizeOutOfRange {
            what: "family size",
            min: 1,
            got: size as i64,
        });
    }
    let mut b = GraphBuilder::new();
    match family {
        Family::Segment => {
            for j in -(size as i64)..=(size as i64) {
                b.add_vertex(VertexId::integer(j));
            }
            for j in -(size as i64)..(size as i64) {
                b.add_edge(VertexId::integer(j), VertexId::integer(j + 1), 1.0)?;
            }
        }
        Family::Tree => {
            b.add_vertex(VertexId::word(""));
            for len in 1..=size {
                for w in level_words(len) {
                    let word = w.as_word()?.to_string();
                    let parent = VertexId::word(&word[..word.len() - 1]);
                    b.add_vertex(w.clone());
                    b.add_edge(parent, w, 1.0)?;
                }
            }
        }
    }
    Ok(b.build())
}

/// The unique edge path from the tree root to `x`.
///
/// Errors if `x` is the root (the path would be empty) or not a tree word
/// present in `g`.
pub fn path_to_root(g: &WeightedGraph, x: &VertexId) -> Result<EdgePath> {
    let word = x.as_word()?;
    if word.is_empty() {
        return Err(Error::DegenerateDipole(x.to_string()));
    }
    g.position(x)?;
    let mut edges = Vec::with_capacity(word.len());
    for i in 0..word.len() {
        edges.push((VertexId::word(&word[..i]), VertexId::word(&word[..=i])));
    }
    let path = EdgePath(edges);
    path.validate(g)?;
    Ok(path)
}

/// Number of edges shared by the root paths of two tree words: the length
/// of their common prefix.
pub fn path_overlap(x: &str, y: &str) -> usize {
    x.bytes().zip(y.bytes()).take_while(|(a, b)| a == b).count()
}

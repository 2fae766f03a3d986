//! Weighted-graph data model and edge-list ingestion.
//!
//! Graphs are finite, undirected, and carry strictly positive edge weights
//! (conductances) stored once per unordered pair. They are immutable after
//! construction and cheap to share behind an [`std::sync::Arc`], so
//! concurrent analyses may read the same instance freely.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Identifier of a graph vertex.
///
/// The id is an opaque token: a signed integer literal for the segment
/// family, a binary word over `{0,1}` for the tree family (with `∅` for the
/// root), or an arbitrary whitespace-free token for file graphs. Ordering is
/// lexicographic on the canonical form; the row/column order of matrices is
/// fixed by the host graph's vertex order, not by this fallback ordering.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(String);

impl VertexId {
    /// Canonicalizes a raw token. The empty string maps to `∅` (tree root);
    /// anything else is taken verbatim after trimming.
    pub fn new(token: &str) -> Self {
        let t = token.trim();
        if t.is_empty() {
            VertexId("∅".to_string())
        } else {
            VertexId(t.to_string())
        }
    }

    /// The id of an integer vertex on the segment family.
    pub fn integer(n: i64) -> Self {
        VertexId(n.to_string())
    }

    /// The id of a binary word on the tree family; the empty word is `∅`.
    pub fn word(w: &str) -> Self {
        if w.is_empty() {
            VertexId("∅".to_string())
        } else {
            VertexId(w.to_string())
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Interprets the id as a segment-family integer.
    pub fn as_integer(&self) -> Result<i64> {
        self.0
            .parse::<i64>()
            .map_err(|_| Error::NotInFamily(self.0.clone()))
    }

    /// Interprets the id as a tree-family word; `∅` is the empty word.
    pub fn as_word(&self) -> Result<&str> {
        if self.0 == "∅" {
            return Ok("");
        }
        if self.0.bytes().all(|b| b == b'0' || b == b'1') {
            Ok(&self.0)
        } else {
            Err(Error::NotInFamily(self.0.clone()))
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v`{}`", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

/// A finite weighted graph `(G⁰, G¹, μ)`.
///
/// Invariants enforced at construction: no self-loops, one weight per
/// unordered pair, all weights strictly positive. Vertex order is the
/// insertion order of the builder and fixes matrix row/column order
/// everywhere downstream.
#[derive(Clone, PartialEq)]
pub struct WeightedGraph {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    /// Unordered edges as `(i, j, weight)` with `i < j`, sorted by `(i, j)`.
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl fmt::Debug for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WeightedGraph({} vertices, {} edges)",
            self.vertices.len(),
            self.edges.len()
        )
    }
}

impl WeightedGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertices in canonical order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Unordered edges `(i, j, weight)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    /// Position of `v` in the canonical vertex order.
    pub fn position(&self, v: &VertexId) -> Result<usize> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn vertex(&self, i: usize) -> &VertexId {
        &self.vertices[i]
    }

    /// Neighbors of the vertex at position `i` as `(position, weight)`.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    /// Weight of the unordered edge `{x, y}`, if present. Symmetric in its
    /// arguments by construction.
    pub fn weight(&self, x: &VertexId, y: &VertexId) -> Option<f64> {
        let (i, j) = (self.index.get(x)?, self.index.get(y)?);
        self.adj[*i]
            .iter()
            .find(|(k, _)| k == j)
            .map(|(_, w)| *w)
    }

    /// Total conductance at `x`: `μ(x) = Σ_{y∼x} μ_xy`.
    pub fn mu_total(&self, x: &VertexId) -> Result<f64> {
        let i = self.position(x)?;
        Ok(self.mu_total_at(i))
    }

    pub fn mu_total_at(&self, i: usize) -> f64 {
        self.adj[i].iter().map(|(_, w)| w).sum()
    }

    /// Breadth-first connectivity check. The empty graph is connected by
    /// convention.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for &(j, _) in &self.adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == n
    }
}

/// Incremental constructor for [`WeightedGraph`].
#[derive(Default)]
pub struct GraphBuilder {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    edges: Vec<(usize, usize, f64)>,
    seen_pairs: HashMap<(usize, usize), ()>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex if not already present; returns its position.
    pub fn add_vertex(&mut self, id: VertexId) -> usize {
        if let Some(&i) = self.index.get(&id) {
            return i;
        }
        let i = self.vertices.len();
        self.index.insert(id.clone(), i);
        self.vertices.push(id);
        i
    }

    /// Adds the unordered edge `{a, b}` with weight `w`.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId, w: f64) -> Result<()> {
        if a == b {
            return Err(Error::SelfLoop(a.to_string()));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::NonPositiveWeight {
                a: a.to_string(),
                b: b.to_string(),
                weight: w,
            });
        }
        let (sa, sb) = (a.to_string(), b.to_string());
        let i = self.add_vertex(a);
        let j = self.add_vertex(b);
        let key = (i.min(j), i.max(j));
        if self.seen_pairs.insert(key, ()).is_some() {
            return Err(Error::DuplicateEdge(sa, sb));
        }
        self.edges.push((key.0, key.1, w));
        Ok(())
    }

    pub fn build(mut self) -> Arc<WeightedGraph> {
        self.edges.sort_by_key(|&(i, j, _)| (i, j));
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(i, j, w) in &self.edges {
            adj[i].push((j, w));
            adj[j].push((i, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(k, _)| k);
        }
        Arc::new(WeightedGraph {
            vertices: self.vertices,
            index: self.index,
            edges: self.edges,
            adj,
        })
    }
}

/// An ordered chain of directed edges; consecutive edges share an endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePath(pub Vec<(VertexId, VertexId)>);

impl EdgePath {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks the chain property and edge membership against `g`.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        for window in self.0.windows(2) {
            if window[0].1 != window[1].0 {
                return Err(Error::DimensionMismatch(
                    "path edges do not chain".to_string(),
                ));
            }
        }
        for (a, b) in &self.0 {
            if g.weight(a, b).is_none() {
                return Err(Error::UnknownVertex(format!("edge {a} -- {b}")));
            }
        }
        Ok(())
    }
}

/// Result of parsing an edge-list document: the graph plus the base point
/// declared by a `base <id>` line, when present.
pub struct LoadedGraph {
    pub graph: Arc<WeightedGraph>,
    pub base: Option<VertexId>,
}

/// Parses the edge-list text format.
///
/// UTF-8 lines; `#` starts a comment; `vertex <id>` declares an isolated
/// vertex; `base <id>` declares the base point; `<id> <id> <weight>`
/// declares an edge. Fields are whitespace-separated. Duplicate unordered
/// pairs, self-loops, and non-positive weights are errors.
pub fn load_graph(text: &str) -> Result<LoadedGraph> {
    let mut builder = GraphBuilder::new();
    let mut base: Option<VertexId> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            ["vertex", id] => {
                builder.add_vertex(VertexId::new(id));
            }
            ["base", id] => {
                base = Some(VertexId::new(id));
            }
            [a, b, w] => {
                let weight: f64 = w.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad weight `{w}`"),
                })?;
                builder.add_edge(VertexId::new(a), VertexId::new(b), weight)?;
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected `vertex <id>`, `base <id>`, or `<id> <id> <weight>`, got `{}`", line.trim()),
                })
            }
        }
    }
    if let Some(b) = &base {
        builder.add_vertex(b.clone());
    }
    let graph = builder.build();
    Ok(LoadedGraph { graph, base })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_simple_edge_list() {
        let g = load_graph("a b 1.0\nb c 2.0").unwrap().graph;
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.mu_total(&"b".into()).unwrap(), 3.0);
    }

    #[test]
    fn rejects_self_loop() {
        assert!(matches!(load_graph("a a 1.0"), Err(Error::SelfLoop(_))));
    }

    #[test]
    fn rejects_duplicate_unordered_pair() {
        assert!(matches!(
            load_graph("a b 1.0\nb a 2.0"),
            Err(Error::DuplicateEdge(_, _))
        ));
    }

    #[test]
    fn rejects_nonpositive_weight() {
        assert!(matches!(
            load_graph("a b 0.0"),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            load_graph("a b -3"),
            Err(Error::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn rejects_malformed_line() {
        assert!(matches!(load_graph("a b"), Err(Error::Parse { .. })));
        assert!(matches!(load_graph("a b x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_vertices_and_base() {
        let loaded = load_graph("# header\nvertex lonely\nbase a\na b 2.5 # trailing").unwrap();
        let g = loaded.graph;
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(loaded.base, Some("a".into()));
        assert!(!g.is_connected());
    }

    #[test]
    fn weight_is_symmetric() {
        let g = load_graph("a b 1.5\nb c 2.0").unwrap().graph;
        for (i, j, w) in g.edges() {
            let (x, y) = (g.vertex(*i).clone(), g.vertex(*j).clone());
            assert_eq!(g.weight(&x, &y), Some(*w));
            assert_eq!(g.weight(&y, &x), Some(*w));
        }
    }

    #[test]
    fn disconnected_pair_of_edges() {
        let g = load_graph("a b 1\nc d 1").unwrap().graph;
        assert!(!g.is_connected());
    }

    #[test]
    fn empty_graph_connected_by_convention() {
        assert!(load_graph("").unwrap().graph.is_connected());
    }

    #[test]
    fn empty_token_canonicalizes_to_root() {
        assert_eq!(VertexId::new(""), VertexId::word(""));
        assert_eq!(VertexId::word("").as_str(), "∅");
    }
}

//! Layered feed-forward graphs and seeded forward-edge rewiring.
//!
//! Nodes are addressed either by [`NodeRef`] (layer, position) or by their
//! flat id `layer * n + position`. Because the flat id orders nodes by layer
//! first, ascending flat id is always a valid topological order of a
//! [`RewiredGraph`].

use std::collections::HashSet;
use std::fmt;
use std::io::Write;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Replacement attempts per rewired edge before giving up.
pub const MAX_REPLACEMENT_ATTEMPTS: usize = 10_000;

/// `n` neurons in each of `L` layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LayeredShape {
    neurons: usize,
    layers: usize,
}

impl LayeredShape {
    pub fn new(neurons: usize, layers: usize) -> Result<Self> {
        if neurons < 1 || layers < 2 {
            return Err(Error::InvalidShape { neurons, layers });
        }
        Ok(Self { neurons, layers })
    }

    pub fn neurons_per_layer(&self) -> usize {
        self.neurons
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn node_count(&self) -> usize {
        self.neurons * self.layers
    }

    /// `(L - 1) * n^2`, the edge count of the fully inter-layer-connected network.
    pub fn baseline_edge_count(&self) -> usize {
        (self.layers - 1) * self.neurons * self.neurons
    }

    pub fn node(&self, flat: usize) -> NodeRef {
        debug_assert!(flat < self.node_count());
        NodeRef {
            layer: flat / self.neurons,
            position: flat % self.neurons,
        }
    }

    pub fn flat_id(&self, node: NodeRef) -> usize {
        node.layer * self.neurons + node.position
    }

    pub fn contains(&self, node: NodeRef) -> bool {
        node.layer < self.layers && node.position < self.neurons
    }

    /// Iterates the nodes of one layer in position order.
    pub fn layer_nodes(&self, layer: usize) -> impl Iterator<Item = NodeRef> {
        (0..self.neurons).map(move |position| NodeRef { layer, position })
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeRef> + '_ {
        (0..self.node_count()).map(|id| self.node(id))
    }
}

/// A neuron position. The derived ordering matches flat-id ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub layer: usize,
    pub position: usize,
}

impl NodeRef {
    pub fn new(layer: usize, position: usize) -> Self {
        Self { layer, position }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.layer, self.position)
    }
}

/// A directed connection from `source` to `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: NodeRef,
    pub target: NodeRef,
}

impl Edge {
    pub fn new(source: NodeRef, target: NodeRef) -> Self {
        Self { source, target }
    }

    pub fn is_forward(&self) -> bool {
        self.source.layer < self.target.layer
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

/// A layered DAG, either the full baseline or the result of rewiring it.
///
/// Edges are kept sorted by (source, target) flat id. The value is immutable
/// once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewiredGraph {
    shape: LayeredShape,
    edges: Vec<Edge>,
    n_rewire: usize,
    seed: u64,
}

impl RewiredGraph {
    /// Assembles a graph from raw parts without checking invariants; use
    /// [`RewiredGraph::validate`] to inspect the result.
    pub fn from_parts(shape: LayeredShape, mut edges: Vec<Edge>, n_rewire: usize, seed: u64) -> Self {
        edges.sort_unstable();
        Self {
            shape,
            edges,
            n_rewire,
            seed,
        }
    }

    pub fn shape(&self) -> LayeredShape {
        self.shape
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_rewire(&self) -> usize {
        self.n_rewire
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn node_count(&self) -> usize {
        self.shape.node_count()
    }

    pub fn contains_edge(&self, edge: &Edge) -> bool {
        self.edges.binary_search(edge).is_ok()
    }

    /// Edges as `(source_flat_id, target_flat_id)` pairs, in stored order.
    pub fn flat_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges
            .iter()
            .map(|e| (self.shape.flat_id(e.source), self.shape.flat_id(e.target)))
    }

    /// Sorted, deduplicated undirected adjacency lists indexed by flat id.
    pub fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for (s, t) in self.flat_edges() {
            if s != t {
                adj[s].push(t);
                adj[t].push(s);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Lists every broken invariant; an empty list means the graph is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut found = Vec::new();
        let expected = self.shape.baseline_edge_count();
        if self.edges.len() != expected {
            found.push(Violation::EdgeCount {
                expected,
                actual: self.edges.len(),
            });
        }
        if self.n_rewire > expected {
            found.push(Violation::RewireCount {
                n_rewire: self.n_rewire,
                limit: expected,
            });
        }
        for (i, edge) in self.edges.iter().enumerate() {
            if !self.shape.contains(edge.source) || !self.shape.contains(edge.target) {
                found.push(Violation::OutOfBounds(*edge));
                continue;
            }
            if edge.source == edge.target {
                found.push(Violation::SelfLoop(*edge));
            } else if !edge.is_forward() {
                found.push(Violation::NotForward(*edge));
            }
            // sorted storage puts duplicates next to each other
            if i > 0 && self.edges[i - 1] == *edge {
                found.push(Violation::Duplicate(*edge));
            }
        }
        found
    }

    /// Writes the edge-list text format: a header line followed by one
    /// `source target` flat-id pair per line, ascending.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "layers={} neurons={} n_rewire={} seed={}",
            self.shape.layers(),
            self.shape.neurons_per_layer(),
            self.n_rewire,
            self.seed
        )?;
        for (s, t) in self.flat_edges() {
            writeln!(out, "{s} {t}")?;
        }
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    /// Parses the edge-list format. Structural problems (bad header, ids out
    /// of range, malformed lines) are errors naming the 1-based line; graph
    /// invariants are left to [`RewiredGraph::validate`].
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (header_no, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty())
            .ok_or_else(|| Error::parse(1, "missing header line"))?;

        let (mut layers, mut neurons, mut n_rewire, mut seed) = (None, None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(header_no, format!("expected key=value, got `{field}`")))?;
            let bad = |_| Error::parse(header_no, format!("bad value for `{key}`: `{value}`"));
            match key {
                "layers" => layers = Some(value.parse::<usize>().map_err(bad)?),
                "neurons" => neurons = Some(value.parse::<usize>().map_err(bad)?),
                "n_rewire" => n_rewire = Some(value.parse::<usize>().map_err(bad)?),
                "seed" => seed = Some(value.parse::<u64>().map_err(bad)?),
                _ => return Err(Error::parse(header_no, format!("unknown header key `{key}`"))),
            }
        }
        let missing = |k: &str| Error::parse(header_no, format!("header is missing `{k}`"));
        let layers = layers.ok_or_else(|| missing("layers"))?;
        let neurons = neurons.ok_or_else(|| missing("neurons"))?;
        let n_rewire = n_rewire.ok_or_else(|| missing("n_rewire"))?;
        let seed = seed.ok_or_else(|| missing("seed"))?;
        let shape = LayeredShape::new(neurons, layers).map_err(|e| Error::parse(header_no, e.to_string()))?;

        let mut edges = Vec::new();
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(s), Some(t), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(no, format!("expected `source target`, got `{line}`")));
            };
            let id = |raw: &str| -> Result<usize> {
                let v: usize = raw
                    .parse()
                    .map_err(|_| Error::parse(no, format!("`{raw}` is not a node id")))?;
                if v >= shape.node_count() {
                    return Err(Error::parse(
                        no,
                        format!("node id {v} out of range (graph has {} nodes)", shape.node_count()),
                    ));
                }
                Ok(v)
            };
            edges.push(Edge::new(shape.node(id(s)?), shape.node(id(t)?)));
        }
        Ok(Self::from_parts(shape, edges, n_rewire, seed))
    }
}

/// One broken [`RewiredGraph`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EdgeCount { expected: usize, actual: usize },
    RewireCount { n_rewire: usize, limit: usize },
    Duplicate(Edge),
    NotForward(Edge),
    SelfLoop(Edge),
    OutOfBounds(Edge),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeCount { expected, actual } => {
                write!(f, "edge count {actual}, expected {expected}")
            }
            Violation::RewireCount { n_rewire, limit } => {
                write!(f, "n_rewire {n_rewire} exceeds edge count {limit}")
            }
            Violation::Duplicate(e) => write!(f, "duplicate edge {e}"),
            Violation::NotForward(e) => write!(f, "non-forward edge {e}"),
            Violation::SelfLoop(e) => write!(f, "self-loop {e}"),
            Violation::OutOfBounds(e) => write!(f, "edge {e} references a node outside the shape"),
        }
    }
}

/// Connects every node of layer `l` to every node of layer `l + 1`.
pub fn build_layered_fnn(shape: LayeredShape) -> RewiredGraph {
    let mut edges = Vec::with_capacity(shape.baseline_edge_count());
    for layer in 0..shape.layers() - 1 {
        for source in shape.layer_nodes(layer) {
            for target in shape.layer_nodes(layer + 1) {
                edges.push(Edge::new(source, target));
            }
        }
    }
    RewiredGraph::from_parts(shape, edges, 0, 0)
}

/// Rewires `n_rewire` distinct baseline edges.
///
/// The removed edges are drawn uniformly without replacement. Each is replaced
/// by an edge drawn uniformly from the forward pairs that are neither present
/// nor removed in this pass, by rejection with at most
/// [`MAX_REPLACEMENT_ATTEMPTS`] draws per edge.
pub fn rewire(graph: &RewiredGraph, n_rewire: usize, seed: u64) -> Result<RewiredGraph> {
    if graph.n_rewire() != 0 {
        return Err(Error::NotBaseline(graph.n_rewire()));
    }
    let total = graph.edges().len();
    if n_rewire > total {
        return Err(Error::RewireOutOfRange {
            requested: n_rewire,
            edges: total,
        });
    }
    let shape = graph.shape();
    if n_rewire == 0 {
        return Ok(RewiredGraph::from_parts(shape, graph.edges().to_vec(), 0, seed));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = index::sample(&mut rng, total, n_rewire);
    let removed: HashSet<Edge> = picked.iter().map(|i| graph.edges()[i]).collect();
    let mut present: HashSet<Edge> = graph
        .edges()
        .iter()
        .filter(|e| !removed.contains(e))
        .copied()
        .collect();

    let nodes = shape.node_count();
    for _ in 0..n_rewire {
        let mut placed = false;
        for _ in 0..MAX_REPLACEMENT_ATTEMPTS {
            let a = shape.node(rng.random_range(0..nodes));
            let b = shape.node(rng.random_range(0..nodes));
            if a.layer == b.layer {
                continue;
            }
            // orienting an unordered draw keeps every forward pair equally likely
            let candidate = if a.layer < b.layer { Edge::new(a, b) } else { Edge::new(b, a) };
            if present.contains(&candidate) || removed.contains(&candidate) {
                continue;
            }
            present.insert(candidate);
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::Saturated {
                attempts: MAX_REPLACEMENT_ATTEMPTS,
            });
        }
    }

    Ok(RewiredGraph::from_parts(shape, present.into_iter().collect(), n_rewire, seed))
}

//! Shortest-path efficiency of rewired graphs.
//!
//! All distances are hop counts over the undirected view of the graph.
//! Unreachable pairs have infinite distance and contribute `1/inf = 0` to an
//! efficiency sum, so an edgeless graph has efficiency exactly zero.
//!
//! Local efficiency averages the efficiency of every node's neighborhood
//! subgraph. Two neighborhood definitions are supported:
//!
//! - [`SubgraphDefinition::Corrected`]: the nodes directly connected to the
//!   center.
//! - [`SubgraphDefinition::SameLayerAugmented`]: those neighbors plus every
//!   other node in the center's layer.
//!
//! The center is excluded in both cases, and paths inside a subgraph may only
//! use subgraph nodes.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::topology::{NodeRef, RewiredGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubgraphDefinition {
    Corrected,
    SameLayerAugmented,
}

impl SubgraphDefinition {
    pub const ALL: [SubgraphDefinition; 2] = [Self::Corrected, Self::SameLayerAugmented];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Corrected => "corrected",
            Self::SameLayerAugmented => "same_layer_augmented",
        }
    }
}

impl fmt::Display for SubgraphDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubgraphDefinition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().replace('-', "_").as_str() {
            "corrected" => Ok(Self::Corrected),
            "same_layer_augmented" | "augmented" => Ok(Self::SameLayerAugmented),
            other => Err(Error::config(
                "definition",
                format!("unknown subgraph definition `{other}` (expected corrected or same_layer_augmented)"),
            )),
        }
    }
}

/// Symmetric all-pairs hop distances; `None` marks unreachable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    size: usize,
    hops: Vec<Option<u32>>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.hops[i * self.size + j]
    }

    /// Distance as a float, `f64::INFINITY` when unreachable.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.get(i, j).map_or(f64::INFINITY, f64::from)
    }

    /// `1/(N(N-1)) * sum_{i != j} 1/d_ij`, zero for fewer than two nodes.
    pub fn efficiency(&self) -> f64 {
        let n = self.size;
        if n < 2 {
            return 0.0;
        }
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    if let Some(d) = self.get(i, j) {
                        sum += 1.0 / f64::from(d);
                    }
                }
            }
        }
        sum / (n * (n - 1)) as f64
    }

    fn from_adjacency(adj: &[Vec<usize>]) -> Self {
        let size = adj.len();
        let mut hops = vec![None; size * size];
        let mut queue = VecDeque::new();
        for source in 0..size {
            let row = &mut hops[source * size..(source + 1) * size];
            row[source] = Some(0);
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                let next = row[u].unwrap() + 1;
                for &v in &adj[u] {
                    if row[v].is_none() {
                        row[v] = Some(next);
                        queue.push_back(v);
                    }
                }
            }
        }
        Self { size, hops }
    }
}

/// Breadth-first hop distances over `node_count` nodes joined by the given
/// undirected edges (direction of each pair is ignored).
pub fn distance_matrix(node_count: usize, edges: &[(usize, usize)]) -> DistanceMatrix {
    let mut adj = vec![Vec::new(); node_count];
    for &(a, b) in edges {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    DistanceMatrix::from_adjacency(&adj)
}

pub fn global_efficiency(graph: &RewiredGraph) -> f64 {
    DistanceMatrix::from_adjacency(&graph.undirected_adjacency()).efficiency()
}

/// The neighborhood subgraph `G_i` of one center node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodSubgraph {
    pub center: NodeRef,
    /// Member nodes in ascending order, center excluded.
    pub nodes: Vec<NodeRef>,
    /// Induced undirected edges, each stored once with the smaller node first.
    pub edges: Vec<(NodeRef, NodeRef)>,
    pub definition: SubgraphDefinition,
}

pub fn neighborhood_subgraph(
    graph: &RewiredGraph,
    node: NodeRef,
    definition: SubgraphDefinition,
) -> NeighborhoodSubgraph {
    neighborhood_from_adjacency(graph, &graph.undirected_adjacency(), node, definition)
}

fn neighborhood_from_adjacency(
    graph: &RewiredGraph,
    adj: &[Vec<usize>],
    center: NodeRef,
    definition: SubgraphDefinition,
) -> NeighborhoodSubgraph {
    let shape = graph.shape();
    let center_id = shape.flat_id(center);

    let mut member = vec![false; adj.len()];
    for &v in &adj[center_id] {
        member[v] = true;
    }
    if definition == SubgraphDefinition::SameLayerAugmented {
        for peer in shape.layer_nodes(center.layer) {
            member[shape.flat_id(peer)] = true;
        }
    }
    member[center_id] = false;

    let ids: Vec<usize> = (0..adj.len()).filter(|&v| member[v]).collect();
    let mut edges = Vec::new();
    for &u in &ids {
        for &v in &adj[u] {
            if u < v && member[v] {
                edges.push((shape.node(u), shape.node(v)));
            }
        }
    }
    NeighborhoodSubgraph {
        center,
        nodes: ids.into_iter().map(|v| shape.node(v)).collect(),
        edges,
        definition,
    }
}

/// Efficiency of the subgraph with paths confined to its own nodes; zero
/// when it has fewer than two nodes.
pub fn subgraph_efficiency(sub: &NeighborhoodSubgraph) -> f64 {
    if sub.nodes.len() < 2 {
        return 0.0;
    }
    let local = |n: &NodeRef| sub.nodes.binary_search(n).expect("subgraph edge endpoint is a member");
    let edges: Vec<(usize, usize)> = sub.edges.iter().map(|(a, b)| (local(a), local(b))).collect();
    distance_matrix(sub.nodes.len(), &edges).efficiency()
}

/// Mean subgraph efficiency over all nodes of the graph.
pub fn local_efficiency(graph: &RewiredGraph, definition: SubgraphDefinition) -> f64 {
    let adj = graph.undirected_adjacency();
    let n = graph.node_count();
    if n == 0 {
        return 0.0;
    }
    let total: f64 = graph
        .shape()
        .nodes()
        .map(|node| subgraph_efficiency(&neighborhood_from_adjacency(graph, &adj, node, definition)))
        .sum();
    total / n as f64
}

/// Efficiencies and their reciprocal connectivity lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyReport {
    pub e_global: f64,
    pub e_local: f64,
    pub d_global: f64,
    pub d_local: f64,
    pub definition: SubgraphDefinition,
}

impl EfficiencyReport {
    pub fn from_efficiencies(e_global: f64, e_local: f64, definition: SubgraphDefinition) -> Self {
        Self {
            e_global,
            e_local,
            d_global: connectivity_length(e_global),
            d_local: connectivity_length(e_local),
            definition,
        }
    }
}

/// `1/E`, or `+inf` when `E = 0`.
pub fn connectivity_length(efficiency: f64) -> f64 {
    if efficiency > 0.0 {
        1.0 / efficiency
    } else {
        f64::INFINITY
    }
}

pub fn efficiency_report(graph: &RewiredGraph, definition: SubgraphDefinition) -> EfficiencyReport {
    EfficiencyReport::from_efficiencies(
        global_efficiency(graph),
        local_efficiency(graph, definition),
        definition,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_layered_fnn, LayeredShape};

    fn network_a() -> RewiredGraph {
        build_layered_fnn(LayeredShape::new(5, 5).unwrap())
    }

    #[test]
    fn distances_on_small_graphs() {
        let path = distance_matrix(3, &[(0, 1), (1, 2)]);
        assert_eq!(path.get(0, 2), Some(2));
        assert_eq!(path.get(0, 1), Some(1));
        assert_eq!(path.get(2, 0), Some(2));
        assert_eq!(path.get(1, 1), Some(0));

        let k4 = distance_matrix(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k4.get(i, j), Some(u32::from(i != j)));
            }
        }

        let apart = distance_matrix(2, &[]);
        assert_eq!(apart.get(0, 1), None);
        assert_eq!(apart.distance(0, 1), f64::INFINITY);
    }

    #[test]
    fn efficiency_of_reference_graphs() {
        // n=1 layers form a chain; all forward pairs make it complete
        let shape = LayeredShape::new(1, 6).unwrap();
        let mut edges = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                edges.push(crate::topology::Edge::new(shape.node(a), shape.node(b)));
            }
        }
        let complete = RewiredGraph::from_parts(shape, edges, 0, 0);
        assert_eq!(global_efficiency(&complete), 1.0);
        assert_eq!(local_efficiency(&complete, SubgraphDefinition::Corrected), 1.0);

        assert_eq!(distance_matrix(3, &[]).efficiency(), 0.0);
        let path = distance_matrix(3, &[(0, 1), (1, 2)]).efficiency();
        assert!((path - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn baseline_neighborhoods() {
        let g = network_a();
        let center = NodeRef::new(2, 3);

        let corrected = neighborhood_subgraph(&g, center, SubgraphDefinition::Corrected);
        assert_eq!(corrected.nodes.len(), 10);
        assert!(corrected.edges.is_empty());
        assert!(corrected.nodes.iter().all(|n| n.layer == 1 || n.layer == 3));
        assert_eq!(subgraph_efficiency(&corrected), 0.0);

        let augmented = neighborhood_subgraph(&g, center, SubgraphDefinition::SameLayerAugmented);
        assert_eq!(augmented.nodes.len(), 14);
        assert_eq!(augmented.edges.len(), 40);
        assert!(!augmented.nodes.contains(&center));
        assert!((subgraph_efficiency(&augmented) - 131.0 / 182.0).abs() < 1e-15);

        let input = neighborhood_subgraph(&g, NodeRef::new(0, 0), SubgraphDefinition::Corrected);
        assert_eq!(input.nodes.len(), 5);
        assert!(input.nodes.iter().all(|n| n.layer == 1));
        assert!(input.edges.is_empty());
    }

    #[test]
    fn tiny_subgraphs_have_zero_efficiency() {
        let g = build_layered_fnn(LayeredShape::new(1, 2).unwrap());
        let sub = neighborhood_subgraph(&g, NodeRef::new(0, 0), SubgraphDefinition::Corrected);
        assert_eq!(sub.nodes.len(), 1);
        assert_eq!(subgraph_efficiency(&sub), 0.0);
    }

    #[test]
    fn baseline_local_efficiency_by_definition() {
        for (n, l) in [(5, 5), (5, 8), (15, 8), (10, 10)] {
            let g = build_layered_fnn(LayeredShape::new(n, l).unwrap());
            assert_eq!(local_efficiency(&g, SubgraphDefinition::Corrected), 0.0);
        }
        assert!(local_efficiency(&network_a(), SubgraphDefinition::SameLayerAugmented) > 0.0);
    }

    #[test]
    fn report_reciprocals() {
        let r = EfficiencyReport::from_efficiencies(1.0, 0.0, SubgraphDefinition::Corrected);
        assert_eq!(r.d_global, 1.0);
        assert_eq!(r.d_local, f64::INFINITY);
        let r = EfficiencyReport::from_efficiencies(0.5, 0.25, SubgraphDefinition::Corrected);
        assert_eq!(r.d_global, 2.0);
        assert_eq!(r.d_local, 4.0);
    }

    #[test]
    fn definition_names_parse() {
        for def in SubgraphDefinition::ALL {
            assert_eq!(def.as_str().parse::<SubgraphDefinition>().unwrap(), def);
        }
        assert_eq!(
            "same-layer-augmented".parse::<SubgraphDefinition>().unwrap(),
            SubgraphDefinition::SameLayerAugmented
        );
        assert!("mistaken".parse::<SubgraphDefinition>().is_err());
    }
}

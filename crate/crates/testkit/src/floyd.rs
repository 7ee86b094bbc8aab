//! Efficiency by Floyd-Warshall over a dense distance table.

use rewire_lab::metrics::SubgraphDefinition;
use rewire_lab::RewiredGraph;

/// Efficiency of an undirected graph given as index pairs.
pub fn efficiency(n: usize, edges: &[(usize, usize)]) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b) in edges {
        if a != b {
            d[a][b] = 1.0;
            d[b][a] = 1.0;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut sum = 0.0;
    for (i, row) in d.iter().enumerate() {
        for (j, &dij) in row.iter().enumerate() {
            if i != j {
                sum += 1.0 / dij;
            }
        }
    }
    sum / (n * (n - 1)) as f64
}

pub fn global_efficiency(g: &RewiredGraph) -> f64 {
    efficiency(g.node_count(), &g.flat_edges().collect::<Vec<_>>())
}

/// Neighborhood efficiency of flat node `center`, built straight from the
/// directed edge list.
pub fn subgraph_efficiency(g: &RewiredGraph, center: usize, def: SubgraphDefinition) -> f64 {
    let shape = g.shape();
    let flat: Vec<(usize, usize)> = g.flat_edges().collect();
    let members: Vec<usize> = (0..g.node_count())
        .filter(|&v| v != center)
        .filter(|&v| {
            flat.iter().any(|&(s, t)| (s == center && t == v) || (t == center && s == v))
                || (def == SubgraphDefinition::SameLayerAugmented
                    && shape.node(v).layer == shape.node(center).layer)
        })
        .collect();
    let local = |v: usize| members.iter().position(|&m| m == v);
    let edges: Vec<(usize, usize)> = flat
        .iter()
        .filter_map(|&(s, t)| Some((local(s)?, local(t)?)))
        .collect();
    efficiency(members.len(), &edges)
}

pub fn local_efficiency(g: &RewiredGraph, def: SubgraphDefinition) -> f64 {
    let n = g.node_count();
    (0..n).map(|c| subgraph_efficiency(g, c, def)).sum::<f64>() / n as f64
}

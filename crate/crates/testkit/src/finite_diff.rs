//! Central finite differences of the squared-error loss, evaluated in
//! double-double precision by a forward pass written independently of the
//! network's own.

use rewire_lab::learning::{Pattern, WeightedNetwork};

use crate::dd::Dd;

pub const EPSILON: f64 = 1e-5;

/// Which parameter to perturb.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Weight(usize),
    Bias(usize),
}

fn loss(net: &WeightedNetwork, pattern: &Pattern, param: Param, delta: f64) -> Dd {
    let graph = net.graph();
    let n = graph.shape().neurons_per_layer();
    let nodes = graph.node_count();
    let edges: Vec<(usize, usize)> = graph.flat_edges().collect();

    let weight = |e: usize| {
        let w = Dd::from(net.weights()[e]);
        if param == Param::Weight(e) {
            w + Dd::from(delta)
        } else {
            w
        }
    };
    let bias = |v: usize| {
        let b = Dd::from(net.biases()[v - n]);
        if param == Param::Bias(v - n) {
            b + Dd::from(delta)
        } else {
            b
        }
    };

    let mut acts = vec![Dd::ZERO; nodes];
    for (i, &bit) in pattern.input().iter().enumerate() {
        acts[i] = Dd::from(f64::from(bit));
    }
    // layers are filled one at a time; every edge into layer l starts below it
    for layer in 1..graph.shape().layers() {
        for v in layer * n..(layer + 1) * n {
            let mut z = bias(v);
            for (e, &(s, t)) in edges.iter().enumerate() {
                if t == v {
                    z = z + weight(e) * acts[s];
                }
            }
            acts[v] = z.sigmoid();
        }
    }
    let mut total = Dd::ZERO;
    for (k, &t) in pattern.target().iter().enumerate() {
        let diff = Dd::from(f64::from(t)) - acts[nodes - n + k];
        total = total + diff * diff;
    }
    total * Dd::from(0.5)
}

pub fn derivative(net: &WeightedNetwork, pattern: &Pattern, param: Param) -> f64 {
    let plus = loss(net, pattern, param, EPSILON);
    let minus = loss(net, pattern, param, -EPSILON);
    ((plus - minus) / Dd::from(2.0 * EPSILON)).to_f64()
}

/// Numeric gradient of every weight followed by every bias.
pub fn gradient(net: &WeightedNetwork, pattern: &Pattern) -> Vec<f64> {
    let weights = (0..net.weights().len()).map(Param::Weight);
    let biases = (0..net.biases().len()).map(Param::Bias);
    weights.chain(biases).map(|p| derivative(net, pattern, p)).collect()
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Largest relative error between back-propagated and numeric gradients.
pub fn worst_relative_error(net: &WeightedNetwork, pattern: &Pattern) -> f64 {
    let (_, grads) = net.gradients(pattern);
    grads
        .weights
        .iter()
        .chain(&grads.biases)
        .zip(gradient(net, pattern))
        .map(|(&a, n)| relative_error(a, n))
        .fold(0.0, f64::max)
}

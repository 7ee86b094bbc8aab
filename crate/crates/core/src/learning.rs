//! Online back-propagation on a rewired feed-forward DAG.
//!
//! Every non-input neuron computes `sigmoid(bias + sum w * a_source)`. Since
//! all edges point forward, evaluating neurons in ascending flat-id order is a
//! valid forward pass and descending order a valid backward pass, regardless
//! of layer-skipping edges or neurons without inputs.
//!
//! Gradients are taken against `0.5 * sum_k (t_k - y_k)^2` over the output
//! layer. Mean absolute error is only used for reporting.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::topology::RewiredGraph;

pub const DEFAULT_INIT_RANGE: f64 = 0.5;

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// One binary input/target pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    input: Vec<u8>,
    target: Vec<u8>,
}

impl Pattern {
    pub fn new(input: Vec<u8>, target: Vec<u8>) -> Result<Self> {
        if input.len() != target.len() {
            return Err(Error::Dimension {
                expected: input.len(),
                actual: target.len(),
            });
        }
        if input.iter().chain(&target).any(|&b| b > 1) {
            return Err(Error::config("pattern", "entries must be 0 or 1"));
        }
        Ok(Self { input, target })
    }

    pub fn input(&self) -> &[u8] {
        &self.input
    }

    pub fn target(&self) -> &[u8] {
        &self.target
    }

    pub fn width(&self) -> usize {
        self.input.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingSet {
    patterns: Vec<Pattern>,
    seed: u64,
}

impl TrainingSet {
    pub fn new(patterns: Vec<Pattern>, seed: u64) -> Result<Self> {
        let Some(first) = patterns.first() else {
            return Err(Error::config("patterns", "training set is empty"));
        };
        let width = first.width();
        if let Some(p) = patterns.iter().find(|p| p.width() != width) {
            return Err(Error::Dimension {
                expected: width,
                actual: p.width(),
            });
        }
        Ok(Self { patterns, seed })
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn width(&self) -> usize {
        self.patterns[0].width()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// `count` patterns of width `n` with independent fair bits.
pub fn generate_patterns(n: usize, count: usize, seed: u64) -> Result<TrainingSet> {
    if n == 0 {
        return Err(Error::config("neurons", "pattern width must be at least 1"));
    }
    if count == 0 {
        return Err(Error::config("pattern_count", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = |rng: &mut ChaCha8Rng| (0..n).map(|_| u8::from(rng.random_bool(0.5))).collect::<Vec<_>>();
    let patterns = (0..count)
        .map(|_| {
            let input = bits(&mut rng);
            let target = bits(&mut rng);
            Pattern { input, target }
        })
        .collect();
    TrainingSet::new(patterns, seed)
}

/// Parameter gradients, laid out like the network's own parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

/// A graph with one weight per edge and one bias per non-input neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNetwork {
    graph: RewiredGraph,
    weights: Vec<f64>,
    biases: Vec<f64>,
    /// `(edge index, source flat id)` per target node.
    incoming: Vec<Vec<(usize, usize)>>,
}

impl WeightedNetwork {
    /// `weights` follow `graph.edges()` order; `biases[i]` belongs to flat id `n + i`.
    pub fn new(graph: RewiredGraph, weights: Vec<f64>, biases: Vec<f64>) -> Result<Self> {
        if weights.len() != graph.edges().len() {
            return Err(Error::Dimension {
                expected: graph.edges().len(),
                actual: weights.len(),
            });
        }
        let hidden = graph.node_count() - graph.shape().neurons_per_layer();
        if biases.len() != hidden {
            return Err(Error::Dimension {
                expected: hidden,
                actual: biases.len(),
            });
        }
        let mut incoming = vec![Vec::new(); graph.node_count()];
        for (e, (s, t)) in graph.flat_edges().enumerate() {
            if s >= t {
                return Err(Error::config("graph", format!("edge {s} -> {t} is not forward")));
            }
            incoming[t].push((e, s));
        }
        Ok(Self {
            graph,
            weights,
            biases,
            incoming,
        })
    }

    pub fn zeroed(graph: RewiredGraph) -> Self {
        let w = vec![0.0; graph.edges().len()];
        let b = vec![0.0; graph.node_count() - graph.shape().neurons_per_layer()];
        Self::new(graph, w, b).expect("zeroed parameters match the graph")
    }

    pub fn graph(&self) -> &RewiredGraph {
        &self.graph
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn biases_mut(&mut self) -> &mut [f64] {
        &mut self.biases
    }

    fn width(&self) -> usize {
        self.graph.shape().neurons_per_layer()
    }

    fn output_start(&self) -> usize {
        self.graph.node_count() - self.width()
    }

    /// Activations of every neuron, indexed by flat id.
    ///
    /// # Panics
    /// If `input.len()` differs from the neurons per layer.
    pub fn forward(&self, input: &[u8]) -> Vec<f64> {
        let n = self.width();
        assert_eq!(input.len(), n, "input width must equal neurons per layer");
        let mut acts = vec![0.0; self.graph.node_count()];
        for (a, &bit) in acts.iter_mut().zip(input) {
            *a = f64::from(bit);
        }
        for v in n..acts.len() {
            let mut z = self.biases[v - n];
            for &(e, s) in &self.incoming[v] {
                z += self.weights[e] * acts[s];
            }
            acts[v] = sigmoid(z);
        }
        acts
    }

    pub fn outputs(&self, input: &[u8]) -> Vec<f64> {
        let mut acts = self.forward(input);
        acts.drain(..self.output_start());
        acts
    }

    /// Half sum of squared output errors.
    pub fn loss(&self, pattern: &Pattern) -> f64 {
        squared_error(&self.outputs(pattern.input()), pattern.target())
    }

    /// Loss and exact parameter gradients for one pattern.
    pub fn gradients(&self, pattern: &Pattern) -> (f64, Gradients) {
        let n = self.width();
        let acts = self.forward(pattern.input());
        let out = self.output_start();

        // dL/da per neuron, filled from the outputs backward
        let mut upstream = vec![0.0; acts.len()];
        for (k, &t) in pattern.target().iter().enumerate() {
            upstream[out + k] = acts[out + k] - f64::from(t);
        }
        let mut grads = Gradients {
            weights: vec![0.0; self.weights.len()],
            biases: vec![0.0; self.biases.len()],
        };
        for v in (n..acts.len()).rev() {
            let delta = upstream[v] * acts[v] * (1.0 - acts[v]);
            grads.biases[v - n] = delta;
            for &(e, s) in &self.incoming[v] {
                grads.weights[e] = delta * acts[s];
                upstream[s] += self.weights[e] * delta;
            }
        }
        (squared_error(&acts[out..], pattern.target()), grads)
    }

    /// One online gradient-descent update; returns the loss before the update.
    pub fn backprop_step(&mut self, pattern: &Pattern, learning_rate: f64) -> f64 {
        let (loss, grads) = self.gradients(pattern);
        for (w, g) in self.weights.iter_mut().zip(&grads.weights) {
            *w -= learning_rate * g;
        }
        for (b, g) in self.biases.iter_mut().zip(&grads.biases) {
            *b -= learning_rate * g;
        }
        loss
    }
}

fn squared_error(outputs: &[f64], target: &[u8]) -> f64 {
    0.5 * outputs
        .iter()
        .zip(target)
        .map(|(y, &t)| (f64::from(t) - y).powi(2))
        .sum::<f64>()
}

/// Draws every weight and bias uniformly from `[-init_range, init_range]`.
pub fn init_weights(graph: RewiredGraph, init_range: f64, seed: u64) -> Result<WeightedNetwork> {
    if !(init_range > 0.0 && init_range.is_finite()) {
        return Err(Error::config("init_range", format!("must be positive and finite, got {init_range}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..graph.edges().len())
        .map(|_| rng.random_range(-init_range..=init_range))
        .collect();
    let biases = (0..graph.node_count() - graph.shape().neurons_per_layer())
        .map(|_| rng.random_range(-init_range..=init_range))
        .collect();
    WeightedNetwork::new(graph, weights, biases)
}

/// Mean of `|target - output|` over every pattern and output neuron.
pub fn mean_absolute_error(net: &WeightedNetwork, set: &TrainingSet) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for p in set.patterns() {
        for (y, &t) in net.outputs(p.input()).iter().zip(p.target()) {
            total += (f64::from(t) - y).abs();
            count += 1;
        }
    }
    total / count as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    /// Iteration counts at which the training-set MAE is recorded.
    pub checkpoints: Vec<usize>,
    pub init_range: f64,
    pub seed: u64,
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("learning_rate", "must be positive"));
        }
        if self.iterations == 0 {
            return Err(Error::config("iterations", "must be at least 1"));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::config("checkpoints", "at least one checkpoint is required"));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("checkpoints", "must be strictly ascending"));
        }
        if self.checkpoints[0] == 0 || *self.checkpoints.last().unwrap() > self.iterations {
            return Err(Error::config("checkpoints", "must lie in 1..=iterations"));
        }
        if !(self.init_range > 0.0 && self.init_range.is_finite()) {
            return Err(Error::config("init_range", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingResult {
    /// MAE of the network as passed in, before any update.
    pub initial_mae: f64,
    pub mae_at_checkpoint: BTreeMap<usize, f64>,
    pub final_mae: f64,
}

/// Runs `cfg.iterations` single-pattern updates, cycling through the set in
/// order, and records the training-set MAE at each checkpoint.
pub fn train(net: &mut WeightedNetwork, set: &TrainingSet, cfg: &TrainingConfig) -> Result<TrainingResult> {
    cfg.validate()?;
    if set.width() != net.width() {
        return Err(Error::Dimension {
            expected: net.width(),
            actual: set.width(),
        });
    }
    let initial_mae = mean_absolute_error(net, set);
    let mut mae_at_checkpoint = BTreeMap::new();
    let mut checkpoints = cfg.checkpoints.iter().peekable();
    let patterns = set.patterns();
    for iteration in 1..=cfg.iterations {
        net.backprop_step(&patterns[(iteration - 1) % patterns.len()], cfg.learning_rate);
        if checkpoints.peek() == Some(&&iteration) {
            checkpoints.next();
            mae_at_checkpoint.insert(iteration, mean_absolute_error(net, set));
        }
    }
    let final_mae = match mae_at_checkpoint.get(&cfg.iterations) {
        Some(&mae) => mae,
        None => mean_absolute_error(net, set),
    };
    Ok(TrainingResult {
        initial_mae,
        mae_at_checkpoint,
        final_mae,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_layered_fnn, LayeredShape};

    fn chain() -> RewiredGraph {
        build_layered_fnn(LayeredShape::new(1, 2).unwrap())
    }

    fn config(iterations: usize, checkpoints: Vec<usize>) -> TrainingConfig {
        TrainingConfig {
            learning_rate: 0.1,
            iterations,
            checkpoints,
            init_range: 0.5,
            seed: 0,
        }
    }

    #[test]
    fn patterns_have_requested_shape() {
        let set = generate_patterns(5, 40, 1).unwrap();
        assert_eq!(set.len(), 40);
        assert!(set.patterns().iter().all(|p| p.input().len() == 5 && p.target().len() == 5));
        let wide = generate_patterns(10, 30, 1).unwrap();
        assert_eq!((wide.len(), wide.width()), (30, 10));
        assert_eq!(generate_patterns(5, 40, 1).unwrap(), set);
        assert_ne!(generate_patterns(5, 40, 2).unwrap(), set);
        assert!(generate_patterns(0, 4, 1).is_err());
    }

    #[test]
    fn init_range_is_respected() {
        let g = build_layered_fnn(LayeredShape::new(5, 5).unwrap());
        assert!(init_weights(g.clone(), 0.0, 1).is_err());
        let net = init_weights(g.clone(), 0.5, 1).unwrap();
        assert!(net.weights().iter().chain(net.biases()).all(|p| p.abs() <= 0.5));
        assert_eq!(net.biases().len(), 20);
        assert_eq!(init_weights(g, 0.5, 1).unwrap(), net);
    }

    #[test]
    fn forward_with_zero_parameters() {
        let g = build_layered_fnn(LayeredShape::new(3, 4).unwrap());
        let net = WeightedNetwork::zeroed(g);
        let acts = net.forward(&[1, 0, 1]);
        assert_eq!(&acts[..3], &[1.0, 0.0, 1.0]);
        assert!(acts[3..].iter().all(|&a| a == 0.5));
    }

    #[test]
    fn single_edge_forward_and_update() {
        let mut net = WeightedNetwork::new(chain(), vec![1.0], vec![0.0]).unwrap();
        let y = net.outputs(&[1])[0];
        assert!((y - 0.731_058_578_630_004_9).abs() < 1e-15);

        let p = Pattern::new(vec![1], vec![0]).unwrap();
        let eta = 0.3;
        let expected_dw = eta * (0.0 - y) * y * (1.0 - y) * 1.0;
        let loss = net.backprop_step(&p, eta);
        assert!((loss - 0.5 * y * y).abs() < 1e-15);
        assert!((net.weights()[0] - (1.0 + expected_dw)).abs() < 1e-15);
        assert!((net.biases()[0] - expected_dw).abs() < 1e-15);
    }

    #[test]
    fn zero_learning_rate_changes_nothing() {
        let g = build_layered_fnn(LayeredShape::new(3, 3).unwrap());
        let mut net = init_weights(g, 0.5, 9).unwrap();
        let before = net.clone();
        net.backprop_step(&Pattern::new(vec![1, 0, 1], vec![0, 1, 1]).unwrap(), 0.0);
        assert_eq!(net, before);
    }

    #[test]
    fn mae_examples() {
        let set = TrainingSet::new(vec![Pattern::new(vec![0, 1], vec![0, 1]).unwrap()], 0).unwrap();
        let g = build_layered_fnn(LayeredShape::new(2, 2).unwrap());
        // sigmoid(-ln 3) = 0.25, sigmoid(ln 3) = 0.75
        let ln3 = 3f64.ln();
        let net = WeightedNetwork::new(g.clone(), vec![0.0; 4], vec![-ln3, ln3]).unwrap();
        assert!((mean_absolute_error(&net, &set) - 0.25).abs() < 1e-15);
        assert_eq!(mean_absolute_error(&WeightedNetwork::zeroed(g), &set), 0.5);
    }

    #[test]
    fn train_records_checkpoints() {
        let g = build_layered_fnn(LayeredShape::new(3, 3).unwrap());
        let set = generate_patterns(3, 4, 2).unwrap();
        let mut net = WeightedNetwork::zeroed(g.clone());
        let r = train(&mut net, &set, &config(5, vec![5])).unwrap();
        assert_eq!(r.initial_mae, 0.5);
        assert_eq!(r.mae_at_checkpoint.len(), 1);
        assert_eq!(r.final_mae, r.mae_at_checkpoint[&5]);

        let mut net = WeightedNetwork::zeroed(g);
        let r = train(&mut net, &set, &config(10, vec![2, 6])).unwrap();
        assert_eq!(r.mae_at_checkpoint.keys().copied().collect::<Vec<_>>(), vec![2, 6]);
    }

    #[test]
    fn config_validation() {
        assert!(config(10, vec![]).validate().is_err());
        assert!(config(10, vec![11]).validate().is_err());
        assert!(config(10, vec![5, 5]).validate().is_err());
        let mut c = config(10, vec![10]);
        c.learning_rate = 0.0;
        assert!(c.validate().is_err());
    }
}

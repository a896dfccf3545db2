//! Small fully connected Q-network with hand-written backprop and Adam.
//!
//! Parameters live in one flat vector, layer by layer: the weight matrix
//! (row-major, `outputs x inputs`) followed by the bias vector. Hidden layers
//! use a rectifier, the output layer is linear.

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QNetwork {
    sizes: Vec<usize>,
    params: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
struct LayerView {
    inputs: usize,
    outputs: usize,
    w: usize,
    b: usize,
}

impl QNetwork {
    /// Uniform init in `+-1/sqrt(fan_in)` for weights and biases.
    pub fn new(sizes: &[usize], rng: &mut impl Rng) -> Self {
        let mut net = Self::zeros(sizes);
        for layer in net.layers() {
            let bound = 1.0 / (layer.inputs as f64).sqrt();
            for p in &mut net.params[layer.w..layer.b + layer.outputs] {
                *p = rng.random_range(-bound..bound);
            }
        }
        net
    }

    pub fn zeros(sizes: &[usize]) -> Self {
        assert!(sizes.len() >= 2, "need at least an input and an output layer");
        assert!(sizes.iter().all(|&s| s > 0), "layer sizes must be positive");
        let n: usize = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        Self {
            sizes: sizes.to_vec(),
            params: vec![0.0; n],
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    fn layers(&self) -> Vec<LayerView> {
        let mut offset = 0;
        self.sizes
            .windows(2)
            .map(|w| {
                let view = LayerView {
                    inputs: w[0],
                    outputs: w[1],
                    w: offset,
                    b: offset + w[0] * w[1],
                };
                offset = view.b + w[1];
                view
            })
            .collect()
    }

    /// Sets weight `(row, col)` of `layer` (used to build hand-checked nets).
    pub fn set_weight(&mut self, layer: usize, row: usize, col: usize, value: f64) {
        let l = self.layers()[layer];
        self.params[l.w + row * l.inputs + col] = value;
    }

    pub fn set_bias(&mut self, layer: usize, row: usize, value: f64) {
        let l = self.layers()[layer];
        self.params[l.b + row] = value;
    }

    fn affine(&self, l: &LayerView, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let w = &self.params[l.w..l.b];
        let b = &self.params[l.b..l.b + l.outputs];
        out.extend(w.chunks_exact(l.inputs).zip(b).map(|(row, bias)| {
            row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + bias
        }));
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.input_dim(), "input dimension mismatch");
        let layers = self.layers();
        let mut cur = x.to_vec();
        let mut next = Vec::new();
        for (i, l) in layers.iter().enumerate() {
            self.affine(l, &cur, &mut next);
            if i + 1 < layers.len() {
                next.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Mean squared error between `Q(inputs[i], actions[i])` and `targets[i]`.
    pub fn loss(&self, inputs: &[Vec<f64>], actions: &[usize], targets: &[f64]) -> f64 {
        let n = inputs.len() as f64;
        inputs
            .iter()
            .zip(actions)
            .zip(targets)
            .map(|((x, &a), &y)| {
                let e = self.forward(x)[a] - y;
                e * e
            })
            .sum::<f64>()
            / n
    }

    /// Loss as in [`QNetwork::loss`] plus its gradient w.r.t. every parameter.
    pub fn loss_and_grad(
        &self,
        inputs: &[Vec<f64>],
        actions: &[usize],
        targets: &[f64],
    ) -> (f64, Vec<f64>) {
        let layers = self.layers();
        let n = inputs.len() as f64;
        let mut grad = vec![0.0; self.params.len()];
        let mut loss = 0.0;
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(layers.len() + 1);
        let mut delta = Vec::new();
        let mut prev_delta = Vec::new();

        for ((x, &a), &y) in inputs.iter().zip(actions).zip(targets) {
            acts.clear();
            acts.push(x.clone());
            for (i, l) in layers.iter().enumerate() {
                let mut out = Vec::with_capacity(l.outputs);
                self.affine(l, &acts[i], &mut out);
                if i + 1 < layers.len() {
                    out.iter_mut().for_each(|v| *v = v.max(0.0));
                }
                acts.push(out);
            }
            let q = &acts[layers.len()];
            let err = q[a] - y;
            loss += err * err;

            delta.clear();
            delta.resize(q.len(), 0.0);
            delta[a] = 2.0 * err / n;

            for (i, l) in layers.iter().enumerate().rev() {
                let input = &acts[i];
                for (r, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    let row = &mut grad[l.w + r * l.inputs..l.w + (r + 1) * l.inputs];
                    row.iter_mut().zip(input).for_each(|(g, &xi)| *g += d * xi);
                    grad[l.b + r] += d;
                }
                if i == 0 {
                    break;
                }
                prev_delta.clear();
                prev_delta.resize(l.inputs, 0.0);
                let w = &self.params[l.w..l.b];
                for (r, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    let row = &w[r * l.inputs..(r + 1) * l.inputs];
                    prev_delta.iter_mut().zip(row).for_each(|(p, &wij)| *p += d * wij);
                }
                // Rectifier derivative of the hidden activation feeding this layer.
                prev_delta
                    .iter_mut()
                    .zip(input)
                    .for_each(|(p, &h)| if h <= 0.0 { *p = 0.0 });
                std::mem::swap(&mut delta, &mut prev_delta);
            }
        }
        (loss / n, grad)
    }
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Adaptive-moment optimizer over a flat parameter vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adam {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(learning_rate: f64, num_params: usize) -> Self {
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-7,
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            t: 0,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        assert_eq!(params.len(), self.m.len());
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for (((p, &g), m), v) in params
            .iter_mut()
            .zip(grad)
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
        {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_network_outputs_zero() {
        let net = QNetwork::zeros(&[4, 32, 32, 7]);
        assert_eq!(net.forward(&[0.3, 0.1, 0.9, 0.5]), vec![0.0; 7]);
    }

    #[test]
    fn output_width_is_action_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let net = QNetwork::new(&[4, 32, 32, 7], &mut rng);
        for _ in 0..10 {
            let x: Vec<f64> = (0..4).map(|_| rng.random()).collect();
            assert_eq!(net.forward(&x).len(), 7);
        }
        assert_eq!(net.num_params(), 4 * 32 + 32 + 32 * 32 + 32 + 32 * 7 + 7);
    }

    #[test]
    fn hand_computed_two_two_two() {
        // h = relu(W1 x + b1), q = W2 h + b2
        let mut net = QNetwork::zeros(&[2, 2, 2]);
        net.set_weight(0, 0, 0, 1.0);
        net.set_weight(0, 0, 1, -1.0);
        net.set_weight(0, 1, 0, 0.5);
        net.set_weight(0, 1, 1, 2.0);
        net.set_bias(0, 0, 0.1);
        net.set_bias(0, 1, -3.0);
        net.set_weight(1, 0, 0, 2.0);
        net.set_weight(1, 0, 1, 1.0);
        net.set_weight(1, 1, 0, -1.0);
        net.set_weight(1, 1, 1, 4.0);
        net.set_bias(1, 0, 0.5);
        net.set_bias(1, 1, 0.0);
        // x = (2, 1): pre-activations (1.1, -1.0) -> h = (1.1, 0)
        let q = net.forward(&[2.0, 1.0]);
        assert!((q[0] - 2.7).abs() < 1e-12);
        assert!((q[1] + 1.1).abs() < 1e-12);
    }

    #[test]
    fn argmax_ties_pick_lowest() {
        assert_eq!(argmax(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]), 3);
        assert_eq!(argmax(&[0.5; 7]), 0);
        assert_eq!(argmax(&[1.0, 2.0, 2.0]), 1);
    }

    #[test]
    fn adam_moves_against_gradient() {
        let mut p = vec![1.0, -1.0];
        let mut opt = Adam::new(0.1, 2);
        opt.step(&mut p, &[1.0, -2.0]);
        assert!(p[0] < 1.0 && p[1] > -1.0);
        // First Adam step has magnitude ~ learning rate.
        assert!((1.0 - p[0] - 0.1).abs() < 1e-6);
    }
}

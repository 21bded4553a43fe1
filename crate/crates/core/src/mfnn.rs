//! Two-hidden-layer feed-forward network.
//!
//! Both hidden layers use a sigmoid whose argument is `w . x - b` (the bias
//! is subtracted); the output layer is linear with no bias. Parameters are
//! exchanged with optimizers as a flat vector laid out as
//! `[w1 row-major, b1, w2 row-major, b2, w_out row-major]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::optim::Objective;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetworkSpec {
    pub n_inputs: usize,
    pub hidden1: usize,
    pub hidden2: usize,
    pub n_outputs: usize,
}

impl Default for NetworkSpec {
    fn default() -> Self {
        Self::new(1, 10, 10, 1).expect("valid default")
    }
}

impl NetworkSpec {
    pub fn new(n_inputs: usize, hidden1: usize, hidden2: usize, n_outputs: usize) -> Result<Self> {
        if n_inputs == 0 || hidden1 == 0 || hidden2 == 0 || n_outputs == 0 {
            return Err(Error::invalid(format!(
                "layer sizes must be positive, got ({n_inputs}, {hidden1}, {hidden2}, {n_outputs})"
            )));
        }
        Ok(Self {
            n_inputs,
            hidden1,
            hidden2,
            n_outputs,
        })
    }

    /// Length of the flat parameter vector.
    pub fn dim(&self) -> usize {
        let (n, h1, h2, o) = (self.n_inputs, self.hidden1, self.hidden2, self.n_outputs);
        n * h1 + h1 + h1 * h2 + h2 + h2 * o
    }

    fn offsets(&self) -> [usize; 5] {
        let (n, h1, h2) = (self.n_inputs, self.hidden1, self.hidden2);
        let w1 = 0;
        let b1 = w1 + n * h1;
        let w2 = b1 + h1;
        let b2 = w2 + h1 * h2;
        let w_out = b2 + h2;
        [w1, b1, w2, b2, w_out]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkParams {
    pub spec: NetworkSpec,
    /// `hidden1 x n_inputs`, row-major.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// `hidden2 x hidden1`, row-major.
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
    /// `n_outputs x hidden2`, row-major.
    pub w_out: Vec<f64>,
}

impl NetworkParams {
    pub fn zeros(spec: NetworkSpec) -> Self {
        Self {
            spec,
            w1: vec![0.0; spec.hidden1 * spec.n_inputs],
            b1: vec![0.0; spec.hidden1],
            w2: vec![0.0; spec.hidden2 * spec.hidden1],
            b2: vec![0.0; spec.hidden2],
            w_out: vec![0.0; spec.n_outputs * spec.hidden2],
        }
    }

    pub fn encode(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.spec.dim());
        v.extend_from_slice(&self.w1);
        v.extend_from_slice(&self.b1);
        v.extend_from_slice(&self.w2);
        v.extend_from_slice(&self.b2);
        v.extend_from_slice(&self.w_out);
        v
    }

    pub fn decode(flat: &[f64], spec: NetworkSpec) -> Result<Self> {
        let layers = Layers::new(flat, spec)?;
        Ok(Self {
            spec,
            w1: layers.w1.to_vec(),
            b1: layers.b1.to_vec(),
            w2: layers.w2.to_vec(),
            b2: layers.b2.to_vec(),
            w_out: layers.w_out.to_vec(),
        })
    }

    pub fn layers(&self) -> Layers<'_> {
        Layers {
            spec: self.spec,
            w1: &self.w1,
            b1: &self.b1,
            w2: &self.w2,
            b2: &self.b2,
            w_out: &self.w_out,
        }
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        self.layers().forward(x)
    }
}

/// Borrowed view of a parameter set, typically over a flat decision vector.
#[derive(Clone, Copy, Debug)]
pub struct Layers<'a> {
    pub spec: NetworkSpec,
    pub w1: &'a [f64],
    pub b1: &'a [f64],
    pub w2: &'a [f64],
    pub b2: &'a [f64],
    pub w_out: &'a [f64],
}

/// Activations of one forward pass.
#[derive(Clone, Debug, Default)]
struct Activations {
    hidden1: Vec<f64>,
    hidden2: Vec<f64>,
    output: Vec<f64>,
}

impl<'a> Layers<'a> {
    pub fn new(flat: &'a [f64], spec: NetworkSpec) -> Result<Self> {
        if flat.len() != spec.dim() {
            return Err(Error::invalid(format!(
                "parameter vector has length {}, network needs {}",
                flat.len(),
                spec.dim()
            )));
        }
        let [w1, b1, w2, b2, w_out] = spec.offsets();
        Ok(Self {
            spec,
            w1: &flat[w1..b1],
            b1: &flat[b1..w2],
            w2: &flat[w2..b2],
            b2: &flat[b2..w_out],
            w_out: &flat[w_out..],
        })
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut act = Activations::default();
        self.forward_into(x, &mut act);
        act.output
    }

    fn forward_into(&self, x: &[f64], act: &mut Activations) {
        let s = self.spec;
        debug_assert_eq!(x.len(), s.n_inputs);
        act.hidden1.clear();
        act.hidden1.extend(
            self.w1
                .chunks_exact(s.n_inputs)
                .zip(self.b1)
                .map(|(row, b)| sigmoid(dot(row, x) - b)),
        );
        act.hidden2.clear();
        act.hidden2.extend(
            self.w2
                .chunks_exact(s.hidden1)
                .zip(self.b2)
                .map(|(row, b)| sigmoid(dot(row, &act.hidden1) - b)),
        );
        act.output.clear();
        act.output.extend(
            self.w_out
                .chunks_exact(s.hidden2)
                .map(|row| dot(row, &act.hidden2)),
        );
    }
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Training pairs for the network.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<Vec<f64>>,
}

impl Samples {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<Vec<f64>>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::invalid("training set is empty"));
        }
        if inputs.len() != targets.len() {
            return Err(Error::invalid(format!(
                "{} inputs but {} targets",
                inputs.len(),
                targets.len()
            )));
        }
        Ok(Self { inputs, targets })
    }

    /// One scalar input and one scalar target per sample.
    pub fn scalar(inputs: &[f64], targets: &[f64]) -> Result<Self> {
        Self::new(
            inputs.iter().map(|&x| vec![x]).collect(),
            targets.iter().map(|&y| vec![y]).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    fn check(&self, spec: NetworkSpec) -> Result<()> {
        if self.inputs.iter().any(|x| x.len() != spec.n_inputs)
            || self.targets.iter().any(|t| t.len() != spec.n_outputs)
        {
            return Err(Error::invalid("sample widths do not match the network"));
        }
        Ok(())
    }
}

/// Mean over samples of the squared output error (summed over outputs).
pub fn mse(layers: &Layers<'_>, samples: &Samples) -> f64 {
    let mut act = Activations::default();
    let mut total = 0.0;
    for (x, t) in samples.inputs.iter().zip(&samples.targets) {
        layers.forward_into(x, &mut act);
        total += act
            .output
            .iter()
            .zip(t)
            .map(|(o, t)| (t - o).powi(2))
            .sum::<f64>();
    }
    total / samples.len() as f64
}

/// MSE fitness of a flat parameter vector.
pub fn mse_fitness(flat: &[f64], spec: NetworkSpec, samples: &Samples) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("training set is empty"));
    }
    samples.check(spec)?;
    Ok(mse(&Layers::new(flat, spec)?, samples))
}

/// The network training loss as an optimizer objective.
#[derive(Clone, Debug)]
pub struct MseObjective {
    spec: NetworkSpec,
    samples: Samples,
}

impl MseObjective {
    pub fn new(spec: NetworkSpec, samples: Samples) -> Result<Self> {
        samples.check(spec)?;
        Ok(Self { spec, samples })
    }

    pub fn spec(&self) -> NetworkSpec {
        self.spec
    }
}

impl Objective for MseObjective {
    fn evaluate(&self, x: &[f64]) -> f64 {
        match Layers::new(x, self.spec) {
            Ok(layers) => mse(&layers, &self.samples),
            Err(_) => f64::NAN,
        }
    }
}

/// Loss and its gradient with respect to the flat parameter vector.
pub fn loss_and_gradient(
    flat: &[f64],
    spec: NetworkSpec,
    samples: &Samples,
) -> Result<(f64, Vec<f64>)> {
    samples.check(spec)?;
    let layers = Layers::new(flat, spec)?;
    let [o_w1, o_b1, o_w2, o_b2, o_wout] = spec.offsets();
    let (n, h1, h2) = (spec.n_inputs, spec.hidden1, spec.hidden2);
    let scale = 1.0 / samples.len() as f64;

    let mut grad = vec![0.0; spec.dim()];
    let mut loss = 0.0;
    let mut act = Activations::default();
    let mut d_h1 = vec![0.0; h1];
    let mut d_h2 = vec![0.0; h2];
    for (x, t) in samples.inputs.iter().zip(&samples.targets) {
        layers.forward_into(x, &mut act);
        d_h2.iter_mut().for_each(|v| *v = 0.0);
        for (l, (o, t)) in act.output.iter().zip(t).enumerate() {
            let err = o - t;
            loss += err * err;
            let d_out = 2.0 * err * scale;
            for k in 0..h2 {
                grad[o_wout + l * h2 + k] += d_out * act.hidden2[k];
                d_h2[k] += d_out * layers.w_out[l * h2 + k];
            }
        }
        d_h1.iter_mut().for_each(|v| *v = 0.0);
        for k in 0..h2 {
            let theta = act.hidden2[k];
            let dz = d_h2[k] * theta * (1.0 - theta);
            grad[o_b2 + k] -= dz;
            for j in 0..h1 {
                grad[o_w2 + k * h1 + j] += dz * act.hidden1[j];
                d_h1[j] += dz * layers.w2[k * h1 + j];
            }
        }
        for j in 0..h1 {
            let y = act.hidden1[j];
            let dz = d_h1[j] * y * (1.0 - y);
            grad[o_b1 + j] -= dz;
            for i in 0..n {
                grad[o_w1 + j * n + i] += dz * x[i];
            }
        }
    }
    Ok((loss * scale, grad))
}

/// Result of gradient back-propagation training.
#[derive(Clone, Debug, PartialEq)]
pub struct BpOutcome {
    pub params: NetworkParams,
    /// Loss at the start of each epoch.
    pub losses: Vec<f64>,
}

/// Full-batch gradient descent on the MSE, starting from weights drawn
/// uniformly in `[-0.5, 0.5]`.
pub fn bp_train(
    spec: NetworkSpec,
    samples: &Samples,
    learning_rate: f64,
    epochs: usize,
    seed: u64,
) -> Result<BpOutcome> {
    if !(learning_rate.is_finite() && learning_rate >= 0.0) {
        return Err(Error::invalid(format!(
            "learning rate {learning_rate} must be non-negative"
        )));
    }
    if epochs == 0 {
        return Err(Error::invalid("epochs must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat: Vec<f64> = (0..spec.dim())
        .map(|_| rng.random_range(-0.5..=0.5))
        .collect();
    let mut losses = Vec::with_capacity(epochs);
    for epoch in 1..=epochs {
        let (loss, grad) = loss_and_gradient(&flat, spec, samples)?;
        if !loss.is_finite() {
            return Err(Error::Training { epoch, loss });
        }
        losses.push(loss);
        for (p, g) in flat.iter_mut().zip(&grad) {
            *p -= learning_rate * g;
        }
    }
    Ok(BpOutcome {
        params: NetworkParams::decode(&flat, spec)?,
        losses,
    })
}

//! Desk-scale evaluation: seeded train/test splitting, one-vs-rest L2
//! logistic regression over feature rows, and micro-averaged metrics.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One example: a document id, its gold labels, and its feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub id: String,
    #[serde(default)]
    pub labels: BTreeSet<String>,
    pub features: Vec<f64>,
}

/// Seeded train fraction. The same spec always produces the same partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(fraction: f64, seed: u64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::Degenerate(format!(
                "train fraction {fraction} outside (0, 1)"
            )));
        }
        Ok(SplitSpec { fraction, seed })
    }
}

/// Partition row indices 0..n into (train, test): a seeded shuffle with the
/// first ceil(fraction * n) indices as the training set.
pub fn split(n_rows: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    if n_rows < 2 {
        return Err(Error::Degenerate(format!(
            "cannot split {n_rows} rows into train and test"
        )));
    }
    let train_size = (spec.fraction * n_rows as f64).ceil() as usize;
    if train_size >= n_rows {
        return Err(Error::Degenerate(format!(
            "train fraction {} leaves no test rows for {n_rows} rows",
            spec.fraction
        )));
    }
    let mut indices: Vec<usize> = (0..n_rows).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    indices.shuffle(&mut rng);
    let test = indices.split_off(train_size);
    Ok((indices, test))
}

/// Gradient-descent settings for the logistic models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub l2: f64,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            l2: 1e-3,
            learning_rate: 0.1,
            max_epochs: 2000,
            tolerance: 1e-6,
        }
    }
}

/// Feature standardization fitted on the training partition only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Scaler {
    fn fit(rows: &[&FeatureRow]) -> Scaler {
        let dim = rows[0].features.len();
        let n = rows.len() as f64;
        let mut mean = vec![0.0; dim];
        for row in rows {
            for (m, &x) in mean.iter_mut().zip(&row.features) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= n;
        }
        let mut var = vec![0.0; dim];
        for row in rows {
            for ((v, &m), &x) in var.iter_mut().zip(&mean).zip(&row.features) {
                *v += (x - m) * (x - m);
            }
        }
        let std = var
            .iter()
            .map(|&v| {
                let s = (v / n).sqrt();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        Scaler { mean, std }
    }

    pub fn transform(&self, features: &[f64]) -> Vec<f64> {
        features
            .iter()
            .zip(&self.mean)
            .zip(&self.std)
            .map(|((&x, &m), &s)| (x - m) / s)
            .collect()
    }
}

/// One binary one-vs-rest classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelModel {
    pub label: String,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub converged: bool,
    pub epochs_run: usize,
}

/// The trained multi-label model: a scaler plus one binary model per label,
/// in sorted label order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub dim: usize,
    pub scaler: Scaler,
    pub labels: Vec<LabelModel>,
}

impl Model {
    pub fn label_names(&self) -> Vec<&str> {
        self.labels.iter().map(|m| m.label.as_str()).collect()
    }

    /// Per-label probabilities for one raw (unscaled) feature vector, in the
    /// model's label order.
    pub fn probabilities(&self, features: &[f64]) -> Vec<f64> {
        let x = self.scaler.transform(features);
        self.labels
            .iter()
            .map(|m| sigmoid(dot(&m.weights, &x) + m.bias))
            .collect()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Mean logistic loss plus L2 penalty (bias unpenalized), with gradients.
fn loss_and_grad(
    x: &[Vec<f64>],
    y: &[f64],
    w: &[f64],
    b: f64,
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.len() as f64;
    let dim = w.len();
    let mut loss = 0.0;
    let mut gw = vec![0.0; dim];
    let mut gb = 0.0;
    for (xi, &yi) in x.iter().zip(y) {
        let z = dot(w, xi) + b;
        // ln(1 + exp(-m)) with m = z for y=1, -z for y=0, computed stably.
        let m = if yi > 0.5 { z } else { -z };
        loss += if m > 0.0 {
            (-m).exp().ln_1p()
        } else {
            -m + m.exp().ln_1p()
        };
        let residual = sigmoid(z) - yi;
        for (g, &xij) in gw.iter_mut().zip(xi) {
            *g += residual * xij;
        }
        gb += residual;
    }
    loss /= n;
    gb /= n;
    for (g, &wj) in gw.iter_mut().zip(w) {
        *g = *g / n + l2 * wj;
        loss += 0.5 * l2 * wj * wj;
    }
    (loss, gw, gb)
}

struct Fit {
    weights: Vec<f64>,
    bias: f64,
    converged: bool,
    epochs_run: usize,
    losses: Vec<f64>,
}

fn fit_binary(x: &[Vec<f64>], y: &[f64], cfg: &TrainConfig) -> Fit {
    let dim = x[0].len();
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut losses = Vec::new();
    let mut converged = false;
    let mut epochs_run = 0;
    for epoch in 0..cfg.max_epochs {
        let (loss, gw, gb) = loss_and_grad(x, y, &w, b, cfg.l2);
        losses.push(loss);
        epochs_run = epoch + 1;
        let max_grad = gw
            .iter()
            .map(|g| g.abs())
            .fold(gb.abs(), f64::max);
        if max_grad < cfg.tolerance {
            converged = true;
            break;
        }
        for (wj, gj) in w.iter_mut().zip(&gw) {
            *wj -= cfg.learning_rate * gj;
        }
        b -= cfg.learning_rate * gb;
    }
    Fit {
        weights: w,
        bias: b,
        converged,
        epochs_run,
        losses,
    }
}

/// Train one-vs-rest logistic models for every label in `alphabet`.
/// Each label must have at least one positive training example.
pub fn train(
    rows: &[&FeatureRow],
    alphabet: &BTreeSet<String>,
    cfg: &TrainConfig,
) -> Result<Model> {
    if rows.is_empty() {
        return Err(Error::Degenerate("no training rows".to_string()));
    }
    let dim = rows[0].features.len();
    for row in rows {
        if row.features.len() != dim {
            return Err(Error::ContractViolation(format!(
                "row '{}' has {} features, expected {dim}",
                row.id,
                row.features.len()
            )));
        }
    }
    for label in alphabet {
        if !rows.iter().any(|r| r.labels.contains(label)) {
            return Err(Error::LabelMissing(label.clone()));
        }
    }
    let scaler = Scaler::fit(rows);
    let x: Vec<Vec<f64>> = rows.iter().map(|r| scaler.transform(&r.features)).collect();
    let labels = alphabet
        .iter()
        .map(|label| {
            let y: Vec<f64> = rows
                .iter()
                .map(|r| if r.labels.contains(label) { 1.0 } else { 0.0 })
                .collect();
            let fit = fit_binary(&x, &y, cfg);
            if !fit.converged {
                log::warn!(
                    "label '{label}' did not converge in {} epochs",
                    fit.epochs_run
                );
            }
            log::debug!(
                "label '{label}': {} epochs, final loss {:?}",
                fit.epochs_run,
                fit.losses.last()
            );
            LabelModel {
                label: label.clone(),
                weights: fit.weights,
                bias: fit.bias,
                converged: fit.converged,
                epochs_run: fit.epochs_run,
            }
        })
        .collect();
    Ok(Model { dim, scaler, labels })
}

/// Micro-averaged metrics over all (example, label) binary decisions, plus
/// a per-label breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub per_label: Vec<LabelMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelMetrics {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    tp: usize,
    fp: usize,
    fn_: usize,
    tn: usize,
}

impl Counts {
    fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r > 0.0 {
            2.0 * p * r / (p + r)
        } else {
            0.0
        }
    }

    fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.tp + self.fp + self.fn_ + self.tn)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Evaluate a model over rows: every (row, model label) pair is one binary
/// decision at the given probability threshold.
pub fn evaluate(model: &Model, rows: &[&FeatureRow], threshold: f64) -> Metrics {
    let mut total = Counts::default();
    let mut by_label = vec![Counts::default(); model.labels.len()];
    for row in rows {
        let probs = model.probabilities(&row.features);
        for (k, (m, &p)) in model.labels.iter().zip(&probs).enumerate() {
            let predicted = p >= threshold;
            let gold = row.labels.contains(&m.label);
            let c = &mut by_label[k];
            match (predicted, gold) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
    }
    for c in &by_label {
        total.tp += c.tp;
        total.fp += c.fp;
        total.fn_ += c.fn_;
        total.tn += c.tn;
    }
    Metrics {
        precision: total.precision(),
        recall: total.recall(),
        f1: total.f1(),
        accuracy: total.accuracy(),
        per_label: model
            .labels
            .iter()
            .zip(&by_label)
            .map(|(m, c)| LabelMetrics {
                label: m.label.clone(),
                precision: c.precision(),
                recall: c.recall(),
                f1: c.f1(),
                accuracy: c.accuracy(),
                support: c.tp + c.fn_,
            })
            .collect(),
    }
}

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, MinMaxScaler};
use crate::error::{Error, Result};

/// Regularised mean log-loss over a fixed design matrix.
///
/// Parameters are `theta = [w_1, ..., w_d, b]`:
/// `J = (1/n) * sum(softplus(z_i) - y_i * z_i) + |w|^2 / (2 C n)` with
/// `z_i = w . x_i + b`. The bias is not penalised.
#[derive(Debug, Clone)]
pub struct LogisticObjective {
    x: Vec<Vec<f64>>,
    y: Vec<f64>,
    c: f64,
}

impl LogisticObjective {
    /// `y` holds 1.0 for POSITIVE and 0.0 for NEGATIVE.
    pub fn new(x: Vec<Vec<f64>>, y: Vec<f64>, c: f64) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::InvalidDataset(format!(
                "{} rows but {} targets",
                x.len(),
                y.len()
            )));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be > 0, got {c}")));
        }
        let d = x[0].len();
        if let Some(bad) = x.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(LogisticObjective { x, y, c })
    }

    pub fn n_params(&self) -> usize {
        self.x[0].len() + 1
    }

    fn margin(&self, theta: &[f64], i: usize) -> f64 {
        let d = theta.len() - 1;
        self.x[i].iter().zip(&theta[..d]).map(|(a, w)| a * w).sum::<f64>() + theta[d]
    }

    fn penalty_scale(&self) -> f64 {
        1.0 / (self.c * self.x.len() as f64)
    }

    pub fn loss(&self, theta: &[f64]) -> f64 {
        let n = self.x.len() as f64;
        let d = theta.len() - 1;
        let data: f64 = (0..self.x.len())
            .map(|i| {
                let z = self.margin(theta, i);
                softplus(z) - self.y[i] * z
            })
            .sum();
        let w2: f64 = theta[..d].iter().map(|w| w * w).sum();
        data / n + 0.5 * w2 * self.penalty_scale()
    }

    pub fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        let n = self.x.len() as f64;
        let d = theta.len() - 1;
        let mut g = vec![0.0; d + 1];
        for i in 0..self.x.len() {
            let r = sigmoid(self.margin(theta, i)) - self.y[i];
            for (gj, xj) in g[..d].iter_mut().zip(&self.x[i]) {
                *gj += r * xj;
            }
            g[d] += r;
        }
        let lambda = self.penalty_scale();
        for (j, gj) in g.iter_mut().enumerate() {
            *gj /= n;
            if j < d {
                *gj += lambda * theta[j];
            }
        }
        g
    }

    /// Upper bound on the gradient's Lipschitz constant for rows inside the unit cube.
    fn smoothness(&self) -> f64 {
        let max_sq = self
            .x
            .iter()
            .map(|r| 1.0 + r.iter().map(|v| v * v).sum::<f64>())
            .fold(0.0, f64::max);
        0.25 * max_sq + self.penalty_scale()
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Stop once every gradient component is below this.
const GRADIENT_TOLERANCE: f64 = 1e-6;

/// Logistic regression on min-max scaled features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub c: f64,
    pub scaler: MinMaxScaler,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl LogisticModel {
    /// Batch gradient descent from zero weights. The step starts at the inverse
    /// smoothness bound and halves whenever a step would increase the loss.
    pub fn fit(ds: &Dataset, c: f64, max_iter: usize) -> Result<Self> {
        if max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        ds.require_both_classes()?;
        let scaler = MinMaxScaler::fit(ds);
        let y = ds
            .labels()
            .iter()
            .map(|l| if l.is_positive() { 1.0 } else { 0.0 })
            .collect();
        let obj = LogisticObjective::new(scaler.scale_all(ds), y, c)?;
        let (theta, iterations, converged) = minimize(&obj, max_iter);
        let d = theta.len() - 1;
        Ok(LogisticModel {
            c,
            scaler,
            weights: theta[..d].to_vec(),
            bias: theta[d],
            iterations,
            converged,
        })
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        let z: f64 = self
            .scaler
            .scale_row(x)
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| a * w)
            .sum::<f64>()
            + self.bias;
        sigmoid(z)
    }
}

fn minimize(obj: &LogisticObjective, max_iter: usize) -> (Vec<f64>, usize, bool) {
    let mut theta = vec![0.0; obj.n_params()];
    let mut loss = obj.loss(&theta);
    let mut step = 1.0 / obj.smoothness();
    for it in 0..max_iter {
        let g = obj.gradient(&theta);
        if g.iter().all(|v| v.abs() < GRADIENT_TOLERANCE) {
            return (theta, it, true);
        }
        loop {
            let next: Vec<f64> = theta.iter().zip(&g).map(|(t, gi)| t - step * gi).collect();
            let next_loss = obj.loss(&next);
            if next_loss <= loss {
                theta = next;
                loss = next_loss;
                break;
            }
            step *= 0.5;
            if step < 1e-300 {
                return (theta, it, false);
            }
        }
    }
    let converged = obj.gradient(&theta).iter().all(|v| v.abs() < GRADIENT_TOLERANCE);
    (theta, max_iter, converged)
}

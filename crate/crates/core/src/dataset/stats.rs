use serde::{Deserialize, Serialize};

use super::Dataset;

/// Per-feature population statistics (divisor n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl FeatureStats {
    /// Statistics over the given rows. Panics on an empty iterator.
    pub fn from_rows<'a>(rows: impl IntoIterator<Item = &'a [f64]>, n_features: usize) -> Self {
        let mut columns: Vec<Vec<f64>> = vec![Vec::new(); n_features];
        for r in rows {
            for (c, &v) in columns.iter_mut().zip(r) {
                c.push(v);
            }
        }
        assert!(
            columns.first().is_some_and(|c| !c.is_empty()),
            "feature statistics need at least one instance"
        );

        let mut stats = FeatureStats {
            mean: Vec::with_capacity(n_features),
            std: Vec::with_capacity(n_features),
            min: Vec::with_capacity(n_features),
            max: Vec::with_capacity(n_features),
        };
        for mut col in columns {
            // Sorted summation makes the result independent of row order.
            col.sort_by(f64::total_cmp);
            let n = col.len() as f64;
            let lo = col[0];
            let hi = col[col.len() - 1];
            let (mean, std) = if lo == hi {
                (lo, 0.0)
            } else {
                let mean = (col.iter().sum::<f64>() / n).clamp(lo, hi);
                let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
                (mean, var.sqrt())
            };
            stats.mean.push(mean);
            stats.std.push(std);
            stats.min.push(lo);
            stats.max.push(hi);
        }
        stats
    }

    pub fn n_features(&self) -> usize {
        self.mean.len()
    }
}

/// Mean, population standard deviation, min and max of every feature.
pub fn feature_stats(ds: &Dataset) -> FeatureStats {
    FeatureStats::from_rows(ds.rows(), ds.n_features())
}

/// Maps each feature onto [0, 1] using a training range. Values outside the
/// training range land outside [0, 1]; constant features map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    min: Vec<f64>,
    range: Vec<f64>,
}

impl MinMaxScaler {
    pub fn from_stats(stats: &FeatureStats) -> Self {
        MinMaxScaler {
            min: stats.min.clone(),
            range: stats
                .min
                .iter()
                .zip(&stats.max)
                .map(|(lo, hi)| hi - lo)
                .collect(),
        }
    }

    pub fn fit(ds: &Dataset) -> Self {
        Self::from_stats(&feature_stats(ds))
    }

    /// Scaler that leaves values untouched.
    pub fn identity(n_features: usize) -> Self {
        MinMaxScaler {
            min: vec![0.0; n_features],
            range: vec![1.0; n_features],
        }
    }

    pub fn n_features(&self) -> usize {
        self.min.len()
    }

    pub fn scale_value(&self, feature: usize, v: f64) -> f64 {
        let r = self.range[feature];
        if r > 0.0 {
            (v - self.min[feature]) / r
        } else {
            0.0
        }
    }

    pub fn scale_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(f, &v)| self.scale_value(f, v))
            .collect()
    }

    /// Row-major scaled copy of every row of `ds`.
    pub fn scale_all(&self, ds: &Dataset) -> Vec<Vec<f64>> {
        ds.rows().map(|r| self.scale_row(r)).collect()
    }
}

/// `(v - min) / (max - min)` per feature with the given (training) statistics.
pub fn min_max_scale(ds: &Dataset, stats: &FeatureStats) -> Dataset {
    let scaler = MinMaxScaler::from_stats(stats);
    ds.map_values(|f, v| scaler.scale_value(f, v))
}

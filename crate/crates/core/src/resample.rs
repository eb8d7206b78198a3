//! Types shared by every oversampler and the [`resample`] dispatcher.

use serde::{Deserialize, Serialize};

use crate::cf_engine::{self, CfaDiagnostics, CfaParams};
use crate::classifiers::{self, ClassifierSpec};
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::smote_family::{self, AdasynDiagnostics, BorderlineDiagnostics, SafeLevelDiagnostics};

/// How many minority instances the output should hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// As many minority as majority instances.
    #[default]
    Parity,
    /// An explicit minority count.
    Count(usize),
}

impl Target {
    /// Minority count the resampler should reach on `ds`.
    pub fn resolve(self, ds: &Dataset) -> Result<usize> {
        let current = ds.count(Label::Positive);
        let target = match self {
            Target::Parity => ds.count(Label::Negative),
            Target::Count(n) => n,
        };
        if target < current {
            return Err(Error::TargetBelowMinority { target, current });
        }
        Ok(target)
    }
}

/// Oversampling method and its method-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    Cfa {
        #[serde(default = "default_tolerance")]
        tolerance: f64,
        #[serde(default = "default_max_diffs")]
        max_diffs: usize,
        /// Drop candidates a k-NN fitted on the input predicts as majority.
        #[serde(default)]
        verify: bool,
    },
    Smote,
    Bsmote,
    Adasyn,
    Slsmote,
}

fn default_tolerance() -> f64 {
    0.1
}

fn default_max_diffs() -> usize {
    2
}

impl Method {
    /// CFA with tolerance factor 0.1 and at most two difference features.
    pub fn cfa() -> Self {
        Method::Cfa {
            tolerance: default_tolerance(),
            max_diffs: default_max_diffs(),
            verify: false,
        }
    }

    /// Short lowercase tag used in provenance strings and file names.
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Cfa { .. } => "cfa",
            Method::Smote => "smote",
            Method::Bsmote => "bsmote",
            Method::Adasyn => "adasyn",
            Method::Slsmote => "slsmote",
        }
    }

    /// Display name used as a report column.
    pub fn display_name(&self) -> &'static str {
        match self {
            Method::Cfa { .. } => "CFA",
            Method::Smote => "SMOTE",
            Method::Bsmote => "B-SMOTE",
            Method::Adasyn => "ADASYN",
            Method::Slsmote => "SL-SMOTE",
        }
    }

    /// Position in the report column order (after the baseline).
    pub fn column_rank(&self) -> usize {
        match self {
            Method::Smote => 1,
            Method::Bsmote => 2,
            Method::Adasyn => 3,
            Method::Slsmote => 4,
            Method::Cfa { .. } => 5,
        }
    }
}

/// Full configuration of one oversampling run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResamplePlan {
    #[serde(flatten)]
    pub method: Method,
    #[serde(default = "default_k")]
    pub k_neighbors: usize,
    /// Neighbourhood size for Borderline-SMOTE danger detection; defaults to `k_neighbors`.
    #[serde(default)]
    pub m_neighbors: Option<usize>,
    #[serde(default)]
    pub target: Target,
    #[serde(default)]
    pub seed: u64,
}

fn default_k() -> usize {
    5
}

impl ResamplePlan {
    pub fn new(method: Method) -> Self {
        ResamplePlan {
            method,
            k_neighbors: default_k(),
            m_neighbors: None,
            target: Target::Parity,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k_neighbors = k;
        self
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    pub fn m_neighbors(&self) -> usize {
        self.m_neighbors.unwrap_or(self.k_neighbors)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 {
            return Err(Error::InvalidParameter("k_neighbors must be >= 1".into()));
        }
        if self.m_neighbors == Some(0) {
            return Err(Error::InvalidParameter("m_neighbors must be >= 1".into()));
        }
        if let Method::Cfa {
            tolerance,
            max_diffs,
            ..
        } = self.method
        {
            CfaParams {
                tolerance,
                max_diffs,
            }
            .validate()?;
        }
        Ok(())
    }
}

/// Where a synthetic row came from. Row numbers index the resampler's input dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    /// Match features copied from `x_prime`, difference features from `p`.
    Cfa {
        x_prime: usize,
        x: usize,
        p: usize,
    },
    /// `base + (neighbor - base) * delta`.
    Interpolated {
        method: String,
        base: usize,
        neighbor: usize,
        delta: f64,
    },
}

impl Provenance {
    /// Row numbers of the real instances this row was built from.
    pub fn source_rows(&self) -> Vec<usize> {
        match *self {
            Provenance::Cfa { x_prime, x, p } => vec![x_prime, x, p],
            Provenance::Interpolated { base, neighbor, .. } => vec![base, neighbor],
        }
    }
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Cfa { x_prime, x, p } => write!(f, "cfa:x'={x_prime};x={x};p={p}"),
            Provenance::Interpolated {
                method,
                base,
                neighbor,
                delta,
            } => write!(f, "{method}:p={base};n={neighbor};d={delta:.6}"),
        }
    }
}

/// One generated minority instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticRow {
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

/// Method-specific diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum MethodDetails {
    None,
    Cfa(CfaDiagnostics),
    Smote,
    Bsmote(BorderlineDiagnostics),
    Adasyn(AdasynDiagnostics),
    Slsmote(SafeLevelDiagnostics),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub method: String,
    pub n_majority: usize,
    pub minority_before: usize,
    pub minority_after: usize,
    pub target: usize,
    pub generated: usize,
    /// Instances still missing to reach the target; only CFA can fall short.
    pub shortfall: usize,
    pub warnings: Vec<String>,
    pub details: MethodDetails,
}

/// Augmented dataset: the input rows unchanged and first, then every synthetic row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResampleResult {
    pub dataset: Dataset,
    pub n_original: usize,
    pub synthetic: Vec<SyntheticRow>,
    pub diagnostics: Diagnostics,
}

impl ResampleResult {
    pub(crate) fn assemble(
        input: &Dataset,
        method: &str,
        target: usize,
        synthetic: Vec<SyntheticRow>,
        mut warnings: Vec<String>,
        details: MethodDetails,
    ) -> Result<Self> {
        let dataset =
            input.with_appended(synthetic.iter().map(|s| (s.values.as_slice(), Label::Positive)))?;
        let before = input.count(Label::Positive);
        let after = before + synthetic.len();
        let shortfall = target.saturating_sub(after);
        if shortfall > 0 {
            warnings.push(format!(
                "target of {target} minority instances not reached: {shortfall} short"
            ));
        }
        Ok(ResampleResult {
            n_original: input.n_instances(),
            diagnostics: Diagnostics {
                method: method.to_string(),
                n_majority: input.count(Label::Negative),
                minority_before: before,
                minority_after: after,
                target,
                generated: synthetic.len(),
                shortfall,
                warnings,
                details,
            },
            dataset,
            synthetic,
        })
    }

    /// Per-row provenance strings for the CSV writer (`None` for original rows).
    pub fn provenance_column(&self) -> Vec<Option<String>> {
        std::iter::repeat_n(None, self.n_original)
            .chain(self.synthetic.iter().map(|s| Some(s.provenance.to_string())))
            .collect()
    }
}

/// Anything that can label a feature vector; used to verify CFA candidates.
pub trait LabelPredictor: Sync {
    fn predict_label(&self, x: &[f64]) -> Result<Label>;
}

/// Run the oversampler named by `plan` on `ds`.
pub fn resample(ds: &Dataset, plan: &ResamplePlan) -> Result<ResampleResult> {
    plan.validate()?;
    match plan.method {
        Method::Cfa {
            tolerance,
            max_diffs,
            verify,
        } => {
            let params = CfaParams {
                tolerance,
                max_diffs,
            };
            if verify {
                let verifier = classifiers::train(&ClassifierSpec::Knn { n_neighbors: 5 }, ds, plan.seed)?;
                cf_engine::cfa_oversample(ds, &params, plan.target, plan.seed, Some(&verifier))
            } else {
                cf_engine::cfa_oversample(ds, &params, plan.target, plan.seed, None)
            }
        }
        Method::Smote => smote_family::smote(ds, plan),
        Method::Bsmote => smote_family::borderline_smote(ds, plan),
        Method::Adasyn => smote_family::adasyn(ds, plan),
        Method::Slsmote => smote_family::safe_level_smote(ds, plan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn provenance_strings() {
        let p = Provenance::Cfa {
            x_prime: 4,
            x: 0,
            p: 7,
        };
        assert_eq!(p.to_string(), "cfa:x'=4;x=0;p=7");
        let p = Provenance::Interpolated {
            method: "smote".into(),
            base: 3,
            neighbor: 9,
            delta: 0.25,
        };
        assert_eq!(p.to_string(), "smote:p=3;n=9;d=0.250000");
    }

    #[test]
    fn plan_json_round_trip_with_defaults() {
        let plan: ResamplePlan = serde_json::from_str(r#"{"method":"cfa"}"#).unwrap();
        assert_eq!(plan.method, Method::cfa());
        assert_eq!(plan.k_neighbors, 5);
        assert_eq!(plan.target, Target::Parity);
        let plan: ResamplePlan =
            serde_json::from_str(r#"{"method":"bsmote","k_neighbors":7,"m_neighbors":3,"target":{"count":40}}"#)
                .unwrap();
        assert_eq!(plan.m_neighbors(), 3);
        assert_eq!(plan.target, Target::Count(40));
        let back: ResamplePlan = serde_json::from_str(&serde_json::to_string(&plan).unwrap()).unwrap();
        assert_eq!(back, plan);
    }

    #[test]
    fn target_below_minority_is_rejected() {
        let ds = Dataset::from_rows(
            vec![vec![0.0], vec![1.0], vec![2.0]],
            vec![Label::Positive, Label::Positive, Label::Negative],
        )
        .unwrap();
        assert!(matches!(
            Target::Count(1).resolve(&ds),
            Err(Error::TargetBelowMinority { .. })
        ));
        assert!(Target::Parity.resolve(&ds).is_err());
    }
}

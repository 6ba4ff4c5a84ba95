//! Non-learned fusion arithmetic: λ-map blending, residual correction,
//! positional encoding, lead-time conditioning and the λ-map regularizers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::temporal::{LeadTime, MAX_LEAD_DAYS, MIN_LEAD_DAYS};

/// Multi-resolution fusion weights, finest level first. Only the finest level
/// takes part in any computation.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaMap {
    levels: Vec<ScalarField>,
}

impl LambdaMap {
    pub fn new(levels: Vec<ScalarField>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidLambda("level 1 is required".into()));
        }
        for (i, level) in levels.iter().enumerate() {
            if let Some(v) = level.values().iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::InvalidLambda(format!(
                    "level {} has value {v} outside [0, 1]",
                    i + 1
                )));
            }
        }
        Ok(Self { levels })
    }

    pub fn single(level1: ScalarField) -> Result<Self> {
        Self::new(vec![level1])
    }

    pub fn finest(&self) -> &ScalarField {
        &self.levels[0]
    }

    pub fn levels(&self) -> &[ScalarField] {
        &self.levels
    }
}

/// `λ·inter + (1 − λ)·intra` per pixel.
///
/// The result is confined to `[min(inter, intra), max(inter, intra)]` so the
/// convex-combination bound survives rounding.
pub fn fuse(inter: &ScalarField, intra: &ScalarField, lam: &LambdaMap) -> Result<ScalarField> {
    let weights = lam.finest();
    inter.require_same_shape(intra)?;
    inter.require_same_shape(weights)?;
    let values = inter
        .values()
        .iter()
        .zip(intra.values())
        .zip(weights.values())
        .map(|((&a, &b), &l)| (l * a + (1.0 - l) * b).clamp(a.min(b), a.max(b)))
        .collect();
    ScalarField::new(inter.height(), inter.width(), values)
}

/// `fused + delta`, unclamped.
pub fn apply_residual(fused: &ScalarField, delta: &ScalarField) -> Result<ScalarField> {
    fused.zip_map(delta, |a, b| a + b)
}

/// Reporting-time clamp to the normalized range.
pub fn clamp_unit(field: &ScalarField) -> ScalarField {
    field.map(|v| v.clamp(0.0, 1.0))
}

/// Anisotropic total variation: mean absolute forward difference, pooled over
/// both axes.
pub fn tv(lam: &ScalarField) -> Result<f64> {
    lam.require_dims(2, 2)?;
    let (h, w) = lam.dims();
    let mut total = 0.0;
    for r in 0..h {
        for c in 0..w {
            if c + 1 < w {
                total += (lam.get(r, c + 1) - lam.get(r, c)).abs();
            }
            if r + 1 < h {
                total += (lam.get(r + 1, c) - lam.get(r, c)).abs();
            }
        }
    }
    let positions = h * (w - 1) + (h - 1) * w;
    Ok(total / positions as f64)
}

fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    term(p) + term(1.0 - p)
}

/// Mean binary entropy (natural log) of the weights, `0·ln 0 = 0`.
pub fn entropy_term(lam: &ScalarField) -> f64 {
    lam.values().iter().map(|&p| binary_entropy(p)).sum::<f64>() / lam.len() as f64
}

/// `(mean(λ) − λ_target)²`.
pub fn mean_balance(lam: &ScalarField, lambda_target: f64) -> f64 {
    (lam.mean() - lambda_target).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegWeights {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
    #[serde(default = "default_lambda_target")]
    pub lambda_target: f64,
}

fn default_lambda_target() -> f64 {
    0.5
}

impl RegWeights {
    pub fn new(eta1: f64, eta2: f64, eta3: f64, lambda_target: f64) -> Result<Self> {
        let w = Self {
            eta1,
            eta2,
            eta3,
            lambda_target,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.eta1, self.eta2, self.eta3]
            .iter()
            .any(|e| !e.is_finite() || *e < 0.0)
        {
            return Err(Error::InvalidWeights("η weights must be finite and nonnegative".into()));
        }
        if !(0.0..=1.0).contains(&self.lambda_target) {
            return Err(Error::InvalidWeights("λ_target must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

impl Default for RegWeights {
    fn default() -> Self {
        Self {
            eta1: 1.0,
            eta2: 1.0,
            eta3: 1.0,
            lambda_target: default_lambda_target(),
        }
    }
}

/// Regularizer components and their weighted total.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegReport {
    pub tv: f64,
    pub entropy: f64,
    pub mean_balance: f64,
    pub l_reg: f64,
}

/// `η1·TV − η2·H̄ + η3·(mean − λ_target)²`.
///
/// Entropy enters with a negative sign so that minimizing the objective
/// pushes weights away from saturation at 0 or 1.
pub fn regularizer(lam: &LambdaMap, w: &RegWeights) -> Result<RegReport> {
    w.validate()?;
    let finest = lam.finest();
    let tv = tv(finest)?;
    let entropy = entropy_term(finest);
    let mean_balance = mean_balance(finest, w.lambda_target);
    Ok(RegReport {
        tv,
        entropy,
        mean_balance,
        l_reg: w.eta1 * tv - w.eta2 * entropy + w.eta3 * mean_balance,
    })
}

pub fn l_reg(lam: &LambdaMap, w: &RegWeights) -> Result<f64> {
    regularizer(lam, w).map(|r| r.l_reg)
}

/// Normalized latitude (row) and longitude (column) coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionalEncoding {
    pub lat: ScalarField,
    pub lon: ScalarField,
}

pub fn positional_encoding(height: usize, width: usize) -> Result<PositionalEncoding> {
    if height < 2 || width < 2 {
        return Err(Error::GridTooSmall {
            rows: height,
            cols: width,
            min_rows: 2,
            min_cols: 2,
        });
    }
    Ok(PositionalEncoding {
        lat: ScalarField::from_fn(height, width, |r, _| r as f64 / (height - 1) as f64),
        lon: ScalarField::from_fn(height, width, |_, c| c as f64 / (width - 1) as f64),
    })
}

/// Constant conditioning map `ℓ(τ) = (τ − 30) / 60`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadMap {
    pub value: f64,
    pub field: ScalarField,
}

pub fn lead_map(tau: LeadTime, height: usize, width: usize) -> LeadMap {
    let value = f64::from(tau.days() - MIN_LEAD_DAYS) / f64::from(MAX_LEAD_DAYS - MIN_LEAD_DAYS);
    LeadMap {
        value,
        field: ScalarField::filled(height, width, value),
    }
}

//! Training-loss kernels evaluated as pure functions, and the warm-up /
//! intermittency gate of the composite objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::persistence::{bottleneck_distance, sublevel_persistence};

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = 0.01 * 0.01;
const SSIM_C2: f64 = 0.03 * 0.03;

/// Mean absolute error.
pub fn mae(a: &ScalarField, b: &ScalarField) -> Result<f64> {
    a.require_same_shape(b)?;
    let sum: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).sum();
    Ok(sum / a.len() as f64)
}

fn gaussian_window() -> [[f64; SSIM_WINDOW]; SSIM_WINDOW] {
    let radius = (SSIM_WINDOW / 2) as f64;
    let mut g1 = [0.0; SSIM_WINDOW];
    for (i, g) in g1.iter_mut().enumerate() {
        let x = i as f64 - radius;
        *g = (-x * x / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let total: f64 = g1.iter().sum();
    g1.iter_mut().for_each(|g| *g /= total);
    let mut w = [[0.0; SSIM_WINDOW]; SSIM_WINDOW];
    for (i, row) in w.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = g1[i] * g1[j];
        }
    }
    w
}

/// Mirror index into `0..n` without repeating the edge sample.
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let mut i = i;
    if i < 0 {
        i = -i;
    }
    if i >= n {
        i = 2 * (n - 1) - i;
    }
    i as usize
}

/// Per-pixel SSIM map with an 11x11 Gaussian window (σ = 1.5, dynamic range 1).
///
/// The window is mirrored at the borders so every pixel gets a full window.
pub fn ssim_map(a: &ScalarField, b: &ScalarField) -> Result<ScalarField> {
    a.require_same_shape(b)?;
    a.require_dims(SSIM_WINDOW, SSIM_WINDOW)?;
    let (h, w) = a.dims();
    let window = gaussian_window();
    let radius = (SSIM_WINDOW / 2) as isize;
    let (xa, xb) = (a.values(), b.values());
    let mut out = Vec::with_capacity(h * w);
    let mut idx = [0usize; SSIM_WINDOW * SSIM_WINDOW];
    for r in 0..h {
        for c in 0..w {
            for (di, row) in (-radius..=radius).enumerate() {
                let rr = reflect(r as isize + row, h);
                for (dj, col) in (-radius..=radius).enumerate() {
                    idx[di * SSIM_WINDOW + dj] = rr * w + reflect(c as isize + col, w);
                }
            }
            let weights = window.iter().flatten();
            let (mut mu_a, mut mu_b) = (0.0, 0.0);
            for (&k, &g) in idx.iter().zip(weights.clone()) {
                mu_a += g * xa[k];
                mu_b += g * xb[k];
            }
            let (mut var_a, mut var_b, mut cov) = (0.0, 0.0, 0.0);
            for (&k, &g) in idx.iter().zip(weights) {
                let (da, db) = (xa[k] - mu_a, xb[k] - mu_b);
                var_a += g * da * da;
                var_b += g * db * db;
                cov += g * da * db;
            }
            let num = (2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2);
            let den = (mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2);
            out.push(num / den);
        }
    }
    ScalarField::new(h, w, out)
}

/// Mean SSIM.
pub fn ssim(a: &ScalarField, b: &ScalarField) -> Result<f64> {
    ssim_map(a, b).map(|m| m.mean())
}

/// `MAE + (1 − SSIM)`.
pub fn content_loss(pred: &ScalarField, truth: &ScalarField) -> Result<f64> {
    Ok(mae(pred, truth)? + (1.0 - ssim(pred, truth)?))
}

fn mean(scores: &[f64]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// Hinge discriminator loss `E[max(0, 1 − D(real))] + E[max(0, 1 + D(fake))]`.
pub fn hinge_d(real_scores: &[f64], fake_scores: &[f64]) -> Result<f64> {
    let real: Vec<f64> = real_scores.iter().map(|s| (1.0 - s).max(0.0)).collect();
    let fake: Vec<f64> = fake_scores.iter().map(|s| (1.0 + s).max(0.0)).collect();
    Ok(mean(&real)? + mean(&fake)?)
}

/// Generator adversarial loss `−E[D(fake)]`.
pub fn hinge_g(fake_scores: &[f64]) -> Result<f64> {
    Ok(-mean(fake_scores)?)
}

/// Bottleneck distance between the H1 sublevel diagrams of `truth` and `pred`.
pub fn topo_loss(truth: &ScalarField, pred: &ScalarField) -> Result<f64> {
    truth.require_same_shape(pred)?;
    let a = sublevel_persistence(truth, 1)?;
    let b = sublevel_persistence(pred, 1)?;
    if a.is_empty() && b.is_empty() {
        return Ok(0.0);
    }
    bottleneck_distance(&a, &b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl LossWeights {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let w = Self {
            alpha,
            beta,
            gamma,
            delta,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.alpha, self.beta, self.gamma, self.delta]
            .iter()
            .any(|v| !v.is_finite() || *v < 0.0)
        {
            return Err(Error::InvalidWeights(
                "loss weights must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            delta: 1.0,
        }
    }
}

/// When the topological term participates: from `warmup_steps` on, every `every_n` steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSchedule {
    pub warmup_steps: u64,
    #[serde(default = "default_every_n")]
    pub every_n: u64,
}

fn default_every_n() -> u64 {
    5
}

impl GateSchedule {
    pub fn new(warmup_steps: u64, every_n: u64) -> Result<Self> {
        if every_n == 0 {
            return Err(Error::InvalidWeights("every_n must be at least 1".into()));
        }
        Ok(Self { warmup_steps, every_n })
    }

    pub fn is_open(&self, step: u64) -> bool {
        step >= self.warmup_steps && step.is_multiple_of(self.every_n.max(1))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossComponents {
    pub content: f64,
    pub adv: f64,
    pub reg: f64,
    pub topo: f64,
}

/// Composite objective with the gate state it was evaluated under.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LossReport {
    pub content: f64,
    pub adv: f64,
    pub reg: f64,
    pub topo: f64,
    pub topo_active: bool,
    pub step: u64,
    pub total: f64,
}

pub fn composite_report(parts: LossComponents, w: &LossWeights, step: u64, gate: &GateSchedule) -> LossReport {
    let topo_active = gate.is_open(step);
    // Skipped steps contribute nothing rather than a cached value.
    let topo = if topo_active { parts.topo } else { 0.0 };
    LossReport {
        content: parts.content,
        adv: parts.adv,
        reg: parts.reg,
        topo: parts.topo,
        topo_active,
        step,
        total: w.alpha * parts.content + w.beta * parts.adv + w.gamma * parts.reg + w.delta * topo,
    }
}

/// `α·content + β·adv + γ·reg + δ·topo`, with `topo` gated by `gate`.
pub fn composite_loss(parts: LossComponents, w: &LossWeights, step: u64, gate: &GateSchedule) -> f64 {
    composite_report(parts, w, step, gate).total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wavy(h: usize, w: usize, phase: f64) -> ScalarField {
        ScalarField::from_fn(h, w, |r, c| {
            0.5 + 0.4 * ((r as f64 * 0.7 + phase).sin() * (c as f64 * 0.45).cos())
        })
    }

    #[test]
    fn mae_examples() {
        let a = wavy(4, 5, 0.0);
        assert_eq!(mae(&a, &a).unwrap(), 0.0);
        let b = a.map(|v| v + 0.1);
        assert!((mae(&a, &b).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(mae(&a, &b).unwrap(), mae(&b, &a).unwrap());
        assert!(mae(&a, &wavy(4, 6, 0.0)).is_err());
    }

    #[test]
    fn window_is_normalized_and_symmetric() {
        let w = gaussian_window();
        let total: f64 = w.iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert_eq!(w[0][3], w[10][3]);
        assert_eq!(w[2][7], w[7][2]);
    }

    #[test]
    fn reflect_indices() {
        assert_eq!(reflect(-1, 11), 1);
        assert_eq!(reflect(-5, 11), 5);
        assert_eq!(reflect(11, 11), 9);
        assert_eq!(reflect(15, 11), 5);
        assert_eq!(reflect(4, 11), 4);
    }

    #[test]
    fn ssim_identity_and_constants() {
        let a = wavy(12, 15, 0.3);
        assert!((ssim(&a, &a).unwrap() - 1.0).abs() < 1e-9);
        let x = ScalarField::filled(11, 11, 0.2);
        let y = ScalarField::filled(11, 11, 0.4);
        let closed = (2.0 * 0.2 * 0.4 + 1e-4) / (0.2f64.powi(2) + 0.4f64.powi(2) + 1e-4);
        assert!((ssim(&x, &y).unwrap() - closed).abs() < 1e-9);
        assert!((closed - 0.800100).abs() < 1e-6);
        assert!((content_loss(&x, &y).unwrap() - (0.2 + 1.0 - closed)).abs() < 1e-9);
    }

    #[test]
    fn ssim_needs_full_window() {
        let a = ScalarField::filled(10, 20, 0.5);
        assert!(matches!(ssim(&a, &a), Err(Error::GridTooSmall { .. })));
    }

    #[test]
    fn hinge_examples() {
        assert_eq!(hinge_d(&[1.0; 4], &[-1.0; 4]).unwrap(), 0.0);
        assert_eq!(hinge_d(&[0.0; 3], &[0.0; 5]).unwrap(), 2.0);
        assert_eq!(hinge_d(&[2.0], &[-3.0]).unwrap(), 0.0);
        assert!(matches!(hinge_d(&[], &[0.0]), Err(Error::EmptyScores)));
        assert_eq!(hinge_g(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(hinge_g(&[1.0; 3]).unwrap(), -1.0);
        assert!(hinge_g(&[]).is_err());
    }

    #[test]
    fn topo_loss_examples() {
        let mut v = vec![0.2; 25];
        v[12] = 0.9;
        let crater = ScalarField::new(5, 5, v).unwrap();
        assert_eq!(topo_loss(&crater, &crater).unwrap(), 0.0);
        let shifted = crater.map(|x| x + 0.1);
        assert!((topo_loss(&crater, &shifted).unwrap() - 0.1).abs() < 1e-12);
        let ramp_a = ScalarField::from_fn(6, 6, |r, c| (r + c) as f64);
        let ramp_b = ScalarField::from_fn(6, 6, |r, c| (2 * r + c) as f64);
        assert_eq!(topo_loss(&ramp_a, &ramp_b).unwrap(), 0.0);
    }

    #[test]
    fn gate_pattern() {
        let w = LossWeights::default();
        let g = GateSchedule::new(10, 5).unwrap();
        let parts = LossComponents {
            content: 1.0,
            adv: 1.0,
            reg: 1.0,
            topo: 1.0,
        };
        assert_eq!(composite_loss(parts, &w, 3, &g), 3.0);
        assert_eq!(composite_loss(parts, &w, 15, &g), 4.0);
        assert_eq!(composite_loss(parts, &w, 16, &g), 3.0);
        assert_eq!(composite_loss(parts, &w, 10, &g), 4.0);
        assert!(GateSchedule::new(0, 0).is_err());
        let report = composite_report(parts, &w, 16, &g);
        assert!(!report.topo_active);
        assert_eq!(report.topo, 1.0);
    }

    proptest! {
        #[test]
        fn ssim_symmetric_and_bounded(p in 0.0f64..6.0, q in 0.0f64..6.0) {
            let a = wavy(11, 13, p);
            let b = wavy(11, 13, q);
            let ab = ssim(&a, &b).unwrap();
            prop_assert!((ab - ssim(&b, &a).unwrap()).abs() <= 1e-12);
            prop_assert!(ab <= 1.0 + 1e-12);
            prop_assert!(content_loss(&a, &b).unwrap() >= -1e-12);
        }

        #[test]
        fn hinge_d_nonnegative(real in prop::collection::vec(-3.0f64..3.0, 1..10), fake in prop::collection::vec(-3.0f64..3.0, 1..10)) {
            let l = hinge_d(&real, &fake).unwrap();
            prop_assert!(l >= 0.0);
            let saturated = real.iter().all(|&r| r >= 1.0) && fake.iter().all(|&f| f <= -1.0);
            prop_assert_eq!(l == 0.0, saturated);
        }

        #[test]
        fn hinge_g_linear(scores in prop::collection::vec(-3.0f64..3.0, 1..10), c in -4.0f64..4.0) {
            let scaled: Vec<f64> = scores.iter().map(|s| s * c).collect();
            prop_assert!((hinge_g(&scaled).unwrap() - c * hinge_g(&scores).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn composite_linear_in_components(x in 0.0f64..5.0, y in 0.0f64..5.0, step in 0u64..40) {
            let w = LossWeights::new(0.5, 0.25, 2.0, 3.0).unwrap();
            let g = GateSchedule::new(10, 5).unwrap();
            let base = LossComponents { content: x, adv: 1.0, reg: 1.0, topo: y };
            let bumped = LossComponents { content: x + 1.0, ..base };
            let d = composite_loss(bumped, &w, step, &g) - composite_loss(base, &w, step, &g);
            prop_assert!((d - 0.5).abs() < 1e-12);
        }
    }
}

//! Forecast verification metrics and the seasonal, error-bin and lead-time
//! stratifications built on them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{denormalize, percentile_sorted, NormStats, ScalarField};
use crate::losses;

pub fn rmse(pred: &ScalarField, truth: &ScalarField) -> Result<f64> {
    Ok(mse(pred, truth)?.sqrt())
}

fn mse(pred: &ScalarField, truth: &ScalarField) -> Result<f64> {
    pred.require_same_shape(truth)?;
    let sum: f64 = pred
        .values()
        .iter()
        .zip(truth.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / pred.len() as f64)
}

/// Peak signal-to-noise ratio in dB for fields on the unit range.
///
/// Identical fields yield [`Error::IdenticalFields`] instead of `+∞`.
pub fn psnr(pred: &ScalarField, truth: &ScalarField) -> Result<f64> {
    let mse = mse(pred, truth)?;
    if mse == 0.0 {
        return Err(Error::IdenticalFields);
    }
    Ok(10.0 * (1.0 / mse).log10())
}

/// Anomaly correlation: Pearson correlation of `pred − clim` and `truth − clim`
/// pooled over all grid cells.
pub fn acc(pred: &ScalarField, truth: &ScalarField, clim: &ScalarField) -> Result<f64> {
    pred.require_same_shape(truth)?;
    pred.require_same_shape(clim)?;
    let fa = pred.zip_map(clim, |p, c| p - c)?;
    let oa = truth.zip_map(clim, |t, c| t - c)?;
    let (mf, mo) = (fa.mean(), oa.mean());
    let (mut sff, mut soo, mut sfo) = (0.0, 0.0, 0.0);
    for (f, o) in fa.values().iter().zip(oa.values()) {
        let (df, dob) = (f - mf, o - mo);
        sff += df * df;
        soo += dob * dob;
        sfo += df * dob;
    }
    if sff == 0.0 || soo == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sfo / (sff.sqrt() * soo.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation of two equally long samples.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::DegenerateSample);
    }
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
        sab += (x - ma) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(sab / (saa.sqrt() * sbb.sqrt()))
}

pub const KDE_GRID_POINTS: usize = 2048;
// Kernel contributions beyond this many bandwidths are below f64 resolution.
const KERNEL_CUTOFF: f64 = 9.0;

/// Gaussian kernel density estimate with Silverman's rule-of-thumb bandwidth.
#[derive(Clone, Debug)]
pub struct Kde {
    sorted: Vec<f64>,
    bandwidth: f64,
}

impl Kde {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.len() < 2 || samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateSample);
        }
        let mut sorted = samples.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let sd = (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        if sd == 0.0 {
            return Err(Error::DegenerateSample);
        }
        let iqr = percentile_sorted(&sorted, 0.75) - percentile_sorted(&sorted, 0.25);
        let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
        let bandwidth = 0.9 * spread * n.powf(-0.2);
        Ok(Self { sorted, bandwidth })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn density(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let lo = self.sorted.partition_point(|&v| v < x - KERNEL_CUTOFF * h);
        let hi = self.sorted.partition_point(|&v| v <= x + KERNEL_CUTOFF * h);
        let sum: f64 = self.sorted[lo..hi]
            .iter()
            .map(|&v| {
                let z = (x - v) / h;
                (-0.5 * z * z).exp()
            })
            .sum();
        sum / (self.sorted.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt())
    }
}

/// Shared quadrature grid `[min − 3h, max + 3h]` for two estimates.
fn quadrature_grid(p: &Kde, q: &Kde) -> Vec<f64> {
    let h = p.bandwidth.max(q.bandwidth);
    let lo = p.min().min(q.min()) - 3.0 * h;
    let hi = p.max().max(q.max()) + 3.0 * h;
    let step = (hi - lo) / (KDE_GRID_POINTS - 1) as f64;
    (0..KDE_GRID_POINTS).map(|i| lo + step * i as f64).collect()
}

/// Trapezoidal integral of the piecewise-linear interpolant of `(xs, ys)`
/// restricted to `[a, b]`.
fn trapezoid_clipped(xs: &[f64], ys: &[f64], a: f64, b: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..xs.len() - 1 {
        let (x0, x1) = (xs[i], xs[i + 1]);
        let (l, r) = (x0.max(a), x1.min(b));
        if r <= l {
            continue;
        }
        let at = |x: f64| ys[i] + (ys[i + 1] - ys[i]) * (x - x0) / (x1 - x0);
        total += 0.5 * (at(l) + at(r)) * (r - l);
    }
    total
}

/// `∫ min(p, q)` for the KDEs of the two samples.
pub fn kde_overlap(pred_samples: &[f64], truth_samples: &[f64]) -> Result<f64> {
    let p = Kde::new(pred_samples)?;
    let q = Kde::new(truth_samples)?;
    let xs = quadrature_grid(&p, &q);
    let ys: Vec<f64> = xs.iter().map(|&x| p.density(x).min(q.density(x))).collect();
    Ok(trapezoid_clipped(&xs, &ys, f64::NEG_INFINITY, f64::INFINITY))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailSide {
    BelowP5,
    AboveP95,
}

/// Tail overlap `∫_tail min(p, q) / ∫_tail q`, with the tail delimited by the
/// truth sample's 5th or 95th percentile and `q` the truth density.
pub fn tail_overlap(pred_samples: &[f64], truth_samples: &[f64], side: TailSide) -> Result<f64> {
    let p = Kde::new(pred_samples)?;
    let q = Kde::new(truth_samples)?;
    let (a, b) = match side {
        TailSide::BelowP5 => (f64::NEG_INFINITY, percentile_sorted(q.samples(), 0.05)),
        TailSide::AboveP95 => (percentile_sorted(q.samples(), 0.95), f64::INFINITY),
    };
    let xs = quadrature_grid(&p, &q);
    let qs: Vec<f64> = xs.iter().map(|&x| q.density(x)).collect();
    let mins: Vec<f64> = xs.iter().zip(&qs).map(|(&x, &qv)| p.density(x).min(qv)).collect();
    let mass = trapezoid_clipped(&xs, &qs, a, b);
    if mass <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    Ok(trapezoid_clipped(&xs, &mins, a, b) / mass)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Season {
    DJF,
    MAM,
    JJA,
    SON,
}

impl Season {
    pub const ALL: [Season; 4] = [Season::DJF, Season::MAM, Season::JJA, Season::SON];
}

impl fmt::Display for Season {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Season::DJF => "DJF",
            Season::MAM => "MAM",
            Season::JJA => "JJA",
            Season::SON => "SON",
        };
        f.write_str(s)
    }
}

impl FromStr for Season {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "DJF" => Ok(Season::DJF),
            "MAM" => Ok(Season::MAM),
            "JJA" => Ok(Season::JJA),
            "SON" => Ok(Season::SON),
            _ => Err(Error::InvalidSpec(format!("unknown season {s:?}"))),
        }
    }
}

pub fn season_of(date: NaiveDate) -> Season {
    match date.month() {
        12 | 1 | 2 => Season::DJF,
        3..=5 => Season::MAM,
        6..=8 => Season::JJA,
        _ => Season::SON,
    }
}

/// Metric bundle for one (target date, lead time).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub target_date: NaiveDate,
    pub tau: Option<u32>,
    /// Kelvin.
    pub rmse: f64,
    /// dB on normalized fields; `None` when prediction and truth coincide.
    pub psnr: Option<f64>,
    pub ssim: f64,
    /// `None` when an anomaly field has zero variance.
    pub acc: Option<f64>,
    pub season: Season,
}

/// Scores one forecast. `pred` and `truth` are normalized; `clim` is in kelvin.
/// RMSE and ACC are computed in kelvin, PSNR and SSIM on the unit range.
pub fn evaluate(
    pred: &ScalarField,
    truth: &ScalarField,
    clim: &ScalarField,
    stats: &NormStats,
    target_date: NaiveDate,
    tau: Option<u32>,
) -> Result<EvalRecord> {
    let pred_k = denormalize(pred, stats)?;
    let truth_k = denormalize(truth, stats)?;
    let psnr = match psnr(pred, truth) {
        Ok(v) => Some(v),
        Err(Error::IdenticalFields) => None,
        Err(e) => return Err(e),
    };
    let acc = match acc(&pred_k, &truth_k, clim) {
        Ok(v) => Some(v),
        Err(Error::ZeroVariance) => None,
        Err(e) => return Err(e),
    };
    Ok(EvalRecord {
        target_date,
        tau,
        rmse: rmse(&pred_k, &truth_k)?,
        psnr,
        ssim: losses::ssim(pred, truth)?,
        acc,
        season: season_of(target_date),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeasonSummary {
    pub season: Season,
    pub n: usize,
    pub mean_rmse: f64,
    /// Population standard deviation.
    pub std_rmse: f64,
    pub mean_acc: Option<f64>,
    /// Pooled KDE overlap for the season, filled in by callers holding the samples.
    pub overlap: Option<f64>,
}

/// Per-season mean/std of RMSE and mean ACC. Seasons are never pooled.
pub fn seasonal_summary(records: &[EvalRecord], seasons: &[Season]) -> Result<Vec<SeasonSummary>> {
    seasons
        .iter()
        .map(|&season| {
            let group: Vec<&EvalRecord> = records.iter().filter(|r| r.season == season).collect();
            if group.is_empty() {
                return Err(Error::EmptySeason(season.to_string()));
            }
            let n = group.len() as f64;
            let mean_rmse = group.iter().map(|r| r.rmse).sum::<f64>() / n;
            let var = group.iter().map(|r| (r.rmse - mean_rmse).powi(2)).sum::<f64>() / n;
            let accs: Vec<f64> = group.iter().filter_map(|r| r.acc).collect();
            Ok(SeasonSummary {
                season,
                n: group.len(),
                mean_rmse,
                std_rmse: var.sqrt(),
                mean_acc: (!accs.is_empty()).then(|| accs.iter().sum::<f64>() / accs.len() as f64),
                overlap: None,
            })
        })
        .collect()
}

/// Seasons present in `records`, in DJF, MAM, JJA, SON order.
pub fn seasons_present(records: &[EvalRecord]) -> Vec<Season> {
    Season::ALL
        .into_iter()
        .filter(|s| records.iter().any(|r| r.season == *s))
        .collect()
}

/// RMSE bin edges in kelvin; bins are left-closed: `[0, e0), [e0, e1), …, [e_last, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    edges: Vec<f64>,
}

impl BinSpec {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.is_empty() || edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidBins);
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn n_bins(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn bin_of(&self, value: f64) -> usize {
        self.edges.partition_point(|&e| e <= value)
    }

    /// Column labels such as `3-`, `3-4`, `4-5`, `5+`.
    pub fn labels(&self) -> Vec<String> {
        let e = &self.edges;
        let mut out = vec![format!("{}-", e[0])];
        out.extend(e.windows(2).map(|w| format!("{}-{}", w[0], w[1])));
        out.push(format!("{}+", e[e.len() - 1]));
        out
    }
}

impl Default for BinSpec {
    fn default() -> Self {
        Self {
            edges: vec![3.0, 4.0, 5.0],
        }
    }
}

/// Median λ per RMSE bin and the spread between the hardest and easiest bins.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratRow {
    pub season: Option<Season>,
    pub medians: Vec<Option<f64>>,
    pub counts: Vec<usize>,
    /// Median of the last bin minus median of the first; `None` if either is empty.
    pub delta: Option<f64>,
}

impl StratRow {
    pub fn from_medians(season: Option<Season>, medians: Vec<Option<f64>>, counts: Vec<usize>) -> Self {
        let delta = match (medians.first(), medians.last()) {
            (Some(Some(first)), Some(Some(last))) if medians.len() > 1 => Some(last - first),
            _ => None,
        };
        Self {
            season,
            medians,
            counts,
            delta,
        }
    }

    /// Δ, or the first empty end bin.
    pub fn delta_checked(&self) -> Result<f64> {
        if self.medians[0].is_none() {
            return Err(Error::EmptyBin(0));
        }
        self.delta.ok_or(Error::EmptyBin(self.medians.len() - 1))
    }

    pub fn empty_bins(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n == 0)
            .map(|(i, _)| i)
            .collect()
    }
}

fn lower_median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable_by(f64::total_cmp);
    Some(values[(values.len() - 1) / 2])
}

/// Groups grid cells by their RMSE bin and reports the lower median of λ per bin.
pub fn lambda_bin_analysis(lambda_field: &ScalarField, rmse_field: &ScalarField, bins: &BinSpec) -> Result<StratRow> {
    lambda_field.require_same_shape(rmse_field)?;
    let mut groups: Vec<Vec<f64>> = vec![Vec::new(); bins.n_bins()];
    for (&lam, &err) in lambda_field.values().iter().zip(rmse_field.values()) {
        groups[bins.bin_of(err)].push(lam);
    }
    let counts = groups.iter().map(Vec::len).collect();
    let medians = groups.iter_mut().map(|g| lower_median(g)).collect();
    Ok(StratRow::from_medians(None, medians, counts))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub season: Season,
    pub tau: u32,
    pub n: usize,
    pub mean_rmse: f64,
}

/// Mean RMSE per (season, τ); records without a lead time are skipped.
pub fn lead_time_curves(records: &[EvalRecord]) -> Vec<CurvePoint> {
    let mut groups: BTreeMap<(Season, u32), (f64, usize)> = BTreeMap::new();
    for r in records {
        if let Some(tau) = r.tau {
            let g = groups.entry((r.season, tau)).or_default();
            g.0 += r.rmse;
            g.1 += 1;
        }
    }
    groups
        .into_iter()
        .map(|((season, tau), (sum, n))| CurvePoint {
            season,
            tau,
            n,
            mean_rmse: sum / n as f64,
        })
        .collect()
}

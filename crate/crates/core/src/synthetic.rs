//! Deterministic synthetic fields and multi-year daily datasets.

use std::f64::consts::PI;

use chrono::{Datelike, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldStack, ScalarField};
use crate::fusion::LambdaMap;
use crate::temporal::day_slot;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub center: (f64, f64),
    pub amplitude: f64,
    pub sigma: f64,
}

impl BumpSpec {
    pub fn new(center: (f64, f64), amplitude: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidSpec(format!("bump sigma must be positive, got {sigma}")));
        }
        if !amplitude.is_finite() || !center.0.is_finite() || !center.1.is_finite() {
            return Err(Error::InvalidSpec("bump parameters must be finite".into()));
        }
        Ok(Self {
            center,
            amplitude,
            sigma,
        })
    }
}

/// Sum of isotropic Gaussian bumps sampled at integer (row, col) positions.
pub fn gaussian_mixture_field(height: usize, width: usize, bumps: &[BumpSpec]) -> Result<ScalarField> {
    if height < 3 || width < 3 {
        return Err(Error::GridTooSmall {
            rows: height,
            cols: width,
            min_rows: 3,
            min_cols: 3,
        });
    }
    for b in bumps {
        BumpSpec::new(b.center, b.amplitude, b.sigma)?;
    }
    Ok(ScalarField::from_fn(height, width, |r, c| {
        bumps
            .iter()
            .map(|b| {
                let dr = r as f64 - b.center.0;
                let dc = c as f64 - b.center.1;
                b.amplitude * (-(dr * dr + dc * dc) / (2.0 * b.sigma * b.sigma)).exp()
            })
            .sum()
    }))
}

fn default_start_year() -> i32 {
    2010
}

fn default_baseline() -> f64 {
    285.0
}

/// Parameters of a synthetic daily temperature dataset, one field per day from
/// 1 January of `start_year` through 31 December of the last year.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClimateSpec {
    pub n_years: u32,
    pub height: usize,
    pub width: usize,
    pub annual_amp: f64,
    pub interannual_amp: f64,
    pub weather_amp: f64,
    pub ar1_coeff: f64,
    pub seed: u64,
    #[serde(default = "default_start_year")]
    pub start_year: i32,
    /// Mean temperature in kelvin.
    #[serde(default = "default_baseline")]
    pub baseline_kelvin: f64,
}

impl ClimateSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_years < 4 {
            return Err(Error::InvalidSpec(format!(
                "n_years must be at least 4, got {}",
                self.n_years
            )));
        }
        if self.height < 3 || self.width < 3 {
            return Err(Error::GridTooSmall {
                rows: self.height,
                cols: self.width,
                min_rows: 3,
                min_cols: 3,
            });
        }
        for (name, v) in [
            ("annual_amp", self.annual_amp),
            ("interannual_amp", self.interannual_amp),
            ("weather_amp", self.weather_amp),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if !(0.0..1.0).contains(&self.ar1_coeff) {
            return Err(Error::InvalidSpec(format!(
                "ar1_coeff must lie in [0, 1), got {}",
                self.ar1_coeff
            )));
        }
        if !self.baseline_kelvin.is_finite() {
            return Err(Error::InvalidSpec("baseline_kelvin must be finite".into()));
        }
        NaiveDate::from_ymd_opt(self.start_year, 1, 1)
            .zip(NaiveDate::from_ymd_opt(self.start_year + self.n_years as i32, 1, 1))
            .ok_or_else(|| Error::InvalidSpec("year range out of calendar bounds".into()))?;
        Ok(())
    }

    pub fn first_date(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.start_year, 1, 1).expect("validated start year")
    }

    pub fn last_date(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.start_year + self.n_years as i32 - 1, 12, 31).expect("validated end year")
    }
}

const MODES: usize = 6;

#[derive(Clone, Copy)]
enum Stream {
    Phase = 1,
    Year = 2,
    Day = 3,
}

fn rng_for(seed: u64, stream: Stream, key: i64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << 48) ^ (key as u64 & 0xFFFF_FFFF_FFFF));
    rng
}

/// Unit-variance smooth random field: a few low-wavenumber plane waves with
/// Gaussian amplitudes, evaluated separably in rows and columns.
fn smooth_field(rng: &mut ChaCha8Rng, height: usize, width: usize) -> Vec<f64> {
    let mut out = vec![0.0; height * width];
    let scale = (2.0 / MODES as f64).sqrt();
    for _ in 0..MODES {
        let ky: f64 = rng.random_range(0.0..2.0);
        let kx: f64 = rng.random_range(0.0..2.0);
        let phase: f64 = rng.random_range(0.0..2.0 * PI);
        let amp: f64 = scale * rng.sample::<f64, _>(StandardNormal);
        let row_arg: Vec<f64> = (0..height)
            .map(|r| 2.0 * PI * ky * r as f64 / height as f64 + phase)
            .collect();
        let col_arg: Vec<f64> = (0..width).map(|c| 2.0 * PI * kx * c as f64 / width as f64).collect();
        let (rc, rs): (Vec<f64>, Vec<f64>) = row_arg.iter().map(|a| (a.cos(), a.sin())).unzip();
        let (cc, cs): (Vec<f64>, Vec<f64>) = col_arg.iter().map(|a| (a.cos(), a.sin())).unzip();
        for r in 0..height {
            let row = &mut out[r * width..(r + 1) * width];
            for c in 0..width {
                row[c] += amp * (rc[r] * cc[c] - rs[r] * cs[c]);
            }
        }
    }
    out
}

/// Builds the daily dataset described by `spec`.
///
/// `T(d) = base + annual·cos(2π·doy/365.25 + φ) + interannual·Y(year) + weather·W(d)`,
/// where `W` is a stationary unit-variance AR(1) process whose innovations are
/// smooth fields. Every random draw comes from a ChaCha stream keyed by the seed
/// and a (kind, year or day) counter. `doy` is the leap-year ordinal of the
/// calendar day, so a given (month, day) always sees the same seasonal phase.
pub fn generate_climate(spec: &ClimateSpec) -> Result<FieldStack> {
    spec.validate()?;
    let (h, w) = (spec.height, spec.width);
    let phase: Vec<f64> = smooth_field(&mut rng_for(spec.seed, Stream::Phase, 0), h, w)
        .into_iter()
        .map(|v| 0.3 * v)
        .collect();
    let years: Vec<Vec<f64>> = (0..spec.n_years as i32)
        .map(|k| {
            smooth_field(
                &mut rng_for(spec.seed, Stream::Year, (spec.start_year + k) as i64),
                h,
                w,
            )
        })
        .collect();

    let a = spec.ar1_coeff;
    let innovation_scale = (1.0 - a * a).sqrt();
    let first = spec.first_date();
    let mut weather = vec![0.0; h * w];
    let mut records = Vec::new();
    for (i, date) in first.iter_days().take_while(|d| *d <= spec.last_date()).enumerate() {
        let eps = smooth_field(
            &mut rng_for(spec.seed, Stream::Day, crate::field::days_since_epoch(date)),
            h,
            w,
        );
        if i == 0 {
            weather = eps;
        } else {
            for (wv, e) in weather.iter_mut().zip(&eps) {
                *wv = a * *wv + innovation_scale * e;
            }
        }
        let doy = day_slot(date) as f64;
        let year = &years[(date.year() - spec.start_year) as usize];
        let values: Vec<f64> = (0..h * w)
            .map(|j| {
                spec.baseline_kelvin
                    + spec.annual_amp * (2.0 * PI * doy / 365.25 + phase[j]).cos()
                    + spec.interannual_amp * year[j]
                    + spec.weather_amp * weather[j]
            })
            .collect();
        records.push((date, ScalarField::new(h, w, values)?));
    }
    FieldStack::from_records(records)
}

/// Per-pixel blend weight that makes `fuse(inter, intra, λ*)` as close to the
/// truth as the convex combination allows.
pub fn oracle_lambda(inter: &ScalarField, intra: &ScalarField, truth: &ScalarField) -> Result<LambdaMap> {
    inter.require_same_shape(intra)?;
    inter.require_same_shape(truth)?;
    let values = inter
        .values()
        .iter()
        .zip(intra.values())
        .zip(truth.values())
        .map(|((&e, &a), &t)| {
            let gap = e - a;
            if gap.abs() > 1e-12 {
                ((t - a) / gap).clamp(0.0, 1.0)
            } else {
                0.5
            }
        })
        .collect();
    LambdaMap::single(ScalarField::new(inter.height(), inter.width(), values)?)
}

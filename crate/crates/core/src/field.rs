//! Gridded scalar fields, date-indexed field stacks and percentile normalization.

use std::collections::BTreeSet;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default grid height of the study domain.
pub const DEFAULT_HEIGHT: usize = 101;
/// Default grid width of the study domain.
pub const DEFAULT_WIDTH: usize = 237;

const DEGENERATE_SPREAD: f64 = 1e-12;
const UNIT_RANGE_SLACK: f64 = 1e-9;

/// A 2D grid of finite reals stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::GridTooSmall {
                rows: height,
                cols: width,
                min_rows: 1,
                min_cols: 1,
            });
        }
        if values.len() != height * width {
            return Err(Error::ValueCount {
                expected: height * width,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(index));
        }
        Ok(Self { height, width, values })
    }

    /// A field with every cell set to `value`.
    ///
    /// Panics if `value` is not finite or a dimension is zero.
    pub fn filled(height: usize, width: usize, value: f64) -> Self {
        Self::new(height, width, vec![value; height * width]).expect("valid constant field")
    }

    /// Builds a field by evaluating `f(row, col)` at every cell.
    ///
    /// Panics if `f` produces a non-finite value or a dimension is zero.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                values.push(f(r, c));
            }
        }
        Self::new(height, width, values).expect("generator produced an invalid field")
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn require_dims(&self, min_rows: usize, min_cols: usize) -> Result<()> {
        if self.height < min_rows || self.width < min_cols {
            return Err(Error::GridTooSmall {
                rows: self.height,
                cols: self.width,
                min_rows,
                min_cols,
            });
        }
        Ok(())
    }

    pub fn require_same_shape(&self, other: &ScalarField) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch(self.height, self.width, other.height, other.width));
        }
        Ok(())
    }

    /// Applies `f` cell-wise.
    ///
    /// Panics if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        let values = self.values.iter().map(|&v| f(v)).collect();
        ScalarField::new(self.height, self.width, values).expect("map produced non-finite value")
    }

    /// Combines two same-shape fields cell-wise.
    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
        self.require_same_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        ScalarField::new(self.height, self.width, values)
    }
}

/// Ordered sequence of dated records, each holding `channels` same-shape grids.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldStack {
    height: usize,
    width: usize,
    channels: usize,
    dates: Vec<NaiveDate>,
    fields: Vec<ScalarField>,
}

impl FieldStack {
    /// `fields` holds `dates.len() * channels` grids, channel-major within a date.
    pub fn new(
        height: usize,
        width: usize,
        channels: usize,
        dates: Vec<NaiveDate>,
        fields: Vec<ScalarField>,
    ) -> Result<Self> {
        if channels == 0 {
            return Err(Error::ChannelCount { channels, expected: 1 });
        }
        if fields.len() != dates.len() * channels {
            return Err(Error::ValueCount {
                expected: dates.len() * channels,
                got: fields.len(),
            });
        }
        if let Some(pos) = dates.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedDates(pos + 1));
        }
        for f in &fields {
            if f.dims() != (height, width) {
                return Err(Error::ShapeMismatch(height, width, f.height(), f.width()));
            }
        }
        Ok(Self {
            height,
            width,
            channels,
            dates,
            fields,
        })
    }

    /// Single-channel stack from `(date, field)` records.
    pub fn from_records(records: Vec<(NaiveDate, ScalarField)>) -> Result<Self> {
        let (height, width) = records
            .first()
            .map(|(_, f)| f.dims())
            .ok_or(Error::ValueCount { expected: 1, got: 0 })?;
        let (dates, fields) = records.into_iter().unzip();
        Self::new(height, width, 1, dates, fields)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn fields(&self) -> &[ScalarField] {
        &self.fields
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        self.dates.binary_search(&date).ok()
    }

    /// Grid for record `index`, channel `channel`.
    pub fn field(&self, index: usize, channel: usize) -> &ScalarField {
        assert!(channel < self.channels, "channel {channel} out of range");
        &self.fields[index * self.channels + channel]
    }

    /// All channels of record `index`.
    pub fn record(&self, index: usize) -> &[ScalarField] {
        &self.fields[index * self.channels..(index + 1) * self.channels]
    }

    pub fn get(&self, date: NaiveDate, channel: usize) -> Option<&ScalarField> {
        self.index_of(date).map(|i| self.field(i, channel))
    }
}

/// Normalization bounds: 1st and 99th percentiles of the training data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    pub p1: f64,
    pub p99: f64,
}

impl NormStats {
    pub fn new(p1: f64, p99: f64) -> Result<Self> {
        if !p1.is_finite() || !p99.is_finite() || p99 - p1 < DEGENERATE_SPREAD {
            return Err(Error::DegenerateStats { p1, p99 });
        }
        Ok(Self { p1, p99 })
    }

    pub fn spread(&self) -> f64 {
        self.p99 - self.p1
    }

    pub fn normalize_value(&self, v: f64) -> f64 {
        ((v - self.p1) / self.spread()).clamp(0.0, 1.0)
    }

    pub fn denormalize_value(&self, v: f64) -> f64 {
        v * self.spread() + self.p1
    }
}

/// Year-disjoint train/test partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    train_years: BTreeSet<i32>,
    test_years: BTreeSet<i32>,
}

impl SplitSpec {
    pub fn new(train_years: impl IntoIterator<Item = i32>, test_years: impl IntoIterator<Item = i32>) -> Result<Self> {
        let train_years: BTreeSet<i32> = train_years.into_iter().collect();
        let test_years: BTreeSet<i32> = test_years.into_iter().collect();
        let overlap: Vec<i32> = train_years.intersection(&test_years).copied().collect();
        if !overlap.is_empty() {
            return Err(Error::OverlappingSplit(overlap));
        }
        Ok(Self {
            train_years,
            test_years,
        })
    }

    pub fn train_years(&self) -> &BTreeSet<i32> {
        &self.train_years
    }

    pub fn test_years(&self) -> &BTreeSet<i32> {
        &self.test_years
    }

    pub fn is_train(&self, date: NaiveDate) -> bool {
        self.train_years.contains(&date.year())
    }

    pub fn is_test(&self, date: NaiveDate) -> bool {
        self.test_years.contains(&date.year())
    }
}

/// Quantile `q` of ascending `sorted` data, linear interpolation between
/// order statistics at position `(n - 1) * q`.
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty data");
    let pos = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

/// Pools channel 0 of every training-year record and returns its 1st/99th percentiles.
pub fn compute_norm_stats(stack: &FieldStack, split: &SplitSpec) -> Result<NormStats> {
    let mut pooled: Vec<f64> = stack
        .dates()
        .iter()
        .enumerate()
        .filter(|(_, d)| split.is_train(**d))
        .flat_map(|(i, _)| stack.field(i, 0).values().iter().copied())
        .collect();
    if pooled.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    pooled.sort_unstable_by(f64::total_cmp);
    NormStats::new(percentile_sorted(&pooled, 0.01), percentile_sorted(&pooled, 0.99))
}

pub fn normalize(field: &ScalarField, stats: &NormStats) -> ScalarField {
    field.map(|v| stats.normalize_value(v))
}

/// Inverse of [`normalize`] on the unit interval.
pub fn denormalize(field: &ScalarField, stats: &NormStats) -> Result<ScalarField> {
    if let Some((index, &value)) = field
        .values()
        .iter()
        .enumerate()
        .find(|(_, v)| **v < -UNIT_RANGE_SLACK || **v > 1.0 + UNIT_RANGE_SLACK)
    {
        return Err(Error::OutOfRange { index, value });
    }
    Ok(field.map(|v| stats.denormalize_value(v)))
}

pub(crate) fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("epoch")
}

/// Days since 1970-01-01.
pub fn days_since_epoch(date: NaiveDate) -> i64 {
    (date - epoch()).num_days()
}

pub fn date_from_days(days: i64) -> Option<NaiveDate> {
    epoch().checked_add_signed(chrono::TimeDelta::try_days(days)?)
}

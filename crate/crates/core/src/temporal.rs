//! Dual-trend sample construction (calendar-aligned interannual context plus
//! lead-time matched recent history), split validation and the day-of-year
//! climatology baseline.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldStack, ScalarField, SplitSpec};
use crate::topo::MultiChannelField;

pub const MIN_LEAD_DAYS: u32 = 30;
pub const MAX_LEAD_DAYS: u32 = 90;

/// Forecast lead time in days, `30..=90`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u32")]
pub struct LeadTime(u32);

impl LeadTime {
    pub fn new(days: i64) -> Result<Self> {
        if (i64::from(MIN_LEAD_DAYS)..=i64::from(MAX_LEAD_DAYS)).contains(&days) {
            Ok(Self(days as u32))
        } else {
            Err(Error::InvalidLeadTime(days))
        }
    }

    pub fn days(self) -> u32 {
        self.0
    }
}

impl TryFrom<i64> for LeadTime {
    type Error = Error;

    fn try_from(days: i64) -> Result<Self> {
        Self::new(days)
    }
}

impl From<LeadTime> for u32 {
    fn from(t: LeadTime) -> u32 {
        t.0
    }
}

impl fmt::Display for LeadTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Same (month, day) in `year`; Feb 29 falls back to Feb 28 in non-leap years.
fn same_calendar_day(date: NaiveDate, year: i32) -> NaiveDate {
    NaiveDate::from_ymd_opt(year, date.month(), date.day())
        .or_else(|| NaiveDate::from_ymd_opt(year, date.month(), date.day() - 1))
        .expect("valid calendar day")
}

fn days_before(date: NaiveDate, days: u64) -> NaiveDate {
    date.checked_sub_days(Days::new(days)).expect("date in range")
}

fn check_history(dates: &[NaiveDate], start: NaiveDate) -> Result<()> {
    match dates.iter().find(|d| **d < start) {
        Some(&needed) => Err(Error::InsufficientHistory { needed, start }),
        None => Ok(()),
    }
}

fn calendar_aligned(t: NaiveDate) -> [NaiveDate; 3] {
    [3, 2, 1].map(|k| same_calendar_day(t, t.year() - k))
}

fn lead_matched(t: NaiveDate, tau: LeadTime) -> [NaiveDate; 3] {
    [3u64, 2, 1].map(|k| days_before(t, k * u64::from(tau.days())))
}

/// Same calendar day in the three preceding years, oldest first.
pub fn interannual_dates(t: NaiveDate, dataset_start: NaiveDate) -> Result<[NaiveDate; 3]> {
    let dates = calendar_aligned(t);
    check_history(&dates, dataset_start)?;
    Ok(dates)
}

/// `[t - 3τ, t - 2τ, t - τ]`.
pub fn intra_dates(t: NaiveDate, tau: LeadTime, dataset_start: NaiveDate) -> Result<[NaiveDate; 3]> {
    let dates = lead_matched(t, tau);
    check_history(&dates, dataset_start)?;
    Ok(dates)
}

/// The dates a dual-trend sample is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDates {
    pub target: NaiveDate,
    pub tau: LeadTime,
    pub inter: [NaiveDate; 3],
    pub intra: [NaiveDate; 3],
}

impl SampleDates {
    /// Pure calendar construction with no dataset-start check.
    pub fn new(target: NaiveDate, tau: LeadTime) -> Self {
        Self {
            target,
            tau,
            inter: calendar_aligned(target),
            intra: lead_matched(target, tau),
        }
    }

    pub fn inputs(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.inter.iter().chain(&self.intra).copied()
    }

    /// Manifest line: `target,tau,inter1,inter2,inter3,intra1,intra2,intra3`.
    pub fn to_manifest_line(&self) -> String {
        let mut parts = vec![self.target.to_string(), self.tau.to_string()];
        parts.extend(self.inputs().map(|d| d.to_string()));
        parts.join(",")
    }
}

impl FromStr for SampleDates {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("malformed manifest line {line:?}"));
        let parts: Vec<&str> = line.trim().split(',').map(str::trim).collect();
        if parts.len() != 8 {
            return Err(bad());
        }
        let date = |s: &str| NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| bad());
        let target = date(parts[0])?;
        let tau = LeadTime::new(parts[1].parse().map_err(|_| bad())?)?;
        let parsed = Self {
            target,
            tau,
            inter: [date(parts[2])?, date(parts[3])?, date(parts[4])?],
            intra: [date(parts[5])?, date(parts[6])?, date(parts[7])?],
        };
        if parsed != Self::new(target, tau) {
            return Err(bad());
        }
        Ok(parsed)
    }
}

/// One training or evaluation sample.
#[derive(Clone, Debug, PartialEq)]
pub struct DualSample {
    pub dates: SampleDates,
    pub inter_inputs: [MultiChannelField; 3],
    pub intra_inputs: [MultiChannelField; 3],
    pub target: ScalarField,
}

/// Assembles a sample from a four-channel stack; the target is the SF channel at `t`.
pub fn build_sample(stack: &FieldStack, t: NaiveDate, tau: LeadTime) -> Result<DualSample> {
    if stack.channels() != 4 {
        return Err(Error::ChannelCount {
            channels: stack.channels(),
            expected: 4,
        });
    }
    let start = *stack.dates().first().ok_or(Error::MissingDate(vec![t]))?;
    let dates = SampleDates::new(t, tau);
    check_history(&dates.inter, start)?;
    check_history(&dates.intra, start)?;

    let mut missing: Vec<NaiveDate> = dates
        .inputs()
        .chain(std::iter::once(t))
        .filter(|d| stack.index_of(*d).is_none())
        .collect();
    if !missing.is_empty() {
        missing.sort_unstable();
        missing.dedup();
        return Err(Error::MissingDate(missing));
    }
    let load = |d: NaiveDate| MultiChannelField::from_channels(stack.record(stack.index_of(d).expect("checked above")));
    Ok(DualSample {
        dates,
        inter_inputs: dates.inter.map(load),
        intra_inputs: dates.intra.map(load),
        target: stack.get(t, 0).expect("checked above").clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Test,
}

/// Year-disjointness and causality check for one sample.
///
/// The target year must belong to the role's year set and every input must
/// precede the target. Training samples additionally draw every input from
/// training years.
pub fn validate_split(dates: &SampleDates, split: &SplitSpec, role: Role) -> bool {
    let causal = dates.inputs().all(|d| d < dates.target);
    match role {
        Role::Test => causal && split.is_test(dates.target),
        Role::Train => causal && split.is_train(dates.target) && dates.inputs().all(|d| split.is_train(d)),
    }
}

/// Uniform lead times over `30..=90` from a seeded stream.
pub fn uniform_lead_times(n: usize, seed: u64) -> Vec<LeadTime> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| LeadTime(rng.random_range(MIN_LEAD_DAYS..=MAX_LEAD_DAYS)))
        .collect()
}

const LEAP_REFERENCE_YEAR: i32 = 2000;

/// Zero-based calendar-day slot in a leap year (Feb 29 has its own slot).
pub fn day_slot(date: NaiveDate) -> usize {
    NaiveDate::from_ymd_opt(LEAP_REFERENCE_YEAR, date.month(), date.day())
        .expect("every calendar day exists in a leap year")
        .ordinal0() as usize
}

fn slot_date(slot: usize) -> NaiveDate {
    NaiveDate::from_yo_opt(LEAP_REFERENCE_YEAR, slot as u32 + 1).expect("slot < 366")
}

/// Training-period mean field for each calendar day.
#[derive(Clone, Debug, PartialEq)]
pub struct Climatology {
    entries: Vec<Option<ScalarField>>,
}

impl Climatology {
    pub fn entry(&self, month: u32, day: u32) -> Option<&ScalarField> {
        let date = NaiveDate::from_ymd_opt(LEAP_REFERENCE_YEAR, month, day)?;
        self.entries[day_slot(date)].as_ref()
    }

    pub fn len(&self) -> usize {
        self.entries.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Single-channel stack with each entry dated in the leap reference year 2000.
    pub fn to_stack(&self) -> Result<FieldStack> {
        let records = self
            .entries
            .iter()
            .enumerate()
            .filter_map(|(slot, e)| e.clone().map(|f| (slot_date(slot), f)))
            .collect();
        FieldStack::from_records(records)
    }

    /// Inverse of [`Climatology::to_stack`]; only the (month, day) of each record is used.
    pub fn from_stack(stack: &FieldStack) -> Self {
        let mut entries = vec![None; 366];
        for (i, &d) in stack.dates().iter().enumerate() {
            entries[day_slot(d)] = Some(stack.field(i, 0).clone());
        }
        Self { entries }
    }
}

/// Pointwise mean of channel 0 over training-year records sharing a calendar day.
pub fn build_climatology(stack: &FieldStack, split: &SplitSpec) -> Result<Climatology> {
    let cells = stack.height() * stack.width();
    let mut sums: Vec<Option<(Vec<f64>, usize)>> = vec![None; 366];
    for (i, &d) in stack.dates().iter().enumerate() {
        if !split.is_train(d) {
            continue;
        }
        let (sum, count) = sums[day_slot(d)].get_or_insert_with(|| (vec![0.0; cells], 0));
        for (s, v) in sum.iter_mut().zip(stack.field(i, 0).values()) {
            *s += v;
        }
        *count += 1;
    }
    if sums.iter().all(Option::is_none) {
        return Err(Error::EmptyTrainingSet);
    }
    let entries = sums
        .into_iter()
        .map(|e| {
            e.map(|(sum, count)| {
                let mean = sum.into_iter().map(|s| s / count as f64).collect();
                ScalarField::new(stack.height(), stack.width(), mean).expect("finite mean")
            })
        })
        .collect();
    Ok(Climatology { entries })
}

/// Climatological forecast for `t`; independent of lead time by construction.
pub fn climatology_forecast(clim: &Climatology, t: NaiveDate) -> Result<ScalarField> {
    clim.entry(t.month(), t.day()).cloned().ok_or(Error::MissingDayOfYear {
        month: t.month(),
        day: t.day(),
    })
}

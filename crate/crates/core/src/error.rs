use chrono::NaiveDate;
use thiserror::Error;

/// Errors produced by the topofield library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid must be at least {min_rows}x{min_cols}, got {rows}x{cols}")]
    GridTooSmall {
        rows: usize,
        cols: usize,
        min_rows: usize,
        min_cols: usize,
    },
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("field has {expected} cells but {got} values were supplied")]
    ValueCount { expected: usize, got: usize },
    #[error("non-finite value at cell {0}")]
    NonFinite(usize),
    #[error("value {value} at cell {index} lies outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },

    #[error("no field falls in a training year")]
    EmptyTrainingSet,
    #[error("degenerate normalization statistics: p1 = {p1}, p99 = {p99}")]
    DegenerateStats { p1: f64, p99: f64 },
    #[error("training and test years overlap: {0:?}")]
    OverlappingSplit(Vec<i32>),

    #[error("stack dates must be strictly increasing (violated at position {0})")]
    UnsortedDates(usize),
    #[error("stack has {channels} channels, expected {expected}")]
    ChannelCount { channels: usize, expected: usize },

    #[error("not a GFS stack: bad magic {0:?}")]
    BadMagic([u8; 4]),
    #[error("truncated GFS payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("malformed diagram CSV at line {line}: {reason}")]
    DiagramFormat { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("homology dimension must be 0 or 1, got {0}")]
    InvalidDimension(u8),
    #[error("diagrams have different dimensions ({0} vs {1})")]
    DimensionMismatch(u8, u8),
    #[error("diagrams have {0} and {1} essential classes; bottleneck distance is infinite")]
    EssentialCountMismatch(usize, usize),

    #[error("lead time {0} days outside 30..=90")]
    InvalidLeadTime(i64),
    #[error("date {needed} precedes dataset start {start}")]
    InsufficientHistory { needed: NaiveDate, start: NaiveDate },
    #[error("stack is missing dates {0:?}")]
    MissingDate(Vec<NaiveDate>),
    #[error("no climatology entry for {month:02}-{day:02}")]
    MissingDayOfYear { month: u32, day: u32 },

    #[error("invalid fusion weight map: {0}")]
    InvalidLambda(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("score array is empty")]
    EmptyScores,

    #[error("fields are identical; PSNR is unbounded")]
    IdenticalFields,
    #[error("anomaly field has zero variance")]
    ZeroVariance,
    #[error("sample is empty or has zero spread")]
    DegenerateSample,
    #[error("no records for season {0}")]
    EmptySeason(String),
    #[error("RMSE bin {0} is empty")]
    EmptyBin(usize),
    #[error("bin edges must be finite and strictly increasing")]
    InvalidBins,

    #[error("invalid synthetic specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Sublevel-set cubical persistent homology (H0, H1) of 2D grids and the
//! bottleneck distance between persistence diagrams.
//!
//! The filtration is the V-construction: pixels are vertices, 4-neighbours
//! span edges, 2x2 blocks span squares, and each cell enters at the highest of
//! its vertices under the perturbed order `(value, linear index)`. Pairs whose
//! birth and death share an apex vertex have zero persistence even under the
//! perturbation and are not part of any diagram.

mod bottleneck;
mod cubical;
mod union_find;

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;

pub use bottleneck::bottleneck_distance;
use cubical::{ApexPair, CubicalComplex};

/// One `(birth, death)` interval; `death` is `+∞` for essential classes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub dim: u8,
    pub pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    /// Builds a diagram with pairs in canonical (birth, death) order.
    pub fn new(dim: u8, mut pairs: Vec<PersistencePair>) -> Self {
        pairs.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        Self { dim, pairs }
    }

    pub fn empty(dim: u8) -> Self {
        Self { dim, pairs: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn essential_births(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .filter(|p| p.is_essential())
            .map(|p| p.birth)
            .collect()
    }

    pub fn finite_points(&self) -> Vec<(f64, f64)> {
        self.pairs
            .iter()
            .filter(|p| !p.is_essential())
            .map(|p| (p.birth, p.death))
            .collect()
    }

    /// Adds `shift` to every birth and death.
    pub fn shifted(&self, shift: f64) -> Self {
        Self::new(
            self.dim,
            self.pairs
                .iter()
                .map(|p| PersistencePair {
                    birth: p.birth + shift,
                    death: p.death + shift,
                })
                .collect(),
        )
    }
}

/// The complex every diagram in this crate is computed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationConfig {
    pub construction: &'static str,
    pub direction: &'static str,
}

pub const FILTRATION: FiltrationConfig = FiltrationConfig {
    construction: "V",
    direction: "sublevel",
};

fn check_dim(dim: u8) -> Result<()> {
    if dim > 1 {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(())
}

fn to_diagram(field: &ScalarField, dim: u8, pairs: &[ApexPair]) -> PersistenceDiagram {
    let values = field.values();
    let pairs = pairs
        .iter()
        .filter(|p| p.death != Some(p.birth))
        .map(|p| PersistencePair {
            birth: values[p.birth],
            death: p.death.map_or(f64::INFINITY, |d| values[d]),
        })
        .collect();
    PersistenceDiagram::new(dim, pairs)
}

/// Sublevel persistence diagram in dimension `dim` (0 or 1) by Z2 boundary
/// matrix reduction with clearing.
pub fn sublevel_persistence(field: &ScalarField, dim: u8) -> Result<PersistenceDiagram> {
    check_dim(dim)?;
    let (h0, h1) = CubicalComplex::new(field).reduce();
    Ok(to_diagram(field, dim, if dim == 0 { &h0 } else { &h1 }))
}

/// Both diagrams from a single reduction.
pub fn sublevel_persistence_all(field: &ScalarField) -> (PersistenceDiagram, PersistenceDiagram) {
    let (h0, h1) = CubicalComplex::new(field).reduce();
    (to_diagram(field, 0, &h0), to_diagram(field, 1, &h1))
}

/// H0 diagram by union-find over the sorted vertex sequence.
pub fn sublevel_h0_union_find(field: &ScalarField) -> PersistenceDiagram {
    to_diagram(field, 0, &union_find::h0_pairs(field))
}

/// Drops finite pairs with persistence below `min_persistence`; essential pairs stay.
pub fn filter_by_persistence(pd: &PersistenceDiagram, min_persistence: f64) -> PersistenceDiagram {
    PersistenceDiagram {
        dim: pd.dim,
        pairs: pd
            .pairs
            .iter()
            .filter(|p| p.is_essential() || p.persistence() >= min_persistence)
            .copied()
            .collect(),
    }
}

pub const CSV_HEADER: [&str; 3] = ["dim", "birth", "death"];

fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_owned()
    } else {
        format!("{v:.16e}")
    }
}

/// Writes diagrams as `dim,birth,death` rows with 17 significant digits.
pub fn write_csv(writer: impl Write, diagrams: &[PersistenceDiagram]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(CSV_HEADER).map_err(io)?;
    for d in diagrams {
        for p in &d.pairs {
            w.write_record([d.dim.to_string(), format_value(p.birth), format_value(p.death)])
                .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a diagram CSV, returning one diagram per dimension present, sorted by dimension.
pub fn read_csv(reader: impl Read) -> Result<Vec<PersistenceDiagram>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let bad = |line: usize, reason: String| Error::DiagramFormat { line, reason };
    let header = r.headers().map_err(|e| bad(1, e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(bad(1, format!("expected header dim,birth,death, got {:?}", header)));
    }
    let mut by_dim: std::collections::BTreeMap<u8, Vec<PersistencePair>> = Default::default();
    for (i, record) in r.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| bad(line, e.to_string()))?;
        if record.len() != 3 {
            return Err(bad(line, format!("expected 3 fields, got {}", record.len())));
        }
        let dim: u8 = record[0]
            .parse()
            .map_err(|_| bad(line, format!("bad dim {:?}", &record[0])))?;
        check_dim(dim)?;
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| !v.is_nan() && *v != f64::NEG_INFINITY)
                .ok_or_else(|| bad(line, format!("bad value {s:?}")))
        };
        let birth = parse(&record[1])?;
        let death = parse(&record[2])?;
        if !birth.is_finite() || death < birth {
            return Err(bad(line, format!("invalid interval ({birth}, {death})")));
        }
        by_dim.entry(dim).or_default().push(PersistencePair { birth, death });
    }
    Ok(by_dim
        .into_iter()
        .map(|(dim, pairs)| PersistenceDiagram { dim, pairs })
        .collect())
}

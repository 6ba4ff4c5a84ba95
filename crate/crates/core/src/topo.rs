//! Critical-point classification, saddle-level contour rasterization and the
//! four-channel structural representation `[SF, T, V, C]`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{FieldStack, ScalarField};
use crate::perturb;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriticalKind {
    Maximum,
    Minimum,
    Saddle,
}

impl CriticalKind {
    /// Integer code stored in the type channel (0 is reserved for regular cells).
    pub fn code(self) -> u8 {
        match self {
            CriticalKind::Maximum => 1,
            CriticalKind::Minimum => 2,
            CriticalKind::Saddle => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub row: usize,
    pub col: usize,
    pub kind: CriticalKind,
    pub value: f64,
}

/// Type, value and contour channels derived from one field.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuralChannels {
    /// Critical-point codes scaled into `[0, 1]`: regular 0, maximum 1/3, minimum 2/3, saddle 1.
    pub kind: ScalarField,
    /// Field value at critical cells, 0 elsewhere.
    pub value: ScalarField,
    /// Saddle-level contour mask in `{0, 1}`.
    pub contour: ScalarField,
}

/// `X_t = [SF, T, V, C]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiChannelField {
    pub sf: ScalarField,
    pub channels: StructuralChannels,
}

impl MultiChannelField {
    /// Channels in storage order `[SF, T, V, C]`.
    pub fn to_channels(&self) -> [ScalarField; 4] {
        [
            self.sf.clone(),
            self.channels.kind.clone(),
            self.channels.value.clone(),
            self.channels.contour.clone(),
        ]
    }

    pub fn from_channels(channels: &[ScalarField]) -> Self {
        assert_eq!(channels.len(), 4, "structural field needs four channels");
        Self {
            sf: channels[0].clone(),
            channels: StructuralChannels {
                kind: channels[1].clone(),
                value: channels[2].clone(),
                contour: channels[3].clone(),
            },
        }
    }
}

// N, NE, E, SE, S, SW, W, NW
const RING: [(isize, isize); 8] = [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)];

/// Classifies interior cells by the sign pattern of their 8-neighbor ring.
///
/// Zero sign changes with every neighbor lower is a maximum, with every
/// neighbor higher a minimum; four or more changes is a saddle (monkey saddles
/// included). Boundary cells are never classified.
pub fn classify_critical_points(field: &ScalarField) -> Result<Vec<CriticalPoint>> {
    field.require_dims(3, 3)?;
    let (h, w) = field.dims();
    let values = field.values();
    let mut points = Vec::new();
    for r in 1..h - 1 {
        for c in 1..w - 1 {
            let center = r * w + c;
            let mut higher = [false; 8];
            for (k, (dr, dc)) in RING.iter().enumerate() {
                let n = (r as isize + dr) as usize * w + (c as isize + dc) as usize;
                higher[k] = perturb::lower(values, center, n);
            }
            let changes = (0..8).filter(|&k| higher[k] != higher[(k + 1) % 8]).count();
            let kind = match changes {
                0 if higher[0] => CriticalKind::Minimum,
                0 => CriticalKind::Maximum,
                s if s >= 4 => CriticalKind::Saddle,
                _ => continue,
            };
            points.push(CriticalPoint {
                row: r,
                col: c,
                kind,
                value: values[center],
            });
        }
    }
    Ok(points)
}

const TOP: u8 = 1;
const RIGHT: u8 = 2;
const BOTTOM: u8 = 4;
const LEFT: u8 = 8;

// Crossed edges per marching-squares case; corner bits TL=8, TR=4, BR=2, BL=1.
const CROSSED: [u8; 16] = [
    0,
    BOTTOM | LEFT,
    RIGHT | BOTTOM,
    RIGHT | LEFT,
    TOP | RIGHT,
    TOP | RIGHT | BOTTOM | LEFT,
    TOP | BOTTOM,
    TOP | LEFT,
    TOP | LEFT,
    TOP | BOTTOM,
    TOP | RIGHT | BOTTOM | LEFT,
    TOP | RIGHT,
    RIGHT | LEFT,
    RIGHT | BOTTOM,
    BOTTOM | LEFT,
    0,
];

/// Rasterizes the iso-lines through each saddle's level into a `{0, 1}` mask.
///
/// The level of a saddle at cell `s` sits just above `s` in the perturbed
/// order, so a cell is "above" iff it compares greater than `s`. For every
/// 2x2 square the iso-line crosses, both corner pixels of each crossed edge
/// are marked. Masks of several saddles are OR-ed.
pub fn extract_saddle_contours(field: &ScalarField, saddles: &[CriticalPoint]) -> ScalarField {
    let (h, w) = field.dims();
    let values = field.values();
    let mut mask = vec![0.0; h * w];
    if h < 2 || w < 2 {
        return ScalarField::new(h, w, mask).expect("valid mask");
    }
    let mut above = vec![false; h * w];
    for saddle in saddles {
        debug_assert_eq!(saddle.kind, CriticalKind::Saddle);
        let level = saddle.row * w + saddle.col;
        for (k, a) in above.iter_mut().enumerate() {
            *a = perturb::lower(values, level, k);
        }
        for r in 0..h - 1 {
            for c in 0..w - 1 {
                let tl = r * w + c;
                let tr = tl + 1;
                let bl = tl + w;
                let br = bl + 1;
                let case = (above[tl] as usize) << 3
                    | (above[tr] as usize) << 2
                    | (above[br] as usize) << 1
                    | above[bl] as usize;
                let edges = CROSSED[case];
                for (bit, a, b) in [(TOP, tl, tr), (RIGHT, tr, br), (BOTTOM, br, bl), (LEFT, bl, tl)] {
                    if edges & bit != 0 {
                        mask[a] = 1.0;
                        mask[b] = 1.0;
                    }
                }
            }
        }
    }
    ScalarField::new(h, w, mask).expect("valid mask")
}

/// Assembles `[SF, T, V, C]` from a single (normalized) field.
pub fn build_structural_channels(field: &ScalarField) -> Result<MultiChannelField> {
    let points = classify_critical_points(field)?;
    let (h, w) = field.dims();
    let mut kind = vec![0.0; h * w];
    let mut value = vec![0.0; h * w];
    for p in &points {
        let k = p.row * w + p.col;
        kind[k] = f64::from(p.kind.code()) / 3.0;
        value[k] = p.value;
    }
    let saddles: Vec<CriticalPoint> = points.into_iter().filter(|p| p.kind == CriticalKind::Saddle).collect();
    let contour = extract_saddle_contours(field, &saddles);
    Ok(MultiChannelField {
        sf: field.clone(),
        channels: StructuralChannels {
            kind: ScalarField::new(h, w, kind)?,
            value: ScalarField::new(h, w, value)?,
            contour,
        },
    })
}

/// Converts every record's first channel into the four structural channels.
pub fn structural_stack(stack: &FieldStack) -> Result<FieldStack> {
    let mut fields = Vec::with_capacity(stack.len() * 4);
    for i in 0..stack.len() {
        fields.extend(build_structural_channels(stack.field(i, 0))?.to_channels());
    }
    FieldStack::new(stack.height(), stack.width(), 4, stack.dates().to_vec(), fields)
}

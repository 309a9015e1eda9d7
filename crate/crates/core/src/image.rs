//! Square count grids and their 8-bit intensity rendering.

use std::fmt;
use std::str::FromStr;

/// How raw cell counts become 8-bit intensities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    /// `round(255 * count / max)`.
    #[default]
    MaxCount,
    /// `round(255 * ln(1 + count) / ln(1 + max))`.
    LogMax,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::MaxCount => "max_count",
            Normalization::LogMax => "log_max",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "max_count" => Ok(Normalization::MaxCount),
            "log_max" => Ok(Normalization::LogMax),
            _ => Err(format!("unknown normalization {s:?} (expected max_count or log_max)")),
        }
    }
}

/// Row-major `side x side` grid. Cell `(x, y)` lives at `y * side + x`, so
/// `x` is the column and `y` the row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid<T> {
    side: usize,
    cells: Vec<T>,
}

impl<T: Clone + Default> Grid<T> {
    pub fn new(side: usize) -> Self {
        Self { side, cells: vec![T::default(); side * side] }
    }
}

impl<T> Grid<T> {
    pub fn from_cells(side: usize, cells: Vec<T>) -> Option<Self> {
        (cells.len() == side * side).then_some(Self { side, cells })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.cells[y * self.side + x]
    }

    pub fn get_mut(&mut self, x: usize, y: usize) -> &mut T {
        &mut self.cells[y * self.side + x]
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn rows(&self) -> std::slice::Chunks<'_, T> {
        self.cells.chunks(self.side)
    }

    /// Iterates `(x, y, value)` over every cell.
    pub fn iter_xy(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let side = self.side;
        self.cells.iter().enumerate().map(move |(i, v)| (i % side, i / side, v))
    }
}

/// Provenance recorded alongside every encoded image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingMeta {
    /// Hex digest of the encoder configuration.
    pub fingerprint: String,
    pub sequence_id: String,
    /// Characters that passed index mapping.
    pub mapped: usize,
    /// Characters skipped as unknown.
    pub skipped: usize,
    /// Distinct symbols whose curve distance was already taken by another
    /// symbol (paper mode only).
    pub collisions: usize,
    /// Whether the curve has more points than the sequence has characters.
    pub uniqueness_precondition: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedImage {
    pub counts: Grid<u32>,
    pub intensities: Grid<u8>,
    pub meta: EncodingMeta,
}

impl EncodedImage {
    pub fn side(&self) -> usize {
        self.counts.side()
    }

    pub fn lit_cells(&self) -> usize {
        self.counts.cells().iter().filter(|&&c| c > 0).count()
    }

    pub fn total_count(&self) -> u64 {
        self.counts.cells().iter().map(|&c| u64::from(c)).sum()
    }
}

/// Scales counts into `[0, 255]` so the largest count becomes 255. An all-zero
/// grid stays all zero.
pub fn normalize(counts: &Grid<u32>, normalization: Normalization) -> Grid<u8> {
    let max = counts.cells().iter().copied().max().unwrap_or(0);
    if max == 0 {
        return Grid::new(counts.side());
    }
    let cells = match normalization {
        Normalization::MaxCount => {
            let max = u64::from(max);
            counts
                .cells()
                .iter()
                // round half away from zero in exact integer arithmetic
                .map(|&c| ((510 * u64::from(c) + max) / (2 * max)) as u8)
                .collect()
        }
        Normalization::LogMax => {
            let denom = f64::from(max).ln_1p();
            counts
                .cells()
                .iter()
                .map(|&c| (255.0 * f64::from(c).ln_1p() / denom).round() as u8)
                .collect()
        }
    };
    Grid { side: counts.side(), cells }
}

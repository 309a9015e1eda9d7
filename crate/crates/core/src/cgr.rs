//! Frequency chaos-game representation, used as a comparison encoder.
//!
//! Each alphabet symbol gets an anchor on the boundary of the unit square.
//! Starting from the centre, the walker moves halfway towards the anchor of
//! each residue in turn, and the grid cell containing the walker is
//! incremented after every move.

use crate::alphabet::Alphabet;
use crate::encoder::{check_side, fingerprint_of, index_mapping, EncodeError, SequenceEncoder, UnknownPolicy};
use crate::image::{normalize, EncodedImage, EncodingMeta, Grid, Normalization};
use crate::record::SequenceRecord;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CgrConfigError {
    #[error("CGR resolution {0} is not a power of two")]
    NotPowerOfTwo(u32),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// Anchor points spaced evenly along the unit-square perimeter.
///
/// The walk starts at `(0, 0)` and runs up the left edge, along the top,
/// down the right edge and back along the bottom, so four symbols land on
/// the corners in the order `(0,0) (0,1) (1,1) (1,0)`. For `ACGT` that is the
/// classic DNA layout.
pub fn perimeter_anchors(count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|i| {
            let t = 4.0 * i as f64 / count as f64;
            let (edge, f) = (t.floor() as u32, t.fract());
            match edge {
                0 => (0.0, f),
                1 => (f, 1.0),
                2 => (1.0, 1.0 - f),
                _ => (1.0 - f, 0.0),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgrConfig {
    resolution: u32,
    anchors: Vec<(f64, f64)>,
    pub alphabet: Alphabet,
    pub unknown_policy: UnknownPolicy,
    pub normalization: Normalization,
}

impl CgrConfig {
    pub fn new(resolution: u32, alphabet: Alphabet) -> Result<Self, CgrConfigError> {
        if !resolution.is_power_of_two() {
            return Err(CgrConfigError::NotPowerOfTwo(resolution));
        }
        check_side(u64::from(resolution))?;
        Ok(Self {
            resolution,
            anchors: perimeter_anchors(alphabet.len()),
            alphabet,
            unknown_policy: UnknownPolicy::default(),
            normalization: Normalization::default(),
        })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn anchors(&self) -> &[(f64, f64)] {
        &self.anchors
    }

    pub fn fingerprint(&self) -> String {
        let symbols: String = self.alphabet.symbols().iter().collect();
        fingerprint_of(&format!(
            "cgr;resolution={};alphabet={};unknown={};normalization={}",
            self.resolution, symbols, self.unknown_policy, self.normalization
        ))
    }

    fn cell(&self, v: f64) -> usize {
        let r = self.resolution as usize;
        ((v * r as f64) as usize).min(r - 1)
    }
}

/// Encodes one sequence with the chaos game. `x` indexes grid columns and
/// `y` grid rows, both scaled from the unit square.
pub fn encode_cgr(record: &SequenceRecord, config: &CgrConfig) -> Result<EncodedImage, EncodeError> {
    let side = config.resolution as usize;
    let mut counts: Grid<u32> = Grid::new(side);
    let (mut x, mut y) = (0.5f64, 0.5f64);
    let mut mapped = 0usize;
    let mut skipped = 0usize;

    for (position, c) in record.residues.chars().enumerate() {
        let index = match index_mapping(c, position, &config.alphabet, config.unknown_policy) {
            Ok(Some(i)) => i,
            Ok(None) => {
                skipped += 1;
                continue;
            }
            Err(EncodeError::UnknownSymbol { symbol, position }) => {
                return Err(EncodeError::UnknownInSequence { id: record.id.clone(), symbol, position })
            }
            Err(e) => return Err(e),
        };
        let (ax, ay) = config.anchors[index];
        x = (x + ax) / 2.0;
        y = (y + ay) / 2.0;
        *counts.get_mut(config.cell(x), config.cell(y)) += 1;
        mapped += 1;
    }

    if mapped == 0 {
        return Err(EncodeError::Empty { id: record.id.clone(), skipped });
    }
    let intensities = normalize(&counts, config.normalization);
    let seq_len = (mapped + skipped) as u64;
    Ok(EncodedImage {
        counts,
        intensities,
        meta: EncodingMeta {
            fingerprint: config.fingerprint(),
            sequence_id: record.id.clone(),
            mapped,
            skipped,
            collisions: 0,
            uniqueness_precondition: (side as u64 * side as u64) > seq_len,
        },
    })
}

impl SequenceEncoder for CgrConfig {
    fn encode(&self, record: &SequenceRecord) -> Result<EncodedImage, EncodeError> {
        encode_cgr(record, self)
    }

    fn side(&self) -> usize {
        self.resolution as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dna_anchors_are_corners() {
        assert_eq!(perimeter_anchors(4), vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
    }

    #[test]
    fn anchors_distinct_for_any_size() {
        for k in 2..=40 {
            let a = perimeter_anchors(k);
            for i in 0..k {
                for j in i + 1..k {
                    assert_ne!(a[i], a[j], "k={k}");
                }
            }
        }
    }

    #[test]
    fn resolution_must_be_power_of_two() {
        assert_eq!(
            CgrConfig::new(48, Alphabet::dna()).unwrap_err(),
            CgrConfigError::NotPowerOfTwo(48)
        );
        assert!(CgrConfig::new(1 << 20, Alphabet::dna()).is_err());
    }

    #[test]
    fn hand_traced_walk() {
        // Exact dyadic walk for ACGTTGCA at resolution 4, frozen from a
        // rational-arithmetic trace.
        let cfg = CgrConfig::new(4, Alphabet::dna()).unwrap();
        let img = encode_cgr(&SequenceRecord::new("w", "ACGTTGCA"), &cfg).unwrap();
        let visited = [(1, 1), (0, 2), (2, 3), (3, 1), (3, 0), (3, 2), (1, 3), (0, 1)];
        let mut expected: Grid<u32> = Grid::new(4);
        for (x, y) in visited {
            *expected.get_mut(x, y) += 1;
        }
        assert_eq!(img.counts, expected);
        assert_eq!(img.total_count(), 8);
    }

    #[test]
    fn repeated_symbol_converges_to_anchor() {
        let cfg = CgrConfig::new(64, Alphabet::dna()).unwrap();
        let img = encode_cgr(&SequenceRecord::new("g", "G".repeat(50)), &cfg).unwrap();
        // G anchor is (1,1); the walk never leaves the diagonal and ends in the corner
        assert!(img.counts.iter_xy().all(|(x, y, &c)| c == 0 || x == y));
        // steps 1..=4 sit at 1 - 2^-(j+1) < 63/64
        assert_eq!(*img.counts.get(63, 63), 46);
        let diag: Vec<u32> = (0..64).map(|i| *img.counts.get(i, i)).collect();
        assert_eq!(&diag[48..], &[1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 46]);
        assert_eq!(*img.intensities.get(63, 63), 255);
    }

    #[test]
    fn empty_after_filtering() {
        let cfg = CgrConfig::new(8, Alphabet::dna()).unwrap();
        assert!(matches!(
            encode_cgr(&SequenceRecord::new("n", "NNN"), &cfg),
            Err(EncodeError::Empty { skipped: 3, .. })
        ));
    }
}

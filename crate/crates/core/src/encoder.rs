//! Sequence to Hilbert-curve image encoding.
//!
//! In the default [`Mode::Paper`] every occurrence of a symbol with alphabet
//! index `I` in a sequence of length `L` lands on curve distance
//! `floor(I / L * theta)`, and the cell at that curve point is incremented.
//! Because the distance depends only on the symbol and `L`, an image has at
//! most one lit cell per distinct symbol and discards residue order.
//! [`Mode::Positional`] is a non-default extension that places residues by
//! position instead.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::curve::{self, CurveDistance, CurveError, CurveParams};
use crate::image::{normalize, EncodedImage, EncodingMeta, Grid, Normalization};
use crate::record::SequenceRecord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("sequence {id:?} has no mappable symbols ({skipped} skipped)")]
    Empty { id: String, skipped: usize },
    #[error("unknown symbol {symbol:?} at position {position}")]
    UnknownSymbol { symbol: char, position: usize },
    #[error("sequence {id:?}: unknown symbol {symbol:?} at position {position}")]
    UnknownInSequence { id: String, symbol: char, position: usize },
    #[error("sequence length must be at least 1")]
    ZeroLength,
    #[error("image encoding needs a 2-dimensional curve, got {0} dimensions")]
    NotPlanar(u32),
    #[error("image side {0} is too large")]
    TooLarge(u64),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

macro_rules! keyword_enum {
    ($(#[$m:meta])* $name:ident { $($(#[$vm:meta])* $variant:ident => $kw:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
        pub enum $name {
            #[default]
            $($(#[$vm])* $variant),+
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $kw),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.to_ascii_lowercase().replace('-', "_").as_str() {
                    $($kw => Ok($name::$variant),)+
                    _ => Err(format!(
                        concat!("invalid ", stringify!($name), " {:?}; expected one of: ", $($kw, " "),+),
                        s
                    )),
                }
            }
        }
    };
}

keyword_enum! {
    /// Where a residue lands on the curve.
    Mode {
        /// Distance from the symbol's alphabet index.
        Paper => "paper",
        /// Distance from the residue position; the cell stores `index + 1`,
        /// last writer wins.
        Positional => "positional",
    }
}

keyword_enum! {
    /// What to do with characters outside the alphabet.
    UnknownPolicy {
        Skip => "skip",
        Error => "error",
    }
}

keyword_enum! {
    /// What to do when `index / L * theta` reaches past the end of the curve,
    /// which happens whenever the alphabet index is at least `L`.
    OverflowPolicy {
        Modulo => "modulo",
        Clamp => "clamp",
    }
}

/// Zero-based alphabet index of `c`, or `None` when it should be skipped.
///
/// `position` is only used for the error report under
/// [`UnknownPolicy::Error`].
pub fn index_mapping(
    c: char,
    position: usize,
    alphabet: &Alphabet,
    policy: UnknownPolicy,
) -> Result<Option<usize>, EncodeError> {
    match (alphabet.index_of(c), policy) {
        (Some(i), _) => Ok(Some(i)),
        (None, UnknownPolicy::Skip) => Ok(None),
        (None, UnknownPolicy::Error) => Err(EncodeError::UnknownSymbol { symbol: c, position }),
    }
}

/// `floor(index / seq_len * theta)`, folded back onto the curve per `overflow`.
pub fn distance_for_symbol(
    index: u64,
    seq_len: u64,
    params: &CurveParams,
    overflow: OverflowPolicy,
) -> Result<CurveDistance, EncodeError> {
    if seq_len == 0 {
        return Err(EncodeError::ZeroLength);
    }
    let theta = params.theta();
    let raw = u128::from(index) * u128::from(theta) / u128::from(seq_len);
    let d = match overflow {
        OverflowPolicy::Modulo => (raw % u128::from(theta)) as u64,
        OverflowPolicy::Clamp => raw.min(u128::from(theta - 1)) as u64,
    };
    Ok(CurveDistance::new(d, params)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingConfig {
    pub params: CurveParams,
    pub alphabet: Alphabet,
    pub mode: Mode,
    pub unknown_policy: UnknownPolicy,
    pub overflow_policy: OverflowPolicy,
    pub normalization: Normalization,
}

impl Default for EncodingConfig {
    fn default() -> Self {
        Self::new(CurveParams::planar(6).expect("order 6 is valid"), Alphabet::protein())
    }
}

impl EncodingConfig {
    pub fn new(params: CurveParams, alphabet: Alphabet) -> Self {
        Self {
            params,
            alphabet,
            mode: Mode::default(),
            unknown_policy: UnknownPolicy::default(),
            overflow_policy: OverflowPolicy::default(),
            normalization: Normalization::default(),
        }
    }

    pub fn validate(&self) -> Result<(), EncodeError> {
        if self.params.dims() != 2 {
            return Err(EncodeError::NotPlanar(self.params.dims()));
        }
        check_side(self.params.side())
    }

    /// Stable hex digest of every setting that affects the output.
    pub fn fingerprint(&self) -> String {
        let symbols: String = self.alphabet.symbols().iter().collect();
        fingerprint_of(&format!(
            "hilbert;order={};dims={};alphabet={};mode={};unknown={};overflow={};normalization={}",
            self.params.order(),
            self.params.dims(),
            symbols,
            self.mode,
            self.unknown_policy,
            self.overflow_policy,
            self.normalization,
        ))
    }
}

pub(crate) fn fingerprint_of(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    hex::encode(&digest[..8])
}

// Keeps a dense u32 grid addressable and bounded to something that fits in memory.
pub(crate) fn check_side(side: u64) -> Result<(), EncodeError> {
    if side > 1 << 14 {
        return Err(EncodeError::TooLarge(side));
    }
    Ok(())
}

/// Anything that turns one record into an image.
pub trait SequenceEncoder: Send + Sync {
    fn encode(&self, record: &SequenceRecord) -> Result<EncodedImage, EncodeError>;

    /// Side of every image this encoder produces.
    fn side(&self) -> usize;
}

/// Encodes one sequence into a `2^order`-square image.
pub fn encode_sequence(
    record: &SequenceRecord,
    config: &EncodingConfig,
) -> Result<EncodedImage, EncodeError> {
    config.validate()?;
    let params = &config.params;
    let side = params.side() as usize;
    let seq_len = record.residues.chars().count() as u64;
    if seq_len == 0 {
        return Err(EncodeError::Empty { id: record.id.clone(), skipped: 0 });
    }

    let mut counts: Grid<u32> = Grid::new(side);
    let mut mapped = 0usize;
    let mut skipped = 0usize;
    // per symbol: curve distance and cell, computed on first sight
    let mut placed: Vec<Option<(u64, usize, usize)>> = vec![None; config.alphabet.len()];
    let mut owner: HashMap<u64, usize> = HashMap::new();
    let mut collisions = 0usize;

    for (position, c) in record.residues.chars().enumerate() {
        let index = match index_mapping(c, position, &config.alphabet, config.unknown_policy) {
            Ok(Some(i)) => i,
            Ok(None) => {
                skipped += 1;
                continue;
            }
            Err(EncodeError::UnknownSymbol { symbol, position }) => {
                return Err(EncodeError::UnknownInSequence {
                    id: record.id.clone(),
                    symbol,
                    position,
                })
            }
            Err(e) => return Err(e),
        };
        mapped += 1;
        match config.mode {
            Mode::Paper => {
                let (_, x, y) = match placed[index] {
                    Some(p) => p,
                    None => {
                        let d = distance_for_symbol(index as u64, seq_len, params, config.overflow_policy)?;
                        let (x, y) = curve::xy_from_distance(d.value(), params.order())?;
                        if *owner.entry(d.value()).or_insert(index) != index {
                            collisions += 1;
                        }
                        let p = (d.value(), x as usize, y as usize);
                        placed[index] = Some(p);
                        p
                    }
                };
                *counts.get_mut(x, y) += 1;
            }
            Mode::Positional => {
                let d = distance_for_symbol(position as u64, seq_len, params, config.overflow_policy)?;
                let (x, y) = curve::xy_from_distance(d.value(), params.order())?;
                *counts.get_mut(x as usize, y as usize) = index as u32 + 1;
            }
        }
    }

    if mapped == 0 {
        return Err(EncodeError::Empty { id: record.id.clone(), skipped });
    }

    let intensities = normalize(&counts, config.normalization);
    Ok(EncodedImage {
        counts,
        intensities,
        meta: EncodingMeta {
            fingerprint: config.fingerprint(),
            sequence_id: record.id.clone(),
            mapped,
            skipped,
            collisions,
            uniqueness_precondition: params.theta() > seq_len,
        },
    })
}

impl SequenceEncoder for EncodingConfig {
    fn encode(&self, record: &SequenceRecord) -> Result<EncodedImage, EncodeError> {
        encode_sequence(record, self)
    }

    fn side(&self) -> usize {
        self.params.side() as usize
    }
}

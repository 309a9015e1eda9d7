//! Hilbert-curve image encodings of molecular sequences.
//!
//! The crate is split into:
//!
//! - [`curve`]: exact integer Hilbert-curve math (distance to point and back);
//! - [`encoder`]: alphabet index mapping, curve-distance scaling and
//!   rasterization into a square count image;
//! - [`cgr`]: a frequency chaos-game encoder for comparison runs;
//! - [`data`]: FASTA/CSV ingestion, seeded train/val/test splits, image
//!   export and the dataset manifest.
//!
//! ```
//! use hilbertseq::{encode_sequence, EncodingConfig, SequenceRecord};
//!
//! let img = encode_sequence(&SequenceRecord::new("p1", "ACDC"), &EncodingConfig::default()).unwrap();
//! assert_eq!(img.side(), 64);
//! assert_eq!(img.lit_cells(), 3);
//! ```

pub mod alphabet;
pub mod cgr;
pub mod curve;
pub mod data;
pub mod encoder;
pub mod image;
mod record;
#[cfg(any(test, feature = "reference-oracle"))]
pub mod reference;

pub use alphabet::{Alphabet, AlphabetError};
pub use cgr::{encode_cgr, CgrConfig, CgrConfigError};
pub use curve::{
    compute_theta, distance_from_point, gray_transform, point_from_distance, refine, CurveDistance, CurveError,
    CurveParams, CurvePoint,
};
pub use encoder::{
    distance_for_symbol, encode_sequence, index_mapping, EncodeError, EncodingConfig, Mode, OverflowPolicy,
    SequenceEncoder, UnknownPolicy,
};
pub use image::{normalize, EncodedImage, EncodingMeta, Grid, Normalization};
pub use record::SequenceRecord;

//! Resolution of encoder and split settings: built-in defaults, then the
//! optional `--config` file, then explicit flags.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use hilbertseq::data::{CsvColumns, ImageFormat, SplitConfig};
use hilbertseq::{
    Alphabet, CgrConfig, CurveParams, EncodingConfig, Mode, Normalization, OverflowPolicy, SequenceEncoder,
    UnknownPolicy,
};

use crate::{config_file, UsageError};

pub const DEFAULT_ORDER: u32 = 6;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum EncoderKind {
    #[default]
    Hilbert,
    Cgr,
}

impl EncoderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EncoderKind::Hilbert => "hilbert",
            EncoderKind::Cgr => "cgr",
        }
    }
}

impl FromStr for EncoderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

/// Flags shared by `encode` and `dataset`. Every field is optional so that
/// a config file can fill in what the command line leaves out.
#[derive(Debug, Clone, Default, Args)]
pub struct EncodeFlags {
    /// `key = value` settings file; flags override its values
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Hilbert curve order; images are 2^order pixels square [default: 6]
    #[arg(long)]
    pub order: Option<u32>,
    /// protein-20, dna-4, or a literal symbol list [default: protein-20]
    #[arg(long)]
    pub alphabet: Option<String>,
    /// paper or positional [default: paper]
    #[arg(long)]
    pub mode: Option<String>,
    /// skip or error [default: skip]
    #[arg(long = "unknown", value_name = "POLICY")]
    pub unknown_policy: Option<String>,
    /// modulo or clamp [default: modulo]
    #[arg(long = "overflow", value_name = "POLICY")]
    pub overflow_policy: Option<String>,
    /// max_count or log_max [default: max_count]
    #[arg(long)]
    pub normalization: Option<String>,
    /// pgm, png or csv [default: pgm]
    #[arg(long)]
    pub format: Option<String>,
    /// hilbert or cgr [default: hilbert]
    #[arg(long)]
    pub encoder: Option<String>,
    /// CGR grid side, a power of two [default: 2^order]
    #[arg(long)]
    pub cgr_resolution: Option<u32>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DatasetFlags {
    /// Column holding the residues [default: sequence]
    #[arg(long)]
    pub seq_column: Option<String>,
    /// Column holding the class label [default: class]
    #[arg(long)]
    pub label_column: Option<String>,
    /// Column holding record ids [default: a column named `id`, else the row index]
    #[arg(long)]
    pub id_column: Option<String>,
    /// Split seed [default: 42]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for encoding [default: all cores]
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Shuffle without stratifying by label
    #[arg(long)]
    pub no_stratify: bool,
}

/// Fully resolved settings.
pub struct Settings {
    pub format: ImageFormat,
    pub encoder: Box<dyn SequenceEncoder>,
    pub encoder_kind: EncoderKind,
    pub side: usize,
    pub columns: CsvColumns,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub split: SplitConfig,
}

struct Layered<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layered<'_> {
    fn pick<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, UsageError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|e| UsageError(format!("config key {key} = {raw:?}: {e}"))),
            None => Ok(default),
        }
    }

    fn pick_parsed<T>(&self, key: &str, flag: Option<&str>, default: T) -> Result<T, UsageError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(raw) => raw.parse().map_err(|e| UsageError(format!("--{}: {e}", key.replace('_', "-")))),
            None => self.pick(key, None, default),
        }
    }
}

impl Settings {
    pub fn resolve(enc: &EncodeFlags, data: &DatasetFlags) -> Result<Self, UsageError> {
        let file = match &enc.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
                config_file::parse(&text)?
            }
            None => BTreeMap::new(),
        };
        let l = Layered { file: &file };

        let order: u32 = l.pick("order", enc.order, DEFAULT_ORDER)?;
        let params = CurveParams::planar(order).map_err(|e| UsageError(format!("--order: {e}")))?;
        let alphabet_spec: String = l.pick("alphabet", enc.alphabet.clone(), "protein-20".to_string())?;
        let alphabet = Alphabet::from_spec(&alphabet_spec).map_err(|e| UsageError(format!("--alphabet: {e}")))?;
        let mode: Mode = l.pick_parsed("mode", enc.mode.as_deref(), Mode::default())?;
        let unknown: UnknownPolicy = l.pick_parsed("unknown_policy", enc.unknown_policy.as_deref(), UnknownPolicy::default())?;
        let overflow: OverflowPolicy =
            l.pick_parsed("overflow_policy", enc.overflow_policy.as_deref(), OverflowPolicy::default())?;
        let normalization: Normalization =
            l.pick_parsed("normalization", enc.normalization.as_deref(), Normalization::default())?;
        let format: ImageFormat = l.pick_parsed("format", enc.format.as_deref(), ImageFormat::default())?;
        let encoder_kind: EncoderKind = l.pick_parsed("encoder", enc.encoder.as_deref(), EncoderKind::default())?;
        let cgr_resolution: u32 = l.pick("cgr_resolution", enc.cgr_resolution, 1u32 << order.min(31))?;

        let (encoder, side): (Box<dyn SequenceEncoder>, usize) = match encoder_kind {
            EncoderKind::Hilbert => {
                let cfg = EncodingConfig {
                    mode,
                    unknown_policy: unknown,
                    overflow_policy: overflow,
                    normalization,
                    ..EncodingConfig::new(params, alphabet)
                };
                cfg.validate().map_err(|e| UsageError(format!("--order: {e}")))?;
                let side = cfg.side();
                (Box::new(cfg), side)
            }
            EncoderKind::Cgr => {
                let mut cfg = CgrConfig::new(cgr_resolution, alphabet)
                    .map_err(|e| UsageError(format!("--cgr-resolution: {e}")))?;
                cfg.unknown_policy = unknown;
                cfg.normalization = normalization;
                (Box::new(cfg), cgr_resolution as usize)
            }
        };

        let seq_column: String = l.pick("seq_column", data.seq_column.clone(), "sequence".to_string())?;
        let label_column: String = l.pick("label_column", data.label_column.clone(), "class".to_string())?;
        let id_column: Option<String> = match &data.id_column {
            Some(c) => Some(c.clone()),
            None => file.get("id_column").cloned(),
        };
        let seed: u64 = l.pick("seed", data.seed, DEFAULT_SEED)?;
        let jobs: Option<usize> = match data.jobs {
            Some(j) => Some(j),
            None => file
                .get("jobs")
                .map(|j| j.parse().map_err(|_| UsageError(format!("config key jobs = {j:?} is not a count"))))
                .transpose()?,
        };
        if jobs == Some(0) {
            return Err(UsageError("--jobs must be at least 1".into()));
        }
        let stratify = !data.no_stratify && l.pick("stratify", None, true)?;

        Ok(Self {
            format,
            encoder,
            encoder_kind,
            side,
            columns: CsvColumns { sequence: seq_column, label: label_column, id: id_column },
            seed,
            jobs,
            split: SplitConfig { stratify, ..SplitConfig::default() },
        })
    }
}

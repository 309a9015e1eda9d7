use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use hilbertseq::curve::xy_from_distance;
use hilbertseq::data::{
    parse_fasta, parse_labeled_csv, parse_plain, sanitize_id, split_dataset, write_image, DataError, DatasetManifest,
    Split,
};
use hilbertseq::SequenceRecord;

use crate::settings::{DatasetFlags, EncodeFlags, Settings};
use crate::UsageError;

pub const MANIFEST_NAME: &str = "manifest.tsv";
pub const IMAGE_DIR: &str = "images";

pub fn curve(order: u32, output: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match output {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let theta = 1u64 << (2 * order);
    for d in 0..theta {
        let (x, y) = xy_from_distance(d, order)?;
        if let Err(e) = writeln!(out, "{d}\t{x}\t{y}") {
            if e.kind() == io::ErrorKind::BrokenPipe {
                return Ok(());
            }
            return Err(e.into());
        }
    }
    match out.flush() {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn read_sequences(path: &Path) -> Result<Vec<SequenceRecord>> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut reader = BufReader::new(file);
    let is_fasta = loop {
        let buf = reader.fill_buf().with_context(|| format!("cannot read {}", path.display()))?;
        match buf.iter().position(|b| !b.is_ascii_whitespace()) {
            Some(i) => break buf[i] == b'>',
            None if buf.is_empty() => break false,
            None => {
                let n = buf.len();
                reader.consume(n);
            }
        }
    };
    let records = if is_fasta { parse_fasta(reader) } else { parse_plain(reader) };
    records.with_context(|| format!("cannot parse {}", path.display()))
}

/// Maps each record to a unique file name, refusing ids that collide once
/// sanitized.
fn image_names(records: &[SequenceRecord], ext: &str) -> Result<Vec<String>, UsageError> {
    let mut seen: HashMap<String, &str> = HashMap::new();
    records
        .iter()
        .map(|r| {
            let name = format!("{}.{ext}", sanitize_id(&r.id));
            if let Some(prev) = seen.insert(name.clone(), &r.id) {
                return Err(UsageError(format!("ids {prev:?} and {:?} both map to file {name}", r.id)));
            }
            Ok(name)
        })
        .collect()
}

pub fn encode(input: &Path, out_dir: &Path, flags: &EncodeFlags) -> Result<()> {
    let settings = Settings::resolve(flags, &DatasetFlags::default())?;
    let records = read_sequences(input)?;
    let names = image_names(&records, settings.format.extension())?;
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;

    let (mut mapped, mut skipped) = (0usize, 0usize);
    for (record, name) in records.iter().zip(&names) {
        let img = settings.encoder.encode(record)?;
        mapped += img.meta.mapped;
        skipped += img.meta.skipped;
        write_image(&img, &out_dir.join(name), settings.format)?;
    }
    println!(
        "encoded {} record(s) with {} as {}x{} {} into {}: {mapped} symbol(s) mapped, {skipped} skipped",
        records.len(),
        settings.encoder_kind.as_str(),
        settings.side,
        settings.side,
        settings.format,
        out_dir.display()
    );
    Ok(())
}

pub fn dataset(csv_path: &Path, out_dir: &Path, flags: &EncodeFlags, data: &DatasetFlags) -> Result<()> {
    let settings = Settings::resolve(flags, data)?;
    let file = fs::File::open(csv_path).with_context(|| format!("cannot open {}", csv_path.display()))?;
    let records = parse_labeled_csv(BufReader::new(file), &settings.columns)
        .with_context(|| format!("cannot parse {}", csv_path.display()))?;
    let names = image_names(&records, settings.format.extension())?;
    let split = split_dataset(&records, settings.seed, &settings.split).map_err(|e| match e {
        DataError::Split(m) => anyhow::Error::new(UsageError(format!("cannot split dataset: {m}"))),
        other => other.into(),
    })?;

    let image_dir = out_dir.join(IMAGE_DIR);
    fs::create_dir_all(&image_dir).with_context(|| format!("cannot create {}", image_dir.display()))?;
    let manifest_path = out_dir.join(MANIFEST_NAME);
    if manifest_path.exists() {
        fs::remove_file(&manifest_path).with_context(|| format!("cannot replace {}", manifest_path.display()))?;
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = settings.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().context("cannot start worker pool")?;
    let results: Vec<Result<(usize, usize)>> = pool.install(|| {
        records
            .par_iter()
            .zip(names.par_iter())
            .map(|(record, name)| {
                let img = settings.encoder.encode(record)?;
                write_image(&img, &image_dir.join(name), settings.format)?;
                Ok((img.meta.mapped, img.meta.skipped))
            })
            .collect()
    });

    let failures: Vec<String> = results
        .iter()
        .zip(&records)
        .filter_map(|(r, rec)| r.as_ref().err().map(|e| format!("{}: {e:#}", rec.id)))
        .collect();
    if !failures.is_empty() {
        for f in &failures {
            eprintln!("failed: {f}");
        }
        bail!("{} of {} record(s) failed to export; manifest not written", failures.len(), records.len());
    }
    let (mapped, skipped) = results
        .iter()
        .flatten()
        .fold((0, 0), |(m, s), (dm, ds)| (m + dm, s + ds));

    let mut names_iter = names.iter();
    let manifest = DatasetManifest::from_split(&records, &split, |_| {
        format!("{IMAGE_DIR}/{}", names_iter.next().expect("one name per record"))
    });
    manifest.write(&manifest_path)?;

    let mut histogram: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
    for (record, s) in records.iter().zip(&split.assignments) {
        let slot = match s {
            Split::Train => 0,
            Split::Val => 1,
            Split::Test => 2,
        };
        histogram.entry(record.label.as_deref().unwrap_or("<none>")).or_default()[slot] += 1;
    }
    println!("class\ttotal\ttrain\tval\ttest");
    for (label, [tr, va, te]) in &histogram {
        println!("{label}\t{}\t{tr}\t{va}\t{te}", tr + va + te);
    }
    let sizes = split.sizes();
    println!(
        "wrote {} {} image(s) ({}x{} {}) and {}: train {} / val {} / test {} (seed {}, {}stratified); {mapped} symbol(s) mapped, {skipped} skipped",
        records.len(),
        settings.encoder_kind.as_str(),
        settings.side,
        settings.side,
        settings.format,
        manifest_path.display(),
        sizes.train,
        sizes.val,
        sizes.test,
        settings.seed,
        if split.stratified { "" } else { "not " },
    );
    Ok(())
}

//! Acceptance checks. Each test prints a single `[PASS]` or `[FAIL]` line;
//! run with `--nocapture` to see them:
//!
//! ```text
//! cargo test -p hilbertseq-cli --test acceptance -- --nocapture
//! ```
//!
//! The corpus-count check needs the two ACP CSV files. It reads them from
//! `HILBERTSEQ_BREAST_CSV` / `HILBERTSEQ_LUNG_CSV`, falling back to
//! `data/ACPs_Breast_cancer.csv` and `data/ACPs_Lung_cancer.csv` under the
//! workspace root.

use std::collections::HashSet;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hilbertseq::curve::{distance_from_xy, xy_from_distance};
use hilbertseq::data::{
    decode_pgm, encode_image_bytes, parse_labeled_csv, read_pgm, CsvColumns, DatasetManifest, ImageFormat, SplitConfig,
    SplitSizes,
};
use hilbertseq::reference::reference_point_from_distance;
use hilbertseq::{encode_sequence, EncodingConfig, SequenceRecord};

const MAX_ORDER: u32 = 8;
const ORACLE_BUDGET: Duration = Duration::from_secs(10);
const THROUGHPUT_BUDGET: Duration = Duration::from_secs(5);
const SPLIT_SLACK: usize = 1;
const BREAST_RECORDS: usize = 949;
const LUNG_RECORDS: usize = 901;
const FUZZ_SEQUENCES: usize = 50;
const PROTEIN: &[u8] = b"ACDEFGHIKLMNPQRSTVWY";

fn report(name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("[PASS] {name}: {detail}"),
        Err(detail) => {
            println!("[FAIL] {name}: {detail}");
            panic!("{name}: {detail}");
        }
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbertseq")).args(args).output().expect("spawn hilbertseq")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn random_peptide(rng: &mut ChaCha8Rng, min: usize, max: usize, noise: bool) -> String {
    let len = rng.random_range(min..=max);
    (0..len)
        .map(|_| {
            if noise && rng.random_bool(0.05) {
                *b"XBZ*-".get(rng.random_range(0..5)).unwrap() as char
            } else {
                PROTEIN[rng.random_range(0..PROTEIN.len())] as char
            }
        })
        .collect()
}

/// A labeled CSV shaped like the ACP corpora: ID, sequence, class.
fn synthetic_corpus(path: &Path, rows: usize, seed: u64) {
    const CLASSES: [&str; 4] = ["very active", "mod. active", "inactive - exp", "inactive - virtual"];
    const WEIGHTS: [u32; 4] = [2, 8, 10, 80];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("ID,sequence,class\n");
    for i in 0..rows {
        let mut pick = rng.random_range(0..100);
        let class = CLASSES
            .iter()
            .zip(WEIGHTS)
            .find(|(_, w)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|(c, _)| *c)
            .unwrap();
        out.push_str(&format!("{},{},{class}\n", i + 1, random_peptide(&mut rng, 5, 50, false)));
    }
    fs::write(path, out).unwrap();
}

fn check_exhaustive(check: impl Fn(u32, u64) -> Result<(), String>) -> Result<u64, String> {
    let mut total = 0;
    for p in 1..=MAX_ORDER {
        for d in 0..1u64 << (2 * p) {
            check(p, d)?;
            total += 1;
        }
    }
    Ok(total)
}

#[test]
fn oracle_equivalence() {
    let start = Instant::now();
    let outcome = check_exhaustive(|p, d| {
        let got = xy_from_distance(d, p).map_err(|e| e.to_string())?;
        let want = reference_point_from_distance(d, p).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("p={p} d={d}: {got:?} != oracle {want:?}"));
        }
        Ok(())
    })
    .and_then(|n| {
        let elapsed = start.elapsed();
        if elapsed < ORACLE_BUDGET {
            Ok(format!("{n} distances over p=1..={MAX_ORDER}, 0 mismatches, {elapsed:.2?}"))
        } else {
            Err(format!("0 mismatches but took {elapsed:.2?} (budget {ORACLE_BUDGET:?})"))
        }
    });
    report("oracle equivalence", outcome);
}

#[test]
fn injectivity() {
    let mut outcome = Ok(String::new());
    for p in 1..=MAX_ORDER {
        let side = 1u64 << p;
        let mut seen = vec![false; (side * side) as usize];
        for d in 0..side * side {
            let (x, y) = xy_from_distance(d, p).unwrap();
            if x >= side || y >= side {
                outcome = Err(format!("p={p} d={d} -> ({x},{y}) outside the grid"));
                break;
            }
            let cell = &mut seen[(y * side + x) as usize];
            if *cell {
                outcome = Err(format!("p={p} d={d} revisits ({x},{y})"));
                break;
            }
            *cell = true;
        }
        if outcome.is_err() {
            break;
        }
        if !seen.iter().all(|&v| v) {
            outcome = Err(format!("p={p} leaves cells uncovered"));
            break;
        }
    }
    report(
        "injectivity",
        outcome.map(|_| format!("bijection onto the 2^p x 2^p grid for p=1..={MAX_ORDER}")),
    );
}

#[test]
fn continuity() {
    let outcome = check_exhaustive(|p, d| {
        if d == 0 {
            return Ok(());
        }
        let (x0, y0) = xy_from_distance(d - 1, p).unwrap();
        let (x1, y1) = xy_from_distance(d, p).unwrap();
        let step = x0.abs_diff(x1) + y0.abs_diff(y1);
        if step != 1 {
            return Err(format!("p={p} d={} -> {d}: L1 step {step}", d - 1));
        }
        Ok(())
    });
    report("continuity", outcome.map(|n| format!("{n} points, every consecutive L1 step is 1")));
}

#[test]
fn round_trip() {
    let outcome = check_exhaustive(|p, d| {
        let (x, y) = xy_from_distance(d, p).unwrap();
        let back = distance_from_xy(x, y, p).map_err(|e| e.to_string())?;
        if back != d {
            return Err(format!("p={p} d={d} -> ({x},{y}) -> {back}"));
        }
        Ok(())
    });
    report("round trip", outcome.map(|n| format!("{n} distances recovered exactly")));
}

#[test]
fn image_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("in.fa");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut text = String::new();
    for i in 0..5 {
        text.push_str(&format!(">s{i}\n{}\n", random_peptide(&mut rng, 1, 80, true)));
    }
    fs::write(&fasta, text).unwrap();

    let outcome = (|| {
        for (extra, want) in [(None, 64usize), (Some("7"), 128)] {
            let out_dir = dir.path().join(format!("o{want}"));
            let mut args = vec!["encode", s(&fasta), "-o", s(&out_dir)];
            if let Some(order) = extra {
                args.extend(["--order", order]);
            }
            let out = run(&args);
            if !out.status.success() {
                return Err(format!("encode failed: {}", String::from_utf8_lossy(&out.stderr)));
            }
            for i in 0..5 {
                let side = read_pgm(&out_dir.join(format!("s{i}.pgm"))).map_err(|e| e.to_string())?.side();
                if side != want {
                    return Err(format!("s{i}: {side}x{side}, expected {want}x{want}"));
                }
            }
        }
        Ok("default 64x64, --order 7 128x128".to_string())
    })();
    report("image geometry", outcome);
}

#[test]
fn encoding_conservation_and_determinism() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let records: Vec<SequenceRecord> = (0..FUZZ_SEQUENCES)
        .map(|i| SequenceRecord::new(format!("f{i}"), random_peptide(&mut rng, 1, 300, true)))
        .collect();
    let cfg = EncodingConfig::default();

    let outcome = (|| {
        let mut mapped_total = 0;
        for record in &records {
            let img = encode_sequence(record, &cfg).map_err(|e| format!("{}: {e}", record.id))?;
            let sum = img.total_count();
            if sum != img.meta.mapped as u64 {
                return Err(format!("{}: sum(counts) {sum} != mapped {}", record.id, img.meta.mapped));
            }
            let again = encode_sequence(record, &cfg).unwrap();
            if again != img {
                return Err(format!("{}: re-encoding differs", record.id));
            }
            let bytes = encode_image_bytes(&img, ImageFormat::Pgm).map_err(|e| e.to_string())?;
            if bytes != encode_image_bytes(&again, ImageFormat::Pgm).unwrap() {
                return Err(format!("{}: PGM bytes differ between runs", record.id));
            }
            let decoded = decode_pgm(&bytes)?;
            if decoded != img.intensities {
                return Err(format!("{}: PGM round trip lost data", record.id));
            }
            mapped_total += img.meta.mapped;
        }
        Ok(format!(
            "{FUZZ_SEQUENCES} sequences, {mapped_total} symbols mapped, sums match, re-encode and PGM round trip exact"
        ))
    })();
    report("encoding conservation and determinism", outcome);
}

fn corpus_path(var: &str, file: &str) -> PathBuf {
    std::env::var_os(var)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file))
}

#[test]
fn dataset_ingest_corpus_counts() {
    let outcome = (|| {
        let mut found = Vec::new();
        for (var, file, want) in [
            ("HILBERTSEQ_BREAST_CSV", "ACPs_Breast_cancer.csv", BREAST_RECORDS),
            ("HILBERTSEQ_LUNG_CSV", "ACPs_Lung_cancer.csv", LUNG_RECORDS),
        ] {
            let path = corpus_path(var, file);
            let f = fs::File::open(&path)
                .map_err(|e| format!("corpus not available at {} ({e}); set {var}", path.display()))?;
            let records = parse_labeled_csv(BufReader::new(f), &CsvColumns::new("sequence", "class"))
                .map_err(|e| format!("{}: {e}", path.display()))?;
            if records.len() != want {
                return Err(format!("{file}: {} records, expected {want}", records.len()));
            }
            found.push(format!("{file} {want}"));
        }
        Ok(found.join(", "))
    })();
    report("dataset ingest (corpus counts)", outcome);
}

#[test]
fn dataset_ingest_split_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    // exact fractions: test 20%, validation 10% of the rest
    let frozen = [(BREAST_RECORDS, (683, 76, 190)), (LUNG_RECORDS, (649, 72, 180))];

    let outcome = (|| {
        let mut notes = Vec::new();
        for (n, (train, val, test)) in frozen {
            let csv = dir.path().join(format!("corpus{n}.csv"));
            synthetic_corpus(&csv, n, n as u64);
            let mut manifests = Vec::new();
            for run_id in 0..2 {
                let out_dir = dir.path().join(format!("out{n}_{run_id}"));
                let out = run(&["dataset", s(&csv), "-o", s(&out_dir), "--seed", "1234"]);
                if !out.status.success() {
                    return Err(format!("dataset run failed: {}", String::from_utf8_lossy(&out.stderr)));
                }
                let manifest = DatasetManifest::read(&out_dir.join("manifest.tsv")).map_err(|e| e.to_string())?;
                manifest.verify_exports(&out_dir, 64).map_err(|e| e.to_string())?;
                manifests.push(fs::read(out_dir.join("manifest.tsv")).unwrap());

                let got = manifest.sizes();
                let off = |a: usize, b: usize| a.abs_diff(b) > SPLIT_SLACK;
                if got.total() != n || off(got.train, train) || off(got.val, val) || off(got.test, test) {
                    return Err(format!(
                        "{n} rows split {}/{}/{}, expected {train}/{val}/{test} +-{SPLIT_SLACK}",
                        got.train, got.val, got.test
                    ));
                }
                let ids: HashSet<&str> = manifest.rows.iter().map(|r| r.sequence_id.as_str()).collect();
                if ids.len() != n {
                    return Err(format!("{n} rows but {} distinct ids", ids.len()));
                }
            }
            if manifests[0] != manifests[1] {
                return Err(format!("{n} rows: manifests differ between runs with the same seed"));
            }
            let exact = SplitSizes::for_len(n, &SplitConfig::default());
            notes.push(format!("{n} -> {}/{}/{}", exact.train, exact.val, exact.test));
        }
        Ok(format!("{}; same seed gives identical manifests", notes.join(", ")))
    })();
    report("dataset ingest (split and determinism)", outcome);
}

#[test]
fn throughput_sanity() {
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    let records: Vec<SequenceRecord> = (0..LUNG_RECORDS)
        .map(|i| SequenceRecord::new(format!("t{i}"), random_peptide(&mut rng, 5, 50, false)))
        .collect();
    let cfg = EncodingConfig::default();
    let start = Instant::now();
    let mut lit = 0;
    for record in &records {
        lit += encode_sequence(record, &cfg).unwrap().lit_cells();
    }
    let elapsed = start.elapsed();
    // recorded, not gated
    let verdict = if elapsed < THROUGHPUT_BUDGET { "PASS" } else { "FAIL" };
    println!(
        "[{verdict}] throughput sanity: {LUNG_RECORDS} sequences at p=6 in {elapsed:.2?} single-threaded \
         (budget {THROUGHPUT_BUDGET:?}, not gated; {lit} lit cells)"
    );
}

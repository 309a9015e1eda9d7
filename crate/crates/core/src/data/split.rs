use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DataError;
use crate::record::SequenceRecord;

/// Minimum dataset size accepted by [`split_dataset`].
pub const MIN_RECORDS: usize = 10;
/// Smallest class size for which stratification is attempted.
pub const MIN_STRATUM: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            _ => Err(format!("unknown split {s:?}")),
        }
    }
}

/// Test holds out `test_fraction` of everything; validation takes
/// `val_fraction` of what remains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    pub test_fraction: f64,
    pub val_fraction: f64,
    pub stratify: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self { test_fraction: 0.2, val_fraction: 0.1, stratify: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SplitSizes {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

impl SplitSizes {
    pub fn for_len(n: usize, config: &SplitConfig) -> Self {
        let test = ((n as f64) * config.test_fraction).round() as usize;
        let test = test.min(n);
        let rest = n - test;
        let val = ((rest as f64) * config.val_fraction).round() as usize;
        let val = val.min(rest);
        Self { train: rest - val, val, test }
    }

    pub fn total(&self) -> usize {
        self.train + self.val + self.test
    }
}

/// Split assignment for each record, aligned with the input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub seed: u64,
    pub stratified: bool,
    pub assignments: Vec<Split>,
}

impl DatasetSplit {
    pub fn sizes(&self) -> SplitSizes {
        let mut s = SplitSizes::default();
        for a in &self.assignments {
            match a {
                Split::Train => s.train += 1,
                Split::Val => s.val += 1,
                Split::Test => s.test += 1,
            }
        }
        s
    }
}

/// Shares `total` across buckets proportionally to `weights` by largest
/// remainder; ties go to the earlier bucket. The result sums to `total`.
fn apportion(total: usize, weights: &[usize]) -> Vec<usize> {
    let sum: usize = weights.iter().sum();
    if sum == 0 {
        return vec![0; weights.len()];
    }
    let mut shares: Vec<usize> = Vec::with_capacity(weights.len());
    let mut remainders: Vec<(usize, usize)> = Vec::with_capacity(weights.len());
    for (i, &w) in weights.iter().enumerate() {
        let numer = total * w;
        shares.push(numer / sum);
        remainders.push((numer % sum, i));
    }
    let mut left = total - shares.iter().sum::<usize>();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in &remainders {
        if left == 0 {
            break;
        }
        if shares[i] < weights[i] {
            shares[i] += 1;
            left -= 1;
        }
    }
    shares
}

/// Deterministically partitions records into train/val/test under `seed`.
///
/// Stratifies by label when requested and every class has at least
/// [`MIN_STRATUM`] members; otherwise falls back to a plain shuffle and logs
/// a warning.
pub fn split_dataset(records: &[SequenceRecord], seed: u64, config: &SplitConfig) -> Result<DatasetSplit, DataError> {
    let n = records.len();
    if n < MIN_RECORDS {
        return Err(DataError::Split(format!("need at least {MIN_RECORDS} records, got {n}")));
    }
    let sizes = SplitSizes::for_len(n, config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![Split::Train; n];

    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    let mut unlabeled = 0usize;
    for (i, r) in records.iter().enumerate() {
        match &r.label {
            Some(l) => classes.entry(l.as_str()).or_default().push(i),
            None => unlabeled += 1,
        }
    }

    let stratify = config.stratify
        && unlabeled == 0
        && classes.values().all(|members| members.len() >= MIN_STRATUM);
    if config.stratify && !stratify {
        log::warn!(
            "not stratifying: {} unlabeled record(s), smallest class has {} member(s) (need {MIN_STRATUM})",
            unlabeled,
            classes.values().map(Vec::len).min().unwrap_or(0)
        );
    }

    if stratify {
        let class_sizes: Vec<usize> = classes.values().map(Vec::len).collect();
        let test = apportion(sizes.test, &class_sizes);
        let remaining: Vec<usize> = class_sizes.iter().zip(&test).map(|(s, t)| s - t).collect();
        let val = apportion(sizes.val, &remaining);
        for (k, members) in classes.values_mut().enumerate() {
            members.shuffle(&mut rng);
            assign(members, test[k], val[k], &mut assignments);
        }
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        assign(&order, sizes.test, sizes.val, &mut assignments);
    }

    Ok(DatasetSplit { seed, stratified: stratify, assignments })
}

fn assign(shuffled: &[usize], test: usize, val: usize, out: &mut [Split]) {
    for (pos, &i) in shuffled.iter().enumerate() {
        out[i] = if pos < test {
            Split::Test
        } else if pos < test + val {
            Split::Val
        } else {
            Split::Train
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(n: usize, classes: usize) -> Vec<SequenceRecord> {
        (0..n)
            .map(|i| SequenceRecord::new(i.to_string(), "ACD").with_label(format!("c{}", i % classes)))
            .collect()
    }

    #[test]
    fn sizes_arithmetic() {
        let cfg = SplitConfig::default();
        let s = |n| {
            let z = SplitSizes::for_len(n, &cfg);
            (z.train, z.val, z.test)
        };
        assert_eq!(s(100), (72, 8, 20));
        assert_eq!(s(901), (649, 72, 180));
        assert_eq!(s(20), (14, 2, 4));
        assert_eq!(s(949), (683, 76, 190));
    }

    #[test]
    fn apportion_sums_exactly() {
        assert_eq!(apportion(20, &[50, 30, 20]), vec![10, 6, 4]);
        assert_eq!(apportion(3, &[1, 1, 1, 1]), vec![1, 1, 1, 0]);
        assert_eq!(apportion(7, &[5, 5]), vec![4, 3]);
        assert_eq!(apportion(0, &[0, 0]), vec![0, 0]);
    }

    #[test]
    fn stratified_split_is_deterministic() {
        let recs = labeled(100, 4);
        let a = split_dataset(&recs, 7, &SplitConfig::default()).unwrap();
        let b = split_dataset(&recs, 7, &SplitConfig::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.stratified);
        let s = a.sizes();
        assert_eq!((s.train, s.val, s.test), (72, 8, 20));
        let c = split_dataset(&recs, 8, &SplitConfig::default()).unwrap();
        assert_ne!(a.assignments, c.assignments);
    }

    #[test]
    fn stratification_balances_classes() {
        let recs = labeled(100, 4);
        let split = split_dataset(&recs, 1, &SplitConfig::default()).unwrap();
        for class in 0..4 {
            let test = recs
                .iter()
                .zip(&split.assignments)
                .filter(|(r, s)| r.label.as_deref() == Some(&format!("c{class}")) && **s == Split::Test)
                .count();
            assert_eq!(test, 5);
        }
    }

    #[test]
    fn small_class_falls_back() {
        let mut recs = labeled(30, 2);
        recs[0].label = Some("rare".into());
        let split = split_dataset(&recs, 3, &SplitConfig::default()).unwrap();
        assert!(!split.stratified);
        let s = split.sizes();
        assert_eq!((s.train, s.val, s.test), (22, 2, 6));
    }

    #[test]
    fn too_few_records() {
        assert!(matches!(
            split_dataset(&labeled(9, 2), 0, &SplitConfig::default()),
            Err(DataError::Split(_))
        ));
    }
}

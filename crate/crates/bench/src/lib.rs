//! Shared inputs for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hilbertseq::alphabet::PROTEIN_20;
use hilbertseq::SequenceRecord;

/// Peptides of 5 to 50 residues, reproducible for a given seed.
pub fn peptide_corpus(count: usize, seed: u64) -> Vec<SequenceRecord> {
    let symbols: Vec<char> = PROTEIN_20.chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let len = rng.random_range(5..=50);
            let residues: String = (0..len).map(|_| symbols[rng.random_range(0..symbols.len())]).collect();
            SequenceRecord::new(format!("b{i}"), residues)
        })
        .collect()
}

#![allow(dead_code)]

pub mod groups;

use defzero_core::{Letter, Presentation, Word};
use proptest::prelude::*;

pub struct DatasetRecord {
    pub id: u32,
    pub provenance: String,
    pub presentation: Presentation,
}

/// The 78 records of the bundled dataset.
pub fn dataset() -> Vec<DatasetRecord> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/groups2048.txt");
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            DatasetRecord {
                id: f[0].parse().unwrap(),
                provenance: f[1].to_string(),
                presentation: Presentation::parse(f[2]).unwrap(),
            }
        })
        .collect()
}

pub fn letters(num_gens: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (0..num_gens, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)),
        0..=max_len,
    )
}

pub fn word(num_gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    letters(num_gens, max_len).prop_map(Word::from_letters)
}

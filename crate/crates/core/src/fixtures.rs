//! Bundled shuffle documents.

use crate::shuffle::{Shuffle, ShuffleError};

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        /// `(file name, contents)` for every bundled fixture.
        pub const FIXTURES: &[(&str, &str)] = &[
            $((concat!($name, ".json"), include_str!(concat!("../fixtures/", $name, ".json")))),*
        ];
    };
}

bundle!(
    "identity",
    "evens_odds",
    "evens_odds_block",
    "three_ladder",
    "sharkovskii",
    "sharkovskii_reversed",
    "sharkovskii_positive",
    "prime_powers",
    "swap_adjacent",
    "p_partition",
    "z_partition",
    "ladder_bench_snake",
    "omega_ladders",
);

/// Loads a fixture by name, with or without the `.json` suffix.
pub fn fixture(name: &str) -> Option<Result<Shuffle, ShuffleError>> {
    let file = if name.ends_with(".json") { name.to_string() } else { format!("{name}.json") };
    FIXTURES.iter().find(|(f, _)| *f == file).map(|(_, text)| Shuffle::from_json(text))
}

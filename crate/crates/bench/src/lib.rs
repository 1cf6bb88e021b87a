//! Fixtures shared by the benchmarks.

use urcorner::{parse_ring_spec, BandOperator, FiniteRing, Limits};

pub fn ring(spec: &str) -> FiniteRing {
    parse_ring_spec(spec).expect("fixture spec parses").instantiate(&Limits::default()).expect("fixture fits the caps")
}

/// A deterministic banded operator with `width` diagonals and a few
/// exceptional columns.
pub fn band(seed: u64, width: i64) -> BandOperator {
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state >> 33
    };
    let mut diagonals = Vec::new();
    for d in -width..=width {
        if next() % 2 == 0 {
            diagonals.push((d, next() % 16));
        }
    }
    let exceptions: Vec<(u64, Vec<u64>)> = (0..4).map(|i| (i * 3, (0..3).map(|_| next() % 24).collect())).collect();
    BandOperator::new(diagonals, exceptions)
}

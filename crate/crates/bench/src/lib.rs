//! Shared fixtures for the benchmarks.

use acceptcert_core::{CycNum, ExactMatrix};

/// A dense `n × n` matrix over `Q(ζ₈)` with small entries.
pub fn dense_matrix(n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let k = (r * 3 + c * 5) as i64;
            let v = &CycNum::root_of_unity(8, k) + &CycNum::from_i64((r as i64 - c as i64) % 3);
            m.set(r, c, v);
        }
    }
    m
}

/// Mixed-conductor operands for field arithmetic.
pub fn operands() -> Vec<CycNum> {
    [3u32, 4, 5, 8, 12, 20]
        .iter()
        .enumerate()
        .map(|(i, &n)| &CycNum::root_of_unity(n, 1 + i as i64) + &CycNum::frac(i as i64 + 1, 3))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(dense_matrix(4).rows(), 4);
        assert!(operands().iter().all(|x| !x.is_zero()));
    }
}

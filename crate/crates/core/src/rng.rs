//! Seeded randomness with a documented, portable algorithm.
//!
//! All sampling that affects experiment outputs (sampling nodes, synthetic point
//! clouds, generated labels) draws from ChaCha8 (`rand_chacha::ChaCha8Rng`,
//! seeded through `SeedableRng::seed_from_u64`) and converts raw 64-bit words
//! with the two explicit rules below, so selections can be reproduced outside
//! this crate:
//!
//! * uniform `[0, 1)`: `(word >> 11) · 2⁻⁵³`
//! * uniform integer below `b`: reject words `≥ 2⁶⁴ − (2⁶⁴ mod b)`, then `word mod b`
//!
//! Node subsets are drawn by a partial Fisher–Yates shuffle of `0..n`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type ExperimentRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ExperimentRng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform_below(rng: &mut ExperimentRng, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
    loop {
        let w = rng.next_u64();
        if w <= zone {
            return w % bound;
        }
    }
}

/// Standard normal deviate by Box–Muller (the cosine branch only).
pub fn normal(rng: &mut ExperimentRng) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// `count` distinct nodes out of `0..n`, in draw order.
pub fn sample_nodes(n: usize, count: usize, seed: u64) -> Result<Vec<usize>> {
    if count == 0 || count > n {
        return Err(Error::InvalidInput(format!(
            "cannot sample {count} distinct nodes out of {n}"
        )));
    }
    let mut rng = seeded(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = i + uniform_below(&mut rng, (n - i) as u64) as usize;
        perm.swap(i, j);
    }
    perm.truncate(count);
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_distinct() {
        let a = sample_nodes(900, 20, 42).unwrap();
        let b = sample_nodes(900, 20, 42).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 20);
        assert!(a.iter().all(|&i| i < 900));
        assert_ne!(a, sample_nodes(900, 20, 43).unwrap());
    }

    #[test]
    fn full_sample_is_permutation() {
        let mut a = sample_nodes(7, 7, 1).unwrap();
        a.sort_unstable();
        assert_eq!(a, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn bad_counts() {
        assert!(sample_nodes(3, 4, 0).is_err());
        assert!(sample_nodes(3, 0, 0).is_err());
    }

    #[test]
    fn uniform_range() {
        let mut rng = seeded(9);
        for _ in 0..1000 {
            let u = uniform(&mut rng);
            assert!((0.0..1.0).contains(&u));
            assert!(uniform_below(&mut rng, 3) < 3);
        }
    }
}

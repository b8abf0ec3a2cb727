//! Reproducible counter-based random streams: every (master seed, trial,
//! stream index) triple keys an independent ChaCha8 stream, so parallel trials
//! are independent and byte-identical across runs and worker counts.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Derive the stream for (seed, trial, stream).
pub fn stream_rng(seed: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&stream.to_le_bytes());
    // Domain separation constant so an all-zero triple is not the zero key.
    key[24..32].copy_from_slice(&0x9E37_79B9_7F4A_7C15u64.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Unbiased integer in [0, bound) by rejection.
pub fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

/// Uniform random permutation of [n] by Fisher–Yates over the keyed stream.
pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = uniform_below(rng, (i + 1) as u64) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Uniform random permutation of [n] conditioned to fix the point 0.
pub fn random_permutation_fixing_zero(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for i in (2..n).rev() {
        // Shuffle indices 1..n only.
        let j = 1 + uniform_below(rng, i as u64) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Standard uniform f64 in [0, 1).
pub fn uniform_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let a: Vec<u32> = random_permutation(&mut stream_rng(7, 3, 1), 50);
        let b: Vec<u32> = random_permutation(&mut stream_rng(7, 3, 1), 50);
        let c: Vec<u32> = random_permutation(&mut stream_rng(7, 4, 1), 50);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn permutations_are_bijections() {
        for trial in 0..20 {
            let p = random_permutation(&mut stream_rng(1, trial, 0), 31);
            let mut seen = [false; 31];
            for &v in &p {
                assert!(!seen[v as usize]);
                seen[v as usize] = true;
            }
        }
    }

    #[test]
    fn conditioned_permutations_fix_zero() {
        for trial in 0..20 {
            let p = random_permutation_fixing_zero(&mut stream_rng(5, trial, 2), 17);
            assert_eq!(p[0], 0);
            let mut seen = [false; 17];
            for &v in &p {
                assert!(!seen[v as usize]);
                seen[v as usize] = true;
            }
        }
    }

    #[test]
    fn fixed_point_count_poisson_mean() {
        // Uniform permutations average one fixed point.
        let n = 40usize;
        let trials = 10_000u64;
        let mut total = 0u64;
        for trial in 0..trials {
            let p = random_permutation(&mut stream_rng(42, trial, 0), n);
            total += p.iter().enumerate().filter(|&(i, &v)| i as u32 == v).count() as u64;
        }
        let mean = total as f64 / trials as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean fixed points = {mean}");
    }
}

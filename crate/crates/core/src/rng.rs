//! Reproducible random streams.
//!
//! An [`RngStream`] is a `(seed, stream_id)` pair. The generator behind it is
//! ChaCha8 keyed by `seed` with `stream_id` selecting the ChaCha stream, so
//! equal pairs replay the same variates and distinct stream ids never overlap.
//! Child streams (per bootstrap replicate, per Monte Carlo cell) are derived by
//! hashing, never by drawing from the parent, so results do not depend on the
//! order in which work is scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::special::normal_quantile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl RngStream {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Child stream number `index`. Children of different parents are
    /// distinct because the parent pair is folded into the child's seed.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream {
            seed: splitmix64(self.seed ^ splitmix64(self.stream_id ^ 0x5bd1_e995)),
            stream_id: index,
        }
    }

    /// Child stream named by a string label.
    pub fn keyed(&self, label: &str) -> RngStream {
        self.substream(fnv1a(label.as_bytes()))
    }

    pub fn generator(&self) -> StreamRng {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(self.stream_id);
        StreamRng { inner }
    }
}

#[derive(Clone, Debug)]
pub struct StreamRng {
    inner: ChaCha8Rng,
}

impl StreamRng {
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1), on a 2⁻⁵³ lattice.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    pub fn standard_normal(&mut self) -> f64 {
        normal_quantile(self.uniform())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn draws(s: RngStream, n: usize) -> Vec<u64> {
        let mut g = s.generator();
        (0..n).map(|_| g.next_u64()).collect()
    }

    #[test]
    fn same_pair_same_sequence() {
        let s = RngStream::new(42, 7);
        assert_eq!(draws(s, 64), draws(s, 64));
    }

    #[test]
    fn streams_and_children_differ() {
        let s = RngStream::new(42, 7);
        assert_ne!(draws(s, 8), draws(RngStream::new(42, 8), 8));
        assert_ne!(draws(s.substream(0), 8), draws(s.substream(1), 8));
        assert_ne!(
            draws(RngStream::new(42, 7).substream(3), 8),
            draws(RngStream::new(42, 8).substream(3), 8)
        );
        assert_ne!(draws(s.keyed("Exp(1)"), 8), draws(s.keyed("W(0.5)"), 8));
    }

    #[test]
    fn uniform_is_open_and_centred() {
        let mut g = RngStream::new(1, 0).generator();
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let u = g.uniform();
            assert!(u > 0.0 && u < 1.0);
            sum += u;
        }
        let mean = sum / n as f64;
        // 5 standard errors of a U(0,1) mean
        assert!((mean - 0.5).abs() < 5.0 * (1.0 / 12.0f64).sqrt() / (n as f64).sqrt());
    }
}

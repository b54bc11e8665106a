//! Deterministic derivation of per-path random streams.
//!
//! A substream seed is `mix(mix(master ^ fnv1a(tag)) ^ index)`, where `mix`
//! is the SplitMix64 finalizer and `fnv1a` the 64-bit FNV-1a hash of the
//! component tag. The mapping is fixed and part of the output format: the
//! same `(master, tag, index)` always yields the same stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const LBETA_TAG: &str = "lbeta";
pub const FBM_TAG: &str = "fbm";

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn substream_seed(master: u64, tag: &str, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ fnv1a(tag.as_bytes())) ^ index)
}

pub fn stream_rng(master: u64, tag: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream_seed(master, tag, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn streams_are_stable_and_distinct() {
        let a: u64 = stream_rng(7, LBETA_TAG, 3).random();
        let b: u64 = stream_rng(7, LBETA_TAG, 3).random();
        assert_eq!(a, b);
        let c: u64 = stream_rng(7, FBM_TAG, 3).random();
        let d: u64 = stream_rng(7, LBETA_TAG, 4).random();
        let e: u64 = stream_rng(8, LBETA_TAG, 3).random();
        assert!(a != c && a != d && a != e);
    }

    #[test]
    fn seed_is_pinned() {
        // guards against accidental changes to the published derivation
        assert_eq!(substream_seed(0, "", 0), splitmix64(splitmix64(FNV_OFFSET)));
    }
}

//! Seedable, splittable random streams.
//!
//! Every stochastic routine derives its generator from `(seed, domain, index)`
//! so that parallel execution is schedule independent: stream `i` produces the
//! same bytes no matter which thread runs it.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain separators, one per stochastic subsystem.
pub mod domain {
    pub const SAMPLE: u64 = 0x5a;
    pub const LLOYD: u64 = 0x11;
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for stream `index` of the given domain.
pub fn stream(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ mix(domain)));
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = stream(7, domain::SAMPLE, 3);
        let mut b = stream(7, domain::SAMPLE, 3);
        let mut c = stream(7, domain::SAMPLE, 4);
        let xs: Vec<u64> = (0..4).map(|_| a.gen()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.gen()).collect();
        let zs: Vec<u64> = (0..4).map(|_| c.gen()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }
}

//! Seedable, platform-independent random number generation.
//!
//! Every stochastic step in this crate (measurement sampling, instance
//! generation, random bases) draws from [`SplitMix64`] so that results are
//! reproducible bit-for-bit from a 64-bit seed on any platform. The
//! generator is Steele, Lea and Flood's SplitMix64: state advances by the
//! golden-ratio increment `0x9E3779B97F4A7C15` and each output is finalized
//! with the murmur-style mixers `0xBF58476D1CE4E5B9` / `0x94D049BB133111EB`.

/// SplitMix64 generator. Cheap to construct, `Copy`-free by design so a
/// stream is consumed exactly once.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, bound)`. Rejection-sampled, so unbiased.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform f64 in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / ((1u64 << 53) as f64))
    }

    /// The low `len` bits of the next output, as a packed word (`len` <= 32).
    pub fn next_bits(&mut self, len: usize) -> u32 {
        debug_assert!(len <= 32);
        if len == 32 {
            self.next_u64() as u32
        } else {
            (self.next_u64() & ((1u64 << len) - 1)) as u32
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

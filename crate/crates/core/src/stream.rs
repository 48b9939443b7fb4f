//! Deterministic random streams.
//!
//! Every stochastic entry point takes a `Seed`. Work items (bootstrap
//! replicates, bench replicates) draw from `seed.child(index)` so results are
//! identical regardless of thread count or execution order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Root of a reproducible stream tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed(pub u64);

/// splitmix64 finalizer; decorrelates sequential indices.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl Seed {
    /// Seed for the `index`-th independent child stream.
    pub fn child(self, index: u64) -> Seed {
        Seed(mix(self.0 ^ mix(index.wrapping_add(1))))
    }

    /// Fresh generator for this seed.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

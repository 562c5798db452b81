//! Seeded, splittable random streams.
//!
//! Every experiment is driven by one master seed. Independent work items
//! (trials, disorder samples, chains) get their own ChaCha stream selected
//! by index, so results do not depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// RNG for the `index`-th independent stream under `master`.
pub fn stream(master: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Two-level split: stream `outer` of `master`, sub-stream `inner`.
pub fn substream(master: u64, outer: u64, inner: u64) -> StreamRng {
    let mixed = splitmix64(master ^ splitmix64(outer.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    stream(mixed, inner)
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

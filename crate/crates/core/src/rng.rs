//! Deterministic random sub-streams.
//!
//! Every consumer of randomness gets its own ChaCha stream addressed by
//! `(seed, purpose, index)`. Streams never overlap, so results are identical
//! whatever the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a sub-stream is used for. Distinct purposes never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Channel = 1,
    ArrivalAlice = 2,
    ArrivalJimmy = 3,
    RegimeDraws = 4,
    Generic = 5,
}

pub fn substream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    assert!(index < 1 << 56, "sub-stream index out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 56) | index);
    rng
}

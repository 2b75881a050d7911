//! Counter-addressed random streams.
//!
//! Every draw is a pure function of `(seed, stream, index)`: the triple is
//! written directly into a ChaCha8 key, so a trial's randomness does not
//! depend on which worker runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream handle passed to samplers and channel uses.
pub type StreamRng = ChaCha8Rng;

/// Opens the stream identified by `(seed, stream, index)`.
pub fn stream_rng(seed: u64, stream: u64, index: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    // distinguishes this keying scheme from plain seed_from_u64 users
    key[24..32].copy_from_slice(b"twcjscc1");
    ChaCha8Rng::from_seed(key)
}

//! Reproducible, splittable random number streams.
//!
//! A stream is identified by a `(seed, stream_id)` pair and produces the
//! same draw sequence on every platform and with any number of worker
//! threads. Parallel code derives one stream per task from a master seed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, stream_id: 0 }
    }

    pub fn substream(self, stream_id: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream_id,
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

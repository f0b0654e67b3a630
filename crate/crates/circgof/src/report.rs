//! Run manifests: a small provenance record emitted next to every output
//! artifact so results can be traced back to the exact invocation.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// The subcommand and arguments, as invoked.
    pub command: Vec<String>,
    /// SHA-256 over the serialized effective configuration.
    pub config_sha256: String,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_time_ms: u128,
}

impl RunManifest {
    pub fn new<C: Serialize>(
        command: Vec<String>,
        config: &C,
        seed: Option<u64>,
        wall_time_ms: u128,
    ) -> Self {
        let payload = serde_json::to_vec(config).expect("manifest config serializes");
        let mut hasher = Sha256::new();
        hasher.update(&payload);
        RunManifest {
            command,
            config_sha256: format!("{:x}", hasher.finalize()),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

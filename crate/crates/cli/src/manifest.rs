use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one run. Everything except `wall_ms` is a function of the
/// inputs, options and seed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<InputDigest>,
    pub options: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub wall_ms: BTreeMap<String, u64>,
    pub result_sha256: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub renames: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> RunManifest {
        RunManifest { subcommand: subcommand.into(), ..RunManifest::default() }
    }

    pub fn input(&mut self, path: &str, content: &str) {
        self.inputs.push(InputDigest { path: path.into(), sha256: sha256_hex(content.as_bytes()) });
    }

    pub fn option(&mut self, k: &str, v: impl ToString) {
        self.options.insert(k.into(), v.to_string());
    }

    pub fn result(&mut self, content: &str) {
        self.result_sha256 = sha256_hex(content.as_bytes());
    }

    /// The manifest with timings cleared, for reproducibility comparisons.
    pub fn without_times(&self) -> RunManifest {
        RunManifest { wall_ms: BTreeMap::new(), ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

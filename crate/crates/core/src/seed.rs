//! Stable hashing for identifiers and per-run seeds.
//!
//! Uses SHA-256 so values do not change across Rust releases or platforms.

use sha2::{Digest, Sha256};

fn digest(parts: &[&[u8]]) -> [u8; 32] {
    let mut h = Sha256::new();
    for p in parts {
        // length prefix keeps ("ab", "c") and ("a", "bc") apart
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().into()
}

/// 64-bit seed from an ordered list of byte strings.
pub fn derive_seed(parts: &[&[u8]]) -> u64 {
    let d = digest(parts);
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

/// Seed for one training run.
pub fn run_seed(spec_id: &str, run_index: usize, master_seed: u64) -> u64 {
    derive_seed(&[
        b"run",
        spec_id.as_bytes(),
        &(run_index as u64).to_le_bytes(),
        &master_seed.to_le_bytes(),
    ])
}

/// 16 hex characters identifying `bytes`.
pub fn short_hash(bytes: &[u8]) -> String {
    digest(&[bytes])[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_and_distinct() {
        assert_eq!(run_seed("abc", 0, 1), run_seed("abc", 0, 1));
        assert_ne!(run_seed("abc", 0, 1), run_seed("abc", 1, 1));
        assert_ne!(run_seed("abc", 0, 1), run_seed("abc", 0, 2));
        assert_ne!(derive_seed(&[b"ab", b"c"]), derive_seed(&[b"a", b"bc"]));
        assert_eq!(short_hash(b"x").len(), 16);
    }
}

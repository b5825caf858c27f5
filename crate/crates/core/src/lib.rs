//! Cycle-approximate, bit-exact simulator of a RISC-V core extended with
//! three unified cryptographic engines (SM3/SHA-2, AES/Haraka, Keccak).
//!
//! Layers, bottom up: [`primitives`] (golden references), [`isa`],
//! [`memsys`], [`units`], [`cpu`] (the five-stage pipeline) and
//! [`scheduler`] (program generation and overlap analysis).

pub mod config;
pub mod cpu;
pub mod isa;
pub mod memsys;
pub mod primitives;
pub mod scheduler;
pub mod units;

pub use primitives::sha2::{Sha2, Sha2Word};

/// SHA-256 compression and hashing over 32-bit words.
pub type Sha256 = Sha2<u32>;
/// SHA-512 compression and hashing over 64-bit words.
pub type Sha512 = Sha2<u64>;

/// The universal datapath word.
pub type Word = u64;

/// Pack bytes little-endian into 64-bit words, zero-padding the last word.
pub fn bytes_to_words(bytes: &[u8]) -> Vec<Word> {
    bytes
        .chunks(8)
        .map(|c| {
            let mut b = [0u8; 8];
            b[..c.len()].copy_from_slice(c);
            u64::from_le_bytes(b)
        })
        .collect()
}

/// Inverse of [`bytes_to_words`], truncated to `len` bytes.
pub fn words_to_bytes(words: &[Word], len: usize) -> Vec<u8> {
    let mut out: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    out.truncate(len);
    out
}

//! Timing-free golden-reference implementations of the nine primitives.
//!
//! Every hardware-model result in the simulator is checked against these.

pub mod aes;
pub mod haraka;
pub mod keccak;
pub mod sha2;
pub mod sm3;
mod types;

use thiserror::Error;

pub use haraka::{haraka, haraka_rc_derive, HarakaRcSet};
pub use types::{
    AesBlock, AesDirection, Algorithm, ChainState, Digest, HarakaMode, MdMode, SpongeMode,
};

use crate::{Sha256, Sha512};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimitiveError {
    #[error("{what}: expected {expected} bytes, got {actual}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("Haraka seed key and public key must both be non-empty")]
    InvalidSeed,
    #[error("chaining state does not match mode {0}")]
    StateMismatch(Algorithm),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
}

/// Standard initial chaining value for `mode`.
pub fn md_initial_state(mode: MdMode) -> ChainState {
    match mode {
        MdMode::Sha256 => ChainState::Words32(<u32 as sha2::Sha2Word>::initial_state()),
        MdMode::Sha512 => ChainState::Words64(<u64 as sha2::Sha2Word>::initial_state()),
        MdMode::Sm3 => ChainState::Words32(sm3::IV),
    }
}

/// Padded message for `mode`, a whole number of blocks.
pub fn md_pad(mode: MdMode, message: &[u8]) -> Vec<u8> {
    match mode {
        MdMode::Sha256 => Sha256::pad(message),
        MdMode::Sha512 => Sha512::pad(message),
        MdMode::Sm3 => sm3::pad(message),
    }
}

/// The per-round constant table the engine reads from its constant region,
/// serialised big-endian word by word.
pub fn md_constant_bytes(mode: MdMode) -> Vec<u8> {
    match mode {
        MdMode::Sha256 => <u32 as sha2::Sha2Word>::round_constants()
            .iter()
            .flat_map(|k| k.to_be_bytes())
            .collect(),
        MdMode::Sha512 => <u64 as sha2::Sha2Word>::round_constants()
            .iter()
            .flat_map(|k| k.to_be_bytes())
            .collect(),
        MdMode::Sm3 => sm3::round_constants().iter().flat_map(|k| k.to_be_bytes()).collect(),
    }
}

pub fn hash_md(mode: MdMode, message: &[u8]) -> Digest {
    let bytes = match mode {
        MdMode::Sha256 => Sha256::digest(message),
        MdMode::Sha512 => Sha512::digest(message),
        MdMode::Sm3 => sm3::digest(message),
    };
    Digest::new(bytes)
}

fn check_block(mode: MdMode, block: &[u8]) -> Result<(), PrimitiveError> {
    if block.len() != mode.block_bytes() {
        return Err(PrimitiveError::SizeMismatch {
            what: "compression block",
            expected: mode.block_bytes(),
            actual: block.len(),
        });
    }
    Ok(())
}

pub fn md_compress(
    mode: MdMode,
    state: &ChainState,
    block: &[u8],
) -> Result<ChainState, PrimitiveError> {
    check_block(mode, block)?;
    match (mode, state) {
        (MdMode::Sha256, ChainState::Words32(s)) => {
            let mut s = *s;
            Sha256::compress(&mut s, block);
            Ok(ChainState::Words32(s))
        }
        (MdMode::Sm3, ChainState::Words32(s)) => {
            let mut s = *s;
            sm3::compress(&mut s, block);
            Ok(ChainState::Words32(s))
        }
        (MdMode::Sha512, ChainState::Words64(s)) => {
            let mut s = *s;
            Sha512::compress(&mut s, block);
            Ok(ChainState::Words64(s))
        }
        _ => Err(PrimitiveError::StateMismatch(mode.algorithm())),
    }
}

/// Compression with the constant table supplied as big-endian bytes, which is
/// how the MD engine consumes its buffer-resident constants.
pub fn md_compress_with_constants(
    mode: MdMode,
    state: &ChainState,
    block: &[u8],
    constants: &[u8],
) -> Result<ChainState, PrimitiveError> {
    check_block(mode, block)?;
    let need = mode.rounds() * if mode == MdMode::Sha512 { 8 } else { 4 };
    if constants.len() < need {
        return Err(PrimitiveError::SizeMismatch {
            what: "round-constant table",
            expected: need,
            actual: constants.len(),
        });
    }
    match (mode, state) {
        (MdMode::Sha256 | MdMode::Sm3, ChainState::Words32(s)) => {
            let k: Vec<u32> = constants[..need]
                .chunks_exact(4)
                .map(|c| u32::from_be_bytes(c.try_into().unwrap()))
                .collect();
            let mut s = *s;
            if mode == MdMode::Sha256 {
                Sha256::compress_with(&mut s, block, &k);
            } else {
                sm3::compress_with(&mut s, block, &k);
            }
            Ok(ChainState::Words32(s))
        }
        (MdMode::Sha512, ChainState::Words64(s)) => {
            let k: Vec<u64> = constants[..need]
                .chunks_exact(8)
                .map(|c| u64::from_be_bytes(c.try_into().unwrap()))
                .collect();
            let mut s = *s;
            Sha512::compress_with(&mut s, block, &k);
            Ok(ChainState::Words64(s))
        }
        _ => Err(PrimitiveError::StateMismatch(mode.algorithm())),
    }
}

/// Parse a big-endian serialised chaining state for `mode`.
pub fn md_state_from_bytes(mode: MdMode, bytes: &[u8]) -> Result<ChainState, PrimitiveError> {
    if bytes.len() != mode.digest_bytes() {
        return Err(PrimitiveError::SizeMismatch {
            what: "chaining state",
            expected: mode.digest_bytes(),
            actual: bytes.len(),
        });
    }
    Ok(match mode {
        MdMode::Sha512 => {
            let mut w = [0u64; 8];
            for (i, c) in bytes.chunks_exact(8).enumerate() {
                w[i] = u64::from_be_bytes(c.try_into().unwrap());
            }
            ChainState::Words64(w)
        }
        _ => {
            let mut w = [0u32; 8];
            for (i, c) in bytes.chunks_exact(4).enumerate() {
                w[i] = u32::from_be_bytes(c.try_into().unwrap());
            }
            ChainState::Words32(w)
        }
    })
}

pub fn keccak_f1600(state: &ChainState) -> Result<ChainState, PrimitiveError> {
    match state {
        ChainState::Keccak(lanes) => {
            let mut a = *lanes;
            keccak::f1600(&mut a);
            Ok(ChainState::Keccak(a))
        }
        _ => Err(PrimitiveError::StateMismatch(Algorithm::Sha3_256)),
    }
}

pub fn sponge(mode: SpongeMode, message: &[u8], out_len: usize) -> Result<Digest, PrimitiveError> {
    keccak::sponge(mode, message, out_len)
}

pub fn aes128(dir: AesDirection, key: &[u8; 16], block: AesBlock) -> AesBlock {
    aes::aes128(dir, key, block)
}

/// One-shot dispatch over all nine algorithms.
///
/// For AES the input is `key || plaintext`; for SHAKE `out_len` selects the
/// output length and is ignored elsewhere.
pub fn compute(alg: Algorithm, input: &[u8], out_len: usize) -> Result<Digest, PrimitiveError> {
    if let Some(mode) = alg.md_mode() {
        return Ok(hash_md(mode, input));
    }
    if let Some(mode) = alg.sponge_mode() {
        let len = mode.fixed_output().unwrap_or(out_len);
        return sponge(mode, input, len);
    }
    if let Some(mode) = alg.haraka_mode() {
        return haraka(mode, input, &HarakaRcSet::standard());
    }
    if input.len() != 32 {
        return Err(PrimitiveError::SizeMismatch {
            what: "AES key || block",
            expected: 32,
            actual: input.len(),
        });
    }
    let key: [u8; 16] = input[..16].try_into().unwrap();
    let block = AesBlock::from_slice(&input[16..])?;
    Ok(Digest::new(aes128(AesDirection::Encrypt, &key, block).0.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_block_length_is_size_mismatch() {
        let iv = md_initial_state(MdMode::Sha256);
        assert!(matches!(
            md_compress(MdMode::Sha256, &iv, &[0; 63]),
            Err(PrimitiveError::SizeMismatch { expected: 64, .. })
        ));
        assert!(matches!(
            md_compress(MdMode::Sha512, &iv, &[0; 128]),
            Err(PrimitiveError::StateMismatch(_))
        ));
    }

    #[test]
    fn explicit_constants_match_builtin() {
        for mode in [MdMode::Sha256, MdMode::Sha512, MdMode::Sm3] {
            let iv = md_initial_state(mode);
            let block = vec![0x5a; mode.block_bytes()];
            assert_eq!(
                md_compress(mode, &iv, &block).unwrap(),
                md_compress_with_constants(mode, &iv, &block, &md_constant_bytes(mode)).unwrap()
            );
        }
    }

    #[test]
    fn state_bytes_roundtrip() {
        for mode in [MdMode::Sha256, MdMode::Sha512, MdMode::Sm3] {
            let iv = md_initial_state(mode);
            assert_eq!(md_state_from_bytes(mode, &iv.to_bytes()).unwrap(), iv);
        }
    }

    #[test]
    fn sha3_rejects_other_lengths() {
        assert!(sponge(SpongeMode::Sha3_256, b"", 31).is_err());
        assert!(sponge(SpongeMode::Shake128, b"", 0).is_err());
    }
}

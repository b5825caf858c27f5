use std::fmt;
use std::str::FromStr;

use super::PrimitiveError;

/// The nine algorithms the co-processor accelerates.
///
/// The discriminant doubles as the 4-bit mode tag carried by
/// `CRYPTO_DISPATCH` instructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Sha256 = 0,
    Sha512 = 1,
    Sm3 = 2,
    Sha3_256 = 3,
    Shake128 = 4,
    Shake256 = 5,
    Aes128 = 6,
    Haraka256 = 7,
    Haraka512 = 8,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Sha256,
        Algorithm::Sha512,
        Algorithm::Sm3,
        Algorithm::Sha3_256,
        Algorithm::Shake128,
        Algorithm::Shake256,
        Algorithm::Aes128,
        Algorithm::Haraka256,
        Algorithm::Haraka512,
    ];

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.get(tag as usize).copied()
    }

    /// Canonical display name, also used in vector files and reports.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sha256 => "SHA-256",
            Algorithm::Sha512 => "SHA-512",
            Algorithm::Sm3 => "SM3",
            Algorithm::Sha3_256 => "SHA3-256",
            Algorithm::Shake128 => "SHAKE-128",
            Algorithm::Shake256 => "SHAKE-256",
            Algorithm::Aes128 => "AES-128",
            Algorithm::Haraka256 => "HARAKA-256",
            Algorithm::Haraka512 => "HARAKA-512",
        }
    }

    /// Short lowercase mnemonic used by the assembler.
    pub fn mnemonic(self) -> &'static str {
        match self {
            Algorithm::Sha256 => "sha256",
            Algorithm::Sha512 => "sha512",
            Algorithm::Sm3 => "sm3",
            Algorithm::Sha3_256 => "sha3_256",
            Algorithm::Shake128 => "shake128",
            Algorithm::Shake256 => "shake256",
            Algorithm::Aes128 => "aes128",
            Algorithm::Haraka256 => "haraka256",
            Algorithm::Haraka512 => "haraka512",
        }
    }

    pub fn md_mode(self) -> Option<MdMode> {
        match self {
            Algorithm::Sha256 => Some(MdMode::Sha256),
            Algorithm::Sha512 => Some(MdMode::Sha512),
            Algorithm::Sm3 => Some(MdMode::Sm3),
            _ => None,
        }
    }

    pub fn sponge_mode(self) -> Option<SpongeMode> {
        match self {
            Algorithm::Sha3_256 => Some(SpongeMode::Sha3_256),
            Algorithm::Shake128 => Some(SpongeMode::Shake128),
            Algorithm::Shake256 => Some(SpongeMode::Shake256),
            _ => None,
        }
    }

    pub fn haraka_mode(self) -> Option<HarakaMode> {
        match self {
            Algorithm::Haraka256 => Some(HarakaMode::H256),
            Algorithm::Haraka512 => Some(HarakaMode::H512),
            _ => None,
        }
    }

    pub fn is_hash(self) -> bool {
        self.md_mode().is_some() || self.sponge_mode().is_some()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = PrimitiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        let alg = match norm.as_str() {
            "sha256" | "sha2256" => Algorithm::Sha256,
            "sha512" | "sha2512" => Algorithm::Sha512,
            "sm3" => Algorithm::Sm3,
            "sha3256" => Algorithm::Sha3_256,
            "shake128" => Algorithm::Shake128,
            "shake256" => Algorithm::Shake256,
            "aes128" | "aes" => Algorithm::Aes128,
            "haraka256" => Algorithm::Haraka256,
            "haraka512" => Algorithm::Haraka512,
            _ => return Err(PrimitiveError::UnknownAlgorithm(s.to_string())),
        };
        Ok(alg)
    }
}

/// Merkle-Damgard modes served by the unified SM3/SHA-2 engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MdMode {
    Sha256,
    Sha512,
    Sm3,
}

impl MdMode {
    pub fn block_bytes(self) -> usize {
        match self {
            MdMode::Sha512 => 128,
            _ => 64,
        }
    }

    pub fn digest_bytes(self) -> usize {
        match self {
            MdMode::Sha512 => 64,
            _ => 32,
        }
    }

    /// Bytes reserved at the end of the final block for the length field.
    pub fn length_field_bytes(self) -> usize {
        match self {
            MdMode::Sha512 => 16,
            _ => 8,
        }
    }

    pub fn rounds(self) -> usize {
        match self {
            MdMode::Sha512 => 80,
            _ => 64,
        }
    }

    pub fn algorithm(self) -> Algorithm {
        match self {
            MdMode::Sha256 => Algorithm::Sha256,
            MdMode::Sha512 => Algorithm::Sha512,
            MdMode::Sm3 => Algorithm::Sm3,
        }
    }
}

/// Keccak sponge modes served by the SHA3/SHAKE engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpongeMode {
    Sha3_256,
    Shake128,
    Shake256,
}

impl SpongeMode {
    pub fn rate_bytes(self) -> usize {
        match self {
            SpongeMode::Shake128 => 168,
            _ => 136,
        }
    }

    pub fn rate_lanes(self) -> usize {
        self.rate_bytes() / 8
    }

    pub fn domain_separator(self) -> u8 {
        match self {
            SpongeMode::Sha3_256 => 0x06,
            _ => 0x1f,
        }
    }

    /// Fixed output length, or `None` for the XOFs.
    pub fn fixed_output(self) -> Option<usize> {
        match self {
            SpongeMode::Sha3_256 => Some(32),
            _ => None,
        }
    }

    pub fn algorithm(self) -> Algorithm {
        match self {
            SpongeMode::Sha3_256 => Algorithm::Sha3_256,
            SpongeMode::Shake128 => Algorithm::Shake128,
            SpongeMode::Shake256 => Algorithm::Shake256,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HarakaMode {
    H256,
    H512,
}

impl HarakaMode {
    pub fn input_bytes(self) -> usize {
        match self {
            HarakaMode::H256 => 32,
            HarakaMode::H512 => 64,
        }
    }

    /// Number of 16-byte constants the permutation consumes.
    pub fn constants_used(self) -> usize {
        match self {
            HarakaMode::H256 => 20,
            HarakaMode::H512 => 40,
        }
    }

    /// AES-round applications counted by the engine timing model.
    pub fn engine_rounds(self) -> usize {
        match self {
            HarakaMode::H256 => 32,
            HarakaMode::H512 => 64,
        }
    }

    pub fn algorithm(self) -> Algorithm {
        match self {
            HarakaMode::H256 => Algorithm::Haraka256,
            HarakaMode::H512 => Algorithm::Haraka512,
        }
    }
}

/// A hash or cipher output.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digest(Vec<u8>);

impl Digest {
    pub fn new(bytes: Vec<u8>) -> Self {
        Digest(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.to_hex())
    }
}

impl AsRef<[u8]> for Digest {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// Chaining value carried between compression or permutation calls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainState {
    /// SHA-256 and SM3.
    Words32([u32; 8]),
    /// SHA-512.
    Words64([u64; 8]),
    /// Keccak-f[1600], lane `x + 5y` at index `x + 5 * y`.
    Keccak([u64; 25]),
}

impl ChainState {
    pub fn keccak_zero() -> Self {
        ChainState::Keccak([0; 25])
    }

    /// Big-endian serialisation for the MD states, little-endian lanes for Keccak.
    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            ChainState::Words32(w) => w.iter().flat_map(|x| x.to_be_bytes()).collect(),
            ChainState::Words64(w) => w.iter().flat_map(|x| x.to_be_bytes()).collect(),
            ChainState::Keccak(l) => l.iter().flat_map(|x| x.to_le_bytes()).collect(),
        }
    }
}

/// One 128-bit AES state, stored column-major as in FIPS 197.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AesBlock(pub [u8; 16]);

impl AesBlock {
    pub fn from_slice(bytes: &[u8]) -> Result<Self, PrimitiveError> {
        let arr: [u8; 16] = bytes.try_into().map_err(|_| PrimitiveError::SizeMismatch {
            what: "AES block",
            expected: 16,
            actual: bytes.len(),
        })?;
        Ok(AesBlock(arr))
    }
}

impl fmt::Debug for AesBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AesBlock(")?;
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AesDirection {
    Encrypt,
    Decrypt,
}

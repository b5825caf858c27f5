//! SHA-256 and SHA-512 as one compression routine generic over the word type.
//!
//! The two functions differ only in word width, round count, rotation amounts
//! and constant tables, which is exactly what the unified datapath multiplexes.

use std::marker::PhantomData;

use num_traits::{PrimInt, Unsigned, WrappingAdd};

/// Word type of a SHA-2 family member.
pub trait Sha2Word: PrimInt + Unsigned + WrappingAdd + 'static {
    const BYTES: usize;
    const ROUNDS: usize;
    /// Rotations of the big Sigma0 / Sigma1 functions.
    const BIG_SIGMA0: [u32; 3];
    const BIG_SIGMA1: [u32; 3];
    /// Two rotations then a right shift, for the message schedule.
    const SMALL_SIGMA0: [u32; 3];
    const SMALL_SIGMA1: [u32; 3];

    fn round_constants() -> &'static [Self];
    fn initial_state() -> [Self; 8];
    fn read_be(bytes: &[u8]) -> Self;
    fn write_be(self, out: &mut Vec<u8>);
}

const K256: [u32; 64] = [
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
];

const IV256: [u32; 8] = [
    0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a, 0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
];

const K512: [u64; 80] = [
    0x428a2f98d728ae22, 0x7137449123ef65cd, 0xb5c0fbcfec4d3b2f, 0xe9b5dba58189dbbc,
    0x3956c25bf348b538, 0x59f111f1b605d019, 0x923f82a4af194f9b, 0xab1c5ed5da6d8118,
    0xd807aa98a3030242, 0x12835b0145706fbe, 0x243185be4ee4b28c, 0x550c7dc3d5ffb4e2,
    0x72be5d74f27b896f, 0x80deb1fe3b1696b1, 0x9bdc06a725c71235, 0xc19bf174cf692694,
    0xe49b69c19ef14ad2, 0xefbe4786384f25e3, 0x0fc19dc68b8cd5b5, 0x240ca1cc77ac9c65,
    0x2de92c6f592b0275, 0x4a7484aa6ea6e483, 0x5cb0a9dcbd41fbd4, 0x76f988da831153b5,
    0x983e5152ee66dfab, 0xa831c66d2db43210, 0xb00327c898fb213f, 0xbf597fc7beef0ee4,
    0xc6e00bf33da88fc2, 0xd5a79147930aa725, 0x06ca6351e003826f, 0x142929670a0e6e70,
    0x27b70a8546d22ffc, 0x2e1b21385c26c926, 0x4d2c6dfc5ac42aed, 0x53380d139d95b3df,
    0x650a73548baf63de, 0x766a0abb3c77b2a8, 0x81c2c92e47edaee6, 0x92722c851482353b,
    0xa2bfe8a14cf10364, 0xa81a664bbc423001, 0xc24b8b70d0f89791, 0xc76c51a30654be30,
    0xd192e819d6ef5218, 0xd69906245565a910, 0xf40e35855771202a, 0x106aa07032bbd1b8,
    0x19a4c116b8d2d0c8, 0x1e376c085141ab53, 0x2748774cdf8eeb99, 0x34b0bcb5e19b48a8,
    0x391c0cb3c5c95a63, 0x4ed8aa4ae3418acb, 0x5b9cca4f7763e373, 0x682e6ff3d6b2b8a3,
    0x748f82ee5defb2fc, 0x78a5636f43172f60, 0x84c87814a1f0ab72, 0x8cc702081a6439ec,
    0x90befffa23631e28, 0xa4506cebde82bde9, 0xbef9a3f7b2c67915, 0xc67178f2e372532b,
    0xca273eceea26619c, 0xd186b8c721c0c207, 0xeada7dd6cde0eb1e, 0xf57d4f7fee6ed178,
    0x06f067aa72176fba, 0x0a637dc5a2c898a6, 0x113f9804bef90dae, 0x1b710b35131c471b,
    0x28db77f523047d84, 0x32caab7b40c72493, 0x3c9ebe0a15c9bebc, 0x431d67c49c100d4c,
    0x4cc5d4becb3e42b6, 0x597f299cfc657e2a, 0x5fcb6fab3ad6faec, 0x6c44198c4a475817,
];

const IV512: [u64; 8] = [
    0x6a09e667f3bcc908, 0xbb67ae8584caa73b, 0x3c6ef372fe94f82b, 0xa54ff53a5f1d36f1,
    0x510e527fade682d1, 0x9b05688c2b3e6c1f, 0x1f83d9abfb41bd6b, 0x5be0cd19137e2179,
];

impl Sha2Word for u32 {
    const BYTES: usize = 4;
    const ROUNDS: usize = 64;
    const BIG_SIGMA0: [u32; 3] = [2, 13, 22];
    const BIG_SIGMA1: [u32; 3] = [6, 11, 25];
    const SMALL_SIGMA0: [u32; 3] = [7, 18, 3];
    const SMALL_SIGMA1: [u32; 3] = [17, 19, 10];

    fn round_constants() -> &'static [Self] {
        &K256
    }

    fn initial_state() -> [Self; 8] {
        IV256
    }

    fn read_be(bytes: &[u8]) -> Self {
        u32::from_be_bytes(bytes[..4].try_into().unwrap())
    }

    fn write_be(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_be_bytes());
    }
}

impl Sha2Word for u64 {
    const BYTES: usize = 8;
    const ROUNDS: usize = 80;
    const BIG_SIGMA0: [u32; 3] = [28, 34, 39];
    const BIG_SIGMA1: [u32; 3] = [14, 18, 41];
    const SMALL_SIGMA0: [u32; 3] = [1, 8, 7];
    const SMALL_SIGMA1: [u32; 3] = [19, 61, 6];

    fn round_constants() -> &'static [Self] {
        &K512
    }

    fn initial_state() -> [Self; 8] {
        IV512
    }

    fn read_be(bytes: &[u8]) -> Self {
        u64::from_be_bytes(bytes[..8].try_into().unwrap())
    }

    fn write_be(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_be_bytes());
    }
}

/// A SHA-2 instance over word type `W`. See the `Sha256` / `Sha512` aliases.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sha2<W>(PhantomData<W>);

impl<W: Sha2Word> Sha2<W> {
    pub const BLOCK_BYTES: usize = 16 * W::BYTES;
    pub const DIGEST_BYTES: usize = 8 * W::BYTES;

    fn big_sigma(x: W, r: [u32; 3]) -> W {
        x.rotate_right(r[0]) ^ x.rotate_right(r[1]) ^ x.rotate_right(r[2])
    }

    fn small_sigma(x: W, r: [u32; 3]) -> W {
        x.rotate_right(r[0]) ^ x.rotate_right(r[1]) ^ (x >> r[2] as usize)
    }

    /// Expand one block into the round schedule.
    pub fn expand(block: &[u8]) -> Vec<W> {
        let mut w: Vec<W> = block.chunks_exact(W::BYTES).map(W::read_be).collect();
        for t in 16..W::ROUNDS {
            let s0 = Self::small_sigma(w[t - 15], W::SMALL_SIGMA0);
            let s1 = Self::small_sigma(w[t - 2], W::SMALL_SIGMA1);
            w.push(
                s1.wrapping_add(&w[t - 7])
                    .wrapping_add(&s0)
                    .wrapping_add(&w[t - 16]),
            );
        }
        w
    }

    /// Compress one block into `state` using an explicit constant table.
    ///
    /// `block` must be exactly `BLOCK_BYTES` long and `k` must hold at least
    /// `W::ROUNDS` entries.
    pub fn compress_with(state: &mut [W; 8], block: &[u8], k: &[W]) {
        debug_assert_eq!(block.len(), Self::BLOCK_BYTES);
        let w = Self::expand(block);
        let [mut a, mut b, mut c, mut d, mut e, mut f, mut g, mut h] = *state;
        for t in 0..W::ROUNDS {
            let ch = (e & f) ^ (!e & g);
            let maj = (a & b) ^ (a & c) ^ (b & c);
            let t1 = h
                .wrapping_add(&Self::big_sigma(e, W::BIG_SIGMA1))
                .wrapping_add(&ch)
                .wrapping_add(&k[t])
                .wrapping_add(&w[t]);
            let t2 = Self::big_sigma(a, W::BIG_SIGMA0).wrapping_add(&maj);
            h = g;
            g = f;
            f = e;
            e = d.wrapping_add(&t1);
            d = c;
            c = b;
            b = a;
            a = t1.wrapping_add(&t2);
        }
        for (s, v) in state.iter_mut().zip([a, b, c, d, e, f, g, h]) {
            *s = s.wrapping_add(&v);
        }
    }

    pub fn compress(state: &mut [W; 8], block: &[u8]) {
        Self::compress_with(state, block, W::round_constants())
    }

    /// Message padding: 0x80, zeros, then the bit length in `2 * W::BYTES` bytes.
    pub fn pad(message: &[u8]) -> Vec<u8> {
        md_pad(message, Self::BLOCK_BYTES, 2 * W::BYTES)
    }

    pub fn digest(message: &[u8]) -> Vec<u8> {
        let mut state = W::initial_state();
        for block in Self::pad(message).chunks_exact(Self::BLOCK_BYTES) {
            Self::compress(&mut state, block);
        }
        let mut out = Vec::with_capacity(Self::DIGEST_BYTES);
        for w in state {
            w.write_be(&mut out);
        }
        out
    }
}

/// Shared Merkle-Damgard strengthening used by SHA-2 and SM3.
pub(crate) fn md_pad(message: &[u8], block: usize, len_field: usize) -> Vec<u8> {
    let bit_len = (message.len() as u128) * 8;
    let mut out = message.to_vec();
    out.push(0x80);
    while out.len() % block != block - len_field {
        out.push(0);
    }
    let len_bytes = bit_len.to_be_bytes();
    out.extend_from_slice(&len_bytes[16 - len_field..]);
    out
}

#[cfg(test)]
mod tests {
    use crate::{Sha256, Sha512};

    #[test]
    fn padding_lengths() {
        assert_eq!(Sha256::pad(b"").len(), 64);
        assert_eq!(Sha256::pad(&[0; 55]).len(), 64);
        assert_eq!(Sha256::pad(&[0; 56]).len(), 128);
        assert_eq!(Sha512::pad(&[0; 111]).len(), 128);
        assert_eq!(Sha512::pad(&[0; 112]).len(), 256);
    }

    #[test]
    fn padding_encodes_bit_length() {
        let p = Sha256::pad(b"abc");
        assert_eq!(p[3], 0x80);
        assert_eq!(&p[56..], &[0, 0, 0, 0, 0, 0, 0, 24]);
    }

    #[test]
    fn sha256_two_block_vector() {
        let d = Sha256::digest(b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq");
        assert_eq!(
            hex(&d),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1"
        );
    }

    fn hex(b: &[u8]) -> String {
        b.iter().map(|x| format!("{x:02x}")).collect()
    }
}

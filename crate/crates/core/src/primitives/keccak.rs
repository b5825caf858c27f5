//! Keccak-f[1600] and the FIPS 202 sponge.

use super::{Digest, PrimitiveError, SpongeMode};

pub const ROUNDS: usize = 24;
pub const LANES: usize = 25;

pub const ROUND_CONSTANTS: [u64; ROUNDS] = [
    0x0000000000000001,
    0x0000000000008082,
    0x800000000000808a,
    0x8000000080008000,
    0x000000000000808b,
    0x0000000080000001,
    0x8000000080008081,
    0x8000000000008009,
    0x000000000000008a,
    0x0000000000000088,
    0x0000000080008009,
    0x000000008000000a,
    0x000000008000808b,
    0x800000000000008b,
    0x8000000000008089,
    0x8000000000008003,
    0x8000000000008002,
    0x8000000000000080,
    0x000000000000800a,
    0x800000008000000a,
    0x8000000080008081,
    0x8000000000008080,
    0x0000000080000001,
    0x8000000080008008,
];

// rho offsets indexed by x + 5y
const RHO: [u32; LANES] = [
    0, 1, 62, 28, 27, //
    36, 44, 6, 55, 20, //
    3, 10, 43, 25, 39, //
    41, 45, 15, 21, 8, //
    18, 2, 61, 56, 14,
];

/// One round: theta, rho, pi, chi, iota.
pub fn round(a: &mut [u64; LANES], rc: u64) {
    let mut c = [0u64; 5];
    for x in 0..5 {
        c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
    }
    for x in 0..5 {
        let d = c[(x + 4) % 5] ^ c[(x + 1) % 5].rotate_left(1);
        for y in 0..5 {
            a[x + 5 * y] ^= d;
        }
    }

    // rho + pi: B[y, 2x + 3y] = rot(A[x, y])
    let mut b = [0u64; LANES];
    for x in 0..5 {
        for y in 0..5 {
            let src = x + 5 * y;
            let dst = y + 5 * ((2 * x + 3 * y) % 5);
            b[dst] = a[src].rotate_left(RHO[src]);
        }
    }

    for y in 0..5 {
        for x in 0..5 {
            a[x + 5 * y] = b[x + 5 * y] ^ (!b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
        }
    }

    a[0] ^= rc;
}

/// Two consecutive rounds `2 * step` and `2 * step + 1`, the unit of work of
/// the unrolled engine datapath.
pub fn double_round(a: &mut [u64; LANES], step: usize) {
    round(a, ROUND_CONSTANTS[2 * step]);
    round(a, ROUND_CONSTANTS[2 * step + 1]);
}

pub fn f1600(a: &mut [u64; LANES]) {
    for rc in ROUND_CONSTANTS {
        round(a, rc);
    }
}

/// XOR a rate-sized block of bytes into the state, little-endian lanes.
pub fn absorb_block(a: &mut [u64; LANES], block: &[u8]) {
    for (lane, chunk) in a.iter_mut().zip(block.chunks(8)) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        *lane ^= u64::from_le_bytes(buf);
    }
}

/// pad10*1 with the mode's domain-separation bits.
pub fn pad(mode: SpongeMode, message: &[u8]) -> Vec<u8> {
    let rate = mode.rate_bytes();
    let mut out = message.to_vec();
    out.push(mode.domain_separator());
    while !out.len().is_multiple_of(rate) {
        out.push(0);
    }
    *out.last_mut().unwrap() |= 0x80;
    out
}

pub fn sponge(mode: SpongeMode, message: &[u8], out_len: usize) -> Result<Digest, PrimitiveError> {
    if out_len == 0 {
        return Err(PrimitiveError::InvalidLength("output length must be at least 1".into()));
    }
    if let Some(fixed) = mode.fixed_output() {
        if out_len != fixed {
            return Err(PrimitiveError::InvalidLength(format!(
                "{} produces exactly {fixed} bytes, requested {out_len}",
                mode.algorithm()
            )));
        }
    }
    let rate = mode.rate_bytes();
    let mut state = [0u64; LANES];
    for block in pad(mode, message).chunks_exact(rate) {
        absorb_block(&mut state, block);
        f1600(&mut state);
    }
    Ok(Digest::new(squeeze(&mut state, rate, out_len)))
}

/// Read `out_len` bytes, permuting between rate-sized chunks.
pub fn squeeze(state: &mut [u64; LANES], rate: usize, out_len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(out_len);
    loop {
        let bytes: Vec<u8> = state.iter().flat_map(|l| l.to_le_bytes()).take(rate).collect();
        let take = (out_len - out.len()).min(rate);
        out.extend_from_slice(&bytes[..take]);
        if out.len() == out_len {
            return out;
        }
        f1600(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pad_single_byte_when_one_short_of_rate() {
        let p = pad(SpongeMode::Sha3_256, &[0u8; 135]);
        assert_eq!(p.len(), 136);
        assert_eq!(p[135], 0x86);
    }

    #[test]
    fn rho_offsets_cover_triangular_numbers() {
        // The 24 nonzero offsets are (t+1)(t+2)/2 mod 64 for t = 0..23.
        let mut expected: Vec<u32> = (0..24u32).map(|t| ((t + 1) * (t + 2) / 2) % 64).collect();
        let mut got: Vec<u32> = RHO.iter().copied().filter(|&r| r != 0).collect();
        expected.sort();
        got.sort();
        assert_eq!(expected, got);
    }

    #[test]
    fn squeeze_across_rate_boundary() {
        let long = sponge(SpongeMode::Shake128, b"", 400).unwrap();
        let short = sponge(SpongeMode::Shake128, b"", 168).unwrap();
        assert_eq!(&long.as_bytes()[..168], short.as_bytes());
    }
}

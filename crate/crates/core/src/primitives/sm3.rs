//! SM3 (GB/T 32905-2016).

use std::sync::OnceLock;

use super::sha2::md_pad;

pub const BLOCK_BYTES: usize = 64;
pub const DIGEST_BYTES: usize = 32;

pub const IV: [u32; 8] = [
    0x7380166f, 0x4914b2b9, 0x172442d7, 0xda8a0600, 0xa96f30bc, 0x163138aa, 0xe38dee4d, 0xb0fb0e4e,
];

const T_LOW: u32 = 0x79cc4519;
const T_HIGH: u32 = 0x7a879d8a;

/// Per-round constants `T_j <<< (j mod 32)`, the form the engine keeps in its
/// constant region.
pub fn round_constants() -> &'static [u32; 64] {
    static TABLE: OnceLock<[u32; 64]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u32; 64];
        for (j, slot) in t.iter_mut().enumerate() {
            let base = if j < 16 { T_LOW } else { T_HIGH };
            *slot = base.rotate_left((j % 32) as u32);
        }
        t
    })
}

fn p0(x: u32) -> u32 {
    x ^ x.rotate_left(9) ^ x.rotate_left(17)
}

fn p1(x: u32) -> u32 {
    x ^ x.rotate_left(15) ^ x.rotate_left(23)
}

pub fn compress_with(state: &mut [u32; 8], block: &[u8], t: &[u32]) {
    debug_assert_eq!(block.len(), BLOCK_BYTES);
    let mut w = [0u32; 68];
    for (i, c) in block.chunks_exact(4).enumerate() {
        w[i] = u32::from_be_bytes(c.try_into().unwrap());
    }
    for j in 16..68 {
        w[j] = p1(w[j - 16] ^ w[j - 9] ^ w[j - 3].rotate_left(15))
            ^ w[j - 13].rotate_left(7)
            ^ w[j - 6];
    }

    let [mut a, mut b, mut c, mut d, mut e, mut f, mut g, mut h] = *state;
    for j in 0..64 {
        let ss1 = a
            .rotate_left(12)
            .wrapping_add(e)
            .wrapping_add(t[j])
            .rotate_left(7);
        let ss2 = ss1 ^ a.rotate_left(12);
        let (ff, gg) = if j < 16 {
            (a ^ b ^ c, e ^ f ^ g)
        } else {
            ((a & b) | (a & c) | (b & c), (e & f) | (!e & g))
        };
        let tt1 = ff
            .wrapping_add(d)
            .wrapping_add(ss2)
            .wrapping_add(w[j] ^ w[j + 4]);
        let tt2 = gg.wrapping_add(h).wrapping_add(ss1).wrapping_add(w[j]);
        d = c;
        c = b.rotate_left(9);
        b = a;
        a = tt1;
        h = g;
        g = f.rotate_left(19);
        f = e;
        e = p0(tt2);
    }
    for (s, v) in state.iter_mut().zip([a, b, c, d, e, f, g, h]) {
        *s ^= v;
    }
}

pub fn compress(state: &mut [u32; 8], block: &[u8]) {
    compress_with(state, block, round_constants())
}

pub fn pad(message: &[u8]) -> Vec<u8> {
    md_pad(message, BLOCK_BYTES, 8)
}

pub fn digest(message: &[u8]) -> Vec<u8> {
    let mut state = IV;
    for block in pad(message).chunks_exact(BLOCK_BYTES) {
        compress(&mut state, block);
    }
    state.iter().flat_map(|w| w.to_be_bytes()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_table_switches_at_round_16() {
        let t = round_constants();
        assert_eq!(t[0], T_LOW);
        assert_eq!(t[15], T_LOW.rotate_left(15));
        assert_eq!(t[16], T_HIGH.rotate_left(16));
        assert_eq!(t[32], T_HIGH);
    }

    #[test]
    fn sixty_four_byte_standard_example() {
        // Second worked example of the standard: "abcd" repeated 16 times.
        let msg = b"abcd".repeat(16);
        let d: String = digest(&msg).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(
            d,
            "debe9ff92275b8a138604889c18e5a4d6fdb70e5387e5765293dcba39c0c5732"
        );
    }
}

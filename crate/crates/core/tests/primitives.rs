use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rvcrypt_core::primitives::{
    aes, haraka, haraka_rc_derive, hash_md, keccak, keccak_f1600, md_compress, md_initial_state,
    md_pad, sponge, AesBlock, AesDirection, ChainState, HarakaMode, HarakaRcSet, MdMode,
    PrimitiveError, SpongeMode,
};

fn hex(s: &str) -> Vec<u8> {
    (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&s[i..i + 2], 16).unwrap())
        .collect()
}

fn seq(n: usize) -> Vec<u8> {
    (0..n as u8).collect()
}

#[test]
fn md_standard_vectors() {
    assert_eq!(
        hash_md(MdMode::Sha256, b"abc").to_hex(),
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    );
    assert!(hash_md(MdMode::Sha512, b"").to_hex().starts_with("cf83e1357eefb8bd"));
    assert_eq!(
        hash_md(MdMode::Sha512, b"abc").to_hex(),
        "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a\
         2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f"
    );
    assert_eq!(
        hash_md(MdMode::Sm3, b"abc").to_hex(),
        "66c7f0f462eeedd9d1f2d46bdc10e4e24167c4875cf2f7a2297da02b8f4ba8e0"
    );
}

#[test]
fn single_block_compress_equals_hash() {
    for (mode, msg) in [(MdMode::Sha256, &b"abc"[..]), (MdMode::Sha512, &b""[..])] {
        let padded = md_pad(mode, msg);
        let s = md_compress(mode, &md_initial_state(mode), &padded).unwrap();
        assert_eq!(s.to_bytes(), hash_md(mode, msg).into_bytes());
    }
}

#[test]
fn sm3_two_block_fold() {
    let msg = vec![0x61u8; 100];
    let padded = md_pad(MdMode::Sm3, &msg);
    assert_eq!(padded.len(), 128);
    let mut s = md_initial_state(MdMode::Sm3);
    for block in padded.chunks(64) {
        s = md_compress(MdMode::Sm3, &s, block).unwrap();
    }
    assert_eq!(s.to_bytes(), hash_md(MdMode::Sm3, &msg).into_bytes());
}

#[test]
fn compress_rejects_wrong_block() {
    let err = md_compress(MdMode::Sha512, &md_initial_state(MdMode::Sha512), &[0; 64]);
    assert!(matches!(err, Err(PrimitiveError::SizeMismatch { expected: 128, actual: 64, .. })));
}

#[test]
fn keccak_zero_state() {
    let ChainState::Keccak(l) = keccak_f1600(&ChainState::keccak_zero()).unwrap() else {
        panic!()
    };
    assert_eq!(l[0], 0xF1258F7940E1DDE7);
}

#[test]
fn keccak_distinct_states_distinct_outputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a: [u64; 25] = rng.gen();
    let mut b = a;
    b[24] ^= 1;
    assert_ne!(
        keccak_f1600(&ChainState::Keccak(a)).unwrap(),
        keccak_f1600(&ChainState::Keccak(b)).unwrap()
    );
}

#[test]
fn sponge_vectors() {
    assert_eq!(
        sponge(SpongeMode::Sha3_256, b"", 32).unwrap().to_hex(),
        "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a"
    );
    assert_eq!(
        sponge(SpongeMode::Sha3_256, b"abc", 32).unwrap().to_hex(),
        "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532"
    );
    assert_eq!(
        sponge(SpongeMode::Shake128, b"", 32).unwrap().to_hex(),
        "7f9c2ba4e88f827d616045507605853ed73b8093f6efbc88eb1a6eacfa66ef26"
    );
    assert_eq!(
        sponge(SpongeMode::Shake256, b"", 64).unwrap().to_hex(),
        "46b9dd2b0ba88d13233b3feb743eeb243fcd52ea62b81b82b50c27646ed5762f\
         d75dc4ddd8c0f200cb05019d67b592f6fc821c49479ab48640292eacb3b7c4be"
    );
    assert!(matches!(
        sponge(SpongeMode::Shake256, b"x", 0),
        Err(PrimitiveError::InvalidLength(_))
    ));
}

#[test]
fn aes_fips197_example() {
    let key: [u8; 16] = hex("000102030405060708090a0b0c0d0e0f").try_into().unwrap();
    let pt = AesBlock::from_slice(&hex("00112233445566778899aabbccddeeff")).unwrap();
    let ct = aes::aes128(AesDirection::Encrypt, &key, pt);
    assert_eq!(ct.0.to_vec(), hex("69c4e0d86a7b0430d8cdb78070b4c55a"));
    assert_eq!(aes::aes128(AesDirection::Decrypt, &key, ct), pt);
    assert_eq!(aes::expand_key(&key)[1].to_vec(), hex("d6aa74fdd2af72fadaa678f1d6ab76fe"));
}

#[test]
fn aes_inverse_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let key: [u8; 16] = rng.gen();
        let b = AesBlock(rng.gen());
        let ct = aes::aes128(AesDirection::Encrypt, &key, b);
        assert_eq!(aes::aes128(AesDirection::Decrypt, &key, ct), b);
    }
}

#[test]
fn haraka_standard_vectors() {
    let rc = HarakaRcSet::standard();
    assert_eq!(
        haraka(HarakaMode::H256, &seq(32), &rc).unwrap().to_hex(),
        "8027ccb87949774b78d0545fb72bf70c695c2a0923cbd47bba1159efbf2b2c1c"
    );
    assert_eq!(
        haraka(HarakaMode::H512, &seq(64), &rc).unwrap().to_hex(),
        "be7f723b4e80a99813b292287f306f625a6d57331cae5f34dd9277b0945be2aa"
    );
    assert!(matches!(
        haraka(HarakaMode::H256, &seq(31), &rc),
        Err(PrimitiveError::SizeMismatch { .. })
    ));
}

// Frozen with an independent bitsliced Haraka implementation fed the
// SHAKE256("sk-seed" || "pk-seed") constant stream.
#[test]
fn haraka_seeded_vectors() {
    let rc = haraka_rc_derive(b"sk-seed", b"pk-seed").unwrap();
    assert_eq!(
        rc.to_bytes()[..48].to_vec(),
        hex("fbe9eb01d94bd4a0d27149c47358095c14ebeca4f81a37550a90eac1450d59ebd1cf792bb3336c55cb8454dc775d7a1d")
    );
    assert_eq!(
        haraka(HarakaMode::H256, &seq(32), &rc).unwrap().to_hex(),
        "b9716d71a6ac5bd720b7679ba24296cae71be40ed657c1674babd9a02bc569e6"
    );
    assert_eq!(
        haraka(HarakaMode::H512, &seq(64), &rc).unwrap().to_hex(),
        "77ae737bf269320be6ce5ddbe690d934400223233df1dc27b3b11e5419449f88"
    );
}

#[test]
fn rc_derive_reads_shake_stream() {
    let rc = haraka_rc_derive(b"k", b"p").unwrap();
    let stream = sponge(SpongeMode::Shake256, b"kp", 16 * rc.len()).unwrap();
    assert_eq!(rc.to_bytes(), stream.into_bytes());
    assert_eq!(rc, haraka_rc_derive(b"k", b"p").unwrap());
    assert_ne!(haraka_rc_derive(b"ab", b"cd").unwrap(), haraka_rc_derive(b"cd", b"ab").unwrap());
    assert_eq!(haraka_rc_derive(b"", b"p"), Err(PrimitiveError::InvalidSeed));
    assert_ne!(
        haraka(HarakaMode::H256, &seq(32), &rc).unwrap(),
        haraka(HarakaMode::H256, &seq(32), &HarakaRcSet::standard()).unwrap()
    );
}

proptest! {
    #[test]
    fn md_fold_equivalence(msg in proptest::collection::vec(any::<u8>(), 0..400), m in 0usize..3) {
        let mode = [MdMode::Sha256, MdMode::Sha512, MdMode::Sm3][m];
        let mut s = md_initial_state(mode);
        for block in md_pad(mode, &msg).chunks(mode.block_bytes()) {
            s = md_compress(mode, &s, block).unwrap();
        }
        prop_assert_eq!(s.to_bytes(), hash_md(mode, &msg).into_bytes());
    }

    #[test]
    fn keccak_unroll_equivalence(lanes in proptest::array::uniform25(any::<u64>())) {
        let mut a = lanes;
        for step in 0..12 {
            keccak::double_round(&mut a, step);
        }
        prop_assert_eq!(ChainState::Keccak(a), keccak_f1600(&ChainState::Keccak(lanes)).unwrap());
    }

    #[test]
    fn shake_prefix(msg in proptest::collection::vec(any::<u8>(), 0..300), short in 1usize..64) {
        let long = sponge(SpongeMode::Shake256, &msg, 64).unwrap();
        let s = sponge(SpongeMode::Shake256, &msg, short).unwrap();
        prop_assert_eq!(s.as_bytes(), &long.as_bytes()[..short]);
    }
}

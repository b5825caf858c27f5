use rvcrypt_bench::vectors::{self, BUNDLED};
use rvcrypt_core::config::TimingConfig;
use rvcrypt_core::primitives::Algorithm;

#[test]
fn bundled_vectors_pass() {
    let cfg = TimingConfig::default();
    let mut total = 0;
    for (name, text) in BUNDLED {
        let v = vectors::parse(name, text).unwrap();
        assert!(!v.is_empty(), "{name}");
        total += v.len();
        let s = vectors::check_all(&v, &cfg);
        assert!(s.failures.is_empty(), "{:?}", s.failures);
    }
    let all: Vec<_> = BUNDLED.iter().flat_map(|(n, t)| vectors::parse(n, t).unwrap()).collect();
    assert_eq!(all.len(), total);
    for alg in Algorithm::ALL {
        assert!(all.iter().any(|v| v.algorithm == alg), "no vector for {alg}");
    }
    assert!(all.iter().any(|v| v.seeds.is_some()));
}

#[test]
fn corrupted_digest_names_its_line() {
    let text = "# header\nsha256\t616263\tba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad\n\
                sha256\t616263\tba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ae\n";
    let v = vectors::parse("bad.txt", text).unwrap();
    let s = vectors::check_all(&v, &TimingConfig::default());
    assert_eq!(s.passed, 1);
    assert_eq!(s.failures.len(), 1);
    assert!(s.failures[0].starts_with("bad.txt:3:"), "{}", s.failures[0]);
}

#[test]
fn parse_errors_carry_file_and_line() {
    let cases = [
        ("sha256\t00\n", 1),
        ("\n\nsha999\t00\t00\n", 3),
        ("sha256\tzz\t00\n", 1),
        ("shake128\t00\t00\tout_len=x\n", 1),
        ("haraka256\t00\t00\tsk=00\n", 1),
        ("sha256\t00\t00\tcolour=red\n", 1),
    ];
    for (text, line) in cases {
        let e = vectors::parse("v.txt", text).unwrap_err();
        assert_eq!((e.file.as_str(), e.line), ("v.txt", line), "{text:?}");
        assert!(e.to_string().starts_with(&format!("v.txt:{line}:")));
    }
}

#[test]
fn empty_input_and_options() {
    let v = vectors::parse("x", "shake128\t-\t7f9c2ba4e88f827d616045507605853e\tout_len=16\n").unwrap();
    assert!(v[0].input.is_empty());
    assert_eq!(v[0].out_len, 16);
    assert!(vectors::check(&v[0], &TimingConfig::default()).is_ok());
}

#[test]
fn random_differential_small_is_clean_and_deterministic() {
    let cfg = TimingConfig::default();
    for alg in Algorithm::ALL {
        let a = vectors::random_differential(alg, 40, 11, &cfg);
        assert_eq!(a.cases, 40);
        assert!(a.failures.is_empty(), "{:?}", a.failures);
    }
    let a = vectors::random_differential(Algorithm::Sha256, 33, 5, &cfg);
    let b = vectors::random_differential(Algorithm::Sha256, 33, 5, &cfg);
    assert_eq!(a, b);
}

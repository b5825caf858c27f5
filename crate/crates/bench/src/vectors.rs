//! Known-answer vector files and randomized stack-vs-reference runs.
//!
//! File format: one vector per line, tab-separated
//! `algorithm  input-hex  output-hex  [out_len=N] [sk=hex] [pk=hex]`,
//! `-` for empty input, `#` starts a comment line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use rvcrypt_core::config::TimingConfig;
use rvcrypt_core::primitives::{self, Algorithm, HarakaRcSet};
use rvcrypt_core::scheduler::{run_workload, Workload, DEFAULT_OUT_LEN, MAX_SEED_BYTES};
use thiserror::Error;

/// Vector files shipped with the crate.
pub const BUNDLED: [(&str, &str); 4] = [
    ("md.txt", include_str!("../data/vectors/md.txt")),
    ("sponge.txt", include_str!("../data/vectors/sponge.txt")),
    ("aes.txt", include_str!("../data/vectors/aes.txt")),
    ("haraka.txt", include_str!("../data/vectors/haraka.txt")),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{file}:{line}: {msg}")]
pub struct VectorError {
    pub file: String,
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    pub file: String,
    pub line: usize,
    pub algorithm: Algorithm,
    pub input: Vec<u8>,
    pub expected: Vec<u8>,
    pub out_len: usize,
    pub seeds: Option<(Vec<u8>, Vec<u8>)>,
}

impl Vector {
    pub fn location(&self) -> String {
        format!("{}:{}", self.file, self.line)
    }
}

fn parse_hex(field: &str) -> Result<Vec<u8>, String> {
    if field == "-" {
        return Ok(Vec::new());
    }
    hex::decode(field).map_err(|e| format!("bad hex `{field}`: {e}"))
}

pub fn parse(file: &str, text: &str) -> Result<Vec<Vector>, VectorError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| VectorError { file: file.to_string(), line, msg };
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split('\t').map(str::trim).collect();
        if fields.len() < 3 {
            return Err(err(format!("expected at least 3 tab-separated fields, got {}", fields.len())));
        }
        let algorithm: Algorithm = fields[0].parse().map_err(|e: primitives::PrimitiveError| err(e.to_string()))?;
        let input = parse_hex(fields[1]).map_err(err)?;
        let expected = parse_hex(fields[2]).map_err(err)?;
        let mut v = Vector {
            file: file.to_string(),
            line,
            algorithm,
            input,
            out_len: expected.len(),
            expected,
            seeds: None,
        };
        let (mut sk, mut pk) = (None, None);
        for opt in &fields[3..] {
            match opt.split_once('=') {
                Some(("out_len", n)) => v.out_len = n.parse().map_err(|e| err(format!("out_len: {e}")))?,
                Some(("sk", h)) => sk = Some(parse_hex(h).map_err(err)?),
                Some(("pk", h)) => pk = Some(parse_hex(h).map_err(err)?),
                _ => return Err(err(format!("unknown option `{opt}`"))),
            }
        }
        v.seeds = match (sk, pk) {
            (Some(s), Some(p)) => Some((s, p)),
            (None, None) => None,
            _ => return Err(err("sk and pk must be given together".into())),
        };
        out.push(v);
    }
    Ok(out)
}

/// Single-input workload for a vector: long-message for hashes, a one
/// instance many-hash for AES and Haraka.
pub fn workload_for(
    alg: Algorithm,
    input: &[u8],
    out_len: usize,
    seeds: Option<&(Vec<u8>, Vec<u8>)>,
) -> Result<Workload, String> {
    let w = if alg.md_mode().is_some() || alg.sponge_mode().is_some() {
        Workload::long_message(alg, input.to_vec())
    } else {
        Workload::many_hash(alg, vec![input.to_vec()])
    };
    let mut w = w.map_err(|e| e.to_string())?;
    if alg.sponge_mode().is_some() {
        w = w.with_out_len(out_len).map_err(|e| e.to_string())?;
    }
    if let Some((sk, pk)) = seeds {
        w = w.with_seeded_rc(sk.clone(), pk.clone()).map_err(|e| e.to_string())?;
    }
    Ok(w)
}

fn reference_output(v: &Vector) -> Result<Vec<u8>, String> {
    let r = match (&v.seeds, v.algorithm.haraka_mode()) {
        (Some((sk, pk)), Some(mode)) => {
            HarakaRcSet::derive(sk, pk).and_then(|rc| primitives::haraka(mode, &v.input, &rc))
        }
        _ => primitives::compute(v.algorithm, &v.input, v.out_len),
    };
    r.map(|d| d.into_bytes()).map_err(|e| e.to_string())
}

/// Check one vector through both the golden reference and the full stack.
pub fn check(v: &Vector, cfg: &TimingConfig) -> Result<(), String> {
    let reference = reference_output(v)?;
    if reference != v.expected {
        return Err(format!("reference gave {}, expected {}", hex::encode(&reference), hex::encode(&v.expected)));
    }
    let w = workload_for(v.algorithm, &v.input, v.out_len, v.seeds.as_ref())?;
    let run = run_workload(&w, cfg).map_err(|e| e.to_string())?;
    if run.outputs[0] != v.expected {
        return Err(format!("stack gave {}, expected {}", hex::encode(&run.outputs[0]), hex::encode(&v.expected)));
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub passed: usize,
    /// `file:line: reason` for each failing vector.
    pub failures: Vec<String>,
}

pub fn check_all(vectors: &[Vector], cfg: &TimingConfig) -> CheckSummary {
    let results: Vec<Result<(), String>> = vectors.par_iter().map(|v| check(v, cfg)).collect();
    let mut s = CheckSummary::default();
    for (v, r) in vectors.iter().zip(results) {
        match r {
            Ok(()) => s.passed += 1,
            Err(e) => s.failures.push(format!("{}: {} {e}", v.location(), v.algorithm)),
        }
    }
    s
}

/// Largest many-hash instance (bytes) that fits the buffer layout.
pub fn max_instance_bytes(alg: Algorithm) -> usize {
    match alg {
        Algorithm::Sha256 | Algorithm::Sm3 => 119,
        Algorithm::Sha512 => 111,
        Algorithm::Sha3_256 | Algorithm::Shake256 => 271,
        Algorithm::Shake128 => 167,
        Algorithm::Aes128 => 32,
        Algorithm::Haraka256 => 32,
        Algorithm::Haraka512 => 64,
    }
}

/// Inputs per simulated program in randomized runs.
pub const RANDOM_BATCH: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOutcome {
    pub algorithm: Algorithm,
    pub cases: usize,
    pub failures: Vec<String>,
}

/// `n` random inputs through the stack and the golden reference. Even
/// batches are many-hash programs of one random length; odd batches are
/// independent long-message runs of random lengths (hashes) or seeded
/// Haraka batches. Deterministic in `seed`.
pub fn random_differential(alg: Algorithm, n: usize, seed: u64, cfg: &TimingConfig) -> DiffOutcome {
    let batches = n.div_ceil(RANDOM_BATCH);
    let results: Vec<(usize, Vec<String>)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(((alg.tag() as u64) << 32) | b as u64);
            let count = RANDOM_BATCH.min(n - b * RANDOM_BATCH);
            let fixed = alg.haraka_mode().is_some() || alg == Algorithm::Aes128;
            let gen = |rng: &mut ChaCha20Rng, len: usize| (0..len).map(|_| rng.gen()).collect::<Vec<u8>>();
            let out_len = if alg.sponge_mode().is_some() { rng.gen_range(1..=200) } else { DEFAULT_OUT_LEN };
            let workloads: Vec<Workload> = if b % 2 == 0 || fixed {
                let len = if fixed { max_instance_bytes(alg) } else { rng.gen_range(0..=max_instance_bytes(alg)) };
                let inputs = (0..count).map(|_| gen(&mut rng, len)).collect();
                let mut w = Workload::many_hash(alg, inputs).unwrap().with_out_len(out_len).unwrap();
                if alg.haraka_mode().is_some() && b % 2 == 1 {
                    let words = rng.gen_range(1..=MAX_SEED_BYTES / 8);
                    w = w.with_seeded_rc(gen(&mut rng, 8 * words), gen(&mut rng, 8 * words)).unwrap();
                }
                vec![w]
            } else {
                (0..count)
                    .map(|_| {
                        let len = rng.gen_range(0..=600);
                        Workload::long_message(alg, gen(&mut rng, len)).unwrap().with_out_len(out_len).unwrap()
                    })
                    .collect()
            };
            let mut failures = Vec::new();
            for w in &workloads {
                let expected = w.expected_outputs().map_err(|e| e.to_string());
                match (run_workload(w, cfg), expected) {
                    (Ok(run), Ok(exp)) => {
                        for (i, (got, want)) in run.outputs.iter().zip(&exp).enumerate() {
                            if got != want {
                                failures.push(format!(
                                    "{alg} batch {b} input {i} ({} bytes): stack {} != reference {}",
                                    w.inputs[i].len(),
                                    hex::encode(got),
                                    hex::encode(want)
                                ));
                            }
                        }
                    }
                    (Err(e), _) => failures.push(format!("{alg} batch {b}: {e}")),
                    (_, Err(e)) => failures.push(format!("{alg} batch {b}: reference failed: {e}")),
                }
            }
            (count, failures)
        })
        .collect();
    DiffOutcome {
        algorithm: alg,
        cases: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().flat_map(|r| r.1).collect(),
    }
}

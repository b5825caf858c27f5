//! Double-buffered schedules: program generation for long-message chaining
//! and many-hash batches, plus compute/DMA overlap analysis.

mod analyze;
mod plan;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

pub use analyze::{analyze, ScheduleTrace};
pub use plan::{plan_long_message, plan_many_hash, Layout, Plan, BATCH_INSTANCES, LONG_RING_SLOTS, RING_BASE};

use crate::config::TimingConfig;
use crate::cpu::{self, ExecutionTrace, TraceSummary};
use crate::primitives::{self, Algorithm, HarakaRcSet};

/// Largest Haraka seed (each of SK and PK) the buffer layout accepts.
pub const MAX_SEED_BYTES: usize = 8 * 24;
pub const DEFAULT_OUT_LEN: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("{0} is not a hash mode; use a many-hash workload")]
    NotHash(Algorithm),
    #[error("planner expects a {0} workload")]
    WrongShape(&'static str),
    #[error("workload has no inputs")]
    Empty,
    #[error("many-hash instances must share one length")]
    MixedLengths,
    #[error("{alg} input must be {expected} bytes, got {actual}")]
    InputLength { alg: Algorithm, expected: usize, actual: usize },
    #[error("{alg} instance needs a {needed}-word buffer region, at most {available} available")]
    SlotCapacity { alg: Algorithm, needed: usize, available: usize },
    #[error("outputs need DM up to word {needed}, only {available} words exist")]
    OutputOverflow { needed: usize, available: usize },
    #[error("invalid Haraka seed: {0}")]
    InvalidSeed(String),
    #[error("invalid output length {0}")]
    OutLen(usize),
}

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("trace of {0} cycles did not halt; analysis refused")]
    Incomplete(u64),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("simulation failed: {0}")]
    Run(#[from] cpu::RunError),
    #[error("workload config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    LongMessage,
    ManyHash,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::LongMessage => "long-message",
            Shape::ManyHash => "many-hash",
        }
    }
}

/// An algorithm, a shape and the concrete inputs to push through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workload {
    pub algorithm: Algorithm,
    pub shape: Shape,
    /// One message (long-message) or one per instance (many-hash).
    pub inputs: Vec<Vec<u8>>,
    /// Haraka only: `(sk, pk)` seeds for derived round constants.
    pub seeded_rc: Option<(Vec<u8>, Vec<u8>)>,
    /// SHAKE output bytes; ignored for fixed-output algorithms.
    pub out_len: usize,
    /// Many-hash SHA-256/SM3: pair instances onto the two MD lanes.
    pub dual_lane: bool,
}

impl Workload {
    pub fn long_message(algorithm: Algorithm, message: Vec<u8>) -> Result<Self, PlanError> {
        if algorithm.md_mode().is_none() && algorithm.sponge_mode().is_none() {
            return Err(PlanError::NotHash(algorithm));
        }
        Ok(Workload {
            algorithm,
            shape: Shape::LongMessage,
            inputs: vec![message],
            seeded_rc: None,
            out_len: DEFAULT_OUT_LEN,
            dual_lane: true,
        })
    }

    pub fn many_hash(algorithm: Algorithm, inputs: Vec<Vec<u8>>) -> Result<Self, PlanError> {
        let first = inputs.first().ok_or(PlanError::Empty)?;
        if inputs.iter().any(|i| i.len() != first.len()) {
            return Err(PlanError::MixedLengths);
        }
        Ok(Workload {
            algorithm,
            shape: Shape::ManyHash,
            inputs,
            seeded_rc: None,
            out_len: DEFAULT_OUT_LEN,
            dual_lane: true,
        })
    }

    /// Seeds must be equal-length, non-empty multiples of 8 bytes.
    pub fn with_seeded_rc(mut self, sk: Vec<u8>, pk: Vec<u8>) -> Result<Self, PlanError> {
        if self.algorithm.haraka_mode().is_none() {
            return Err(PlanError::InvalidSeed(format!("{} takes no seed", self.algorithm)));
        }
        if sk.len() != pk.len() || sk.is_empty() || !sk.len().is_multiple_of(8) || sk.len() > MAX_SEED_BYTES {
            return Err(PlanError::InvalidSeed(format!(
                "sk and pk must be equal multiples of 8 bytes up to {MAX_SEED_BYTES} (got {} and {})",
                sk.len(),
                pk.len()
            )));
        }
        self.seeded_rc = Some((sk, pk));
        Ok(self)
    }

    /// Run every many-hash instance on one MD lane.
    pub fn with_single_lane(mut self) -> Self {
        self.dual_lane = false;
        self
    }

    pub fn with_out_len(mut self, out_len: usize) -> Result<Self, PlanError> {
        if out_len == 0 {
            return Err(PlanError::OutLen(out_len));
        }
        self.out_len = out_len;
        Ok(self)
    }

    /// Golden-reference outputs, one per output record of the plan.
    pub fn expected_outputs(&self) -> Result<Vec<Vec<u8>>, primitives::PrimitiveError> {
        let rc = match &self.seeded_rc {
            Some((sk, pk)) => HarakaRcSet::derive(sk, pk)?,
            None => HarakaRcSet::standard(),
        };
        self.inputs
            .iter()
            .map(|m| match self.algorithm.haraka_mode() {
                Some(mode) => primitives::haraka(mode, m, &rc).map(|d| d.into_bytes()),
                None => primitives::compute(self.algorithm, m, self.out_len).map(|d| d.into_bytes()),
            })
            .collect()
    }
}

/// Dispatch to the planner for the workload's shape.
pub fn plan(w: &Workload) -> Result<Plan, PlanError> {
    match w.shape {
        Shape::LongMessage => plan_long_message(w),
        Shape::ManyHash => plan_many_hash(w),
    }
}

/// Result of running a planned workload on the simulated core.
#[derive(Clone, Debug)]
pub struct WorkloadRun {
    pub plan: Plan,
    pub outputs: Vec<Vec<u8>>,
    pub schedule: ScheduleTrace,
    pub summary: TraceSummary,
    pub trace: ExecutionTrace,
}

pub const RUN_CYCLE_LIMIT: u64 = 50_000_000;

pub fn run_workload(w: &Workload, cfg: &TimingConfig) -> Result<WorkloadRun, ScheduleError> {
    let plan = plan(w)?;
    let out = cpu::run(&plan.program, cfg, RUN_CYCLE_LIMIT)?;
    let outputs = plan.layout.extract(out.state.dm().words());
    let schedule = analyze(&out.trace)?;
    Ok(WorkloadRun { outputs, schedule, summary: out.trace.summary(), trace: out.trace, plan })
}

/// Text workload description: `key = value` lines, `#` comments.
///
/// Keys: `algorithm`, `shape` (long-message | many-hash), `bytes` (message
/// or per-instance length), `instances`, `seed`, `out_len`, `sk`, `pk` (hex),
/// and `timing.<knob>` overrides applied to the base timing config.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkloadSpec {
    pub algorithm: Algorithm,
    pub shape: Shape,
    pub bytes: usize,
    pub instances: usize,
    pub seed: u64,
    pub out_len: usize,
    pub seeds: Option<(Vec<u8>, Vec<u8>)>,
    pub timing: TimingConfig,
}

impl WorkloadSpec {
    pub fn parse(text: &str, base: &TimingConfig) -> Result<Self, ScheduleError> {
        let mut algorithm = None;
        let mut shape = Shape::LongMessage;
        let mut bytes = None;
        let mut instances = 1;
        let mut seed = 0;
        let mut out_len = DEFAULT_OUT_LEN;
        let (mut sk, mut pk) = (None, None);
        let mut timing = base.clone();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| ScheduleError::Config { line, msg };
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected key = value, got `{content}`")))?;
            let num = |v: &str| v.parse::<usize>().map_err(|e| err(format!("{k}: {e}")));
            match k {
                "algorithm" => algorithm = Some(v.parse::<Algorithm>().map_err(|e| err(e.to_string()))?),
                "shape" => {
                    shape = match v {
                        "long-message" | "long" => Shape::LongMessage,
                        "many-hash" | "many" => Shape::ManyHash,
                        _ => return Err(err(format!("unknown shape `{v}`"))),
                    }
                }
                "bytes" => bytes = Some(num(v)?),
                "instances" => instances = num(v)?,
                "seed" => seed = v.parse().map_err(|e| err(format!("seed: {e}")))?,
                "out_len" => out_len = num(v)?,
                "sk" => sk = Some(hex::decode(v).map_err(|e| err(format!("sk: {e}")))?),
                "pk" => pk = Some(hex::decode(v).map_err(|e| err(format!("pk: {e}")))?),
                t if t.starts_with("timing.") => timing.set(&t["timing.".len()..], v).map_err(err)?,
                _ => return Err(err(format!("unknown key `{k}`"))),
            }
        }
        let err = |msg: &str| ScheduleError::Config { line: 0, msg: msg.to_string() };
        let algorithm = algorithm.ok_or_else(|| err("missing `algorithm`"))?;
        let bytes = match (bytes, algorithm.haraka_mode()) {
            (Some(b), _) => b,
            (None, Some(m)) => m.input_bytes(),
            (None, None) if algorithm == Algorithm::Aes128 => 32,
            (None, None) => return Err(err("missing `bytes`")),
        };
        if instances == 0 {
            return Err(err("`instances` must be positive"));
        }
        let seeds = match (sk, pk) {
            (Some(s), Some(p)) => Some((s, p)),
            (None, None) => None,
            _ => return Err(err("`sk` and `pk` must be given together")),
        };
        timing.validate().map_err(|e| err(&e.to_string()))?;
        Ok(WorkloadSpec { algorithm, shape, bytes, instances, seed, out_len, seeds, timing })
    }

    /// Materialise random inputs from `seed`.
    pub fn build(&self) -> Result<Workload, PlanError> {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        let mut gen = |n: usize| (0..n).map(|_| rng.gen()).collect::<Vec<u8>>();
        let w = match self.shape {
            Shape::LongMessage => Workload::long_message(self.algorithm, gen(self.bytes))?,
            Shape::ManyHash => {
                let inputs = (0..self.instances).map(|_| gen(self.bytes)).collect();
                Workload::many_hash(self.algorithm, inputs)?
            }
        };
        let w = w.with_out_len(self.out_len)?;
        match &self.seeds {
            Some((sk, pk)) => w.with_seeded_rc(sk.clone(), pk.clone()),
            None => Ok(w),
        }
    }
}

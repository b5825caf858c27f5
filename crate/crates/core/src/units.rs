//! Functional and timing models of the three unified engines.
//!
//! Functionally every job defers to [`crate::primitives`]; the result is
//! computed from a snapshot of the buffer taken at dispatch and written back
//! when the countdown reaches zero.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::config::TimingConfig;
use crate::isa::DispatchOp;
use crate::memsys::{InternalBuffer, BUF_WORDS};
use crate::primitives::{
    self, aes, haraka::RC_COUNT, keccak, AesBlock, Algorithm, ChainState, HarakaRcSet, MdMode,
    PrimitiveError,
};
use crate::{bytes_to_words, words_to_bytes, Word};

/// Buffer index where the MD engine reads its round-constant table.
pub const MD_CONST_BASE: usize = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineKind {
    Md,
    AesHaraka,
    Keccak,
}

impl EngineKind {
    pub const ALL: [EngineKind; 3] = [EngineKind::Md, EngineKind::AesHaraka, EngineKind::Keccak];

    pub fn for_algorithm(alg: Algorithm) -> EngineKind {
        if alg.md_mode().is_some() {
            EngineKind::Md
        } else if alg.sponge_mode().is_some() {
            EngineKind::Keccak
        } else {
            EngineKind::AesHaraka
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Md => "md",
            EngineKind::AesHaraka => "aes",
            EngineKind::Keccak => "keccak",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitError {
    #[error("{0} engine is busy")]
    Busy(EngineKind),
    #[error("{alg} cannot run on the {engine} engine")]
    ModeMismatch { engine: EngineKind, alg: Algorithm },
    #[error("invalid job: {0}")]
    InvalidMode(String),
    #[error("{what} range {start}..{end} exceeds the {BUF_WORDS}-word buffer")]
    Range { what: &'static str, start: usize, end: usize },
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
}

/// Words of MD round constants the engine reads from the buffer.
pub fn md_constant_words(mode: MdMode) -> usize {
    mode.rounds() * if mode == MdMode::Sha512 { 8 } else { 4 } / 8
}

fn md_state_words(mode: MdMode) -> usize {
    mode.digest_bytes() / 8
}

fn md_block_words(mode: MdMode) -> usize {
    mode.block_bytes() / 8
}

/// One dispatched computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineJob {
    pub alg: Algorithm,
    pub op: DispatchOp,
    pub state_base: usize,
    pub msg_base: usize,
    /// Blocks (MD, Keccak, AES), inputs (Haraka), permutations (Keccak
    /// permute) or seed words (RC precompute).
    pub count: usize,
}

impl EngineJob {
    pub fn new(alg: Algorithm, op: DispatchOp, state_base: usize, msg_base: usize, count: usize) -> Self {
        EngineJob { alg, op, state_base, msg_base, count }
    }

    pub fn engine(&self) -> EngineKind {
        EngineKind::for_algorithm(self.alg)
    }

    pub fn dual_lane(&self) -> bool {
        self.op == DispatchOp::Dual
    }

    /// Pipeline iterations per block: 64/80 MD rounds, 12 unrolled Keccak
    /// steps, 10 AES rounds, 32/64 AES-round applications for Haraka.
    pub fn rounds(&self) -> usize {
        if let Some(m) = self.alg.md_mode() {
            return m.rounds();
        }
        if self.alg.sponge_mode().is_some() {
            return keccak::ROUNDS / 2;
        }
        match self.alg.haraka_mode() {
            Some(h) => h.engine_rounds(),
            None => aes::ROUNDS,
        }
    }

    /// Buffer words read as state (or key / constants) input.
    pub fn state_range(&self) -> Range<usize> {
        let len = match (self.alg, self.op) {
            (_, DispatchOp::RcPrecompute) => 2 * RC_COUNT,
            (a, op) if a.md_mode().is_some() => {
                md_state_words(a.md_mode().unwrap()) * if op == DispatchOp::Dual { 2 } else { 1 }
            }
            (a, _) if a.sponge_mode().is_some() => keccak::LANES,
            (Algorithm::Aes128, _) => 2,
            (a, _) => 2 * a.haraka_mode().unwrap().constants_used(),
        };
        self.state_base..self.state_base + len
    }

    /// Buffer words read as message input.
    pub fn msg_range(&self) -> Range<usize> {
        let len = match (self.alg, self.op) {
            (_, DispatchOp::RcPrecompute) => 2 * self.count,
            (_, DispatchOp::Permute) => 0,
            (a, op) if a.md_mode().is_some() => {
                md_block_words(a.md_mode().unwrap())
                    * self.count
                    * if op == DispatchOp::Dual { 2 } else { 1 }
            }
            (a, _) if a.sponge_mode().is_some() => a.sponge_mode().unwrap().rate_lanes() * self.count,
            (Algorithm::Aes128, _) => 2 * self.count,
            (a, _) => a.haraka_mode().unwrap().input_bytes() / 8 * self.count,
        };
        self.msg_base..self.msg_base + len
    }

    /// Buffer words overwritten at completion.
    pub fn output_ranges(&self) -> Vec<Range<usize>> {
        match (self.alg, self.op) {
            (_, DispatchOp::RcPrecompute) => vec![self.state_range()],
            (Algorithm::Aes128, _) => vec![self.msg_range()],
            (a, _) if a.haraka_mode().is_some() => {
                let stride = a.haraka_mode().unwrap().input_bytes() / 8;
                (0..self.count)
                    .map(|i| self.msg_base + i * stride..self.msg_base + i * stride + 4)
                    .collect()
            }
            _ => vec![self.state_range()],
        }
    }

    pub fn validate(&self) -> Result<(), UnitError> {
        if self.count == 0 {
            return Err(UnitError::InvalidMode("count must be at least 1".into()));
        }
        if !crate::isa::op_valid_for(self.alg, self.op) {
            return Err(UnitError::InvalidMode(format!("{:?} is not defined for {}", self.op, self.alg)));
        }
        for (what, r) in [("state", self.state_range()), ("message", self.msg_range())] {
            if r.end > BUF_WORDS {
                return Err(UnitError::Range { what, start: r.start, end: r.end });
            }
        }
        Ok(())
    }

    /// Busy duration in cycles under `cfg`.
    pub fn cycles(&self, cfg: &TimingConfig) -> u64 {
        let n = self.count as u64;
        let rounds = self.rounds() as u64;
        let c = match self.engine() {
            EngineKind::Md => cfg.md_dispatch_overhead + n * (cfg.md_fill + rounds),
            EngineKind::Keccak => cfg.keccak_dispatch_overhead + n * (cfg.keccak_fill + rounds),
            EngineKind::AesHaraka => match self.op {
                DispatchOp::RcPrecompute => cfg
                    .rc_precompute_cycles
                    .unwrap_or_else(|| rc_precompute_default(16 * self.count, cfg)),
                _ if self.alg == Algorithm::Aes128 => {
                    cfg.aes_dispatch_overhead + cfg.aes_fill + cfg.aes_key_schedule_cycles + n * rounds
                }
                _ => cfg.aes_dispatch_overhead + cfg.aes_fill + n * rounds,
            },
        };
        c.max(1)
    }
}

/// Cycles the Keccak engine model would need for SHAKE256 over
/// `seed_bytes` of SK||PK producing the full constant set.
pub fn rc_precompute_default(seed_bytes: usize, cfg: &TimingConfig) -> u64 {
    let rate = primitives::SpongeMode::Shake256.rate_bytes();
    let absorb = (seed_bytes + 1).div_ceil(rate);
    let squeeze = (16 * RC_COUNT).div_ceil(rate) - 1;
    (absorb + squeeze) as u64 * (cfg.keccak_fill + (keccak::ROUNDS / 2) as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct EngineStatus {
    pub busy: bool,
    pub cycles_remaining: u64,
    pub result_ready: bool,
}

fn read_bytes(buf: &[Word], r: Range<usize>) -> Vec<u8> {
    words_to_bytes(&buf[r.clone()], 8 * r.len())
}

/// Compute the words a job writes, from the buffer as it is now.
pub fn execute(job: &EngineJob, buf: &[Word]) -> Result<Vec<(usize, Vec<Word>)>, UnitError> {
    job.validate()?;
    let state = read_bytes(buf, job.state_range());
    let msg = read_bytes(buf, job.msg_range());
    let mut writes = Vec::new();
    match job.engine() {
        EngineKind::Md => {
            let mode = job.alg.md_mode().unwrap();
            let kw = md_constant_words(mode);
            let constants = read_bytes(buf, MD_CONST_BASE..MD_CONST_BASE + kw);
            let sb = mode.digest_bytes();
            let bb = mode.block_bytes();
            let lanes = if job.dual_lane() { 2 } else { 1 };
            let mut out = Vec::new();
            for lane in 0..lanes {
                let mut s = primitives::md_state_from_bytes(mode, &state[lane * sb..(lane + 1) * sb])?;
                let blocks = &msg[lane * job.count * bb..(lane + 1) * job.count * bb];
                for block in blocks.chunks_exact(bb) {
                    s = primitives::md_compress_with_constants(mode, &s, block, &constants)?;
                }
                out.extend(s.to_bytes());
            }
            writes.push((job.state_base, bytes_to_words(&out)));
        }
        EngineKind::Keccak => {
            let mode = job.alg.sponge_mode().unwrap();
            let mut lanes = [0u64; keccak::LANES];
            if job.op != DispatchOp::InitAbsorb {
                lanes.copy_from_slice(&buf[job.state_range()]);
            }
            if job.op == DispatchOp::Permute {
                for _ in 0..job.count {
                    keccak::f1600(&mut lanes);
                }
            } else {
                for block in msg.chunks_exact(mode.rate_bytes()) {
                    keccak::absorb_block(&mut lanes, block);
                    let next = primitives::keccak_f1600(&ChainState::Keccak(lanes))?;
                    let ChainState::Keccak(l) = next else { unreachable!() };
                    lanes = l;
                }
            }
            writes.push((job.state_base, lanes.to_vec()));
        }
        EngineKind::AesHaraka => match (job.alg, job.op) {
            (_, DispatchOp::RcPrecompute) => {
                let (sk, pk) = msg.split_at(8 * job.count);
                let rc = primitives::haraka_rc_derive(sk, pk)?;
                writes.push((job.state_base, bytes_to_words(&rc.to_bytes())));
            }
            (Algorithm::Aes128, op) => {
                let key: [u8; 16] = state[..16].try_into().unwrap();
                let schedule = aes::expand_key(&key);
                let mut out = Vec::with_capacity(msg.len());
                for block in msg.chunks_exact(16) {
                    let b = AesBlock::from_slice(block)?;
                    let r = if op == DispatchOp::Decrypt {
                        aes::decrypt_with_schedule(&schedule, b)
                    } else {
                        aes::encrypt_with_schedule(&schedule, b)
                    };
                    out.extend_from_slice(&r.0);
                }
                writes.push((job.msg_base, bytes_to_words(&out)));
            }
            (alg, _) => {
                let mode = alg.haraka_mode().unwrap();
                let rc = HarakaRcSet::from_bytes(&state);
                let stride = mode.input_bytes();
                for (i, input) in msg.chunks_exact(stride).enumerate() {
                    let d = primitives::haraka(mode, input, &rc)?;
                    writes.push((job.msg_base + i * stride / 8, bytes_to_words(d.as_bytes())));
                }
            }
        },
    }
    Ok(writes)
}

/// One engine's countdown and pending result.
#[derive(Clone, Debug)]
pub struct Engine {
    kind: EngineKind,
    remaining: u64,
    result_ready: bool,
    pending: Vec<(usize, Vec<Word>)>,
    busy_cycles: u64,
    jobs: u64,
}

impl Engine {
    pub fn new(kind: EngineKind) -> Self {
        Engine {
            kind,
            remaining: 0,
            result_ready: false,
            pending: Vec::new(),
            busy_cycles: 0,
            jobs: 0,
        }
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }

    pub fn is_busy(&self) -> bool {
        self.remaining > 0
    }

    pub fn status(&self) -> EngineStatus {
        EngineStatus {
            busy: self.is_busy(),
            cycles_remaining: self.remaining,
            result_ready: self.result_ready,
        }
    }

    /// Total cycles this engine has spent busy.
    pub fn busy_cycles(&self) -> u64 {
        self.busy_cycles
    }

    pub fn jobs_completed(&self) -> u64 {
        self.jobs
    }

    pub fn dispatch(
        &mut self,
        job: &EngineJob,
        buf: &InternalBuffer,
        cfg: &TimingConfig,
    ) -> Result<EngineStatus, UnitError> {
        if self.is_busy() {
            return Err(UnitError::Busy(self.kind));
        }
        if job.engine() != self.kind {
            return Err(UnitError::ModeMismatch { engine: self.kind, alg: job.alg });
        }
        self.pending = execute(job, buf.words())?;
        self.remaining = job.cycles(cfg);
        self.result_ready = false;
        Ok(self.status())
    }

    /// Dual-lane MD dispatch; rejects jobs that are not dual-lane capable.
    pub fn dual_lane_dispatch(
        &mut self,
        job: &EngineJob,
        buf: &InternalBuffer,
        cfg: &TimingConfig,
    ) -> Result<EngineStatus, UnitError> {
        if !matches!(job.alg, Algorithm::Sha256 | Algorithm::Sm3) {
            return Err(UnitError::InvalidMode(format!("dual-lane mode is not defined for {}", job.alg)));
        }
        let job = EngineJob { op: DispatchOp::Dual, ..*job };
        self.dispatch(&job, buf, cfg)
    }

    /// Seeded Haraka constant derivation. The SK words at `seed_base` are
    /// followed by the same number of PK words; constants land at `dest`.
    pub fn haraka_rc_precompute(
        &mut self,
        seed_base: usize,
        seed_words: usize,
        dest: usize,
        buf: &InternalBuffer,
        cfg: &TimingConfig,
    ) -> Result<EngineStatus, UnitError> {
        let job = EngineJob::new(Algorithm::Haraka512, DispatchOp::RcPrecompute, dest, seed_base, seed_words);
        self.dispatch(&job, buf, cfg)
    }

    /// Advance one cycle; at zero the pending result is written.
    pub fn tick(&mut self, buf: &mut InternalBuffer) -> EngineStatus {
        if self.remaining == 0 {
            return self.status();
        }
        self.busy_cycles += 1;
        self.remaining -= 1;
        if self.remaining == 0 {
            for (base, words) in self.pending.drain(..) {
                buf.write_slice(base, &words).expect("validated at dispatch");
            }
            self.result_ready = true;
            self.jobs += 1;
        }
        self.status()
    }
}

/// The three engines together.
#[derive(Clone, Debug)]
pub struct Units {
    engines: [Engine; 3],
}

impl Default for Units {
    fn default() -> Self {
        Units { engines: EngineKind::ALL.map(Engine::new) }
    }
}

impl Units {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn engine(&self, kind: EngineKind) -> &Engine {
        &self.engines[kind.index()]
    }

    pub fn engine_mut(&mut self, kind: EngineKind) -> &mut Engine {
        &mut self.engines[kind.index()]
    }

    pub fn dispatch(
        &mut self,
        job: &EngineJob,
        buf: &InternalBuffer,
        cfg: &TimingConfig,
    ) -> Result<EngineStatus, UnitError> {
        self.engine_mut(job.engine()).dispatch(job, buf, cfg)
    }

    /// Tick every engine except those flagged in `skip` (dispatched during
    /// the current cycle, so their countdown starts next cycle).
    pub fn tick(&mut self, buf: &mut InternalBuffer, skip: [bool; 3]) {
        for (e, skip) in self.engines.iter_mut().zip(skip) {
            if !skip {
                e.tick(buf);
            }
        }
    }

    pub fn busy_flags(&self) -> [bool; 3] {
        [0, 1, 2].map(|i| self.engines[i].is_busy())
    }

    pub fn any_busy(&self) -> bool {
        self.engines.iter().any(Engine::is_busy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_word_counts() {
        assert_eq!(md_constant_words(MdMode::Sha256), 32);
        assert_eq!(md_constant_words(MdMode::Sm3), 32);
        assert_eq!(md_constant_words(MdMode::Sha512), 80);
    }

    #[test]
    fn default_rc_precompute_is_five_permutations() {
        assert_eq!(rc_precompute_default(32, &TimingConfig::default()), 5 * 14);
    }

    #[test]
    fn haraka_outputs_overwrite_input_heads() {
        let job = EngineJob::new(Algorithm::Haraka512, DispatchOp::Default, 0, 80, 2);
        assert_eq!(job.output_ranges(), vec![80..84, 88..92]);
        assert!(job.validate().is_ok());
        let job = EngineJob::new(Algorithm::Haraka512, DispatchOp::Default, 0, 80, 7);
        assert!(matches!(job.validate(), Err(UnitError::Range { .. })));
    }
}

//! Program generation for the two workload shapes.
//!
//! DM layout (words): constant image at 0, DM ring at [`RING_BASE`], output
//! area after the ring. Buffer layout: constants from 0, then two ping-pong
//! regions. Messages are padded host-side and streamed host -> DM ring by
//! DMA, then DM -> buffer region by BUF_LOAD while the engine works on the
//! other region.

use super::{PlanError, Shape, Workload};
use crate::isa::{AluImmOp, DispatchOp, Instruction, Program, Reg, WaitTarget};
use crate::memsys::{BUF_WORDS, DM_WORDS};
use crate::primitives::{self, keccak, Algorithm, HarakaRcSet, MdMode};
use crate::units::{md_constant_words, EngineKind};
use crate::{bytes_to_words, words_to_bytes, Word};

pub const RING_BASE: usize = 128;
pub const LONG_RING_SLOTS: usize = 4;
/// Instances held by one lap of the many-hash ring.
pub const BATCH_INSTANCES: usize = 8;

const HOST_REG: Reg = 1;
const DM_REG: Reg = 2;
/// Words reserved at buffer 0 for Haraka constants (a full derived set).
const HARAKA_CONST_WORDS: usize = 2 * primitives::haraka::RC_COUNT;

/// Where results land in DM.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub ring_base: usize,
    pub ring_slots: usize,
    pub slot_words: usize,
    /// Buffer indices of the two ping-pong regions.
    pub regions: [usize; 2],
    pub out_base: usize,
    /// Words per output record.
    pub out_words: usize,
    /// Bytes per output record.
    pub out_bytes: usize,
    pub outputs: usize,
}

impl Layout {
    /// Output records read back from a DM image.
    pub fn extract(&self, dm: &[Word]) -> Vec<Vec<u8>> {
        (0..self.outputs)
            .map(|i| {
                let base = self.out_base + i * self.out_words;
                words_to_bytes(&dm[base..base + self.out_words], self.out_bytes)
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub program: Program,
    pub layout: Layout,
    /// Number of dispatch groups streamed through the ring.
    pub groups: usize,
}

/// One DMA + BUF_LOAD + dispatch unit.
struct Group {
    /// Words copied host -> DM slot -> buffer region.
    words: Vec<Word>,
    op: DispatchOp,
    /// Output record indices produced by this group, in lane order.
    outputs: Vec<usize>,
}

/// Engine-specific placement within a region.
struct Placement {
    alg: Algorithm,
    /// Buffer offset within the region where the slot is loaded.
    load_off: usize,
    /// Buffer index of the chaining state, relative to the region when
    /// `state_in_region`, absolute otherwise.
    state: usize,
    state_in_region: bool,
    msg_off: usize,
    count: usize,
}

struct Emitter {
    code: Vec<Instruction>,
}

impl Emitter {
    fn push(&mut self, i: Instruction) {
        self.code.push(i);
    }

    fn li(&mut self, rd: Reg, v: usize) {
        let v = v as i64;
        if (-2048..2048).contains(&v) {
            self.push(Instruction::AluImm { op: AluImmOp::Addi, rd, rs1: 0, imm: v as i32 });
            return;
        }
        let hi = (v + 0x800) >> 12;
        let lo = v - (hi << 12);
        self.push(Instruction::Lui { rd, imm: hi as i32 });
        if lo != 0 {
            self.push(Instruction::AluImm { op: AluImmOp::Addi, rd, rs1: rd, imm: lo as i32 });
        }
    }

    fn dma(&mut self, host: usize, dm: usize, count: usize) {
        self.li(HOST_REG, host);
        self.li(DM_REG, dm);
        self.push(Instruction::DmaStart { rs1: HOST_REG, rs2: DM_REG, count: count as u16 });
    }

    fn buf_load(&mut self, buf: usize, dm: usize, count: usize) {
        self.push(Instruction::BufLoad { buf: buf as u8, dm: dm as u16, count: count as u8 });
    }

    fn buf_store(&mut self, buf: usize, dm: usize, count: usize) {
        self.push(Instruction::BufStore { buf: buf as u8, dm: dm as u16, count: count as u8 });
    }

    fn dispatch(&mut self, alg: Algorithm, op: DispatchOp, state: usize, msg: usize, count: usize) {
        self.push(Instruction::CryptoDispatch {
            alg,
            op,
            state: state as u8,
            msg: msg as u8,
            count: count as u8,
        });
    }

    fn wait(&mut self, alg: Algorithm) {
        let target = match EngineKind::for_algorithm(alg) {
            EngineKind::Md => WaitTarget::Md,
            EngineKind::AesHaraka => WaitTarget::AesHaraka,
            EngineKind::Keccak => WaitTarget::Keccak,
        };
        self.push(Instruction::CryptoWait { target });
    }

    /// Store `words` of sponge output from `state`, permuting between rate
    /// chunks.
    fn squeeze(&mut self, alg: Algorithm, state: usize, out: usize, words: usize) {
        let rate = alg.sponge_mode().unwrap().rate_lanes();
        let mut done = 0;
        loop {
            let n = rate.min(words - done);
            self.buf_store(state, out + done, n);
            done += n;
            if done == words {
                break;
            }
            self.dispatch(alg, DispatchOp::Permute, state, state, 1);
            self.wait(alg);
        }
    }
}

fn out_record(alg: Algorithm, out_len: usize) -> (usize, usize) {
    let bytes = match alg {
        a if a.md_mode().is_some() => a.md_mode().unwrap().digest_bytes(),
        a if a.sponge_mode().is_some() => a.sponge_mode().unwrap().fixed_output().unwrap_or(out_len),
        Algorithm::Aes128 => 16,
        _ => 32,
    };
    (bytes.div_ceil(8), bytes)
}

/// Generic streaming schedule: prologue, then per group
/// `dma_wait; buf_load; dma_start(next); crypto_wait; dispatch; store(prev)`.
fn emit(
    prologue: &mut Emitter,
    shape: &Placement,
    groups: &[Group],
    layout: &Layout,
    host: &mut Vec<Word>,
) -> Vec<Instruction> {
    let alg = shape.alg;
    let slot = |g: usize| layout.ring_base + (g % layout.ring_slots) * layout.slot_words;
    let mut host_addr = Vec::with_capacity(groups.len());
    for g in groups {
        host_addr.push(host.len());
        host.extend_from_slice(&g.words);
    }
    let e = prologue;
    e.dma(host_addr[0], slot(0), groups[0].words.len());
    let squeeze_needed = alg.sponge_mode().is_some() && layout.out_words > alg.sponge_mode().unwrap().rate_lanes();
    let store = |e: &mut Emitter, gi: usize| {
        let g = &groups[gi];
        let region = layout.regions[gi % 2];
        let state = if shape.state_in_region { region + shape.state } else { shape.state };
        let Some(&first) = g.outputs.first() else { return };
        let out = layout.out_base + first * layout.out_words;
        match alg {
            a if a.sponge_mode().is_some() => e.squeeze(a, state, out, layout.out_words),
            Algorithm::Aes128 => e.buf_store(region + shape.msg_off, out, layout.out_words),
            a if a.haraka_mode().is_some() => e.buf_store(region + shape.msg_off, out, layout.out_words),
            _ => e.buf_store(state, out, layout.out_words * g.outputs.len()),
        }
    };
    for (gi, g) in groups.iter().enumerate() {
        let region = layout.regions[gi % 2];
        e.push(Instruction::DmaWait);
        e.buf_load(region + shape.load_off, slot(gi), g.words.len());
        if let Some(next) = groups.get(gi + 1) {
            e.dma(host_addr[gi + 1], slot(gi + 1), next.words.len());
        }
        e.wait(alg);
        if gi > 0 && squeeze_needed {
            store(e, gi - 1);
        }
        let state = if shape.state_in_region { region + shape.state } else { shape.state };
        e.dispatch(alg, g.op, state, region + shape.msg_off, shape.count);
        if gi > 0 && !squeeze_needed {
            store(e, gi - 1);
        }
    }
    e.wait(alg);
    store(e, groups.len() - 1);
    e.push(Instruction::Halt);
    std::mem::take(&mut e.code)
}

fn finish(
    code: Vec<Instruction>,
    dm_image: Vec<Word>,
    host: Vec<Word>,
    layout: Layout,
    groups: usize,
) -> Result<Plan, PlanError> {
    if layout.out_base + layout.outputs * layout.out_words > DM_WORDS {
        return Err(PlanError::OutputOverflow {
            needed: layout.out_base + layout.outputs * layout.out_words,
            available: DM_WORDS,
        });
    }
    let program = Program { instructions: code, dm_image, host_image: host };
    Ok(Plan { program, layout, groups })
}

fn md_const_image(mode: MdMode) -> Vec<Word> {
    bytes_to_words(&primitives::md_constant_bytes(mode))
}

fn md_iv(mode: MdMode) -> Vec<Word> {
    bytes_to_words(&primitives::md_initial_state(mode).to_bytes())
}

/// Long-message chaining: constants and chaining state stay resident; one
/// block per ping-pong region.
pub fn plan_long_message(w: &Workload) -> Result<Plan, PlanError> {
    let Shape::LongMessage = w.shape else {
        return Err(PlanError::WrongShape("long-message"));
    };
    let alg = w.algorithm;
    let msg = &w.inputs[0];
    let mut e = Emitter { code: Vec::new() };
    let (out_words, out_bytes) = out_record(alg, w.out_len);
    let (padded, block_words, state, dm_image, op0) = if let Some(mode) = alg.md_mode() {
        let kw = md_constant_words(mode);
        let mut image = md_const_image(mode);
        image.extend(md_iv(mode));
        e.buf_load(0, 0, image.len());
        (primitives::md_pad(mode, msg), mode.block_bytes() / 8, kw, image, DispatchOp::Default)
    } else if let Some(mode) = alg.sponge_mode() {
        (keccak::pad(mode, msg), mode.rate_lanes(), 0, Vec::new(), DispatchOp::InitAbsorb)
    } else {
        return Err(PlanError::NotHash(alg));
    };
    let state_words = if alg.md_mode().is_some() { out_words } else { keccak::LANES };
    let a = state + state_words;
    let words = bytes_to_words(&padded);
    let groups: Vec<Group> = words
        .chunks(block_words)
        .enumerate()
        .map(|(i, c)| Group {
            words: c.to_vec(),
            op: if i == 0 { op0 } else { DispatchOp::Default },
            outputs: if i + 1 == words.len() / block_words { vec![0] } else { vec![] },
        })
        .collect();
    let layout = Layout {
        ring_base: RING_BASE,
        ring_slots: LONG_RING_SLOTS,
        slot_words: block_words,
        regions: [a, a + block_words],
        out_base: RING_BASE + LONG_RING_SLOTS * block_words,
        out_words,
        out_bytes,
        outputs: 1,
    };
    let shape = Placement { alg, load_off: 0, state, state_in_region: false, msg_off: 0, count: 1 };
    let mut host = Vec::new();
    let code = emit(&mut e, &shape, &groups, &layout, &mut host);
    let n = groups.len();
    finish(code, dm_image, host, layout, n)
}

fn slot_error(alg: Algorithm, needed: usize, available: usize) -> PlanError {
    PlanError::SlotCapacity { alg, needed, available }
}

/// Builds the DM words of one group from its instances.
type GroupWords = Box<dyn Fn(&[&Vec<u8>]) -> Vec<Word>>;

/// Many independent hashes through an 8-instance circular DM region, SHA-256
/// and SM3 paired onto the two MD lanes.
pub fn plan_many_hash(w: &Workload) -> Result<Plan, PlanError> {
    let Shape::ManyHash = w.shape else {
        return Err(PlanError::WrongShape("many-hash"));
    };
    let alg = w.algorithm;
    let n = w.inputs.len();
    let len = w.inputs[0].len();
    let mut e = Emitter { code: Vec::new() };
    let (out_words, out_bytes) = out_record(alg, w.out_len);
    let mut dm_image = Vec::new();
    let lanes = if matches!(alg, Algorithm::Sha256 | Algorithm::Sm3) && n > 1 && w.dual_lane { 2 } else { 1 };
    let (base, region_words, shape, words_of): (usize, usize, Placement, GroupWords) =
        if let Some(mode) = alg.md_mode() {
            let kw = md_constant_words(mode);
            dm_image = md_const_image(mode);
            e.buf_load(0, 0, kw);
            let sw = out_words;
            let blocks = primitives::md_pad(mode, &w.inputs[0]).len() / mode.block_bytes();
            let region = lanes * (sw + blocks * mode.block_bytes() / 8);
            let iv = md_iv(mode);
            let shape = Placement { alg, load_off: 0, state: 0, state_in_region: true, msg_off: lanes * sw, count: blocks };
            let f = move |msgs: &[&Vec<u8>]| {
                let mut words = Vec::new();
                for _ in 0..lanes {
                    words.extend(&iv);
                }
                for m in msgs {
                    words.extend(bytes_to_words(&primitives::md_pad(mode, m)));
                }
                words
            };
            (kw, region, shape, Box::new(f))
        } else if let Some(mode) = alg.sponge_mode() {
            let blocks = keccak::pad(mode, &w.inputs[0]).len() / mode.rate_bytes();
            let region = keccak::LANES + blocks * mode.rate_lanes();
            let shape = Placement { alg, load_off: keccak::LANES, state: 0, state_in_region: true, msg_off: keccak::LANES, count: blocks };
            let f = move |msgs: &[&Vec<u8>]| bytes_to_words(&keccak::pad(mode, msgs[0]));
            (0, region, shape, Box::new(f))
        } else if alg == Algorithm::Aes128 {
            if len != 32 {
                return Err(PlanError::InputLength { alg, expected: 32, actual: len });
            }
            let shape = Placement { alg, load_off: 0, state: 0, state_in_region: true, msg_off: 2, count: 1 };
            (0, 4, shape, Box::new(|msgs: &[&Vec<u8>]| bytes_to_words(msgs[0])))
        } else {
            let mode = alg.haraka_mode().unwrap();
            if len != mode.input_bytes() {
                return Err(PlanError::InputLength { alg, expected: mode.input_bytes(), actual: len });
            }
            match &w.seeded_rc {
                Some((sk, pk)) => {
                    let seed_words = sk.len() / 8;
                    dm_image = bytes_to_words(sk);
                    dm_image.extend(bytes_to_words(pk));
                    e.buf_load(HARAKA_CONST_WORDS, 0, dm_image.len());
                    e.dispatch(Algorithm::Haraka512, DispatchOp::RcPrecompute, 0, HARAKA_CONST_WORDS, seed_words);
                }
                None => {
                    let cw = 2 * mode.constants_used();
                    dm_image = bytes_to_words(&HarakaRcSet::standard().to_bytes())[..cw].to_vec();
                    e.buf_load(0, 0, cw);
                }
            }
            let iw = mode.input_bytes() / 8;
            let shape = Placement { alg, load_off: 0, state: 0, state_in_region: false, msg_off: 0, count: 1 };
            (HARAKA_CONST_WORDS, iw, shape, Box::new(|msgs: &[&Vec<u8>]| bytes_to_words(msgs[0])))
        };
    if base + 2 * region_words > BUF_WORDS {
        return Err(slot_error(alg, region_words, (BUF_WORDS - base) / 2));
    }
    let refs: Vec<&Vec<u8>> = w.inputs.iter().collect();
    let groups: Vec<Group> = refs
        .chunks(lanes)
        .enumerate()
        .map(|(gi, chunk)| Group {
            words: words_of(chunk),
            op: if chunk.len() == 2 { DispatchOp::Dual } else if alg.sponge_mode().is_some() { DispatchOp::InitAbsorb } else { DispatchOp::Default },
            outputs: (gi * lanes..gi * lanes + chunk.len()).collect(),
        })
        .collect();
    let slot_words = groups.iter().map(|g| g.words.len()).max().unwrap();
    let ring_slots = BATCH_INSTANCES / lanes;
    let layout = Layout {
        ring_base: RING_BASE,
        ring_slots,
        slot_words,
        regions: [base, base + region_words],
        out_base: RING_BASE + ring_slots * slot_words,
        out_words,
        out_bytes,
        outputs: n,
    };
    let mut host = Vec::new();
    let code = emit(&mut e, &shape, &groups, &layout, &mut host);
    let g = groups.len();
    finish(code, dm_image, host, layout, g)
}

//! Five-stage in-order pipeline (IF, ID, EX, MEM, WB) driving the memory
//! system and engines one cycle at a time.
//!
//! Each cycle the stages are evaluated back to front (WB, MEM, EX, ID, IF)
//! over single-entry latches, then DMA and engines tick once. Register
//! results are visible to the next instruction in EX (full forwarding);
//! loads and CRYPTO_READ write at MEM and cost `load_use_stall` bubbles to
//! a dependent instruction directly behind them.

mod exec;
mod reference;
mod trace;

use thiserror::Error;

use crate::config::TimingConfig;
use crate::isa::{DispatchOp, Instruction, IsaError, Program, WaitTarget};
use crate::memsys::{self, DataMemory, Direction, DmaChannel, InternalBuffer};
use crate::units::{EngineJob, EngineKind, Units};
use crate::Word;

pub use reference::{ReferenceMachine, ReferenceError};
pub use trace::{CycleRecord, ExecutionTrace, StallCause, TraceSummary, WbEvent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("trap at pc {pc} (cycle {cycle}): {reason}")]
    Trap { pc: usize, cycle: u64, reason: String },
    #[error("cycle limit {0} reached without halting")]
    Runaway(u64),
    #[error("core is halted")]
    Halted,
    #[error(transparent)]
    Program(#[from] IsaError),
}

/// Failure of [`run`], carrying the trace up to the failure.
#[derive(Debug, Error)]
#[error("{error}")]
pub struct RunError {
    pub error: CoreError,
    pub trace: ExecutionTrace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MemOp {
    None,
    Load { rd: u8, addr: usize },
    Store { addr: usize, value: Word },
    Bulk { dir: Direction, dm: usize, buf: usize, count: usize },
    ReadBuf { rd: u8, buf: usize },
}

#[derive(Clone, Debug)]
struct Inflight {
    pc: usize,
    instr: Result<Instruction, String>,
    mem: MemOp,
    /// Remaining MEM cycles once the instruction has entered MEM.
    hold: Option<u64>,
    /// Remaining load-use stall cycles while waiting in ID.
    id_wait: Option<u64>,
}

#[derive(Clone, Debug)]
enum Slot {
    Bubble(StallCause),
    Op(Box<Inflight>),
}

impl Slot {
    fn pc(&self) -> Option<usize> {
        match self {
            Slot::Op(i) => Some(i.pc),
            Slot::Bubble(_) => None,
        }
    }
}

/// Architectural state plus pipeline latches.
#[derive(Clone, Debug)]
pub struct Simulator {
    cfg: TimingConfig,
    imem: Vec<Result<Instruction, String>>,
    regs: [Word; 32],
    fetch_pc: usize,
    fetch_resume: u64,
    fetch_stopped: bool,
    if_id: Slot,
    id_ex: Slot,
    ex_mem: Slot,
    mem_wb: Slot,
    dm: DataMemory,
    buf: InternalBuffer,
    host: Vec<Word>,
    dma: DmaChannel,
    units: Units,
    cycle: u64,
    halted: bool,
    trace: ExecutionTrace,
}

/// Final state and trace of a completed run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub state: Simulator,
    pub trace: ExecutionTrace,
}

impl Simulator {
    pub fn new(program: &Program, cfg: &TimingConfig) -> Result<Self, CoreError> {
        program.check_fits(cfg.imem_words)?;
        let imem = program
            .encode_words()?
            .into_iter()
            .map(|w| crate::isa::decode(w).map_err(|e| e.to_string()))
            .collect();
        let mut dm = DataMemory::new();
        dm.write_slice(0, &program.dm_image).map_err(|e| IsaError::Format(e.to_string()))?;
        Ok(Simulator {
            cfg: cfg.clone(),
            imem,
            regs: [0; 32],
            fetch_pc: 0,
            fetch_resume: 0,
            fetch_stopped: false,
            if_id: Slot::Bubble(StallCause::Fill),
            id_ex: Slot::Bubble(StallCause::Fill),
            ex_mem: Slot::Bubble(StallCause::Fill),
            mem_wb: Slot::Bubble(StallCause::Fill),
            dm,
            buf: InternalBuffer::new(),
            host: program.host_image.clone(),
            dma: DmaChannel::new(cfg),
            units: Units::new(),
            cycle: 0,
            halted: false,
            trace: ExecutionTrace::default(),
        })
    }

    pub fn regs(&self) -> &[Word; 32] {
        &self.regs
    }

    pub fn dm(&self) -> &DataMemory {
        &self.dm
    }

    pub fn buffer(&self) -> &InternalBuffer {
        &self.buf
    }

    pub fn units(&self) -> &Units {
        &self.units
    }

    pub fn dma(&self) -> &DmaChannel {
        &self.dma
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn halted(&self) -> bool {
        self.halted
    }

    pub fn trace(&self) -> &ExecutionTrace {
        &self.trace
    }

    pub fn config(&self) -> &TimingConfig {
        &self.cfg
    }

    fn trap(&self, pc: usize, reason: impl Into<String>) -> CoreError {
        CoreError::Trap { pc, cycle: self.cycle, reason: reason.into() }
    }

    fn write_reg(&mut self, rd: u8, v: Word) {
        if rd != 0 {
            self.regs[rd as usize] = v;
        }
    }

    /// Advance every stage by one cycle.
    pub fn step(&mut self) -> Result<(), CoreError> {
        if self.halted {
            return Err(CoreError::Halted);
        }
        self.cycle += 1;
        let engines_at_start = self.units.busy_flags();
        let dma_at_start = self.dma.is_busy();
        let stages = [
            self.if_slot_pc(),
            self.if_id.pc(),
            self.id_ex.pc(),
            self.ex_mem.pc(),
            self.mem_wb.pc(),
        ];
        let mut stall = None;
        let mut flush = false;
        let mut dispatched = [false; 3];
        let mut dma_started = false;

        // WB
        let wb = match std::mem::replace(&mut self.mem_wb, Slot::Bubble(StallCause::Fill)) {
            Slot::Op(i) => {
                if matches!(i.instr, Ok(Instruction::Halt)) {
                    self.halted = true;
                    self.trace.halted = true;
                }
                WbEvent::Retired
            }
            Slot::Bubble(c) => WbEvent::Bubble(c),
        };

        // MEM
        let mut ex_mem_free = false;
        {
            match std::mem::replace(&mut self.ex_mem, Slot::Bubble(StallCause::Fill)) {
                Slot::Bubble(c) => {
                    self.mem_wb = Slot::Bubble(c);
                    ex_mem_free = true;
                }
                Slot::Op(mut i) => {
                    let left = match i.hold {
                        Some(h) => h,
                        None => self.mem_cost(&i),
                    };
                    if left > 1 {
                        i.hold = Some(left - 1);
                        self.ex_mem = Slot::Op(i);
                        self.mem_wb = Slot::Bubble(StallCause::MemHold);
                        stall = Some(StallCause::MemHold);
                    } else {
                        self.mem_commit(&i)?;
                        self.mem_wb = Slot::Op(i);
                        ex_mem_free = true;
                    }
                }
            }
        }

        // EX
        let mut id_ex_free = false;
        if ex_mem_free {
            match std::mem::replace(&mut self.id_ex, Slot::Bubble(StallCause::Fill)) {
                Slot::Bubble(c) => self.ex_mem = Slot::Bubble(c),
                Slot::Op(mut i) => {
                    let redirect = self.execute(&mut i, &mut dispatched, &mut dma_started)?;
                    if let Some(target) = redirect {
                        flush = true;
                        self.if_id = Slot::Bubble(StallCause::Flush);
                        self.fetch_pc = target;
                        self.fetch_stopped = false;
                        self.fetch_resume = self.cycle + self.cfg.branch_flush.max(1) - 1;
                    }
                    self.ex_mem = Slot::Op(i);
                }
            }
            id_ex_free = true;
        }

        // ID
        let mut if_id_free = false;
        if id_ex_free {
            match std::mem::replace(&mut self.if_id, Slot::Bubble(StallCause::Fill)) {
                Slot::Bubble(c) => {
                    self.id_ex = Slot::Bubble(c);
                    if_id_free = true;
                }
                Slot::Op(mut i) => match self.id_hazard(&mut i) {
                    Some(cause) => {
                        self.if_id = Slot::Op(i);
                        self.id_ex = Slot::Bubble(cause);
                        stall = Some(cause);
                    }
                    None => {
                        self.id_ex = Slot::Op(i);
                        if_id_free = true;
                    }
                },
            }
        }

        // IF
        if if_id_free {
            self.if_id = self.fetch();
        }

        // DMA and engines; anything started this cycle begins counting next cycle
        if !dma_started {
            self.dma.tick(&mut self.dm);
        }
        self.units.tick(&mut self.buf, dispatched);

        self.trace.records.push(CycleRecord {
            cycle: self.cycle,
            stages,
            stall,
            flush,
            engines: engines_at_start,
            dma: dma_at_start,
            wb,
        });
        Ok(())
    }

    fn if_slot_pc(&self) -> Option<usize> {
        let fetching = !self.fetch_stopped && self.cycle >= self.fetch_resume;
        fetching.then_some(self.fetch_pc)
    }

    fn fetch(&mut self) -> Slot {
        if self.cycle < self.fetch_resume {
            return Slot::Bubble(StallCause::Flush);
        }
        if self.fetch_stopped {
            return Slot::Bubble(StallCause::Drain);
        }
        let pc = self.fetch_pc;
        let instr = match self.imem.get(pc) {
            Some(i) => i.clone(),
            None => Err(format!("instruction fetch at {pc} past end of program")),
        };
        if matches!(instr, Ok(Instruction::Halt)) {
            self.fetch_stopped = true;
        }
        self.fetch_pc += 1;
        Slot::Op(Box::new(Inflight { pc, instr, mem: MemOp::None, hold: None, id_wait: None }))
    }

    /// ID-stage checks; `Some(cause)` holds the instruction in ID this cycle.
    fn id_hazard(&self, i: &mut Inflight) -> Option<StallCause> {
        let Ok(instr) = i.instr else { return None };
        // load-use: producer just went through EX this cycle
        if let Slot::Op(prod) = &self.ex_mem {
            let writes_late = matches!(prod.mem, MemOp::Load { .. } | MemOp::ReadBuf { .. });
            if writes_late && i.id_wait.is_none() {
                if let Some(rd) = prod.instr.as_ref().ok().and_then(|p| p.dest()) {
                    if instr.sources().contains(&rd) && self.cfg.load_use_stall > 0 {
                        i.id_wait = Some(self.cfg.load_use_stall);
                    }
                }
            }
        }
        if let Some(w) = i.id_wait {
            if w > 0 {
                i.id_wait = Some(w - 1);
                return Some(StallCause::LoadUse);
            }
        }
        let busy = |k: EngineKind| self.units.engine(k).is_busy();
        match instr {
            Instruction::CryptoWait { target } => {
                let waiting = match target {
                    WaitTarget::All => self.units.any_busy(),
                    WaitTarget::Md => busy(EngineKind::Md),
                    WaitTarget::AesHaraka => busy(EngineKind::AesHaraka),
                    WaitTarget::Keccak => busy(EngineKind::Keccak),
                };
                waiting.then_some(StallCause::CryptoWait)
            }
            Instruction::DmaWait => self.dma.is_busy().then_some(StallCause::DmaWait),
            Instruction::CryptoDispatch { alg, .. } => {
                busy(EngineKind::for_algorithm(alg)).then_some(StallCause::EngineBusy)
            }
            Instruction::DmaStart { .. } => self.dma.is_busy().then_some(StallCause::DmaBusy),
            _ => None,
        }
    }

    fn mem_cost(&self, i: &Inflight) -> u64 {
        match i.mem {
            MemOp::Bulk { count, .. } => memsys::buf_transfer_cost(count, &self.cfg).max(1),
            _ => 1,
        }
    }

    fn mem_commit(&mut self, i: &Inflight) -> Result<(), CoreError> {
        match i.mem {
            MemOp::None => {}
            MemOp::Load { rd, addr } => {
                let v = self.dm.read(addr).map_err(|e| self.trap(i.pc, e.to_string()))?;
                self.write_reg(rd, v);
            }
            MemOp::Store { addr, value } => {
                self.dm.write(addr, value).map_err(|e| self.trap(i.pc, e.to_string()))?;
            }
            MemOp::Bulk { dir, dm, buf, count } => {
                memsys::buf_transfer(dir, &mut self.dm, &mut self.buf, dm, buf, count, &self.cfg)
                    .map_err(|e| self.trap(i.pc, e.to_string()))?;
            }
            MemOp::ReadBuf { rd, buf } => {
                let v = self.buf.read(buf).map_err(|e| self.trap(i.pc, e.to_string()))?;
                self.write_reg(rd, v);
            }
        }
        Ok(())
    }

    /// EX stage; returns the redirect target of a taken branch or jump.
    fn execute(
        &mut self,
        i: &mut Inflight,
        dispatched: &mut [bool; 3],
        dma_started: &mut bool,
    ) -> Result<Option<usize>, CoreError> {
        use Instruction::*;
        let pc = i.pc;
        let cycle = self.cycle;
        let trap = |reason: &str| CoreError::Trap { pc, cycle, reason: reason.to_string() };
        let instr = i.instr.clone().map_err(|reason| trap(&reason))?;
        let regs = self.regs;
        let r = |x: u8| regs[x as usize];
        let mut redirect = None;
        let jump = |offset: i32| -> Result<usize, CoreError> {
            exec::offset_index(pc as u64, offset as i64)
                .ok_or_else(|| trap(&format!("jump target {pc}{offset:+} out of range")))
        };
        match instr {
            Alu { op, rd, rs1, rs2 } => {
                let v = exec::alu(op, r(rs1), r(rs2));
                self.write_reg(rd, v);
            }
            AluImm { op, rd, rs1, imm } => {
                let v = exec::alu_imm(op, r(rs1), imm);
                self.write_reg(rd, v);
            }
            Lui { rd, imm } => self.write_reg(rd, exec::lui(imm)),
            Ld { rd, rs1, imm } => {
                let addr = exec::offset_index(r(rs1), imm as i64)
                    .ok_or_else(|| trap("negative load address"))?;
                i.mem = MemOp::Load { rd, addr };
            }
            Sd { rs1, rs2, imm } => {
                let addr = exec::offset_index(r(rs1), imm as i64)
                    .ok_or_else(|| trap("negative store address"))?;
                i.mem = MemOp::Store { addr, value: r(rs2) };
            }
            Branch { cond, rs1, rs2, offset } => {
                if exec::branch_taken(cond, r(rs1), r(rs2)) {
                    redirect = Some(jump(offset)?);
                }
            }
            Jal { rd, offset } => {
                let target = jump(offset)?;
                self.write_reg(rd, pc as u64 + 1);
                redirect = Some(target);
            }
            Jalr { rd, rs1, imm } => {
                let target = exec::offset_index(r(rs1), imm as i64)
                    .ok_or_else(|| trap("negative jump target"))?;
                self.write_reg(rd, pc as u64 + 1);
                redirect = Some(target);
            }
            Halt | DmaWait | CryptoWait { .. } => {}
            BufLoad { buf, dm, count } | BufStore { buf, dm, count } => {
                let dir = if matches!(instr, BufLoad { .. }) { Direction::DmToBuf } else { Direction::BufToDm };
                i.mem = self.bulk(pc, dir, dm as usize, buf, count)?;
            }
            BufLoadR { buf, rs1, count } | BufStoreR { buf, rs1, count } => {
                let dir = if matches!(instr, BufLoadR { .. }) { Direction::DmToBuf } else { Direction::BufToDm };
                let dm = usize::try_from(r(rs1)).unwrap_or(usize::MAX);
                i.mem = self.bulk(pc, dir, dm, buf, count)?;
            }
            DmaStart { rs1, rs2, count } => {
                let host = usize::try_from(r(rs1)).unwrap_or(usize::MAX);
                let dm = usize::try_from(r(rs2)).unwrap_or(usize::MAX);
                let end = host.saturating_add(count as usize);
                if end > self.host.len() {
                    return Err(trap(&format!(
                        "DMA source {host}..{end} beyond host image of {} words",
                        self.host.len()
                    )));
                }
                let image = self.host[host..end].to_vec();
                self.dma.start(&image, dm).map_err(|e| trap(&e.to_string()))?;
                *dma_started = true;
            }
            CryptoDispatch { alg, op, state, msg, count } => {
                let job = EngineJob::new(alg, op, state as usize, msg as usize, count as usize);
                let kind = job.engine();
                let res = if op == DispatchOp::Dual {
                    self.units.engine_mut(kind).dual_lane_dispatch(&job, &self.buf, &self.cfg)
                } else {
                    self.units.dispatch(&job, &self.buf, &self.cfg)
                };
                res.map_err(|e| trap(&e.to_string()))?;
                dispatched[kind.index()] = true;
            }
            CryptoRead { rd, buf } => i.mem = MemOp::ReadBuf { rd, buf: buf as usize },
        }
        Ok(redirect)
    }

    fn bulk(&self, pc: usize, dir: Direction, dm: usize, buf: u8, count: u8) -> Result<MemOp, CoreError> {
        memsys::check_buf_transfer(dm, buf as usize, count as usize).map_err(|e| self.trap(pc, e.to_string()))?;
        Ok(MemOp::Bulk { dir, dm, buf: buf as usize, count: count as usize })
    }

    /// Step until HALT retires or `limit` cycles have elapsed.
    pub fn run_until_halt(&mut self, limit: u64) -> Result<(), CoreError> {
        while !self.halted {
            if self.cycle >= limit {
                return Err(CoreError::Runaway(limit));
            }
            self.step()?;
        }
        Ok(())
    }

    pub fn into_trace(self) -> ExecutionTrace {
        self.trace
    }
}

/// Load `program` and run it to HALT within `limit` cycles.
pub fn run(program: &Program, cfg: &TimingConfig, limit: u64) -> Result<RunOutput, RunError> {
    let mut sim = Simulator::new(program, cfg)
        .map_err(|error| RunError { error, trace: ExecutionTrace::default() })?;
    match sim.run_until_halt(limit.max(1)) {
        Ok(()) => {
            let trace = std::mem::take(&mut sim.trace);
            Ok(RunOutput { state: sim, trace })
        }
        Err(error) => Err(RunError { error, trace: sim.into_trace() }),
    }
}

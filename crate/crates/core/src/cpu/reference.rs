//! Sequential reference interpreter for differential testing: one
//! instruction at a time, engines and DMA complete instantly.

use thiserror::Error;

use super::exec;
use crate::isa::{DispatchOp, Instruction, Program};
use crate::memsys::{self, DataMemory, Direction, InternalBuffer};
use crate::units::{self, EngineJob};
use crate::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReferenceError {
    #[error("pc {pc}: {reason}")]
    Fault { pc: usize, reason: String },
    #[error("step limit {0} reached")]
    StepLimit(u64),
}

#[derive(Clone, Debug)]
pub struct ReferenceMachine {
    pub regs: [Word; 32],
    pub dm: DataMemory,
    pub buf: InternalBuffer,
    pub host: Vec<Word>,
    pub pc: usize,
    pub steps: u64,
}

impl ReferenceMachine {
    pub fn new(program: &Program) -> Self {
        let mut dm = DataMemory::new();
        dm.write_slice(0, &program.dm_image).expect("program image fits DM");
        ReferenceMachine {
            regs: [0; 32],
            dm,
            buf: InternalBuffer::new(),
            host: program.host_image.clone(),
            pc: 0,
            steps: 0,
        }
    }

    fn set(&mut self, rd: u8, v: Word) {
        if rd != 0 {
            self.regs[rd as usize] = v;
        }
    }

    /// Execute until HALT (which is counted as a step).
    pub fn run(&mut self, program: &Program, limit: u64) -> Result<(), ReferenceError> {
        loop {
            if self.steps >= limit {
                return Err(ReferenceError::StepLimit(limit));
            }
            let pc = self.pc;
            let fault = |reason: String| ReferenceError::Fault { pc, reason };
            let instr = *program
                .instructions
                .get(pc)
                .ok_or_else(|| fault("fetch past end of program".into()))?;
            self.steps += 1;
            let r = |m: &Self, x: u8| m.regs[x as usize];
            let mut next = pc + 1;
            use Instruction::*;
            match instr {
                Alu { op, rd, rs1, rs2 } => {
                    let v = exec::alu(op, r(self, rs1), r(self, rs2));
                    self.set(rd, v)
                }
                AluImm { op, rd, rs1, imm } => {
                    let v = exec::alu_imm(op, r(self, rs1), imm);
                    self.set(rd, v)
                }
                Lui { rd, imm } => self.set(rd, exec::lui(imm)),
                Ld { rd, rs1, imm } => {
                    let addr = exec::offset_index(r(self, rs1), imm as i64).ok_or_else(|| fault("address".into()))?;
                    let v = self.dm.read(addr).map_err(|e| fault(e.to_string()))?;
                    self.set(rd, v);
                }
                Sd { rs1, rs2, imm } => {
                    let addr = exec::offset_index(r(self, rs1), imm as i64).ok_or_else(|| fault("address".into()))?;
                    self.dm.write(addr, r(self, rs2)).map_err(|e| fault(e.to_string()))?;
                }
                Branch { cond, rs1, rs2, offset } => {
                    if exec::branch_taken(cond, r(self, rs1), r(self, rs2)) {
                        next = exec::offset_index(pc as u64, offset as i64).ok_or_else(|| fault("target".into()))?;
                    }
                }
                Jal { rd, offset } => {
                    next = exec::offset_index(pc as u64, offset as i64).ok_or_else(|| fault("target".into()))?;
                    self.set(rd, pc as u64 + 1);
                }
                Jalr { rd, rs1, imm } => {
                    next = exec::offset_index(r(self, rs1), imm as i64).ok_or_else(|| fault("target".into()))?;
                    self.set(rd, pc as u64 + 1);
                }
                Halt => return Ok(()),
                DmaWait | CryptoWait { .. } => {}
                BufLoad { buf, dm, count } => self.bulk(Direction::DmToBuf, dm as usize, buf, count).map_err(fault)?,
                BufStore { buf, dm, count } => self.bulk(Direction::BufToDm, dm as usize, buf, count).map_err(fault)?,
                BufLoadR { buf, rs1, count } => {
                    self.bulk(Direction::DmToBuf, r(self, rs1) as usize, buf, count).map_err(fault)?
                }
                BufStoreR { buf, rs1, count } => {
                    self.bulk(Direction::BufToDm, r(self, rs1) as usize, buf, count).map_err(fault)?
                }
                DmaStart { rs1, rs2, count } => {
                    let host = r(self, rs1) as usize;
                    let end = host.saturating_add(count as usize);
                    let image = self.host.get(host..end).ok_or_else(|| fault("DMA source out of range".into()))?.to_vec();
                    self.dm.write_slice(r(self, rs2) as usize, &image).map_err(|e| fault(e.to_string()))?;
                }
                CryptoDispatch { alg, op, state, msg, count } => {
                    let job = EngineJob { alg, op, state_base: state as usize, msg_base: msg as usize, count: count as usize };
                    debug_assert!(op != DispatchOp::Dual || job.dual_lane());
                    let writes = units::execute(&job, self.buf.words()).map_err(|e| fault(e.to_string()))?;
                    for (base, words) in writes {
                        self.buf.write_slice(base, &words).expect("validated");
                    }
                }
                CryptoRead { rd, buf } => {
                    let v = self.buf.read(buf as usize).map_err(|e| fault(e.to_string()))?;
                    self.set(rd, v);
                }
            }
            self.pc = next;
        }
    }

    fn bulk(&mut self, dir: Direction, dm: usize, buf: u8, count: u8) -> Result<(), String> {
        let cfg = crate::config::TimingConfig::default();
        memsys::buf_transfer(dir, &mut self.dm, &mut self.buf, dm, buf as usize, count as usize, &cfg)
            .map(|_| ())
            .map_err(|e| e.to_string())
    }
}

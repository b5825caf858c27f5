//! Instruction set of the simulated core: a small RV64-style base subset plus
//! custom data-movement and crypto instructions in the custom opcode space.
//!
//! See `docs/isa.md` for the bit layouts.

mod asm;
mod encoding;
mod program;

use std::fmt;

use thiserror::Error;

use crate::primitives::Algorithm;

pub use asm::{assemble, disassemble, disassemble_instruction};
pub use encoding::{decode, encode};
pub use program::Program;

/// Largest word count a single BUF_LOAD / BUF_STORE may move.
pub const MAX_BULK_WORDS: usize = 128;
/// Largest block/instance count a CRYPTO_DISPATCH can carry.
pub const MAX_DISPATCH_COUNT: u8 = 31;
/// Largest word count a single DMA_START can move.
pub const MAX_DMA_WORDS: u16 = 4095;
/// Default instruction-memory capacity.
pub const DEFAULT_IMEM_WORDS: usize = 4096;

pub type Reg = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsaError {
    #[error("cannot encode `{instr}`: {reason}")]
    Encoding { instr: String, reason: String },
    #[error("illegal instruction word {0:#010x}")]
    Illegal(u32),
    #[error("line {line}: {msg}")]
    Assembly { line: usize, msg: String },
    #[error("malformed program image: {0}")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AluOp {
    Add,
    Sub,
    Sll,
    Slt,
    Sltu,
    Xor,
    Srl,
    Sra,
    Or,
    And,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AluImmOp {
    Addi,
    Slti,
    Sltiu,
    Xori,
    Ori,
    Andi,
    Slli,
    Srli,
    Srai,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchCond {
    Eq,
    Ne,
    Lt,
    Ge,
    Ltu,
    Geu,
}

/// Which engine(s) a CRYPTO_WAIT waits for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WaitTarget {
    All,
    Md,
    AesHaraka,
    Keccak,
}

/// Sub-operation carried in the 2-bit variant field of CRYPTO_DISPATCH.
/// Its meaning depends on the algorithm's engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DispatchOp {
    /// MD: compress `count` blocks. Keccak: absorb `count` blocks into the
    /// existing state. AES: encrypt. Haraka: hash `count` inputs.
    Default,
    /// MD (SHA-256/SM3 only): two independent lanes of `count` blocks each.
    Dual,
    /// Keccak: zero the state, then absorb.
    InitAbsorb,
    /// Keccak: apply `count` permutations without absorbing.
    Permute,
    /// AES: decrypt.
    Decrypt,
    /// Haraka: derive the round constants from seeds in the buffer.
    RcPrecompute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Alu { op: AluOp, rd: Reg, rs1: Reg, rs2: Reg },
    AluImm { op: AluImmOp, rd: Reg, rs1: Reg, imm: i32 },
    /// `rd = sext(imm << 12)`
    Lui { rd: Reg, imm: i32 },
    /// Word-addressed data-memory load: `rd = DM[rs1 + imm]`.
    Ld { rd: Reg, rs1: Reg, imm: i32 },
    /// `DM[rs1 + imm] = rs2`
    Sd { rs1: Reg, rs2: Reg, imm: i32 },
    /// Offset counted in instructions relative to this one.
    Branch { cond: BranchCond, rs1: Reg, rs2: Reg, offset: i32 },
    Jal { rd: Reg, offset: i32 },
    /// Jump to instruction index `rs1 + imm`, link `pc + 1` into `rd`.
    Jalr { rd: Reg, rs1: Reg, imm: i32 },
    Halt,
    /// DM[dm..dm+count] -> buffer[buf..buf+count]
    BufLoad { buf: u8, dm: u16, count: u8 },
    BufStore { buf: u8, dm: u16, count: u8 },
    /// As BufLoad with the DM address taken from `rs1`.
    BufLoadR { buf: u8, rs1: Reg, count: u8 },
    BufStoreR { buf: u8, rs1: Reg, count: u8 },
    /// host[rs1..rs1+count] -> DM[rs2..rs2+count], asynchronously.
    DmaStart { rs1: Reg, rs2: Reg, count: u16 },
    DmaWait,
    CryptoDispatch {
        alg: Algorithm,
        op: DispatchOp,
        state: u8,
        msg: u8,
        count: u8,
    },
    CryptoWait { target: WaitTarget },
    /// `rd = buffer[buf]`
    CryptoRead { rd: Reg, buf: u8 },
}

impl Instruction {
    pub fn nop() -> Self {
        Instruction::AluImm { op: AluImmOp::Addi, rd: 0, rs1: 0, imm: 0 }
    }

    /// Source registers read by this instruction (x0 included if named).
    pub fn sources(&self) -> Vec<Reg> {
        use Instruction::*;
        match *self {
            Alu { rs1, rs2, .. } | Sd { rs1, rs2, .. } | Branch { rs1, rs2, .. } => vec![rs1, rs2],
            DmaStart { rs1, rs2, .. } => vec![rs1, rs2],
            AluImm { rs1, .. } | Ld { rs1, .. } | Jalr { rs1, .. } => vec![rs1],
            BufLoadR { rs1, .. } | BufStoreR { rs1, .. } => vec![rs1],
            _ => vec![],
        }
    }

    /// Destination register, if the instruction writes one.
    pub fn dest(&self) -> Option<Reg> {
        use Instruction::*;
        match *self {
            Alu { rd, .. }
            | AluImm { rd, .. }
            | Lui { rd, .. }
            | Ld { rd, .. }
            | Jal { rd, .. }
            | Jalr { rd, .. }
            | CryptoRead { rd, .. } => Some(rd).filter(|&r| r != 0),
            _ => None,
        }
    }

    /// Check the operand-range invariants of the type.
    pub fn validate(&self) -> Result<(), String> {
        use Instruction::*;
        let reg = |r: Reg| if r < 32 { Ok(()) } else { Err(format!("register x{r} out of range")) };
        let imm12 = |v: i32| {
            if (-2048..=2047).contains(&v) {
                Ok(())
            } else {
                Err(format!("immediate {v} does not fit 12 signed bits"))
            }
        };
        let buf = |b: u8| {
            if (b as usize) < MAX_BULK_WORDS {
                Ok(())
            } else {
                Err(format!("buffer index {b} out of range"))
            }
        };
        let bulk = |c: u8| {
            if (1..=MAX_BULK_WORDS).contains(&(c as usize)) {
                Ok(())
            } else {
                Err(format!("word count {c} outside 1..={MAX_BULK_WORDS}"))
            }
        };
        match *self {
            Alu { rd, rs1, rs2, .. } => {
                reg(rd)?;
                reg(rs1)?;
                reg(rs2)
            }
            AluImm { op, rd, rs1, imm } => {
                reg(rd)?;
                reg(rs1)?;
                match op {
                    AluImmOp::Slli | AluImmOp::Srli | AluImmOp::Srai => {
                        if (0..64).contains(&imm) {
                            Ok(())
                        } else {
                            Err(format!("shift amount {imm} outside 0..64"))
                        }
                    }
                    _ => imm12(imm),
                }
            }
            Lui { rd, imm } => {
                reg(rd)?;
                if (-(1 << 19)..(1 << 19)).contains(&imm) {
                    Ok(())
                } else {
                    Err(format!("upper immediate {imm} does not fit 20 signed bits"))
                }
            }
            Ld { rd, rs1, imm } | Jalr { rd, rs1, imm } => {
                reg(rd)?;
                reg(rs1)?;
                imm12(imm)
            }
            Sd { rs1, rs2, imm } => {
                reg(rs1)?;
                reg(rs2)?;
                imm12(imm)
            }
            Branch { rs1, rs2, offset, .. } => {
                reg(rs1)?;
                reg(rs2)?;
                if (-1024..=1023).contains(&offset) {
                    Ok(())
                } else {
                    Err(format!("branch offset {offset} outside -1024..=1023"))
                }
            }
            Jal { rd, offset } => {
                reg(rd)?;
                if (-(1 << 18)..(1 << 18)).contains(&offset) {
                    Ok(())
                } else {
                    Err(format!("jump offset {offset} out of range"))
                }
            }
            Halt | DmaWait | CryptoWait { .. } => Ok(()),
            BufLoad { buf: b, dm, count } | BufStore { buf: b, dm, count } => {
                buf(b)?;
                bulk(count)?;
                if dm < 1024 {
                    Ok(())
                } else {
                    Err(format!("DM address {dm} outside 0..1024"))
                }
            }
            BufLoadR { buf: b, rs1, count } | BufStoreR { buf: b, rs1, count } => {
                buf(b)?;
                reg(rs1)?;
                bulk(count)
            }
            DmaStart { rs1, rs2, count } => {
                reg(rs1)?;
                reg(rs2)?;
                if count <= MAX_DMA_WORDS {
                    Ok(())
                } else {
                    Err(format!("DMA count {count} above {MAX_DMA_WORDS}"))
                }
            }
            CryptoDispatch { alg, op, state, msg, count } => {
                buf(state)?;
                buf(msg)?;
                if !(1..=MAX_DISPATCH_COUNT).contains(&count) {
                    return Err(format!("dispatch count {count} outside 1..={MAX_DISPATCH_COUNT}"));
                }
                if op_valid_for(alg, op) {
                    Ok(())
                } else {
                    Err(format!("variant {op:?} not defined for {alg}"))
                }
            }
            CryptoRead { rd, buf: b } => {
                reg(rd)?;
                buf(b)
            }
        }
    }
}

/// The (algorithm, variant) combinations the engines implement.
pub fn op_valid_for(alg: Algorithm, op: DispatchOp) -> bool {
    use Algorithm::*;
    match op {
        DispatchOp::Default => true,
        DispatchOp::Dual => matches!(alg, Sha256 | Sm3),
        DispatchOp::InitAbsorb | DispatchOp::Permute => alg.sponge_mode().is_some(),
        DispatchOp::Decrypt => alg == Aes128,
        DispatchOp::RcPrecompute => alg.haraka_mode().is_some(),
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&disassemble_instruction(self, None))
    }
}

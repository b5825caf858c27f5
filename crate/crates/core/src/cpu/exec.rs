//! Instruction semantics shared by the pipeline and the reference
//! interpreter.

use crate::isa::{AluImmOp, AluOp, BranchCond};

pub fn alu(op: AluOp, a: u64, b: u64) -> u64 {
    match op {
        AluOp::Add => a.wrapping_add(b),
        AluOp::Sub => a.wrapping_sub(b),
        AluOp::Sll => a << (b & 63),
        AluOp::Slt => ((a as i64) < (b as i64)) as u64,
        AluOp::Sltu => (a < b) as u64,
        AluOp::Xor => a ^ b,
        AluOp::Srl => a >> (b & 63),
        AluOp::Sra => ((a as i64) >> (b & 63)) as u64,
        AluOp::Or => a | b,
        AluOp::And => a & b,
    }
}

pub fn alu_imm(op: AluImmOp, a: u64, imm: i32) -> u64 {
    let b = imm as i64 as u64;
    match op {
        AluImmOp::Addi => alu(AluOp::Add, a, b),
        AluImmOp::Slti => alu(AluOp::Slt, a, b),
        AluImmOp::Sltiu => alu(AluOp::Sltu, a, b),
        AluImmOp::Xori => a ^ b,
        AluImmOp::Ori => a | b,
        AluImmOp::Andi => a & b,
        AluImmOp::Slli => alu(AluOp::Sll, a, b),
        AluImmOp::Srli => alu(AluOp::Srl, a, b),
        AluImmOp::Srai => alu(AluOp::Sra, a, b),
    }
}

pub fn lui(imm: i32) -> u64 {
    ((imm << 12) as i64) as u64
}

pub fn branch_taken(cond: BranchCond, a: u64, b: u64) -> bool {
    match cond {
        BranchCond::Eq => a == b,
        BranchCond::Ne => a != b,
        BranchCond::Lt => (a as i64) < (b as i64),
        BranchCond::Ge => (a as i64) >= (b as i64),
        BranchCond::Ltu => a < b,
        BranchCond::Geu => a >= b,
    }
}

/// `base + offset` as an index, or `None` when negative or absurdly large.
pub fn offset_index(base: u64, offset: i64) -> Option<usize> {
    let v = (base as i64).checked_add(offset)?;
    usize::try_from(v).ok()
}

use super::{
    op_valid_for, AluImmOp, AluOp, BranchCond, DispatchOp, Instruction, IsaError, WaitTarget,
};
use crate::primitives::Algorithm;

const OP_ALU: u32 = 0b0110011;
const OP_ALU_IMM: u32 = 0b0010011;
const OP_LUI: u32 = 0b0110111;
const OP_LOAD: u32 = 0b0000011;
const OP_STORE: u32 = 0b0100011;
const OP_BRANCH: u32 = 0b1100011;
const OP_JAL: u32 = 0b1101111;
const OP_JALR: u32 = 0b1100111;
const OP_SYSTEM: u32 = 0b1110011;
const OP_CUSTOM0: u32 = 0b0001011;
const OP_CUSTOM1: u32 = 0b0101011;
const OP_CUSTOM2: u32 = 0b1011011;

const HALT_WORD: u32 = 0x0000_0073;

// custom-1 sub-operations in bits [9:7]
const C1_BUF_LOAD_R: u32 = 0;
const C1_BUF_STORE_R: u32 = 1;
const C1_DMA_START: u32 = 2;
const C1_DMA_WAIT: u32 = 3;
const C1_CRYPTO_WAIT: u32 = 4;
const C1_CRYPTO_READ: u32 = 5;

fn bits(w: u32, hi: u32, lo: u32) -> u32 {
    (w >> lo) & ((1u32 << (hi - lo + 1)) - 1)
}

fn sext(v: u32, width: u32) -> i32 {
    ((v << (32 - width)) as i32) >> (32 - width)
}

fn r_type(funct7: u32, rs2: u8, rs1: u8, funct3: u32, rd: u8, opcode: u32) -> u32 {
    funct7 << 25 | (rs2 as u32) << 20 | (rs1 as u32) << 15 | funct3 << 12 | (rd as u32) << 7 | opcode
}

fn i_type(imm: i32, rs1: u8, funct3: u32, rd: u8, opcode: u32) -> u32 {
    ((imm as u32) & 0xfff) << 20 | (rs1 as u32) << 15 | funct3 << 12 | (rd as u32) << 7 | opcode
}

fn alu_fields(op: AluOp) -> (u32, u32) {
    match op {
        AluOp::Add => (0, 0),
        AluOp::Sub => (0x20, 0),
        AluOp::Sll => (0, 1),
        AluOp::Slt => (0, 2),
        AluOp::Sltu => (0, 3),
        AluOp::Xor => (0, 4),
        AluOp::Srl => (0, 5),
        AluOp::Sra => (0x20, 5),
        AluOp::Or => (0, 6),
        AluOp::And => (0, 7),
    }
}

fn branch_funct3(c: BranchCond) -> u32 {
    match c {
        BranchCond::Eq => 0,
        BranchCond::Ne => 1,
        BranchCond::Lt => 4,
        BranchCond::Ge => 5,
        BranchCond::Ltu => 6,
        BranchCond::Geu => 7,
    }
}

fn variant_bits(alg: Algorithm, op: DispatchOp) -> u32 {
    match op {
        DispatchOp::Default => 0,
        DispatchOp::Dual | DispatchOp::InitAbsorb | DispatchOp::Decrypt | DispatchOp::RcPrecompute => 1,
        DispatchOp::Permute => {
            debug_assert!(alg.sponge_mode().is_some());
            2
        }
    }
}

fn variant_op(alg: Algorithm, v: u32) -> Option<DispatchOp> {
    let op = match (v, alg) {
        (0, _) => DispatchOp::Default,
        (1, a) if a.md_mode().is_some() => DispatchOp::Dual,
        (1, a) if a.sponge_mode().is_some() => DispatchOp::InitAbsorb,
        (2, a) if a.sponge_mode().is_some() => DispatchOp::Permute,
        (1, Algorithm::Aes128) => DispatchOp::Decrypt,
        (1, a) if a.haraka_mode().is_some() => DispatchOp::RcPrecompute,
        _ => return None,
    };
    op_valid_for(alg, op).then_some(op)
}

fn wait_bits(t: WaitTarget) -> u32 {
    match t {
        WaitTarget::All => 0,
        WaitTarget::Md => 1,
        WaitTarget::AesHaraka => 2,
        WaitTarget::Keccak => 3,
    }
}

pub fn encode(instr: &Instruction) -> Result<u32, IsaError> {
    instr.validate().map_err(|reason| IsaError::Encoding {
        instr: format!("{instr:?}"),
        reason,
    })?;
    use Instruction::*;
    let word = match *instr {
        Alu { op, rd, rs1, rs2 } => {
            let (f7, f3) = alu_fields(op);
            r_type(f7, rs2, rs1, f3, rd, OP_ALU)
        }
        AluImm { op, rd, rs1, imm } => {
            let (f3, imm) = match op {
                AluImmOp::Addi => (0, imm),
                AluImmOp::Slti => (2, imm),
                AluImmOp::Sltiu => (3, imm),
                AluImmOp::Xori => (4, imm),
                AluImmOp::Ori => (6, imm),
                AluImmOp::Andi => (7, imm),
                AluImmOp::Slli => (1, imm),
                AluImmOp::Srli => (5, imm),
                AluImmOp::Srai => (5, imm | 0x400),
            };
            i_type(imm, rs1, f3, rd, OP_ALU_IMM)
        }
        Lui { rd, imm } => ((imm as u32) & 0xfffff) << 12 | (rd as u32) << 7 | OP_LUI,
        Ld { rd, rs1, imm } => i_type(imm, rs1, 3, rd, OP_LOAD),
        Jalr { rd, rs1, imm } => i_type(imm, rs1, 0, rd, OP_JALR),
        Sd { rs1, rs2, imm } => {
            let imm = imm as u32;
            bits(imm, 11, 5) << 25
                | (rs2 as u32) << 20
                | (rs1 as u32) << 15
                | 3 << 12
                | bits(imm, 4, 0) << 7
                | OP_STORE
        }
        Branch { cond, rs1, rs2, offset } => {
            let imm = (offset * 4) as u32;
            bits(imm, 12, 12) << 31
                | bits(imm, 10, 5) << 25
                | (rs2 as u32) << 20
                | (rs1 as u32) << 15
                | branch_funct3(cond) << 12
                | bits(imm, 4, 1) << 8
                | bits(imm, 11, 11) << 7
                | OP_BRANCH
        }
        Jal { rd, offset } => {
            let imm = (offset * 4) as u32;
            bits(imm, 20, 20) << 31
                | bits(imm, 10, 1) << 21
                | bits(imm, 11, 11) << 20
                | bits(imm, 19, 12) << 12
                | (rd as u32) << 7
                | OP_JAL
        }
        Halt => HALT_WORD,
        BufLoad { buf, dm, count } | BufStore { buf, dm, count } => {
            let store = matches!(instr, BufStore { .. }) as u32;
            store << 31
                | (count as u32 - 1) << 24
                | (dm as u32) << 14
                | (buf as u32) << 7
                | OP_CUSTOM0
        }
        BufLoadR { buf, rs1, count } | BufStoreR { buf, rs1, count } => {
            let sub = if matches!(instr, BufStoreR { .. }) { C1_BUF_STORE_R } else { C1_BUF_LOAD_R };
            (count as u32 - 1) << 22 | (buf as u32) << 15 | (rs1 as u32) << 10 | sub << 7 | OP_CUSTOM1
        }
        DmaStart { rs1, rs2, count } => {
            (count as u32) << 20 | (rs2 as u32) << 15 | (rs1 as u32) << 10 | C1_DMA_START << 7 | OP_CUSTOM1
        }
        DmaWait => C1_DMA_WAIT << 7 | OP_CUSTOM1,
        CryptoWait { target } => wait_bits(target) << 10 | C1_CRYPTO_WAIT << 7 | OP_CUSTOM1,
        CryptoRead { rd, buf } => {
            (buf as u32) << 15 | (rd as u32) << 10 | C1_CRYPTO_READ << 7 | OP_CUSTOM1
        }
        CryptoDispatch { alg, op, state, msg, count } => {
            variant_bits(alg, op) << 30
                | (count as u32) << 25
                | (msg as u32) << 18
                | (state as u32) << 11
                | (alg.tag() as u32) << 7
                | OP_CUSTOM2
        }
    };
    Ok(word)
}

/// Strict decoder: any reserved bit pattern is illegal, so that
/// `encode(decode(w)) == w` whenever decoding succeeds.
pub fn decode(word: u32) -> Result<Instruction, IsaError> {
    let illegal = || IsaError::Illegal(word);
    let opcode = bits(word, 6, 0);
    let rd = bits(word, 11, 7) as u8;
    let funct3 = bits(word, 14, 12);
    let rs1 = bits(word, 19, 15) as u8;
    let rs2 = bits(word, 24, 20) as u8;
    let funct7 = bits(word, 31, 25);
    let imm_i = sext(bits(word, 31, 20), 12);

    let instr = match opcode {
        OP_ALU => {
            let op = match (funct7, funct3) {
                (0, 0) => AluOp::Add,
                (0x20, 0) => AluOp::Sub,
                (0, 1) => AluOp::Sll,
                (0, 2) => AluOp::Slt,
                (0, 3) => AluOp::Sltu,
                (0, 4) => AluOp::Xor,
                (0, 5) => AluOp::Srl,
                (0x20, 5) => AluOp::Sra,
                (0, 6) => AluOp::Or,
                (0, 7) => AluOp::And,
                _ => return Err(illegal()),
            };
            Instruction::Alu { op, rd, rs1, rs2 }
        }
        OP_ALU_IMM => {
            let shamt = bits(word, 25, 20) as i32;
            let funct6 = bits(word, 31, 26);
            let (op, imm) = match funct3 {
                0 => (AluImmOp::Addi, imm_i),
                2 => (AluImmOp::Slti, imm_i),
                3 => (AluImmOp::Sltiu, imm_i),
                4 => (AluImmOp::Xori, imm_i),
                6 => (AluImmOp::Ori, imm_i),
                7 => (AluImmOp::Andi, imm_i),
                1 if funct6 == 0 => (AluImmOp::Slli, shamt),
                5 if funct6 == 0 => (AluImmOp::Srli, shamt),
                5 if funct6 == 0x10 => (AluImmOp::Srai, shamt),
                _ => return Err(illegal()),
            };
            Instruction::AluImm { op, rd, rs1, imm }
        }
        OP_LUI => Instruction::Lui { rd, imm: sext(bits(word, 31, 12), 20) },
        OP_LOAD if funct3 == 3 => Instruction::Ld { rd, rs1, imm: imm_i },
        OP_JALR if funct3 == 0 => Instruction::Jalr { rd, rs1, imm: imm_i },
        OP_STORE if funct3 == 3 => {
            let imm = sext(funct7 << 5 | rd as u32, 12);
            Instruction::Sd { rs1, rs2, imm }
        }
        OP_BRANCH => {
            let cond = match funct3 {
                0 => BranchCond::Eq,
                1 => BranchCond::Ne,
                4 => BranchCond::Lt,
                5 => BranchCond::Ge,
                6 => BranchCond::Ltu,
                7 => BranchCond::Geu,
                _ => return Err(illegal()),
            };
            let imm = bits(word, 31, 31) << 12
                | bits(word, 7, 7) << 11
                | bits(word, 30, 25) << 5
                | bits(word, 11, 8) << 1;
            let bytes = sext(imm, 13);
            if bytes % 4 != 0 {
                return Err(illegal());
            }
            Instruction::Branch { cond, rs1, rs2, offset: bytes / 4 }
        }
        OP_JAL => {
            let imm = bits(word, 31, 31) << 20
                | bits(word, 19, 12) << 12
                | bits(word, 20, 20) << 11
                | bits(word, 30, 21) << 1;
            let bytes = sext(imm, 21);
            if bytes % 4 != 0 {
                return Err(illegal());
            }
            Instruction::Jal { rd, offset: bytes / 4 }
        }
        OP_SYSTEM if word == HALT_WORD => Instruction::Halt,
        OP_CUSTOM0 => {
            let count = bits(word, 30, 24) as u8 + 1;
            let dm = bits(word, 23, 14) as u16;
            let buf = bits(word, 13, 7) as u8;
            if bits(word, 31, 31) == 1 {
                Instruction::BufStore { buf, dm, count }
            } else {
                Instruction::BufLoad { buf, dm, count }
            }
        }
        OP_CUSTOM1 => decode_custom1(word).ok_or_else(illegal)?,
        OP_CUSTOM2 => {
            let alg = Algorithm::from_tag(bits(word, 10, 7) as u8).ok_or_else(illegal)?;
            let op = variant_op(alg, bits(word, 31, 30)).ok_or_else(illegal)?;
            let count = bits(word, 29, 25) as u8;
            if count == 0 {
                return Err(illegal());
            }
            Instruction::CryptoDispatch {
                alg,
                op,
                state: bits(word, 17, 11) as u8,
                msg: bits(word, 24, 18) as u8,
                count,
            }
        }
        _ => return Err(illegal()),
    };
    // Reject non-canonical forms (e.g. unused high bits) by re-encoding.
    match encode(&instr) {
        Ok(w) if w == word => Ok(instr),
        _ => Err(illegal()),
    }
}

fn decode_custom1(word: u32) -> Option<Instruction> {
    let sub = bits(word, 9, 7);
    let r1 = bits(word, 14, 10) as u8;
    Some(match sub {
        C1_BUF_LOAD_R | C1_BUF_STORE_R => {
            let buf = bits(word, 21, 15) as u8;
            let count = bits(word, 28, 22) as u8 + 1;
            if sub == C1_BUF_LOAD_R {
                Instruction::BufLoadR { buf, rs1: r1, count }
            } else {
                Instruction::BufStoreR { buf, rs1: r1, count }
            }
        }
        C1_DMA_START => Instruction::DmaStart {
            rs1: r1,
            rs2: bits(word, 19, 15) as u8,
            count: bits(word, 31, 20) as u16,
        },
        C1_DMA_WAIT => Instruction::DmaWait,
        C1_CRYPTO_WAIT => Instruction::CryptoWait {
            target: match bits(word, 11, 10) {
                0 => WaitTarget::All,
                1 => WaitTarget::Md,
                2 => WaitTarget::AesHaraka,
                _ => WaitTarget::Keccak,
            },
        },
        C1_CRYPTO_READ => Instruction::CryptoRead { rd: r1, buf: bits(word, 21, 15) as u8 },
        _ => return None,
    })
}

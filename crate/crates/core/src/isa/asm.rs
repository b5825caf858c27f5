//! Line-oriented assembler and the matching disassembler.
//!
//! One instruction, label or directive per line; `;` starts a comment.
//! Directives `.dm <addr> <word>...` and `.host <addr> <word>...` fill the
//! initial data-memory and host-memory images.

use std::collections::HashMap;

use super::{
    AluImmOp, AluOp, BranchCond, DispatchOp, Instruction, IsaError, Program, Reg, WaitTarget,
    MAX_BULK_WORDS,
};
use crate::primitives::Algorithm;
use crate::Word;

struct Line<'a> {
    number: usize,
    mnemonic: String,
    operands: Vec<&'a str>,
}

enum Target {
    Label(String),
    Offset(i32),
}

fn err(line: usize, msg: impl Into<String>) -> IsaError {
    IsaError::Assembly { line, msg: msg.into() }
}

fn parse_int(s: &str) -> Option<i64> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let v = if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        i64::from_str_radix(&hex.replace('_', ""), 16).ok()?
    } else {
        body.replace('_', "").parse::<i64>().ok()?
    };
    Some(if neg { -v } else { v })
}

fn parse_word(s: &str) -> Option<Word> {
    let s = s.trim();
    match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16).ok(),
        None => s.parse::<u64>().ok(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '.')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl Line<'_> {
    fn expect(&self, n: usize) -> Result<(), IsaError> {
        if self.operands.len() != n {
            return Err(err(
                self.number,
                format!("`{}` takes {n} operand(s), got {}", self.mnemonic, self.operands.len()),
            ));
        }
        Ok(())
    }

    fn reg(&self, i: usize) -> Result<Reg, IsaError> {
        let s = self.operands[i];
        let num = s.strip_prefix('x').or_else(|| s.strip_prefix('r'));
        match num.and_then(|n| n.parse::<u8>().ok()) {
            Some(r) if r < 32 => Ok(r),
            _ => Err(err(self.number, format!("expected register x0..x31, found `{s}`"))),
        }
    }

    fn imm(&self, i: usize) -> Result<i64, IsaError> {
        parse_int(self.operands[i])
            .ok_or_else(|| err(self.number, format!("expected integer, found `{}`", self.operands[i])))
    }

    fn buf(&self, i: usize) -> Result<u8, IsaError> {
        let s = self.operands[i];
        match s.strip_prefix('b').and_then(|n| n.parse::<u8>().ok()) {
            Some(b) if (b as usize) < MAX_BULK_WORDS => Ok(b),
            _ => Err(err(self.number, format!("expected buffer index b0..b127, found `{s}`"))),
        }
    }

    fn count(&self, i: usize) -> Result<u8, IsaError> {
        let v = self.imm(i)?;
        if !(1..=MAX_BULK_WORDS as i64).contains(&v) {
            return Err(err(
                self.number,
                format!("word count {v} exceeds the {MAX_BULK_WORDS}-word bulk transfer limit (must be 1..={MAX_BULK_WORDS})"),
            ));
        }
        Ok(v as u8)
    }

    /// `imm(xN)` memory operand.
    fn mem(&self, i: usize) -> Result<(i64, Reg), IsaError> {
        let s = self.operands[i];
        let bad = || err(self.number, format!("expected `offset(xN)`, found `{s}`"));
        let open = s.find('(').ok_or_else(bad)?;
        let close = s.strip_suffix(')').ok_or_else(bad)?;
        let off = if open == 0 { 0 } else { parse_int(&s[..open]).ok_or_else(bad)? };
        let reg_str = &close[open + 1..];
        let sub = Line { number: self.number, mnemonic: self.mnemonic.clone(), operands: vec![reg_str] };
        Ok((off, sub.reg(0)?))
    }

    fn target(&self, i: usize) -> Result<Target, IsaError> {
        let s = self.operands[i];
        if let Some(v) = parse_int(s) {
            return Ok(Target::Offset(v as i32));
        }
        if is_ident(s) {
            return Ok(Target::Label(s.to_string()));
        }
        Err(err(self.number, format!("expected label or offset, found `{s}`")))
    }
}

fn split_line(raw: &str) -> (Vec<String>, Option<(String, String)>) {
    let code = raw.split(';').next().unwrap_or("").trim();
    let mut labels = Vec::new();
    let mut rest = code;
    // leading `name:` labels; `dm:12` operands never start a line
    while let Some(first) = rest.split_whitespace().next() {
        match first.strip_suffix(':') {
            Some(name) if is_ident(name) => {
                labels.push(name.to_string());
                rest = rest[first.len()..].trim_start();
            }
            _ => break,
        }
    }
    if rest.is_empty() {
        return (labels, None);
    }
    let (mnem, ops) = match rest.find(char::is_whitespace) {
        Some(p) => (&rest[..p], rest[p..].trim()),
        None => (rest, ""),
    };
    (labels, Some((mnem.to_ascii_lowercase(), ops.to_string())))
}

fn li_parts(v: i64) -> Option<(Option<i32>, Option<i32>)> {
    if (-2048..=2047).contains(&v) {
        return Some((None, Some(v as i32)));
    }
    let hi = (v + 0x800) >> 12;
    let lo = v - (hi << 12);
    if !(-(1i64 << 19)..(1i64 << 19)).contains(&hi) {
        return None;
    }
    Some((Some(hi as i32), (lo != 0).then_some(lo as i32)))
}

/// Number of machine instructions a source line expands to.
fn expansion(line: &Line) -> Result<usize, IsaError> {
    if line.mnemonic == "li" {
        line.expect(2)?;
        let v = line.imm(1)?;
        let (hi, lo) = li_parts(v)
            .ok_or_else(|| err(line.number, format!("`li` value {v} out of the 32-bit range")))?;
        return Ok(hi.is_some() as usize + lo.is_some() as usize);
    }
    Ok(1)
}

fn alu_op(m: &str) -> Option<AluOp> {
    Some(match m {
        "add" => AluOp::Add,
        "sub" => AluOp::Sub,
        "sll" => AluOp::Sll,
        "slt" => AluOp::Slt,
        "sltu" => AluOp::Sltu,
        "xor" => AluOp::Xor,
        "srl" => AluOp::Srl,
        "sra" => AluOp::Sra,
        "or" => AluOp::Or,
        "and" => AluOp::And,
        _ => return None,
    })
}

fn alu_imm_op(m: &str) -> Option<AluImmOp> {
    Some(match m {
        "addi" => AluImmOp::Addi,
        "slti" => AluImmOp::Slti,
        "sltiu" => AluImmOp::Sltiu,
        "xori" => AluImmOp::Xori,
        "ori" => AluImmOp::Ori,
        "andi" => AluImmOp::Andi,
        "slli" => AluImmOp::Slli,
        "srli" => AluImmOp::Srli,
        "srai" => AluImmOp::Srai,
        _ => return None,
    })
}

// register-register op written with an immediate third operand
fn imm_form(op: AluOp) -> Option<AluImmOp> {
    Some(match op {
        AluOp::Add => AluImmOp::Addi,
        AluOp::Slt => AluImmOp::Slti,
        AluOp::Sltu => AluImmOp::Sltiu,
        AluOp::Xor => AluImmOp::Xori,
        AluOp::Or => AluImmOp::Ori,
        AluOp::And => AluImmOp::Andi,
        AluOp::Sll => AluImmOp::Slli,
        AluOp::Srl => AluImmOp::Srli,
        AluOp::Sra => AluImmOp::Srai,
        AluOp::Sub => return None,
    })
}

fn branch_cond(m: &str) -> Option<BranchCond> {
    Some(match m {
        "beq" => BranchCond::Eq,
        "bne" => BranchCond::Ne,
        "blt" => BranchCond::Lt,
        "bge" => BranchCond::Ge,
        "bltu" => BranchCond::Ltu,
        "bgeu" => BranchCond::Geu,
        _ => return None,
    })
}

fn dispatch_op(line: &Line, alg: Algorithm, suffix: Option<&str>) -> Result<DispatchOp, IsaError> {
    let op = match suffix {
        None => DispatchOp::Default,
        Some("dual") => DispatchOp::Dual,
        Some("init") => DispatchOp::InitAbsorb,
        Some("permute") => DispatchOp::Permute,
        Some("dec") => DispatchOp::Decrypt,
        Some("enc") | Some("absorb") | Some("hash") => DispatchOp::Default,
        Some("rc") => DispatchOp::RcPrecompute,
        Some(other) => return Err(err(line.number, format!("unknown dispatch variant `.{other}`"))),
    };
    if !super::op_valid_for(alg, op) {
        return Err(err(line.number, format!("variant `.{}` is not defined for {alg}", suffix.unwrap_or(""))));
    }
    Ok(op)
}

fn check(line: &Line, i: Instruction) -> Result<Instruction, IsaError> {
    i.validate().map_err(|m| err(line.number, m))?;
    Ok(i)
}

fn resolve(
    line: &Line,
    t: Target,
    pc: usize,
    labels: &HashMap<String, usize>,
) -> Result<i32, IsaError> {
    match t {
        Target::Offset(o) => Ok(o),
        Target::Label(name) => labels
            .get(&name)
            .map(|&dst| dst as i32 - pc as i32)
            .ok_or_else(|| err(line.number, format!("unresolved label `{name}`"))),
    }
}

fn lower(line: &Line, pc: usize, labels: &HashMap<String, usize>) -> Result<Vec<Instruction>, IsaError> {
    use Instruction::*;
    let m = line.mnemonic.as_str();
    let one = |i: Instruction| -> Result<Vec<Instruction>, IsaError> { Ok(vec![check(line, i)?]) };
    let imm32 = |i: usize| -> Result<i32, IsaError> {
        let v = line.imm(i)?;
        i32::try_from(v).map_err(|_| err(line.number, format!("immediate {v} out of range")))
    };

    if let Some(op) = alu_op(m) {
        line.expect(3)?;
        let (rd, rs1) = (line.reg(0)?, line.reg(1)?);
        if let Ok(rs2) = line.reg(2) {
            return one(Alu { op, rd, rs1, rs2 });
        }
        let imm = imm32(2)?;
        return match imm_form(op) {
            Some(iop) => one(AluImm { op: iop, rd, rs1, imm }),
            None => one(AluImm { op: AluImmOp::Addi, rd, rs1, imm: -imm }),
        };
    }
    if let Some(op) = alu_imm_op(m) {
        line.expect(3)?;
        return one(AluImm { op, rd: line.reg(0)?, rs1: line.reg(1)?, imm: imm32(2)? });
    }
    if let Some(cond) = branch_cond(m) {
        line.expect(3)?;
        let offset = resolve(line, line.target(2)?, pc, labels)?;
        return one(Branch { cond, rs1: line.reg(0)?, rs2: line.reg(1)?, offset });
    }
    match m {
        "beqz" | "bnez" => {
            line.expect(2)?;
            let cond = if m == "beqz" { BranchCond::Eq } else { BranchCond::Ne };
            let offset = resolve(line, line.target(1)?, pc, labels)?;
            one(Branch { cond, rs1: line.reg(0)?, rs2: 0, offset })
        }
        "lui" => {
            line.expect(2)?;
            one(Lui { rd: line.reg(0)?, imm: imm32(1)? })
        }
        "li" => {
            line.expect(2)?;
            let rd = line.reg(0)?;
            let (hi, lo) = li_parts(line.imm(1)?).expect("checked in first pass");
            let mut out = Vec::new();
            if let Some(hi) = hi {
                out.push(check(line, Lui { rd, imm: hi })?);
            }
            if let Some(lo) = lo {
                let rs1 = if hi.is_some() { rd } else { 0 };
                out.push(check(line, AluImm { op: AluImmOp::Addi, rd, rs1, imm: lo })?);
            }
            Ok(out)
        }
        "mv" => {
            line.expect(2)?;
            one(AluImm { op: AluImmOp::Addi, rd: line.reg(0)?, rs1: line.reg(1)?, imm: 0 })
        }
        "nop" => {
            line.expect(0)?;
            one(Instruction::nop())
        }
        "ld" => {
            line.expect(2)?;
            let (off, rs1) = line.mem(1)?;
            one(Ld { rd: line.reg(0)?, rs1, imm: off as i32 })
        }
        "sd" => {
            line.expect(2)?;
            let (off, rs1) = line.mem(1)?;
            one(Sd { rs1, rs2: line.reg(0)?, imm: off as i32 })
        }
        "jal" | "j" => {
            let (rd, t) = if m == "j" {
                line.expect(1)?;
                (0, line.target(0)?)
            } else if line.operands.len() == 1 {
                (1, line.target(0)?)
            } else {
                line.expect(2)?;
                (line.reg(0)?, line.target(1)?)
            };
            let offset = resolve(line, t, pc, labels)?;
            one(Jal { rd, offset })
        }
        "jalr" => {
            let rd = line.reg(0)?;
            if line.operands.len() == 2 {
                let (off, rs1) = line.mem(1)?;
                return one(Jalr { rd, rs1, imm: off as i32 });
            }
            line.expect(3)?;
            one(Jalr { rd, rs1: line.reg(1)?, imm: imm32(2)? })
        }
        "halt" | "ecall" => {
            line.expect(0)?;
            one(Halt)
        }
        "buf_load" | "buf_store" => {
            line.expect(3)?;
            let buf = line.buf(0)?;
            let count = line.count(2)?;
            let load = m == "buf_load";
            let src = line.operands[1];
            if let Some(addr) = src.strip_prefix("dm:") {
                let dm = parse_int(addr)
                    .filter(|a| (0..1024).contains(a))
                    .ok_or_else(|| err(line.number, format!("DM address `{addr}` outside 0..1024")))?
                    as u16;
                return one(if load { BufLoad { buf, dm, count } } else { BufStore { buf, dm, count } });
            }
            let rs1 = line.reg(1)?;
            one(if load { BufLoadR { buf, rs1, count } } else { BufStoreR { buf, rs1, count } })
        }
        "dma_start" => {
            line.expect(3)?;
            let count = line.imm(2)?;
            if !(0..=super::MAX_DMA_WORDS as i64).contains(&count) {
                return Err(err(line.number, format!("DMA count {count} outside 0..={}", super::MAX_DMA_WORDS)));
            }
            one(DmaStart { rs1: line.reg(0)?, rs2: line.reg(1)?, count: count as u16 })
        }
        "dma_wait" => {
            line.expect(0)?;
            one(DmaWait)
        }
        "crypto_wait" => {
            let target = match line.operands.as_slice() {
                [] | ["all"] => WaitTarget::All,
                ["md"] => WaitTarget::Md,
                ["aes"] => WaitTarget::AesHaraka,
                ["keccak"] => WaitTarget::Keccak,
                _ => return Err(err(line.number, "crypto_wait takes one of all/md/aes/keccak")),
            };
            one(CryptoWait { target })
        }
        "crypto_read" => {
            line.expect(2)?;
            one(CryptoRead { rd: line.reg(0)?, buf: line.buf(1)? })
        }
        "crypto_dispatch" => {
            line.expect(4)?;
            let spec = line.operands[0];
            let (name, suffix) = match spec.split_once('.') {
                Some((n, s)) => (n, Some(s)),
                None => (spec, None),
            };
            let alg: Algorithm = name
                .parse()
                .map_err(|_| err(line.number, format!("unknown algorithm `{name}`")))?;
            let op = dispatch_op(line, alg, suffix)?;
            let count = line.imm(3)?;
            if !(1..=super::MAX_DISPATCH_COUNT as i64).contains(&count) {
                return Err(err(line.number, format!("dispatch count {count} outside 1..={}", super::MAX_DISPATCH_COUNT)));
            }
            one(CryptoDispatch { alg, op, state: line.buf(1)?, msg: line.buf(2)?, count: count as u8 })
        }
        other => Err(err(line.number, format!("unknown mnemonic `{other}`"))),
    }
}

fn directive(line: &Line, image: &mut Vec<Word>, limit: usize) -> Result<(), IsaError> {
    if line.operands.is_empty() {
        return Err(err(line.number, format!("`{}` needs an address", line.mnemonic)));
    }
    let base = line.imm(0)?;
    if base < 0 {
        return Err(err(line.number, "negative image address"));
    }
    let words = line.operands[1..]
        .iter()
        .map(|s| parse_word(s).ok_or_else(|| err(line.number, format!("bad data word `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let end = base as usize + words.len();
    if end > limit {
        return Err(err(line.number, format!("image data ends at word {end}, beyond {limit}")));
    }
    if image.len() < end {
        image.resize(end, 0);
    }
    image[base as usize..end].copy_from_slice(&words);
    Ok(())
}

/// Host images are bounded only to keep typos from allocating gigabytes.
pub const HOST_IMAGE_LIMIT: usize = 1 << 22;

fn make_line<'a>(number: usize, mnemonic: &str, ops: &'a str) -> Line<'a> {
    let operands: Vec<&str> = if ops.is_empty() {
        vec![]
    } else if mnemonic.starts_with('.') {
        ops.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect()
    } else {
        ops.split(',').map(str::trim).collect()
    };
    Line { number, mnemonic: mnemonic.to_string(), operands }
}

pub fn assemble(source: &str) -> Result<Program, IsaError> {
    let mut lines = Vec::new();
    let mut labels = HashMap::new();
    let mut pc = 0usize;
    for (idx, raw) in source.lines().enumerate() {
        let number = idx + 1;
        let (names, body) = split_line(raw);
        for name in names {
            if labels.insert(name.clone(), pc).is_some() {
                return Err(err(number, format!("duplicate label `{name}`")));
            }
        }
        let Some((mnemonic, ops)) = body else { continue };
        if !mnemonic.starts_with('.') {
            pc += expansion(&make_line(number, &mnemonic, &ops))?;
        }
        lines.push((number, mnemonic, ops));
    }

    let mut program = Program::default();
    for (number, mnemonic, ops) in &lines {
        let line = make_line(*number, mnemonic, ops);
        match mnemonic.as_str() {
            ".dm" => directive(&line, &mut program.dm_image, crate::memsys::DM_WORDS)?,
            ".host" => directive(&line, &mut program.host_image, HOST_IMAGE_LIMIT)?,
            m if m.starts_with('.') => return Err(err(*number, format!("unknown directive `{m}`"))),
            _ => {
                let pc = program.instructions.len();
                program.instructions.extend(lower(&line, pc, &labels)?);
            }
        }
    }
    Ok(program)
}

fn reg(r: Reg) -> String {
    format!("x{r}")
}

fn dispatch_suffix(op: DispatchOp) -> &'static str {
    match op {
        DispatchOp::Default => "",
        DispatchOp::Dual => ".dual",
        DispatchOp::InitAbsorb => ".init",
        DispatchOp::Permute => ".permute",
        DispatchOp::Decrypt => ".dec",
        DispatchOp::RcPrecompute => ".rc",
    }
}

/// Render one instruction. With `pc`, branch and jump targets print as
/// `L<index>` labels; without it, as signed instruction offsets.
pub fn disassemble_instruction(i: &Instruction, pc: Option<usize>) -> String {
    use Instruction::*;
    let target = |offset: i32| match pc {
        Some(pc) => format!("L{}", pc as i64 + offset as i64),
        None => format!("{offset}"),
    };
    match *i {
        Alu { op, rd, rs1, rs2 } => {
            format!("{} {}, {}, {}", format!("{op:?}").to_lowercase(), reg(rd), reg(rs1), reg(rs2))
        }
        AluImm { op, rd, rs1, imm } => {
            format!("{} {}, {}, {imm}", format!("{op:?}").to_lowercase(), reg(rd), reg(rs1))
        }
        Lui { rd, imm } => format!("lui {}, {imm}", reg(rd)),
        Ld { rd, rs1, imm } => format!("ld {}, {imm}({})", reg(rd), reg(rs1)),
        Sd { rs1, rs2, imm } => format!("sd {}, {imm}({})", reg(rs2), reg(rs1)),
        Branch { cond, rs1, rs2, offset } => {
            format!("b{} {}, {}, {}", format!("{cond:?}").to_lowercase(), reg(rs1), reg(rs2), target(offset))
        }
        Jal { rd, offset } => format!("jal {}, {}", reg(rd), target(offset)),
        Jalr { rd, rs1, imm } => format!("jalr {}, {imm}({})", reg(rd), reg(rs1)),
        Halt => "halt".into(),
        BufLoad { buf, dm, count } => format!("buf_load b{buf}, dm:{dm}, {count}"),
        BufStore { buf, dm, count } => format!("buf_store b{buf}, dm:{dm}, {count}"),
        BufLoadR { buf, rs1, count } => format!("buf_load b{buf}, {}, {count}", reg(rs1)),
        BufStoreR { buf, rs1, count } => format!("buf_store b{buf}, {}, {count}", reg(rs1)),
        DmaStart { rs1, rs2, count } => format!("dma_start {}, {}, {count}", reg(rs1), reg(rs2)),
        DmaWait => "dma_wait".into(),
        CryptoDispatch { alg, op, state, msg, count } => format!(
            "crypto_dispatch {}{}, b{state}, b{msg}, {count}",
            alg.mnemonic(),
            dispatch_suffix(op)
        ),
        CryptoWait { target } => match target {
            WaitTarget::All => "crypto_wait".into(),
            WaitTarget::Md => "crypto_wait md".into(),
            WaitTarget::AesHaraka => "crypto_wait aes".into(),
            WaitTarget::Keccak => "crypto_wait keccak".into(),
        },
        CryptoRead { rd, buf } => format!("crypto_read {}, b{buf}", reg(rd)),
    }
}

fn image_lines(out: &mut String, name: &str, image: &[Word]) {
    for (i, chunk) in image.chunks(4).enumerate() {
        if chunk.iter().all(|&w| w == 0) {
            continue;
        }
        let words: Vec<String> = chunk.iter().map(|w| format!("{w:#x}")).collect();
        out.push_str(&format!("{name} {} {}\n", 4 * i, words.join(" ")));
    }
}

/// Program text that assembles back to the same program.
pub fn disassemble(program: &Program) -> String {
    let mut targets = std::collections::BTreeSet::new();
    for (pc, i) in program.instructions.iter().enumerate() {
        if let Instruction::Branch { offset, .. } | Instruction::Jal { offset, .. } = *i {
            let dst = pc as i64 + offset as i64;
            if dst >= 0 && dst <= program.instructions.len() as i64 {
                targets.insert(dst as usize);
            }
        }
    }
    let mut out = String::new();
    for (pc, i) in program.instructions.iter().enumerate() {
        if targets.contains(&pc) {
            out.push_str(&format!("L{pc}:\n"));
        }
        let dst_ok = match *i {
            Instruction::Branch { offset, .. } | Instruction::Jal { offset, .. } => {
                let dst = pc as i64 + offset as i64;
                dst >= 0 && dst <= program.instructions.len() as i64
            }
            _ => false,
        };
        let text = disassemble_instruction(i, dst_ok.then_some(pc));
        out.push_str(&format!("    {text}\n"));
    }
    if targets.contains(&program.instructions.len()) {
        out.push_str(&format!("L{}:\n", program.instructions.len()));
    }
    image_lines(&mut out, ".dm", &program.dm_image);
    image_lines(&mut out, ".host", &program.host_image);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_on_their_own_line_and_inline() {
        let p = assemble("start:\n  addi x1, x0, 3\nloop: addi x1, x1, -1\n bnez x1, loop\n halt").unwrap();
        assert_eq!(p.instructions.len(), 4);
        assert!(matches!(p.instructions[2], Instruction::Branch { offset: -1, .. }));
    }

    #[test]
    fn li_expansion_sizes() {
        let p = assemble("li x1, 5\nli x2, 0x12345\nli x3, 0x1000\nhalt").unwrap();
        assert_eq!(p.instructions.len(), 5);
    }

    #[test]
    fn add_with_immediate_lowers_to_addi() {
        let p = assemble("add r1, r0, 7").unwrap();
        assert_eq!(p.instructions[0], Instruction::AluImm { op: AluImmOp::Addi, rd: 1, rs1: 0, imm: 7 });
    }

    #[test]
    fn dm_operand_is_not_a_label() {
        let p = assemble("buf_load b3, dm:17, 2").unwrap();
        assert_eq!(p.instructions[0], Instruction::BufLoad { buf: 3, dm: 17, count: 2 });
    }
}

use proptest::prelude::*;
use rvcrypt_core::isa::{
    assemble, decode, disassemble, encode, AluImmOp, AluOp, BranchCond, DispatchOp, Instruction,
    IsaError, Program, WaitTarget,
};
use rvcrypt_core::primitives::Algorithm;

fn arb_reg() -> impl Strategy<Value = u8> {
    0u8..32
}

fn arb_dispatch() -> impl Strategy<Value = Instruction> {
    (0u8..9, 0u8..3, 0u8..128, 0u8..128, 1u8..32).prop_filter_map("valid op", |(t, v, state, msg, count)| {
        let alg = Algorithm::from_tag(t).unwrap();
        let op = match (v, alg.md_mode().is_some(), alg.sponge_mode().is_some(), alg) {
            (0, ..) => DispatchOp::Default,
            (1, true, ..) => DispatchOp::Dual,
            (1, _, true, _) => DispatchOp::InitAbsorb,
            (2, _, true, _) => DispatchOp::Permute,
            (1, _, _, Algorithm::Aes128) => DispatchOp::Decrypt,
            (1, _, _, a) if a.haraka_mode().is_some() => DispatchOp::RcPrecompute,
            _ => return None,
        };
        let i = Instruction::CryptoDispatch { alg, op, state, msg, count };
        i.validate().is_ok().then_some(i)
    })
}

fn arb_instruction() -> impl Strategy<Value = Instruction> {
    use Instruction::*;
    let alu_ops = prop::sample::select(vec![
        AluOp::Add, AluOp::Sub, AluOp::Sll, AluOp::Slt, AluOp::Sltu, AluOp::Xor, AluOp::Srl,
        AluOp::Sra, AluOp::Or, AluOp::And,
    ]);
    let imm_ops = prop::sample::select(vec![
        AluImmOp::Addi, AluImmOp::Slti, AluImmOp::Sltiu, AluImmOp::Xori, AluImmOp::Ori, AluImmOp::Andi,
    ]);
    let shift_ops = prop::sample::select(vec![AluImmOp::Slli, AluImmOp::Srli, AluImmOp::Srai]);
    let conds = prop::sample::select(vec![
        BranchCond::Eq, BranchCond::Ne, BranchCond::Lt, BranchCond::Ge, BranchCond::Ltu, BranchCond::Geu,
    ]);
    let waits = prop::sample::select(vec![WaitTarget::All, WaitTarget::Md, WaitTarget::AesHaraka, WaitTarget::Keccak]);
    prop_oneof![
        (alu_ops, arb_reg(), arb_reg(), arb_reg()).prop_map(|(op, rd, rs1, rs2)| Alu { op, rd, rs1, rs2 }),
        (imm_ops, arb_reg(), arb_reg(), -2048i32..2048).prop_map(|(op, rd, rs1, imm)| AluImm { op, rd, rs1, imm }),
        (shift_ops, arb_reg(), arb_reg(), 0i32..64).prop_map(|(op, rd, rs1, imm)| AluImm { op, rd, rs1, imm }),
        (arb_reg(), -(1i32 << 19)..(1 << 19)).prop_map(|(rd, imm)| Lui { rd, imm }),
        (arb_reg(), arb_reg(), -2048i32..2048).prop_map(|(rd, rs1, imm)| Ld { rd, rs1, imm }),
        (arb_reg(), arb_reg(), -2048i32..2048).prop_map(|(rs1, rs2, imm)| Sd { rs1, rs2, imm }),
        (conds, arb_reg(), arb_reg(), -1024i32..1024).prop_map(|(cond, rs1, rs2, offset)| Branch { cond, rs1, rs2, offset }),
        (arb_reg(), -(1i32 << 18)..(1 << 18)).prop_map(|(rd, offset)| Jal { rd, offset }),
        (arb_reg(), arb_reg(), -2048i32..2048).prop_map(|(rd, rs1, imm)| Jalr { rd, rs1, imm }),
        Just(Halt),
        Just(DmaWait),
        (0u8..128, 0u16..1024, 1u8..=128).prop_map(|(buf, dm, count)| BufLoad { buf, dm, count }),
        (0u8..128, 0u16..1024, 1u8..=128).prop_map(|(buf, dm, count)| BufStore { buf, dm, count }),
        (0u8..128, arb_reg(), 1u8..=128).prop_map(|(buf, rs1, count)| BufLoadR { buf, rs1, count }),
        (0u8..128, arb_reg(), 1u8..=128).prop_map(|(buf, rs1, count)| BufStoreR { buf, rs1, count }),
        (arb_reg(), arb_reg(), 0u16..4096).prop_map(|(rs1, rs2, count)| DmaStart { rs1, rs2, count }),
        waits.prop_map(|target| CryptoWait { target }),
        (arb_reg(), 0u8..128).prop_map(|(rd, buf)| CryptoRead { rd, buf }),
        arb_dispatch(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn encode_decode_roundtrip(i in arb_instruction()) {
        let w = encode(&i).unwrap();
        prop_assert_eq!(decode(w).unwrap(), i);
    }
}

proptest! {
    #[test]
    fn decode_is_canonical(w in any::<u32>()) {
        if let Ok(i) = decode(w) {
            prop_assert_eq!(encode(&i).unwrap(), w);
        }
    }

    #[test]
    fn disassembly_is_a_fixed_point(instrs in prop::collection::vec(arb_instruction(), 1..40)) {
        // keep jumps inside the program so they print as labels
        let n = instrs.len() as i32;
        let instrs: Vec<Instruction> = instrs
            .into_iter()
            .enumerate()
            .map(|(pc, i)| match i {
                Instruction::Branch { cond, rs1, rs2, offset } => {
                    Instruction::Branch { cond, rs1, rs2, offset: offset.rem_euclid(n + 1) - pc as i32 }
                }
                other => other,
            })
            .collect();
        let p1 = Program { instructions: instrs, dm_image: vec![0, 5, 0, 0, 0, 0, 0, 7], host_image: vec![9] };
        let p2 = assemble(&disassemble(&p1)).unwrap();
        prop_assert_eq!(&p2, &p1);
        let p3 = assemble(&disassemble(&p2)).unwrap();
        prop_assert_eq!(p3, p2);
    }
}

#[test]
fn add_and_bulk_boundaries() {
    let add = Instruction::Alu { op: AluOp::Add, rd: 1, rs1: 2, rs2: 3 };
    assert_eq!(decode(encode(&add).unwrap()).unwrap(), add);
    let ok = Instruction::BufLoad { buf: 0, dm: 0, count: 128 };
    assert_eq!(decode(encode(&ok).unwrap()).unwrap(), ok);
    let bad = Instruction::BufLoad { buf: 0, dm: 0, count: 129 };
    assert!(matches!(encode(&bad), Err(IsaError::Encoding { .. })));
}

#[test]
fn zero_word_is_illegal() {
    assert_eq!(decode(0), Err(IsaError::Illegal(0)));
}

#[test]
fn dispatch_mode_tag_survives() {
    let i = Instruction::CryptoDispatch {
        alg: Algorithm::Haraka512,
        op: DispatchOp::RcPrecompute,
        state: 0,
        msg: 100,
        count: 2,
    };
    let Instruction::CryptoDispatch { alg, op, .. } = decode(encode(&i).unwrap()).unwrap() else {
        panic!()
    };
    assert_eq!((alg, op), (Algorithm::Haraka512, DispatchOp::RcPrecompute));
}

#[test]
fn halt_program() {
    assert_eq!(assemble("halt").unwrap().instructions, vec![Instruction::Halt]);
}

#[test]
fn backward_loop_offset() {
    let src = "\
        li x1, 10        ; counter
        li x2, 0
    loop:
        addi x2, x2, 3
        addi x1, x1, -1
        xor x3, x3, x2
        slli x4, x2, 1
        or x5, x4, x3
        sub x6, x5, x1
        bne x1, x0, loop
        halt";
    let p = assemble(src).unwrap();
    assert_eq!(p.instructions.len(), 10);
    assert_eq!(
        p.instructions[8],
        Instruction::Branch { cond: BranchCond::Ne, rs1: 1, rs2: 0, offset: -6 }
    );
}

#[test]
fn bulk_limit_error_cites_line_and_limit() {
    let e = assemble("halt\nbuf_load b0, dm:0, 129").unwrap_err();
    let IsaError::Assembly { line, msg } = e else { panic!() };
    assert_eq!(line, 2);
    assert!(msg.contains("128"), "{msg}");
}

#[test]
fn assembly_errors() {
    assert!(matches!(assemble("frob x1"), Err(IsaError::Assembly { line: 1, .. })));
    assert!(matches!(assemble("j nowhere"), Err(IsaError::Assembly { line: 1, .. })));
    assert!(matches!(assemble("addi x1, x0, 4096"), Err(IsaError::Assembly { .. })));
    assert!(matches!(assemble("crypto_dispatch sha512.dual, b80, b88, 1"), Err(IsaError::Assembly { .. })));
}

#[test]
fn binary_roundtrip_with_images() {
    let p = assemble(
        "li x1, 3\ndma_start x0, x1, 2\ndma_wait\nhalt\n.dm 0 0x11 0x22\n.host 0 0xaa 0xbb",
    )
    .unwrap();
    let bin = p.to_binary().unwrap();
    assert_eq!(&bin[..4], b"CRV1");
    assert_eq!(Program::from_binary(&bin).unwrap(), p);
    assert!(Program::from_binary(&bin[..bin.len() - 1]).is_err());
}

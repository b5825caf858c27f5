use proptest::prelude::*;
use rvcrypt_core::config::TimingConfig;
use rvcrypt_core::cpu::{run, ExecutionTrace};
use rvcrypt_core::isa::{assemble, DispatchOp, Instruction};
use rvcrypt_core::primitives::{self, Algorithm, MdMode};
use rvcrypt_core::scheduler::{
    analyze, plan, plan_long_message, plan_many_hash, run_workload, PlanError, ScheduleError, Workload,
    WorkloadSpec,
};

fn cfg() -> TimingConfig {
    TimingConfig::default()
}

fn dispatches(w: &Workload) -> Vec<(DispatchOp, u8, u8)> {
    plan(w)
        .unwrap()
        .program
        .instructions
        .iter()
        .filter_map(|i| match *i {
            Instruction::CryptoDispatch { op, state, msg, .. } => Some((op, state, msg)),
            _ => None,
        })
        .collect()
}

fn check(w: &Workload) -> rvcrypt_core::scheduler::WorkloadRun {
    let r = run_workload(w, &cfg()).unwrap();
    assert_eq!(r.outputs, w.expected_outputs().unwrap(), "{} {:?}", w.algorithm, w.shape);
    r
}

#[test]
fn sha256_short_message_single_dispatch() {
    let w = Workload::long_message(Algorithm::Sha256, vec![0x61; 55]).unwrap();
    let r = check(&w);
    assert_eq!(r.plan.groups, 1);
    assert_eq!(r.outputs[0], primitives::hash_md(MdMode::Sha256, &[0x61; 55]).into_bytes());
    let w = Workload::long_message(Algorithm::Sha256, vec![0x61; 64]).unwrap();
    assert_eq!(check(&w).plan.groups, 2);
}

#[test]
fn empty_message_hashes_one_padded_block() {
    for alg in [Algorithm::Sha256, Algorithm::Sha512, Algorithm::Sm3, Algorithm::Sha3_256, Algorithm::Shake128] {
        let w = Workload::long_message(alg, Vec::new()).unwrap();
        assert_eq!(check(&w).plan.groups, 1);
    }
}

#[test]
fn sha512_ping_pong_alternates_every_block() {
    let w = Workload::long_message(Algorithm::Sha512, vec![3; 64 * 128 - 17]).unwrap();
    check(&w);
    let d = dispatches(&w);
    assert_eq!(d.len(), 64);
    let msgs: Vec<u8> = d.iter().map(|x| x.2).collect();
    assert_ne!(msgs[0], msgs[1]);
    for (i, m) in msgs.iter().enumerate() {
        assert_eq!(*m, msgs[i % 2]);
    }
    assert!(d.iter().all(|x| x.1 == d[0].1), "chaining state stays resident");
}

#[test]
fn long_shake_squeezes_past_the_rate() {
    for out_len in [1, 168, 169, 500] {
        let w = Workload::long_message(Algorithm::Shake128, vec![9; 400]).unwrap().with_out_len(out_len).unwrap();
        assert_eq!(check(&w).outputs[0].len(), out_len);
    }
    let w = Workload::many_hash(Algorithm::Shake256, vec![vec![1; 10], vec![2; 10], vec![3; 10]])
        .unwrap()
        .with_out_len(300)
        .unwrap();
    check(&w);
}

#[test]
fn eight_haraka_instances_form_one_batch() {
    let w = Workload::many_hash(Algorithm::Haraka256, (0..8).map(|i| vec![i; 32]).collect()).unwrap();
    let r = check(&w);
    assert_eq!(r.plan.groups, 8);
    assert_eq!(r.plan.layout.ring_slots, 8);
}

#[test]
fn batches_overlap_dma_with_compute() {
    let w = Workload::many_hash(Algorithm::Haraka512, (0..24).map(|i| vec![i; 64]).collect()).unwrap();
    let r = check(&w);
    assert_eq!(r.plan.groups.div_ceil(r.plan.layout.ring_slots), 3);
    assert!(r.schedule.overlap > 0);
    // Group 1 is fetched before the first dispatch; every later DMA starts
    // while an engine is busy.
    let recs = &r.trace.records;
    let starts: Vec<usize> = (1..recs.len()).filter(|&i| recs[i].dma && !recs[i - 1].dma).collect();
    assert_eq!(starts.len(), 24);
    assert!(starts[2..].iter().all(|&i| recs[i].engines.iter().any(|&b| b)));
}

#[test]
fn single_instance_is_single_dispatch() {
    for (alg, len) in [(Algorithm::Sha256, 20), (Algorithm::Aes128, 32), (Algorithm::Haraka512, 64)] {
        let w = Workload::many_hash(alg, vec![vec![5; len]]).unwrap();
        check(&w);
        assert_eq!(dispatches(&w).len(), 1);
    }
}

#[test]
fn md_pairs_use_dual_lane() {
    for n in [2usize, 5, 16] {
        let w = Workload::many_hash(Algorithm::Sm3, (0..n).map(|i| vec![i as u8; 70]).collect()).unwrap();
        check(&w);
        let d = dispatches(&w);
        assert_eq!(d.len(), n.div_ceil(2));
        assert_eq!(d.iter().filter(|x| x.0 == DispatchOp::Dual).count(), n / 2);
    }
}

#[test]
fn single_lane_doubles_engine_time() {
    let w = Workload::many_hash(Algorithm::Sha256, (0..6).map(|i| vec![i as u8; 40]).collect()).unwrap();
    let dual = check(&w);
    let single = check(&w.clone().with_single_lane());
    assert!(dispatches(&w.clone().with_single_lane()).iter().all(|d| d.0 == DispatchOp::Default));
    assert_eq!(dual.outputs, single.outputs);
    assert_eq!(2 * dual.schedule.t_compute, single.schedule.t_compute);
}

#[test]
fn seeded_haraka_inserts_rc_precompute() {
    let (sk, pk) = (b"sk-seed-sk-seed-".to_vec(), b"pk-seed-pk-seed-".to_vec());
    for (alg, len) in [(Algorithm::Haraka256, 32), (Algorithm::Haraka512, 64)] {
        let w = Workload::many_hash(alg, (0..9).map(|i| vec![i; len]).collect())
            .unwrap()
            .with_seeded_rc(sk.clone(), pk.clone())
            .unwrap();
        check(&w);
        let d = dispatches(&w);
        assert_eq!(d[0].0, DispatchOp::RcPrecompute);
        assert_eq!(d.iter().filter(|x| x.0 == DispatchOp::RcPrecompute).count(), 1);
    }
}

#[test]
fn layout_errors() {
    let w = Workload::many_hash(Algorithm::Sha512, vec![vec![0; 200]; 2]).unwrap();
    assert!(matches!(plan_many_hash(&w), Err(PlanError::SlotCapacity { .. })));
    let w = Workload::many_hash(Algorithm::Sha3_256, vec![vec![0; 300]; 2]).unwrap();
    assert!(matches!(plan_many_hash(&w), Err(PlanError::SlotCapacity { .. })));
    let w = Workload::many_hash(Algorithm::Aes128, vec![vec![0; 16]]).unwrap();
    assert!(matches!(plan_many_hash(&w), Err(PlanError::InputLength { .. })));
    let w = Workload::many_hash(Algorithm::Sha256, vec![vec![0; 8]; 300]).unwrap();
    assert!(matches!(plan_many_hash(&w), Err(PlanError::OutputOverflow { .. })));
    assert_eq!(Workload::long_message(Algorithm::Aes128, vec![]), Err(PlanError::NotHash(Algorithm::Aes128)));
    assert_eq!(Workload::many_hash(Algorithm::Sm3, vec![vec![1], vec![1, 2]]), Err(PlanError::MixedLengths));
    let w = Workload::many_hash(Algorithm::Haraka256, vec![vec![0; 32]]).unwrap();
    assert!(w.clone().with_seeded_rc(vec![1; 8], vec![1; 16]).is_err());
    assert!(w.clone().with_seeded_rc(vec![1; 7], vec![1; 7]).is_err());
    assert!(plan_long_message(&w).is_err());
}

#[test]
fn analyze_compute_only_and_dma_only() {
    let w = Workload::many_hash(Algorithm::Aes128, vec![vec![1; 32]]).unwrap();
    let p = plan(&w).unwrap();
    let mut compute_only = p.program.clone();
    compute_only.instructions.retain(|i| !matches!(i, Instruction::DmaStart { .. }));
    let s = analyze(&run(&compute_only, &cfg(), 10_000).unwrap().trace).unwrap();
    assert_eq!(s.t_dma, 0);
    assert!(s.t_total >= s.t_compute && s.t_compute == 14);

    let p = assemble(".host 0 1 2 3\nli x1, 0\nli x2, 10\ndma_start x1, x2, 3\ndma_wait\nhalt").unwrap();
    let s = analyze(&run(&p, &cfg(), 1000).unwrap().trace).unwrap();
    assert_eq!((s.t_compute, s.t_dma, s.overlap), (0, 7, 0));
}

#[test]
fn analyze_refuses_runaway() {
    let p = assemble("loop: j loop").unwrap();
    let trace: ExecutionTrace = run(&p, &cfg(), 50).unwrap_err().trace;
    assert!(matches!(analyze(&trace), Err(ScheduleError::Incomplete(50))));
}

fn sha512_blocks(n: usize) -> rvcrypt_core::scheduler::ScheduleTrace {
    let w = Workload::long_message(Algorithm::Sha512, vec![0xab; n * 128 - 17]).unwrap();
    check(&w).schedule
}

#[test]
fn long_message_overlap_bound() {
    let s64 = sha512_blocks(64);
    assert!(s64.t_total as f64 <= 1.15 * s64.t_compute as f64, "{s64:?}");
    let ratios: Vec<f64> = [8, 16, 24, 32, 48, 64].iter().map(|&n| sha512_blocks(n).ratio()).collect();
    assert!(ratios.windows(2).all(|w| w[1] <= w[0]), "{ratios:?}");
}

#[test]
fn long_message_slack_is_affine_in_blocks() {
    let slack: Vec<i64> = (8..=12).map(|n| {
        let s = sha512_blocks(n);
        (s.t_total - s.t_compute) as i64
    }).collect();
    let per_block = slack[1] - slack[0];
    assert!(slack.windows(2).all(|w| w[1] - w[0] == per_block), "{slack:?}");
    assert!((0..=4).contains(&per_block));
    assert!(slack[0] - 8 * per_block <= 200);
}

#[test]
fn steady_state_approaches_engine_block_time() {
    let (a, b) = (sha512_blocks(64), sha512_blocks(128));
    let per_block = (b.t_total - a.t_total) as f64 / 64.0;
    assert!(per_block <= 84.0 * 1.10, "{per_block}");
    assert!(per_block >= 84.0);
}

#[test]
fn workload_config_text() {
    let text = "# demo\nalgorithm = sha512\nshape = long-message\nbytes = 1000\nseed = 4\ntiming.md.fill = 6\n";
    let spec = WorkloadSpec::parse(text, &cfg()).unwrap();
    assert_eq!(spec.timing.md_fill, 6);
    let w = spec.build().unwrap();
    assert_eq!(w.inputs[0].len(), 1000);
    assert_eq!(spec.build().unwrap(), w);
    let r = run_workload(&w, &spec.timing).unwrap();
    assert_eq!(r.outputs, w.expected_outputs().unwrap());
    assert!(r.schedule.to_text().contains("t_total="));

    let spec = WorkloadSpec::parse("algorithm=haraka256\nshape=many\ninstances=3\nsk=0001020304050607\npk=0706050403020100", &cfg()).unwrap();
    assert_eq!(spec.build().unwrap().seeded_rc.as_ref().unwrap().0.len(), 8);

    for bad in ["shape = long", "algorithm = md5", "algorithm = sm3\nbytes = x", "algorithm=sm3\nbytes=1\ntiming.nope=1", "algorithm=sm3\nbytes=1\nfoo=1"] {
        assert!(WorkloadSpec::parse(bad, &cfg()).is_err(), "{bad}");
    }
}

fn workload_strategy() -> impl Strategy<Value = Workload> {
    (0usize..9, any::<bool>(), 0usize..1500, 1usize..20, any::<u64>()).prop_map(|(a, long, len, n, seed)| {
        let alg = Algorithm::ALL[a];
        let bytes = |i: usize, len: usize| -> Vec<u8> {
            (0..len).map(|j| (seed.wrapping_mul(31).wrapping_add((i * 7919 + j) as u64) >> 3) as u8).collect()
        };
        let long = long && (alg.md_mode().is_some() || alg.sponge_mode().is_some());
        if long {
            return Workload::long_message(alg, bytes(0, len)).unwrap();
        }
        let len = match alg {
            Algorithm::Sha256 | Algorithm::Sm3 => len % 120,
            Algorithm::Sha512 => len % 112,
            Algorithm::Sha3_256 | Algorithm::Shake256 => len % 136,
            Algorithm::Shake128 => len % 168,
            Algorithm::Aes128 => 32,
            Algorithm::Haraka256 => 32,
            Algorithm::Haraka512 => 64,
        };
        Workload::many_hash(alg, (0..n).map(|i| bytes(i, len)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn schedules_are_bit_exact(w in workload_strategy()) {
        let r = run_workload(&w, &cfg()).unwrap();
        prop_assert_eq!(r.outputs, w.expected_outputs().unwrap());
        let s = r.schedule;
        prop_assert!(s.t_total >= s.t_compute.max(s.t_dma));
        prop_assert!(s.overlap <= s.t_compute.min(s.t_dma));
    }

    #[test]
    fn batch_equals_independent_runs(n in 1usize..12, len in 0usize..100) {
        let inputs: Vec<Vec<u8>> = (0..n).map(|i| vec![i as u8; len]).collect();
        let batch = run_workload(&Workload::many_hash(Algorithm::Sha256, inputs.clone()).unwrap(), &cfg()).unwrap();
        for (i, m) in inputs.into_iter().enumerate() {
            let single = run_workload(&Workload::many_hash(Algorithm::Sha256, vec![m]).unwrap(), &cfg()).unwrap();
            prop_assert_eq!(&batch.outputs[i], &single.outputs[0]);
        }
    }
}

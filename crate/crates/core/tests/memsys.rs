use proptest::prelude::*;
use rvcrypt_core::config::TimingConfig;
use rvcrypt_core::memsys::{
    buf_transfer, buf_transfer_cost, dma_run_to_completion, parse_hex_dump, DataMemory, Direction,
    DmaChannel, DmaStatus, InternalBuffer, MemError,
};

#[test]
fn full_buffer_transfer_costs_129() {
    let cfg = TimingConfig::default();
    let mut dm = DataMemory::new();
    let mut buf = InternalBuffer::new();
    let data: Vec<u64> = (0..128).map(|i| i * 3 + 1).collect();
    dm.write_slice(500, &data).unwrap();
    let cost = buf_transfer(Direction::DmToBuf, &mut dm, &mut buf, 500, 0, 128, &cfg).unwrap();
    assert_eq!(cost, 129);
    assert_eq!(buf.words(), &data[..]);
}

#[test]
fn single_word_leaves_source() {
    let cfg = TimingConfig::default();
    let mut dm = DataMemory::new();
    let mut buf = InternalBuffer::new();
    buf.write(7, 0xdead).unwrap();
    buf_transfer(Direction::BufToDm, &mut dm, &mut buf, 3, 7, 1, &cfg).unwrap();
    assert_eq!(dm.read(3).unwrap(), 0xdead);
    assert_eq!(buf.read(7).unwrap(), 0xdead);
    assert_eq!(dm.read(4).unwrap(), 0);
}

#[test]
fn transfer_bounds() {
    let cfg = TimingConfig::default();
    let mut dm = DataMemory::new();
    let mut buf = InternalBuffer::new();
    assert!(matches!(
        buf_transfer(Direction::DmToBuf, &mut dm, &mut buf, 1020, 0, 8, &cfg),
        Err(MemError::OutOfBounds { .. })
    ));
    assert_eq!(
        buf_transfer(Direction::DmToBuf, &mut dm, &mut buf, 0, 0, 0, &cfg),
        Err(MemError::BadCount(0))
    );
    assert_eq!(
        buf_transfer(Direction::DmToBuf, &mut dm, &mut buf, 0, 0, 129, &cfg),
        Err(MemError::BadCount(129))
    );
    assert!(buf_transfer(Direction::DmToBuf, &mut dm, &mut buf, 0, 120, 16, &cfg).is_err());
}

#[test]
fn dma_hundred_words_takes_104_ticks() {
    let cfg = TimingConfig::default();
    let mut ch = DmaChannel::new(&cfg);
    let mut dm = DataMemory::new();
    let image: Vec<u64> = (1..=100).collect();
    assert_eq!(dma_run_to_completion(&mut ch, &mut dm, &image, 10).unwrap(), 104);
    assert_eq!(dm.slice(10, 100).unwrap(), &image[..]);
    assert!(!ch.is_busy());
}

#[test]
fn dma_commits_atomically() {
    let cfg = TimingConfig::default();
    let mut ch = DmaChannel::new(&cfg);
    let mut dm = DataMemory::new();
    ch.start(&[5, 6, 7], 0).unwrap();
    for _ in 0..6 {
        assert_eq!(ch.tick(&mut dm), DmaStatus::Busy);
        assert_eq!(dm.slice(0, 3).unwrap(), &[0, 0, 0]);
    }
    assert_eq!(ch.tick(&mut dm), DmaStatus::Done);
    assert_eq!(dm.slice(0, 3).unwrap(), &[5, 6, 7]);
    assert_eq!(ch.tick(&mut dm), DmaStatus::Idle);
}

#[test]
fn empty_dma_takes_setup_only() {
    let cfg = TimingConfig::default();
    let mut ch = DmaChannel::new(&cfg);
    let mut dm = DataMemory::new();
    assert_eq!(dma_run_to_completion(&mut ch, &mut dm, &[], 0).unwrap(), 4);
    assert!(dm.words().iter().all(|&w| w == 0));
}

#[test]
fn dma_busy_and_overflow() {
    let cfg = TimingConfig::default();
    let mut ch = DmaChannel::new(&cfg);
    ch.start(&[1], 0).unwrap();
    assert_eq!(ch.start(&[1], 0), Err(MemError::ChannelBusy));
    let mut ch = DmaChannel::new(&cfg);
    assert!(matches!(ch.start(&[0; 10], 1020), Err(MemError::OutOfBounds { .. })));
}

#[test]
fn hex_dump_loader() {
    let words = parse_hex_dump("# image\n1 2\n@10 ff ; tail\n").unwrap();
    assert_eq!(words.len(), 17);
    assert_eq!((words[0], words[1], words[16]), (1, 2, 0xff));
    assert!(parse_hex_dump("zz").is_err());
}

proptest! {
    #[test]
    fn cost_strictly_increasing(count in 1usize..128, rate in 1u64..4, setup in 0u64..8) {
        let cfg = TimingConfig { buf_words_per_cycle: 1, buf_setup: setup, ..TimingConfig::default() };
        prop_assert!(buf_transfer_cost(count + 1, &cfg) > buf_transfer_cost(count, &cfg));
        let fast = TimingConfig { buf_words_per_cycle: rate, ..cfg.clone() };
        prop_assert!(buf_transfer_cost(count + rate as usize, &fast) > buf_transfer_cost(count, &fast));
    }

    #[test]
    fn copy_fidelity(data in prop::collection::vec(any::<u64>(), 1..=128), base in 0usize..896) {
        let cfg = TimingConfig::default();
        let mut dm = DataMemory::new();
        let mut buf = InternalBuffer::new();
        dm.write_slice(base, &data).unwrap();
        buf_transfer(Direction::DmToBuf, &mut dm, &mut buf, base, 0, data.len(), &cfg).unwrap();
        let mut dm2 = DataMemory::new();
        buf_transfer(Direction::BufToDm, &mut dm2, &mut buf, base, 0, data.len(), &cfg).unwrap();
        prop_assert_eq!(dm2.slice(base, data.len()).unwrap(), &data[..]);
    }
}

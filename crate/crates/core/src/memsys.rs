//! Data memory, the engine-adjacent internal buffer, the host DMA channel,
//! and the cycle costs of moving words between them.

use thiserror::Error;

use crate::config::TimingConfig;
use crate::Word;

pub const DM_WORDS: usize = 1024;
pub const BUF_WORDS: usize = 128;
pub const MAX_BULK_WORDS: usize = crate::isa::MAX_BULK_WORDS;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MemError {
    #[error("{what} range {base}..{end} out of bounds (size {size})")]
    OutOfBounds {
        what: &'static str,
        base: usize,
        end: usize,
        size: usize,
    },
    #[error("bulk transfer count {0} outside 1..=128")]
    BadCount(usize),
    #[error("DMA channel busy")]
    ChannelBusy,
}

fn check_range(what: &'static str, base: usize, count: usize, size: usize) -> Result<(), MemError> {
    let end = base.saturating_add(count);
    if end > size {
        return Err(MemError::OutOfBounds { what, base, end, size });
    }
    Ok(())
}

/// A fixed-size array of datapath words with bounds-checked range access.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordArray<const N: usize> {
    words: Vec<Word>,
}

impl<const N: usize> Default for WordArray<N> {
    fn default() -> Self {
        WordArray { words: vec![0; N] }
    }
}

impl<const N: usize> WordArray<N> {
    const WHAT: &'static str = if N == DM_WORDS { "data memory" } else { "buffer" };

    pub fn new() -> Self {
        Self::default()
    }

    pub fn read(&self, addr: usize) -> Result<Word, MemError> {
        check_range(Self::WHAT, addr, 1, N)?;
        Ok(self.words[addr])
    }

    pub fn write(&mut self, addr: usize, value: Word) -> Result<(), MemError> {
        check_range(Self::WHAT, addr, 1, N)?;
        self.words[addr] = value;
        Ok(())
    }

    pub fn slice(&self, base: usize, count: usize) -> Result<&[Word], MemError> {
        check_range(Self::WHAT, base, count, N)?;
        Ok(&self.words[base..base + count])
    }

    pub fn write_slice(&mut self, base: usize, data: &[Word]) -> Result<(), MemError> {
        check_range(Self::WHAT, base, data.len(), N)?;
        self.words[base..base + data.len()].copy_from_slice(data);
        Ok(())
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }
}

/// 1024 x 64-bit data memory.
pub type DataMemory = WordArray<DM_WORDS>;
/// 128 x 64-bit internal buffer.
pub type InternalBuffer = WordArray<BUF_WORDS>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    DmToBuf,
    BufToDm,
}

/// Cycles a bulk DM/buffer transfer of `count` words occupies.
pub fn buf_transfer_cost(count: usize, cfg: &TimingConfig) -> u64 {
    cfg.buf_setup + (count as u64).div_ceil(cfg.buf_words_per_cycle)
}

fn check_bulk(count: usize) -> Result<(), MemError> {
    if count == 0 || count > MAX_BULK_WORDS {
        return Err(MemError::BadCount(count));
    }
    Ok(())
}

/// Check a transfer without performing it.
pub fn check_buf_transfer(dm_base: usize, buf_base: usize, count: usize) -> Result<(), MemError> {
    check_bulk(count)?;
    check_range("data memory", dm_base, count, DM_WORDS)?;
    check_range("buffer", buf_base, count, BUF_WORDS)
}

/// Copy `count` words between DM and the buffer; returns the cycle cost.
pub fn buf_transfer(
    dir: Direction,
    dm: &mut DataMemory,
    buf: &mut InternalBuffer,
    dm_base: usize,
    buf_base: usize,
    count: usize,
    cfg: &TimingConfig,
) -> Result<u64, MemError> {
    check_buf_transfer(dm_base, buf_base, count)?;
    match dir {
        Direction::DmToBuf => {
            let src = dm.slice(dm_base, count)?.to_vec();
            buf.write_slice(buf_base, &src)?;
        }
        Direction::BufToDm => {
            let src = buf.slice(buf_base, count)?.to_vec();
            dm.write_slice(dm_base, &src)?;
        }
    }
    Ok(buf_transfer_cost(count, cfg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DmaStatus {
    Idle,
    Busy,
    /// The transfer committed on this tick.
    Done,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Transfer {
    dm_base: usize,
    data: Vec<Word>,
    remaining: u64,
}

/// Host-to-DM DMA channel. The image is snapshotted at start and committed
/// to DM in one step when the last cycle elapses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DmaChannel {
    active: Option<Transfer>,
    setup: u64,
    words_per_cycle: u64,
}

impl DmaChannel {
    pub fn new(cfg: &TimingConfig) -> Self {
        DmaChannel { active: None, setup: cfg.dma_setup, words_per_cycle: cfg.dma_words_per_cycle }
    }

    pub fn transfer_cycles(&self, words: usize) -> u64 {
        self.setup + (words as u64).div_ceil(self.words_per_cycle)
    }

    pub fn is_busy(&self) -> bool {
        self.active.is_some()
    }

    pub fn remaining_cycles(&self) -> u64 {
        self.active.as_ref().map_or(0, |t| t.remaining)
    }

    /// Begin copying `image` to DM at `dm_base`; returns the transfer length
    /// in cycles.
    pub fn start(&mut self, image: &[Word], dm_base: usize) -> Result<u64, MemError> {
        if self.active.is_some() {
            return Err(MemError::ChannelBusy);
        }
        check_range("data memory", dm_base, image.len(), DM_WORDS)?;
        let cycles = self.transfer_cycles(image.len());
        self.active = Some(Transfer { dm_base, data: image.to_vec(), remaining: cycles });
        Ok(cycles)
    }

    /// Advance one cycle.
    pub fn tick(&mut self, dm: &mut DataMemory) -> DmaStatus {
        let Some(t) = self.active.as_mut() else {
            return DmaStatus::Idle;
        };
        t.remaining = t.remaining.saturating_sub(1);
        if t.remaining > 0 {
            return DmaStatus::Busy;
        }
        let t = self.active.take().unwrap();
        dm.write_slice(t.dm_base, &t.data).expect("range checked at start");
        DmaStatus::Done
    }
}

/// Convenience for tests and tools: start a transfer and tick it to
/// completion, returning the number of ticks taken.
pub fn dma_run_to_completion(
    ch: &mut DmaChannel,
    dm: &mut DataMemory,
    image: &[Word],
    dm_base: usize,
) -> Result<u64, MemError> {
    ch.start(image, dm_base)?;
    let mut ticks = 0;
    while ch.tick(dm) != DmaStatus::Done {
        ticks += 1;
    }
    Ok(ticks + 1)
}

/// Parse a textual hex dump: whitespace-separated 64-bit hex words, `#` or
/// `;` comments, and optional `@addr` markers that move the write cursor.
pub fn parse_hex_dump(text: &str) -> Result<Vec<Word>, String> {
    let mut out: Vec<Word> = Vec::new();
    let mut cursor = 0usize;
    for (n, line) in text.lines().enumerate() {
        let code = line.split(['#', ';']).next().unwrap_or("");
        for tok in code.split_whitespace() {
            if let Some(addr) = tok.strip_prefix('@') {
                cursor = usize::from_str_radix(addr.trim_start_matches("0x"), 16)
                    .map_err(|_| format!("line {}: bad address `{tok}`", n + 1))?;
                continue;
            }
            let w = u64::from_str_radix(tok.trim_start_matches("0x"), 16)
                .map_err(|_| format!("line {}: bad word `{tok}`", n + 1))?;
            if out.len() <= cursor {
                out.resize(cursor + 1, 0);
            }
            out[cursor] = w;
            cursor += 1;
        }
    }
    Ok(out)
}

/// Raw binary DM image: little-endian 64-bit words.
pub fn image_from_le_bytes(bytes: &[u8]) -> Result<Vec<Word>, String> {
    if !bytes.len().is_multiple_of(8) {
        return Err(format!("image length {} is not a multiple of 8", bytes.len()));
    }
    Ok(bytes.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect())
}

pub fn image_to_le_bytes(words: &[Word]) -> Vec<u8> {
    words.iter().flat_map(|w| w.to_le_bytes()).collect()
}

use std::fmt::{self, Write as _};

use crate::units::EngineKind;

/// Why a bubble entered the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StallCause {
    /// Initial empty latches.
    Fill,
    LoadUse,
    CryptoWait,
    DmaWait,
    /// Dispatch to an engine that is still busy.
    EngineBusy,
    /// DMA_START while the channel is busy.
    DmaBusy,
    /// Wrong-path slots squashed by a taken branch or jump.
    Flush,
    /// A multi-cycle buffer transfer holding MEM.
    MemHold,
    /// Fetch stopped after HALT.
    Drain,
}

impl StallCause {
    pub const ALL: [StallCause; 9] = [
        StallCause::Fill,
        StallCause::LoadUse,
        StallCause::CryptoWait,
        StallCause::DmaWait,
        StallCause::EngineBusy,
        StallCause::DmaBusy,
        StallCause::Flush,
        StallCause::MemHold,
        StallCause::Drain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StallCause::Fill => "fill",
            StallCause::LoadUse => "load_use",
            StallCause::CryptoWait => "crypto_wait",
            StallCause::DmaWait => "dma_wait",
            StallCause::EngineBusy => "engine_busy",
            StallCause::DmaBusy => "dma_busy",
            StallCause::Flush => "flush",
            StallCause::MemHold => "mem_hold",
            StallCause::Drain => "drain",
        }
    }

    /// Stalls raised by the ID stage's hazard and wait checks.
    pub fn is_id_stall(self) -> bool {
        matches!(
            self,
            StallCause::LoadUse
                | StallCause::CryptoWait
                | StallCause::DmaWait
                | StallCause::EngineBusy
                | StallCause::DmaBusy
        )
    }
}

impl fmt::Display for StallCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One cycle of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRecord {
    pub cycle: u64,
    /// Instruction index occupying IF, ID, EX, MEM, WB during this cycle.
    pub stages: [Option<usize>; 5],
    /// Bubble created this cycle by an ID stall or a MEM hold.
    pub stall: Option<StallCause>,
    /// A taken branch or jump squashed younger instructions this cycle.
    pub flush: bool,
    /// Engine busy flags (md, aes, keccak) during this cycle.
    pub engines: [bool; 3],
    pub dma: bool,
    /// What WB did: retire an instruction or absorb a bubble.
    pub wb: WbEvent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WbEvent {
    Retired,
    Bubble(StallCause),
}

/// Append-only per-cycle record of a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub records: Vec<CycleRecord>,
    /// HALT retired in the last record.
    pub halted: bool,
}

/// Totals over a trace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceSummary {
    pub cycles: u64,
    pub retired: u64,
    /// Bubbles that reached WB, by cause, in [`StallCause::ALL`] order.
    pub bubbles: [u64; 9],
    pub engine_busy: [u64; 3],
    pub dma_busy: u64,
    pub any_engine_busy: u64,
    pub overlap: u64,
}

impl TraceSummary {
    pub fn bubbles_of(&self, cause: StallCause) -> u64 {
        self.bubbles[StallCause::ALL.iter().position(|&c| c == cause).unwrap()]
    }

    pub fn id_stalls(&self) -> u64 {
        StallCause::ALL.iter().filter(|c| c.is_id_stall()).map(|&c| self.bubbles_of(c)).sum()
    }

    /// `cycles = fill + retired + id stalls + flush bubbles + MEM holds`.
    pub fn identity_holds(&self) -> bool {
        self.cycles
            == self.bubbles_of(StallCause::Fill)
                + self.retired
                + self.id_stalls()
                + self.bubbles_of(StallCause::Flush)
                + self.bubbles_of(StallCause::MemHold)
                + self.bubbles_of(StallCause::Drain)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "cycles {}", self.cycles).unwrap();
        writeln!(out, "retired {}", self.retired).unwrap();
        for c in StallCause::ALL {
            writeln!(out, "bubbles.{} {}", c.name(), self.bubbles_of(c)).unwrap();
        }
        for k in EngineKind::ALL {
            writeln!(out, "engine_busy.{} {}", k.name(), self.engine_busy[k.index()]).unwrap();
        }
        writeln!(out, "dma_busy {}", self.dma_busy).unwrap();
        out
    }
}

fn pc_col(pc: Option<usize>) -> String {
    pc.map_or_else(|| "-".to_string(), |p| p.to_string())
}

impl ExecutionTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn summary(&self) -> TraceSummary {
        let mut s = TraceSummary { cycles: self.records.len() as u64, ..Default::default() };
        for r in &self.records {
            match r.wb {
                WbEvent::Retired => s.retired += 1,
                WbEvent::Bubble(c) => {
                    s.bubbles[StallCause::ALL.iter().position(|&x| x == c).unwrap()] += 1
                }
            }
            for (i, &b) in r.engines.iter().enumerate() {
                s.engine_busy[i] += b as u64;
            }
            let any = r.engines.iter().any(|&b| b);
            s.any_engine_busy += any as u64;
            s.dma_busy += r.dma as u64;
            s.overlap += (any && r.dma) as u64;
        }
        s
    }

    /// Column order: cycle, IF, ID, EX, MEM, WB (instruction indices or
    /// `-`), stall cause, flush, md, aes, keccak, dma busy (0/1), wb event.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# cycle if id ex mem wb stall flush md aes keccak dma wb_event\n");
        for r in &self.records {
            let stages: Vec<String> = r.stages.iter().map(|&p| pc_col(p)).collect();
            let wb = match r.wb {
                WbEvent::Retired => "retire".to_string(),
                WbEvent::Bubble(c) => c.name().to_string(),
            };
            writeln!(
                out,
                "{} {} {} {} {} {} {} {} {}",
                r.cycle,
                stages.join(" "),
                r.stall.map_or("-", |c| c.name()),
                r.flush as u8,
                r.engines[0] as u8,
                r.engines[1] as u8,
                r.engines[2] as u8,
                r.dma as u8,
                wb
            )
            .unwrap();
        }
        out
    }
}

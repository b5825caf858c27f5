//! Timing knobs shared by the memory system, the engines and the core.
//!
//! Text form: one `key = value` per line, `#` comments.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{key}: {msg}")]
    Invalid { key: &'static str, msg: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingConfig {
    pub md_fill: u64,
    pub aes_fill: u64,
    pub keccak_fill: u64,
    pub md_dispatch_overhead: u64,
    pub aes_dispatch_overhead: u64,
    pub keccak_dispatch_overhead: u64,
    /// Serial key expansion before the first AES block.
    pub aes_key_schedule_cycles: u64,
    /// `None` derives the duration from the Keccak timing model.
    pub rc_precompute_cycles: Option<u64>,
    pub dma_setup: u64,
    pub dma_words_per_cycle: u64,
    pub buf_setup: u64,
    pub buf_words_per_cycle: u64,
    pub load_use_stall: u64,
    pub branch_flush: u64,
    pub frequency_mhz: f64,
    pub imem_words: usize,
}

impl Default for TimingConfig {
    fn default() -> Self {
        TimingConfig {
            md_fill: 4,
            aes_fill: 4,
            keccak_fill: 2,
            md_dispatch_overhead: 0,
            aes_dispatch_overhead: 0,
            keccak_dispatch_overhead: 0,
            aes_key_schedule_cycles: 0,
            rc_precompute_cycles: None,
            dma_setup: 4,
            dma_words_per_cycle: 1,
            buf_setup: 1,
            buf_words_per_cycle: 1,
            load_use_stall: 1,
            branch_flush: 2,
            frequency_mhz: 160.0,
            imem_words: crate::isa::DEFAULT_IMEM_WORDS,
        }
    }
}

macro_rules! knobs {
    ($($key:literal => $field:ident),* $(,)?) => {
        const INT_KEYS: &[&str] = &[$($key),*];

        fn set_int(cfg: &mut TimingConfig, key: &str, v: u64) -> bool {
            match key {
                $($key => cfg.$field = v as _,)*
                _ => return false,
            }
            true
        }

        fn get_int(cfg: &TimingConfig, key: &str) -> u64 {
            match key {
                $($key => cfg.$field as u64,)*
                _ => unreachable!(),
            }
        }
    };
}

knobs! {
    "md.fill" => md_fill,
    "aes.fill" => aes_fill,
    "keccak.fill" => keccak_fill,
    "md.dispatch_overhead" => md_dispatch_overhead,
    "aes.dispatch_overhead" => aes_dispatch_overhead,
    "keccak.dispatch_overhead" => keccak_dispatch_overhead,
    "aes.key_schedule_cycles" => aes_key_schedule_cycles,
    "dma.setup" => dma_setup,
    "dma.words_per_cycle" => dma_words_per_cycle,
    "buf.setup" => buf_setup,
    "buf.words_per_cycle" => buf_words_per_cycle,
    "core.load_use_stall" => load_use_stall,
    "core.branch_flush" => branch_flush,
    "core.imem_words" => imem_words,
}

impl TimingConfig {
    /// Apply `key = value` lines on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Parse {
                line,
                msg: format!("expected `key = value`, found `{body}`"),
            })?;
            self.set(key.trim(), value.trim()).map_err(|msg| ConfigError::Parse { line, msg })?;
        }
        self.validate()
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = TimingConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Set one knob by name. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "frequency_mhz" | "core.frequency_mhz" => {
                self.frequency_mhz = value.parse().map_err(|_| format!("bad number `{value}`"))?;
            }
            "rc_precompute_cycles" | "aes.rc_precompute_cycles" => {
                self.rc_precompute_cycles = match value {
                    "auto" => None,
                    v => Some(v.parse().map_err(|_| format!("bad integer `{v}`"))?),
                };
            }
            _ => {
                let v: u64 = value.parse().map_err(|_| format!("bad integer `{value}` for {key}"))?;
                if !set_int(self, key, v) {
                    return Err(format!("unknown timing key `{key}`"));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dma_words_per_cycle == 0 {
            return Err(ConfigError::Invalid { key: "dma.words_per_cycle", msg: "must be >= 1".into() });
        }
        if self.buf_words_per_cycle == 0 {
            return Err(ConfigError::Invalid { key: "buf.words_per_cycle", msg: "must be >= 1".into() });
        }
        if self.frequency_mhz.is_nan() || self.frequency_mhz <= 0.0 {
            return Err(ConfigError::Invalid { key: "frequency_mhz", msg: "must be positive".into() });
        }
        if self.imem_words == 0 {
            return Err(ConfigError::Invalid { key: "core.imem_words", msg: "must be >= 1".into() });
        }
        Ok(())
    }

    /// Every knob in text form; `from_text(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in INT_KEYS {
            writeln!(out, "{key} = {}", get_int(self, key)).unwrap();
        }
        match self.rc_precompute_cycles {
            Some(c) => writeln!(out, "rc_precompute_cycles = {c}").unwrap(),
            None => writeln!(out, "rc_precompute_cycles = auto").unwrap(),
        }
        writeln!(out, "frequency_mhz = {}", self.frequency_mhz).unwrap();
        out
    }
}

//! Reference-table workloads and the cycle, efficiency and speedup reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use rvcrypt_core::config::TimingConfig;
use rvcrypt_core::primitives::Algorithm;
use rvcrypt_core::scheduler::{run_workload, ScheduleError, Workload, WorkloadRun};
use rvcrypt_core::units::EngineKind;
use thiserror::Error;

use crate::published::{self, PublishedRow};
use crate::report::{col, Cell, Provenance::*, Report};

/// Frozen calibration, applied on top of the default timing model.
pub const CALIBRATION: &str = include_str!("../data/calibration.cfg");
/// Relative tolerance of calibrated totals against the published table.
pub const CYCLE_TOLERANCE: f64 = 0.20;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("power must be positive, got {0}")]
    Power(f64),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PowerBasis {
    /// One SoC-wide dynamic power figure for every algorithm.
    #[default]
    Soc,
    /// The dynamic power of the engine that runs the algorithm.
    Unit,
}

/// Timing model plus the bench-only power settings.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub timing: TimingConfig,
    pub power_w: f64,
    pub power_basis: PowerBasis,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { timing: TimingConfig::default(), power_w: published::SOC_DYNAMIC_POWER_W, power_basis: PowerBasis::Soc }
    }
}

impl BenchConfig {
    pub fn calibrated() -> Self {
        let mut c = BenchConfig::default();
        c.apply_text(CALIBRATION).expect("bundled calibration parses");
        c
    }

    /// `key = value` lines; `power.soc_w` and `power.basis` (soc | unit) are
    /// handled here, every other key goes to the timing model.
    pub fn apply_text(&mut self, text: &str) -> Result<(), BenchError> {
        let mut timing_lines = String::new();
        for (i, raw) in text.lines().enumerate() {
            let err = |msg: String| BenchError::Config { line: i + 1, msg };
            let content = raw.split('#').next().unwrap().trim();
            match content.split_once('=').map(|(k, v)| (k.trim(), v.trim())) {
                Some(("power.soc_w", v)) => {
                    let p: f64 = v.parse().map_err(|e| err(format!("power.soc_w: {e}")))?;
                    if p.is_nan() || p <= 0.0 {
                        return Err(BenchError::Power(p));
                    }
                    self.power_w = p;
                }
                Some(("power.basis", v)) => {
                    self.power_basis = match v {
                        "soc" => PowerBasis::Soc,
                        "unit" => PowerBasis::Unit,
                        _ => return Err(err(format!("power.basis must be soc or unit, got `{v}`"))),
                    }
                }
                _ => {}
            }
            let keep = if content.starts_with("power.") { "" } else { raw };
            timing_lines.push_str(keep);
            timing_lines.push('\n');
        }
        self.timing.apply_text(&timing_lines).map_err(|e| match e {
            rvcrypt_core::config::ConfigError::Parse { line, msg } => BenchError::Config { line, msg },
            other => BenchError::Config { line: 0, msg: other.to_string() },
        })
    }

    pub fn power_for(&self, alg: Algorithm) -> f64 {
        match self.power_basis {
            PowerBasis::Soc => self.power_w,
            PowerBasis::Unit => published::unit_figures(EngineKind::for_algorithm(alg)).2,
        }
    }
}

fn random_bytes(rng: &mut ChaCha20Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen()).collect()
}

/// Message bytes actually hashed for a reference row: MD rows use the longest
/// message that still pads into the single block the row reports.
pub fn message_bytes(row: &PublishedRow) -> usize {
    match row.algorithm.md_mode() {
        Some(m) => m.block_bytes() - m.length_field_bytes() - 1,
        None => row.bytes,
    }
}

/// The single-message workload for one algorithm at its published size.
pub fn reference_workload(alg: Algorithm, seed: u64) -> Workload {
    let row = published::row_for(alg);
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ alg.tag() as u64);
    let w = match alg {
        Algorithm::Aes128 => Workload::many_hash(alg, vec![random_bytes(&mut rng, 32)]),
        a if a.haraka_mode().is_some() => Workload::many_hash(alg, vec![random_bytes(&mut rng, row.bytes)]),
        _ => Workload::long_message(alg, random_bytes(&mut rng, message_bytes(row))),
    };
    w.expect("reference workloads are valid")
}

#[derive(Clone, Debug)]
pub struct Measurement {
    pub algorithm: Algorithm,
    pub run: WorkloadRun,
    /// Stack output equals the golden-reference output.
    pub verified: bool,
}

impl Measurement {
    pub fn cycles(&self) -> u64 {
        self.run.schedule.t_total
    }
}

pub fn measure(w: &Workload, cfg: &TimingConfig) -> Result<Measurement, ScheduleError> {
    let run = run_workload(w, cfg)?;
    let verified = w.expected_outputs().map(|e| e == run.outputs).unwrap_or(false);
    Ok(Measurement { algorithm: w.algorithm, run, verified })
}

/// Reference-table runs for every algorithm, in table order.
pub fn measure_reference_rows(cfg: &TimingConfig, seed: u64) -> Vec<(PublishedRow, Result<Measurement, String>)> {
    published::ROWS
        .par_iter()
        .map(|row| (*row, measure(&reference_workload(row.algorithm, seed), cfg).map_err(|e| e.to_string())))
        .collect()
}

pub fn throughput_mbps(bytes: usize, cycles: u64, freq_mhz: f64) -> f64 {
    bytes as f64 * 8.0 * freq_mhz / cycles as f64
}

pub fn relative_delta(measured: u64, reference: u64) -> f64 {
    (measured as f64 - reference as f64) / reference as f64
}

#[derive(Clone, Debug)]
pub struct CycleOutcome {
    pub report: Report,
    /// Every row verified and within tolerance (totals and cycles/byte).
    pub pass: bool,
}

pub fn cycle_report(cfg: &TimingConfig, seed: u64) -> CycleOutcome {
    let mut r = Report::new(
        "cycles per algorithm (single message)",
        vec![
            col("algorithm", Label),
            col("bytes", Published),
            col("cycles", Measured),
            col("cycles_per_byte", Measured),
            col("throughput_mbps", Measured),
            col("ref_cycles", Published),
            col("ref_cycles_per_byte", Published),
            col("delta_pct", Derived),
            col("cpb_delta_pct", Derived),
            col("verified", Label),
            col("within_tolerance", Label),
        ],
    );
    let mut pass = true;
    for (row, m) in measure_reference_rows(cfg, seed) {
        match m {
            Ok(m) => {
                let c = m.cycles();
                let cpb = c as f64 / row.bytes as f64;
                let delta = relative_delta(c, row.cycles);
                let cpb_delta = (cpb - row.cycles_per_byte) / row.cycles_per_byte;
                let ok = m.verified && delta.abs() <= CYCLE_TOLERANCE && cpb_delta.abs() <= CYCLE_TOLERANCE;
                pass &= ok;
                r.push(vec![
                    Cell::Text(row.algorithm.name().into()),
                    Cell::Int(row.bytes as u64),
                    Cell::Int(c),
                    Cell::Float(cpb, 2),
                    Cell::Float(throughput_mbps(row.bytes, c, cfg.frequency_mhz), 1),
                    Cell::Int(row.cycles),
                    Cell::Float(row.cycles_per_byte, 2),
                    Cell::Float(100.0 * delta, 1),
                    Cell::Float(100.0 * cpb_delta, 1),
                    Cell::Bool(m.verified),
                    Cell::Bool(ok),
                ]);
            }
            Err(e) => {
                pass = false;
                r.notes.push(format!("{}: {e}", row.algorithm));
                let mut cells = vec![Cell::Text(row.algorithm.name().into()), Cell::Int(row.bytes as u64)];
                cells.extend([Cell::Missing, Cell::Missing, Cell::Missing]);
                cells.extend([Cell::Int(row.cycles), Cell::Float(row.cycles_per_byte, 2)]);
                cells.extend([Cell::Missing, Cell::Missing, Cell::Bool(false), Cell::Bool(false)]);
                r.push(cells);
            }
        }
    }
    r.notes.push(format!("tolerance +-{:.0}% on cycles and cycles/byte", 100.0 * CYCLE_TOLERANCE));
    r.notes.push(
        "MD rows hash the longest single-block message (55 or 111 bytes) and report the block size".into(),
    );
    CycleOutcome { report: r, pass }
}

/// `n` units of work and the unit size in bytes: whole blocks for the
/// hashes, instances for AES and Haraka.
fn steady_workload(alg: Algorithm, n: usize, rng: &mut ChaCha20Rng) -> (usize, Workload) {
    if let Some(m) = alg.md_mode() {
        let b = m.block_bytes();
        (b, Workload::long_message(alg, random_bytes(rng, n * b - m.length_field_bytes() - 1)).unwrap())
    } else if let Some(m) = alg.sponge_mode() {
        let b = m.rate_bytes();
        (b, Workload::long_message(alg, random_bytes(rng, n * b - 1)).unwrap())
    } else {
        let (input, unit) = match alg.haraka_mode() {
            Some(h) => (h.input_bytes(), h.input_bytes()),
            None => (32, 16),
        };
        (unit, Workload::many_hash(alg, (0..n).map(|_| random_bytes(rng, input)).collect()).unwrap())
    }
}

/// Incremental cycles per block (MD, Keccak) or per instance (AES, Haraka)
/// between 16- and 32-unit workloads.
pub fn steady_state(alg: Algorithm, cfg: &TimingConfig, seed: u64) -> Result<(usize, f64), ScheduleError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5eed ^ alg.tag() as u64);
    let (unit, small) = steady_workload(alg, 16, &mut rng);
    let (_, large) = steady_workload(alg, 32, &mut rng);
    let a = run_workload(&small, cfg)?.schedule.t_total;
    let b = run_workload(&large, cfg)?.schedule.t_total;
    Ok((unit, (b - a) as f64 / 16.0))
}

pub fn efficiency_report(cfg: &BenchConfig, seed: u64) -> Result<Report, BenchError> {
    if cfg.power_w.is_nan() || cfg.power_w <= 0.0 {
        return Err(BenchError::Power(cfg.power_w));
    }
    let f = cfg.timing.frequency_mhz;
    let (lo, hi) = published::EFFICIENCY_RANGE_MBPS_PER_W;
    let mut r = Report::new(
        "power efficiency (model-derived, not measured power)",
        vec![
            col("algorithm", Label),
            col("bytes", Published),
            col("cycles", Measured),
            col("throughput_mbps", Measured),
            col("power_w", Published),
            col("mbps_per_w", Derived),
            col("published_mbps_per_w", Derived),
            col("in_published_range", Label),
            col("steady_cycles_per_unit", Measured),
            col("steady_mbps", Measured),
            col("steady_mbps_per_w", Derived),
        ],
    );
    let rows = measure_reference_rows(&cfg.timing, seed);
    let steady: Vec<_> = published::ROWS.par_iter().map(|row| steady_state(row.algorithm, &cfg.timing, seed)).collect();
    for ((row, m), st) in rows.into_iter().zip(steady) {
        let m = m.map_err(|e| BenchError::Config { line: 0, msg: e })?;
        let (unit, per_unit) = st?;
        let p = cfg.power_for(row.algorithm);
        let tput = throughput_mbps(row.bytes, m.cycles(), f);
        let eff = tput / p;
        let published_eff = throughput_mbps(row.bytes, row.cycles, published::FREQUENCY_MHZ) / published::SOC_DYNAMIC_POWER_W;
        let steady_tput = unit as f64 * 8.0 * f / per_unit;
        r.push(vec![
            Cell::Text(row.algorithm.name().into()),
            Cell::Int(row.bytes as u64),
            Cell::Int(m.cycles()),
            Cell::Float(tput, 1),
            Cell::Float(p, 3),
            Cell::Float(eff, 2),
            Cell::Float(published_eff, 2),
            Cell::Bool(published::round2(eff) >= lo && published::round2(eff) <= hi),
            Cell::Float(per_unit, 1),
            Cell::Float(steady_tput, 1),
            Cell::Float(steady_tput / p, 2),
        ]);
    }
    r.notes.push(format!(
        "mbps_per_w = single-message throughput at {f} MHz / power; published range {lo}..{hi} Mbps/W"
    ));
    r.notes.push(match cfg.power_basis {
        PowerBasis::Soc => format!("power basis: SoC dynamic power {} W for every algorithm", cfg.power_w),
        PowerBasis::Unit => "power basis: per-engine dynamic power from the utilisation table".into(),
    });
    r.notes.push("published_mbps_per_w = published cycles and sizes at 160 MHz / 3.33 W".into());
    r.notes.push("steady columns: incremental cost per block (hashes) or per instance (AES, Haraka)".into());
    Ok(r)
}

/// Published hardware figures, reported verbatim.
pub fn published_figures_report() -> Report {
    let mut r = Report::new(
        "published figures (not reproduced by simulation)",
        vec![col("item", Label), col("value", Published), col("unit", Label)],
    );
    let mut add = |item: String, value: Cell, unit: &str| r.push(vec![Cell::Text(item), value, Cell::Text(unit.into())]);
    add("FPGA LUTs".into(), Cell::Int(published::LUTS), "LUT");
    add("FPGA FFs".into(), Cell::Int(published::FFS), "FF");
    add("FPGA BRAMs".into(), Cell::Int(published::BRAMS), "BRAM");
    add("SoC total power".into(), Cell::Float(published::SOC_TOTAL_POWER_W, 2), "W");
    add("SoC dynamic power".into(), Cell::Float(published::SOC_DYNAMIC_POWER_W, 2), "W");
    add("SoC static power".into(), Cell::Float(published::SOC_STATIC_POWER_W, 2), "W");
    add("co-processor dynamic power".into(), Cell::Float(published::CORE_DYNAMIC_POWER_W, 3), "W");
    for k in EngineKind::ALL {
        let (lut, ff, w) = published::unit_figures(k);
        add(format!("{} unit LUTs", k.name()), Cell::Int(lut), "LUT");
        add(format!("{} unit FFs", k.name()), Cell::Int(ff), "FF");
        add(format!("{} unit power", k.name()), Cell::Float(w, 3), "W");
    }
    add("efficiency range low".into(), Cell::Float(published::EFFICIENCY_RANGE_MBPS_PER_W.0, 2), "Mbps/W");
    add("efficiency range high".into(), Cell::Float(published::EFFICIENCY_RANGE_MBPS_PER_W.1, 2), "Mbps/W");
    for (cpu, v) in published::CPU_SHA512_MBPS_PER_W {
        add(format!("{cpu} SHA-512 efficiency"), Cell::Float(v, 2), "Mbps/W");
    }
    r
}

pub fn speedup_report(cfg: &TimingConfig, seed: u64) -> Report {
    let mut r = Report::new(
        "speedup over the published baseline core",
        vec![
            col("algorithm", Label),
            col("ref_cycles", Published),
            col("published_speedup", Published),
            col("baseline_cycles", Derived),
            col("cycles", Measured),
            col("speedup", Derived),
        ],
    );
    for (row, m) in measure_reference_rows(cfg, seed) {
        let measured = m.as_ref().map(|m| m.cycles()).ok();
        let (factor, baseline, speedup) = match (row.speedup, measured) {
            (Some(s), Some(c)) => {
                let base = row.cycles * s as u64;
                (Cell::Int(s as u64), Cell::Int(base), Cell::Float(base as f64 / c as f64, 1))
            }
            (Some(s), None) => (Cell::Int(s as u64), Cell::Int(row.cycles * s as u64), Cell::Missing),
            (None, _) => (Cell::Missing, Cell::Missing, Cell::Missing),
        };
        if row.speedup.is_none() {
            r.notes.push(format!("{}: no published speedup; row unavailable", row.algorithm));
        }
        r.push(vec![
            Cell::Text(row.algorithm.name().into()),
            Cell::Int(row.cycles),
            factor,
            baseline,
            measured.map_or(Cell::Missing, Cell::Int),
            speedup,
        ]);
    }
    r.notes.push("baseline_cycles = ref_cycles x published_speedup; no baseline core is simulated".into());
    r.notes.push("SHAKE-128 and SHAKE-256 share one published factor (220x)".into());
    r
}

/// Per-cycle traces of the single-message workloads, one section per
/// algorithm in table order.
pub fn reference_traces(cfg: &TimingConfig, seed: u64) -> String {
    let mut out = String::new();
    for (row, m) in measure_reference_rows(cfg, seed) {
        out.push_str(&format!("## {}\n", row.algorithm));
        match m {
            Ok(m) => out.push_str(&m.run.trace.to_text()),
            Err(e) => out.push_str(&format!("# error: {e}\n")),
        }
    }
    out
}

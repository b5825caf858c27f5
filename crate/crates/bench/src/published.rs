//! Published reference figures used for comparison. Nothing here is
//! simulated; every value is reported with the `paper-constant` label.

use rvcrypt_core::primitives::Algorithm;
use rvcrypt_core::units::EngineKind;

/// One row of the published cycle table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedRow {
    pub algorithm: Algorithm,
    pub cycles: u64,
    /// Input size implied by `cycles / cycles_per_byte`.
    pub bytes: usize,
    /// The table's cycles/byte column, as printed (two decimals).
    pub cycles_per_byte: f64,
    /// Speedup over the baseline RISC-V core, where published.
    pub speedup: Option<u32>,
}

const fn row(algorithm: Algorithm, cycles: u64, bytes: usize, cycles_per_byte: f64, speedup: Option<u32>) -> PublishedRow {
    PublishedRow { algorithm, cycles, bytes, cycles_per_byte, speedup }
}

/// Rows in the table's order.
pub const ROWS: [PublishedRow; 9] = [
    row(Algorithm::Sha256, 146, 64, 2.28, Some(660)),
    row(Algorithm::Sha512, 263, 128, 2.05, Some(604)),
    row(Algorithm::Sm3, 144, 64, 2.25, Some(789)),
    row(Algorithm::Shake128, 265, 100, 2.65, Some(220)),
    row(Algorithm::Shake256, 261, 100, 2.61, Some(220)),
    row(Algorithm::Sha3_256, 261, 64, 4.08, None),
    row(Algorithm::Aes128, 98, 16, 6.13, Some(965)),
    row(Algorithm::Haraka256, 110, 32, 3.44, Some(1061)),
    row(Algorithm::Haraka512, 205, 64, 3.20, Some(780)),
];

pub const FREQUENCY_MHZ: f64 = 160.0;
/// SoC dynamic power; the published Mbps/W figures divide throughput by it.
pub const SOC_DYNAMIC_POWER_W: f64 = 3.33;
pub const SOC_STATIC_POWER_W: f64 = 0.7;
pub const SOC_TOTAL_POWER_W: f64 = 4.03;
/// Dynamic power of the co-processor alone.
pub const CORE_DYNAMIC_POWER_W: f64 = 0.851;
pub const EFFICIENCY_RANGE_MBPS_PER_W: (f64, f64) = (62.76, 187.08);
pub const LUTS: u64 = 34_704;
pub const FFS: u64 = 37_329;
pub const BRAMS: u64 = 22;

/// Per-engine power and resources: (LUT, FF, W).
pub fn unit_figures(kind: EngineKind) -> (u64, u64, f64) {
    match kind {
        EngineKind::Md => (3_666, 2_096, 0.127),
        EngineKind::Keccak => (5_329, 3_724, 0.200),
        EngineKind::AesHaraka => (11_308, 10_895, 0.491),
    }
}

/// Published SHA-512 efficiencies of the comparison CPUs, Mbps/W.
pub const CPU_SHA512_MBPS_PER_W: [(&str, f64); 3] =
    [("Intel i9-10940X", 15.89), ("Intel i7-12700H", 19.74), ("ARM Cortex-A53", 59.24)];

pub fn row_for(alg: Algorithm) -> &'static PublishedRow {
    ROWS.iter().find(|r| r.algorithm == alg).expect("every algorithm has a row")
}

/// Round half away from zero to two decimals, as the table does.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Every row's `cycles / bytes` reproduces its printed cycles/byte.
pub fn consistency_errors() -> Vec<String> {
    ROWS.iter()
        .filter(|r| (round2(r.cycles as f64 / r.bytes as f64) - r.cycles_per_byte).abs() > 1e-9)
        .map(|r| format!("{}: {} / {} != {}", r.algorithm, r.cycles, r.bytes, r.cycles_per_byte))
        .collect()
}

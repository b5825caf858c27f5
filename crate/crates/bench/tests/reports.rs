use rvcrypt_bench::published::{self, ROWS};
use rvcrypt_bench::report::{col, Cell, Format, Provenance, Report};
use rvcrypt_bench::suite::{self, BenchConfig, BenchError, PowerBasis};
use rvcrypt_core::config::TimingConfig;
use rvcrypt_core::primitives::Algorithm;
use rvcrypt_core::scheduler::{run_workload, Workload};

const SEED: u64 = 7;

fn float(c: &Cell) -> f64 {
    match c {
        Cell::Float(v, _) => *v,
        Cell::Int(v) => *v as f64,
        other => panic!("not numeric: {other:?}"),
    }
}

fn row_of(r: &Report, alg: Algorithm) -> usize {
    r.rows.iter().position(|row| row[0] == Cell::Text(alg.name().into())).unwrap()
}

#[test]
fn published_table_is_self_consistent() {
    assert!(published::consistency_errors().is_empty(), "{:?}", published::consistency_errors());
    let aes = published::row_for(Algorithm::Aes128);
    assert_eq!((aes.cycles, aes.bytes), (98, 16));
    assert_eq!(published::round2(98.0 / 16.0), 6.13);
}

#[test]
fn cycle_report_identities() {
    let cfg = BenchConfig::calibrated().timing;
    let out = suite::cycle_report(&cfg, SEED);
    assert!(out.pass, "{}", out.report.render(Format::Table));
    for (i, row) in ROWS.iter().enumerate() {
        let cycles = float(out.report.cell(i, "cycles"));
        let cpb = float(out.report.cell(i, "cycles_per_byte"));
        assert!((cpb - cycles / row.bytes as f64).abs() < 0.005 + 1e-9);
        let tput = float(out.report.cell(i, "throughput_mbps"));
        assert!((tput - row.bytes as f64 * 8.0 * 160.0 / cycles).abs() < 0.05 + 1e-9);
        assert_eq!(out.report.cell(i, "verified"), &Cell::Bool(true));
    }
}

#[test]
fn sha256_row_reports_reference() {
    let out = suite::cycle_report(&BenchConfig::calibrated().timing, SEED);
    let i = row_of(&out.report, Algorithm::Sha256);
    assert_eq!(out.report.cell(i, "ref_cycles"), &Cell::Int(146));
    let aes = row_of(&out.report, Algorithm::Aes128);
    assert_eq!(out.report.cell(aes, "ref_cycles"), &Cell::Int(98));
    assert_eq!(float(out.report.cell(aes, "ref_cycles_per_byte")), 6.13);
}

#[test]
fn second_sha512_block_costs_less_than_the_first() {
    let cfg = BenchConfig::calibrated().timing;
    let one = run_workload(&Workload::long_message(Algorithm::Sha512, vec![1; 111]).unwrap(), &cfg).unwrap();
    let two = run_workload(&Workload::long_message(Algorithm::Sha512, vec![1; 239]).unwrap(), &cfg).unwrap();
    assert!(two.schedule.t_total < 2 * one.schedule.t_total);
}

#[test]
fn halving_power_doubles_efficiency() {
    let base = BenchConfig::calibrated();
    let mut half = base.clone();
    half.apply_text(&format!("power.soc_w = {}", base.power_w / 2.0)).unwrap();
    let a = suite::efficiency_report(&base, SEED).unwrap();
    let b = suite::efficiency_report(&half, SEED).unwrap();
    for i in 0..ROWS.len() {
        let (x, y) = (float(a.cell(i, "mbps_per_w")), float(b.cell(i, "mbps_per_w")));
        assert!((y - 2.0 * x).abs() <= 0.011, "{x} {y}");
    }
}

#[test]
fn sha512_is_most_efficient_hash() {
    let r = suite::efficiency_report(&BenchConfig::calibrated(), SEED).unwrap();
    let sha512 = float(r.cell(row_of(&r, Algorithm::Sha512), "mbps_per_w"));
    for alg in Algorithm::ALL.into_iter().filter(|a| a.is_hash() && *a != Algorithm::Sha512) {
        assert!(sha512 > float(r.cell(row_of(&r, alg), "mbps_per_w")), "{alg}");
    }
}

#[test]
fn published_efficiency_figures_reproduce_from_table() {
    let r = suite::efficiency_report(&BenchConfig::calibrated(), SEED).unwrap();
    let at = |alg| published::round2(float(r.cell(row_of(&r, alg), "published_mbps_per_w")));
    assert_eq!(at(Algorithm::Aes128), 62.76);
    assert_eq!(at(Algorithm::Sha512), 187.08);
    assert_eq!(at(Algorithm::Shake128), 145.05);
    assert_eq!(at(Algorithm::Shake256), 147.27);
}

#[test]
fn power_errors() {
    let mut c = BenchConfig::default();
    assert!(matches!(c.apply_text("power.soc_w = 0"), Err(BenchError::Power(_))));
    assert!(matches!(c.apply_text("power.soc_w = -1.5"), Err(BenchError::Power(_))));
    assert!(matches!(c.apply_text("\npower.soc_w = abc"), Err(BenchError::Config { line: 2, .. })));
    assert!(matches!(c.apply_text("power.basis = grid"), Err(BenchError::Config { line: 1, .. })));
    c.power_w = 0.0;
    assert!(matches!(suite::efficiency_report(&c, SEED), Err(BenchError::Power(_))));
}

#[test]
fn unit_power_basis() {
    let mut c = BenchConfig::calibrated();
    c.apply_text("power.basis = unit").unwrap();
    assert_eq!(c.power_basis, PowerBasis::Unit);
    assert_eq!(c.power_for(Algorithm::Sha256), 0.127);
    assert_eq!(c.power_for(Algorithm::Shake128), 0.200);
    assert_eq!(c.power_for(Algorithm::Haraka512), 0.491);
}

#[test]
fn timing_keys_pass_through() {
    let mut c = BenchConfig::default();
    c.apply_text("md.fill = 9\npower.soc_w = 2").unwrap();
    assert_eq!(c.power_w, 2.0);
    assert_ne!(c.timing, TimingConfig::default());
    assert!(c.apply_text("md.bogus = 1").is_err());
}

#[test]
fn speedup_rows() {
    let r = suite::speedup_report(&BenchConfig::calibrated().timing, SEED);
    let h = row_of(&r, Algorithm::Haraka256);
    assert_eq!(r.cell(h, "baseline_cycles"), &Cell::Int(110 * 1061));
    let s = row_of(&r, Algorithm::Sha256);
    let measured = float(r.cell(s, "cycles"));
    assert!((float(r.cell(s, "speedup")) - 660.0 * 146.0 / measured).abs() < 0.05 + 1e-9);
    let sha3 = row_of(&r, Algorithm::Sha3_256);
    assert_eq!(r.cell(sha3, "speedup"), &Cell::Missing);
    assert!(r.notes.iter().any(|n| n.contains("SHA3-256")));
}

#[test]
fn render_formats() {
    let mut r = Report::new("t", vec![col("name", Provenance::Label), col("v", Provenance::Published)]);
    r.push(vec![Cell::Text("a,b".into()), Cell::Float(1.5, 2)]);
    r.push(vec![Cell::Text("c".into()), Cell::Missing]);
    r.notes.push("n".into());
    let table = r.render(Format::Table);
    assert!(table.contains("[paper-constant] v"));
    let csv = r.render(Format::Csv);
    assert!(csv.contains("\"a,b\",1.50"));
    let lines: Vec<serde_json::Value> =
        r.render(Format::JsonLines).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["provenance"]["v"], "paper-constant");
    assert_eq!(lines[2]["v"], serde_json::Value::Null);
    assert!("xml".parse::<Format>().is_err());
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn rvcrypt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rvcrypt")).args(args).output().unwrap()
}

fn scratch(name: &str, contents: &[u8]) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rvcrypt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn vectors_pass_and_corruption_fails() {
    let o = rvcrypt(&["vectors"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let bad = scratch("bad.txt", b"sm3\t616263\t00\n");
    let o = rvcrypt(&["vectors", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("bad.txt:1:"));
}

#[test]
fn cycles_is_deterministic_and_passes() {
    let a = rvcrypt(&["--seed", "3", "--format", "csv", "cycles"]);
    let b = rvcrypt(&["--seed", "3", "--format", "csv", "cycles"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# [measured-in-simulation]"));
}

#[test]
fn bad_power_config_is_an_error() {
    let cfg = scratch("p.cfg", b"power.soc_w = -2\n");
    let o = rvcrypt(&["--config", cfg.to_str().unwrap(), "efficiency"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn asm_then_run_with_trace() {
    let src = scratch("p.s", b"addi x1, x0, 7\nadd x2, x1, x1\nhalt\n");
    let bin = src.with_extension("crv");
    assert!(rvcrypt(&["asm", src.to_str().unwrap(), "-o", bin.to_str().unwrap()]).status.success());
    let trace = src.with_extension("trace");
    let o = rvcrypt(&["--trace", trace.to_str().unwrap(), "run", bin.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cycles 7\n"));
    assert!(stdout(&o).contains("x2 0xe\n"));
    assert_eq!(std::fs::read_to_string(&trace).unwrap().lines().count(), 8);
    let o = rvcrypt(&["asm", "--disassemble", bin.to_str().unwrap()]);
    assert!(stdout(&o).contains("add x2, x1, x1"));
}

#[test]
fn run_workload_file() {
    let w = scratch("w.cfg", b"algorithm = sha3-256\nshape = many\ninstances = 5\nbytes = 40\nseed = 2\n");
    let o = rvcrypt(&["run", "--workload", w.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.matches("output[").count(), 5);
    assert!(out.contains("verified true"));
}

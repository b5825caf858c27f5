use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rvcrypt_bench::report::Format;
use rvcrypt_bench::suite::{self, BenchConfig};
use rvcrypt_bench::vectors;
use rvcrypt_core::cpu;
use rvcrypt_core::isa::{self, Program};
use rvcrypt_core::primitives::Algorithm;
use rvcrypt_core::scheduler::{self, WorkloadSpec, RUN_CYCLE_LIMIT};

#[derive(Parser)]
#[command(name = "rvcrypt", about = "Crypto co-processor simulator: validation, cycle and efficiency reports")]
struct Cli {
    /// `key = value` overrides for the timing model and power settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for random workloads.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// table, csv or json-lines.
    #[arg(long, global = true, default_value = "table")]
    format: Format,
    /// Write per-cycle traces to this file.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Start from the default timing model instead of the bundled calibration.
    #[arg(long, global = true)]
    no_calibration: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check vector files (bundled ones when none given) through the stack and the reference.
    Vectors {
        files: Vec<PathBuf>,
        /// Also run N random inputs per algorithm.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Single-message cycle table against the published figures.
    Cycles,
    /// Throughput per watt, plus the published hardware figures.
    Efficiency,
    /// Speedup over the published baseline cycle counts.
    Speedup,
    /// Run a program (CRV1 binary or assembly) or, with --workload, a workload description.
    Run {
        program: PathBuf,
        #[arg(long)]
        workload: bool,
    },
    /// Assemble a source file, or disassemble a binary.
    Asm {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        disassemble: bool,
    },
}

fn load_config(cli: &Cli) -> Result<BenchConfig> {
    let mut cfg = if cli.no_calibration { BenchConfig::default() } else { BenchConfig::calibrated() };
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_text(&text).with_context(|| path.display().to_string())?;
    }
    Ok(cfg)
}

fn write_trace(cli: &Cli, text: impl FnOnce() -> String) -> Result<()> {
    if let Some(path) = &cli.trace {
        fs::write(path, text()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn load_program(path: &Path) -> Result<Program> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if bytes.starts_with(b"CRV1") {
        return Program::from_binary(&bytes).with_context(|| path.display().to_string());
    }
    let text = String::from_utf8(bytes).with_context(|| format!("{} is neither CRV1 nor text", path.display()))?;
    isa::assemble(&text).with_context(|| path.display().to_string())
}

fn cmd_vectors(cli: &Cli, cfg: &BenchConfig, files: &[PathBuf], random: usize) -> Result<bool> {
    let mut all = Vec::new();
    if files.is_empty() {
        for (name, text) in vectors::BUNDLED {
            all.extend(vectors::parse(name, text)?);
        }
    } else {
        for f in files {
            let text = fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            all.extend(vectors::parse(&f.display().to_string(), &text)?);
        }
    }
    let summary = vectors::check_all(&all, &cfg.timing);
    println!("vectors: {} passed, {} failed", summary.passed, summary.failures.len());
    for f in &summary.failures {
        println!("FAIL {f}");
    }
    let mut ok = summary.failures.is_empty();
    if random > 0 {
        for alg in Algorithm::ALL {
            let d = vectors::random_differential(alg, random, cli.seed, &cfg.timing);
            println!("random {alg}: {} cases, {} mismatches", d.cases, d.failures.len());
            for f in d.failures.iter().take(10) {
                println!("FAIL {f}");
            }
            ok &= d.failures.is_empty();
        }
    }
    Ok(ok)
}

fn cmd_run(cli: &Cli, cfg: &BenchConfig, path: &Path, workload: bool) -> Result<bool> {
    if workload {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let spec = WorkloadSpec::parse(&text, &cfg.timing)?;
        let w = spec.build()?;
        let run = scheduler::run_workload(&w, &spec.timing)?;
        let verified = w.expected_outputs()? == run.outputs;
        write_trace(cli, || run.trace.to_text())?;
        println!("algorithm {}", w.algorithm);
        println!("shape {}", w.shape.name());
        print!("{}", run.schedule.to_text());
        print!("{}", run.summary.to_text());
        for (i, o) in run.outputs.iter().enumerate() {
            println!("output[{i}] {}", hex::encode(o));
        }
        println!("verified {verified}");
        return Ok(verified);
    }
    let program = load_program(path)?;
    match cpu::run(&program, &cfg.timing, RUN_CYCLE_LIMIT) {
        Ok(out) => {
            write_trace(cli, || out.trace.to_text())?;
            print!("{}", out.trace.summary().to_text());
            for (i, r) in out.state.regs().iter().enumerate().filter(|(_, &r)| r != 0) {
                println!("x{i} {r:#x}");
            }
            Ok(true)
        }
        Err(e) => {
            write_trace(cli, || e.trace.to_text())?;
            bail!("{}: {}", path.display(), e.error)
        }
    }
}

fn cmd_asm(file: &Path, output: Option<&Path>, disassemble: bool) -> Result<bool> {
    let program = load_program(file)?;
    if disassemble {
        let text = isa::disassemble(&program);
        match output {
            Some(o) => fs::write(o, text).with_context(|| format!("writing {}", o.display()))?,
            None => print!("{text}"),
        }
    } else {
        let bin = program.to_binary()?;
        let out = output.map(Path::to_path_buf).unwrap_or_else(|| file.with_extension("crv"));
        fs::write(&out, bin).with_context(|| format!("writing {}", out.display()))?;
        println!("{} instructions -> {}", program.len(), out.display());
    }
    Ok(true)
}

fn execute(cli: &Cli) -> Result<bool> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Vectors { files, random } => cmd_vectors(cli, &cfg, files, *random),
        Command::Cycles => {
            let outcome = suite::cycle_report(&cfg.timing, cli.seed);
            write_trace(cli, || suite::reference_traces(&cfg.timing, cli.seed))?;
            print!("{}", outcome.report.render(cli.format));
            Ok(outcome.pass)
        }
        Command::Efficiency => {
            let r = suite::efficiency_report(&cfg, cli.seed)?;
            write_trace(cli, || suite::reference_traces(&cfg.timing, cli.seed))?;
            print!("{}", r.render(cli.format));
            print!("{}", suite::published_figures_report().render(cli.format));
            Ok(true)
        }
        Command::Speedup => {
            write_trace(cli, || suite::reference_traces(&cfg.timing, cli.seed))?;
            print!("{}", suite::speedup_report(&cfg.timing, cli.seed).render(cli.format));
            Ok(true)
        }
        Command::Run { program, workload } => cmd_run(cli, &cfg, program, *workload),
        Command::Asm { file, output, disassemble } => cmd_asm(file, output.as_deref(), *disassemble),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

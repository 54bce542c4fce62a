use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use raspvisor::fixtures::BUSY_BEAVERS;
use raspvisor::hypervisor::{run_batch, throughput_bench, BatchConfig, BatchResult, VmStatus};
use raspvisor::lang::{parse_source, pretty_print, pretty_print_indented, Function};
use raspvisor::lower::{disassemble, lower, LayoutInfo};
use raspvisor::sampler::Sampler;
use raspvisor::verify;
use raspvisor::vm::{
    fetch, init_config, run_to_fixpoint, step_branchless, step_reference, Config, MachineParams, Program, ProgramJson,
};
use raspvisor::workload::{sampled_workload, Inputs};
use raspvisor::Word;

use crate::args::{parse_list, BatchArgs, InputMode};
use crate::manifest::{emit, Manifest};

/// Runs `$f::<W>(...)` with the narrowest storage type that holds the word width.
macro_rules! by_width {
    ($p:expr, $f:ident($($arg:expr),*)) => {
        if $p.w <= 32 {
            $f::<u32>($($arg),*)
        } else {
            $f::<u64>($($arg),*)
        }
    };
}

fn read_source(path: &Path) -> Result<Function> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_source(&text).with_context(|| format!("in {}", path.display()))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn compile(p: &MachineParams, source: &Path, out: Option<&Path>) -> Result<()> {
    let f = read_source(source)?;
    by_width!(p, compile_as(p, &f, out))
}

fn compile_as<W: Word>(p: &MachineParams, f: &Function, out: Option<&Path>) -> Result<()> {
    let (prog, layout) = lower::<W>(f, p)?;
    let asm = disassemble(&prog, Some(&layout));
    let Some(prefix) = out else {
        print!("{asm}");
        return Ok(());
    };
    let json = serde_json::to_string_pretty(&prog.to_json(p.w))?;
    emit(Some(&with_suffix(prefix, ".json")), &(json + "\n"))?;
    std::fs::write(with_suffix(prefix, ".bin"), prog.to_bytes(p.w))?;
    let layout_json = serde_json::to_string_pretty(&layout)?;
    emit(Some(&with_suffix(prefix, ".layout.json")), &(layout_json + "\n"))?;
    emit(Some(&with_suffix(prefix, ".asm")), &asm)?;
    println!("m={} words={} extent={}", layout.m, prog.words.len(), layout.extent());
    Ok(())
}

/// The source and layout behind a program compiled on the fly.
type Compiled = Option<(Function, LayoutInfo)>;

fn load_program<W: Word>(p: &MachineParams, path: &Path) -> Result<(Program<W>, Compiled)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "bin") {
        return Ok((Program::from_bytes(&bytes, p.w)?, None));
    }
    if let Ok(json) = serde_json::from_slice::<ProgramJson>(&bytes) {
        ensure!(json.w == p.w, "program was built for w={}, machine has w={}", json.w, p.w);
        return Ok((Program::from_json(&json)?, None));
    }
    let f = read_source(path)?;
    let (prog, layout) = lower(&f, p)?;
    Ok((prog, Some((f, layout))))
}

fn parse_words(input: &str, w: u32) -> Result<Vec<u64>> {
    let limit = raspvisor::word::low_mask(w);
    input
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let v: u64 = s.parse().with_context(|| format!("bad input word {s:?}"))?;
            ensure!(v <= limit, "input word {v} does not fit {w} bits");
            Ok(v)
        })
        .collect()
}

pub fn run(p: &MachineParams, program: &Path, input: &str, tau_max: u64, trace: bool) -> Result<()> {
    by_width!(p, run_as(p, program, input, tau_max, trace))
}

fn run_as<W: Word>(p: &MachineParams, program: &Path, input: &str, tau_max: u64, trace: bool) -> Result<()> {
    let (prog, source) = load_program::<W>(p, program)?;
    let x: Vec<W> = parse_words(input, p.w)?.into_iter().map(W::truncate).collect();
    if let Some((f, _)) = &source {
        ensure!(
            x.len() <= f.inputs as usize,
            "{} input words given, program declares {}",
            x.len(),
            f.inputs
        );
    }
    let c0 = init_config(&prog, &x, p)?;
    let outcome = if trace {
        traced_run(c0, tau_max, p)
    } else {
        run_to_fixpoint(c0, tau_max, p)
    };
    match outcome.tau_h {
        Some(t) => println!("tau_h={t}"),
        None => println!("no fixed point within {tau_max} steps"),
    }
    let words: Vec<String> = outcome.last.outputs().iter().map(|v| v.to_string()).collect();
    println!("outputs: {}", words.join(","));
    Ok(())
}

fn traced_run<W: Word>(c0: Config<W>, tau_max: u64, p: &MachineParams) -> raspvisor::vm::RunOutcome<W> {
    let mut c = c0;
    println!("step,i,a,op,operand,cursor,count");
    for tau in 0..=tau_max {
        let (o, j) = fetch(&c, p);
        println!("{tau},{},{},{o},{j},{},{}", c.i, c.a, c.input[0], c.output[0]);
        let next = step_branchless(&c, p);
        if next.fixed_point {
            return raspvisor::vm::RunOutcome { last: c, tau_h: Some(tau) };
        }
        if tau == tau_max {
            break;
        }
        c = next.next;
    }
    raspvisor::vm::RunOutcome { last: c, tau_h: None }
}

pub fn sample(length: usize, count: u64, seed: u64, json: bool, out: Option<&Path>) -> Result<()> {
    let sampler = Sampler::new(length)?;
    let mut text = String::new();
    for index in 0..count {
        let f = sampler.sample(seed, index);
        let line = if json { serde_json::to_string(&f)? } else { pretty_print(&f) };
        text.push_str(&line);
        text.push('\n');
    }
    emit(out, &text)
}

fn batch_config(batch: &BatchArgs, default_tau: u64) -> BatchConfig {
    BatchConfig::new(batch.tau_max.unwrap_or(default_tau), batch.epoch, batch.workers)
}

/// Outcome of `halting`, returned for tests.
#[derive(Clone, Debug, PartialEq)]
pub struct HaltingReport {
    pub run: u64,
    pub halted: u64,
    pub head: u64,
    pub tail: u64,
    pub nonhalt: u64,
    pub aborted: u64,
    pub histogram_csv: String,
}

impl HaltingReport {
    pub fn probability(&self) -> f64 {
        self.halted as f64 / self.run.max(1) as f64
    }
}

#[allow(clippy::too_many_arguments)]
pub fn halting(
    p: &MachineParams,
    length: usize,
    count: u64,
    seed: u64,
    inputs: InputMode,
    batch: &BatchArgs,
    out: Option<&Path>,
    results: Option<&Path>,
) -> Result<HaltingReport> {
    let report = by_width!(p, halting_as(p, length, count, seed, inputs, batch, results))?;
    emit(out, &report.histogram_csv)?;
    let summary = format!(
        "halted {} of {} (estimate {:.6})\n  tau_h < 100: {}\n  100 <= tau_h < tau_max: {}\n  no fixed point: {}\naborted: {}\n",
        report.halted,
        report.run,
        report.probability(),
        report.head,
        report.tail,
        report.nonhalt,
        report.aborted
    );
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(report)
}

fn halting_as<W: Word>(
    p: &MachineParams,
    length: usize,
    count: u64,
    seed: u64,
    inputs: InputMode,
    batch: &BatchArgs,
    results: Option<&Path>,
) -> Result<HaltingReport> {
    let sampler = Sampler::new(length)?;
    let bc = batch_config(batch, 10_000);
    let work = sampled_workload::<W>(&sampler, 0, count, seed, inputs.into(), p)?;
    for a in &work.aborted {
        eprintln!("aborted vm {}: {}", a.index, a.reason);
    }
    let r = run_batch(work.configs, p, &bc)?;
    let manifest = Manifest {
        length,
        d: count,
        tau_max: bc.tau_max,
        seed,
        workers: bc.resolved_workers(),
        epoch: bc.epoch,
        inputs: Some(inputs),
        ..Manifest::new("halting", *p)
    };
    if let Some(path) = results {
        emit(Some(path), &manifest.csv(&results_csv(&work.indices, &r)))?;
    }
    let h = &r.histogram;
    Ok(HaltingReport {
        run: h.total(),
        halted: h.halted(),
        head: h.head(),
        tail: h.tail,
        nonhalt: h.nonhalt,
        aborted: work.aborted.len() as u64,
        histogram_csv: manifest.csv(&h.csv_rows()),
    })
}

fn results_csv<W: Word>(indices: &[u64], r: &BatchResult<W>) -> String {
    let mut out = String::from("vm_index,status,tau_h,steps_taken,outputs\n");
    for (index, slot) in indices.iter().zip(&r.slots) {
        let tau = slot.tau_h.map(|t| t.to_string()).unwrap_or_default();
        let words: Vec<String> = slot.config.outputs().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            out,
            "{index},{},{tau},{},{}",
            slot.status.name(),
            slot.steps_taken,
            words.join(";")
        );
    }
    out
}

/// One entry of a busy-beaver report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beaver {
    pub tau_h: u64,
    pub index: u64,
    pub source: Function,
}

#[allow(clippy::too_many_arguments)]
pub fn bb_search(
    p: &MachineParams,
    length: usize,
    count: u64,
    time_budget: Option<f64>,
    top: usize,
    seed: u64,
    batch: &BatchArgs,
    fixtures: bool,
    out: Option<&Path>,
) -> Result<Vec<Beaver>> {
    let bc = batch_config(batch, 100_000);
    if fixtures {
        for (name, src, listed) in BUSY_BEAVERS {
            let f = parse_source(src)?;
            let tau = by_width!(p, zero_input_tau(p, &f, bc.tau_max))?;
            match tau {
                Some(t) => println!("{name}: tau_h={t} (listed {listed})"),
                None => println!("{name}: no fixed point within {} steps (listed {listed})", bc.tau_max),
            }
        }
    }
    let (best, searched) = by_width!(p, search_as(p, length, count, time_budget, top, seed, &bc))?;
    println!("searched {searched} programs of length {length}");
    for (rank, b) in best.iter().enumerate() {
        println!("#{} tau_h={} vm_index={}", rank + 1, b.tau_h, b.index);
        for line in pretty_print_indented(&b.source).lines() {
            println!("    {line}");
        }
    }
    if let Some(path) = out {
        let manifest = Manifest {
            length,
            d: searched,
            tau_max: bc.tau_max,
            seed,
            workers: bc.resolved_workers(),
            epoch: bc.epoch,
            ..Manifest::new("bb-search", *p)
        };
        let mut body = String::from("rank,tau_h,vm_index,source\n");
        for (rank, b) in best.iter().enumerate() {
            let _ = writeln!(body, "{},{},{},\"{}\"", rank + 1, b.tau_h, b.index, pretty_print(&b.source));
        }
        emit(Some(path), &manifest.csv(&body))?;
    }
    Ok(best)
}

fn zero_input_tau<W: Word>(p: &MachineParams, f: &Function, tau_max: u64) -> Result<Option<u64>> {
    let (prog, _) = lower::<W>(f, p)?;
    Ok(run_to_fixpoint(init_config(&prog, &[], p)?, tau_max, p).tau_h)
}

const SEARCH_CHUNK: u64 = 4096;

fn search_as<W: Word>(
    p: &MachineParams,
    length: usize,
    count: u64,
    time_budget: Option<f64>,
    top: usize,
    seed: u64,
    bc: &BatchConfig,
) -> Result<(Vec<Beaver>, u64)> {
    let sampler = Sampler::new(length)?;
    let deadline = time_budget.map(|s| Instant::now() + Duration::from_secs_f64(s));
    let mut best: Vec<Beaver> = Vec::new();
    let mut first = 0;
    while first < count {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let n = SEARCH_CHUNK.min(count - first);
        let work = sampled_workload::<W>(&sampler, first, n, seed, Inputs::Zero, p)?;
        let r = run_batch(work.configs, p, bc)?;
        for ((slot, &index), f) in r.slots.iter().zip(&work.indices).zip(work.programs) {
            if let (VmStatus::Halted, Some(tau_h)) = (slot.status, slot.tau_h) {
                best.push(Beaver { tau_h, index, source: f });
            }
        }
        best.sort_by(|a, b| b.tau_h.cmp(&a.tau_h).then(a.index.cmp(&b.index)));
        best.truncate(top);
        first += n;
    }
    Ok((best, first))
}

#[allow(clippy::too_many_arguments)]
pub fn bench(
    p: &MachineParams,
    length: usize,
    counts: &str,
    workers: &str,
    tau_max: u64,
    epoch: u64,
    seed: u64,
    out: Option<&Path>,
) -> Result<String> {
    let counts = parse_list(counts).map_err(anyhow::Error::msg)?;
    let mut workers: Vec<usize> = parse_list(workers).map_err(anyhow::Error::msg)?.into_iter().map(|w| w as usize).collect();
    ensure!(!counts.is_empty() && !workers.is_empty(), "empty grid");
    if !workers.contains(&1) {
        workers.insert(0, 1);
    }
    let body = by_width!(p, bench_as(p, length, &counts, &workers, tau_max, epoch, seed))?;
    let manifest = Manifest {
        length,
        d: counts.iter().copied().max().unwrap_or(0),
        tau_max,
        seed,
        workers: BatchConfig::new(0, 1, 0).resolved_workers(),
        epoch,
        ..Manifest::new("bench", *p)
    };
    let csv = manifest.csv(&body);
    emit(out, &csv)?;
    Ok(csv)
}

fn bench_as<W: Word>(
    p: &MachineParams,
    length: usize,
    counts: &[u64],
    workers: &[usize],
    tau_max: u64,
    epoch: u64,
    seed: u64,
) -> Result<String> {
    let sampler = Sampler::new(length)?;
    let mut body = String::from("d,workers,wall_s,halted,speedup\n");
    for &d in counts {
        let work = sampled_workload::<W>(&sampler, 0, d, seed, Inputs::Random, p)?;
        let rows = throughput_bench(&work.configs, p, tau_max, epoch, workers)?;
        let serial = rows.iter().find(|r| r.workers == 1).map(|r| r.wall_time.as_secs_f64());
        for row in rows {
            let wall = row.wall_time.as_secs_f64();
            let speedup = serial.map_or(f64::NAN, |s| s / wall.max(1e-9));
            let _ = writeln!(body, "{d},{},{wall:.6},{},{speedup:.3}", row.workers, row.halted);
        }
    }
    Ok(body)
}

pub fn selftest(p: &MachineParams, seed: u64) -> Result<()> {
    let mut failed = Vec::new();
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{name}: {} ({detail})", if ok { "ok" } else { "FAILED" });
        if !ok {
            failed.push(name.to_owned());
        }
    };

    for w in [8, 16, 32] {
        let q = MachineParams { w, ..*p };
        let r = if w <= 16 {
            verify::check_step_equivalence::<u16>(50_000, &q, seed, step_reference, step_branchless)
        } else {
            verify::check_step_equivalence::<u32>(50_000, &q, seed, step_reference, step_branchless)
        };
        check(
            &format!("step equivalence w={w}"),
            r.passed(),
            format!("{} cases, {} mismatches", r.cases, r.mismatches),
        );
    }

    let r = by_width!(p, compiler_check(p, seed))?;
    check(
        "compiler vs evaluator",
        r.passed(),
        format!("{} compared, {} mismatches, {} compile errors", r.compared, r.mismatches, r.compile_errors),
    );

    let mut counted = 0;
    let mut ok = true;
    for len in verify::enumerable_lengths(100_000) {
        let c = verify::check_count(len)?;
        ok &= c.passed();
        counted += c.enumerated;
    }
    check("counts vs enumeration", ok, format!("{counted} programs enumerated"));

    let same = by_width!(p, schedule_check(p, seed))?;
    check("schedule independence", same, "200 VMs, 9 schedules".into());

    if !failed.is_empty() {
        bail!("failed: {}", failed.join(", "));
    }
    Ok(())
}

fn compiler_check<W: Word>(p: &MachineParams, seed: u64) -> Result<verify::CompilerReport> {
    Ok(verify::check_compiler::<W>(&[16, 30, 60, 100], 200, seed, 10_000, 10_000, p, lower)?)
}

fn schedule_check<W: Word>(p: &MachineParams, seed: u64) -> Result<bool> {
    let work = sampled_workload::<W>(&Sampler::new(100)?, 0, 200, seed, Inputs::Random, p)?;
    let grid: Vec<_> = [1, 4, 16].into_iter().flat_map(|g| [1, 7, 64].map(|q| (g, q))).collect();
    Ok(verify::check_schedule_independence(&work.configs, p, 2000, &grid)?)
}

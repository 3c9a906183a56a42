//! Operation-count benchmark over seeded random integer matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use detcore::chio::{chio_det_counted, ChioOptions};
use detcore::dodgson::{dodgson_det_counted, DodgsonOptions};
use detcore::field::format_rational;
use detcore::oracle::{det_definition_counted, det_laplace_counted, DEFINITION_MAX_ORDER};
use detcore::random::{random_integer_matrix, seeded_rng};
use detcore::{BigRational, OpCounter, OpCounts, SquareMatrix};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::eval::Method;

pub const MAX_ORDER: usize = 12;
pub const LAPLACE_MAX_ORDER: usize = 9;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub orders: RangeInclusive<usize>,
    pub samples: usize,
    pub entry_range: (i64, i64),
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub method: Method,
    pub n: usize,
    pub sample: usize,
    pub adds: u64,
    pub subs: u64,
    pub muls: u64,
    pub divs: u64,
    pub fallback: bool,
    pub micros: u128,
}

/// Methods run at order `n`.
pub fn methods_for(n: usize) -> Vec<Method> {
    let mut m = vec![Method::Dodgson, Method::Chio];
    if n <= LAPLACE_MAX_ORDER {
        m.push(Method::Laplace);
    }
    if n <= DEFINITION_MAX_ORDER {
        m.push(Method::Definition);
    }
    m
}

/// Generator stream of one sample, distinct across orders.
pub fn sample_stream(n: usize, sample: usize) -> u64 {
    ((n as u64) << 32) | sample as u64
}

pub fn sample_matrix(seed: u64, n: usize, sample: usize, lo: i64, hi: i64) -> SquareMatrix<BigRational> {
    let mut rng = seeded_rng(seed, sample_stream(n, sample));
    random_integer_matrix(&mut rng, n, lo, hi)
}

struct Run {
    value: BigRational,
    counts: OpCounts,
    fallback: bool,
    /// Multiplications of the pivoted reduction steps, for Chio only.
    stage_muls: Option<u64>,
    micros: u128,
}

fn run_method(method: Method, a: &SquareMatrix<BigRational>, seed: u64) -> CliResult<Run> {
    let ops = OpCounter::new();
    let start = Instant::now();
    let (value, fallback, stage_muls) = match method {
        Method::Dodgson => {
            let (v, trace) = dodgson_det_counted(a, &DodgsonOptions { seed }, &ops)?;
            (v, trace.repaired(), None)
        }
        Method::Chio => {
            let (v, trace) = chio_det_counted(a, &ChioOptions::default(), &ops)?;
            (v, false, Some(trace.reduction_ops().muls))
        }
        Method::Laplace => (det_laplace_counted(a, &ops), false, None),
        Method::Definition => (det_definition_counted(a, &ops)?, false, None),
    };
    Ok(Run {
        value,
        counts: ops.counts(),
        fallback,
        stage_muls,
        micros: start.elapsed().as_micros(),
    })
}

#[derive(Debug, Clone, Default)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    /// Chio reduction-step multiplications per (order, sample).
    pub chio_stage_muls: BTreeMap<(usize, usize), u64>,
}

fn validate(config: &BenchConfig) -> CliResult<()> {
    let (a, b) = (*config.orders.start(), *config.orders.end());
    if a < 1 || b > MAX_ORDER || a > b {
        return Err(CliError::Usage(format!("orders must lie within 1..{MAX_ORDER}, got {a}..{b}")));
    }
    if config.entry_range.0 > config.entry_range.1 {
        return Err(CliError::Usage("entry range is empty".into()));
    }
    Ok(())
}

/// Evaluates every sample with every method, checking that they agree.
pub fn measure(config: &BenchConfig) -> CliResult<BenchOutcome> {
    validate(config)?;
    let (lo, hi) = config.entry_range;
    let jobs: Vec<(usize, usize)> = config
        .orders
        .clone()
        .flat_map(|n| (0..config.samples).map(move |s| (n, s)))
        .collect();
    let results: Vec<CliResult<Vec<(Method, Run)>>> = jobs
        .par_iter()
        .map(|&(n, sample)| {
            let a = sample_matrix(config.seed, n, sample, lo, hi);
            let runs = methods_for(n)
                .into_iter()
                .map(|m| run_method(m, &a, config.seed).map(|r| (m, r)))
                .collect::<CliResult<Vec<_>>>()?;
            let first = &runs[0].1.value;
            if let Some((m, r)) = runs.iter().find(|(_, r)| &r.value != first) {
                return Err(CliError::Verify(format!(
                    "order {n} sample {sample}: {} gave {} but dodgson gave {}",
                    m.name(),
                    format_rational(&r.value),
                    format_rational(first)
                )));
            }
            Ok(runs)
        })
        .collect();

    let mut outcome = BenchOutcome::default();
    for (&(n, sample), runs) in jobs.iter().zip(results) {
        for (method, run) in runs? {
            if let Some(m) = run.stage_muls {
                outcome.chio_stage_muls.insert((n, sample), m);
            }
            outcome.records.push(BenchRecord {
                method,
                n,
                sample,
                adds: run.counts.adds,
                subs: run.counts.subs,
                muls: run.counts.muls,
                divs: run.counts.divs,
                fallback: run.fallback,
                micros: run.micros,
            });
        }
    }
    Ok(outcome)
}

/// Mean operation counts per method and order. Contains no timings, so it
/// is reproducible for a fixed seed.
pub fn summary(outcome: &BenchOutcome) -> String {
    let mut groups: BTreeMap<(usize, Method), Vec<&BenchRecord>> = BTreeMap::new();
    for r in &outcome.records {
        groups.entry((r.n, r.method)).or_default().push(r);
    }
    let mean = |rs: &[&BenchRecord], f: fn(&BenchRecord) -> u64| {
        rs.iter().map(|r| f(r)).sum::<u64>() as f64 / rs.len() as f64
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<11} {:>3} {:>12} {:>12} {:>12} {:>10} {:>12} {:>9}",
        "method", "n", "adds", "subs", "muls", "divs", "stage_muls", "fallback"
    );
    for ((n, method), rs) in &groups {
        let stage = if *method == Method::Chio {
            let v: Vec<u64> = outcome.chio_stage_muls.range((*n, 0)..(*n + 1, 0)).map(|(_, &m)| m).collect();
            format!("{:.1}", v.iter().sum::<u64>() as f64 / v.len().max(1) as f64)
        } else {
            "-".to_string()
        };
        let _ = writeln!(
            out,
            "{:<11} {:>3} {:>12.1} {:>12.1} {:>12.1} {:>10.1} {:>12} {:>9}",
            method.name(),
            n,
            mean(rs, |r| r.adds),
            mean(rs, |r| r.subs),
            mean(rs, |r| r.muls),
            mean(rs, |r| r.divs),
            stage,
            rs.iter().filter(|r| r.fallback).count()
        );
    }
    out
}

/// Writes the CSV and returns the summary table.
pub fn run_bench(config: &BenchConfig) -> CliResult<String> {
    validate(config)?;
    let write_err = |source: std::io::Error| CliError::Write {
        path: config.out.display().to_string(),
        source,
    };
    // Open first so an unwritable path fails before any work is done.
    let file = File::create(&config.out).map_err(write_err)?;
    let outcome = measure(config)?;
    let mut writer = csv::Writer::from_writer(file);
    for r in &outcome.records {
        writer.serialize(r).map_err(|e| write_err(std::io::Error::other(e)))?;
    }
    writer.flush().map_err(write_err)?;
    Ok(summary(&outcome))
}

/// Parses `"A..B"` (inclusive) or a single integer.
pub fn parse_range<T>(text: &str) -> CliResult<(T, T)>
where
    T: std::str::FromStr + Copy,
{
    let bad = || CliError::Usage(format!("expected a range like 3..8, got {text:?}"));
    let parse = |s: &str| s.trim().parse::<T>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => {
            let v = parse(text)?;
            Ok((v, v))
        }
    }
}

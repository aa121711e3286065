//! Seeded benchmark corpora run under per-instance timeouts.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;
use vpa_core::decide::{inclusion, universality, DecideError, DecideOptions, Method, Stats};
use vpa_core::model::Vpa;
use vpa_core::randgen::{RandgenError, RandomModel};

pub const CSV_HEADER: &str = "problem,method,size,samples,successes,total_time_ms,timeouts,timeout_limit_ms";

/// Added to the instance seed to draw the right-hand automaton of an
/// inclusion pair, so `A` and `B` are independent even at equal sizes.
pub const INCLUSION_SEED_OFFSET: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Universality,
    Inclusion,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Universality => "universality",
            Problem::Inclusion => "inclusion",
        })
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Standard => "standard",
        Method::OnTheFly => "onthefly",
    }
}

/// Number of states; a pair `AxB` for inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Size {
    Single(usize),
    Pair(usize, usize),
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Size::Single(n) => write!(f, "{n}"),
            Size::Pair(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad size `{s}`"));
        match s.split_once('x') {
            Some((a, b)) => Ok(Size::Pair(num(a)?, num(b)?)),
            None => Ok(Size::Single(num(s)?)),
        }
    }
}

/// Which random model the corpus is drawn from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    Random1,
    Random2 { final_density: f64 },
}

impl Model {
    pub fn instance(self, n: usize, seed: u64) -> RandomModel {
        match self {
            Model::Random1 => RandomModel::random1(n, seed),
            Model::Random2 { final_density } => RandomModel::random2(n, final_density, seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub problem: Problem,
    pub method: Method,
    pub model: Model,
    pub sizes: Vec<Size>,
    pub samples: usize,
    pub timeout: Duration,
    pub seed_base: u64,
    pub max_space: Option<u64>,
    pub parallel: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub method: Method,
    pub problem: Problem,
    pub size: Size,
    pub samples: usize,
    pub successes: usize,
    pub total_time_ms: u128,
    pub timeouts: usize,
    pub timeout_limit_ms: u128,
}

impl BenchRow {
    /// One CSV line in [`CSV_HEADER`] order.
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.problem,
            method_name(self.method),
            self.size,
            self.samples,
            self.successes,
            self.total_time_ms,
            self.timeouts,
            self.timeout_limit_ms
        )
    }
}

pub fn csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("size {size} does not fit problem {problem}")]
    SizeShape { problem: Problem, size: Size },
    #[error("instance generation failed: {0}")]
    Generate(#[from] RandgenError),
    #[error("instance {seed}: {error}")]
    Decide { seed: u64, error: DecideError },
}

/// What happened to one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub seed: u64,
    /// `None` when the run hit the deadline or the space cap.
    pub holds: Option<bool>,
    pub elapsed: Duration,
    pub stats: Stats,
    /// The run gave up on the space cap rather than the deadline.
    pub out_of_space: bool,
}

impl Outcome {
    pub fn solved(&self) -> bool {
        self.holds.is_some()
    }
}

/// The automata of one instance: `[m]` or `[a, b]`.
pub fn instance(cfg: &BenchConfig, size: Size, seed: u64) -> Result<Vec<Vpa>, BenchError> {
    let shape = || BenchError::SizeShape {
        problem: cfg.problem,
        size,
    };
    match (cfg.problem, size) {
        (Problem::Universality, Size::Single(n)) => Ok(vec![cfg.model.instance(n, seed).generate()?]),
        (Problem::Inclusion, Size::Pair(a, b)) => Ok(vec![
            cfg.model.instance(a, seed).generate()?,
            cfg.model
                .instance(b, seed.wrapping_add(INCLUSION_SEED_OFFSET))
                .generate()?,
        ]),
        _ => Err(shape()),
    }
}

/// Runs the decision procedure on pre-generated automata; generation is
/// not timed.
pub fn run_instance(cfg: &BenchConfig, seed: u64, automata: &[Vpa]) -> Result<Outcome, BenchError> {
    let start = Instant::now();
    let opts = DecideOptions {
        deadline: Some(start + cfg.timeout),
        max_space: cfg.max_space,
        ..DecideOptions::default()
    };
    let result = match automata {
        [m] => universality(m, cfg.method, &opts),
        [a, b] => inclusion(a, b, cfg.method, &opts),
        _ => unreachable!("instances hold one or two automata"),
    };
    let elapsed = start.elapsed();
    match result {
        Ok(v) => Ok(Outcome {
            seed,
            holds: Some(v.holds),
            elapsed,
            stats: v.stats,
            out_of_space: false,
        }),
        Err(ref e @ (DecideError::Timeout(stats) | DecideError::OutOfSpace(stats))) => Ok(Outcome {
            seed,
            holds: None,
            elapsed,
            stats,
            out_of_space: matches!(e, DecideError::OutOfSpace(_)),
        }),
        Err(error) => Err(BenchError::Decide { seed, error }),
    }
}

/// All outcomes for one size, in seed order.
pub fn run_size(cfg: &BenchConfig, size: Size) -> Result<Vec<Outcome>, BenchError> {
    let seeds: Vec<u64> = (0..cfg.samples as u64).map(|i| cfg.seed_base + i).collect();
    let one = |&seed: &u64| instance(cfg, size, seed).and_then(|ms| run_instance(cfg, seed, &ms));
    if cfg.parallel {
        seeds.par_iter().map(one).collect()
    } else {
        seeds.iter().map(one).collect()
    }
}

pub fn aggregate(cfg: &BenchConfig, size: Size, outcomes: &[Outcome]) -> BenchRow {
    let solved: Vec<&Outcome> = outcomes.iter().filter(|o| o.solved()).collect();
    BenchRow {
        method: cfg.method,
        problem: cfg.problem,
        size,
        samples: outcomes.len(),
        successes: solved.len(),
        total_time_ms: solved.iter().map(|o| o.elapsed).sum::<Duration>().as_millis(),
        timeouts: outcomes.len() - solved.len(),
        timeout_limit_ms: cfg.timeout.as_millis(),
    }
}

/// One row per size, in the order given.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    cfg.sizes
        .iter()
        .map(|&size| run_size(cfg, size).map(|o| aggregate(cfg, size, &o)))
        .collect()
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use vpa_cli::bench::{self, BenchConfig, Model, Problem, Size};
use vpa_cli::format::{parse_vpa, render_vpa};
use vpa_cli::DEFAULT_MAX_SPACE;
use vpa_core::decide::{self, DecideError, DecideOptions, Method, Stats, Verdict};
use vpa_core::determinize::{determinize, Determinized, Intermediate, Optimized, Original, PopMode};
use vpa_core::limits::Budget;
use vpa_core::model::{accepts, Vpa};
use vpa_core::preach::{emptiness, initial_automaton, saturate, StopPoint};
use vpa_core::randgen::RandomModel;

const HOLDS: u8 = 0;
const FAILS: u8 = 1;
const INPUT_ERROR: u8 = 2;
const TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "vpa", version, about = "Visibly pushdown automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a word through an automaton.
    Accepts { file: PathBuf, word: String },
    /// Print a deterministic, complete automaton for the same language.
    Determinize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ConstructionArg::Optimized)]
        construction: ConstructionArg,
        /// `all` builds pops for every (state, stack symbol) pair; `exact`
        /// only for pairs that occur in some reachable configuration.
        #[arg(long, value_enum, default_value_t = PopsArg::All)]
        pops: PopsArg,
        #[command(flatten)]
        limits: Limits,
    },
    /// Decide whether the language is empty.
    Empty {
        file: PathBuf,
        /// Also print the saturated P-automaton.
        #[arg(long)]
        dump_pautomaton: bool,
    },
    /// Decide whether every word is accepted.
    Universal {
        file: PathBuf,
        #[command(flatten)]
        decide: DecideArgs,
    },
    /// Decide whether L(A) is contained in L(B).
    Includes {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        decide: DecideArgs,
    },
    /// Print a random automaton.
    Random {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        model: u8,
        #[arg(short)]
        n: usize,
        /// Final-state density for model 2.
        #[arg(short, default_value_t = 0.5)]
        f: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a seeded corpus and print one CSV row per size.
    Bench {
        #[arg(long, value_enum, default_value_t = ProblemArg::Universality)]
        problem: ProblemArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Onthefly)]
        method: MethodArg,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
        model: u8,
        #[arg(short, default_value_t = 0.5)]
        f: f64,
        /// Comma-separated sizes; `AxB` for inclusion.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<Size>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 60_000)]
        timeout_ms: u64,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_SPACE)]
        max_space: u64,
        /// Run the instances of a size concurrently.
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(clap::Args)]
struct Limits {
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Cap on stored rules and P-automaton transitions.
    #[arg(long, default_value_t = DEFAULT_MAX_SPACE)]
    max_space: u64,
}

impl Limits {
    fn deadline(&self) -> Option<Instant> {
        self.timeout_ms
            .map(|ms| Instant::now() + Duration::from_millis(ms))
    }
}

#[derive(clap::Args)]
struct DecideArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Onthefly)]
    method: MethodArg,
    /// Longest counterexample to search for when the property fails.
    #[arg(long, default_value_t = 8)]
    witness_bound: usize,
    #[arg(long, value_enum, default_value_t = StopArg::Creation)]
    stop_point: StopArg,
    #[command(flatten)]
    limits: Limits,
}

impl DecideArgs {
    fn options(&self) -> DecideOptions {
        DecideOptions {
            deadline: self.limits.deadline(),
            max_space: Some(self.limits.max_space),
            witness_bound: Some(self.witness_bound),
            stop_point: match self.stop_point {
                StopArg::Creation => StopPoint::OnCreation,
                StopArg::TopFact => StopPoint::OnTopFact,
            },
            ..DecideOptions::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Optimized,
    Original,
    Intermediate,
}

#[derive(Clone, Copy, ValueEnum)]
enum PopsArg {
    Exact,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Standard,
    Onthefly,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Standard => Method::Standard,
            MethodArg::Onthefly => Method::OnTheFly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StopArg {
    Creation,
    TopFact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Universality,
    Inclusion,
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn load(path: &Path) -> Result<Vpa, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_vpa(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Accepts { file, word } => {
            let m = load(&file)?;
            let w = m.alphabet().parse_word(&word).map_err(|e| e.to_string())?;
            let yes = accepts(&m, &w).map_err(|e| e.to_string())?;
            println!("{}", if yes { "ACCEPTED" } else { "REJECTED" });
            Ok(if yes { HOLDS } else { FAILS })
        }
        Command::Determinize {
            file,
            construction,
            pops,
            limits,
        } => {
            let m = load(&file)?;
            let mode = match pops {
                PopsArg::Exact => PopMode::Exact,
                PopsArg::All => PopMode::OverApproximate,
            };
            let mut budget = Budget::unlimited()
                .deadline(limits.deadline())
                .max_space(Some(limits.max_space));
            let vpa = match construction {
                ConstructionArg::Optimized => determinize(Optimized(&m), mode, &mut budget).map(vpa_of),
                ConstructionArg::Original => determinize(Original(&m), mode, &mut budget).map(vpa_of),
                ConstructionArg::Intermediate => determinize(Intermediate(&m), mode, &mut budget).map(vpa_of),
            };
            match vpa {
                Ok(d) => {
                    print!("{}", render_vpa(&d));
                    Ok(HOLDS)
                }
                Err(_) => {
                    println!("TIMEOUT");
                    println!(
                        "limit: {:?}, steps: {}, space: {}",
                        budget.tripped(),
                        budget.steps(),
                        budget.space()
                    );
                    Ok(TIMEOUT)
                }
            }
        }
        Command::Empty {
            file,
            dump_pautomaton,
        } => {
            let m = load(&file)?;
            let empty = emptiness(&m);
            println!("{}", if empty { "EMPTY" } else { "NOT EMPTY" });
            if dump_pautomaton {
                let pa = saturate(&m, initial_automaton(&m));
                print!(
                    "{}",
                    pa.render_edges(|q| m.state_name(q).to_string(), |g| m.stack_name(g).to_string())
                );
            }
            Ok(if empty { HOLDS } else { FAILS })
        }
        Command::Universal { file, decide: args } => {
            let m = load(&file)?;
            let result = decide::universality(&m, args.method.into(), &args.options());
            Ok(report(&m, result, "UNIVERSAL", "NOT UNIVERSAL"))
        }
        Command::Includes { a, b, decide: args } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let result = decide::inclusion(&a, &b, args.method.into(), &args.options());
            Ok(report(&a, result, "INCLUDED", "NOT INCLUDED"))
        }
        Command::Random { model, n, f, seed } => {
            let spec = if model == 1 {
                RandomModel::random1(n, seed)
            } else {
                RandomModel::random2(n, f, seed)
            };
            let m = spec.generate().map_err(|e| e.to_string())?;
            print!("{}", render_vpa(&m));
            Ok(HOLDS)
        }
        Command::Bench {
            problem,
            method,
            model,
            f,
            sizes,
            samples,
            timeout_ms,
            seed_base,
            max_space,
            parallel,
        } => {
            let cfg = BenchConfig {
                problem: match problem {
                    ProblemArg::Universality => Problem::Universality,
                    ProblemArg::Inclusion => Problem::Inclusion,
                },
                method: method.into(),
                model: if model == 1 {
                    Model::Random1
                } else {
                    Model::Random2 { final_density: f }
                },
                sizes,
                samples,
                timeout: Duration::from_millis(timeout_ms),
                seed_base,
                max_space: Some(max_space),
                parallel,
            };
            let rows = bench::run(&cfg).map_err(|e| e.to_string())?;
            print!("{}", bench::csv(&rows));
            Ok(HOLDS)
        }
    }
}

fn vpa_of<D>(d: Determinized<D>) -> Vpa {
    d.vpa
}

fn print_stats(s: &Stats) {
    println!(
        "d-states: {}, pa-transitions: {}, iterations: {}",
        s.d_states, s.pa_transitions, s.iterations
    );
}

/// `words` supplies the alphabet for rendering witnesses.
fn report(words: &Vpa, result: Result<Verdict, DecideError>, yes: &str, no: &str) -> u8 {
    match result {
        Ok(v) => {
            println!("{}", if v.holds { yes } else { no });
            if let Some(w) = &v.witness {
                println!("witness: {}", words.alphabet().render_word(w));
            }
            print_stats(&v.stats);
            if v.holds {
                HOLDS
            } else {
                FAILS
            }
        }
        Err(DecideError::AlphabetMismatch) => {
            eprintln!("error: {}", DecideError::AlphabetMismatch);
            INPUT_ERROR
        }
        Err(e) => {
            println!("TIMEOUT");
            if matches!(e, DecideError::OutOfSpace(_)) {
                println!("reason: space cap reached");
            }
            if let Some(s) = e.stats() {
                print_stats(&s);
            }
            TIMEOUT
        }
    }
}

//! Seeded random VPAs for benchmarking.
//!
//! Both models use calls `c0 c1`, returns `r0 r1`, internals `i0 i1`, stack
//! symbols `g0 g1 g2` and states `q0 ..`, with a single initial state.
//! Draws come from ChaCha8 with one stream per slot: stream 0 picks the
//! initial and final states, the others fill one (state, symbol) slot
//! (random 2) or one symbol (random 1).

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{
    Alphabet, CallRule, InternalRule, ReturnRule, StackSym, StateId, Symbol, SymbolClass, Vpa, VpaParts,
};

const STACK: [&str; 3] = ["g0", "g1", "g2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `2n` transitions per symbol over the whole tuple space; all states final.
    Random1,
    /// A fixed number of transitions per (state, symbol).
    Random2,
}

/// Transitions per (state, symbol) slot in random 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerClass {
    pub call: usize,
    pub ret: usize,
    pub internal: usize,
}

impl Default for PerClass {
    fn default() -> Self {
        PerClass {
            call: 2,
            ret: 6,
            internal: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomModel {
    pub variant: Variant,
    pub num_states: usize,
    /// Fraction of final states; random 1 always uses 1.
    pub final_density: f64,
    pub per_class: PerClass,
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RandgenError {
    #[error("number of states must be positive")]
    NoStates,
    #[error("final-state density {0} is outside [0, 1]")]
    Density(f64),
    #[error("{class} symbol {symbol}{}: {quota} transitions requested but only {available} distinct ones exist",
        .state.as_ref().map(|q| format!(" from state {q}")).unwrap_or_default())]
    Quota {
        class: SymbolClass,
        symbol: String,
        state: Option<String>,
        quota: usize,
        available: usize,
    },
}

impl RandomModel {
    pub fn random1(n: usize, seed: u64) -> Self {
        RandomModel {
            variant: Variant::Random1,
            num_states: n,
            final_density: 1.0,
            per_class: PerClass::default(),
            seed,
        }
    }

    pub fn random2(n: usize, f: f64, seed: u64) -> Self {
        RandomModel {
            variant: Variant::Random2,
            num_states: n,
            final_density: f,
            per_class: PerClass::default(),
            seed,
        }
    }

    pub fn generate(&self) -> Result<Vpa, RandgenError> {
        let n = self.num_states;
        if n == 0 {
            return Err(RandgenError::NoStates);
        }
        if !(0.0..=1.0).contains(&self.final_density) {
            return Err(RandgenError::Density(self.final_density));
        }
        let alphabet = alphabet();
        let mut rng = stream(self.seed, 0);
        let initial = StateId(rng.gen_range(0..n as u32));
        let finals: Vec<StateId> = match self.variant {
            Variant::Random1 => (0..n as u32).map(StateId).collect(),
            Variant::Random2 => {
                // the epsilon keeps 0.6 * 10 from rounding up to 7
                let k = ((self.final_density * n as f64) - 1e-9).ceil().max(0.0) as usize;
                let mut v: Vec<StateId> = sample(&mut rng, n, k.min(n))
                    .into_iter()
                    .map(|i| StateId(i as u32))
                    .collect();
                v.sort_unstable();
                v
            }
        };
        let mut parts = VpaParts {
            state_names: (0..n).map(|i| format!("q{i}")).collect(),
            stack_names: STACK.iter().map(|s| s.to_string()).collect(),
            initial: vec![initial],
            finals,
            ..VpaParts::default()
        };
        match self.variant {
            Variant::Random1 => random1_rules(&alphabet, n, self.seed, &mut parts)?,
            Variant::Random2 => random2_rules(&alphabet, n, self.per_class, self.seed, &mut parts)?,
        }
        Ok(Vpa::from_parts(alphabet, parts).expect("generated automaton is well-formed"))
    }
}

pub fn generate_random1(n: usize, seed: u64) -> Result<Vpa, RandgenError> {
    RandomModel::random1(n, seed).generate()
}

pub fn generate_random2(n: usize, f: f64, seed: u64) -> Result<Vpa, RandgenError> {
    RandomModel::random2(n, f, seed).generate()
}

/// The benchmark alphabet.
pub fn alphabet() -> Alphabet {
    Alphabet::new(["c0", "c1"], ["r0", "r1"], ["i0", "i1"]).expect("fixed alphabet")
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn draw(
    rng: &mut ChaCha8Rng,
    available: usize,
    quota: usize,
    alphabet: &Alphabet,
    a: Symbol,
    state: Option<StateId>,
) -> Result<Vec<usize>, RandgenError> {
    if quota > available {
        return Err(RandgenError::Quota {
            class: alphabet.class(a).expect("symbol of the alphabet"),
            symbol: alphabet.name(a).to_string(),
            state: state.map(|q| format!("q{}", q.0)),
            quota,
            available,
        });
    }
    let mut v = sample(rng, available, quota).into_vec();
    v.sort_unstable();
    Ok(v)
}

fn random1_rules(alphabet: &Alphabet, n: usize, seed: u64, parts: &mut VpaParts) -> Result<(), RandgenError> {
    let k = 2 * n;
    let g = STACK.len();
    let q = |i: usize| StateId(i as u32);
    for a in alphabet.symbols() {
        let mut rng = stream(seed, 1 + a.index() as u64);
        match alphabet.class(a).expect("symbol of the alphabet") {
            SymbolClass::Call => {
                for i in draw(&mut rng, n * n * g, k, alphabet, a, None)? {
                    let (from, rest) = (i / (n * g), i % (n * g));
                    parts.call_rules.push(CallRule {
                        from: q(from),
                        symbol: a,
                        to: q(rest / g),
                        push: StackSym((rest % g) as u32 + 1),
                    });
                }
            }
            SymbolClass::Return => {
                for i in draw(&mut rng, n * (g + 1) * n, k, alphabet, a, None)? {
                    let (from, rest) = (i / ((g + 1) * n), i % ((g + 1) * n));
                    parts.return_rules.push(ReturnRule {
                        from: q(from),
                        symbol: a,
                        pop: StackSym((rest / n) as u32),
                        to: q(rest % n),
                    });
                }
            }
            SymbolClass::Internal => {
                for i in draw(&mut rng, n * n, k, alphabet, a, None)? {
                    parts.internal_rules.push(InternalRule {
                        from: q(i / n),
                        symbol: a,
                        to: q(i % n),
                    });
                }
            }
        }
    }
    Ok(())
}

fn random2_rules(
    alphabet: &Alphabet,
    n: usize,
    per: PerClass,
    seed: u64,
    parts: &mut VpaParts,
) -> Result<(), RandgenError> {
    let g = STACK.len();
    let q = |i: usize| StateId(i as u32);
    for from in 0..n {
        for a in alphabet.symbols() {
            let slot = 1 + (from * alphabet.len() + a.index()) as u64;
            let mut rng = stream(seed, slot);
            match alphabet.class(a).expect("symbol of the alphabet") {
                SymbolClass::Call => {
                    for i in draw(&mut rng, n * g, per.call, alphabet, a, Some(q(from)))? {
                        parts.call_rules.push(CallRule {
                            from: q(from),
                            symbol: a,
                            to: q(i / g),
                            push: StackSym((i % g) as u32 + 1),
                        });
                    }
                }
                SymbolClass::Return => {
                    for i in draw(&mut rng, (g + 1) * n, per.ret, alphabet, a, Some(q(from)))? {
                        parts.return_rules.push(ReturnRule {
                            from: q(from),
                            symbol: a,
                            pop: StackSym((i / n) as u32),
                            to: q(i % n),
                        });
                    }
                }
                SymbolClass::Internal => {
                    for i in draw(&mut rng, n, per.internal, alphabet, a, Some(q(from)))? {
                        parts.internal_rules.push(InternalRule {
                            from: q(from),
                            symbol: a,
                            to: q(i),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

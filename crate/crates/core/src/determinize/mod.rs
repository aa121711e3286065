//! Subset-style determinization of VPAs.
//!
//! Three constructions share one driver: [`Optimized`] (summary sets only),
//! [`Original`] (summary and path sets, `Id_Q` after pushes) and
//! [`Intermediate`] (summary and path sets, `Id_{R'}` after pushes). Only
//! reachable d-states are built. The result is deterministic and complete.

mod construction;
mod relation;
mod space;
pub(crate) use space::Interner as SpaceInterner;
mod successors;

pub use construction::{Construction, Intermediate, Optimized, Original, PathSummaryState};
pub use relation::Relation;
pub use space::DetSpace;
pub use successors::{
    identity_relation, internal_successor, pop_empty_successor, pop_successor, push_successor, DStackSymbol,
};

use rustc_hash::FxHashSet as HashSet;

use crate::limits::{Budget, Exhausted};
use crate::model::automaton::disambiguate;
use crate::model::{CallRule, InternalRule, ReturnRule, StackSym, StateId, Symbol, Vpa, VpaParts};
use crate::preach::{explore, PdsRule};

/// Which (d-state, d-stack symbol) pairs get pop transitions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PopMode {
    /// Only pairs that occur together in some reachable configuration, as
    /// established by interleaved post* saturation. Other slots go to a
    /// rejecting sink.
    #[default]
    Exact,
    /// Every d-state against every d-stack symbol created so far. May
    /// build d-states that no run reaches.
    OverApproximate,
}

/// A determinized VPA together with what its states and stack symbols stand for.
#[derive(Clone, Debug)]
pub struct Determinized<D> {
    pub vpa: Vpa,
    /// Indexed by the state ids of `vpa`; the initial d-state is first.
    pub states: Vec<D>,
    /// Entry `i` describes the explicit stack symbol `StackSym(i + 1)`.
    pub stack: Vec<DStackSymbol<StateId>>,
}

impl<D> Determinized<D> {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }
}

pub fn determinize_optimized(m: &Vpa) -> Determinized<Relation> {
    unlimited(Optimized(m))
}

pub fn determinize_original(m: &Vpa) -> Determinized<PathSummaryState> {
    unlimited(Original(m))
}

pub fn determinize_intermediate(m: &Vpa) -> Determinized<PathSummaryState> {
    unlimited(Intermediate(m))
}

fn unlimited<C: Construction>(c: C) -> Determinized<C::State> {
    determinize(c, PopMode::Exact, &mut Budget::unlimited()).expect("unlimited budget")
}

#[derive(Default)]
pub(crate) struct Rules {
    internal: Vec<InternalRule>,
    call: Vec<CallRule>,
    ret: Vec<ReturnRule>,
}

/// Runs construction `c` to its fixpoint.
pub fn determinize<C: Construction>(
    c: C,
    mode: PopMode,
    budget: &mut Budget,
) -> Result<Determinized<C::State>, Exhausted> {
    let mut space = DetSpace::new(c);
    let rules = collect_rules(&mut space, mode, budget)?;
    finish(space, rules, budget)
}

/// Explores `space` to its fixpoint. On exhaustion the space keeps what
/// was built so far.
pub(crate) fn collect_rules<C: Construction>(
    space: &mut DetSpace<C>,
    mode: PopMode,
    budget: &mut Budget,
) -> Result<Rules, Exhausted> {
    let mut rules = Rules::default();
    match mode {
        PopMode::Exact => {
            let run = explore(space, None, budget).map_err(|_| Exhausted)?;
            for r in run.rules {
                let symbol = r.symbol;
                match r.rule {
                    PdsRule::Internal { from, to } => rules.internal.push(InternalRule { from, symbol, to }),
                    PdsRule::Push { from, to, push } => rules.call.push(CallRule {
                        from,
                        symbol,
                        to,
                        push,
                    }),
                    PdsRule::Pop { from, top, to } => rules.ret.push(ReturnRule {
                        from,
                        symbol,
                        pop: top,
                        to,
                    }),
                }
            }
        }
        PopMode::OverApproximate => over_approximate(space, &mut rules, budget)?,
    }
    Ok(rules)
}

pub(crate) fn finish<C: Construction>(
    mut space: DetSpace<C>,
    mut rules: Rules,
    budget: &mut Budget,
) -> Result<Determinized<C::State>, Exhausted> {
    complete(&mut space, &mut rules, budget)?;
    Ok(assemble(space, rules))
}

fn over_approximate<C: Construction>(
    space: &mut DetSpace<C>,
    rules: &mut Rules,
    budget: &mut Budget,
) -> Result<(), Exhausted> {
    space.initial();
    let (calls, returns, internals) = (
        space.calls().to_vec(),
        space.returns().to_vec(),
        space.internals().to_vec(),
    );
    let pop_all =
        |space: &mut DetSpace<C>, rules: &mut Rules, budget: &mut Budget, from: StateId, pop: StackSym| {
            budget.tick()?;
            budget.charge(returns.len() as u64)?;
            for &symbol in &returns {
                let to = space.pop_succ(from, pop, symbol);
                rules.ret.push(ReturnRule {
                    from,
                    symbol,
                    pop,
                    to,
                });
            }
            Ok(())
        };
    // Everything in states [0, done_s) × stack [0, done_g] is handled.
    let (mut done_s, mut done_g) = (0, 0);
    loop {
        let (ns, ng) = (space.num_states(), space.num_stack_symbols());
        if ns == done_s && ng == done_g {
            return Ok(());
        }
        for from in (done_s..ns).map(|i| StateId(i as u32)) {
            budget.tick()?;
            budget.charge((internals.len() + calls.len()) as u64)?;
            for &symbol in &internals {
                let to = space.internal_succ(from, symbol);
                rules.internal.push(InternalRule { from, symbol, to });
            }
            for &symbol in &calls {
                let (to, push) = space.push_succ(from, symbol);
                rules.call.push(CallRule {
                    from,
                    symbol,
                    to,
                    push,
                });
            }
            for g in 0..=ng as u32 {
                pop_all(space, rules, budget, from, StackSym(g))?;
            }
        }
        for g in done_g + 1..=ng {
            for s in 0..done_s {
                pop_all(space, rules, budget, StateId(s as u32), StackSym(g as u32))?;
            }
        }
        done_s = ns;
        done_g = ng;
    }
}

/// Sends every slot without a transition to the sink d-state. The sink's
/// own transitions, where missing, loop back to it.
fn complete<C: Construction>(
    space: &mut DetSpace<C>,
    rules: &mut Rules,
    budget: &mut Budget,
) -> Result<(), Exhausted> {
    let (nc, nr, ni) = (
        space.calls().len(),
        space.returns().len(),
        space.internals().len(),
    );
    let ns = space.num_states();
    let ng = space.num_stack_symbols() + 1;
    if rules.internal.len() == ns * ni && rules.call.len() == ns * nc && rules.ret.len() == ns * ng * nr {
        return Ok(());
    }
    // at most one more state and nc more stack symbols, for the sink
    let slots = (ns + 1) * (ni + nc) + (ns + 1) * (ng + nc) * nr;
    let have = rules.internal.len() + rules.call.len() + rules.ret.len();
    budget.charge(slots.saturating_sub(have) as u64)?;
    let sink = {
        let d = space.c.sink();
        space.intern(d)
    };
    let (calls, returns, internals) = (
        space.calls().to_vec(),
        space.returns().to_vec(),
        space.internals().to_vec(),
    );
    let states = (0..space.num_states() as u32).map(StateId);

    let have: HashSet<(StateId, Symbol)> = rules.call.iter().map(|r| (r.from, r.symbol)).collect();
    for from in states.clone() {
        for &symbol in &calls {
            if !have.contains(&(from, symbol)) {
                let g = space.stack.intern(DStackSymbol {
                    origin: sink,
                    call: symbol,
                }) + 1;
                rules.call.push(CallRule {
                    from,
                    symbol,
                    to: sink,
                    push: StackSym(g),
                });
            }
        }
    }
    let have: HashSet<(StateId, Symbol)> = rules.internal.iter().map(|r| (r.from, r.symbol)).collect();
    for from in states.clone() {
        for &symbol in &internals {
            if !have.contains(&(from, symbol)) {
                rules.internal.push(InternalRule {
                    from,
                    symbol,
                    to: sink,
                });
            }
        }
    }
    // merge walk over the sorted rules and the slots in the same order
    rules.ret.sort_unstable();
    let mut missing = Vec::new();
    let mut i = 0;
    for from in states {
        for &symbol in &returns {
            for pop in (0..=space.num_stack_symbols() as u32).map(StackSym) {
                let key = (from, symbol, pop);
                while i < rules.ret.len() && (rules.ret[i].from, rules.ret[i].symbol, rules.ret[i].pop) < key
                {
                    i += 1;
                }
                let present =
                    i < rules.ret.len() && (rules.ret[i].from, rules.ret[i].symbol, rules.ret[i].pop) == key;
                if !present {
                    missing.push(ReturnRule {
                        from,
                        symbol,
                        pop,
                        to: sink,
                    });
                }
            }
        }
    }
    rules.ret.extend(missing);
    Ok(())
}

fn assemble<C: Construction>(space: DetSpace<C>, rules: Rules) -> Determinized<C::State> {
    let (c, states, stack) = space.into_parts();
    let m = c.source();
    let state_names = disambiguate(states.iter().map(|d| c.render(d)).collect());
    let stack_names = disambiguate(
        stack
            .iter()
            .map(|g| {
                format!(
                    "({},{})",
                    state_names[g.origin.index()],
                    m.alphabet().name(g.call)
                )
            })
            .collect(),
    );
    let parts = VpaParts {
        finals: (0..states.len() as u32)
            .map(StateId)
            .filter(|s| c.is_final(&states[s.index()]))
            .collect(),
        state_names,
        stack_names,
        initial: vec![StateId(0)],
        call_rules: rules.call,
        return_rules: rules.ret,
        internal_rules: rules.internal,
    };
    let vpa = Vpa::from_parts(m.alphabet().clone(), parts).expect("determinized automaton is well-formed");
    Determinized { vpa, states, stack }
}

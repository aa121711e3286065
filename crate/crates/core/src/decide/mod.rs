//! Universality and inclusion, by full determinization or on the fly.

mod product;
mod witness;

use std::time::Instant;

use thiserror::Error;

use crate::determinize::{collect_rules, finish, DetSpace, Optimized, PopMode};
use crate::limits::{Budget, Exhausted, Limit};
use crate::model::{complement_deterministic, product_within, Vpa, Word};
use crate::preach::{emptiness_within, explore, initial_automaton, vpa_rules, Saturator, StopPoint};
use product::ProductSystem;

/// Work counters of one decision run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// D-states of the determinized automaton that were created.
    pub d_states: usize,
    pub pa_transitions: usize,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// A counterexample, when the property fails and one was found.
    pub witness: Option<Word>,
    pub stats: Stats,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("timed out")]
    Timeout(Stats),
    #[error("space cap reached")]
    OutOfSpace(Stats),
}

impl DecideError {
    fn exhausted(budget: &Budget, stats: Stats) -> Self {
        match budget.tripped() {
            Some(Limit::Space) => DecideError::OutOfSpace(stats),
            _ => DecideError::Timeout(stats),
        }
    }

    /// Counters at the point a run gave up.
    pub fn stats(&self) -> Option<Stats> {
        match self {
            DecideError::Timeout(s) | DecideError::OutOfSpace(s) => Some(*s),
            DecideError::AlphabetMismatch => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Standard,
    OnTheFly,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DecideOptions {
    pub deadline: Option<Instant>,
    pub max_steps: Option<u64>,
    /// Cap on stored rules and P-automaton transitions.
    pub max_space: Option<u64>,
    /// Look for a counterexample of at most this length when the property
    /// fails. The search shares the deadline.
    pub witness_bound: Option<usize>,
    /// When the on-the-fly methods test for a rejecting d-state.
    pub stop_point: StopPoint,
}

impl DecideOptions {
    fn budget(&self) -> Budget {
        Budget::unlimited()
            .deadline(self.deadline)
            .max_steps(self.max_steps)
            .max_space(self.max_space)
    }
}

pub fn universality(m: &Vpa, method: Method, opts: &DecideOptions) -> Result<Verdict, DecideError> {
    match method {
        Method::Standard => universality_standard(m, opts),
        Method::OnTheFly => universality_on_the_fly(m, opts),
    }
}

pub fn inclusion(a: &Vpa, b: &Vpa, method: Method, opts: &DecideOptions) -> Result<Verdict, DecideError> {
    match method {
        Method::Standard => inclusion_standard(a, b, opts),
        Method::OnTheFly => inclusion_on_the_fly(a, b, opts),
    }
}

/// Determinizes `m` completely, then searches the reachable
/// configurations of the result for a rejecting d-state.
pub fn universality_standard(m: &Vpa, opts: &DecideOptions) -> Result<Verdict, DecideError> {
    let mut budget = opts.budget();
    let mut stats = Stats::default();
    let mut space = DetSpace::new(Optimized(m));
    let rules = collect_rules(&mut space, PopMode::OverApproximate, &mut budget).map_err(|Exhausted| {
        stats.d_states = space.num_states();
        DecideError::exhausted(&budget, stats)
    })?;
    stats.d_states = space.num_states();
    let det =
        finish(space, rules, &mut budget).map_err(|Exhausted| DecideError::exhausted(&budget, stats))?;
    stats.d_states = det.num_states();

    let d = &det.vpa;
    let mut sat = Saturator::new(initial_automaton(d));
    let found = vpa_rules(d)
        .try_for_each(|r| {
            sat.add_rule(r);
            budget.tick()
        })
        .and_then(|()| sat.run_until(&mut budget, |q| !d.is_final(q)));
    stats.pa_transitions = sat.automaton().num_transitions();
    stats.iterations = 1;
    let found = found.map_err(|Exhausted| DecideError::exhausted(&budget, stats))?;
    Ok(verdict(found.is_none(), None, m, stats, opts))
}

/// Interleaves determinization with post* saturation and stops at the
/// first reachable rejecting d-state.
pub fn universality_on_the_fly(m: &Vpa, opts: &DecideOptions) -> Result<Verdict, DecideError> {
    let mut budget = opts.budget();
    let mut space = DetSpace::new(Optimized(m));
    space.stop_on_rejecting = true;
    let run = explore(&mut space, Some(opts.stop_point), &mut budget);
    let d_states = space.num_states();
    match run {
        Ok(run) => {
            let stats = Stats {
                d_states,
                pa_transitions: run.stats.pa_transitions,
                iterations: run.stats.iterations,
            };
            Ok(verdict(run.stopped_at.is_none(), None, m, stats, opts))
        }
        Err(e) => Err(DecideError::exhausted(
            &budget,
            Stats {
                d_states,
                pa_transitions: e.0.pa_transitions,
                iterations: e.0.iterations,
            },
        )),
    }
}

/// Determinizes and complements `b`, then checks `A × complement(B)` for
/// emptiness.
pub fn inclusion_standard(a: &Vpa, b: &Vpa, opts: &DecideOptions) -> Result<Verdict, DecideError> {
    if a.alphabet() != b.alphabet() {
        return Err(DecideError::AlphabetMismatch);
    }
    let mut budget = opts.budget();
    let mut stats = Stats::default();
    let mut space = DetSpace::new(Optimized(b));
    let rules = collect_rules(&mut space, PopMode::OverApproximate, &mut budget).map_err(|Exhausted| {
        stats.d_states = space.num_states();
        DecideError::exhausted(&budget, stats)
    })?;
    stats.d_states = space.num_states();
    let det =
        finish(space, rules, &mut budget).map_err(|Exhausted| DecideError::exhausted(&budget, stats))?;
    stats.d_states = det.num_states();
    let co = complement_deterministic(&det.vpa).expect("determinization is deterministic and complete");
    let prod = product_within(a, &co, &mut budget)
        .map_err(|Exhausted| DecideError::exhausted(&budget, stats))?
        .expect("alphabets checked");
    stats.iterations = 1;
    let empty =
        emptiness_within(&prod, &mut budget).map_err(|Exhausted| DecideError::exhausted(&budget, stats))?;
    Ok(verdict(empty, Some(a), b, stats, opts))
}

/// Builds `A × det(B)` lazily while saturating, and stops at the first
/// reachable pair of an accepting A state and a rejecting d-state.
pub fn inclusion_on_the_fly(a: &Vpa, b: &Vpa, opts: &DecideOptions) -> Result<Verdict, DecideError> {
    if a.alphabet() != b.alphabet() {
        return Err(DecideError::AlphabetMismatch);
    }
    let mut budget = opts.budget();
    let mut sys = ProductSystem::new(a, b);
    let run = explore(&mut sys, Some(opts.stop_point), &mut budget);
    let d_states = sys.b.num_states();
    match run {
        Ok(run) => {
            let stats = Stats {
                d_states,
                pa_transitions: run.stats.pa_transitions,
                iterations: run.stats.iterations,
            };
            Ok(verdict(run.stopped_at.is_none(), Some(a), b, stats, opts))
        }
        Err(e) => Err(DecideError::exhausted(
            &budget,
            Stats {
                d_states,
                pa_transitions: e.0.pa_transitions,
                iterations: e.0.iterations,
            },
        )),
    }
}

fn verdict(holds: bool, a: Option<&Vpa>, b: &Vpa, stats: Stats, opts: &DecideOptions) -> Verdict {
    let witness = match opts.witness_bound {
        Some(bound) if !holds => {
            let mut budget = Budget::unlimited().deadline(opts.deadline);
            witness::search(a, b, bound, &mut budget)
        }
        _ => None,
    };
    Verdict {
        holds,
        witness,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::accepts;
    use crate::model::fixtures::{v0, v1, vu};

    fn opts() -> DecideOptions {
        DecideOptions {
            witness_bound: Some(8),
            ..DecideOptions::default()
        }
    }

    #[test]
    fn universality_of_fixtures() {
        for method in [Method::Standard, Method::OnTheFly] {
            assert!(universality(&vu(), method, &opts()).unwrap().holds);
            let v = universality(&v1(), method, &opts()).unwrap();
            assert!(!v.holds);
            assert_eq!(v.witness, Some(v1().alphabet().parse_word("c").unwrap()));
            let v = universality(&v0(), method, &opts()).unwrap();
            assert!(!v.holds);
            assert_eq!(v.witness, Some(vec![]));
        }
    }

    #[test]
    fn on_the_fly_stops_early_on_v1() {
        let v = universality_on_the_fly(&v1(), &opts()).unwrap();
        assert!(v.stats.d_states <= 2, "{:?}", v.stats);
        let v = universality_on_the_fly(&v0(), &opts()).unwrap();
        assert_eq!(v.stats.iterations, 0);
        assert_eq!(v.stats.d_states, 1);
    }

    #[test]
    fn inclusion_of_fixtures() {
        for method in [Method::Standard, Method::OnTheFly] {
            assert!(inclusion(&v1(), &vu(), method, &opts()).unwrap().holds);
            assert!(inclusion(&v1(), &v1(), method, &opts()).unwrap().holds);
            assert!(inclusion(&v0(), &v1(), method, &opts()).unwrap().holds);
            let v = inclusion(&vu(), &v1(), method, &opts()).unwrap();
            assert!(!v.holds);
            let w = v.witness.unwrap();
            assert_eq!(vu().alphabet().render_word(&w), "c");
            assert!(accepts(&vu(), &w).unwrap() && !accepts(&v1(), &w).unwrap());
            let v = inclusion(&v1(), &v0(), method, &opts()).unwrap();
            assert_eq!(v.witness, Some(vec![]));
        }
    }

    #[test]
    fn timeout_is_reported() {
        let tight = DecideOptions {
            max_steps: Some(1),
            ..opts()
        };
        for method in [Method::Standard, Method::OnTheFly] {
            assert!(matches!(
                universality(&vu(), method, &tight),
                Err(DecideError::Timeout(_))
            ));
        }
    }
}

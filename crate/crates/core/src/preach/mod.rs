//! Configuration sets as P-automata and post* saturation.

mod automaton;
mod explore;
mod saturate;

pub use automaton::{initial_automaton, PAutomaton, PLabel, PState, PStateId, PTransition, PreachError};
pub use explore::{explore, Exploration, ExploreStats, Interrupted, LabeledRule, LazySystem, StopPoint};
pub use saturate::{saturate, vpa_rules, PdsRule, Saturator};

use crate::limits::{Budget, Exhausted};
use crate::model::Vpa;

/// Whether `L(m)` is empty.
pub fn emptiness(m: &Vpa) -> bool {
    emptiness_within(m, &mut Budget::unlimited()).expect("unlimited budget")
}

/// [`emptiness`] under a budget. Stops as soon as a final state shows up
/// with some top of stack.
pub fn emptiness_within(m: &Vpa, budget: &mut Budget) -> Result<bool, Exhausted> {
    if m.finals().next().is_none() {
        return Ok(true);
    }
    let mut sat = Saturator::new(initial_automaton(m));
    for r in vpa_rules(m) {
        budget.tick()?;
        sat.add_rule(r);
    }
    // Every edge out of a control state lies on an accepting path: f is
    // the only sink and every other state was created with an edge to it.
    let hit = sat.run_until(budget, |q| m.is_final(q))?;
    Ok(hit.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{v0, v1, vu};

    #[test]
    fn emptiness_of_fixtures() {
        assert!(emptiness(&v0()));
        assert!(!emptiness(&v1()));
        assert!(!emptiness(&vu()));
    }
}

use rustc_hash::FxHashMap as HashMap;

use super::{CallRule, InternalRule, ModelError, ReturnRule, StackSym, StateId, Symbol, Vpa, VpaParts};
use crate::limits::{Budget, Exhausted};

/// Synchronized product; `L(product(a, b)) = L(a) ∩ L(b)`.
pub fn product(a: &Vpa, b: &Vpa) -> Result<Vpa, ModelError> {
    match product_within(a, b, &mut Budget::unlimited()) {
        Ok(r) => r,
        Err(Exhausted) => unreachable!("unlimited budget"),
    }
}

/// [`product`] under a budget.
///
/// Product states are all pairs `Qa × Qb`, named `(qa,qb)`. Product stack
/// symbols are the pairs of explicit symbols that some pair of call rules
/// pushes together; a pair of bottom markers collapses to the bottom marker.
pub fn product_within(a: &Vpa, b: &Vpa, budget: &mut Budget) -> Result<Result<Vpa, ModelError>, Exhausted> {
    if a.alphabet() != b.alphabet() {
        return Ok(Err(ModelError::AlphabetMismatch));
    }
    let nb = b.num_states() as u32;
    let pair = |qa: StateId, qb: StateId| StateId(qa.0 * nb + qb.0);

    let mut state_names = Vec::with_capacity(a.num_states() * b.num_states());
    for qa in a.states() {
        budget.tick()?;
        budget.charge(nb as u64)?;
        for qb in b.states() {
            state_names.push(format!("({},{})", a.state_name(qa), b.state_name(qb)));
        }
    }

    let by_symbol_calls = |m: &Vpa| {
        let mut map: HashMap<Symbol, Vec<CallRule>> = HashMap::default();
        for r in m.call_rules() {
            map.entry(r.symbol).or_default().push(*r);
        }
        map
    };
    let calls_b = by_symbol_calls(b);
    let mut stack_ids: HashMap<(StackSym, StackSym), StackSym> = HashMap::default();
    let mut stack_names = Vec::new();
    let mut call_rules = Vec::new();
    for ra in a.call_rules() {
        for rb in calls_b.get(&ra.symbol).map_or(&[][..], Vec::as_slice) {
            budget.tick()?;
            budget.charge(1)?;
            let push = *stack_ids.entry((ra.push, rb.push)).or_insert_with(|| {
                stack_names.push(format!("({},{})", a.stack_name(ra.push), b.stack_name(rb.push)));
                StackSym(stack_names.len() as u32)
            });
            call_rules.push(CallRule {
                from: pair(ra.from, rb.from),
                symbol: ra.symbol,
                to: pair(ra.to, rb.to),
                push,
            });
        }
    }

    let mut returns_b: HashMap<Symbol, Vec<ReturnRule>> = HashMap::default();
    for r in b.return_rules() {
        returns_b.entry(r.symbol).or_default().push(*r);
    }
    let mut return_rules = Vec::new();
    for ra in a.return_rules() {
        for rb in returns_b.get(&ra.symbol).map_or(&[][..], Vec::as_slice) {
            budget.tick()?;
            budget.charge(1)?;
            let pop = match (ra.pop.is_bottom(), rb.pop.is_bottom()) {
                (true, true) => StackSym::BOTTOM,
                (false, false) => match stack_ids.get(&(ra.pop, rb.pop)) {
                    Some(&g) => g,
                    // never pushed, so never on top
                    None => continue,
                },
                _ => continue,
            };
            return_rules.push(ReturnRule {
                from: pair(ra.from, rb.from),
                symbol: ra.symbol,
                pop,
                to: pair(ra.to, rb.to),
            });
        }
    }

    let mut internals_b: HashMap<Symbol, Vec<InternalRule>> = HashMap::default();
    for r in b.internal_rules() {
        internals_b.entry(r.symbol).or_default().push(*r);
    }
    let mut internal_rules = Vec::new();
    for ra in a.internal_rules() {
        for rb in internals_b.get(&ra.symbol).map_or(&[][..], Vec::as_slice) {
            budget.tick()?;
            budget.charge(1)?;
            internal_rules.push(InternalRule {
                from: pair(ra.from, rb.from),
                symbol: ra.symbol,
                to: pair(ra.to, rb.to),
            });
        }
    }

    let mut initial = Vec::new();
    for &qa in a.initial() {
        for &qb in b.initial() {
            initial.push(pair(qa, qb));
        }
    }
    let mut finals = Vec::new();
    for qa in a.finals() {
        for qb in b.finals() {
            finals.push(pair(qa, qb));
        }
    }

    let parts = VpaParts {
        state_names: super::automaton::disambiguate(state_names),
        stack_names: super::automaton::disambiguate(stack_names),
        initial,
        finals,
        call_rules,
        return_rules,
        internal_rules,
    };
    Ok(Vpa::from_parts(a.alphabet().clone(), parts))
}

/// Swaps final and non-final states of a deterministic, complete VPA.
pub fn complement_deterministic(m: &Vpa) -> Result<Vpa, ModelError> {
    m.check_deterministic()?;
    m.check_complete()?;
    m.with_finals(m.states().filter(|&q| !m.is_final(q)))
}

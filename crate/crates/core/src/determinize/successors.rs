//! One-step transition functions of the summary-set construction.

use super::relation::Relation;
use crate::model::{StackSym, StateId, Symbol, SymbolClass, Vpa};

/// A stack symbol of a determinized automaton: the d-state at push time
/// and the call symbol read.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DStackSymbol<D> {
    pub origin: D,
    pub call: Symbol,
}

pub fn identity_relation(states: impl IntoIterator<Item = StateId>) -> Relation {
    Relation::identity(states)
}

pub fn internal_successor(m: &Vpa, s: &Relation, a: Symbol) -> Relation {
    debug_assert_eq!(m.alphabet().class(a), Some(SymbolClass::Internal));
    Relation::from_pairs(
        s.pairs()
            .iter()
            .flat_map(|&(q, mid)| m.internal_targets(mid, a).iter().map(move |&t| (q, t))),
    )
}

/// The target depends on `Π₂(s)` only.
pub fn push_successor(m: &Vpa, s: &Relation, a: Symbol) -> (DStackSymbol<Relation>, Relation) {
    let reach = call_image(m, &s.image(), a);
    (
        DStackSymbol {
            origin: s.clone(),
            call: a,
        },
        Relation::identity(reach),
    )
}

pub fn pop_empty_successor(m: &Vpa, s: &Relation, a: Symbol) -> Relation {
    debug_assert_eq!(m.alphabet().class(a), Some(SymbolClass::Return));
    Relation::from_pairs(s.pairs().iter().flat_map(|&(q, mid)| {
        m.return_targets(mid, a, StackSym::BOTTOM)
            .iter()
            .map(move |&t| (q, t))
    }))
}

pub fn pop_successor(m: &Vpa, s: &Relation, top: &DStackSymbol<Relation>, a: Symbol) -> Relation {
    top.origin.compose(&update(m, s, top.call, a, |_| true))
}

/// States entered from `from` by a call rule on `a`.
pub(crate) fn call_image(m: &Vpa, from: &[StateId], a: Symbol) -> Vec<StateId> {
    debug_assert_eq!(m.alphabet().class(a), Some(SymbolClass::Call));
    let mut v: Vec<StateId> = from
        .iter()
        .flat_map(|&q| m.call_targets(q, a).iter().map(|&(t, _)| t))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `{(q, q') : ∃(q1, q2) ∈ s, keep(q2), q -call/+γ-> q1, q2 -ret/-γ-> q'}`.
pub(crate) fn update(
    m: &Vpa,
    s: &Relation,
    call: Symbol,
    ret: Symbol,
    keep: impl Fn(StateId) -> bool,
) -> Relation {
    debug_assert_eq!(m.alphabet().class(ret), Some(SymbolClass::Return));
    let mut out = Vec::new();
    for &(q1, q2) in s.pairs() {
        if !keep(q2) {
            continue;
        }
        for g in m.stack_symbols().skip(1) {
            let targets = m.return_targets(q2, ret, g);
            if targets.is_empty() {
                continue;
            }
            for &q in m.call_sources(q1, call, g) {
                out.extend(targets.iter().map(|&t| (q, t)));
            }
        }
    }
    Relation::from_pairs(out)
}

/// `{q' : ∃q ∈ from. (q, q') ∈ rel}`.
pub(crate) fn image_of(from: &[StateId], rel: &Relation) -> Vec<StateId> {
    let mut v: Vec<StateId> = from
        .iter()
        .flat_map(|&q| rel.row(q).iter().map(|&(_, t)| t))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `{q' : ∃q ∈ from. q -a-> q'}` for internal `a`, or bottom returns when
/// `a` is a return symbol.
pub(crate) fn flat_image(m: &Vpa, from: &[StateId], a: Symbol) -> Vec<StateId> {
    let mut v: Vec<StateId> = match m.alphabet().class(a) {
        Some(SymbolClass::Internal) => from
            .iter()
            .flat_map(|&q| m.internal_targets(q, a).iter().copied())
            .collect(),
        Some(SymbolClass::Return) => from
            .iter()
            .flat_map(|&q| m.return_targets(q, a, StackSym::BOTTOM).iter().copied())
            .collect(),
        _ => unreachable!("flat_image on a call symbol"),
    };
    v.sort_unstable();
    v.dedup();
    v
}

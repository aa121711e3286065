use std::fmt::Debug;
use std::hash::Hash;

use super::relation::{render_set, Relation};
use super::successors::{call_image, flat_image, image_of, internal_successor, pop_empty_successor, update};
use crate::model::{StateId, Symbol, Vpa};

/// A d-state of the constructions that track reachable states separately.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathSummaryState {
    /// Summary edges `S`.
    pub summaries: Relation,
    /// Path edges `R`.
    pub reach: Vec<StateId>,
}

impl PathSummaryState {
    pub fn new(summaries: Relation, reach: impl IntoIterator<Item = StateId>) -> Self {
        let mut reach: Vec<StateId> = reach.into_iter().collect();
        reach.sort_unstable();
        reach.dedup();
        PathSummaryState { summaries, reach }
    }
}

/// Transition function of a subset-style determinization, one step at a
/// time. The pushed stack symbol is always `(source d-state, call symbol)`.
pub trait Construction {
    type State: Clone + Debug + Eq + Hash + Ord;

    fn source(&self) -> &Vpa;
    fn initial(&self) -> Self::State;
    fn internal(&self, s: &Self::State, a: Symbol) -> Self::State;
    fn push(&self, s: &Self::State, a: Symbol) -> Self::State;
    fn pop_empty(&self, s: &Self::State, a: Symbol) -> Self::State;
    /// The summaries of well-matched segments `call · w · a` ending in `s`.
    fn update(&self, s: &Self::State, call: Symbol, a: Symbol) -> Relation;
    /// Target of a pop whose stack symbol was pushed from `origin`.
    fn pop(&self, origin: &Self::State, update: &Relation) -> Self::State;
    fn is_final(&self, s: &Self::State) -> bool;
    /// A rejecting d-state from which nothing is ever accepted.
    fn sink(&self) -> Self::State;
    fn render(&self, s: &Self::State) -> String;
}

/// Summary sets only; reachable states are read off as `Π₂(S)`.
#[derive(Clone, Copy, Debug)]
pub struct Optimized<'m>(pub &'m Vpa);

impl Construction for Optimized<'_> {
    type State = Relation;

    fn source(&self) -> &Vpa {
        self.0
    }

    fn initial(&self) -> Relation {
        Relation::identity(self.0.initial().iter().copied())
    }

    fn internal(&self, s: &Relation, a: Symbol) -> Relation {
        internal_successor(self.0, s, a)
    }

    fn push(&self, s: &Relation, a: Symbol) -> Relation {
        Relation::identity(call_image(self.0, &s.image(), a))
    }

    fn pop_empty(&self, s: &Relation, a: Symbol) -> Relation {
        pop_empty_successor(self.0, s, a)
    }

    fn update(&self, s: &Relation, call: Symbol, a: Symbol) -> Relation {
        update(self.0, s, call, a, |_| true)
    }

    fn pop(&self, origin: &Relation, update: &Relation) -> Relation {
        origin.compose(update)
    }

    fn is_final(&self, s: &Relation) -> bool {
        s.pairs().iter().any(|&(_, q)| self.0.is_final(q))
    }

    fn sink(&self) -> Relation {
        Relation::empty()
    }

    fn render(&self, s: &Relation) -> String {
        s.render(|q| self.0.state_name(q))
    }
}

/// `(S, R)` pairs with `Id_{Q0}` as initial summary and `Id_{R'}` after a
/// push; every reachable state satisfies `Π₂(S) = R`.
#[derive(Clone, Copy, Debug)]
pub struct Intermediate<'m>(pub &'m Vpa);

/// `(S, R)` pairs with `Id_Q` as summary after a push and initially.
#[derive(Clone, Copy, Debug)]
pub struct Original<'m>(pub &'m Vpa);

fn path_internal(m: &Vpa, s: &PathSummaryState, a: Symbol) -> PathSummaryState {
    PathSummaryState::new(internal_successor(m, &s.summaries, a), flat_image(m, &s.reach, a))
}

fn path_pop_empty(m: &Vpa, s: &PathSummaryState, a: Symbol) -> PathSummaryState {
    PathSummaryState::new(
        pop_empty_successor(m, &s.summaries, a),
        flat_image(m, &s.reach, a),
    )
}

fn path_pop(origin: &PathSummaryState, upd: &Relation) -> PathSummaryState {
    PathSummaryState::new(origin.summaries.compose(upd), image_of(&origin.reach, upd))
}

fn path_final(m: &Vpa, s: &PathSummaryState) -> bool {
    s.reach.iter().any(|&q| m.is_final(q))
}

fn path_render(m: &Vpa, s: &PathSummaryState) -> String {
    format!(
        "({},{})",
        s.summaries.render(|q| m.state_name(q)),
        render_set(&s.reach, |q| m.state_name(q))
    )
}

impl Construction for Intermediate<'_> {
    type State = PathSummaryState;

    fn source(&self) -> &Vpa {
        self.0
    }

    fn initial(&self) -> PathSummaryState {
        let q0 = self.0.initial().iter().copied();
        PathSummaryState::new(Relation::identity(q0.clone()), q0)
    }

    fn internal(&self, s: &PathSummaryState, a: Symbol) -> PathSummaryState {
        checked(path_internal(self.0, s, a))
    }

    fn push(&self, s: &PathSummaryState, a: Symbol) -> PathSummaryState {
        let reach = call_image(self.0, &s.reach, a);
        checked(PathSummaryState::new(
            Relation::identity(reach.iter().copied()),
            reach,
        ))
    }

    fn pop_empty(&self, s: &PathSummaryState, a: Symbol) -> PathSummaryState {
        checked(path_pop_empty(self.0, s, a))
    }

    fn update(&self, s: &PathSummaryState, call: Symbol, a: Symbol) -> Relation {
        update(self.0, &s.summaries, call, a, |_| true)
    }

    fn pop(&self, origin: &PathSummaryState, update: &Relation) -> PathSummaryState {
        checked(path_pop(origin, update))
    }

    fn is_final(&self, s: &PathSummaryState) -> bool {
        path_final(self.0, s)
    }

    fn sink(&self) -> PathSummaryState {
        PathSummaryState::new(Relation::empty(), [])
    }

    fn render(&self, s: &PathSummaryState) -> String {
        path_render(self.0, s)
    }
}

fn checked(s: PathSummaryState) -> PathSummaryState {
    debug_assert_eq!(s.summaries.image(), s.reach, "projection of S differs from R");
    s
}

impl Construction for Original<'_> {
    type State = PathSummaryState;

    fn source(&self) -> &Vpa {
        self.0
    }

    fn initial(&self) -> PathSummaryState {
        PathSummaryState::new(
            Relation::identity(self.0.states()),
            self.0.initial().iter().copied(),
        )
    }

    fn internal(&self, s: &PathSummaryState, a: Symbol) -> PathSummaryState {
        path_internal(self.0, s, a)
    }

    fn push(&self, s: &PathSummaryState, a: Symbol) -> PathSummaryState {
        PathSummaryState::new(
            Relation::identity(self.0.states()),
            call_image(self.0, &s.reach, a),
        )
    }

    fn pop_empty(&self, s: &PathSummaryState, a: Symbol) -> PathSummaryState {
        path_pop_empty(self.0, s, a)
    }

    fn update(&self, s: &PathSummaryState, call: Symbol, a: Symbol) -> Relation {
        update(self.0, &s.summaries, call, a, |q2| {
            s.reach.binary_search(&q2).is_ok()
        })
    }

    fn pop(&self, origin: &PathSummaryState, update: &Relation) -> PathSummaryState {
        path_pop(origin, update)
    }

    fn is_final(&self, s: &PathSummaryState) -> bool {
        path_final(self.0, s)
    }

    fn sink(&self) -> PathSummaryState {
        PathSummaryState::new(Relation::empty(), [])
    }

    fn render(&self, s: &PathSummaryState) -> String {
        path_render(self.0, s)
    }
}

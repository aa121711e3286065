use crate::determinize::{DetSpace, Optimized};
use crate::model::{StackSym, StateId, Vpa};
use crate::preach::{LabeledRule, LazySystem, PdsRule};

use crate::determinize::SpaceInterner as Interner;

/// `A × det(B)`, with `det(B)` built on demand. A product state is a
/// pair (A state, B d-state); it is a target when A accepts and the
/// d-state rejects.
pub(crate) struct ProductSystem<'a, 'b> {
    a: &'a Vpa,
    pub(crate) b: DetSpace<Optimized<'b>>,
    states: Interner<(StateId, StateId)>,
    stack: Interner<(StackSym, StackSym)>,
}

impl<'a, 'b> ProductSystem<'a, 'b> {
    pub fn new(a: &'a Vpa, b: &'b Vpa) -> Self {
        ProductSystem {
            a,
            b: {
                let mut space = DetSpace::new(Optimized(b));
                space.memo_pops = true;
                space
            },
            states: Interner::new(),
            stack: Interner::new(),
        }
    }

    fn state(&mut self, qa: StateId, sb: StateId) -> StateId {
        StateId(self.states.intern((qa, sb)))
    }
}

impl LazySystem for ProductSystem<'_, '_> {
    fn initial_states(&mut self) -> Vec<StateId> {
        let sb = self.b.initial();
        let a = self.a;
        a.initial().iter().map(|&qa| self.state(qa, sb)).collect()
    }

    fn state_rules(&mut self, s: StateId, out: &mut Vec<LabeledRule>) {
        let (qa, sb) = *self.states.get(s.0);
        let a = self.a;
        for i in 0..self.b.internals().len() {
            let sym = self.b.internals()[i];
            let targets = a.internal_targets(qa, sym);
            if targets.is_empty() {
                continue;
            }
            let tb = self.b.internal_succ(sb, sym);
            for &ta in targets {
                let to = self.state(ta, tb);
                out.push(LabeledRule {
                    symbol: sym,
                    rule: PdsRule::Internal { from: s, to },
                });
            }
        }
        for i in 0..self.b.calls().len() {
            let sym = self.b.calls()[i];
            let targets = a.call_targets(qa, sym);
            if targets.is_empty() {
                continue;
            }
            let (tb, gb) = self.b.push_succ(sb, sym);
            for &(ta, ga) in targets {
                let to = self.state(ta, tb);
                let push = StackSym(self.stack.intern((ga, gb)) + 1);
                out.push(LabeledRule {
                    symbol: sym,
                    rule: PdsRule::Push { from: s, to, push },
                });
            }
        }
    }

    fn pop_rules(&mut self, s: StateId, top: StackSym, out: &mut Vec<LabeledRule>) {
        let (qa, sb) = *self.states.get(s.0);
        let (ga, gb) = if top.is_bottom() {
            (StackSym::BOTTOM, StackSym::BOTTOM)
        } else {
            *self.stack.get(top.0 - 1)
        };
        let a = self.a;
        for i in 0..self.b.returns().len() {
            let sym = self.b.returns()[i];
            let targets = a.return_targets(qa, sym, ga);
            if targets.is_empty() {
                continue;
            }
            let tb = self.b.pop_succ(sb, gb, sym);
            for &ta in targets {
                let to = self.state(ta, tb);
                out.push(LabeledRule {
                    symbol: sym,
                    rule: PdsRule::Pop { from: s, top, to },
                });
            }
        }
    }

    fn is_target(&self, s: StateId) -> bool {
        let (qa, sb) = *self.states.get(s.0);
        self.a.is_final(qa) && !self.b.is_final(sb)
    }
}

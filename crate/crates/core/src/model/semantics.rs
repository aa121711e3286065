use std::collections::BTreeSet;

use super::{ModelError, StackSym, StateId, Symbol, SymbolClass, Vpa, Word};

/// A control state together with the explicit stack, topmost symbol first.
/// The bottom marker is implicit and never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<StackSym>,
}

impl Configuration {
    pub fn new(state: StateId, stack: Vec<StackSym>) -> Self {
        debug_assert!(stack.iter().all(|g| !g.is_bottom()));
        Configuration { state, stack }
    }

    /// Top of stack, the bottom marker when the explicit stack is empty.
    pub fn top(&self) -> StackSym {
        self.stack.first().copied().unwrap_or(StackSym::BOTTOM)
    }
}

/// `(q0, empty stack)` for every initial state.
pub fn initial_configurations(m: &Vpa) -> BTreeSet<Configuration> {
    m.initial()
        .iter()
        .map(|&q| Configuration::new(q, Vec::new()))
        .collect()
}

/// All configurations reachable from `c` by reading `a`.
pub fn step(m: &Vpa, c: &Configuration, a: Symbol) -> Result<BTreeSet<Configuration>, ModelError> {
    let class = m.alphabet().class(a).ok_or(ModelError::SymbolOutOfRange(a.0))?;
    if c.state.index() >= m.num_states() {
        return Err(ModelError::StateOutOfRange(c.state.0));
    }
    let mut out = BTreeSet::new();
    match class {
        SymbolClass::Call => {
            for &(q, g) in m.call_targets(c.state, a) {
                let mut stack = Vec::with_capacity(c.stack.len() + 1);
                stack.push(g);
                stack.extend_from_slice(&c.stack);
                out.insert(Configuration::new(q, stack));
            }
        }
        SymbolClass::Internal => {
            for &q in m.internal_targets(c.state, a) {
                out.insert(Configuration::new(q, c.stack.clone()));
            }
        }
        SymbolClass::Return => match c.stack.split_first() {
            Some((&top, rest)) => {
                for &q in m.return_targets(c.state, a, top) {
                    out.insert(Configuration::new(q, rest.to_vec()));
                }
            }
            None => {
                // bottom is read but not popped
                for &q in m.return_targets(c.state, a, StackSym::BOTTOM) {
                    out.insert(Configuration::new(q, Vec::new()));
                }
            }
        },
    }
    Ok(out)
}

/// Whether some run from an initial configuration reads `w` and ends in a
/// final state. Stack contents at the end do not matter.
pub fn accepts(m: &Vpa, w: &[Symbol]) -> Result<bool, ModelError> {
    let runner = Runner::new(m);
    let mut set = runner.start();
    for &a in w {
        set = runner.advance(&set, a)?;
        if set.is_empty() {
            return Ok(false);
        }
    }
    Ok(runner.accepting(&set))
}

/// Every accepted word of length at most `max_len`.
///
/// Explores the tree of prefixes depth first, carrying the set of
/// configurations reached so far and pruning prefixes with no run.
pub fn enumerate_language(m: &Vpa, max_len: usize) -> BTreeSet<Word> {
    let runner = Runner::new(m);
    let symbols: Vec<Symbol> = m.alphabet().symbols().collect();
    let mut out = BTreeSet::new();
    let mut prefix = Vec::with_capacity(max_len);
    fn walk(
        runner: &Runner<'_>,
        symbols: &[Symbol],
        set: &ConfigSet,
        prefix: &mut Word,
        max_len: usize,
        out: &mut BTreeSet<Word>,
    ) {
        if runner.accepting(set) {
            out.insert(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        for &a in symbols {
            let next = runner.advance_known(set, a);
            if next.is_empty() {
                continue;
            }
            prefix.push(a);
            walk(runner, symbols, &next, prefix, max_len, out);
            prefix.pop();
        }
    }
    walk(&runner, &symbols, &runner.start(), &mut prefix, max_len, &mut out);
    out
}

/// Sorted, deduplicated set of configurations. Stacks are stored bottom
/// first here so pushes and pops touch the end of the vector.
pub type ConfigSet = Vec<(StateId, Vec<StackSym>)>;

/// Forward simulation of a VPA on sets of configurations.
#[derive(Clone, Copy, Debug)]
pub struct Runner<'m> {
    m: &'m Vpa,
}

impl<'m> Runner<'m> {
    pub fn new(m: &'m Vpa) -> Self {
        Runner { m }
    }

    pub fn start(&self) -> ConfigSet {
        self.m.initial().iter().map(|&q| (q, Vec::new())).collect()
    }

    pub fn accepting(&self, set: &ConfigSet) -> bool {
        set.iter().any(|(q, _)| self.m.is_final(*q))
    }

    pub fn advance(&self, set: &ConfigSet, a: Symbol) -> Result<ConfigSet, ModelError> {
        if !self.m.alphabet().contains(a) {
            return Err(ModelError::SymbolOutOfRange(a.0));
        }
        Ok(self.advance_known(set, a))
    }

    fn advance_known(&self, set: &ConfigSet, a: Symbol) -> ConfigSet {
        let m = self.m;
        let mut out = Vec::new();
        match m.alphabet().class(a).expect("symbol checked by caller") {
            SymbolClass::Call => {
                for (q, stack) in set {
                    for &(t, g) in m.call_targets(*q, a) {
                        let mut s = stack.clone();
                        s.push(g);
                        out.push((t, s));
                    }
                }
            }
            SymbolClass::Internal => {
                for (q, stack) in set {
                    for &t in m.internal_targets(*q, a) {
                        out.push((t, stack.clone()));
                    }
                }
            }
            SymbolClass::Return => {
                for (q, stack) in set {
                    let top = stack.last().copied().unwrap_or(StackSym::BOTTOM);
                    let rest = &stack[..stack.len().saturating_sub(1)];
                    for &t in m.return_targets(*q, a, top) {
                        out.push((t, rest.to_vec()));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{v0, v1, vu};

    fn word(m: &Vpa, s: &str) -> Word {
        m.alphabet().parse_word(s).unwrap()
    }

    fn sym(m: &Vpa, s: &str) -> Symbol {
        m.alphabet().lookup(s).unwrap()
    }

    #[test]
    fn step_examples() {
        let m = v1();
        let q0 = StateId(0);
        let g = m.stack_by_name("g").unwrap();
        let empty = Configuration::new(q0, vec![]);
        let after_a = step(&m, &empty, sym(&m, "a")).unwrap();
        assert_eq!(after_a, BTreeSet::from([Configuration::new(q0, vec![g])]));
        assert!(step(&m, &empty, sym(&m, "c")).unwrap().is_empty());
        let u = vu();
        assert_eq!(
            step(&u, &empty, sym(&u, "c")).unwrap(),
            BTreeSet::from([empty.clone()])
        );
        assert_eq!(step(&m, &empty, Symbol(9)), Err(ModelError::SymbolOutOfRange(9)));
    }

    #[test]
    fn accepts_examples() {
        let m = v1();
        assert!(!accepts(&m, &word(&m, "ca")).unwrap());
        assert!(accepts(&m, &word(&m, "aacb")).unwrap());
        assert!(!accepts(&v0(), &[]).unwrap());
        assert!(accepts(&m, &[Symbol(7)]).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let m = v1();
        let lang = enumerate_language(&m, 1);
        let expect: BTreeSet<Word> = ["", "a", "b"].iter().map(|s| word(&m, s)).collect();
        assert_eq!(lang, expect);
        assert!(enumerate_language(&v0(), 5).is_empty());
        assert_eq!(enumerate_language(&vu(), 2).len(), 13);
    }

    #[test]
    fn stack_height_changes_by_class() {
        let m = vu();
        let g = m.stack_by_name("g").unwrap();
        let c = Configuration::new(StateId(0), vec![g, g]);
        for (s, delta) in [("a", 1i64), ("b", 0), ("c", -1)] {
            for next in step(&m, &c, sym(&m, s)).unwrap() {
                assert_eq!(next.stack.len() as i64 - 2, delta);
                assert!(next.stack.iter().all(|g| !g.is_bottom()));
            }
        }
    }
}

//! Reference implementations used as test oracles. They work on the rule
//! lists directly and share no code with the saturation or determinization
//! modules.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use vpa_core::model::{step, Configuration, StackSym, StateId, Vpa};
use vpa_core::randgen::{generate_random1, generate_random2};

/// Pairs `(p, q)` such that some well-matched word leads from `p` to `q`.
pub fn summaries(m: &Vpa) -> BTreeSet<(StateId, StateId)> {
    let mut sum: BTreeSet<(StateId, StateId)> = m.states().map(|q| (q, q)).collect();
    loop {
        let mut next = sum.clone();
        for &(p, q) in &sum {
            for r in m.internal_rules().iter().filter(|r| r.from == q) {
                next.insert((p, r.to));
            }
            for c in m.call_rules().iter().filter(|c| c.from == q) {
                for &(q1, q2) in &sum {
                    if q1 != c.to {
                        continue;
                    }
                    for r in m
                        .return_rules()
                        .iter()
                        .filter(|r| r.from == q2 && r.pop == c.push)
                    {
                        next.insert((p, r.to));
                    }
                }
            }
        }
        if next == sum {
            return sum;
        }
        sum = next;
    }
}

/// Every reachable configuration whose explicit stack has at most `h`
/// symbols. Calls made at height `h` are only followed through to their
/// matching return, using [`summaries`].
pub fn reachable_bounded(m: &Vpa, h: usize) -> BTreeSet<Configuration> {
    let sum = summaries(m);
    let symbols: Vec<_> = m.alphabet().symbols().collect();
    let mut seen: BTreeSet<Configuration> = m
        .initial()
        .iter()
        .map(|&q| Configuration::new(q, Vec::new()))
        .collect();
    let mut queue: VecDeque<Configuration> = seen.iter().cloned().collect();
    while let Some(c) = queue.pop_front() {
        let mut next = Vec::new();
        for &a in &symbols {
            for d in step(m, &c, a).unwrap() {
                if d.stack.len() <= h {
                    next.push(d);
                }
            }
        }
        for call in m.call_rules().iter().filter(|r| r.from == c.state) {
            for &(q1, q2) in &sum {
                if q1 != call.to {
                    continue;
                }
                for r in m
                    .return_rules()
                    .iter()
                    .filter(|r| r.from == q2 && r.pop == call.push)
                {
                    next.push(Configuration::new(r.to, c.stack.clone()));
                }
            }
        }
        for d in next {
            if seen.insert(d.clone()) {
                queue.push_back(d);
            }
        }
    }
    seen
}

/// Control states occurring in some reachable configuration.
pub fn reachable_states(m: &Vpa) -> BTreeSet<StateId> {
    let sum = summaries(m);
    let close = |start: BTreeSet<StateId>, with_bottom: bool, with_calls: bool| {
        let mut seen = start;
        loop {
            let mut next = seen.clone();
            for &q in &seen {
                next.extend(sum.iter().filter(|(p, _)| *p == q).map(|&(_, t)| t));
                for c in m.call_rules().iter().filter(|c| c.from == q) {
                    if with_calls {
                        next.insert(c.to);
                    }
                    for &(q1, q2) in &sum {
                        if q1 == c.to {
                            let rets = m.return_rules().iter();
                            next.extend(rets.filter(|r| r.from == q2 && r.pop == c.push).map(|r| r.to));
                        }
                    }
                }
                if with_bottom {
                    let rets = m.return_rules().iter();
                    next.extend(rets.filter(|r| r.from == q && r.pop.is_bottom()).map(|r| r.to));
                }
            }
            if next == seen {
                return seen;
            }
            seen = next;
        }
    };
    // with an empty stack first, where bottom returns apply; once a call
    // stays pending the stack never empties again
    let level0 = close(m.initial().iter().copied().collect(), true, false);
    close(level0, false, true)
}

/// Stacks over the explicit symbols of `m` with at most `h` symbols.
pub fn stacks_up_to(m: &Vpa, h: usize) -> Vec<Vec<StackSym>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..h {
        let mut next = Vec::new();
        for s in &layer {
            for g in m.stack_symbols().filter(|g| !g.is_bottom()) {
                let mut t = s.clone();
                t.push(g);
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Number of words of length at most `len` over `k` symbols.
pub fn words_up_to(k: usize, len: usize) -> usize {
    (0..=len).map(|i| k.pow(i as u32)).sum()
}

/// A seeded mix of small random-1 and random-2 instances.
pub fn small_corpus(count: u64, max_n: usize) -> Vec<Vpa> {
    (0..count)
        .map(|i| {
            let n = 2 + (i as usize / 2) % (max_n - 1);
            if i % 2 == 0 {
                generate_random1(n, i).unwrap()
            } else {
                generate_random2(n, 0.5, i).unwrap()
            }
        })
        .collect()
}

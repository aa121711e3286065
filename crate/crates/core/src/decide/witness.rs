//! Shortest-counterexample search by breadth-first simulation.

use rustc_hash::FxHashSet as HashSet;
use std::collections::VecDeque;

use crate::limits::Budget;
use crate::model::{ConfigSet, Runner, Symbol, Vpa, Word};

/// Cap on distinct search nodes, to bound memory.
const MAX_NODES: usize = 200_000;

/// Shortest word of length at most `bound` that `a` accepts and `b`
/// rejects. With `a = None` every word counts as accepted on that side.
pub(crate) fn search(a: Option<&Vpa>, b: &Vpa, bound: usize, budget: &mut Budget) -> Option<Word> {
    let ra = a.map(Runner::new);
    let rb = Runner::new(b);
    let symbols: Vec<Symbol> = b.alphabet().symbols().collect();
    type Node = (Option<ConfigSet>, ConfigSet);
    let start: Node = (ra.map(|r| r.start()), rb.start());
    let is_witness =
        |n: &Node| n.0.as_ref().zip(ra).is_none_or(|(s, r)| r.accepting(s)) && !rb.accepting(&n.1);
    if is_witness(&start) {
        return Some(Vec::new());
    }
    let mut seen: HashSet<Node> = [start.clone()].into_iter().collect();
    let mut nodes: Vec<(usize, Symbol)> = vec![(usize::MAX, Symbol(0))];
    let mut queue = VecDeque::from([(0usize, 0usize, start)]);
    while let Some((id, depth, (sa, sb))) = queue.pop_front() {
        if depth == bound {
            continue;
        }
        for &x in &symbols {
            budget.tick().ok()?;
            let na = match (&sa, ra) {
                (Some(s), Some(r)) => {
                    let n = r.advance(s, x).expect("symbol of the alphabet");
                    if n.is_empty() {
                        continue;
                    }
                    Some(n)
                }
                _ => None,
            };
            let nb = rb.advance(&sb, x).expect("symbol of the alphabet");
            let node = (na, nb);
            if seen.contains(&node) {
                continue;
            }
            nodes.push((id, x));
            let nid = nodes.len() - 1;
            if is_witness(&node) {
                return Some(spell(&nodes, nid));
            }
            if seen.len() >= MAX_NODES {
                return None;
            }
            seen.insert(node.clone());
            queue.push_back((nid, depth + 1, node));
        }
    }
    None
}

fn spell(nodes: &[(usize, Symbol)], mut id: usize) -> Word {
    let mut w = Vec::new();
    while id != 0 {
        let (parent, x) = nodes[id];
        w.push(x);
        id = parent;
    }
    w.reverse();
    w
}

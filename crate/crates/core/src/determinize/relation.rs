use std::fmt::Write as _;

use crate::model::StateId;

/// A binary relation over source states, kept as a sorted, duplicate-free
/// pair list so equal relations compare and hash equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation(Vec<(StateId, StateId)>);

impl Relation {
    pub fn empty() -> Self {
        Relation(Vec::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (StateId, StateId)>) -> Self {
        let mut v: Vec<_> = pairs.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Relation(v)
    }

    /// Consumes an already sorted, deduplicated list.
    fn from_sorted(v: Vec<(StateId, StateId)>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Relation(v)
    }

    /// `{(q, q) : q ∈ states}`.
    pub fn identity(states: impl IntoIterator<Item = StateId>) -> Self {
        Relation::from_pairs(states.into_iter().map(|q| (q, q)))
    }

    pub fn pairs(&self) -> &[(StateId, StateId)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: StateId, q: StateId) -> bool {
        self.0.binary_search(&(p, q)).is_ok()
    }

    /// Projection on the second component, sorted.
    pub fn image(&self) -> Vec<StateId> {
        let mut v: Vec<StateId> = self.0.iter().map(|&(_, q)| q).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Pairs whose first component is `p`.
    pub fn row(&self, p: StateId) -> &[(StateId, StateId)] {
        let lo = self.0.partition_point(|&(x, _)| x < p);
        let hi = self.0.partition_point(|&(x, _)| x <= p);
        &self.0[lo..hi]
    }

    /// `self ; other = {(p, r) : ∃q. (p, q) ∈ self, (q, r) ∈ other}`.
    pub fn compose(&self, other: &Relation) -> Relation {
        if self.is_empty() || other.is_empty() {
            return Relation::empty();
        }
        let mut out = Vec::new();
        let mut row = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i].0;
            while i < self.0.len() && self.0[i].0 == p {
                row.extend(other.row(self.0[i].1).iter().map(|&(_, r)| (p, r)));
                i += 1;
            }
            row.sort_unstable();
            row.dedup();
            out.append(&mut row);
        }
        Relation::from_sorted(out)
    }

    /// Canonical set literal such as `{(q0,q0),(q0,q1)}`.
    pub fn render<'a>(&self, name: impl Fn(StateId) -> &'a str) -> String {
        let mut s = String::from("{");
        for (i, &(p, q)) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "({},{})", name(p), name(q));
        }
        s.push('}');
        s
    }
}

pub(crate) fn render_set<'a>(states: &[StateId], name: impl Fn(StateId) -> &'a str) -> String {
    let names: Vec<&str> = states.iter().map(|&q| name(q)).collect();
    format!("{{{}}}", names.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(pairs: &[(u32, u32)]) -> Relation {
        Relation::from_pairs(pairs.iter().map(|&(a, b)| (StateId(a), StateId(b))))
    }

    #[test]
    fn identity_examples() {
        assert!(Relation::identity([]).is_empty());
        assert_eq!(Relation::identity([StateId(0)]), r(&[(0, 0)]));
        assert_eq!(Relation::identity([StateId(1), StateId(0)]), r(&[(0, 0), (1, 1)]));
    }

    #[test]
    fn compose_against_naive() {
        let a = r(&[(0, 1), (0, 2), (1, 0), (2, 2)]);
        let b = r(&[(1, 3), (2, 3), (2, 0), (0, 1)]);
        let mut naive = Vec::new();
        for &(p, q) in a.pairs() {
            for &(q2, s) in b.pairs() {
                if q == q2 {
                    naive.push((p, s));
                }
            }
        }
        assert_eq!(a.compose(&b), Relation::from_pairs(naive));
        assert!(a.compose(&Relation::empty()).is_empty());
    }

    #[test]
    fn image_and_render() {
        let a = r(&[(0, 2), (1, 0), (1, 2)]);
        assert_eq!(a.image(), vec![StateId(0), StateId(2)]);
        let names = ["q0", "q1", "q2"];
        assert_eq!(a.render(|q| names[q.index()]), "{(q0,q2),(q1,q0),(q1,q2)}");
        assert_eq!(Relation::empty().render(|q| names[q.index()]), "{}");
    }
}

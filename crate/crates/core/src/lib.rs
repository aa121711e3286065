//! Visibly pushdown automata: determinization, post* reachability, and
//! universality/inclusion checking.

pub mod decide;
pub mod determinize;
pub mod limits;
pub mod model;
pub mod preach;
pub mod randgen;

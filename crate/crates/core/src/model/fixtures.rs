//! Small reference automata over `calls = {a}`, `returns = {c}`,
//! `internals = {b}` with one stack symbol `g`.

use super::{Alphabet, Vpa, VpaBuilder};

pub fn abc_alphabet() -> Alphabet {
    Alphabet::new(["a"], ["c"], ["b"]).expect("valid alphabet")
}

fn base() -> VpaBuilder {
    let mut b = VpaBuilder::new(abc_alphabet());
    b.state("q0")
        .stack_symbol("g")
        .initial("q0")
        .call("q0", "a", "q0", "g")
        .ret("q0", "c", "g", "q0")
        .internal("q0", "b", "q0");
    b
}

/// Accepts words in which no prefix has more `c` than `a`.
pub fn v1() -> Vpa {
    base().final_state("q0").build().expect("valid fixture")
}

/// [`v1`] plus a bottom-of-stack return rule; accepts every word.
pub fn vu() -> Vpa {
    base()
        .final_state("q0")
        .ret("q0", "c", "BOT", "q0")
        .build()
        .expect("valid fixture")
}

/// [`v1`] with no final states; accepts nothing.
pub fn v0() -> Vpa {
    base().build().expect("valid fixture")
}

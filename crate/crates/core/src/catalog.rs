//! Small machines used throughout the documentation, tests and CLI examples.

use crate::machine::{Machine, RawMachine, StateId};
use crate::words::{Alphabet, Letter};

/// Two-state invertible machine over `{0,1}`.
pub fn v12_raw() -> RawMachine {
    RawMachine::new("V12")
        .states(["q0", "q1"])
        .inputs(["0", "1"])
        .outputs(["0", "1"])
        .row("q0", "0", "q1", "1")
        .row("q0", "1", "q0", "0")
        .row("q1", "0", "q1", "0")
        .row("q1", "1", "q0", "1")
}

pub fn v12() -> Machine {
    v12_raw().validate().expect("V12 is well formed")
}

/// The inverse of [`v12`], written out by hand.
pub fn v12_inverse() -> Machine {
    RawMachine::new("V12'")
        .states(["q0", "q1"])
        .inputs(["0", "1"])
        .outputs(["0", "1"])
        .row("q0", "0", "q0", "1")
        .row("q0", "1", "q1", "0")
        .row("q1", "0", "q1", "0")
        .row("q1", "1", "q0", "1")
        .validate()
        .expect("V12' is well formed")
}

/// `q∘a = q+a mod 2`, `q*a = q·a mod 2` over states `{0,1}`.
pub fn v11() -> Machine {
    Machine::from_fn(
        "V11",
        vec!["0".into(), "1".into()],
        Alphabet::binary(),
        Alphabet::binary(),
        |q, a| (StateId((q.0 + a.0) % 2), Letter(q.0 * a.0 % 2)),
    )
    .expect("V11 is well formed")
}

/// Generators of the Klein four-group: `p` complements every letter and
/// stays in `p`; `q` copies the letter and moves to `p`.
pub fn v20() -> Machine {
    RawMachine::new("V20")
        .states(["p", "q"])
        .inputs(["0", "1"])
        .outputs(["0", "1"])
        .row("p", "0", "p", "1")
        .row("p", "1", "p", "0")
        .row("q", "0", "p", "0")
        .row("q", "1", "p", "1")
        .validate()
        .expect("V20 is well formed")
}

/// Binary adding machine: `s` adds one to a little-endian binary number.
pub fn odometer() -> Machine {
    RawMachine::new("odometer")
        .states(["s", "e"])
        .inputs(["0", "1"])
        .outputs(["0", "1"])
        .row("s", "0", "e", "1")
        .row("s", "1", "s", "0")
        .row("e", "0", "e", "0")
        .row("e", "1", "e", "1")
        .validate()
        .expect("odometer is well formed")
}

/// Identity machine with `n` interchangeable states arranged in a cycle.
pub fn redundant_identity(alphabet: Alphabet, n: usize) -> Machine {
    let names = (0..n).map(|i| format!("e{i}")).collect();
    Machine::from_fn("I", names, alphabet.clone(), alphabet, |q, a| {
        (StateId((q.0 + 1) % n as u32), a)
    })
    .expect("identity machine is well formed")
}

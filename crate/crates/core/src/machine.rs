//! Mealy machines `⟨Q, A, B, ∘, *⟩` and their extension to words.
//!
//! States and symbols are stored as ordinals in declaration order, and every
//! table is a dense `|Q|·|A|` array indexed by `q·|A| + a`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::words::{Alphabet, Letter, UltimatelyPeriodicWord, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("missing transition for state `{state}` on input `{input}`")]
    MissingTransition { state: String, input: String },
    #[error("duplicate transition for state `{state}` on input `{input}`")]
    DuplicateTransition { state: String, input: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("{0} alphabet is empty")]
    EmptyAlphabet(&'static str),
    #[error("machine has no states")]
    NoStates,
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Ordinal of a state in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Unvalidated machine description, as read from a file or built by hand.
#[derive(Debug, Clone, Default)]
pub struct RawMachine {
    pub name: String,
    pub states: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// `(state, input, target, output)` rows.
    pub rows: Vec<(String, String, String, String)>,
}

impl RawMachine {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn states<S: Into<String>>(mut self, states: impl IntoIterator<Item = S>) -> Self {
        self.states = states.into_iter().map(Into::into).collect();
        self
    }

    pub fn inputs<S: Into<String>>(mut self, symbols: impl IntoIterator<Item = S>) -> Self {
        self.inputs = symbols.into_iter().map(Into::into).collect();
        self
    }

    pub fn outputs<S: Into<String>>(mut self, symbols: impl IntoIterator<Item = S>) -> Self {
        self.outputs = symbols.into_iter().map(Into::into).collect();
        self
    }

    pub fn row(mut self, state: &str, input: &str, target: &str, output: &str) -> Self {
        self.rows
            .push((state.into(), input.into(), target.into(), output.into()));
        self
    }

    /// Checks totality and membership and builds the dense tables.
    pub fn validate(&self) -> Result<Machine, MachineError> {
        if self.inputs.is_empty() {
            return Err(MachineError::EmptyAlphabet("input"));
        }
        if self.outputs.is_empty() {
            return Err(MachineError::EmptyAlphabet("output"));
        }
        if self.states.is_empty() {
            return Err(MachineError::NoStates);
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(MachineError::DuplicateState(s.clone()));
            }
        }
        let input = Alphabet::new(self.inputs.iter().cloned())?;
        let output = Alphabet::new(self.outputs.iter().cloned())?;
        let state_of = |name: &str| {
            self.states
                .iter()
                .position(|s| s == name)
                .map(|i| StateId(i as u32))
                .ok_or_else(|| MachineError::UnknownState(name.to_string()))
        };
        let width = input.len();
        let mut next: Vec<Option<StateId>> = vec![None; self.states.len() * width];
        let mut emit = vec![Letter(0); self.states.len() * width];
        for (q, a, t, b) in &self.rows {
            let q = state_of(q)?;
            let a_letter = input
                .letter(a)
                .ok_or_else(|| MachineError::UnknownSymbol(a.clone()))?;
            let t = state_of(t)?;
            let b = output
                .letter(b)
                .ok_or_else(|| MachineError::UnknownSymbol(b.clone()))?;
            let slot = q.index() * width + a_letter.index();
            if next[slot].is_some() {
                return Err(MachineError::DuplicateTransition {
                    state: self.states[q.index()].clone(),
                    input: a.clone(),
                });
            }
            next[slot] = Some(t);
            emit[slot] = b;
        }
        let next = next
            .into_iter()
            .enumerate()
            .map(|(slot, t)| {
                t.ok_or_else(|| MachineError::MissingTransition {
                    state: self.states[slot / width].clone(),
                    input: input.symbol(Letter((slot % width) as u32)).to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Machine {
            name: self.name.clone(),
            states: self.states.clone(),
            input,
            output,
            next,
            emit,
        })
    }
}

/// A validated Mealy machine with total transition and output maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Machine {
    name: String,
    states: Vec<String>,
    input: Alphabet,
    output: Alphabet,
    next: Vec<StateId>,
    emit: Vec<Letter>,
}

impl Machine {
    /// Builds a machine from a closure giving `(q∘a, q*a)` for every pair.
    pub fn from_fn<F>(
        name: impl Into<String>,
        states: Vec<String>,
        input: Alphabet,
        output: Alphabet,
        mut f: F,
    ) -> Result<Self, MachineError>
    where
        F: FnMut(StateId, Letter) -> (StateId, Letter),
    {
        if states.is_empty() {
            return Err(MachineError::NoStates);
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(MachineError::DuplicateState(s.clone()));
            }
        }
        let n = states.len();
        let mut next = Vec::with_capacity(n * input.len());
        let mut emit = Vec::with_capacity(n * input.len());
        for q in 0..n as u32 {
            for a in input.letters() {
                let (t, b) = f(StateId(q), a);
                if t.index() >= n {
                    return Err(MachineError::UnknownState(format!("#{}", t.0)));
                }
                if !output.contains(b) {
                    return Err(MachineError::UnknownSymbol(format!("#{}", b.0)));
                }
                next.push(t);
                emit.push(b);
            }
        }
        Ok(Self {
            name: name.into(),
            states,
            input,
            output,
            next,
            emit,
        })
    }

    /// The one-state machine acting as the identity on `alphabet`.
    pub fn identity(alphabet: Alphabet) -> Self {
        Self::from_fn("I", vec!["e".into()], alphabet.clone(), alphabet, |q, a| {
            (q, a)
        })
        .expect("identity machine is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.index()]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u32))
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + Clone {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    /// True when input and output alphabets coincide (same symbols, same order).
    pub fn is_endomorphic(&self) -> bool {
        self.input == self.output
    }

    /// `q∘a` without bounds reporting; panics on foreign ordinals.
    #[inline]
    pub fn next(&self, q: StateId, a: Letter) -> StateId {
        self.next[q.index() * self.input.len() + a.index()]
    }

    /// `q*a` without bounds reporting; panics on foreign ordinals.
    #[inline]
    pub fn out(&self, q: StateId, a: Letter) -> Letter {
        self.emit[q.index() * self.input.len() + a.index()]
    }

    pub fn step(&self, q: StateId, a: Letter) -> Result<(StateId, Letter), MachineError> {
        self.check_state(q)?;
        self.check_input(a)?;
        Ok((self.next(q, a), self.out(q, a)))
    }

    /// `(q∘u, q*u)`.
    pub fn run_from(&self, q: StateId, u: &[Letter]) -> Result<(StateId, Word), MachineError> {
        self.check_state(q)?;
        let mut state = q;
        let mut out = Vec::with_capacity(u.len());
        for &a in u {
            self.check_input(a)?;
            out.push(self.out(state, a));
            state = self.next(state, a);
        }
        Ok((state, out.into()))
    }

    /// Whether every output symbol occurs as some `q*a`.
    pub fn is_output_surjective(&self) -> bool {
        let mut seen = vec![false; self.output.len()];
        for b in &self.emit {
            seen[b.index()] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Transition rows `(q, a, q∘a, q*a)` in declaration order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Letter, StateId, Letter)> + '_ {
        self.states().flat_map(move |q| {
            self.input
                .letters()
                .map(move |a| (q, a, self.next(q, a), self.out(q, a)))
        })
    }

    fn check_state(&self, q: StateId) -> Result<(), MachineError> {
        if q.index() < self.states.len() {
            Ok(())
        } else {
            Err(MachineError::UnknownState(format!("#{}", q.0)))
        }
    }

    fn check_input(&self, a: Letter) -> Result<(), MachineError> {
        if self.input.contains(a) {
            Ok(())
        } else {
            Err(MachineError::UnknownSymbol(format!("#{}", a.0)))
        }
    }

    /// Breadth-first order of the states reachable from `start`, arcs taken in alphabet order.
    pub fn bfs_order(&self, start: StateId) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        seen[start.index()] = true;
        while let Some(q) = queue.pop_front() {
            for a in self.input.letters() {
                let t = self.next(q, a);
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        order
    }

    pub fn at(self, start: StateId) -> Result<InitialMachine, MachineError> {
        InitialMachine::new(self, start)
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} states, {} → {} symbols)",
            self.name,
            self.states.len(),
            self.input.len(),
            self.output.len()
        )
    }
}

/// A machine with a designated start state; denotes `u ↦ q₀*u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InitialMachine {
    machine: Machine,
    start: StateId,
}

impl InitialMachine {
    pub fn new(machine: Machine, start: StateId) -> Result<Self, MachineError> {
        machine.check_state(start)?;
        Ok(Self { machine, start })
    }

    pub fn by_name(machine: Machine, start: &str) -> Result<Self, MachineError> {
        let q = machine
            .state(start)
            .ok_or_else(|| MachineError::UnknownState(start.to_string()))?;
        Ok(Self { machine, start: q })
    }

    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn into_machine(self) -> Machine {
        self.machine
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    /// `(q₀∘u, q₀*u)`.
    pub fn run(&self, u: &[Letter]) -> Result<(StateId, Word), MachineError> {
        self.machine.run_from(self.start, u)
    }

    /// The output word `q₀*u`.
    pub fn apply(&self, u: &[Letter]) -> Result<Word, MachineError> {
        self.run(u).map(|(_, w)| w)
    }

    /// The first `n` output symbols on the infinite input `x`.
    pub fn run_up(&self, x: &UltimatelyPeriodicWord, n: usize) -> Result<Word, MachineError> {
        self.apply(&x.prefix(n))
    }

    pub fn reachable_states(&self) -> BTreeSet<StateId> {
        self.machine.bfs_order(self.start).into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn bin(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    #[test]
    fn v12_validates() {
        let m = catalog::v12_raw().validate().unwrap();
        assert_eq!(m.num_states(), 2);
        assert!(m.is_output_surjective());
    }

    #[test]
    fn missing_row_is_reported() {
        let mut raw = catalog::v12_raw();
        raw.rows.retain(|(q, a, _, _)| !(q == "q1" && a == "1"));
        assert_eq!(
            raw.validate(),
            Err(MachineError::MissingTransition {
                state: "q1".into(),
                input: "1".into()
            })
        );
    }

    #[test]
    fn bad_rows_are_reported() {
        let dup = catalog::v12_raw().row("q0", "0", "q0", "0");
        assert!(matches!(
            dup.validate(),
            Err(MachineError::DuplicateTransition { .. })
        ));
        let unknown = catalog::v12_raw().row("qX", "0", "q0", "0");
        assert_eq!(
            unknown.validate(),
            Err(MachineError::UnknownState("qX".into()))
        );
        let sym = catalog::v12_raw().row("q0", "2", "q0", "0");
        assert_eq!(sym.validate(), Err(MachineError::UnknownSymbol("2".into())));
        let empty = RawMachine::new("E").states(["s"]).outputs(["0"]);
        assert_eq!(empty.validate(), Err(MachineError::EmptyAlphabet("input")));
    }

    #[test]
    fn step_examples() {
        let v11 = catalog::v11();
        assert_eq!(
            v11.step(StateId(0), Letter(1)).unwrap(),
            (StateId(1), Letter(0))
        );
        assert_eq!(
            v11.step(StateId(0), Letter(0)).unwrap(),
            (StateId(0), Letter(0))
        );
        let v12 = catalog::v12();
        assert_eq!(
            v12.step(StateId(0), Letter(0)).unwrap(),
            (StateId(1), Letter(1))
        );
        assert!(matches!(
            v12.step(StateId(5), Letter(0)),
            Err(MachineError::UnknownState(_))
        ));
        assert!(matches!(
            v12.step(StateId(0), Letter(2)),
            Err(MachineError::UnknownSymbol(_))
        ));
    }

    #[test]
    fn run_examples() {
        let v11 = catalog::v11().at(StateId(0)).unwrap();
        assert_eq!(v11.run(&bin("")).unwrap(), (StateId(0), Word::empty()));
        // q=0 -1-> q=1 out 0; q=1 -1-> q=0 out 1
        assert_eq!(v11.run(&bin("11")).unwrap(), (StateId(0), bin("01")));
        let v12 = catalog::v12().at(StateId(0)).unwrap();
        assert_eq!(v12.run(&bin("00")).unwrap(), (StateId(1), bin("10")));
    }

    #[test]
    fn run_up_examples() {
        let v20 = catalog::v20();
        let x = Alphabet::binary().parse_periodic(":01").unwrap();
        let p = v20.clone().at(v20.state("p").unwrap()).unwrap();
        let q = v20.clone().at(v20.state("q").unwrap()).unwrap();
        assert_eq!(p.run_up(&x, 0).unwrap(), Word::empty());
        assert_eq!(p.run_up(&x, 4).unwrap(), bin("1010"));
        assert_eq!(q.run_up(&x, 4).unwrap(), bin("0010"));
    }

    #[test]
    fn reachability() {
        let v12 = catalog::v12().at(StateId(0)).unwrap();
        assert_eq!(
            v12.reachable_states(),
            BTreeSet::from([StateId(0), StateId(1)])
        );
        let id = Machine::identity(Alphabet::binary())
            .at(StateId(0))
            .unwrap();
        assert_eq!(id.reachable_states().len(), 1);
        // two disconnected copies of V11; component 1 holds states 2 and 3
        let two = Machine::from_fn(
            "two",
            vec!["a0".into(), "a1".into(), "b0".into(), "b1".into()],
            Alphabet::binary(),
            Alphabet::binary(),
            |q, a| {
                let base = q.0 / 2 * 2;
                let s = q.0 % 2;
                (StateId(base + (s + a.0) % 2), Letter(s * a.0))
            },
        )
        .unwrap();
        let im = two.at(StateId(2)).unwrap();
        assert_eq!(
            im.reachable_states(),
            BTreeSet::from([StateId(2), StateId(3)])
        );
    }
}

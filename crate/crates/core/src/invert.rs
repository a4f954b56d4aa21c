//! Invertible machines, the inverse-machine construction and the action of
//! signed generator words.

use std::fmt;

use thiserror::Error;

use crate::machine::{Machine, MachineError, StateId};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvertError {
    #[error("input and output alphabets of {0} differ")]
    AlphabetMismatch(String),
    #[error("state {state}: letter map not a bijection")]
    NotInvertible { state: String },
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Whether every state permutes the alphabet.
pub fn is_invertible(m: &Machine) -> Result<bool, InvertError> {
    Ok(first_non_bijective(m)?.is_none())
}

fn first_non_bijective(m: &Machine) -> Result<Option<StateId>, InvertError> {
    if !m.is_endomorphic() {
        return Err(InvertError::AlphabetMismatch(m.name().to_string()));
    }
    let p = m.input().len();
    for q in m.states() {
        let mut hit = vec![false; p];
        for a in m.input().letters() {
            hit[m.out(q, a).index()] = true;
        }
        if hit.contains(&false) {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// The machine `q*′a = b`, `q∘′a = q∘b` where `q*b = a`, on the same states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseMachine {
    machine: Machine,
    source: String,
}

impl InverseMachine {
    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn into_machine(self) -> Machine {
        self.machine
    }

    /// Name of the machine this one inverts.
    pub fn source(&self) -> &str {
        &self.source
    }
}

pub fn invert(m: &Machine) -> Result<InverseMachine, InvertError> {
    if let Some(q) = first_non_bijective(m)? {
        return Err(InvertError::NotInvertible {
            state: m.state_name(q).to_string(),
        });
    }
    let p = m.input().len();
    // preimage[q][a] = b with q*b = a
    let mut preimage = vec![Letter(0); m.num_states() * p];
    for (q, b, _, a) in m.transitions() {
        preimage[q.index() * p + a.index()] = b;
    }
    let machine = Machine::from_fn(
        format!("{}'", m.name()),
        m.state_names().to_vec(),
        m.input().clone(),
        m.output().clone(),
        |q, a| {
            let b = preimage[q.index() * p + a.index()];
            (m.next(q, b), b)
        },
    )?;
    Ok(InverseMachine {
        machine,
        source: m.name().to_string(),
    })
}

/// A generator `q` or its formal inverse `q⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedLetter {
    pub state: StateId,
    pub inverse: bool,
}

impl SignedLetter {
    pub fn pos(state: StateId) -> Self {
        Self {
            state,
            inverse: false,
        }
    }

    pub fn neg(state: StateId) -> Self {
        Self {
            state,
            inverse: true,
        }
    }

    pub fn inverted(self) -> Self {
        Self {
            state: self.state,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for SignedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "#{}{}",
            self.state.0,
            if self.inverse { "'" } else { "" }
        )
    }
}

/// Applies `x₁ x₂ … x_k` to `u` left to right: first `x₁`, then `x₂`, and so on.
pub fn act(m: &Machine, word: &[SignedLetter], u: &[Letter]) -> Result<Word, InvertError> {
    let inverse = if word.iter().any(|l| l.inverse) {
        Some(invert(m)?)
    } else {
        None
    };
    let mut cur = Word::from(u);
    for l in word {
        let machine = match (l.inverse, &inverse) {
            (true, Some(inv)) => inv.machine(),
            _ => m,
        };
        cur = machine.run_from(l.state, &cur)?.1;
    }
    Ok(cur)
}

/// Parses a generator word over the states of `m`.
///
/// Tokens are separated by whitespace or dots; when every state name is a
/// single character the word may also be written by juxtaposition (`pqp`).
/// A trailing `'` marks an inverse letter (`q'` or `q0'`).
pub fn parse_generator_word(m: &Machine, text: &str) -> Result<Vec<SignedLetter>, MachineError> {
    let text = text.trim();
    let compact = m.state_names().iter().all(|s| s.chars().count() == 1);
    let tokens: Vec<String> = if text.contains(['.', ' ']) || !compact {
        text.split(['.', ' '])
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        let mut out: Vec<String> = Vec::new();
        for c in text.chars() {
            match (c, out.last_mut()) {
                ('\'', Some(last)) => last.push(c),
                _ => out.push(c.to_string()),
            }
        }
        out
    };
    tokens
        .iter()
        .map(|t| {
            let (name, inverse) = match t.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (t.as_str(), false),
            };
            m.state(name)
                .map(|state| SignedLetter { state, inverse })
                .ok_or_else(|| MachineError::UnknownState(name.to_string()))
        })
        .collect()
}

pub fn format_generator_word(m: &Machine, word: &[SignedLetter]) -> String {
    if word.is_empty() {
        return crate::words::EMPTY_WORD.to_string();
    }
    let compact = m.state_names().iter().all(|s| s.chars().count() == 1);
    let parts: Vec<String> = word
        .iter()
        .map(|l| {
            format!(
                "{}{}",
                m.state_name(l.state),
                if l.inverse { "'" } else { "" }
            )
        })
        .collect();
    parts.join(if compact { "" } else { "." })
}

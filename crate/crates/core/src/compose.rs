//! Serial (cascade) composition, trimming and alphabet relabeling.

use thiserror::Error;

use crate::machine::{InitialMachine, Machine, StateId};
use crate::words::{Alphabet, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("not a bijection: {0}")]
    NotABijection(String),
}

/// The product machine `V ⤳ V′` together with the machines it was built from.
///
/// Product state `(q′, q)` pairs a state of the second machine with a state of
/// the first and has ordinal `q′·|Q| + q`.
#[derive(Debug, Clone)]
pub struct CascadeMachine {
    machine: InitialMachine,
    first: InitialMachine,
    second: InitialMachine,
}

impl CascadeMachine {
    pub fn machine(&self) -> &InitialMachine {
        &self.machine
    }

    pub fn into_machine(self) -> InitialMachine {
        self.machine
    }

    pub fn first(&self) -> &InitialMachine {
        &self.first
    }

    pub fn second(&self) -> &InitialMachine {
        &self.second
    }

    /// Ordinal of the product state `(q′, q)`.
    pub fn state(&self, second: StateId, first: StateId) -> StateId {
        StateId(second.0 * self.first.machine().num_states() as u32 + first.0)
    }

    /// Splits a product state into `(q′, q)`.
    pub fn pair(&self, state: StateId) -> (StateId, StateId) {
        let n = self.first.machine().num_states() as u32;
        (StateId(state.0 / n), StateId(state.0 % n))
    }
}

/// Feeds the output of `first` into `second`.
///
/// `(q′,q)∘a = (q′∘(q*a), q∘a)` and `(q′,q)*a = q′*(q*a)`; the result starts
/// at `(q′₀, q₀)` and keeps every product state, reachable or not.
pub fn cascade(
    first: &InitialMachine,
    second: &InitialMachine,
) -> Result<CascadeMachine, ComposeError> {
    let m1 = first.machine();
    let m2 = second.machine();
    // output symbol of the first machine -> input letter of the second
    let bridge: Vec<Letter> = m1
        .output()
        .symbols()
        .iter()
        .map(|b| {
            m2.input().letter(b).ok_or_else(|| {
                ComposeError::AlphabetMismatch(format!(
                    "output symbol `{b}` of {} is not an input of {}",
                    m1.name(),
                    m2.name()
                ))
            })
        })
        .collect::<Result<_, _>>()?;

    let n1 = m1.num_states() as u32;
    let names = m2
        .state_names()
        .iter()
        .flat_map(|s2| {
            m1.state_names()
                .iter()
                .map(move |s1| format!("({s2},{s1})"))
        })
        .collect();
    let product = Machine::from_fn(
        format!("{}~>{}", m1.name(), m2.name()),
        names,
        m1.input().clone(),
        m2.output().clone(),
        |s, a| {
            let (q2, q1) = (StateId(s.0 / n1), StateId(s.0 % n1));
            let mid = bridge[m1.out(q1, a).index()];
            let t = StateId(m2.next(q2, mid).0 * n1 + m1.next(q1, a).0);
            (t, m2.out(q2, mid))
        },
    )
    .expect("product of valid machines is valid");
    let start = StateId(second.start().0 * n1 + first.start().0);
    Ok(CascadeMachine {
        machine: InitialMachine::new(product, start).expect("start state in range"),
        first: first.clone(),
        second: second.clone(),
    })
}

/// Restricts a machine to the states reachable from its start, keeping their
/// relative declaration order.
pub fn trim(im: &InitialMachine) -> InitialMachine {
    let m = im.machine();
    let keep: Vec<StateId> = im.reachable_states().into_iter().collect();
    if keep.len() == m.num_states() {
        return im.clone();
    }
    let mut renumber = vec![u32::MAX; m.num_states()];
    for (i, q) in keep.iter().enumerate() {
        renumber[q.index()] = i as u32;
    }
    let names = keep.iter().map(|&q| m.state_name(q).to_string()).collect();
    let trimmed = Machine::from_fn(
        m.name().to_string(),
        names,
        m.input().clone(),
        m.output().clone(),
        |q, a| {
            let old = keep[q.index()];
            (StateId(renumber[m.next(old, a).index()]), m.out(old, a))
        },
    )
    .expect("trim of a valid machine is valid");
    InitialMachine::new(trimmed, StateId(renumber[im.start().index()])).expect("start kept")
}

/// A bijection `φ: A → B` between two alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    domain: Alphabet,
    codomain: Alphabet,
    image: Vec<Letter>,
    preimage: Vec<Letter>,
}

impl Relabeling {
    pub fn new(
        domain: Alphabet,
        codomain: Alphabet,
        image: Vec<Letter>,
    ) -> Result<Self, ComposeError> {
        if domain.len() != codomain.len() || image.len() != domain.len() {
            return Err(ComposeError::NotABijection(format!(
                "{} symbols cannot map bijectively onto {}",
                domain.len(),
                codomain.len()
            )));
        }
        let mut preimage = vec![None; codomain.len()];
        for (a, &b) in image.iter().enumerate() {
            if !codomain.contains(b) {
                return Err(ComposeError::NotABijection(format!(
                    "image #{} out of range",
                    b.0
                )));
            }
            if preimage[b.index()].replace(Letter(a as u32)).is_some() {
                return Err(ComposeError::NotABijection(format!(
                    "`{}` is hit twice",
                    codomain.symbol(b)
                )));
            }
        }
        Ok(Self {
            domain,
            codomain,
            image,
            preimage: preimage.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Builds `φ` from `(a, φ(a))` symbol pairs.
    pub fn from_pairs(
        domain: Alphabet,
        codomain: Alphabet,
        pairs: &[(&str, &str)],
    ) -> Result<Self, ComposeError> {
        let mut image = vec![None; domain.len()];
        for (a, b) in pairs {
            let la = domain.letter(a).ok_or_else(|| {
                ComposeError::NotABijection(format!("`{a}` is not in the domain"))
            })?;
            let lb = codomain.letter(b).ok_or_else(|| {
                ComposeError::NotABijection(format!("`{b}` is not in the codomain"))
            })?;
            if image[la.index()].replace(lb).is_some() {
                return Err(ComposeError::NotABijection(format!(
                    "`{a}` is mapped twice"
                )));
            }
        }
        let image = image
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                l.ok_or_else(|| {
                    ComposeError::NotABijection(format!(
                        "`{}` has no image",
                        domain.symbol(Letter(i as u32))
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        Self::new(domain, codomain, image)
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn apply(&self, a: Letter) -> Letter {
        self.image[a.index()]
    }

    pub fn apply_inverse(&self, b: Letter) -> Letter {
        self.preimage[b.index()]
    }
}

/// Transports a machine over `A` to one over `B`: `q∘φ(a) = q∘a`, `q*φ(a) = φ(q*a)`.
pub fn relabel(im: &InitialMachine, phi: &Relabeling) -> Result<InitialMachine, ComposeError> {
    let m = im.machine();
    if !m.is_endomorphic() || m.input() != phi.domain() {
        return Err(ComposeError::AlphabetMismatch(format!(
            "{} must read and write the relabeling's domain alphabet",
            m.name()
        )));
    }
    let out = Machine::from_fn(
        m.name().to_string(),
        m.state_names().to_vec(),
        phi.codomain().clone(),
        phi.codomain().clone(),
        |q, b| {
            let a = phi.apply_inverse(b);
            (m.next(q, a), phi.apply(m.out(q, a)))
        },
    )
    .expect("relabeled machine is valid");
    Ok(InitialMachine::new(out, im.start()).expect("start kept"))
}

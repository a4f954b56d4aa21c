//! Elements of automaton semigroups and groups.
//!
//! An element is a restricted sequential function `A* → A*`. It is stored as
//! a [`CanonicalForm`]: the machine restricted to reachable states, merged by
//! Moore partition refinement and renumbered breadth-first from the start
//! state with arcs taken in alphabet order. Two minimal machines computing
//! the same function are isomorphic, and the breadth-first numbering fixes
//! the isomorphism, so equal functions have identical forms.
//!
//! Products follow the word action convention: `x·y` applies `x` first.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::invert::{act, invert, InvertError, SignedLetter};
use crate::machine::{InitialMachine, Machine, MachineError, StateId};
use crate::words::{Alphabet, Letter, UltimatelyPeriodicWord, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("generator word must be non-empty")]
    EmptyWord,
    #[error("{0} must have equal input and output alphabets")]
    NotEndomorphic(String),
    #[error(transparent)]
    Invert(#[from] InvertError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Minimal, trimmed, breadth-first numbered machine with start state 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    inputs: u32,
    next: Vec<u32>,
    emit: Vec<u32>,
}

impl CanonicalForm {
    /// The one-state identity on an alphabet of `p` letters.
    pub fn identity(p: usize) -> Self {
        Self {
            inputs: p as u32,
            next: vec![0; p],
            emit: (0..p as u32).collect(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.next.len() / self.inputs as usize
    }

    pub fn alphabet_size(&self) -> usize {
        self.inputs as usize
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.alphabet_size())
    }

    /// `(q∘a, q*a)` with states as canonical ordinals.
    pub fn step(&self, q: usize, a: Letter) -> (usize, Letter) {
        let slot = q * self.inputs as usize + a.index();
        (self.next[slot] as usize, Letter(self.emit[slot]))
    }

    /// Transition rows `(q, a, q∘a, q*a)`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, Letter, usize, Letter)> + '_ {
        (0..self.num_states()).flat_map(move |q| {
            (0..self.inputs).map(move |a| {
                let (t, b) = self.step(q, Letter(a));
                (q, Letter(a), t, b)
            })
        })
    }

    pub fn apply(&self, u: &[Letter]) -> Word {
        let mut q = 0;
        u.iter()
            .map(|&a| {
                let (t, b) = self.step(q, a);
                q = t;
                b
            })
            .collect()
    }

    /// The canonical form of "apply `self`, then `other`".
    pub fn then(&self, other: &CanonicalForm) -> CanonicalForm {
        assert_eq!(
            self.inputs, other.inputs,
            "elements act on different alphabets"
        );
        let p = self.inputs as usize;
        let mut index: HashMap<(usize, usize), u32> = HashMap::from([((0, 0), 0)]);
        let mut pairs = vec![(0usize, 0usize)];
        let mut next = Vec::new();
        let mut emit = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (x, y) = pairs[i];
            for a in 0..p as u32 {
                let (x2, mid) = self.step(x, Letter(a));
                let (y2, b) = other.step(y, mid);
                let len = pairs.len() as u32;
                let t = *index.entry((x2, y2)).or_insert_with(|| {
                    pairs.push((x2, y2));
                    len
                });
                next.push(t);
                emit.push(b.0);
            }
            i += 1;
        }
        minimize(p, &next, &emit, 0)
    }

    /// Materializes the form as a machine over `alphabet`, states `s0, s1, …`.
    pub fn to_machine(&self, name: &str, alphabet: &Alphabet) -> InitialMachine {
        assert_eq!(alphabet.len(), self.alphabet_size());
        let names = (0..self.num_states()).map(|i| format!("s{i}")).collect();
        let m = Machine::from_fn(name, names, alphabet.clone(), alphabet.clone(), |q, a| {
            let (t, b) = self.step(q.index(), a);
            (StateId(t as u32), b)
        })
        .expect("canonical form is a valid machine");
        InitialMachine::new(m, StateId(0)).expect("state 0 exists")
    }
}

/// Moore partition refinement on the states reachable from `start`, then
/// breadth-first renumbering of the classes.
fn minimize(p: usize, next: &[u32], emit: &[u32], start: u32) -> CanonicalForm {
    let n = next.len() / p;
    // reachable states in BFS order
    let mut seen = vec![false; n];
    let mut order = vec![start as usize];
    seen[start as usize] = true;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        for &t in &next[q * p..(q + 1) * p] {
            if !seen[t as usize] {
                seen[t as usize] = true;
                order.push(t as usize);
            }
        }
        i += 1;
    }

    // initial partition by output rows, refined by successor classes to a fixpoint
    let mut class = vec![u32::MAX; n];
    let mut count = {
        let mut ids: HashMap<&[u32], u32> = HashMap::new();
        for &q in &order {
            let len = ids.len() as u32;
            class[q] = *ids.entry(&emit[q * p..(q + 1) * p]).or_insert(len);
        }
        ids.len()
    };
    loop {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut refined = vec![u32::MAX; n];
        for &q in &order {
            let mut key = Vec::with_capacity(p + 1);
            key.push(class[q]);
            key.extend(next[q * p..(q + 1) * p].iter().map(|&t| class[t as usize]));
            let len = ids.len() as u32;
            refined[q] = *ids.entry(key).or_insert(len);
        }
        class = refined;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }

    // breadth-first numbering of the quotient from the start class
    let mut rep = vec![usize::MAX; count];
    for &q in order.iter().rev() {
        rep[class[q] as usize] = q;
    }
    let mut number = vec![u32::MAX; count];
    number[class[start as usize] as usize] = 0;
    let mut queue = VecDeque::from([class[start as usize]]);
    let mut out_next = Vec::with_capacity(count * p);
    let mut out_emit = Vec::with_capacity(count * p);
    let mut assigned = 1;
    while let Some(c) = queue.pop_front() {
        let q = rep[c as usize];
        for a in 0..p {
            let tc = class[next[q * p + a] as usize];
            if number[tc as usize] == u32::MAX {
                number[tc as usize] = assigned;
                assigned += 1;
                queue.push_back(tc);
            }
            out_next.push(number[tc as usize]);
            out_emit.push(emit[q * p + a]);
        }
    }
    CanonicalForm {
        inputs: p as u32,
        next: out_next,
        emit: out_emit,
    }
}

/// Canonical form of the function computed by `im`.
pub fn canonicalize(im: &InitialMachine) -> CanonicalForm {
    let m = im.machine();
    let (next, emit): (Vec<u32>, Vec<u32>) = m.transitions().map(|(_, _, t, b)| (t.0, b.0)).unzip();
    minimize(m.input().len(), &next, &emit, im.start().0)
}

/// An element together with the shortest generator word known to produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementCanon {
    pub form: CanonicalForm,
    pub witness: Vec<SignedLetter>,
}

fn generator_form(
    m: &Machine,
    inverse: Option<&Machine>,
    l: SignedLetter,
) -> Result<CanonicalForm, AlgebraError> {
    let machine = match (l.inverse, inverse) {
        (false, _) => m.clone(),
        (true, Some(inv)) => inv.clone(),
        (true, None) => invert(m)?.into_machine(),
    };
    Ok(canonicalize(&InitialMachine::new(machine, l.state)?))
}

fn require_endomorphic(m: &Machine) -> Result<(), AlgebraError> {
    if m.is_endomorphic() {
        Ok(())
    } else {
        Err(AlgebraError::NotEndomorphic(m.name().to_string()))
    }
}

/// The element `x̄ = x̄₁·x̄₂·…` for a non-empty generator word.
pub fn element(m: &Machine, x: &[SignedLetter]) -> Result<ElementCanon, AlgebraError> {
    require_endomorphic(m)?;
    let (first, rest) = x.split_first().ok_or(AlgebraError::EmptyWord)?;
    let inverse = if x.iter().any(|l| l.inverse) {
        Some(invert(m)?.into_machine())
    } else {
        None
    };
    let mut form = generator_form(m, inverse.as_ref(), *first)?;
    for &l in rest {
        form = form.then(&generator_form(m, inverse.as_ref(), l)?);
    }
    Ok(ElementCanon {
        form,
        witness: x.to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBounds {
    /// Largest number of elements to hold before giving up.
    pub max_elems: usize,
    /// Longest witness word to explore; one further level is probed for saturation.
    pub max_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Every element was found and the Cayley table closes.
    Finite,
    /// A bound tripped; the element list is a lower bound on the size.
    LowerBoundOnly,
}

#[derive(Debug, Clone)]
pub struct SemigroupResult {
    pub status: Status,
    /// Ordered by witness length, then lexicographically by generator order.
    pub elements: Vec<ElementCanon>,
    /// `cayley[i][j]` is the index of `elements[i]·elements[j]`; present iff finite.
    pub cayley: Option<Vec<Vec<usize>>>,
    pub bounds: EnumBounds,
    /// Generators in the order used for witnesses.
    pub generators: Vec<SignedLetter>,
}

impl SemigroupResult {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, form: &CanonicalForm) -> Option<usize> {
        self.elements.iter().position(|e| &e.form == form)
    }

    pub fn identity(&self) -> Option<usize> {
        self.elements.iter().position(|e| e.form.is_identity())
    }

    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        self.cayley.as_ref().map(|t| t[i][j])
    }

    /// `o(a) = |⟨a⟩|`, the number of distinct powers of element `i`.
    pub fn order(&self, i: usize) -> Option<usize> {
        let table = self.cayley.as_ref()?;
        let mut seen = Vec::new();
        let mut x = i;
        while !seen.contains(&x) {
            seen.push(x);
            x = table[x][i];
        }
        Some(seen.len())
    }

    /// Index `j` with `i·j = j·i = identity`, if the identity is present.
    pub fn inverse(&self, i: usize) -> Option<usize> {
        let e = self.identity()?;
        let table = self.cayley.as_ref()?;
        (0..self.len()).find(|&j| table[i][j] == e && table[j][i] == e)
    }
}

/// Breadth-first enumeration of `⟨Q⟩₊`, or of the group generated by
/// `Q ∪ Q⁻¹` when `signed`.
pub fn enumerate(
    m: &Machine,
    bounds: EnumBounds,
    signed: bool,
) -> Result<SemigroupResult, AlgebraError> {
    require_endomorphic(m)?;
    let inverse = if signed {
        Some(invert(m)?.into_machine())
    } else {
        None
    };
    let mut generators: Vec<SignedLetter> = m.states().map(SignedLetter::pos).collect();
    if signed {
        generators.extend(m.states().map(SignedLetter::neg));
    }
    let gen_forms = generators
        .iter()
        .map(|&g| generator_form(m, inverse.as_ref(), g))
        .collect::<Result<Vec<_>, _>>()?;

    let mut result = SemigroupResult {
        status: Status::LowerBoundOnly,
        elements: Vec::new(),
        cayley: None,
        bounds,
        generators: generators.clone(),
    };
    let mut index: HashMap<CanonicalForm, usize> = HashMap::new();
    // returns false once the element budget is exhausted
    let mut admit = |result: &mut SemigroupResult,
                     form: CanonicalForm,
                     witness: Vec<SignedLetter>,
                     level: &mut Vec<usize>| {
        if index.contains_key(&form) {
            return true;
        }
        if result.elements.len() == bounds.max_elems {
            return false;
        }
        index.insert(form.clone(), result.elements.len());
        level.push(result.elements.len());
        result.elements.push(ElementCanon { form, witness });
        true
    };

    let mut level = Vec::new();
    for (g, form) in generators.iter().zip(&gen_forms) {
        if !admit(&mut result, form.clone(), vec![*g], &mut level) {
            return Ok(result);
        }
    }
    let mut len = 1;
    while !level.is_empty() {
        let mut next_level = Vec::new();
        for &i in &level {
            for (g, gform) in generators.iter().zip(&gen_forms) {
                let form = result.elements[i].form.then(gform);
                let mut witness = result.elements[i].witness.clone();
                witness.push(*g);
                if !admit(&mut result, form, witness, &mut next_level) {
                    return Ok(result);
                }
            }
        }
        if !next_level.is_empty() && len >= bounds.max_len {
            return Ok(result);
        }
        level = next_level;
        len += 1;
    }

    let forms: Vec<&CanonicalForm> = result.elements.iter().map(|e| &e.form).collect();
    let mut table = Vec::with_capacity(forms.len());
    for x in &forms {
        let mut row = Vec::with_capacity(forms.len());
        for y in &forms {
            match index.get(&x.then(y)) {
                Some(&k) => row.push(k),
                None => return Ok(result),
            }
        }
        table.push(row);
    }
    result.cayley = Some(table);
    result.status = Status::Finite;
    Ok(result)
}

/// Distinct images of a common input prefix under a list of generator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitWitness {
    pub probe_length: usize,
    pub images: Vec<Word>,
    /// Number of pairwise distinct images: a lower bound on the semigroup size.
    pub distinct: usize,
    /// Distinct images other than the probe itself; patterns acting
    /// trivially on the probe are not counted.
    pub moved: usize,
}

/// Applies every pattern to the first `2k+2` symbols of `x` and counts the
/// distinct results. Patterns with different images are different elements.
pub fn orbit_witness(
    m: &Machine,
    patterns: &[Vec<SignedLetter>],
    x: &UltimatelyPeriodicWord,
    k: usize,
) -> Result<OrbitWitness, AlgebraError> {
    let probe_length = 2 * k + 2;
    let input = x.prefix(probe_length);
    let images = patterns
        .iter()
        .map(|w| act(m, w, &input))
        .collect::<Result<Vec<_>, _>>()?;
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    Ok(OrbitWitness {
        probe_length,
        distinct: sorted.len(),
        moved: sorted.iter().filter(|w| **w != input).count(),
        images,
    })
}

/// Number of distinct powers `x, x², …` of the element named by `x`, or
/// `None` once more than `limit` distinct powers have appeared.
pub fn power_order(
    m: &Machine,
    x: &[SignedLetter],
    limit: usize,
) -> Result<Option<usize>, AlgebraError> {
    let a = element(m, x)?.form;
    let mut seen = HashSet::new();
    let mut cur = a.clone();
    while seen.insert(cur.clone()) {
        if seen.len() > limit {
            return Ok(None);
        }
        cur = cur.then(&a);
    }
    Ok(Some(seen.len()))
}

/// `a, ab, aba, abab, …` up to length `k`.
pub fn alternating_patterns(a: SignedLetter, b: SignedLetter, k: usize) -> Vec<Vec<SignedLetter>> {
    (1..=k)
        .map(|n| (0..n).map(|i| if i % 2 == 0 { a } else { b }).collect())
        .collect()
}

/// `g, g², …, g^k`.
pub fn power_patterns(g: SignedLetter, k: usize) -> Vec<Vec<SignedLetter>> {
    (1..=k).map(|n| vec![g; n]).collect()
}

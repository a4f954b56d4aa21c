//! Sequential functions as black-box oracles.
//!
//! A sequential function `f: A* → B*` preserves lengths and prefixes. Its
//! quotient at `u` is `f_u(v) = ` the last `|v|` symbols of `f(uv)`, so that
//! `f(uv) = f(u)·f_u(v)`. When only finitely many quotients exist the
//! function is computed by a machine whose states are those quotients.
//!
//! Quotient equality cannot be decided by probing, so every verdict here is
//! relative to an explicit depth `d`: two quotients are identified when they
//! agree on all words of length at most `d`.
//!
//! The module also holds the regular rooted tree over `{0..p−1}`, whose
//! endomorphisms are exactly the sequential functions.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::machine::{InitialMachine, Machine, MachineError, StateId};
use crate::words::{is_prefix, Alphabet, Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqFnError {
    #[error("function is not defined on `{0}`")]
    OutOfDomain(Word),
    #[error("image of `{word}` has length {image_len}")]
    LengthViolation { word: Word, image_len: usize },
    #[error("{p}^{n} does not fit in 64 bits")]
    Overflow { p: u64, n: u32 },
    #[error("expected alphabets of size {expected}, found {input} → {output}")]
    ArityMismatch {
        expected: usize,
        input: usize,
        output: usize,
    },
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Word(#[from] WordError),
}

type EvalFn = dyn Fn(&[Letter]) -> Result<Word, SeqFnError> + Send + Sync;

/// A function `A* → B*` given by an evaluator.
#[derive(Clone)]
pub struct SeqFnOracle {
    input: Alphabet,
    output: Alphabet,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for SeqFnOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeqFnOracle")
            .field("input", &self.input)
            .field("output", &self.output)
            .finish_non_exhaustive()
    }
}

impl SeqFnOracle {
    pub fn new<F>(input: Alphabet, output: Alphabet, eval: F) -> Self
    where
        F: Fn(&[Letter]) -> Result<Word, SeqFnError> + Send + Sync + 'static,
    {
        Self {
            input,
            output,
            eval: Arc::new(eval),
        }
    }

    /// Wraps a total function.
    pub fn from_fn<F>(input: Alphabet, output: Alphabet, f: F) -> Self
    where
        F: Fn(&[Letter]) -> Word + Send + Sync + 'static,
    {
        Self::new(input, output, move |u| Ok(f(u)))
    }

    /// `u ↦ q₀*u`.
    pub fn from_machine(im: InitialMachine) -> Self {
        let input = im.machine().input().clone();
        let output = im.machine().output().clone();
        Self::new(input, output, move |u| Ok(im.apply(u)?))
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::from_fn(alphabet.clone(), alphabet, |u| Word::from(u))
    }

    pub fn from_table(table: FunctionTable) -> Self {
        let input = table.input.clone();
        let output = table.output.clone();
        Self::new(input, output, move |u| table.lookup(u))
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn eval(&self, u: &[Letter]) -> Result<Word, SeqFnError> {
        (self.eval)(u)
    }

    /// `f_u`.
    pub fn quotient(&self, u: &[Letter]) -> SeqFnOracle {
        let f = self.clone();
        let u = Word::from(u);
        Self::new(self.input.clone(), self.output.clone(), move |v| {
            let uv = u.concat(v);
            let image = f.eval(&uv)?;
            if image.len() < v.len() {
                return Err(SeqFnError::LengthViolation {
                    word: uv,
                    image_len: image.len(),
                });
            }
            Ok(image.slice(image.len() - v.len(), image.len()))
        })
    }

    /// `u ↦ next(self(u))`.
    pub fn then(&self, next: &SeqFnOracle) -> SeqFnOracle {
        let (f, g) = (self.clone(), next.clone());
        Self::new(self.input.clone(), next.output.clone(), move |u| {
            g.eval(&f.eval(u)?)
        })
    }
}

/// Finite function table `u -> v`, read from a `.fn` file.
///
/// A word is in the domain when it is a prefix of some listed key; its image
/// is then the matching prefix of that key's value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub input: Alphabet,
    pub output: Alphabet,
    pub entries: BTreeMap<Word, Word>,
}

impl FunctionTable {
    pub fn lookup(&self, u: &[Letter]) -> Result<Word, SeqFnError> {
        let key = Word::from(u);
        match self.entries.range(key.clone()..).next() {
            Some((k, v)) if is_prefix(u, k) => Ok(v.slice(0, u.len().min(v.len()))),
            _ if u.is_empty() => Ok(Word::empty()),
            _ => Err(SeqFnError::OutOfDomain(key)),
        }
    }
}

/// First failure found by [`check_sequential`] or [`check_endomorphism`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `|f(word)| ≠ |word|`.
    Length { word: Word, image_len: usize },
    /// `shorter` is a prefix of `longer` but `f(shorter)` is not a prefix of `f(longer)`.
    Prefix { shorter: Word, longer: Word },
    /// The root is not mapped to the root.
    Root { image_len: usize },
    /// The arc `(parent, child)` is not mapped to an arc.
    Arc { parent: Word, child: Word },
}

/// Outcome of a bounded check: `violation` is `None` when the property holds
/// on every word of length at most `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub depth: usize,
    pub violation: Option<Violation>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Probes both sequential-function axioms on every word of length at most `d`.
pub fn check_sequential(f: &SeqFnOracle, d: usize) -> Result<Verdict, SeqFnError> {
    let words: Vec<Word> = f.input.words_up_to(d).collect();
    let images = words
        .iter()
        .map(|u| f.eval(u))
        .collect::<Result<Vec<_>, _>>()?;
    let verdict = |violation| {
        Ok(Verdict {
            depth: d,
            violation,
        })
    };
    for (u, fu) in words.iter().zip(&images) {
        if fu.len() != u.len() {
            return verdict(Some(Violation::Length {
                word: u.clone(),
                image_len: fu.len(),
            }));
        }
    }
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    for (v, fv) in words.iter().zip(&images) {
        for k in 0..v.len() {
            let u = v.slice(0, k);
            if !is_prefix(&images[index[&u]], fv) {
                return verdict(Some(Violation::Prefix {
                    shorter: u,
                    longer: v.clone(),
                }));
            }
        }
    }
    verdict(None)
}

/// Checks that `f` maps the root to the root and every arc `(u, ua)` with
/// `|u| < d` of the `p`-regular tree to an arc.
pub fn check_endomorphism(f: &SeqFnOracle, p: usize, d: usize) -> Result<Verdict, SeqFnError> {
    if f.input.len() != p || f.output.len() != p {
        return Err(SeqFnError::ArityMismatch {
            expected: p,
            input: f.input.len(),
            output: f.output.len(),
        });
    }
    let root = f.eval(&[])?;
    if !root.is_empty() {
        return Ok(Verdict {
            depth: d,
            violation: Some(Violation::Root {
                image_len: root.len(),
            }),
        });
    }
    for u in f.input.words_up_to(d.saturating_sub(1)) {
        if d == 0 {
            break;
        }
        let fu = f.eval(&u)?;
        for a in f.input.letters() {
            let ua = u.appended(a);
            let fua = f.eval(&ua)?;
            if fua.len() != fu.len() + 1 || !is_prefix(&fu, &fua) {
                return Ok(Verdict {
                    depth: d,
                    violation: Some(Violation::Arc {
                        parent: u,
                        child: ua,
                    }),
                });
            }
        }
    }
    Ok(Verdict {
        depth: d,
        violation: None,
    })
}

/// Breadth-first exploration of the quotients of a function at a fixed
/// probe depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientTable {
    pub depth: usize,
    /// One word per distinct quotient, least in length-then-lexicographic order.
    pub representatives: Vec<Word>,
    /// `transitions[i][a]` is the representative index of `f_{u a}` for `u = representatives[i]`.
    /// Rows exist only for explored representatives.
    pub transitions: Vec<Vec<usize>>,
    /// `outputs[i][a] = f_u(a)`.
    pub outputs: Vec<Vec<Letter>>,
    /// False when exploration stopped at the state budget.
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("more than {} distinct quotients at depth {}; result not determined", .0.representatives.len(), .0.depth)]
    BudgetExceeded(Box<QuotientTable>),
    #[error("invalid exploration bounds: depth and state budget must be at least 1")]
    InvalidBounds,
    #[error(transparent)]
    Eval(#[from] SeqFnError),
}

/// All values `f_u(w)` for `|w| ≤ depth`, concatenated in shortlex order of `w`.
fn quotient_signature(
    f: &SeqFnOracle,
    u: &Word,
    probes: &[Word],
) -> Result<Vec<Letter>, SeqFnError> {
    let mut sig = Vec::new();
    for w in probes {
        let uw = u.concat(w);
        let image = f.eval(&uw)?;
        if image.len() != uw.len() {
            return Err(SeqFnError::LengthViolation {
                word: uw,
                image_len: image.len(),
            });
        }
        sig.extend_from_slice(&image[u.len()..]);
    }
    Ok(sig)
}

pub fn explore_quotients(
    f: &SeqFnOracle,
    d: usize,
    max_states: usize,
) -> Result<QuotientTable, ExploreError> {
    if d == 0 || max_states == 0 {
        return Err(ExploreError::InvalidBounds);
    }
    let probes: Vec<Word> = f.input.words_up_to(d).collect();
    let mut table = QuotientTable {
        depth: d,
        representatives: vec![Word::empty()],
        transitions: Vec::new(),
        outputs: Vec::new(),
        closed: false,
    };
    let mut known: HashMap<Vec<Letter>, usize> = HashMap::new();
    let root_sig = quotient_signature(f, &Word::empty(), &probes)?;
    // probes are λ, then the one-letter words, so the signature starts with f_u(a) for each a
    let first_letters = |sig: &[Letter]| sig[..f.input.len()].to_vec();
    let mut letter_outputs = vec![first_letters(&root_sig)];
    known.insert(root_sig, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let u = table.representatives[i].clone();
        let mut row = Vec::with_capacity(f.input.len());
        for a in f.input.letters() {
            let ua = u.appended(a);
            let sig = quotient_signature(f, &ua, &probes)?;
            let target = match known.get(&sig) {
                Some(&j) => j,
                None => {
                    if table.representatives.len() == max_states {
                        table.outputs = letter_outputs;
                        return Err(ExploreError::BudgetExceeded(Box::new(table)));
                    }
                    let j = table.representatives.len();
                    letter_outputs.push(first_letters(&sig));
                    known.insert(sig, j);
                    table.representatives.push(ua);
                    queue.push_back(j);
                    j
                }
            };
            row.push(target);
        }
        table.transitions.push(row);
    }
    table.outputs = letter_outputs;
    table.closed = true;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("quotient table is not closed")]
    TableNotClosed,
    #[error("synthesized machine disagrees with the function on `{0}`; raise the probe depth")]
    Mismatch(Word),
    #[error(transparent)]
    Eval(#[from] SeqFnError),
}

/// Builds the machine whose states are the quotient classes:
/// `[u]∘a = [ua]`, `[u]*a = f_u(a)`, started at `[λ]`.
pub fn synthesize(t: &QuotientTable, f: &SeqFnOracle) -> Result<InitialMachine, SynthError> {
    if !t.closed {
        return Err(SynthError::TableNotClosed);
    }
    let names = t
        .representatives
        .iter()
        .map(|u| format!("[{}]", f.input.format_word(u)))
        .collect();
    let machine = Machine::from_fn("synth", names, f.input.clone(), f.output.clone(), |q, a| {
        (
            StateId(t.transitions[q.index()][a.index()] as u32),
            t.outputs[q.index()][a.index()],
        )
    })
    .map_err(SeqFnError::from)?;
    let im = InitialMachine::new(machine, StateId(0)).map_err(SeqFnError::from)?;
    for v in f.input.words_up_to(t.depth) {
        if im.apply(&v).map_err(SeqFnError::from)? != f.eval(&v)? {
            return Err(SynthError::Mismatch(v));
        }
    }
    Ok(im)
}

/// `|L(n)| = pⁿ`, the number of vertices on level `n` of the `p`-regular tree.
pub fn level_count(p: u64, n: u32) -> Result<u64, SeqFnError> {
    p.checked_pow(n).ok_or(SeqFnError::Overflow { p, n })
}

/// The `p`-regular rooted tree truncated at `depth`: vertices are words over
/// `{0..p−1}` of length at most `depth`, arcs are `(u, ua)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularTreeModel {
    pub arity: usize,
    pub depth: usize,
}

impl RegularTreeModel {
    pub fn new(arity: usize, depth: usize) -> Self {
        assert!(arity >= 1, "tree arity must be positive");
        Self { arity, depth }
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::numeric(self.arity)
    }

    /// Vertices on level `n`; empty beyond the truncation depth.
    pub fn level(&self, n: usize) -> impl Iterator<Item = Word> {
        let within = n <= self.depth;
        self.alphabet().words_of_length(n).filter(move |_| within)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Word> {
        self.alphabet().words_up_to(self.depth)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Word, Word)> {
        let p = self.arity as u32;
        let alphabet = self.alphabet();
        let parents = (0..self.depth).flat_map(move |n| alphabet.words_of_length(n));
        parents.flat_map(move |u| (0..p).map(move |a| (u.clone(), u.appended(Letter(a)))))
    }
}

/// A finite rooted tree given by child lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootedTree {
    children: BTreeMap<u32, Vec<u32>>,
}

impl RootedTree {
    pub fn from_arcs<I: IntoIterator<Item = u32>>(vertices: I, arcs: &[(u32, u32)]) -> Self {
        let mut children: BTreeMap<u32, Vec<u32>> =
            vertices.into_iter().map(|v| (v, Vec::new())).collect();
        for &(from, to) in arcs {
            children.entry(to).or_default();
            children.entry(from).or_default().push(to);
        }
        Self { children }
    }

    /// The regular tree with vertex `i` standing for the `i`-th word in shortlex order.
    pub fn regular(p: usize, d: usize) -> Self {
        let model = RegularTreeModel::new(p, d);
        let index: HashMap<Word, u32> = model
            .vertices()
            .enumerate()
            .map(|(i, w)| (w, i as u32))
            .collect();
        let arcs: Vec<(u32, u32)> = model.arcs().map(|(u, v)| (index[&u], index[&v])).collect();
        Self::from_arcs(index.values().copied(), &arcs)
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.children.keys().copied()
    }

    pub fn children(&self, v: u32) -> &[u32] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.children
            .iter()
            .flat_map(|(&v, cs)| cs.iter().map(move |&c| (v, c)))
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("vertex {vertex} has out-degree {outdegree}")]
    NotRegular { vertex: u32, outdegree: usize },
    #[error("several vertices have in-degree 0: {0:?}")]
    MultipleRoots(Vec<u32>),
    #[error("no vertex has in-degree 0")]
    NoRoot,
    #[error("vertex {0} has more than one parent or is not reachable from the root")]
    NotATree(u32),
}

/// Labels a rooted tree that is out-`p`-regular down to depth `d` by words:
/// the root gets `λ` and the children of `u`, in listed order, get `u0, u1, …`.
pub fn canonical_tree_labeling(
    tree: &RootedTree,
    p: usize,
    d: usize,
) -> Result<BTreeMap<u32, Word>, TreeError> {
    let mut indegree: BTreeMap<u32, usize> = tree.vertices().map(|v| (v, 0)).collect();
    for (_, c) in tree.arcs() {
        *indegree.get_mut(&c).expect("arc targets are vertices") += 1;
    }
    if let Some((&v, _)) = indegree.iter().find(|(_, &n)| n > 1) {
        return Err(TreeError::NotATree(v));
    }
    let roots: Vec<u32> = indegree
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(&v, _)| v)
        .collect();
    let root = match roots.as_slice() {
        [] => return Err(TreeError::NoRoot),
        [r] => *r,
        _ => return Err(TreeError::MultipleRoots(roots)),
    };
    let mut labels = BTreeMap::from([(root, Word::empty())]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let label = labels[&v].clone();
        let children = tree.children(v);
        let expected = if label.len() < d { p } else { 0 };
        if children.len() != expected {
            return Err(TreeError::NotRegular {
                vertex: v,
                outdegree: children.len(),
            });
        }
        for (a, &c) in children.iter().enumerate() {
            labels.insert(c, label.appended(Letter(a as u32)));
            queue.push_back(c);
        }
    }
    if let Some(v) = tree.vertices().find(|v| !labels.contains_key(v)) {
        return Err(TreeError::NotATree(v));
    }
    Ok(labels)
}

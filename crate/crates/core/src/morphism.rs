//! Exhaustive search for machine homomorphisms and simulations.
//!
//! A homomorphism `μ = (μ₁, μ₂, μ₃): V → V′` maps states, inputs and outputs
//! so that `μ₁(q∘a) = μ₁(q)∘′μ₂(a)` and `μ₃(q*a) = μ₁(q)*′μ₂(a)`.
//! A simulation of `V` by `V′` is `(h₁, h₂, h₃)` with `h₃` running backwards
//! on outputs, such that `q*u = h₃(h₁(q)*′h₂(u))` for every word `u`.
//!
//! Candidates are ordered lexicographically by the image tuples of the
//! first, second and third map, in that priority. For a fixed first and
//! second map the third map is forced on the letters that actually occur,
//! so the search walks the first two maps and fills the third with its
//! least consistent completion; this visits candidates in the same order as
//! a flat enumeration and returns the same first witness.

use thiserror::Error;

use crate::machine::{Machine, StateId};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("search space of {candidates} candidates exceeds the budget of {budget}")]
    SearchSpaceTooLarge { candidates: String, budget: u128 },
    #[error("triple is not total: {0}")]
    PartialTriple(String),
    #[error("simulation probe depth must be at least 1")]
    InvalidDepth,
}

/// `(μ₁, μ₂, μ₃)` as image tables indexed by source ordinals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorphismTriple {
    pub states: Vec<StateId>,
    pub inputs: Vec<Letter>,
    pub outputs: Vec<Letter>,
}

impl MorphismTriple {
    pub fn identity(m: &Machine) -> Self {
        Self {
            states: m.states().collect(),
            inputs: m.input().letters().collect(),
            outputs: m.output().letters().collect(),
        }
    }

    /// Componentwise composition: first `self`, then `next`.
    pub fn then(&self, next: &MorphismTriple) -> MorphismTriple {
        MorphismTriple {
            states: self.states.iter().map(|q| next.states[q.index()]).collect(),
            inputs: self.inputs.iter().map(|a| next.inputs[a.index()]).collect(),
            outputs: self
                .outputs
                .iter()
                .map(|b| next.outputs[b.index()])
                .collect(),
        }
    }
}

/// `(h₁, h₂, h₃)`: `h₁: Q → Q′`, `h₂: A → A′`, `h₃: B′ → B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimulationTriple {
    pub states: Vec<StateId>,
    pub inputs: Vec<Letter>,
    pub outputs: Vec<Letter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefutationKind {
    /// The transition equation fails.
    Transition,
    /// The output equation cannot be met by any third map.
    Output,
}

/// Why a block of candidates sharing their first two maps was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub states: Vec<StateId>,
    pub inputs: Vec<Letter>,
    /// The failing state and input (a single letter for homomorphisms).
    pub state: StateId,
    pub word: Word,
    pub kind: RefutationKind,
    /// Number of full candidate triples this refutation covers.
    pub candidates: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest number of candidate triples the search may face.
    pub budget: u128,
    /// Keep a [`Refutation`] for every rejected block.
    pub record_log: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 100_000_000,
            record_log: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub found: Option<T>,
    /// Candidates rejected before the witness, or all of them when none exists.
    pub refuted: u128,
    pub log: Vec<Refutation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Verified,
    Refuted {
        state: StateId,
        word: Word,
        kind: RefutationKind,
    },
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified)
    }
}

/// All maps `{0..n} → {0..m}` in lexicographic order of their image tuples.
struct Maps {
    current: Option<Vec<u32>>,
    base: u32,
}

impl Maps {
    fn new(n: usize, m: usize) -> Self {
        Self {
            current: (m > 0 || n == 0).then(|| vec![0; n]),
            base: m as u32,
        }
    }
}

impl Iterator for Maps {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.take()?;
        let mut succ = cur.clone();
        for i in (0..succ.len()).rev() {
            if succ[i] + 1 < self.base {
                succ[i] += 1;
                self.current = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

fn count_maps(n: usize, m: usize) -> Option<u128> {
    (m as u128).checked_pow(n as u32)
}

fn space_size(sorts: [(usize, usize); 3], budget: u128) -> Result<u128, MorphismError> {
    let total = sorts
        .iter()
        .try_fold(1u128, |acc, &(n, m)| acc.checked_mul(count_maps(n, m)?));
    match total {
        Some(t) if t <= budget => Ok(t),
        Some(t) => Err(MorphismError::SearchSpaceTooLarge {
            candidates: t.to_string(),
            budget,
        }),
        None => Err(MorphismError::SearchSpaceTooLarge {
            candidates: "more than 2^128".into(),
            budget,
        }),
    }
}

/// Lexicographic rank of the least completion of a partially forced map;
/// every lexicographically smaller map violates a forced entry.
fn rank_of(completion: &[u32], base: usize) -> u128 {
    completion
        .iter()
        .fold(0u128, |acc, &d| acc * base as u128 + d as u128)
}

/// Fills unforced entries with 0.
fn least_completion(forced: &[Option<u32>]) -> Vec<u32> {
    forced.iter().map(|f| f.unwrap_or(0)).collect()
}

fn states_of(v: &[u32]) -> Vec<StateId> {
    v.iter().map(|&i| StateId(i)).collect()
}

fn letters_of(v: &[u32]) -> Vec<Letter> {
    v.iter().map(|&i| Letter(i)).collect()
}

fn check_total(t: &MorphismTriple, src: &Machine, dst: &Machine) -> Result<(), MorphismError> {
    let ok = t.states.len() == src.num_states()
        && t.inputs.len() == src.input().len()
        && t.outputs.len() == src.output().len()
        && t.states.iter().all(|q| q.index() < dst.num_states())
        && t.inputs.iter().all(|&a| dst.input().contains(a))
        && t.outputs.iter().all(|&b| dst.output().contains(b));
    if ok {
        Ok(())
    } else {
        Err(MorphismError::PartialTriple(format!(
            "expected maps on {} states, {} inputs, {} outputs into {}",
            src.num_states(),
            src.input().len(),
            src.output().len(),
            dst.name()
        )))
    }
}

/// Checks both homomorphism equations on every `(q, a)`.
pub fn verify_homomorphism(
    src: &Machine,
    dst: &Machine,
    t: &MorphismTriple,
) -> Result<Verification, MorphismError> {
    check_total(t, src, dst)?;
    for (q, a, next, out) in src.transitions() {
        let (mq, ma) = (t.states[q.index()], t.inputs[a.index()]);
        let kind = if t.states[next.index()] != dst.next(mq, ma) {
            RefutationKind::Transition
        } else if t.outputs[out.index()] != dst.out(mq, ma) {
            RefutationKind::Output
        } else {
            continue;
        };
        return Ok(Verification::Refuted {
            state: q,
            word: Word::from(vec![a]),
            kind,
        });
    }
    Ok(Verification::Verified)
}

fn same_shape(src: &Machine, dst: &Machine) -> bool {
    src.num_states() == dst.num_states()
        && src.input().len() == dst.input().len()
        && src.output().len() == dst.output().len()
}

/// Searches all homomorphisms `src → dst`. When the sorts have equal sizes
/// the identity triple is tried before the lexicographic sweep.
pub fn find_homomorphism(
    src: &Machine,
    dst: &Machine,
    opts: &SearchOptions,
) -> Result<SearchOutcome<MorphismTriple>, MorphismError> {
    let total = space_size(
        [
            (src.num_states(), dst.num_states()),
            (src.input().len(), dst.input().len()),
            (src.output().len(), dst.output().len()),
        ],
        opts.budget,
    )?;
    let mut outcome = SearchOutcome {
        found: None,
        refuted: 0,
        log: Vec::new(),
    };
    if same_shape(src, dst) {
        let id = MorphismTriple::identity(src);
        if verify_homomorphism(src, dst, &id)?.is_verified() {
            outcome.found = Some(id);
            return Ok(outcome);
        }
    }
    let (nb, mb) = (src.output().len(), dst.output().len());
    let block = count_maps(nb, mb).expect("bounded by the total");
    for mu1 in Maps::new(src.num_states(), dst.num_states()) {
        for mu2 in Maps::new(src.input().len(), dst.input().len()) {
            let mut forced: Vec<Option<u32>> = vec![None; nb];
            let mut failure = None;
            for (q, a, next, out) in src.transitions() {
                let mq = StateId(mu1[q.index()]);
                let ma = Letter(mu2[a.index()]);
                if mu1[next.index()] != dst.next(mq, ma).0 {
                    failure = Some((q, a, RefutationKind::Transition));
                    break;
                }
                let want = dst.out(mq, ma).0;
                match forced[out.index()] {
                    Some(b) if b != want => {
                        failure = Some((q, a, RefutationKind::Output));
                        break;
                    }
                    _ => forced[out.index()] = Some(want),
                }
            }
            match failure {
                Some((q, a, kind)) => {
                    outcome.refuted += block;
                    if opts.record_log {
                        outcome.log.push(Refutation {
                            states: states_of(&mu1),
                            inputs: letters_of(&mu2),
                            state: q,
                            word: Word::from(vec![a]),
                            kind,
                            candidates: block,
                        });
                    }
                }
                None => {
                    let mu3 = least_completion(&forced);
                    outcome.refuted += rank_of(&mu3, mb);
                    outcome.found = Some(MorphismTriple {
                        states: states_of(&mu1),
                        inputs: letters_of(&mu2),
                        outputs: letters_of(&mu3),
                    });
                    return Ok(outcome);
                }
            }
        }
    }
    debug_assert_eq!(outcome.refuted, total);
    Ok(outcome)
}

/// Checks `q*u = h₃(h₁(q)*′h₂(u))` for all states and all `|u| ≤ depth`.
pub fn verify_simulation(
    target: &Machine,
    by: &Machine,
    t: &SimulationTriple,
    depth: usize,
) -> Result<Verification, MorphismError> {
    let ok = t.states.len() == target.num_states()
        && t.inputs.len() == target.input().len()
        && t.outputs.len() == by.output().len()
        && t.states.iter().all(|q| q.index() < by.num_states())
        && t.inputs.iter().all(|&a| by.input().contains(a))
        && t.outputs.iter().all(|&b| target.output().contains(b));
    if !ok {
        return Err(MorphismError::PartialTriple(format!(
            "simulation of {} by {} has the wrong shape",
            target.name(),
            by.name()
        )));
    }
    for q in target.states() {
        for u in target.input().words_up_to(depth) {
            let expect = target.run_from(q, &u).expect("in range").1;
            let hu: Word = u.iter().map(|a| t.inputs[a.index()]).collect();
            let got: Word = by
                .run_from(t.states[q.index()], &hu)
                .expect("in range")
                .1
                .iter()
                .map(|b| t.outputs[b.index()])
                .collect();
            if got != expect {
                return Ok(Verification::Refuted {
                    state: q,
                    word: u,
                    kind: RefutationKind::Output,
                });
            }
        }
    }
    Ok(Verification::Verified)
}

/// Searches all simulations of `target` by `by`, verifying each candidate on
/// words of length at most `depth`. Rejections are sound; acceptance holds
/// up to that resolution.
pub fn find_simulation(
    target: &Machine,
    by: &Machine,
    depth: usize,
    opts: &SearchOptions,
) -> Result<SearchOutcome<SimulationTriple>, MorphismError> {
    if depth == 0 {
        return Err(MorphismError::InvalidDepth);
    }
    let total = space_size(
        [
            (target.num_states(), by.num_states()),
            (target.input().len(), by.input().len()),
            (by.output().len(), target.output().len()),
        ],
        opts.budget,
    )?;
    let mut outcome = SearchOutcome {
        found: None,
        refuted: 0,
        log: Vec::new(),
    };
    if same_shape(target, by) {
        let id = SimulationTriple {
            states: target.states().collect(),
            inputs: target.input().letters().collect(),
            outputs: by.output().letters().collect(),
        };
        if verify_simulation(target, by, &id, depth)?.is_verified() {
            outcome.found = Some(id);
            return Ok(outcome);
        }
    }
    let probes: Vec<Word> = target.input().words_up_to(depth).collect();
    let expected: Vec<Vec<Word>> = target
        .states()
        .map(|q| {
            probes
                .iter()
                .map(|u| target.run_from(q, u).expect("in range").1)
                .collect()
        })
        .collect();
    let (nb, mb) = (by.output().len(), target.output().len());
    let block = count_maps(nb, mb).expect("bounded by the total");
    for h1 in Maps::new(target.num_states(), by.num_states()) {
        for h2 in Maps::new(target.input().len(), by.input().len()) {
            let mut forced: Vec<Option<u32>> = vec![None; nb];
            let mut failure = None;
            'probe: for q in target.states() {
                for (u, expect) in probes.iter().zip(&expected[q.index()]) {
                    let hu: Word = u.iter().map(|a| Letter(h2[a.index()])).collect();
                    let image = by
                        .run_from(StateId(h1[q.index()]), &hu)
                        .expect("in range")
                        .1;
                    for (b_by, b_target) in image.iter().zip(expect.iter()) {
                        match forced[b_by.index()] {
                            Some(b) if b != b_target.0 => {
                                failure = Some((q, u.clone()));
                                break 'probe;
                            }
                            _ => forced[b_by.index()] = Some(b_target.0),
                        }
                    }
                }
            }
            match failure {
                Some((q, u)) => {
                    outcome.refuted += block;
                    if opts.record_log {
                        outcome.log.push(Refutation {
                            states: states_of(&h1),
                            inputs: letters_of(&h2),
                            state: q,
                            word: u,
                            kind: RefutationKind::Output,
                            candidates: block,
                        });
                    }
                }
                None => {
                    let h3 = least_completion(&forced);
                    outcome.refuted += rank_of(&h3, mb);
                    outcome.found = Some(SimulationTriple {
                        states: states_of(&h1),
                        inputs: letters_of(&h2),
                        outputs: letters_of(&h3),
                    });
                    return Ok(outcome);
                }
            }
        }
    }
    debug_assert_eq!(outcome.refuted, total);
    Ok(outcome)
}

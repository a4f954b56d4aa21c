//! Test-side reference machines. Everything here is computed from plain
//! index tables, without going through the library's stepping code.

#![allow(dead_code)]

use mealy::machine::RawMachine;
use mealy::Machine;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Transition table on `0..n` states, `0..p` inputs and `0..b` outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub n: usize,
    pub p: usize,
    pub b: usize,
    pub next: Vec<usize>,
    pub out: Vec<usize>,
}

impl Table {
    pub fn random(rng: &mut impl Rng, n: usize, p: usize, b: usize) -> Self {
        Self {
            n,
            p,
            b,
            next: (0..n * p).map(|_| rng.gen_range(0..n)).collect(),
            out: (0..n * p).map(|_| rng.gen_range(0..b)).collect(),
        }
    }

    /// Every state permutes the alphabet.
    pub fn random_invertible(rng: &mut impl Rng, n: usize, p: usize) -> Self {
        let mut out = Vec::with_capacity(n * p);
        for _ in 0..n {
            let mut perm: Vec<usize> = (0..p).collect();
            perm.shuffle(rng);
            out.extend(perm);
        }
        Self {
            n,
            p,
            b: p,
            next: (0..n * p).map(|_| rng.gen_range(0..n)).collect(),
            out,
        }
    }

    pub fn run(&self, q: usize, u: &[usize]) -> (usize, Vec<usize>) {
        let mut q = q;
        let mut out = Vec::with_capacity(u.len());
        for &a in u {
            out.push(self.out[q * self.p + a]);
            q = self.next[q * self.p + a];
        }
        (q, out)
    }

    pub fn to_machine(&self, name: &str) -> Machine {
        let mut raw = RawMachine::new(name)
            .states((0..self.n).map(|q| format!("s{q}")))
            .inputs((0..self.p).map(|a| a.to_string()))
            .outputs((0..self.b).map(|a| a.to_string()));
        for q in 0..self.n {
            for a in 0..self.p {
                let i = q * self.p + a;
                raw = raw.row(
                    &format!("s{q}"),
                    &a.to_string(),
                    &format!("s{}", self.next[i]),
                    &self.out[i].to_string(),
                );
            }
        }
        raw.validate().expect("random table is total")
    }
}

/// All words over `0..p` of length at most `max`, shortest first.
pub fn words(p: usize, max: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &level {
            for a in 0..p {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

pub fn to_indices(w: &[mealy::Letter]) -> Vec<usize> {
    w.iter().map(|a| a.0 as usize).collect()
}

pub fn to_word(w: &[usize]) -> mealy::Word {
    mealy::Word::from_indices(w.iter().map(|&a| a as u32))
}

/// Whether `(m1, q1)` and `(m2, q2)` agree on every word of length at most
/// `depth`, by depth-first search over the input tree.
pub fn same_function(m1: &Table, q1: usize, m2: &Table, q2: usize, depth: usize) -> bool {
    assert_eq!(m1.p, m2.p);
    let mut stack = vec![(q1, q2, 0usize)];
    while let Some((s1, s2, d)) = stack.pop() {
        if d == depth {
            continue;
        }
        for a in 0..m1.p {
            let (i1, i2) = (s1 * m1.p + a, s2 * m2.p + a);
            if m1.out[i1] != m2.out[i2] {
                return false;
            }
            stack.push((m1.next[i1], m2.next[i2], d + 1));
        }
    }
    true
}

/// A copy of `t` with every state duplicated once and transitions sent to a
/// random copy of their target, then with the states shuffled. The result
/// computes the same functions as `t` from corresponding states.
/// Returns the table and the image of each original state.
pub fn bloated(rng: &mut impl Rng, t: &Table, extra: usize) -> (Table, Vec<usize>) {
    let n = t.n + extra;
    // copy i < t.n is original state i; copy t.n + j duplicates original dup[j]
    let dup: Vec<usize> = (0..extra).map(|_| rng.gen_range(0..t.n)).collect();
    let original = |c: usize| if c < t.n { c } else { dup[c - t.n] };
    let copies_of = |q: usize| -> Vec<usize> { (0..n).filter(|&c| original(c) == q).collect() };
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut next = vec![0; n * t.p];
    let mut out = vec![0; n * t.p];
    for c in 0..n {
        for a in 0..t.p {
            let i = original(c) * t.p + a;
            let targets = copies_of(t.next[i]);
            let target = targets[rng.gen_range(0..targets.len())];
            next[perm[c] * t.p + a] = perm[target];
            out[perm[c] * t.p + a] = t.out[i];
        }
    }
    let image = (0..t.n).map(|q| perm[q]).collect();
    (
        Table {
            n,
            p: t.p,
            b: t.b,
            next,
            out,
        },
        image,
    )
}

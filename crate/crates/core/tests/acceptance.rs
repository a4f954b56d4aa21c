//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines appear in order on every run.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use common::{bloated, rng, same_function, to_indices, to_word, words, Table};
use mealy::algebra::{canonicalize, enumerate, orbit_witness, power_patterns, EnumBounds, Status};
use mealy::catalog;
use mealy::compose::cascade;
use mealy::invert::{act, invert, SignedLetter};
use mealy::morphism::{find_homomorphism, find_simulation, verify_homomorphism, SearchOptions};
use mealy::seqfn::{
    canonical_tree_labeling, check_endomorphism, check_sequential, explore_quotients, level_count,
    synthesize, RegularTreeModel, RootedTree, SeqFnOracle,
};
use mealy::words::Alphabet;
use mealy::{InitialMachine, Letter, StateId, Word};

type Outcome = Result<String, String>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let result = f();
    let took = start.elapsed();
    match (result, limit) {
        (Ok(_), Some(l)) if took >= l => Err(format!("took {took:.2?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg} in {took:.2?}")),
        (Err(msg), _) => Err(msg),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn klein_four() -> Outcome {
    let v20 = catalog::v20();
    let r = enumerate(
        &v20,
        EnumBounds {
            max_elems: 100,
            max_len: 10,
        },
        false,
    )
    .map_err(|e| e.to_string())?;
    ensure(r.status == Status::Finite, || "not finite".into())?;
    ensure(r.len() == 4, || format!("{} elements", r.len()))?;
    // reference table, labels I, p, q, pq
    let reference = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    let label = |i: usize| -> Result<usize, String> {
        let w: String = r.elements[i]
            .witness
            .iter()
            .map(|l| v20.state_name(l.state))
            .collect();
        match w.as_str() {
            "pp" => Ok(0),
            "p" => Ok(1),
            "q" => Ok(2),
            "pq" => Ok(3),
            other => Err(format!("unexpected witness {other}")),
        }
    };
    let cayley = r.cayley.as_ref().ok_or("no table")?;
    for i in 0..4 {
        for j in 0..4 {
            let got = label(cayley[i][j])?;
            ensure(got == reference[label(i)?][label(j)?], || {
                format!("entry ({i},{j}) differs")
            })?;
        }
    }
    Ok("Finite, 4 elements, table matches after relabeling".into())
}

fn inverse_machine() -> Outcome {
    let v12 = catalog::v12();
    let inv = invert(&v12).map_err(|e| e.to_string())?.into_machine();
    // reference rows (state, input, target, output) of the inverse
    let reference = [(0, 0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0), (1, 1, 0, 1)];
    let mut matched = 0;
    for (q, a, t, b) in reference {
        let (got_t, got_b) = inv.step(StateId(q), Letter(a)).map_err(|e| e.to_string())?;
        matched += usize::from(got_t == StateId(t)) + usize::from(got_b == Letter(b));
    }
    ensure(matched == 8, || format!("{matched}/8 entries"))?;
    let first = InitialMachine::new(v12, StateId(0)).unwrap();
    let second = InitialMachine::new(inv, StateId(0)).unwrap();
    let c = cascade(&first, &second).map_err(|e| e.to_string())?;
    ensure(canonicalize(c.machine()).is_identity(), || {
        "cascade is not the identity".into()
    })?;
    Ok("8/8 entries, cascade canonicalizes to identity".into())
}

fn cascade_equations() -> Outcome {
    let mut r = rng(3);
    let mut checks = 0usize;
    for pair in 0..100 {
        let p = r.gen_range(1..=3);
        let (n1, n2) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let t1 = Table::random(&mut r, n1, p, p);
        let t2 = Table::random(&mut r, n2, p, p);
        let (m1, m2) = (t1.to_machine("A"), t2.to_machine("B"));
        let c = cascade(
            &InitialMachine::new(m1, StateId(0)).unwrap(),
            &InitialMachine::new(m2, StateId(0)).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let product = c.machine().machine();
        for q in 0..t1.n {
            for q2 in 0..t2.n {
                let s = c.state(StateId(q2 as u32), StateId(q as u32));
                for u in words(p, 5) {
                    let (q_end, mid) = t1.run(q, &u);
                    let (q2_end, expect) = t2.run(q2, &mid);
                    let (end, out) = product
                        .run_from(s, &to_word(&u))
                        .map_err(|e| e.to_string())?;
                    let pair_ok = c.pair(end) == (StateId(q2_end as u32), StateId(q_end as u32));
                    ensure(pair_ok && to_indices(&out) == expect, || {
                        format!("pair {pair}: ({q2},{q}) on {u:?}")
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!(
        "100 pairs, {checks} (state, word) checks, 0 failures"
    ))
}

fn inverse_laws() -> Outcome {
    let mut r = rng(4);
    let mut checks = 0usize;
    for i in 0..50 {
        let p = r.gen_range(1..=3);
        let n = r.gen_range(1..=4);
        let t = Table::random_invertible(&mut r, n, p);
        let m = t.to_machine("M");
        for q in 0..t.n {
            let (pos, neg) = (
                SignedLetter::pos(StateId(q as u32)),
                SignedLetter::neg(StateId(q as u32)),
            );
            for u in words(p, 4) {
                let w = to_word(&u);
                for word in [[pos, neg], [neg, pos]] {
                    let back = act(&m, &word, &w).map_err(|e| e.to_string())?;
                    ensure(back == w, || format!("machine {i}, state {q}, {u:?}"))?;
                }
                // the inverse image is the unique preimage under the table
                let image = act(&m, &[neg], &w).map_err(|e| e.to_string())?;
                ensure(t.run(q, &to_indices(&image)).1 == u, || {
                    format!("machine {i}: preimage of {u:?}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "50 machines, {checks} (state, word) checks, 0 failures"
    ))
}

fn canonical_soundness() -> Outcome {
    let mut r = rng(5);
    let (mut equal, mut differ) = (0, 0);
    for i in 0..50 {
        let n1 = r.gen_range(1..=4);
        let t1 = Table::random(&mut r, n1, 2, 2);
        let (t2, start2) = if i % 2 == 0 {
            // an equivalent machine in disguise, sometimes perturbed
            let n2 = r.gen_range(n1..=16 / n1);
            let (mut t2, image) = bloated(&mut r, &t1, n2 - n1);
            if i % 6 == 0 {
                let k = r.gen_range(0..t2.out.len());
                t2.out[k] ^= 1;
            }
            (t2, image[0])
        } else {
            let n2 = r.gen_range(1..=16 / n1);
            let t2 = Table::random(&mut r, n2, 2, 2);
            let start = r.gen_range(0..n2);
            (t2, start)
        };
        let depth = t1.n * t2.n;
        let functional = same_function(&t1, 0, &t2, start2, depth);
        let c1 = canonicalize(&InitialMachine::new(t1.to_machine("A"), StateId(0)).unwrap());
        let c2 =
            canonicalize(&InitialMachine::new(t2.to_machine("B"), StateId(start2 as u32)).unwrap());
        ensure((c1 == c2) == functional, || {
            format!("pair {i}: structural {} functional {functional}", c1 == c2)
        })?;
        if functional {
            equal += 1;
        } else {
            differ += 1;
        }
    }
    Ok(format!(
        "50 pairs ({equal} equal, {differ} different), 0 disagreements"
    ))
}

fn synthesis() -> Outcome {
    let mut count = 0;
    for m in [
        catalog::v11(),
        catalog::v12(),
        catalog::v12_inverse(),
        catalog::v20(),
        catalog::odometer(),
    ] {
        for q in m.states() {
            let im = InitialMachine::new(m.clone(), q).unwrap();
            let expected = canonicalize(&im).num_states();
            let f = SeqFnOracle::from_machine(im.clone());
            let table = explore_quotients(&f, 4, 64).map_err(|e| e.to_string())?;
            ensure(
                table.closed && table.representatives.len() == expected,
                || {
                    format!(
                        "{}@{}: {} representatives, expected {expected}",
                        m.name(),
                        m.state_name(q),
                        table.representatives.len()
                    )
                },
            )?;
            let synth = synthesize(&table, &f).map_err(|e| e.to_string())?;
            for u in m.input().words_up_to(4) {
                ensure(synth.apply(&u).unwrap() == im.apply(&u).unwrap(), || {
                    format!("{}@{} differs on {u}", m.name(), m.state_name(q))
                })?;
            }
            count += 1;
        }
    }
    Ok(format!(
        "{count} fixture start states closed and agree to depth 4"
    ))
}

fn non_simulation() -> Outcome {
    let (v, w) = (catalog::v12(), catalog::v12_inverse());
    let opts = SearchOptions::default();
    let mut refuted = Vec::new();
    for (target, by) in [(&v, &w), (&w, &v)] {
        let out = find_simulation(target, by, 2, &opts).map_err(|e| e.to_string())?;
        ensure(out.found.is_none(), || {
            format!("{} simulates {}", by.name(), target.name())
        })?;
        refuted.push(out.refuted);
    }
    Ok(format!(
        "None both ways ({} and {} candidates refuted)",
        refuted[0], refuted[1]
    ))
}

fn fixed_point_homomorphism() -> Outcome {
    let mut r = rng(8);
    // odometer: e∘0 = e
    let target = catalog::odometer();
    for i in 0..20 {
        let (n, p, b) = (r.gen_range(1..=4), r.gen_range(1..=3), r.gen_range(1..=3));
        let t = Table::random(&mut r, n, p, b);
        let src = t.to_machine("S");
        let out = find_homomorphism(&src, &target, &SearchOptions::default())
            .map_err(|e| e.to_string())?;
        let triple = out.found.ok_or_else(|| format!("source {i}: none"))?;
        ensure(
            verify_homomorphism(&src, &target, &triple)
                .map_err(|e| e.to_string())?
                .is_verified(),
            || format!("source {i}: triple does not verify"),
        )?;
        // both equations, checked directly against the table
        for q in 0..t.n {
            for a in 0..t.p {
                let k = q * t.p + a;
                let (mq, ma) = (triple.states[q], triple.inputs[a]);
                let (nq, nb) = target.step(mq, ma).unwrap();
                ensure(
                    triple.states[t.next[k]] == nq && triple.outputs[t.out[k]] == nb,
                    || format!("source {i}: equation fails at ({q},{a})"),
                )?;
            }
        }
    }
    Ok("20 sources, verified triple each".into())
}

fn infiniteness() -> Outcome {
    let odo = catalog::odometer();
    let r = enumerate(
        &odo,
        EnumBounds {
            max_elems: 50,
            max_len: 200,
        },
        true,
    )
    .map_err(|e| e.to_string())?;
    ensure(r.status == Status::LowerBoundOnly && r.len() >= 50, || {
        format!("{:?} with {} elements", r.status, r.len())
    })?;
    let zero = Alphabet::binary().parse_periodic(":0").unwrap();
    let patterns = power_patterns(SignedLetter::pos(StateId(0)), 8);
    let w = orbit_witness(&odo, &patterns, &zero, 8).map_err(|e| e.to_string())?;
    // s^n adds n to the little-endian binary number
    for (n, image) in (1..=8usize).zip(&w.images) {
        let expect: Vec<usize> = (0..w.probe_length).map(|i| (n >> i) & 1).collect();
        ensure(to_indices(image) == expect, || format!("s^{n} image wrong"))?;
    }
    ensure(w.distinct == 8, || format!("{} distinct", w.distinct))?;
    Ok(format!(
        "{} elements (lower bound), orbit certifies 8",
        r.len()
    ))
}

fn tree_facts() -> Outcome {
    for p in [2usize, 3] {
        let model = RegularTreeModel::new(p, 6);
        for n in 0..=6usize {
            let explicit = words(p, n).into_iter().filter(|w| w.len() == n).count();
            let counted = level_count(p as u64, n as u32).map_err(|e| e.to_string())?;
            ensure(
                counted as usize == explicit && model.level(n).count() == explicit,
                || format!("p={p} n={n}"),
            )?;
        }
    }
    let mut r = rng(10);
    let base = RootedTree::regular(2, 4);
    let arcs: Vec<(u32, u32)> = base.arcs().collect();
    let size = base.len() as u32;
    for i in 0..20 {
        let mut names: Vec<u32> = (0..size).map(|v| v * 7 + 100).collect();
        names.shuffle(&mut r);
        let mut relabeled: Vec<(u32, u32)> = arcs
            .iter()
            .map(|&(a, b)| (names[a as usize], names[b as usize]))
            .collect();
        relabeled.shuffle(&mut r);
        let tree = RootedTree::from_arcs(names.iter().copied(), &relabeled);
        let labels = canonical_tree_labeling(&tree, 2, 4).map_err(|e| format!("tree {i}: {e}"))?;
        let image: BTreeSet<Word> = labels.values().cloned().collect();
        let all: BTreeSet<Word> = words(2, 4).iter().map(|w| to_word(w)).collect();
        ensure(labels.len() == size as usize && image == all, || {
            format!("tree {i}: not a bijection")
        })?;
        for (a, b) in tree.arcs() {
            let (la, lb) = (&labels[&a], &labels[&b]);
            ensure(lb.len() == la.len() + 1 && la.is_prefix_of(lb), || {
                format!("tree {i}: arc not preserved")
            })?;
        }
        ensure(
            labels.values().filter(|w| w.is_empty()).count() == 1,
            || format!("tree {i}: root"),
        )?;
    }
    Ok("level counts for p in {2,3}, n <= 6; 20 relabeled trees".into())
}

fn reverse_oracle(p: usize) -> SeqFnOracle {
    SeqFnOracle::from_fn(Alphabet::numeric(p), Alphabet::numeric(p), |u| {
        let mut v: Vec<Letter> = u.to_vec();
        v.reverse();
        Word::from(v)
    })
}

fn metaproperty() -> Outcome {
    let mut r = rng(11);
    let mut oracles: Vec<(String, usize, SeqFnOracle)> = Vec::new();
    for i in 0..10 {
        let p = r.gen_range(1..=3);
        let n = r.gen_range(1..=4);
        let t = Table::random(&mut r, n, p, p);
        let im = InitialMachine::new(t.to_machine("M"), StateId(0)).unwrap();
        oracles.push((format!("machine {i}"), p, SeqFnOracle::from_machine(im)));
    }
    for p in 1..=10 {
        let size = (p - 1) % 3 + 1;
        oracles.push((
            format!("identity {size}"),
            size,
            SeqFnOracle::identity(Alphabet::numeric(size)),
        ));
        oracles.push((format!("reverse {size}"), size, reverse_oracle(size)));
    }
    let mut tally = BTreeMap::new();
    for (name, p, f) in &oracles {
        let seq = check_sequential(f, 4).map_err(|e| e.to_string())?.holds();
        let endo = check_endomorphism(f, *p, 4)
            .map_err(|e| e.to_string())?
            .holds();
        ensure(seq == endo, || {
            format!("{name}: sequential {seq}, endomorphism {endo}")
        })?;
        *tally.entry(seq).or_insert(0) += 1;
    }
    Ok(format!(
        "{} oracles, verdicts agree ({} hold, {} fail)",
        oracles.len(),
        tally.get(&true).unwrap_or(&0),
        tally.get(&false).unwrap_or(&0)
    ))
}

fn main() -> ExitCode {
    let second = Duration::from_secs(1);
    let criteria: Vec<(&str, Outcome)> = vec![
        ("Klein four-group", timed(Some(second), klein_four)),
        ("inverse machine", timed(Some(second), inverse_machine)),
        ("cascade equations", timed(None, cascade_equations)),
        ("inverse laws", timed(None, inverse_laws)),
        ("canonical-form soundness", timed(None, canonical_soundness)),
        ("synthesis", timed(None, synthesis)),
        ("non-simulation", timed(Some(5 * second), non_simulation)),
        (
            "fixed-point homomorphism",
            timed(None, fixed_point_homomorphism),
        ),
        (
            "infiniteness lower bound",
            timed(Some(10 * second), infiniteness),
        ),
        ("tree facts", timed(None, tree_facts)),
        ("sequential metaproperty", timed(None, metaproperty)),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in criteria.iter().enumerate() {
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Bounded checks of the structural laws every machine should satisfy.

use std::fmt;

use crate::compose::cascade;
use crate::invert::{invert, is_invertible};
use crate::machine::{InitialMachine, Machine};
use crate::seqfn::{check_sequential, SeqFnOracle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawStatus {
    Holds,
    Fails(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: &'static str,
    pub status: LawStatus,
}

impl LawCheck {
    pub fn failed(&self) -> bool {
        matches!(self.status, LawStatus::Fails(_))
    }
}

impl fmt::Display for LawCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            LawStatus::Holds => write!(f, "ok    {}", self.law),
            LawStatus::Fails(why) => write!(f, "FAIL  {}: {why}", self.law),
            LawStatus::Skipped(why) => write!(f, "skip  {}: {why}", self.law),
        }
    }
}

fn verdict(law: &'static str, failure: Option<String>) -> LawCheck {
    LawCheck {
        law,
        status: failure.map_or(LawStatus::Holds, LawStatus::Fails),
    }
}

fn show(m: &Machine, w: &[crate::words::Letter]) -> String {
    m.input().format_word(w)
}

fn extension_laws(m: &Machine, depth: usize) -> Option<String> {
    for q in m.states() {
        for u in m.input().words_up_to(depth) {
            let (qu, out_u) = m.run_from(q, &u).ok()?;
            for v in m.input().words_up_to(depth - u.len()) {
                let (quv, out_uv) = m.run_from(q, &u.concat(&v)).ok()?;
                let (tail_state, out_v) = m.run_from(qu, &v).ok()?;
                if quv != tail_state || out_uv != out_u.concat(&out_v) {
                    return Some(format!(
                        "state {} with u = {}, v = {}",
                        m.state_name(q),
                        show(m, &u),
                        show(m, &v)
                    ));
                }
            }
        }
    }
    None
}

fn length_and_prefix(m: &Machine, depth: usize) -> Option<String> {
    for q in m.states() {
        for w in m.input().words_up_to(depth) {
            let out = m.run_from(q, &w).ok()?.1;
            if out.len() != w.len() {
                return Some(format!(
                    "|{}*{}| ≠ |{}|",
                    m.state_name(q),
                    show(m, &w),
                    show(m, &w)
                ));
            }
            for n in 0..w.len() {
                let head = m.run_from(q, &w.slice(0, n)).ok()?.1;
                if !head.is_prefix_of(&out) {
                    return Some(format!("state {} on {}", m.state_name(q), show(m, &w)));
                }
            }
        }
    }
    None
}

fn cascade_equations(m: &Machine, depth: usize) -> Option<String> {
    for q1 in m.states() {
        for q2 in m.states() {
            let first = InitialMachine::new(m.clone(), q1).ok()?;
            let second = InitialMachine::new(m.clone(), q2).ok()?;
            let c = cascade(&first, &second).ok()?;
            for u in m.input().words_up_to(depth) {
                let (end, out) = c.machine().run(&u).ok()?;
                let (t1, mid) = m.run_from(q1, &u).ok()?;
                let (t2, expect) = m.run_from(q2, &mid).ok()?;
                if out != expect || c.pair(end) != (t2, t1) {
                    return Some(format!(
                        "states ({},{}) on {}",
                        m.state_name(q2),
                        m.state_name(q1),
                        show(m, &u)
                    ));
                }
            }
        }
    }
    None
}

fn inverse_laws(m: &Machine, inv: &Machine, depth: usize) -> Option<String> {
    for q in m.states() {
        for u in m.input().words_up_to(depth) {
            let there_back = inv.run_from(q, &m.run_from(q, &u).ok()?.1).ok()?.1;
            let back_there = m.run_from(q, &inv.run_from(q, &u).ok()?.1).ok()?.1;
            if there_back != u || back_there != u {
                return Some(format!("state {} on {}", m.state_name(q), show(m, &u)));
            }
        }
    }
    None
}

/// Runs every applicable law on all words up to `depth`, in a fixed order.
pub fn check_machine(m: &Machine, depth: usize) -> Vec<LawCheck> {
    let mut out = vec![
        verdict("extension laws", extension_laws(m, depth)),
        verdict(
            "length and prefix preservation",
            length_and_prefix(m, depth),
        ),
    ];
    let sequential = m.states().find_map(|q| {
        let im = InitialMachine::new(m.clone(), q).ok()?;
        match check_sequential(&SeqFnOracle::from_machine(im), depth) {
            Ok(v) if v.holds() => None,
            Ok(v) => Some(format!("state {}: {:?}", m.state_name(q), v.violation)),
            Err(e) => Some(e.to_string()),
        }
    });
    out.push(verdict("sequential function", sequential));
    if !m.is_endomorphic() {
        let why = "input and output alphabets differ".to_string();
        out.push(LawCheck {
            law: "cascade equations",
            status: LawStatus::Skipped(why.clone()),
        });
        out.push(LawCheck {
            law: "inverse laws",
            status: LawStatus::Skipped(why),
        });
        return out;
    }
    out.push(verdict("cascade equations", cascade_equations(m, depth)));
    match is_invertible(m) {
        Ok(true) => {
            let inv = invert(m).expect("invertible").into_machine();
            out.push(verdict("inverse laws", inverse_laws(m, &inv, depth)));
        }
        _ => out.push(LawCheck {
            law: "inverse laws",
            status: LawStatus::Skipped("not invertible".into()),
        }),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn fixtures_pass() {
        for m in [
            catalog::v11(),
            catalog::v12(),
            catalog::v20(),
            catalog::odometer(),
        ] {
            let report = check_machine(&m, 4);
            assert_eq!(report.len(), 5);
            assert!(
                report.iter().all(|c| !c.failed()),
                "{}: {report:?}",
                m.name()
            );
        }
        let v11 = check_machine(&catalog::v11(), 3);
        assert_eq!(v11[4].status, LawStatus::Skipped("not invertible".into()));
        assert_eq!(v11[4].to_string(), "skip  inverse laws: not invertible");
    }
}

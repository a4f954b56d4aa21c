//! Text formats: machine files (`.mm`) and finite function tables (`.fn`).
//!
//! ```text
//! machine V12
//! in: 0 1
//! out: 0 1
//! states: q0 q1
//! start: q0          # optional
//! q0 0 -> q1 / 1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::machine::{InitialMachine, Machine, MachineError, RawMachine, StateId};
use crate::seqfn::FunctionTable;
use crate::words::{Alphabet, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("line {line}: header `{header}` given twice")]
    DuplicateHeader { line: usize, header: &'static str },
    #[error("line {line}: duplicate row, first given on line {first}")]
    DuplicateRow { line: usize, first: usize },
    #[error("line {line}: unknown state `{name}`")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, name: String },
    #[error("line {line}: |u| = {input} but |v| = {output}")]
    LengthMismatch {
        line: usize,
        input: usize,
        output: usize,
    },
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// A parsed machine together with its declared start state, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineFile {
    pub machine: Machine,
    pub start: Option<StateId>,
}

impl MachineFile {
    /// The declared start state, or the first state when none is declared.
    pub fn initial(self) -> InitialMachine {
        let start = self.start.unwrap_or(StateId(0));
        InitialMachine::new(self.machine, start).expect("start validated on parse")
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(body, _)| body).trim()
}

fn header<'a>(body: &'a str, key: &str) -> Option<&'a str> {
    body.strip_prefix(key)
        .filter(|rest| rest.is_empty() || rest.starts_with([' ', '\t']) || key.ends_with(':'))
        .map(str::trim)
}

struct Headers {
    name: Option<String>,
    inputs: Option<Vec<String>>,
    outputs: Option<Vec<String>>,
    states: Option<Vec<String>>,
    start: Option<(usize, String)>,
}

fn set<T>(
    slot: &mut Option<T>,
    value: T,
    line: usize,
    header: &'static str,
) -> Result<(), FormatError> {
    if slot.is_some() {
        return Err(FormatError::DuplicateHeader { line, header });
    }
    *slot = Some(value);
    Ok(())
}

fn symbols(rest: &str) -> Vec<String> {
    rest.split_whitespace().map(str::to_string).collect()
}

pub fn parse_machine(text: &str) -> Result<MachineFile, FormatError> {
    let mut h = Headers {
        name: None,
        inputs: None,
        outputs: None,
        states: None,
        start: None,
    };
    let mut rows: Vec<(usize, [String; 4])> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = header(body, "machine") {
            if rest.is_empty() {
                return Err(FormatError::Syntax {
                    line,
                    message: "machine name expected".into(),
                });
            }
            set(&mut h.name, rest.to_string(), line, "machine")?;
        } else if let Some(rest) = header(body, "in:") {
            set(&mut h.inputs, symbols(rest), line, "in")?;
        } else if let Some(rest) = header(body, "out:") {
            set(&mut h.outputs, symbols(rest), line, "out")?;
        } else if let Some(rest) = header(body, "states:") {
            set(&mut h.states, symbols(rest), line, "states")?;
        } else if let Some(rest) = header(body, "start:") {
            set(&mut h.start, (line, rest.to_string()), line, "start")?;
        } else {
            rows.push((line, parse_row(body, line)?));
        }
    }
    let name = h.name.ok_or(FormatError::MissingHeader("machine"))?;
    let inputs = h.inputs.ok_or(FormatError::MissingHeader("in"))?;
    let outputs = h.outputs.ok_or(FormatError::MissingHeader("out"))?;
    let states = h.states.ok_or(FormatError::MissingHeader("states"))?;

    let mut seen: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (line, [q, a, t, b]) in &rows {
        for s in [q, t] {
            if !states.contains(s) {
                return Err(FormatError::UnknownState {
                    line: *line,
                    name: s.clone(),
                });
            }
        }
        for (sym, alphabet) in [(a, &inputs), (b, &outputs)] {
            if !alphabet.contains(sym) {
                return Err(FormatError::UnknownSymbol {
                    line: *line,
                    name: sym.clone(),
                });
            }
        }
        if let Some(&first) = seen.get(&(q.as_str(), a.as_str())) {
            return Err(FormatError::DuplicateRow { line: *line, first });
        }
        seen.insert((q, a), *line);
    }

    let mut raw = RawMachine::new(name)
        .states(states)
        .inputs(inputs)
        .outputs(outputs);
    for (_, [q, a, t, b]) in &rows {
        raw = raw.row(q, a, t, b);
    }
    let machine = raw.validate()?;
    let start = match h.start {
        None => None,
        Some((line, name)) => Some(
            machine
                .state(&name)
                .ok_or(FormatError::UnknownState { line, name })?,
        ),
    };
    Ok(MachineFile { machine, start })
}

fn parse_row(body: &str, line: usize) -> Result<[String; 4], FormatError> {
    let spaced = body.replace("->", " -> ").replace('/', " / ");
    let tokens: Vec<&str> = spaced.split_whitespace().collect();
    match tokens.as_slice() {
        [q, a, "->", t, "/", b] => Ok([q.to_string(), a.to_string(), t.to_string(), b.to_string()]),
        _ => Err(FormatError::Syntax {
            line,
            message: format!("expected `state input -> target / output`, found `{body}`"),
        }),
    }
}

/// Normalized text: header lines in fixed order, one row per `(q, a)` in
/// declaration order, single spaces. `notes` become leading `#` lines.
pub fn emit_machine(m: &Machine, start: Option<StateId>, notes: &[String]) -> String {
    let mut out = String::new();
    for note in notes {
        for l in note.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "machine {}", m.name());
    let _ = writeln!(out, "in: {}", m.input().symbols().join(" "));
    let _ = writeln!(out, "out: {}", m.output().symbols().join(" "));
    let _ = writeln!(out, "states: {}", m.state_names().join(" "));
    if let Some(q) = start {
        let _ = writeln!(out, "start: {}", m.state_name(q));
    }
    for (q, a, t, b) in m.transitions() {
        let _ = writeln!(
            out,
            "{} {} -> {} / {}",
            m.state_name(q),
            m.input().symbol(a),
            m.state_name(t),
            m.output().symbol(b)
        );
    }
    out
}

fn word_error(line: usize, e: WordError) -> FormatError {
    FormatError::Syntax {
        line,
        message: e.to_string(),
    }
}

/// Parses a function table: an `alphabet:` header, an optional `out:`
/// header (defaulting to the input alphabet), then lines `u -> v`.
pub fn parse_function_table(text: &str) -> Result<FunctionTable, FormatError> {
    let mut input: Option<Alphabet> = None;
    let mut output: Option<Alphabet> = None;
    let mut pending: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = header(body, "alphabet:") {
            let a = Alphabet::new(rest.split_whitespace()).map_err(|e| word_error(line, e))?;
            set(&mut input, a, line, "alphabet")?;
        } else if let Some(rest) = header(body, "out:") {
            let a = Alphabet::new(rest.split_whitespace()).map_err(|e| word_error(line, e))?;
            set(&mut output, a, line, "out")?;
        } else if let Some((u, v)) = body.split_once("->") {
            pending.push((line, u.trim().to_string(), v.trim().to_string()));
        } else {
            return Err(FormatError::Syntax {
                line,
                message: format!("expected `u -> v`, found `{body}`"),
            });
        }
    }
    let input = input.ok_or(FormatError::MissingHeader("alphabet"))?;
    let output = output.unwrap_or_else(|| input.clone());
    let mut entries = BTreeMap::new();
    let mut lines = BTreeMap::new();
    for (line, u, v) in pending {
        let u = input.parse_word(&u).map_err(|e| word_error(line, e))?;
        let v = output.parse_word(&v).map_err(|e| word_error(line, e))?;
        if u.len() != v.len() {
            return Err(FormatError::LengthMismatch {
                line,
                input: u.len(),
                output: v.len(),
            });
        }
        if let Some(&first) = lines.get(&u) {
            return Err(FormatError::DuplicateRow { line, first });
        }
        lines.insert(u.clone(), line);
        entries.insert(u, v);
    }
    Ok(FunctionTable {
        input,
        output,
        entries,
    })
}

pub fn emit_function_table(t: &FunctionTable) -> String {
    let mut out = format!("alphabet: {}\n", t.input.symbols().join(" "));
    if t.output != t.input {
        let _ = writeln!(out, "out: {}", t.output.symbols().join(" "));
    }
    for (u, v) in &t.entries {
        let _ = writeln!(
            out,
            "{} -> {}",
            t.input.format_word(u),
            t.output.format_word(v)
        );
    }
    out
}

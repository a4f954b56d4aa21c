//! JSON shapes and text rendering for command output.

use serde::Serialize;

use mealy::algebra::{CanonicalForm, SemigroupResult, Status};
use mealy::invert::format_generator_word;
use mealy::laws::{LawCheck, LawStatus};
use mealy::morphism::{Refutation, RefutationKind};
use mealy::{Machine, StateId};

#[derive(Serialize)]
pub struct Transition {
    pub from: String,
    pub input: String,
    pub to: String,
    pub output: String,
}

#[derive(Serialize)]
pub struct MachineJson {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub states: Vec<String>,
    pub start: Option<String>,
    pub transitions: Vec<Transition>,
}

impl MachineJson {
    pub fn new(m: &Machine, start: Option<StateId>) -> Self {
        Self {
            name: m.name().to_string(),
            inputs: m.input().symbols().to_vec(),
            outputs: m.output().symbols().to_vec(),
            states: m.state_names().to_vec(),
            start: start.map(|q| m.state_name(q).to_string()),
            transitions: m
                .transitions()
                .map(|(q, a, t, b)| Transition {
                    from: m.state_name(q).to_string(),
                    input: m.input().symbol(a).to_string(),
                    to: m.state_name(t).to_string(),
                    output: m.output().symbol(b).to_string(),
                })
                .collect(),
        }
    }
}

/// An enumerated element: its witness word and canonical machine, whose
/// states are numbered `0..states` with `0` the start state.
#[derive(Serialize)]
pub struct ElementJson {
    pub witness: String,
    pub states: usize,
    pub transitions: Vec<CanonicalTransition>,
}

#[derive(Serialize)]
pub struct CanonicalTransition {
    pub from: usize,
    pub input: String,
    pub to: usize,
    pub output: String,
}

#[derive(Serialize)]
pub struct EnumJson {
    pub machine: String,
    pub signed: bool,
    pub status: &'static str,
    pub count: usize,
    pub generators: Vec<String>,
    pub elements: Vec<ElementJson>,
    pub cayley: Option<Vec<Vec<usize>>>,
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Finite => "finite",
        Status::LowerBoundOnly => "lower-bound-only",
    }
}

fn element_json(m: &Machine, witness: String, form: &CanonicalForm) -> ElementJson {
    ElementJson {
        witness,
        states: form.num_states(),
        transitions: form
            .transitions()
            .map(|(q, a, t, b)| CanonicalTransition {
                from: q,
                input: m.input().symbol(a).to_string(),
                to: t,
                output: m.input().symbol(b).to_string(),
            })
            .collect(),
    }
}

pub fn enum_json(m: &Machine, r: &SemigroupResult, signed: bool) -> EnumJson {
    EnumJson {
        machine: m.name().to_string(),
        signed,
        status: status_name(r.status),
        count: r.len(),
        generators: r
            .generators
            .iter()
            .map(|g| format_generator_word(m, &[*g]))
            .collect(),
        elements: r
            .elements
            .iter()
            .map(|e| element_json(m, format_generator_word(m, &e.witness), &e.form))
            .collect(),
        cayley: r.cayley.clone(),
    }
}

pub fn enum_text(m: &Machine, r: &SemigroupResult, table: bool) -> String {
    let mut out = format!(
        "{}: {} {} elements\n",
        m.name(),
        status_name(r.status),
        r.len()
    );
    let labels: Vec<String> = r
        .elements
        .iter()
        .map(|e| format_generator_word(m, &e.witness))
        .collect();
    for (label, e) in labels.iter().zip(&r.elements) {
        let id = if e.form.is_identity() {
            "  identity"
        } else {
            ""
        };
        let n = e.form.num_states();
        let plural = if n == 1 { "" } else { "s" };
        out.push_str(&format!("  {label}  ({n} state{plural}){id}\n"));
    }
    if table {
        match &r.cayley {
            Some(cayley) => out.push_str(&cayley_text(&labels, cayley)),
            None => out.push_str("no table: enumeration did not close\n"),
        }
    }
    out
}

/// Row `x`, column `y` holds `x·y`, where `x` acts first.
fn cayley_text(labels: &[String], cayley: &[Vec<usize>]) -> String {
    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1);
    let pad = |s: &str| format!("{s:<width$}");
    let mut out = format!("{} |", pad(""));
    for l in labels {
        out.push(' ');
        out.push_str(&pad(l));
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    out.push_str(&format!(
        "{}-+{}\n",
        "-".repeat(width),
        "-".repeat((width + 1) * labels.len())
    ));
    for (row, l) in cayley.iter().zip(labels) {
        out.push_str(&format!("{} |", pad(l)));
        for &j in row {
            out.push(' ');
            out.push_str(&pad(&labels[j]));
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct MapJson {
    pub states: Vec<[String; 2]>,
    pub inputs: Vec<[String; 2]>,
    pub outputs: Vec<[String; 2]>,
}

#[derive(Serialize)]
pub struct RefutationJson {
    pub states: Vec<String>,
    pub inputs: Vec<String>,
    pub state: String,
    pub word: String,
    pub kind: &'static str,
    pub candidates: u128,
}

#[derive(Serialize)]
pub struct SearchJson {
    pub found: Option<MapJson>,
    pub refuted: u128,
    pub log: Vec<RefutationJson>,
}

pub fn pairs(domain: &[String], image: impl Iterator<Item = String>) -> Vec<[String; 2]> {
    domain
        .iter()
        .cloned()
        .zip(image)
        .map(|(a, b)| [a, b])
        .collect()
}

pub fn map_text(title: &str, maps: &MapJson) -> String {
    let line = |name: &str, pairs: &[[String; 2]]| {
        let body: Vec<String> = pairs.iter().map(|[a, b]| format!("{a} -> {b}")).collect();
        format!("{name}: {}\n", body.join(", "))
    };
    format!(
        "{title}\n{}{}{}",
        line("states", &maps.states),
        line("inputs", &maps.inputs),
        line("outputs", &maps.outputs)
    )
}

/// `src` supplies the state and input names of the refuted candidate, `dst`
/// the names of their images.
pub fn refutation_json(src: &Machine, dst: &Machine, r: &Refutation) -> RefutationJson {
    RefutationJson {
        states: r
            .states
            .iter()
            .map(|&q| dst.state_name(q).to_string())
            .collect(),
        inputs: r
            .inputs
            .iter()
            .map(|&a| dst.input().symbol(a).to_string())
            .collect(),
        state: src.state_name(r.state).to_string(),
        word: src.input().format_word(&r.word),
        kind: match r.kind {
            RefutationKind::Transition => "transition",
            RefutationKind::Output => "output",
        },
        candidates: r.candidates,
    }
}

pub fn refutation_text(r: &RefutationJson) -> String {
    format!(
        "  [{}] [{}]: {} equation fails at state {} on {} ({} candidates)\n",
        r.states.join(" "),
        r.inputs.join(" "),
        r.kind,
        r.state,
        r.word,
        r.candidates
    )
}

#[derive(Serialize)]
pub struct LawJson {
    pub law: &'static str,
    pub status: &'static str,
    pub detail: Option<String>,
}

pub fn law_json(c: &LawCheck) -> LawJson {
    let (status, detail) = match &c.status {
        LawStatus::Holds => ("holds", None),
        LawStatus::Fails(d) => ("fails", Some(d.clone())),
        LawStatus::Skipped(d) => ("skipped", Some(d.clone())),
    };
    LawJson {
        law: c.law,
        status,
        detail,
    }
}

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mealy::algebra::{
    alternating_patterns, enumerate, orbit_witness, power_order, power_patterns, EnumBounds,
};
use mealy::compose::{cascade, trim};
use mealy::dot::{cayley_dot, machine_dot};
use mealy::format::{emit_machine, parse_function_table, parse_machine, MachineFile};
use mealy::invert::{format_generator_word, invert, parse_generator_word, InvertError};
use mealy::laws::check_machine;
use mealy::morphism::{find_homomorphism, find_simulation, SearchOptions, SearchOutcome};
use mealy::seqfn::{explore_quotients, synthesize, SeqFnOracle};
use mealy::{InitialMachine, Machine, StateId};

mod report;

use report::*;

#[derive(Parser)]
#[command(
    name = "mealy",
    version,
    about = "Mealy machines: run, compose, invert, enumerate, search"
)]
struct Cli {
    /// Output format where the command supports it.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine on a word (`u` or `u:v` with --len).
    Run {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        /// Prefix length for an ultimately periodic input.
        #[arg(long)]
        len: Option<usize>,
        /// Start state, overriding the file.
        #[arg(long)]
        start: Option<String>,
    },
    /// Cascade two machines: the output of the first feeds the second.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Keep only states reachable from the start.
        #[arg(long)]
        trim: bool,
    },
    /// Build the inverse machine.
    Invert {
        machine: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate the semigroup (or, with --signed, the group) generated by the states.
    Enum {
        machine: PathBuf,
        #[arg(long, default_value_t = 1000)]
        max_elems: usize,
        #[arg(long, default_value_t = 16)]
        max_len: usize,
        #[arg(long)]
        signed: bool,
        /// Print the Cayley table.
        #[arg(long)]
        table: bool,
        /// Write the Cayley graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Order of the element named by a generator word.
    Order {
        machine: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Search for a homomorphism between two machines.
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
        /// Print every rejected candidate block.
        #[arg(long)]
        log: bool,
    },
    /// Search for a simulation of the first machine by the second.
    Sim {
        target: PathBuf,
        by: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
        #[arg(long)]
        log: bool,
    },
    /// Count distinct images of a periodic word under generator words.
    Orbit {
        machine: PathBuf,
        /// Ultimately periodic word `u:v`.
        #[arg(long)]
        x: String,
        /// Explicit generator words.
        #[arg(long, value_delimiter = ',')]
        pattern: Vec<String>,
        /// Use the powers g, g², …, g^k of this generator.
        #[arg(long, conflicts_with_all = ["pattern", "alternate"])]
        powers: Option<String>,
        /// Use the alternating words a, ab, aba, … of length up to k.
        #[arg(long, value_delimiter = ',', num_args = 2, conflicts_with = "pattern")]
        alternate: Vec<String>,
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
    /// Synthesize a machine from a function table (`.fn`) or machine file.
    Synth {
        source: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 256)]
        max_states: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the structural laws on all words up to a depth.
    Check {
        machine: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Render a machine in DOT format.
    Dot {
        machine: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A completed command whose answer is negative (exit status 1).
#[derive(Debug)]
struct Negative(String);

impl std::fmt::Display for Negative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Negative {}

fn negative<T>(msg: impl Into<String>) -> Result<T> {
    Err(Negative(msg.into()).into())
}

fn load(path: &Path) -> Result<MachineFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_machine(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn render_machine(
    format: Format,
    m: &Machine,
    start: Option<StateId>,
    notes: &[String],
) -> Result<String> {
    Ok(match format {
        Format::Text => emit_machine(m, start, notes),
        Format::Json => json(&MachineJson::new(m, start))?,
        Format::Dot => machine_dot(m, start),
    })
}

fn run(cli: Cli) -> Result<()> {
    let format = cli.format;
    match cli.command {
        Command::Run {
            machine,
            input,
            len,
            start,
        } => {
            let file = load(&machine)?;
            let im = match start {
                Some(s) => InitialMachine::by_name(file.machine, &s)?,
                None => file.initial(),
            };
            let m = im.machine();
            let u = match (input.contains(':'), len) {
                (true, Some(n)) => m.input().parse_periodic(&input)?.prefix(n),
                (true, None) => bail!("a periodic input needs --len"),
                (false, _) => m.input().parse_word(&input)?,
            };
            let (q, out) = im.run(&u)?;
            let (state, output) = (m.state_name(q), m.output().format_word(&out));
            #[derive(Serialize)]
            struct RunJson<'a> {
                state: &'a str,
                output: String,
            }
            match format {
                Format::Json => emit(None, &json(&RunJson { state, output })?),
                _ => emit(None, &format!("state {state} output {output}\n")),
            }
        }
        Command::Compose {
            first,
            second,
            output,
            trim: do_trim,
        } => {
            let (a, b) = (load(&first)?.initial(), load(&second)?.initial());
            let product = cascade(&a, &b)?.into_machine();
            let product = if do_trim { trim(&product) } else { product };
            let notes = vec![
                format!("cascade of {} then {}", first.display(), second.display()),
                "state (s2,s1) pairs a state of the second machine with one of the first".into(),
            ];
            let text = render_machine(format, product.machine(), Some(product.start()), &notes)?;
            emit(output.as_deref(), &text)
        }
        Command::Invert { machine, output } => {
            let file = load(&machine)?;
            let inv = match invert(&file.machine) {
                Ok(inv) => inv,
                Err(e @ InvertError::NotInvertible { .. }) => return negative(e.to_string()),
                Err(e) => return Err(e.into()),
            };
            let notes = vec![format!("inverse of {}", machine.display())];
            let text = render_machine(format, inv.machine(), file.start, &notes)?;
            emit(output.as_deref(), &text)
        }
        Command::Enum {
            machine,
            max_elems,
            max_len,
            signed,
            table,
            dot,
        } => {
            let m = load(&machine)?.machine;
            let r = enumerate(&m, EnumBounds { max_elems, max_len }, signed)?;
            if let Some(path) = dot {
                emit(Some(&path), &cayley_dot(&m, &r)?)?;
            }
            let text = match format {
                Format::Text => enum_text(&m, &r, table),
                Format::Json => json(&enum_json(&m, &r, signed))?,
                Format::Dot => cayley_dot(&m, &r)?,
            };
            emit(None, &text)
        }
        Command::Order {
            machine,
            word,
            limit,
        } => {
            let m = load(&machine)?.machine;
            let x = parse_generator_word(&m, &word)?;
            let order = power_order(&m, &x, limit)?;
            let label = format_generator_word(&m, &x);
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct OrderJson {
                        word: String,
                        order: Option<usize>,
                        limit: usize,
                    }
                    emit(
                        None,
                        &json(&OrderJson {
                            word: label,
                            order,
                            limit,
                        })?,
                    )?;
                }
                _ => match order {
                    Some(n) => emit(None, &format!("order {label} = {n}\n"))?,
                    None => emit(None, &format!("order {label} > {limit}\n"))?,
                },
            }
            match order {
                Some(_) => Ok(()),
                None => negative(format!("more than {limit} distinct powers")),
            }
        }
        Command::Hom {
            source,
            target,
            budget,
            log,
        } => {
            let (src, dst) = (load(&source)?.machine, load(&target)?.machine);
            let opts = SearchOptions {
                budget,
                record_log: log,
            };
            let outcome = find_homomorphism(&src, &dst, &opts)?;
            let found = outcome.found.as_ref().map(|t| MapJson {
                states: pairs(
                    src.state_names(),
                    t.states.iter().map(|&q| dst.state_name(q).to_string()),
                ),
                inputs: pairs(
                    src.input().symbols(),
                    t.inputs.iter().map(|&a| dst.input().symbol(a).to_string()),
                ),
                outputs: pairs(
                    src.output().symbols(),
                    t.outputs
                        .iter()
                        .map(|&b| dst.output().symbol(b).to_string()),
                ),
            });
            let title = format!("homomorphism {} -> {}", src.name(), dst.name());
            report_search(format, &title, &src, &dst, outcome, found)
        }
        Command::Sim {
            target,
            by,
            depth,
            budget,
            log,
        } => {
            let (t, b) = (load(&target)?.machine, load(&by)?.machine);
            let opts = SearchOptions {
                budget,
                record_log: log,
            };
            let outcome = find_simulation(&t, &b, depth, &opts)?;
            let found = outcome.found.as_ref().map(|s| MapJson {
                states: pairs(
                    t.state_names(),
                    s.states.iter().map(|&q| b.state_name(q).to_string()),
                ),
                inputs: pairs(
                    t.input().symbols(),
                    s.inputs.iter().map(|&a| b.input().symbol(a).to_string()),
                ),
                outputs: pairs(
                    b.output().symbols(),
                    s.outputs.iter().map(|&o| t.output().symbol(o).to_string()),
                ),
            });
            let title = format!("simulation of {} by {} (depth {depth})", t.name(), b.name());
            report_search(format, &title, &t, &b, outcome, found)
        }
        Command::Orbit {
            machine,
            x,
            pattern,
            powers,
            alternate,
            k,
        } => {
            let m = load(&machine)?.machine;
            let x = m.input().parse_periodic(&x)?;
            let patterns = if let Some(g) = powers {
                let g = single_generator(&m, &g)?;
                power_patterns(g, k)
            } else if !alternate.is_empty() {
                let a = single_generator(&m, &alternate[0])?;
                let b = single_generator(&m, &alternate[1])?;
                alternating_patterns(a, b, k)
            } else if !pattern.is_empty() {
                pattern
                    .iter()
                    .map(|w| parse_generator_word(&m, w))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                bail!("give --pattern, --powers or --alternate");
            };
            let w = orbit_witness(&m, &patterns, &x, k)?;
            #[derive(Serialize)]
            struct OrbitJson {
                probe_length: usize,
                distinct: usize,
                moved: usize,
                images: Vec<[String; 2]>,
            }
            let images: Vec<[String; 2]> = patterns
                .iter()
                .zip(&w.images)
                .map(|(p, img)| [format_generator_word(&m, p), m.output().format_word(img)])
                .collect();
            match format {
                Format::Json => emit(
                    None,
                    &json(&OrbitJson {
                        probe_length: w.probe_length,
                        distinct: w.distinct,
                        moved: w.moved,
                        images,
                    })?,
                ),
                _ => {
                    let mut out = String::new();
                    for [p, img] in &images {
                        out.push_str(&format!("{p}: {img}\n"));
                    }
                    out.push_str(&format!(
                        "{} distinct images of length {}, {} differ from x\n",
                        w.distinct, w.probe_length, w.moved
                    ));
                    emit(None, &out)
                }
            }
        }
        Command::Synth {
            source,
            depth,
            max_states,
            output,
        } => {
            let oracle = if source.extension().is_some_and(|e| e == "fn") {
                let text = fs::read_to_string(&source)
                    .with_context(|| format!("reading {}", source.display()))?;
                SeqFnOracle::from_table(
                    parse_function_table(&text)
                        .with_context(|| format!("parsing {}", source.display()))?,
                )
            } else {
                SeqFnOracle::from_machine(load(&source)?.initial())
            };
            let table = match explore_quotients(&oracle, depth, max_states) {
                Ok(t) => t,
                Err(e) => return negative(e.to_string()),
            };
            let im = match synthesize(&table, &oracle) {
                Ok(im) => im,
                Err(e) => return negative(e.to_string()),
            };
            let notes = vec![format!(
                "synthesized from {} at depth {depth}: {} quotients",
                source.display(),
                table.representatives.len()
            )];
            let text = render_machine(format, im.machine(), Some(im.start()), &notes)?;
            emit(output.as_deref(), &text)
        }
        Command::Check { machine, depth } => {
            let m = load(&machine)?.machine;
            let report = check_machine(&m, depth);
            let text = match format {
                Format::Json => json(&report.iter().map(law_json).collect::<Vec<_>>())?,
                _ => report.iter().map(|c| format!("{c}\n")).collect(),
            };
            emit(None, &text)?;
            match report.iter().filter(|c| c.failed()).count() {
                0 => Ok(()),
                n => negative(format!("{n} law(s) failed")),
            }
        }
        Command::Dot { machine, output } => {
            let file = load(&machine)?;
            emit(output.as_deref(), &machine_dot(&file.machine, file.start))
        }
    }
}

fn single_generator(m: &Machine, text: &str) -> Result<mealy::invert::SignedLetter> {
    match parse_generator_word(m, text)?.as_slice() {
        [g] => Ok(*g),
        _ => bail!("`{text}` is not a single generator"),
    }
}

fn report_search<T>(
    format: Format,
    title: &str,
    src: &Machine,
    dst: &Machine,
    outcome: SearchOutcome<T>,
    found: Option<MapJson>,
) -> Result<()> {
    let log: Vec<RefutationJson> = outcome
        .log
        .iter()
        .map(|r| refutation_json(src, dst, r))
        .collect();
    let refuted = outcome.refuted;
    let is_found = found.is_some();
    let text = match format {
        Format::Json => json(&SearchJson {
            found,
            refuted,
            log,
        })?,
        _ => {
            let mut out: String = log.iter().map(refutation_text).collect();
            match &found {
                Some(maps) => {
                    out.push_str(&map_text(title, maps));
                    out.push_str(&format!("{refuted} candidates refuted before it\n"));
                }
                None => out.push_str(&format!("none ({refuted} candidates refuted)\n")),
            }
            out
        }
    };
    emit(None, &text)?;
    if is_found {
        Ok(())
    } else {
        negative("no candidate verified")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Negative>() => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

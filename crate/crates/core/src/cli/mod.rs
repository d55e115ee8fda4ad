//! Command-line front end. Every command calls one library operation and
//! renders its result; `--seed` fixes all randomness. Exit codes: 0 on
//! success, 2 when an eavesdropper was detected or an encoding failed its
//! check, 64 on usage or precondition errors.

pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense_coding::{
    check_useful, default_positions, encode_rows, printed_table, scan_targets, verify_claims,
    EncodingScheme, PrintedKind, ScanTarget, Verdict, PRINTED_TABLES,
};
use crate::pauli::{
    enumerate_subgroups, named_group, subgroup_id, OperatorGroup, PauliString, GROUP_NAMES,
};
use crate::protocol::{
    eve_guess_success, run_dialogue, EveStrategy, Outcome, ProtocolConfig, SequenceOrder,
    DEFAULT_THRESHOLD,
};
use crate::smp::{run_smp, SmpConfig};
use crate::state::{named_state, Basis, STATE_NAMES};
pub use render::Format;
use render::{DocRow, EncodingDoc, MulDoc, ScanReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Stream id for messages drawn when none are given.
const MESSAGE_STREAM: u64 = 6;

#[derive(Debug, Parser)]
#[command(name = "qdialogue", version, about = "Pauli-group dense coding and quantum dialogue simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Catalog states, groups and printed tables.
    List {
        #[arg(value_enum, default_value_t = ListKind::All)]
        kind: ListKind,
    },
    /// Regenerate an encoding or multiplication table.
    Table(TableArgs),
    /// Test whether an operator list is a useful encoding of a state.
    Check(SchemeArgs),
    /// Search every subgroup for useful encodings and check the published summary.
    Scan {
        /// Restrict to these catalog states (repeatable).
        #[arg(long = "state")]
        states: Vec<String>,
    },
    /// Run the quantum dialogue.
    Simulate(SimulateArgs),
    /// Run the private equality test.
    Smp(SmpArgs),
    /// Multiplication table of a group.
    MulTable {
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        group: Option<String>,
        /// Printed multiplication table number.
        #[arg(long)]
        table: Option<u8>,
    },
    /// List all subgroups of a given order.
    Enumerate {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ListKind {
    All,
    States,
    Groups,
    Tables,
}

#[derive(Debug, Clone, Args)]
struct SchemeArgs {
    #[arg(long)]
    state: String,
    /// Catalog name such as `G2^1(8)` or an element list such as `II,XI,YI,ZI`.
    #[arg(long)]
    group: String,
    /// 1-based qubits the operators act on; defaults to the catalog choice.
    #[arg(long, value_delimiter = ',')]
    positions: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Printed table number.
    #[arg(long, conflicts_with_all = ["state", "group", "positions"], required_unless_present = "state")]
    table: Option<u8>,
    #[arg(long, requires = "group")]
    state: Option<String>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long, value_delimiter = ',')]
    positions: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum EveArg {
    None,
    InterceptResend,
    MeasureResendZ,
    MeasureResendX,
}

impl From<EveArg> for EveStrategy {
    fn from(e: EveArg) -> Self {
        match e {
            EveArg::None => EveStrategy::None,
            EveArg::InterceptResend => EveStrategy::InterceptResend,
            EveArg::MeasureResendZ => EveStrategy::MeasureResend(Basis::Z),
            EveArg::MeasureResendX => EveStrategy::MeasureResend(Basis::X),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum OrderArg {
    Shuffled,
    Plain,
}

impl From<OrderArg> for SequenceOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Shuffled => SequenceOrder::Shuffled,
            OrderArg::Plain => SequenceOrder::Plain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum SimMode {
    /// Full two-way run.
    #[default]
    Dialogue,
    /// Eve's success guessing Alice's element from the announced product.
    EveGuess,
}

/// Run parameters; a JSON config file supplies the same fields and flags
/// override it.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunParams {
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long, value_delimiter = ',')]
    positions: Option<Vec<usize>>,
    /// Number of entangled copies sent per run.
    #[arg(long)]
    copies: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Abort when a leg's decoy error rate exceeds this.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, value_enum)]
    eve: Option<EveArg>,
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
    /// Bob's bits; drawn from the seed when absent.
    #[arg(long)]
    bob_msg: Option<String>,
    /// Alice's bits; drawn from the seed when absent.
    #[arg(long)]
    alice_msg: Option<String>,
    /// Independent runs with seeds `seed, seed+1, ...`; reports totals.
    #[arg(long)]
    trials: Option<usize>,
}

impl RunParams {
    fn overlay(self, over: RunParams) -> RunParams {
        RunParams {
            state: over.state.or(self.state),
            group: over.group.or(self.group),
            positions: over.positions.or(self.positions),
            copies: over.copies.or(self.copies),
            seed: over.seed.or(self.seed),
            threshold: over.threshold.or(self.threshold),
            eve: over.eve.or(self.eve),
            order: over.order.or(self.order),
            bob_msg: over.bob_msg.or(self.bob_msg),
            alice_msg: over.alice_msg.or(self.alice_msg),
            trials: over.trials.or(self.trials),
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// JSON file with run parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SimMode::Dialogue)]
    mode: SimMode,
    /// Also write the transcript as JSON lines.
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[command(flatten)]
    params: RunParams,
}

#[derive(Debug, Args)]
struct SmpArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Alice's value in bits.
    #[arg(long)]
    a: String,
    /// Bob's value in bits.
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Charlie's starting basis index; drawn from the seed when absent.
    #[arg(long)]
    initial: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = EveArg::None)]
    eve: EveArg,
    #[arg(long, value_enum, default_value_t = OrderArg::Shuffled)]
    order: OrderArg,
    #[arg(long)]
    transcript: Option<PathBuf>,
}

/// What a command produced: the artifact, extra notes for stderr, and the
/// exit status.
struct Emitted {
    body: String,
    notes: Vec<String>,
    status: i32,
}

impl Emitted {
    fn ok(body: String) -> Self {
        Self { body, notes: Vec::new(), status: EXIT_OK }
    }
}

#[derive(Debug)]
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = Result<Emitted, Usage>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(emitted) => {
            for note in &emitted.notes {
                let _ = writeln!(stderr, "{note}");
            }
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &emitted.body),
                None => stdout.write_all(emitted.body.as_bytes()),
            };
            match written {
                Ok(()) => emitted.status,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write output: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::List { kind } => list(*kind, fmt(Format::Text)),
        Command::Table(args) => table(args, fmt(Format::Text)),
        Command::Check(args) => check(args, fmt(Format::Text)),
        Command::Scan { states } => scan(states, fmt(Format::Text)),
        Command::Simulate(args) => simulate(args, fmt(Format::Json)),
        Command::Smp(args) => smp(args, fmt(Format::Json)),
        Command::MulTable { group, table } => mul_table(group.as_deref(), *table, fmt(Format::Text)),
        Command::Enumerate { ambient, order } => enumerate(ambient, *order, fmt(Format::Text)),
    }
}

/// A catalog group, or an element list that must close under multiplication.
pub fn resolve_group(text: &str) -> Result<OperatorGroup, String> {
    match named_group(text) {
        Ok(g) => Ok(g),
        Err(_) if text.contains(|c: char| c == ',' || c.is_whitespace()) => {
            OperatorGroup::parse_list(None, text).map_err(|e| e.to_string())
        }
        Err(e) => Err(e.to_string()),
    }
}

/// A catalog group's elements, or any element list in the given order.
fn resolve_elements(text: &str) -> Result<(String, Vec<PauliString>), String> {
    match named_group(text) {
        Ok(g) => Ok((g.label(), g.elements().to_vec())),
        Err(e) if !text.contains(|c: char| c == ',' || c.is_whitespace()) => Err(e.to_string()),
        Err(_) => {
            let elements = crate::pauli::parse_elements(text).map_err(|e| e.to_string())?;
            let label = elements.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            Ok((label, elements))
        }
    }
}

fn positions_for(state: &str, given: &Option<Vec<usize>>) -> Result<Vec<usize>, Usage> {
    match given {
        Some(p) => Ok(p.clone()),
        None => default_positions(state)
            .ok_or_else(|| Usage(format!("no default qubits for {state:?}; pass --positions"))),
    }
}

fn reject_csv(format: Format, command: &str) -> Result<(), Usage> {
    if format == Format::Csv {
        return Err(Usage(format!("{command} has no csv output")));
    }
    Ok(())
}

#[derive(Serialize)]
struct Listing {
    states: Vec<&'static str>,
    groups: Vec<&'static str>,
    tables: Vec<TableEntry>,
}

#[derive(Serialize)]
struct TableEntry {
    number: u8,
    caption: &'static str,
}

fn list(kind: ListKind, format: Format) -> CmdResult {
    let want = |k| kind == ListKind::All || kind == k;
    let listing = Listing {
        states: if want(ListKind::States) { STATE_NAMES.to_vec() } else { Vec::new() },
        groups: if want(ListKind::Groups) { GROUP_NAMES.to_vec() } else { Vec::new() },
        tables: if want(ListKind::Tables) {
            PRINTED_TABLES.iter().map(|t| TableEntry { number: t.number, caption: t.caption }).collect()
        } else {
            Vec::new()
        },
    };
    let body = match format {
        Format::Json => render::json(&listing),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["kind", "name"])?;
            for s in &listing.states {
                w.write_record(["state", s])?;
            }
            for g in &listing.groups {
                w.write_record(["group", g])?;
            }
            for t in &listing.tables {
                w.write_record(["table", &format!("{:02} {}", t.number, t.caption)])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?)?
        }
        Format::Text => {
            let mut out = String::new();
            if want(ListKind::States) {
                out.push_str("# states\n");
                for s in &listing.states {
                    let q = default_positions(s).map(|p| render_positions(&p)).unwrap_or_default();
                    out.push_str(&format!("{s:<14} qubits {q}\n"));
                }
            }
            if want(ListKind::Groups) {
                out.push_str("# groups\n");
                for g in &listing.groups {
                    out.push_str(&format!("{g}\n"));
                }
            }
            if want(ListKind::Tables) {
                out.push_str("# tables\n");
                for t in &listing.tables {
                    out.push_str(&format!("{:02}  {}\n", t.number, t.caption));
                }
            }
            out
        }
    };
    Ok(Emitted::ok(body))
}

fn render_positions(p: &[usize]) -> String {
    p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Rows and witnesses for one operator list over several states.
pub fn encoding_doc(
    table: Option<u8>,
    caption: String,
    group: String,
    states: &[&str],
    elements: &[PauliString],
    positions: &[usize],
) -> Result<EncodingDoc, String> {
    let mut columns = Vec::new();
    let mut witnesses = Vec::new();
    for &name in states {
        let state = named_state(name).map_err(|e| e.to_string())?;
        columns.push(encode_rows(&state, elements, positions).map_err(|e| e.to_string())?);
        let verdict = check_useful(name, &state, elements, positions).map_err(|e| e.to_string())?;
        witnesses.push(verdict.witness().cloned());
    }
    let rows = elements
        .iter()
        .enumerate()
        .map(|(index, &operator)| DocRow {
            index,
            operator,
            formulas: columns.iter().map(|c| c[index].formula.clone()).collect(),
        })
        .collect();
    Ok(EncodingDoc {
        table,
        caption,
        group,
        positions: positions.to_vec(),
        states: states.iter().map(ToString::to_string).collect(),
        rows,
        witnesses,
    })
}

/// The document for a printed table, in its printed row order.
pub enum PrintedDoc {
    Encoding(EncodingDoc),
    Multiplication(MulDoc),
}

pub fn printed_doc(number: u8) -> Result<PrintedDoc, String> {
    let t = printed_table(number).ok_or_else(|| format!("no printed table {number}; see `list tables`"))?;
    match t.kind {
        PrintedKind::Encoding { states, group, positions, .. } => {
            let label = group.map(str::to_string).unwrap_or_else(|| {
                t.operators().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            });
            encoding_doc(Some(number), t.caption.to_string(), label, states, &t.operators(), positions)
                .map(PrintedDoc::Encoding)
        }
        PrintedKind::Multiplication { .. } => {
            let g = t.group().expect("multiplication tables name a group").map_err(|e| e.to_string())?;
            Ok(PrintedDoc::Multiplication(MulDoc::new(Some(number), t.caption.to_string(), &g)))
        }
    }
}

/// Renders a printed table exactly as `table --table N` does.
pub fn render_printed(number: u8, format: Format) -> Result<String, String> {
    Ok(match printed_doc(number)? {
        PrintedDoc::Encoding(doc) => render::encoding(&doc, format),
        PrintedDoc::Multiplication(doc) => render::multiplication(&doc, format),
    })
}

fn encoding_status(doc: &EncodingDoc) -> Emitted {
    let notes: Vec<String> = doc
        .states
        .iter()
        .zip(&doc.witnesses)
        .filter_map(|(s, w)| w.as_ref().map(|w| format!("not a useful encoding of {s}: {w}")))
        .collect();
    let status = if notes.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED };
    Emitted { body: String::new(), notes, status }
}

fn table(args: &TableArgs, format: Format) -> CmdResult {
    if let Some(n) = args.table {
        return match printed_doc(n)? {
            PrintedDoc::Encoding(doc) => {
                let mut e = encoding_status(&doc);
                e.body = render::encoding(&doc, format);
                Ok(e)
            }
            PrintedDoc::Multiplication(doc) => Ok(Emitted::ok(render::multiplication(&doc, format))),
        };
    }
    let state = args.state.as_deref().expect("clap requires --state");
    let group = args.group.as_deref().expect("clap requires --group");
    let positions = positions_for(state, &args.positions)?;
    let (label, elements) = resolve_elements(group)?;
    let caption = format!("{state} encoded by {label} on qubits {}", render_positions(&positions));
    let doc = encoding_doc(None, caption, label, &[state], &elements, &positions)?;
    let mut e = encoding_status(&doc);
    e.body = render::encoding(&doc, format);
    Ok(e)
}

#[derive(Serialize)]
struct CheckReport<'a> {
    state: &'a str,
    group: String,
    positions: Vec<usize>,
    useful: bool,
    witness: Option<crate::dense_coding::FailureWitness>,
}

fn check(args: &SchemeArgs, format: Format) -> CmdResult {
    reject_csv(format, "check")?;
    let state = named_state(&args.state)?;
    let positions = positions_for(&args.state, &args.positions)?;
    let (label, elements) = resolve_elements(&args.group)?;
    let verdict = check_useful(&args.state, &state, &elements, &positions)?;
    let report = CheckReport {
        state: &args.state,
        group: label,
        positions,
        useful: verdict.is_useful(),
        witness: verdict.witness().cloned(),
    };
    let body = match format {
        Format::Json => render::json(&report),
        _ => match &report.witness {
            None => format!(
                "useful: {} encodes {} on qubits {}\n",
                report.group,
                report.state,
                render_positions(&report.positions)
            ),
            Some(w) => format!(
                "not useful: {} on {} qubits {}: {w}\n",
                report.group,
                report.state,
                render_positions(&report.positions)
            ),
        },
    };
    let status = if report.useful { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Emitted { body, notes: Vec::new(), status })
}

/// The full catalog scan plus the published-claim comparison.
pub fn scan_report(states: &[String]) -> Result<ScanReport, String> {
    let names: Vec<String> = if states.is_empty() {
        STATE_NAMES.iter().map(ToString::to_string).collect()
    } else {
        states.to_vec()
    };
    let targets = names
        .iter()
        .map(|s| {
            ScanTarget::with_default_positions(s).ok_or_else(|| format!("unknown state {s:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = scan_targets(&targets).map_err(|e| e.to_string())?;
    let claims = verify_claims(&rows)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|c| names.contains(&c.state))
        .collect();
    Ok(ScanReport { rows, claims })
}

fn scan(states: &[String], format: Format) -> CmdResult {
    let report = scan_report(states)?;
    let conflicts: Vec<String> = report
        .claims
        .iter()
        .filter(|c| c.conflicts_with_print())
        .map(|c| format!("claim {} for {} contradicts printed table {:02}", c.group, c.state, c.printed_table.unwrap_or(0)))
        .collect();
    let status = if conflicts.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Emitted { body: render::scan(&report, format), notes: conflicts, status })
}

fn scheme_of(state_name: &str, group: &str, positions: &[usize]) -> Result<EncodingScheme, Usage> {
    let state = named_state(state_name)?;
    let g = resolve_group(group)?;
    let verdict = crate::dense_coding::check_group(state_name, &state, &g, positions)?;
    match verdict {
        Verdict::Useful(s) => Ok(*s),
        Verdict::NotUseful(w) => Err(Usage(format!("{} is not a useful encoding of {state_name}: {w}", g.label()))),
    }
}

/// `bits` random bits from the message stream of `seed`.
pub fn random_message(seed: u64, bits: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(MESSAGE_STREAM);
    (0..bits).map(|_| if rng.random_bool(0.5) { '1' } else { '0' }).collect()
}

#[derive(Debug, Serialize)]
struct DialogueReport {
    state: String,
    group: String,
    positions: Vec<usize>,
    copies: usize,
    seed: u64,
    bob_msg: String,
    alice_msg: String,
    outcome: Outcome,
}

#[derive(Debug, Serialize)]
struct TrialsReport {
    state: String,
    group: String,
    positions: Vec<usize>,
    copies: usize,
    first_seed: u64,
    trials: usize,
    detected: usize,
    detected_on_leg1: usize,
    detection_rate: f64,
    /// Undetected runs where both parties read the other's message exactly.
    decoded_exactly: usize,
    undetected: usize,
    mean_matched_leg1: f64,
    mean_eve_symbol_accuracy: Option<f64>,
}

fn simulate(args: &SimulateArgs, format: Format) -> CmdResult {
    reject_csv(format, "simulate")?;
    let base = match &args.config {
        Some(path) => read_config(path)?,
        None => RunParams::default(),
    };
    let p = base.overlay(args.params.clone());
    let state = p.state.clone().ok_or_else(|| Usage("--state is required".into()))?;
    let group = p.group.clone().ok_or_else(|| Usage("--group is required".into()))?;
    let positions = positions_for(&state, &p.positions)?;
    let scheme = scheme_of(&state, &group, &positions)?;
    let seed = p.seed.unwrap_or(0);
    let copies = p.copies.unwrap_or(1);

    if args.mode == SimMode::EveGuess {
        let trials = p.trials.unwrap_or(10_000);
        let guess = eve_guess_success(&scheme, trials, seed)?;
        return Ok(Emitted::ok(match format {
            Format::Json => render::json(&guess),
            _ => format!(
                "eve guess success {}/{} = {:.6} (analytic {:.6}, sigma {:.6})\n",
                guess.successes, guess.trials, guess.empirical, guess.analytic, guess.sigma
            ),
        }));
    }

    let mut cfg = ProtocolConfig::new(scheme, copies, seed);
    cfg.error_threshold = p.threshold.unwrap_or(DEFAULT_THRESHOLD);
    cfg.order = p.order.map(Into::into).unwrap_or_default();
    let eve: EveStrategy = p.eve.map(Into::into).unwrap_or(EveStrategy::None);
    let bits = cfg.scheme.message_bits() * copies;
    let group_label = cfg.scheme.group().label();

    if let Some(trials) = p.trials {
        if trials == 0 {
            return Err(Usage("--trials must be at least 1".into()));
        }
        if args.transcript.is_some() || p.bob_msg.is_some() || p.alice_msg.is_some() {
            return Err(Usage("--trials draws fresh messages per run and keeps no transcript".into()));
        }
        let runs = (0..trials as u64)
            .into_par_iter()
            .map(|k| {
                let mut c = cfg.clone();
                c.seed = seed.wrapping_add(k);
                let bob = random_message(c.seed, bits);
                let alice = random_message(c.seed.wrapping_add(1 << 63), bits);
                run_dialogue(&c, &bob, &alice, eve).map(|(o, _)| (o, bob, alice))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let detected = runs.iter().filter(|r| r.0.detected).count();
        let undetected = trials - detected;
        let decoded_exactly = runs
            .iter()
            .filter(|(o, bob, alice)| {
                o.alice_decoded.as_deref() == Some(bob.as_str()) && o.bob_decoded.as_deref() == Some(alice.as_str())
            })
            .count();
        let accuracies: Vec<f64> = runs.iter().filter_map(|r| r.0.eve_symbol_accuracy).collect();
        let report = TrialsReport {
            state,
            group: group_label,
            positions,
            copies,
            first_seed: seed,
            trials,
            detected,
            detected_on_leg1: runs.iter().filter(|r| r.0.detected_on_leg == Some(1)).count(),
            detection_rate: detected as f64 / trials as f64,
            decoded_exactly,
            undetected,
            mean_matched_leg1: runs.iter().map(|r| r.0.leg1.matched as f64).sum::<f64>() / trials as f64,
            mean_eve_symbol_accuracy: (!accuracies.is_empty())
                .then(|| accuracies.iter().sum::<f64>() / accuracies.len() as f64),
        };
        return Ok(Emitted::ok(match format {
            Format::Json => render::json(&report),
            _ => format!(
                "{} trials: {} detected ({:.4}), {} of {} undetected runs decoded exactly\n",
                report.trials, report.detected, report.detection_rate, report.decoded_exactly, report.undetected
            ),
        }));
    }

    let bob_msg = p.bob_msg.unwrap_or_else(|| random_message(seed, bits));
    let alice_msg = p.alice_msg.unwrap_or_else(|| random_message(seed.wrapping_add(1 << 63), bits));
    let (outcome, transcript) = run_dialogue(&cfg, &bob_msg, &alice_msg, eve)?;
    if let Some(path) = &args.transcript {
        std::fs::write(path, transcript.to_json_lines())
            .map_err(|e| format!("cannot write transcript {}: {e}", path.display()))?;
    }
    let status = if outcome.detected { EXIT_CHECK_FAILED } else { EXIT_OK };
    let report = DialogueReport {
        state,
        group: group_label,
        positions,
        copies,
        seed,
        bob_msg,
        alice_msg,
        outcome,
    };
    let body = match format {
        Format::Json => render::json(&report),
        _ => {
            let o = &report.outcome;
            match o.detected_on_leg {
                Some(leg) => format!(
                    "aborted on leg {leg}: error rate {:.4} over {} matched decoys\n",
                    if leg == 1 { o.leg1.error_rate } else { o.error_rate_leg2().unwrap_or(0.0) },
                    if leg == 1 { o.leg1.matched } else { o.leg2.as_ref().map_or(0, |c| c.matched) }
                ),
                None => format!(
                    "bob sent {} alice read {}\nalice sent {} bob read {}\n",
                    report.bob_msg,
                    o.alice_decoded.as_deref().unwrap_or(""),
                    report.alice_msg,
                    o.bob_decoded.as_deref().unwrap_or("")
                ),
            }
        }
    };
    Ok(Emitted { body, notes: Vec::new(), status })
}

fn read_config(path: &Path) -> Result<RunParams, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("bad config {}: {e}", path.display())))
}

fn smp(args: &SmpArgs, format: Format) -> CmdResult {
    reject_csv(format, "smp")?;
    let positions = positions_for(&args.scheme.state, &args.scheme.positions)?;
    let scheme = scheme_of(&args.scheme.state, &args.scheme.group, &positions)?;
    let mut cfg = SmpConfig::new(scheme, args.seed);
    cfg.initial_index = args.initial;
    cfg.error_threshold = args.threshold;
    cfg.order = args.order.into();
    let (outcome, transcript) = run_smp(&cfg, &args.a, &args.b, args.eve.into())?;
    if let Some(path) = &args.transcript {
        std::fs::write(path, transcript.to_json_lines())
            .map_err(|e| format!("cannot write transcript {}: {e}", path.display()))?;
    }
    let status = if outcome.detected { EXIT_CHECK_FAILED } else { EXIT_OK };
    let body = match format {
        Format::Json => render::json(&outcome),
        _ if outcome.detected => "aborted: eavesdropper detected\n".to_string(),
        _ => format!("equal: {}\n", outcome.equal),
    };
    Ok(Emitted { body, notes: Vec::new(), status })
}

fn mul_table(group: Option<&str>, table: Option<u8>, format: Format) -> CmdResult {
    let doc = match (group, table) {
        (_, Some(n)) => match printed_doc(n)? {
            PrintedDoc::Multiplication(doc) => doc,
            PrintedDoc::Encoding(_) => return Err(Usage(format!("table {n} is not a multiplication table"))),
        },
        (Some(g), None) => {
            let g = resolve_group(g)?;
            MulDoc::new(None, format!("multiplication table of {}", g.label()), &g)
        }
        (None, None) => unreachable!("clap requires --group or --table"),
    };
    Ok(Emitted::ok(render::multiplication(&doc, format)))
}

#[derive(Serialize)]
struct SubgroupEntry {
    id: String,
    elements: Vec<String>,
}

fn enumerate(ambient: &str, order: usize, format: Format) -> CmdResult {
    let g = resolve_group(ambient)?;
    let found = enumerate_subgroups(&g, order)?;
    let entries: Vec<SubgroupEntry> = found
        .iter()
        .map(|s| SubgroupEntry {
            id: subgroup_id(s),
            elements: s.elements().iter().map(ToString::to_string).collect(),
        })
        .collect();
    let body = match format {
        Format::Json => render::json(&entries),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["id", "elements"])?;
            for e in &entries {
                w.write_record([e.id.as_str(), &e.elements.join(" ")])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?)?
        }
        Format::Text => {
            let mut out = format!("# {} subgroups of order {order} in {}\n", entries.len(), g.label());
            let width = entries.iter().map(|e| e.id.chars().count()).max().unwrap_or(0);
            for e in &entries {
                out.push_str(&format!("{:<width$}  {}\n", e.id, e.elements.join(" ")));
            }
            out
        }
    };
    Ok(Emitted::ok(body))
}

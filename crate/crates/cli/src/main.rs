//! Command line front end: load an instance file, run one analysis, and
//! print a text or canonical-JSON report.
//!
//! Exit codes: 0 success, 2 validation error, 3 resource limit
//! (size limit or search budget), 4 broken internal invariant.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use oinfty_core::abelian::{GroupElem, GroupSpec};
use oinfty_core::classify::{
    check_condition, connes_spectrum, enumerate_ideals, fiber_report, flags, is_prime_set,
    k_theory, local_subquotients, prim_space, ConditionReport, K0Rank, PrimReport,
};
use oinfty_core::invariant::{InvariantPair, InvariantSet, SetRepr};
use oinfty_core::monoid::WeightSystem;
use oinfty_core::ypair::{is_closed_in_prim, Angle, ClosedSetQuery, YPair};
use oinfty_core::{Error as CoreError, Options};

#[derive(Parser)]
#[command(name = "oinfty", version, about = "Ideal-structure reports for weighted systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on the order of any group that must be fully enumerated.
    #[arg(long, global = true)]
    size_limit: Option<u64>,
    /// Cap on explored search nodes for membership queries.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Coordinate radius used when listing members of symbolic sets.
    #[arg(long, global = true, default_value_t = 8)]
    window: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Structure flags, condition, spectrum, and K-theory in one report.
    Analyze { file: PathBuf },
    /// Enumerate the ideal lattice of a finite-group instance.
    Ideals { file: PathBuf },
    /// Describe the primitive ideal space.
    Prim { file: PathBuf },
    /// Check whether every ideal is gauge invariant.
    Condition { file: PathBuf },
    /// The strong Connes spectrum of the dual action.
    Spectrum { file: PathBuf },
    /// K-groups of the crossed product.
    Ktheory { file: PathBuf },
    /// Decide primeness of one invariant set.
    Prime {
        file: PathBuf,
        /// Set descriptor: `empty`, `full`, `elems:V;V;...` or `bases:V;V;...`
        /// with each V a comma-separated coordinate vector.
        #[arg(long)]
        set: String,
    },
    /// Test a closed-subset query against the primitive ideal space
    /// (violated regime only).
    Closed {
        file: PathBuf,
        /// JSON query file with full_cosets, points, xinf, and lambda.
        #[arg(long)]
        input: PathBuf,
    },
    /// Matrix-fiber decomposition of depth n over the full pair.
    Fibers {
        file: PathBuf,
        #[arg(long)]
        n: u64,
    },
    /// Local subquotients at a point (violated regime only).
    Local {
        file: PathBuf,
        /// Comma-separated coordinates of the base point.
        #[arg(long)]
        gamma: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::SizeLimit { .. } | CoreError::BudgetExceeded { .. } => 3,
            CoreError::InternalInvariantBroken(_) => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

// ---------------------------------------------------------------------------
// Instance loading.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    group: GroupFile,
    weights: WeightsFile,
    #[serde(default)]
    options: OptionsFile,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    #[serde(default)]
    prefix: Vec<Vec<i64>>,
    tail: Vec<Vec<i64>>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsFile {
    size_limit: Option<u64>,
    search_budget: Option<u64>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::validation(format!("cannot parse {}: {e}", path.display())))
}

fn load_instance(cli: &Cli, path: &Path) -> CliResult<(WeightSystem, Options)> {
    let file: InstanceFile = read_json(path)?;
    let spec = GroupSpec::new(file.group.free_rank, file.group.torsion)?;
    let parse_all = |vs: &[Vec<i64>]| -> CliResult<Vec<GroupElem>> {
        vs.iter().map(|c| spec.elem_i64(c).map_err(Failure::from)).collect()
    };
    let prefix = parse_all(&file.weights.prefix)?;
    let tail = parse_all(&file.weights.tail)?;
    let w = WeightSystem::new(spec, prefix, tail)?;

    let mut opts = Options::default();
    if let Some(n) = file.options.size_limit {
        opts.size_limit = n;
    }
    if let Some(n) = file.options.search_budget {
        opts.search_budget = n;
    }
    if let Ok(v) = std::env::var("OINFTY_BUDGET") {
        opts.search_budget = v.parse().map_err(|_| {
            Failure::validation(format!("OINFTY_BUDGET is not an integer: {v:?}"))
        })?;
    }
    if let Some(n) = cli.size_limit {
        opts.size_limit = n;
    }
    if let Some(n) = cli.budget {
        opts.search_budget = n;
    }
    Ok((w, opts))
}

// ---------------------------------------------------------------------------
// Report encoding. serde_json maps are sorted, which keeps output canonical.

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(k) => json!(k),
        None => json!(n.to_string()),
    }
}

fn elem_value(e: &GroupElem) -> Value {
    Value::Array(e.coords().iter().map(int_value).collect())
}

fn set_value(s: &InvariantSet) -> Value {
    match s.repr() {
        SetRepr::Empty => json!({ "kind": "empty" }),
        SetRepr::Full => json!({ "kind": "full" }),
        SetRepr::Finite(elems) => json!({
            "kind": "finite",
            "elements": elems.iter().map(elem_value).collect::<Vec<_>>(),
        }),
        SetRepr::Principal(bases) => json!({
            "kind": "principal",
            "bases": bases.iter().map(elem_value).collect::<Vec<_>>(),
            "provenance": "symbolic: base points plus all reachable weight sums; listings are samples, membership is decided by certificate search",
        }),
    }
}

fn pair_value(p: &InvariantPair) -> Value {
    json!({ "x": set_value(&p.x), "xinf": set_value(&p.xinf) })
}

/// Every group element with free coordinates in `[-window, window]`.
fn window_elems(spec: &GroupSpec, window: i64) -> Vec<GroupElem> {
    let mut coords: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..spec.free_rank() {
        coords = coords
            .into_iter()
            .flat_map(|c| {
                (-window..=window).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    for n in spec.torsion() {
        let n = n.to_i64().expect("window listing needs small torsion");
        coords = coords
            .into_iter()
            .flat_map(|c| {
                (0..n).map(move |r| {
                    let mut c = c.clone();
                    c.push(r);
                    c
                })
            })
            .collect();
    }
    coords.into_iter().map(|c| spec.elem_i64(&c).expect("valid coordinates")).collect()
}

fn window_members(s: &InvariantSet, window: i64, opts: &Options) -> CliResult<Vec<Value>> {
    let mut out = Vec::new();
    for e in window_elems(s.weights().spec(), window) {
        if s.contains_elem(&e, opts)? {
            out.push(elem_value(&e));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Set and query parsing.

fn parse_vector(spec: &GroupSpec, text: &str) -> CliResult<GroupElem> {
    let coords: Result<Vec<i64>, _> = text.split(',').map(|c| c.trim().parse::<i64>()).collect();
    let coords =
        coords.map_err(|_| Failure::validation(format!("bad coordinate vector {text:?}")))?;
    spec.elem_i64(&coords).map_err(Failure::from)
}

fn parse_set_flag(w: &WeightSystem, text: &str, opts: &Options) -> CliResult<InvariantSet> {
    let spec = w.spec();
    match text {
        "empty" => return Ok(InvariantSet::empty(w)),
        "full" => return Ok(InvariantSet::full(w)),
        _ => {}
    }
    let (tag, body) = text
        .split_once(':')
        .ok_or_else(|| Failure::validation(format!("bad set descriptor {text:?}")))?;
    let vectors: CliResult<Vec<GroupElem>> =
        body.split(';').filter(|s| !s.trim().is_empty()).map(|v| parse_vector(spec, v)).collect();
    let vectors = vectors?;
    if vectors.is_empty() {
        return Err(Failure::validation(format!("set descriptor {text:?} lists no vectors")));
    }
    match tag {
        "elems" => InvariantSet::from_elems(w, vectors, opts).map_err(Failure::from),
        "bases" => InvariantSet::principal(w, vectors, opts).map_err(Failure::from),
        _ => Err(Failure::validation(format!("bad set descriptor tag {tag:?}"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetFile {
    kind: String,
    #[serde(default)]
    elements: Vec<Vec<i64>>,
    #[serde(default)]
    bases: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    coset: Vec<i64>,
    angle: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClosedFile {
    full_cosets: SetFile,
    #[serde(default)]
    points: Vec<PointFile>,
    xinf: SetFile,
    #[serde(default)]
    lambda: Vec<SetFile>,
}

fn set_from_file(w: &WeightSystem, f: &SetFile, opts: &Options) -> CliResult<InvariantSet> {
    let spec = w.spec();
    let vectors = |vs: &[Vec<i64>]| -> CliResult<Vec<GroupElem>> {
        vs.iter().map(|c| spec.elem_i64(c).map_err(Failure::from)).collect()
    };
    match f.kind.as_str() {
        "empty" => Ok(InvariantSet::empty(w)),
        "full" => Ok(InvariantSet::full(w)),
        "finite" => InvariantSet::from_elems(w, vectors(&f.elements)?, opts).map_err(Failure::from),
        "principal" => InvariantSet::principal(w, vectors(&f.bases)?, opts).map_err(Failure::from),
        other => Err(Failure::validation(format!("bad set kind {other:?}"))),
    }
}

// ---------------------------------------------------------------------------
// Command handlers.

fn cmd_analyze(w: &WeightSystem, opts: &Options) -> CliResult<Value> {
    let f = flags(w, opts)?;
    let spectrum = match connes_spectrum(w, opts) {
        Ok(s) => spectrum_value(&s),
        Err(CoreError::UnsupportedRepresentation { detail, .. }) => {
            json!({ "detail": detail, "kind": "unsupported" })
        }
        Err(e) => return Err(e.into()),
    };
    let kt = k_theory(w);
    Ok(json!({
        "simple": f.simple,
        "purely_infinite": f.purely_infinite_if_simple,
        "primitive": f.primitive,
        "af_embeddable": f.af_embeddable_sufficient,
        "condition": if f.condition.is_satisfied() { "satisfied" } else { "violated" },
        "spectrum": spectrum,
        "K0_rank": k0_value(&kt.k0_rank),
        "K1": 0,
    }))
}

fn spectrum_value(s: &InvariantSet) -> Value {
    match s.repr() {
        SetRepr::Full => json!("full"),
        _ => set_value(s),
    }
}

fn k0_value(r: &K0Rank) -> Value {
    match r {
        K0Rank::Finite(n) => match n.to_u64() {
            Some(k) => json!(k),
            None => json!(n.to_string()),
        },
        K0Rank::CountablyInfinite => json!("countably-infinite"),
    }
}

fn cmd_ideals(w: &WeightSystem, opts: &Options) -> CliResult<Value> {
    let lat = enumerate_ideals(w, opts)?;
    let nodes: Vec<Value> = (0..lat.len())
        .map(|i| {
            let mut node = pair_value(lat.pair(i));
            let map = node.as_object_mut().expect("pair encodes to an object");
            map.insert("primitive".into(), json!(lat.is_primitive(i)));
            node
        })
        .collect();
    let mut out = Map::new();
    out.insert("count".into(), json!(lat.len()));
    out.insert("nodes".into(), Value::Array(nodes));
    if let Some(note) = lat.note() {
        out.insert("note".into(), json!(note));
    }
    Ok(Value::Object(out))
}

fn cmd_prim(w: &WeightSystem, opts: &Options) -> CliResult<Value> {
    match prim_space(w, opts)? {
        PrimReport::Satisfied { prime_pairs, families } => Ok(json!({
            "status": "satisfied",
            "families": families,
            "prime_pairs": match prime_pairs {
                Some(pairs) => Value::Array(pairs.iter().map(pair_value).collect()),
                None => json!("symbolic"),
            },
        })),
        PrimReport::Violated { report, delta, delta_complete } => Ok(json!({
            "status": "violated",
            "index": report.index,
            "K": report.order_k,
            "quotient": report.quotient.group.describe(),
            "delta": delta.iter().map(set_value).collect::<Vec<_>>(),
            "delta_complete": delta_complete,
        })),
    }
}

fn cmd_condition(w: &WeightSystem, opts: &Options) -> CliResult<Value> {
    match check_condition(w, opts)? {
        ConditionReport::Satisfied => Ok(json!({ "status": "satisfied" })),
        ConditionReport::Violated(rep) => Ok(json!({
            "status": "violated",
            "index": rep.index,
            "K": rep.order_k,
            "quotient": rep.quotient.group.describe(),
        })),
    }
}

fn cmd_spectrum(w: &WeightSystem, opts: &Options, window: i64) -> CliResult<Value> {
    let s = connes_spectrum(w, opts)?;
    let mut out = Map::new();
    out.insert("spectrum".into(), spectrum_value(&s));
    if !w.spec().is_finite() && !matches!(s.repr(), SetRepr::Full) {
        out.insert("window_radius".into(), json!(window));
        out.insert("window_members".into(), Value::Array(window_members(&s, window, opts)?));
    }
    Ok(Value::Object(out))
}

fn cmd_ktheory(w: &WeightSystem) -> CliResult<Value> {
    let kt = k_theory(w);
    Ok(json!({ "K0_rank": k0_value(&kt.k0_rank), "K1": kt.k1_rank() }))
}

fn cmd_prime(w: &WeightSystem, opts: &Options, set: &str) -> CliResult<Value> {
    let x = parse_set_flag(w, set, opts)?;
    Ok(json!({ "prime": is_prime_set(&x, opts)?, "set": set_value(&x) }))
}

fn cmd_closed(w: &WeightSystem, opts: &Options, input: &Path) -> CliResult<Value> {
    let file: ClosedFile = read_json(input)?;
    let report = check_condition(w, opts)?;
    let rep = report
        .violated()
        .ok_or_else(|| Failure::validation("closed-set queries need a violated condition"))?;
    let wp = rep.quotient_weights(w)?;
    let full_cosets = set_from_file(&wp, &file.full_cosets, opts)?;
    let xinf = set_from_file(w, &file.xinf, opts)?;
    let mut points = Vec::new();
    for p in &file.points {
        let coset = wp.spec().elem_i64(&p.coset)?;
        let angle = Angle::from_str(&p.angle)?;
        points.push((coset, angle));
    }
    let ypair = YPair::new(full_cosets, points, xinf, opts)?;
    let lambda: CliResult<Vec<InvariantSet>> =
        file.lambda.iter().map(|f| set_from_file(w, f, opts)).collect();
    let query = ClosedSetQuery { ypair, lambda: lambda? };
    Ok(json!({ "closed": is_closed_in_prim(w, &report, &query, opts)? }))
}

fn cmd_fibers(w: &WeightSystem, opts: &Options, n: u64) -> CliResult<Value> {
    let full = InvariantSet::full(w);
    let pair = InvariantPair { x: full.clone(), xinf: full };
    let levels: Vec<Value> = fiber_report(&pair, n, opts)?
        .iter()
        .map(|level| {
            json!({
                "k": level.k,
                "matrix_size": match level.matrix_size.to_u64() {
                    Some(m) => json!(m),
                    None => json!(level.matrix_size.to_string()),
                },
                "spectrum": spectrum_value(&level.spectrum),
            })
        })
        .collect();
    Ok(json!({ "levels": levels }))
}

fn cmd_local(w: &WeightSystem, opts: &Options, gamma: &str) -> CliResult<Value> {
    let gamma0 = parse_vector(w.spec(), gamma)?;
    let report = check_condition(w, opts)?;
    let local = local_subquotients(w, &report, &gamma0)?;
    Ok(json!({
        "circle_points": local.circle_points.iter().map(elem_value).collect::<Vec<_>>(),
        "point_list": local.point_list.iter().map(elem_value).collect::<Vec<_>>(),
    }))
}

// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> CliResult<Value> {
    match &cli.command {
        Command::Analyze { file } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_analyze(&w, &opts)
        }
        Command::Ideals { file } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_ideals(&w, &opts)
        }
        Command::Prim { file } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_prim(&w, &opts)
        }
        Command::Condition { file } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_condition(&w, &opts)
        }
        Command::Spectrum { file } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_spectrum(&w, &opts, cli.window)
        }
        Command::Ktheory { file } => {
            let (w, _) = load_instance(cli, file)?;
            cmd_ktheory(&w)
        }
        Command::Prime { file, set } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_prime(&w, &opts, set)
        }
        Command::Closed { file, input } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_closed(&w, &opts, input)
        }
        Command::Fibers { file, n } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_fibers(&w, &opts, *n)
        }
        Command::Local { file, gamma } => {
            let (w, opts) = load_instance(cli, file)?;
            cmd_local(&w, &opts, gamma)
        }
    }
}

fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let mut out = String::new();
            for (k, val) in map {
                out.push_str(&format!(
                    "{k}: {}\n",
                    serde_json::to_string(val).expect("serializable")
                ));
            }
            out
        }
        other => format!("{}\n", serde_json::to_string(other).expect("serializable")),
    }
}

/// A closed pipe on stdout is a normal way for a consumer to stop reading.
fn emit(text: &str) -> ExitCode {
    use std::io::Write;
    match std::io::stdout().write_all(text.as_bytes()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report).expect("serializable")
                ),
                Format::Text => render_text(&report),
            };
            emit(&text)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

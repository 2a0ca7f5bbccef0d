//! Search configuration parsing.
//!
//! The accepted text is JSON with three relaxations found in hand-written
//! configs: backslashes that do not start a valid escape are taken literally
//! (Windows-style paths), trailing commas before `}`/`]` are ignored, and an
//! object may repeat a key (the `discriminator` block lists several
//! `type`/`hparams` pairs that way). Each relaxation is reported as a warning.

use std::fmt;

use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gan::{DiscriminatorSpec, DiscriminatorType, TrainingBudget};
use crate::quantum::{AnsatzFamily, InitKind, InitStrategy, MAX_QUBITS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("invalid value for `{field}`: {reason}")]
    InvalidValue { field: String, reason: String },
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        field: field.to_string(),
        reason: reason.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionSource {
    /// Store-relative key of a single-column CSV.
    pub data_path: String,
    /// Rows used from the file; `None` uses all of them.
    pub samples: Option<usize>,
    pub discretization: String,
}

impl DistributionSource {
    /// `data_path` as a store key: forward slashes, no leading separator.
    pub fn store_key(&self) -> String {
        self.data_path
            .replace('\\', "/")
            .split('/')
            .filter(|s| !s.is_empty() && *s != ".")
            .collect::<Vec<_>>()
            .join("/")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzEntry {
    pub family: AnsatzFamily,
    pub repetitions: Vec<usize>,
}

/// One discriminator architecture with every learning rate to try.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminatorEntry {
    pub type_name: DiscriminatorType,
    pub learning_rates: Vec<f64>,
    pub hidden_sizes: Vec<usize>,
    pub betas: (f64, f64),
}

impl DiscriminatorEntry {
    pub fn specs(&self) -> impl Iterator<Item = DiscriminatorSpec> + '_ {
        self.learning_rates.iter().map(|&lr| DiscriminatorSpec {
            type_name: self.type_name,
            hidden_sizes: self.hidden_sizes.clone(),
            learning_rate: lr,
            betas: self.betas,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub learning_rates: Vec<f64>,
    pub betas: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub goal: String,
    pub metrics: Vec<String>,
    pub n_containers: usize,
    pub visualizations: Vec<String>,
    pub distributions: Vec<DistributionSource>,
    pub ansaetze: Vec<AnsatzEntry>,
    pub initializations: Vec<InitStrategy>,
    pub num_qubits: Vec<usize>,
    pub batch_size: usize,
    pub num_epochs: usize,
    pub num_training_runs: usize,
    pub discriminators: Vec<DiscriminatorEntry>,
    pub optimizer: OptimizerConfig,
    pub budget: TrainingBudget,
    pub master_seed: u64,
    /// Non-fatal findings: unknown fields, ignored fields, relaxed syntax.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

pub const DEFAULT_GENERATOR_BETAS: (f64, f64) = (0.9, 0.999);
pub const DEFAULT_DISCRIMINATOR_BETAS: (f64, f64) = (0.9, 0.999);

// ---------------------------------------------------------------------------
// Order-preserving JSON tree that keeps duplicate keys.

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Null,
    Bool(bool),
    Num(serde_json::Number),
    Str(String),
    Arr(Vec<Node>),
    Obj(Vec<(String, Node)>),
}

impl Node {
    fn kind(&self) -> &'static str {
        match self {
            Node::Null => "null",
            Node::Bool(_) => "a boolean",
            Node::Num(_) => "a number",
            Node::Str(_) => "a string",
            Node::Arr(_) => "an array",
            Node::Obj(_) => "an object",
        }
    }
}

struct NodeVisitor;

impl<'de> Visitor<'de> for NodeVisitor {
    type Value = Node;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("any JSON value")
    }
    fn visit_unit<E>(self) -> Result<Node, E> {
        Ok(Node::Null)
    }
    fn visit_bool<E>(self, v: bool) -> Result<Node, E> {
        Ok(Node::Bool(v))
    }
    fn visit_i64<E>(self, v: i64) -> Result<Node, E> {
        Ok(Node::Num(v.into()))
    }
    fn visit_u64<E>(self, v: u64) -> Result<Node, E> {
        Ok(Node::Num(v.into()))
    }
    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Node, E> {
        serde_json::Number::from_f64(v)
            .map(Node::Num)
            .ok_or_else(|| E::custom("non-finite number"))
    }
    fn visit_str<E>(self, v: &str) -> Result<Node, E> {
        Ok(Node::Str(v.to_string()))
    }
    fn visit_string<E>(self, v: String) -> Result<Node, E> {
        Ok(Node::Str(v))
    }
    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Node, A::Error> {
        let mut out = Vec::new();
        while let Some(v) = seq.next_element()? {
            out.push(v);
        }
        Ok(Node::Arr(out))
    }
    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Node, A::Error> {
        let mut out = Vec::new();
        while let Some((k, v)) = map.next_entry::<String, Node>()? {
            out.push((k, v));
        }
        Ok(Node::Obj(out))
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(NodeVisitor)
    }
}

// ---------------------------------------------------------------------------
// Lenient pre-pass.

struct Sanitized {
    text: String,
    /// Original byte offset of every byte of `text`, plus one past the end.
    origin: Vec<usize>,
    notes: Vec<String>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn sanitize(src: &str) -> Sanitized {
    let bytes = src.as_bytes();
    let mut text = Vec::with_capacity(bytes.len());
    let mut origin = Vec::with_capacity(bytes.len() + 1);
    let mut notes = Vec::new();
    let mut in_string = false;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if in_string {
            match c {
                b'\\' => {
                    let next = bytes.get(i + 1).copied();
                    if matches!(next, Some(b'"' | b'\\' | b'/' | b'b' | b'f' | b'n' | b'r' | b't' | b'u')) {
                        text.extend([c, next.unwrap()]);
                        origin.extend([i, i + 1]);
                        i += 2;
                        continue;
                    }
                    let (line, col) = line_col(src, i);
                    notes.push(format!("line {line}, column {col}: backslash taken literally"));
                    text.extend(b"\\\\");
                    origin.extend([i, i]);
                }
                b'"' => {
                    in_string = false;
                    text.push(c);
                    origin.push(i);
                }
                _ => {
                    text.push(c);
                    origin.push(i);
                }
            }
        } else {
            match c {
                b'"' => in_string = true,
                b',' => {
                    let rest = bytes[i + 1..].iter().find(|b| !b.is_ascii_whitespace());
                    // only a comma that ends a complete value is "trailing"
                    let prev = text.iter().rev().find(|b| !b.is_ascii_whitespace());
                    let after_value = !matches!(prev, None | Some(b':' | b',' | b'[' | b'{'));
                    if after_value && matches!(rest, Some(b'}' | b']')) {
                        let (line, col) = line_col(src, i);
                        notes.push(format!("line {line}, column {col}: trailing comma ignored"));
                        text.push(b' ');
                        origin.push(i);
                        i += 1;
                        continue;
                    }
                }
                _ => {}
            }
            text.push(c);
            origin.push(i);
        }
        i += 1;
    }
    origin.push(bytes.len());
    Sanitized {
        // only ASCII bytes were inserted or replaced
        text: String::from_utf8(text).expect("still UTF-8"),
        origin,
        notes,
    }
}

fn syntax_error(src: &str, s: &Sanitized, err: &serde_json::Error) -> ConfigError {
    let (line, column) = (err.line().max(1), err.column());
    let line_start = s
        .text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum::<usize>();
    let offset = (line_start + column.saturating_sub(1)).min(s.text.len());
    let (line, column) = line_col(src, s.origin[offset]);
    let message = err.to_string();
    let message = message
        .rsplit_once(" at line ")
        .map_or(message.as_str(), |(m, _)| m)
        .to_string();
    ConfigError::SyntaxError { line, column, message }
}

// ---------------------------------------------------------------------------
// Typed extraction.

struct Obj<'a> {
    path: String,
    entries: &'a [(String, Node)],
}

impl<'a> Obj<'a> {
    fn new(path: &str, node: &'a Node) -> Result<Self, ConfigError> {
        match node {
            Node::Obj(entries) => Ok(Self {
                path: path.to_string(),
                entries,
            }),
            other => Err(invalid(path, format!("expected an object, found {}", other.kind()))),
        }
    }

    fn field(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn get(&self, key: &str) -> Option<&'a Node> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn require(&self, key: &str) -> Result<&'a Node, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::MissingField(self.field(key)))
    }

    fn unknown_keys(&self, known: &[&str], warnings: &mut Vec<String>) {
        for (k, _) in self.entries {
            if !known.contains(&k.as_str()) {
                warnings.push(format!("unknown field `{}` ignored", self.field(k)));
            }
        }
    }
}

fn as_str<'a>(field: &str, n: &'a Node) -> Result<&'a str, ConfigError> {
    match n {
        Node::Str(s) => Ok(s),
        other => Err(invalid(field, format!("expected a string, found {}", other.kind()))),
    }
}

fn as_f64(field: &str, n: &Node) -> Result<f64, ConfigError> {
    match n {
        Node::Num(x) => x.as_f64().ok_or_else(|| invalid(field, "not representable")),
        other => Err(invalid(field, format!("expected a number, found {}", other.kind()))),
    }
}

fn as_u64(field: &str, n: &Node) -> Result<u64, ConfigError> {
    match n {
        Node::Num(x) => {
            if let Some(v) = x.as_u64() {
                return Ok(v);
            }
            // allow integral floats such as 1e9
            match x.as_f64() {
                Some(f) if f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 => Ok(f as u64),
                _ => Err(invalid(field, format!("expected a non-negative integer, found {x}"))),
            }
        }
        other => Err(invalid(field, format!("expected an integer, found {}", other.kind()))),
    }
}

fn as_usize(field: &str, n: &Node) -> Result<usize, ConfigError> {
    as_u64(field, n).and_then(|v| usize::try_from(v).map_err(|_| invalid(field, "too large")))
}

fn positive_usize(field: &str, n: &Node) -> Result<usize, ConfigError> {
    match as_usize(field, n)? {
        0 => Err(invalid(field, "must be at least 1")),
        v => Ok(v),
    }
}

/// An array, or a lone scalar read as a one-element list.
fn as_list(n: &Node) -> Vec<&Node> {
    match n {
        Node::Arr(items) => items.iter().collect(),
        other => vec![other],
    }
}

fn non_empty<T>(field: &str, v: Vec<T>) -> Result<Vec<T>, ConfigError> {
    if v.is_empty() {
        Err(invalid(field, "list must not be empty"))
    } else {
        Ok(v)
    }
}

fn list_of<T>(
    field: &str,
    n: &Node,
    mut f: impl FnMut(&str, &Node) -> Result<T, ConfigError>,
) -> Result<Vec<T>, ConfigError> {
    as_list(n)
        .into_iter()
        .enumerate()
        .map(|(i, item)| f(&format!("{field}[{i}]"), item))
        .collect()
}

fn learning_rate(field: &str, n: &Node) -> Result<f64, ConfigError> {
    let v = as_f64(field, n)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(field, format!("learning rate {v} must be positive")))
    }
}

fn betas(field: &str, n: &Node) -> Result<(f64, f64), ConfigError> {
    let v = list_of(field, n, as_f64)?;
    match *v.as_slice() {
        [b1, b2] if 0.0 < b1 && b1 < b2 && b2 < 1.0 => Ok((b1, b2)),
        [_, _] => Err(invalid(field, "need 0 < beta1 < beta2 < 1")),
        _ => Err(invalid(field, "expected two values")),
    }
}

fn parse_distribution(field: &str, n: &Node, w: &mut Vec<String>) -> Result<DistributionSource, ConfigError> {
    let o = Obj::new(field, n)?;
    o.unknown_keys(&["data_path", "samples", "discretization"], w);
    let data_path = as_str(&o.field("data_path"), o.require("data_path")?)?.to_string();
    if data_path.trim().is_empty() {
        return Err(invalid(&o.field("data_path"), "empty path"));
    }
    let samples = o
        .get("samples")
        .map(|v| positive_usize(&o.field("samples"), v))
        .transpose()?;
    let discretization = match o.get("discretization") {
        Some(v) => as_str(&o.field("discretization"), v)?.to_string(),
        None => "optimal".to_string(),
    };
    if !discretization.eq_ignore_ascii_case("optimal") {
        return Err(invalid(
            &o.field("discretization"),
            format!("unsupported scheme {discretization:?} (only \"optimal\")"),
        ));
    }
    Ok(DistributionSource {
        data_path,
        samples,
        discretization,
    })
}

fn parse_ansatz(field: &str, n: &Node, w: &mut Vec<String>) -> Result<AnsatzEntry, ConfigError> {
    let o = Obj::new(field, n)?;
    o.unknown_keys(&["type", "repetitions"], w);
    let name = as_str(&o.field("type"), o.require("type")?)?;
    let family: AnsatzFamily = name
        .parse()
        .map_err(|e: crate::quantum::QuantumError| invalid(&o.field("type"), e.to_string()))?;
    let reps_field = o.field("repetitions");
    let repetitions = non_empty(
        &reps_field,
        list_of(&reps_field, o.require("repetitions")?, positive_usize)?,
    )?;
    Ok(AnsatzEntry { family, repetitions })
}

fn parse_init(field: &str, n: &Node, w: &mut Vec<String>) -> Result<InitStrategy, ConfigError> {
    let o = Obj::new(field, n)?;
    o.unknown_keys(&["type", "mean", "std", "seed"], w);
    let name = as_str(&o.field("type"), o.require("type")?)?;
    let kind: InitKind = name.parse().map_err(|e: String| invalid(&o.field("type"), e))?;
    let mut s = InitStrategy::new(kind);
    s.mean = o.get("mean").map(|v| as_f64(&o.field("mean"), v)).transpose()?;
    s.std = o.get("std").map(|v| as_f64(&o.field("std"), v)).transpose()?;
    if let Some(std) = s.std {
        if !(std > 0.0 && std.is_finite()) {
            return Err(invalid(&o.field("std"), "must be positive"));
        }
    }
    s.seed = o.get("seed").map(|v| as_u64(&o.field("seed"), v)).transpose()?;
    Ok(s)
}

fn parse_discriminator_pair(
    field: &str,
    type_node: &Node,
    hparams: Option<&Node>,
    w: &mut Vec<String>,
) -> Result<DiscriminatorEntry, ConfigError> {
    let type_field = format!("{field}.type");
    let type_name: DiscriminatorType = as_str(&type_field, type_node)?
        .parse()
        .map_err(|e: String| invalid(&type_field, e))?;
    let hp_field = format!("{field}.hparams");
    let hp = hparams.ok_or_else(|| ConfigError::MissingField(hp_field.clone()))?;
    let o = Obj::new(&hp_field, hp)?;
    o.unknown_keys(&["lr", "n_hidden", "n_input", "betas"], w);
    let lr_field = o.field("lr");
    let learning_rates = non_empty(&lr_field, list_of(&lr_field, o.require("lr")?, learning_rate)?)?;
    let hidden_sizes = match o.get("n_hidden") {
        Some(v) => {
            let f = o.field("n_hidden");
            non_empty(&f, list_of(&f, v, positive_usize)?)?
        }
        None => type_name.default_hidden_sizes(),
    };
    if let Some(v) = o.get("n_input") {
        let n_input = positive_usize(&o.field("n_input"), v)?;
        w.push(format!(
            "`{}` = {n_input} ignored: the discriminator reads one scalar sample at a time",
            o.field("n_input")
        ));
    }
    let betas = match o.get("betas") {
        Some(v) => betas(&o.field("betas"), v)?,
        None => DEFAULT_DISCRIMINATOR_BETAS,
    };
    Ok(DiscriminatorEntry {
        type_name,
        learning_rates,
        hidden_sizes,
        betas,
    })
}

fn parse_discriminators(n: &Node, w: &mut Vec<String>) -> Result<Vec<DiscriminatorEntry>, ConfigError> {
    let field = "discriminator";
    let out = match n {
        // {"type": …, "hparams": {…}, "type": …, "hparams": {…}}
        Node::Obj(entries) => {
            let types: Vec<&Node> = entries.iter().filter(|(k, _)| k == "type").map(|(_, v)| v).collect();
            let hps: Vec<&Node> = entries.iter().filter(|(k, _)| k == "hparams").map(|(_, v)| v).collect();
            Obj::new(field, n)?.unknown_keys(&["type", "hparams"], w);
            if types.is_empty() {
                return Err(ConfigError::MissingField(format!("{field}.type")));
            }
            if hps.len() > types.len() {
                return Err(invalid(field, "more `hparams` blocks than `type` entries"));
            }
            types
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let f = if types.len() == 1 { field.to_string() } else { format!("{field}[{i}]") };
                    parse_discriminator_pair(&f, t, hps.get(i).copied(), w)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        Node::Arr(items) => items
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let f = format!("{field}[{i}]");
                let o = Obj::new(&f, item)?;
                o.unknown_keys(&["type", "hparams"], w);
                parse_discriminator_pair(&f, o.require("type")?, o.get("hparams"), w)
            })
            .collect::<Result<Vec<_>, _>>()?,
        other => return Err(invalid(field, format!("expected an object or array, found {}", other.kind()))),
    };
    non_empty(field, out)
}

fn parse_budget(n: &Node, w: &mut Vec<String>) -> Result<TrainingBudget, ConfigError> {
    let o = Obj::new("budget", n)?;
    o.unknown_keys(&["max_wall_seconds", "max_circuit_evaluations"], w);
    let mut b = TrainingBudget::default();
    if let Some(v) = o.get("max_wall_seconds") {
        let f = o.field("max_wall_seconds");
        b.max_wall_seconds = as_f64(&f, v)?;
        if !(b.max_wall_seconds > 0.0) {
            return Err(invalid(&f, "must be positive"));
        }
    }
    if let Some(v) = o.get("max_circuit_evaluations") {
        let f = o.field("max_circuit_evaluations");
        b.max_circuit_evaluations = as_u64(&f, v)?;
        if b.max_circuit_evaluations == 0 {
            return Err(invalid(&f, "must be positive"));
        }
    }
    Ok(b)
}

const TOP_LEVEL: &[&str] = &[
    "name",
    "goal",
    "metrics",
    "n_containers",
    "visualizations",
    "distributions",
    "ansaetze",
    "initializations",
    "num_qubits",
    "batch_size",
    "num_epochs",
    "num_training_runs",
    "discriminator",
    "optimizer",
    "budget",
    "master_seed",
];

/// Parses and validates a search configuration.
pub fn parse_config(bytes: &[u8]) -> Result<ExperimentConfig, ConfigError> {
    let src = std::str::from_utf8(bytes).map_err(|e| {
        let (line, column) = line_col(&String::from_utf8_lossy(&bytes[..e.valid_up_to()]), e.valid_up_to());
        ConfigError::SyntaxError {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    let s = sanitize(src);
    let root: Node = serde_json::from_str(&s.text).map_err(|e| syntax_error(src, &s, &e))?;
    let mut w: Vec<String> = s.notes.clone();
    let o = Obj::new("", &root).map_err(|_| invalid("(root)", "expected a JSON object"))?;
    for (i, (k, _)) in o.entries.iter().enumerate() {
        if o.entries[..i].iter().any(|(prev, _)| prev == k) {
            return Err(invalid(k, "duplicate key"));
        }
    }
    o.unknown_keys(TOP_LEVEL, &mut w);

    let text = |key: &str| -> Result<String, ConfigError> {
        o.get(key).map_or(Ok(String::new()), |v| as_str(key, v).map(str::to_string))
    };
    let name = text("name")?;
    let goal = text("goal")?;
    let metrics = match o.get("metrics") {
        Some(v) => list_of("metrics", v, |f, n| as_str(f, n).map(str::to_string))?,
        None => Vec::new(),
    };
    let n_containers = positive_usize("n_containers", o.require("n_containers")?)?;
    let visualizations = match o.get("visualizations") {
        Some(v) => list_of("visualizations", v, |f, n| as_str(f, n).map(str::to_string))?,
        None => Vec::new(),
    };
    for v in &visualizations {
        if !super::plots::VISUALIZATIONS.contains(&v.as_str()) {
            w.push(format!("visualization {v:?} is not known and will fail the reporting stage"));
        }
    }
    let distributions = non_empty(
        "distributions",
        list_of("distributions", o.require("distributions")?, |f, n| parse_distribution(f, n, &mut w))?,
    )?;
    let ansaetze = non_empty(
        "ansaetze",
        list_of("ansaetze", o.require("ansaetze")?, |f, n| parse_ansatz(f, n, &mut w))?,
    )?;
    let initializations = non_empty(
        "initializations",
        list_of("initializations", o.require("initializations")?, |f, n| parse_init(f, n, &mut w))?,
    )?;
    let num_qubits = non_empty(
        "num_qubits",
        list_of("num_qubits", o.require("num_qubits")?, |f, n| {
            let q = as_usize(f, n)?;
            if (1..=MAX_QUBITS).contains(&q) {
                Ok(q)
            } else {
                Err(invalid(f, format!("{q} qubits outside 1..={MAX_QUBITS}")))
            }
        })?,
    )?;
    let batch_size = positive_usize("batch_size", o.require("batch_size")?)?;
    let num_epochs = positive_usize("num_epochs", o.require("num_epochs")?)?;
    let num_training_runs = positive_usize("num_training_runs", o.require("num_training_runs")?)?;
    let discriminators = parse_discriminators(o.require("discriminator")?, &mut w)?;

    let opt = Obj::new("optimizer", o.require("optimizer")?)?;
    opt.unknown_keys(&["lr", "betas"], &mut w);
    let optimizer = OptimizerConfig {
        learning_rates: non_empty(
            "optimizer.lr",
            list_of("optimizer.lr", opt.require("lr")?, learning_rate)?,
        )?,
        betas: match opt.get("betas") {
            Some(v) => betas("optimizer.betas", v)?,
            None => DEFAULT_GENERATOR_BETAS,
        },
    };
    let budget = match o.get("budget") {
        Some(v) => parse_budget(v, &mut w)?,
        None => TrainingBudget::default(),
    };
    let master_seed = o.get("master_seed").map(|v| as_u64("master_seed", v)).transpose()?.unwrap_or(0);

    for msg in &w {
        log::warn!("config: {msg}");
    }
    Ok(ExperimentConfig {
        name,
        goal,
        metrics,
        n_containers,
        visualizations,
        distributions,
        ansaetze,
        initializations,
        num_qubits,
        batch_size,
        num_epochs,
        num_training_runs,
        discriminators,
        optimizer,
        budget,
        master_seed,
        warnings: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "n_containers": 1,
        "distributions": [{"data_path": "data/x.csv", "samples": 10}],
        "ansaetze": [{"type": "zoufal", "repetitions": [1]}],
        "initializations": [{"type": "uniform"}],
        "num_qubits": [2],
        "batch_size": 8,
        "num_epochs": 5,
        "num_training_runs": 1,
        "discriminator": {"type": "custom_classical_1", "hparams": {"lr": [1e-3]}},
        "optimizer": {"lr": [1e-3], "betas": [0.7, 0.99]}
    }"#;

    fn with(key: &str, value: &str) -> String {
        let mut v: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
        v[key] = serde_json::from_str(value).unwrap();
        v.to_string()
    }

    fn without(key: &str) -> String {
        let mut v: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
        v.as_object_mut().unwrap().remove(key);
        v.to_string()
    }

    #[test]
    fn minimal_defaults() {
        let c = parse_config(MINIMAL.as_bytes()).unwrap();
        assert_eq!(c.budget.max_wall_seconds, 3600.0);
        assert_eq!(c.budget.max_circuit_evaluations, 1_000_000_000);
        assert_eq!(c.master_seed, 0);
        assert_eq!(c.discriminators[0].hidden_sizes, vec![20]);
        assert_eq!(c.discriminators[0].betas, (0.9, 0.999));
        assert!(c.warnings.is_empty(), "{:?}", c.warnings);
    }

    #[test]
    fn missing_ansaetze() {
        assert_eq!(
            parse_config(without("ansaetze").as_bytes()),
            Err(ConfigError::MissingField("ansaetze".into()))
        );
    }

    #[test]
    fn missing_nested_field_is_qualified() {
        let s = with("distributions", r#"[{"samples": 3}]"#);
        assert_eq!(
            parse_config(s.as_bytes()),
            Err(ConfigError::MissingField("distributions[0].data_path".into()))
        );
    }

    #[test]
    fn qubit_ceiling() {
        let e = parse_config(with("num_qubits", "[13]").as_bytes()).unwrap_err();
        assert!(matches!(e, ConfigError::InvalidValue { ref field, .. } if field == "num_qubits[0]"), "{e}");
        assert!(parse_config(with("num_qubits", "[12]").as_bytes()).is_ok());
        assert!(parse_config(with("num_qubits", "[0]").as_bytes()).is_err());
    }

    #[test]
    fn empty_lists_rejected() {
        for key in ["ansaetze", "num_qubits", "initializations", "distributions"] {
            assert!(
                matches!(parse_config(with(key, "[]").as_bytes()), Err(ConfigError::InvalidValue { .. })),
                "{key}"
            );
        }
        assert!(parse_config(with("n_containers", "0").as_bytes()).is_err());
    }

    #[test]
    fn unknown_fields_warn() {
        let c = parse_config(with("colour", "\"blue\"").as_bytes()).unwrap();
        assert_eq!(c.warnings.len(), 1);
        assert!(c.warnings[0].contains("colour"));
    }

    #[test]
    fn syntax_error_position() {
        let text = "{\n  \"n_containers\": 1,\n  \"x\": ]\n}";
        match parse_config(text.as_bytes()) {
            Err(ConfigError::SyntaxError { line, column, .. }) => assert_eq!((line, column), (3, 8)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_error_position_survives_rewrites() {
        // the escape fix and the trailing comma sit before the error
        let text = "{\"p\": \"a\\qb\", \"l\": [1,],\n  \"x\": tru }";
        match parse_config(text.as_bytes()) {
            Err(ConfigError::SyntaxError { line, column, .. }) => {
                assert_eq!(line, 2);
                // serde reports the position after the bad token
                assert!((8..=12).contains(&column), "{column}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn backslash_paths_and_trailing_commas() {
        let s = MINIMAL.replace("data/x.csv", r"\data\x.csv").replace("\"num_training_runs\": 1,", "\"num_training_runs\": 1,,");
        // double comma is a real error
        assert!(matches!(parse_config(s.as_bytes()), Err(ConfigError::SyntaxError { .. })));
        let s = MINIMAL
            .replace("data/x.csv", r"\data\x.csv")
            .replace("[1e-3]}}", "[1e-3],},}");
        let c = parse_config(s.as_bytes()).unwrap();
        assert_eq!(c.distributions[0].data_path, r"\data\x.csv");
        assert_eq!(c.distributions[0].store_key(), "data/x.csv");
        assert_eq!(c.warnings.len(), 4, "{:?}", c.warnings);
    }

    #[test]
    fn comma_after_key_is_not_trailing() {
        match parse_config(b"{\n  \"n_containers\": ,\n}") {
            Err(ConfigError::SyntaxError { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config(b"[,]"), Err(ConfigError::SyntaxError { .. })));
    }

    #[test]
    fn repeated_discriminator_keys_and_array_form() {
        let obj = r#"{"type": "custom_classical_1", "hparams": {"lr": [1e-4], "n_input": 50},
                      "type": "custom_classical_2", "hparams": {"lr": [1e-4, 1e-3], "n_hidden": [40, 10]}}"#;
        let c = parse_config(with_raw("discriminator", obj).as_bytes()).unwrap();
        assert_eq!(c.discriminators.len(), 2);
        assert_eq!(c.discriminators[1].type_name, DiscriminatorType::CustomClassical2);
        assert_eq!(c.discriminators[1].learning_rates, vec![1e-4, 1e-3]);
        assert!(c.warnings.iter().any(|w| w.contains("n_input")));
        let arr = r#"[{"type": "custom_classical_1", "hparams": {"lr": 1e-4}},
                      {"type": "custom_classical_2", "hparams": {"lr": [1e-4]}}]"#;
        let c2 = parse_config(with_raw("discriminator", arr).as_bytes()).unwrap();
        assert_eq!(c2.discriminators.len(), 2);
        assert_eq!(c2.discriminators[0].learning_rates, vec![1e-4]);
    }

    /// Swaps the discriminator block for raw text (possibly with duplicate keys).
    fn with_raw(key: &str, raw: &str) -> String {
        assert_eq!(key, "discriminator");
        let old = r#""discriminator": {"type": "custom_classical_1", "hparams": {"lr": [1e-3]}},"#;
        assert!(MINIMAL.contains(old));
        MINIMAL.replace(old, &format!("\"discriminator\": {raw},"))
    }

    #[test]
    fn invalid_values() {
        assert!(parse_config(with("optimizer", r#"{"lr": [1e-3], "betas": [0.99, 0.7]}"#).as_bytes()).is_err());
        assert!(parse_config(with("optimizer", r#"{"lr": [-1]}"#).as_bytes()).is_err());
        assert!(parse_config(with("ansaetze", r#"[{"type": "nope", "repetitions": [1]}]"#).as_bytes()).is_err());
        assert!(parse_config(with("ansaetze", r#"[{"type": "zoufal", "repetitions": [0]}]"#).as_bytes()).is_err());
        assert!(parse_config(with("initializations", r#"[{"type": "gaussian"}]"#).as_bytes()).is_err());
        assert!(parse_config(with("budget", r#"{"max_circuit_evaluations": 0}"#).as_bytes()).is_err());
        assert!(parse_config(b"[1, 2]").is_err());
    }

    #[test]
    fn budget_and_seed_overrides() {
        let c = parse_config(
            with("budget", r#"{"max_wall_seconds": 5, "max_circuit_evaluations": 1e6}"#).as_bytes(),
        )
        .unwrap();
        assert_eq!(c.budget.max_wall_seconds, 5.0);
        assert_eq!(c.budget.max_circuit_evaluations, 1_000_000);
        let c = parse_config(with("master_seed", "42").as_bytes()).unwrap();
        assert_eq!(c.master_seed, 42);
    }

    #[test]
    fn scalar_accepted_where_list_expected() {
        let c = parse_config(with("num_qubits", "3").as_bytes()).unwrap();
        assert_eq!(c.num_qubits, vec![3]);
        let c = parse_config(with("metrics", "\"relative_entropy\"").as_bytes()).unwrap();
        assert_eq!(c.metrics, vec!["relative_entropy"]);
    }
}

//! Channel spec files: a TOML document with alphabets, one table per state
//! and optional named input distributions.
//!
//! ```toml
//! [alphabets]
//! input = 2                  # a size, or a list of labels
//! main_output = ["0", "1"]
//! eaves_output = 2
//!
//! [[states]]
//! name = "quiet"
//! main = [[0.95, 0.05], [0.05, 0.95]]
//! eaves = [[0.6, 0.4], [0.4, 0.6]]
//!
//! [distributions]
//! uniform = [0.5, 0.5]
//! ```

use std::collections::BTreeMap;
use std::ops::Range;

use avwc_core::{Avwc, Channel, Distribution};
use serde::{Deserialize, Serialize};
use toml::Spanned;

/// Row sums may deviate from one by at most this much.
pub const ROW_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub message: String,
    /// 1-based line and column, when the error has a location.
    pub position: Option<(usize, usize)>,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.position {
            Some((line, col)) => write!(f, "line {line}, column {col}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphabetDecl {
    Size(usize),
    Labels(Vec<String>),
}

impl AlphabetDecl {
    fn labels(&self) -> Vec<String> {
        match self {
            AlphabetDecl::Size(k) => default_labels(*k),
            AlphabetDecl::Labels(l) => l.clone(),
        }
    }
}

pub fn default_labels(k: usize) -> Vec<String> {
    (0..k).map(|i| i.to_string()).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlphabets {
    input: Spanned<AlphabetDecl>,
    main_output: Spanned<AlphabetDecl>,
    eaves_output: Spanned<AlphabetDecl>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    name: Option<Spanned<String>>,
    main: Spanned<Vec<Spanned<Vec<f64>>>>,
    eaves: Spanned<Vec<Spanned<Vec<f64>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    alphabets: RawAlphabets,
    states: Vec<RawState>,
    #[serde(default)]
    distributions: BTreeMap<String, Spanned<Vec<f64>>>,
}

/// A parsed and validated spec file.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub input_labels: Vec<String>,
    pub main_labels: Vec<String>,
    pub eaves_labels: Vec<String>,
    pub state_names: Vec<String>,
    pub avwc: Avwc,
    pub distributions: BTreeMap<String, Distribution>,
}

struct Checker<'a> {
    text: &'a str,
}

impl Checker<'_> {
    fn fail<T>(&self, span: Range<usize>, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            position: Some(line_col(self.text, span.start)),
        })
    }

    fn alphabet(&self, decl: &Spanned<AlphabetDecl>, what: &str) -> Result<Vec<String>, ParseError> {
        let labels = decl.get_ref().labels();
        if labels.is_empty() {
            return self.fail(decl.span(), format!("{what} alphabet is empty"));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return self.fail(decl.span(), format!("{what} label {l:?} is empty or contains whitespace"));
            }
            if !seen.insert(l) {
                return self.fail(decl.span(), format!("duplicate {what} label {l:?}"));
            }
        }
        Ok(labels)
    }

    fn matrix(
        &self,
        m: &Spanned<Vec<Spanned<Vec<f64>>>>,
        rows: usize,
        cols: usize,
        what: &str,
    ) -> Result<Channel, ParseError> {
        if m.get_ref().len() != rows {
            return self.fail(m.span(), format!("{what} has {} rows, expected {rows}", m.get_ref().len()));
        }
        for (x, row) in m.get_ref().iter().enumerate() {
            let r = row.get_ref();
            if r.len() != cols {
                return self.fail(row.span(), format!("{what} row {x} has {} entries, expected {cols}", r.len()));
            }
            if let Some(v) = r.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return self.fail(row.span(), format!("{what} row {x} has entry {v}, not a probability"));
            }
            let sum: f64 = r.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return self.fail(row.span(), format!("{what} row {x} sums to {sum}, not 1"));
            }
        }
        Channel::new(m.get_ref().iter().map(|r| r.get_ref().clone()).collect()).or_else(|e| self.fail(m.span(), e.to_string()))
    }
}

pub fn parse_spec(text: &str) -> Result<ChannelSpec, ParseError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| ParseError {
        message: e.message().to_string(),
        position: e.span().map(|s| line_col(text, s.start)),
    })?;
    let ck = Checker { text };
    let input_labels = ck.alphabet(&raw.alphabets.input, "input")?;
    let main_labels = ck.alphabet(&raw.alphabets.main_output, "main output")?;
    let eaves_labels = ck.alphabet(&raw.alphabets.eaves_output, "eavesdropper output")?;
    if raw.states.is_empty() {
        return Err(ParseError { message: "at least one [[states]] table is required".into(), position: None });
    }
    let mut state_names: Vec<String> = Vec::new();
    let (mut main, mut eaves) = (Vec::new(), Vec::new());
    for (i, st) in raw.states.iter().enumerate() {
        let name = match &st.name {
            Some(n) => {
                if state_names.contains(n.get_ref()) {
                    return ck.fail(n.span(), format!("duplicate state name {:?}", n.get_ref()));
                }
                n.get_ref().clone()
            }
            None => format!("s{i}"),
        };
        if state_names.contains(&name) {
            return Err(ParseError { message: format!("duplicate state name {name:?}"), position: None });
        }
        let label = format!("state {name:?} main matrix");
        main.push(ck.matrix(&st.main, input_labels.len(), main_labels.len(), &label)?);
        let label = format!("state {name:?} eavesdropper matrix");
        eaves.push(ck.matrix(&st.eaves, input_labels.len(), eaves_labels.len(), &label)?);
        state_names.push(name);
    }
    let mut distributions = BTreeMap::new();
    for (name, d) in &raw.distributions {
        if d.get_ref().len() != input_labels.len() {
            return ck.fail(d.span(), format!("distribution {name:?} has {} entries, expected {}", d.get_ref().len(), input_labels.len()));
        }
        let dist = Distribution::new(d.get_ref().clone()).or_else(|e| ck.fail(d.span(), format!("distribution {name:?}: {e}")))?;
        distributions.insert(name.clone(), dist);
    }
    let avwc = Avwc::new(main, eaves).map_err(|e| ParseError { message: e.to_string(), position: None })?;
    Ok(ChannelSpec { input_labels, main_labels, eaves_labels, state_names, avwc, distributions })
}

#[derive(Serialize)]
struct OutAlphabets<'a> {
    input: &'a [String],
    main_output: &'a [String],
    eaves_output: &'a [String],
}

#[derive(Serialize)]
struct OutState<'a> {
    name: &'a str,
    main: Vec<Vec<f64>>,
    eaves: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct OutSpec<'a> {
    alphabets: OutAlphabets<'a>,
    states: Vec<OutState<'a>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    distributions: BTreeMap<&'a str, Vec<f64>>,
}

impl ChannelSpec {
    /// Canonical TOML text; parsing it gives back an identical spec.
    pub fn to_toml(&self) -> String {
        let out = OutSpec {
            alphabets: OutAlphabets {
                input: &self.input_labels,
                main_output: &self.main_labels,
                eaves_output: &self.eaves_labels,
            },
            states: self
                .state_names
                .iter()
                .enumerate()
                .map(|(s, name)| OutState {
                    name,
                    main: self.avwc.main()[s].to_rows(),
                    eaves: self.avwc.eaves()[s].to_rows(),
                })
                .collect(),
            distributions: self.distributions.iter().map(|(k, v)| (k.as_str(), v.probs().to_vec())).collect(),
        };
        toml::to_string(&out).expect("spec serialises")
    }

    /// A named distribution from the file, `uniform`, or an inline list such
    /// as `0.3,0.7`.
    pub fn input_distribution(&self, name: Option<&str>) -> Result<Distribution, String> {
        let a = self.input_labels.len();
        match name {
            None | Some("uniform") if !self.distributions.contains_key("uniform") => Ok(Distribution::uniform(a)),
            Some(n) if self.distributions.contains_key(n) => Ok(self.distributions[n].clone()),
            None => Ok(self.distributions["uniform"].clone()),
            Some(inline) => {
                let probs: Vec<f64> = inline
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| format!("unknown distribution {inline:?}")))
                    .collect::<Result<_, _>>()?;
                if probs.len() != a {
                    return Err(format!("distribution {inline:?} has {} entries, expected {a}", probs.len()));
                }
                Distribution::new(probs).map_err(|e| e.to_string())
            }
        }
    }
}

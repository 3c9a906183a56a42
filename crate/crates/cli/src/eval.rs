//! Single-matrix evaluation and its text and JSON renderings.

use std::fmt::Write as _;

use detcore::chio::{chio_det, ChioOptions, PivotPolicy};
use detcore::dodgson::{condense_with_symbolic_entry, dodgson_det, DodgsonOptions, Perturbation, PerturbationMode};
use detcore::field::{eval_at, format_rational};
use detcore::matrix::parse_matrix;
use detcore::oracle::{det_definition, det_laplace};
use detcore::{Axis, BigRational, EpsRational, Field, Pos, Sign, SquareMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Largest order checked against cofactor expansion under `--verify`.
pub const VERIFY_MAX_ORDER: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dodgson,
    Chio,
    Laplace,
    Definition,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dodgson => "dodgson",
            Method::Chio => "chio",
            Method::Laplace => "laplace",
            Method::Definition => "definition",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct EvalRequest {
    pub matrix_text: String,
    pub method: Method,
    pub trace: bool,
    pub pivot_policy: PivotPolicy,
    pub forced_pivots: Vec<Pos>,
    pub symbolic_entry: Option<Pos>,
    pub seed: u64,
    pub output: OutputFormat,
    pub verify: bool,
}

impl EvalRequest {
    pub fn new(matrix_text: impl Into<String>, method: Method) -> Self {
        Self {
            matrix_text: matrix_text.into(),
            method,
            trace: false,
            pivot_policy: PivotPolicy::default(),
            forced_pivots: Vec::new(),
            symbolic_entry: None,
            seed: 0,
            output: OutputFormat::Text,
            verify: false,
        }
    }

    fn validate(&self) -> CliResult<()> {
        if !self.forced_pivots.is_empty() && self.method != Method::Chio {
            return Err(CliError::Usage("--forced-pivots requires --method chio".into()));
        }
        if self.symbolic_entry.is_some() && self.method != Method::Dodgson {
            return Err(CliError::Usage("--symbolic-entry requires --method dodgson".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagePivot {
    /// Index of the stage the pivot was taken in.
    pub stage: usize,
    pub position: Pos,
    pub value: BigRational,
}

/// Everything one evaluation produced, independent of how it is printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub method: Method,
    pub order: usize,
    pub value: BigRational,
    pub permutation_sign: Sign,
    /// Every stage as rows of tokens, from the (possibly shifted) input down.
    pub stages: Vec<Vec<Vec<String>>>,
    pub pivots: Vec<StagePivot>,
    pub divisor: Option<BigRational>,
    pub final_z: Option<BigRational>,
    pub shifts: Vec<(Axis, i64)>,
    pub perturbations: Vec<Perturbation>,
    pub epsilon_polynomial: Option<EpsRational>,
    /// Point at which the symbolic entry is evaluated, when one was requested.
    pub symbolic_point: Option<BigRational>,
}

fn tokens<F: Field>(m: &SquareMatrix<F>) -> Vec<Vec<String>> {
    m.rows().map(|r| r.iter().map(Field::to_token).collect()).collect()
}

fn plain(method: Method, a: &SquareMatrix<BigRational>, value: BigRational) -> Evaluation {
    Evaluation {
        method,
        order: a.order(),
        value,
        permutation_sign: Sign::Plus,
        stages: vec![tokens(a)],
        pivots: Vec::new(),
        divisor: None,
        final_z: None,
        shifts: Vec::new(),
        perturbations: Vec::new(),
        epsilon_polynomial: None,
        symbolic_point: None,
    }
}

pub fn evaluate(request: &EvalRequest) -> CliResult<Evaluation> {
    request.validate()?;
    let a = parse_matrix(&request.matrix_text)?;
    let evaluation = match request.method {
        Method::Laplace => plain(Method::Laplace, &a, det_laplace(&a)),
        Method::Definition => plain(Method::Definition, &a, det_definition(&a)?),
        Method::Chio => {
            let options = ChioOptions {
                policy: request.pivot_policy,
                forced_pivots: request.forced_pivots.clone(),
            };
            let (value, trace) = chio_det(&a, &options)?;
            let mut ev = plain(Method::Chio, &a, value);
            ev.stages = trace.stages.iter().map(|s| tokens(&s.matrix)).collect();
            ev.pivots = trace
                .stages
                .iter()
                .filter_map(|s| {
                    s.pivot.as_ref().map(|p| StagePivot {
                        stage: s.k,
                        position: p.position,
                        value: p.value.clone(),
                    })
                })
                .collect();
            ev.divisor = Some(trace.divisor);
            ev.final_z = Some(trace.final_z);
            ev
        }
        Method::Dodgson => match request.symbolic_entry {
            Some(pos) => {
                let (poly, trace) = condense_with_symbolic_entry(&a, pos)?;
                let point = a.get(pos)?.clone();
                let value = eval_at(&poly, &point)?;
                let mut ev = plain(Method::Dodgson, &a, value);
                ev.stages = trace.stages.to_tokens();
                ev.perturbations = trace.perturbations;
                ev.epsilon_polynomial = Some(poly);
                ev.symbolic_point = Some(point);
                ev
            }
            None => {
                let (value, trace) = dodgson_det(&a, &DodgsonOptions { seed: request.seed })?;
                let mut ev = plain(Method::Dodgson, &a, value);
                ev.stages = trace.stages.to_tokens();
                ev.permutation_sign = trace.permutation_sign;
                ev.shifts = trace.shifts_applied;
                ev.perturbations = trace.perturbations;
                ev.epsilon_polynomial = trace.final_polynomial;
                ev
            }
        },
    };
    if request.verify && a.order() <= VERIFY_MAX_ORDER {
        let expected = det_laplace(&a);
        if expected != evaluation.value {
            return Err(CliError::Verify(format!(
                "{} gave {} but cofactor expansion gives {}",
                request.method.name(),
                format_rational(&evaluation.value),
                format_rational(&expected)
            )));
        }
    }
    Ok(evaluation)
}

/// Runs a request and renders it in the requested format.
pub fn run_eval(request: &EvalRequest) -> CliResult<String> {
    let ev = evaluate(request)?;
    Ok(match request.output {
        OutputFormat::Json => {
            let mut s = serde_json::to_string(&JsonReport::from(&ev)).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => render_text(&ev, request.trace),
    })
}

fn stage_text(rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn describe_perturbation(p: &Perturbation) -> String {
    match p.mode {
        PerturbationMode::Replace => format!("# {} = {} replaced by e", p.position, format_rational(&p.original)),
        PerturbationMode::Add(c) => format!("# {} = {} perturbed by {:+}*e", p.position, format_rational(&p.original), c),
    }
}

/// Stages separated by `=>` lines with `#` annotations, ending in the value.
pub fn render_text(ev: &Evaluation, trace: bool) -> String {
    let mut out = String::new();
    let value = format_rational(&ev.value);
    if !trace {
        if let (Some(poly), Some(point)) = (&ev.epsilon_polynomial, &ev.symbolic_point) {
            let _ = writeln!(out, "{poly}");
            let _ = writeln!(out, "value at e={}: {value}", format_rational(point));
        } else {
            let _ = writeln!(out, "{value}");
        }
        return out;
    }

    for &(axis, k) in &ev.shifts {
        let _ = writeln!(out, "# cyclic shift of {axis} by {k}");
    }
    if !ev.shifts.is_empty() {
        let _ = writeln!(out, "# permutation sign {}", ev.permutation_sign);
    }
    for p in &ev.perturbations {
        let _ = writeln!(out, "{}", describe_perturbation(p));
    }

    // The closing 1x1 stage is replaced by the summary line below.
    let shown = match ev.method {
        Method::Dodgson | Method::Chio if ev.stages.len() > 1 => ev.stages.len() - 1,
        _ => ev.stages.len(),
    };
    for (k, stage) in ev.stages.iter().take(shown).enumerate() {
        out.push_str(&stage_text(stage));
        if let Some(p) = ev.pivots.iter().find(|p| p.stage == k) {
            let _ = writeln!(out, "# pivot {} = {}", p.position, format_rational(&p.value));
        }
        out.push_str("=>\n");
    }

    match ev.method {
        Method::Chio => {
            let z = ev.final_z.as_ref().expect("chio records Z");
            let d = ev.divisor.as_ref().expect("chio records the divisor");
            let _ = writeln!(out, "Z={} divisor={} value={value}", format_rational(z), format_rational(d));
        }
        Method::Dodgson => match (&ev.epsilon_polynomial, &ev.symbolic_point) {
            (Some(poly), Some(point)) => {
                let _ = writeln!(out, "{poly}");
                let _ = writeln!(out, "value at e={}: {value}", format_rational(point));
            }
            (Some(poly), None) => {
                let _ = writeln!(out, "{poly}");
                let _ = writeln!(out, "value at e=0: {value}");
            }
            _ => {
                let _ = writeln!(out, "{value}");
            }
        },
        Method::Laplace | Method::Definition => {
            let _ = writeln!(out, "{value}");
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPivot {
    pub stage: usize,
    pub r: usize,
    pub s: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPerturbation {
    pub r: usize,
    pub c: usize,
    pub original: String,
    /// `"replace"` or `"add"`.
    pub mode: String,
    pub coefficient: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonShift {
    pub axis: String,
    pub k: i64,
}

/// Machine-readable evaluation result. Every scalar is a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub value: String,
    pub method: Method,
    pub permutation_sign: i32,
    pub stages: Vec<Vec<Vec<String>>>,
    pub pivots: Vec<JsonPivot>,
    pub divisor: Option<String>,
    pub perturbations: Vec<JsonPerturbation>,
    pub epsilon_polynomial: Option<String>,
    pub shifts: Vec<JsonShift>,
}

impl From<&Evaluation> for JsonReport {
    fn from(ev: &Evaluation) -> Self {
        Self {
            value: format_rational(&ev.value),
            method: ev.method,
            permutation_sign: ev.permutation_sign.as_i32(),
            stages: ev.stages.clone(),
            pivots: ev
                .pivots
                .iter()
                .map(|p| JsonPivot {
                    stage: p.stage,
                    r: p.position.row,
                    s: p.position.col,
                    value: format_rational(&p.value),
                })
                .collect(),
            divisor: ev.divisor.as_ref().map(format_rational),
            perturbations: ev
                .perturbations
                .iter()
                .map(|p| JsonPerturbation {
                    r: p.position.row,
                    c: p.position.col,
                    original: format_rational(&p.original),
                    mode: match p.mode {
                        PerturbationMode::Replace => "replace".into(),
                        PerturbationMode::Add(_) => "add".into(),
                    },
                    coefficient: match p.mode {
                        PerturbationMode::Replace => None,
                        PerturbationMode::Add(c) => Some(c),
                    },
                })
                .collect(),
            epsilon_polynomial: ev.epsilon_polynomial.as_ref().map(EpsRational::to_compact),
            shifts: ev
                .shifts
                .iter()
                .map(|&(axis, k)| JsonShift {
                    axis: axis.to_string(),
                    k,
                })
                .collect(),
        }
    }
}

/// Parses `"i,j"` as a 1-based position.
pub fn parse_position(text: &str) -> CliResult<Pos> {
    let bad = || CliError::Usage(format!("expected a position like 2,1, got {text:?}"));
    let (r, c) = text.trim().split_once(',').ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let c: usize = c.trim().parse().map_err(|_| bad())?;
    if r == 0 || c == 0 {
        return Err(bad());
    }
    Ok(Pos::new(r, c))
}

/// Parses `"2,1;4,4;2,2"` as a list of positions.
pub fn parse_positions(text: &str) -> CliResult<Vec<Pos>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(parse_position).collect()
}

//! On-disk JSON formats. Rationals travel as strings (`"3"`, `"-1/2"`), LC
//! values as strings in the `eps` expression syntax.

use std::fs;
use std::path::Path;

use lcbayes_core::decision::{Action, FiniteProblem, Procedure, State};
use lcbayes_core::lp::{LowerBound, LpProblem, Relation};
use lcbayes_core::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ActionJson {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemJson {
    pub states: Vec<StateJson>,
    pub observations: Vec<String>,
    pub actions: Vec<ActionJson>,
    pub model: Vec<Vec<String>>,
    pub loss: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProcedureJson {
    Randomized { matrix: Vec<Vec<String>> },
    Nonrandomized { map: Vec<usize> },
}

pub fn parse_rational(s: &str) -> CliResult<Rational> {
    let t = s.trim();
    t.parse::<Rational>()
        .ok()
        .filter(|_| !t.is_empty())
        .ok_or_else(|| CliError::Schema(format!("'{s}' is not a rational of the form p or p/q")))
}

fn parse_row(row: &[String]) -> CliResult<Vec<Rational>> {
    row.iter().map(|s| parse_rational(s)).collect()
}

fn parse_matrix(m: &[Vec<String>]) -> CliResult<Vec<Vec<Rational>>> {
    m.iter().map(|r| parse_row(r)).collect()
}

pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

pub fn rational_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational_string).collect()
}

impl ProblemJson {
    pub fn to_problem(&self) -> CliResult<FiniteProblem> {
        let states = self
            .states
            .iter()
            .map(|s| {
                Ok(State {
                    label: s.label.clone(),
                    coords: s.coords.as_deref().map(parse_row).transpose()?,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        let actions = self
            .actions
            .iter()
            .map(|a| {
                Ok(Action {
                    label: a.label.clone(),
                    value: a.value.as_deref().map(parse_rational).transpose()?,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(FiniteProblem::new(
            states,
            self.observations.clone(),
            actions,
            parse_matrix(&self.model)?,
            parse_matrix(&self.loss)?,
        )?)
    }

    pub fn from_problem(p: &FiniteProblem) -> Self {
        ProblemJson {
            states: p
                .states()
                .iter()
                .map(|s| StateJson { label: s.label.clone(), coords: s.coords.as_deref().map(rational_strings) })
                .collect(),
            observations: p.observations().to_vec(),
            actions: p
                .actions()
                .iter()
                .map(|a| ActionJson { label: a.label.clone(), value: a.value.as_ref().map(rational_string) })
                .collect(),
            model: p.model().iter().map(|r| rational_strings(r)).collect(),
            loss: p.loss().iter().map(|r| rational_strings(r)).collect(),
        }
    }
}

impl ProcedureJson {
    pub fn to_procedure(&self) -> CliResult<Procedure> {
        Ok(match self {
            ProcedureJson::Randomized { matrix } => Procedure::Randomized(parse_matrix(matrix)?),
            ProcedureJson::Nonrandomized { map } => Procedure::Nonrandomized(map.clone()),
        })
    }

    pub fn from_procedure(d: &Procedure) -> Self {
        match d {
            Procedure::Randomized(m) => ProcedureJson::Randomized { matrix: m.iter().map(|r| rational_strings(r)).collect() },
            Procedure::Nonrandomized(map) => ProcedureJson::Nonrandomized { map: map.clone() },
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_owned(), source })
}

pub fn read_problem(path: &Path) -> CliResult<FiniteProblem> {
    read_json::<ProblemJson>(path)?.to_problem()
}

/// A procedures file is a JSON array of procedure objects; each is checked
/// against the problem.
pub fn read_procedures(path: &Path, p: &FiniteProblem) -> CliResult<Vec<Procedure>> {
    let raw: Vec<ProcedureJson> = read_json(path)?;
    raw.iter()
        .enumerate()
        .map(|(i, j)| {
            let d = j.to_procedure()?;
            d.validate(p).map_err(|e| CliError::Schema(format!("procedure {i}: {e}")))?;
            Ok(d)
        })
        .collect()
}

/// Debug form of a linear program.
#[derive(Debug, Clone, Serialize)]
pub struct LpJson {
    pub sense: &'static str,
    pub objective: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub relations: Vec<&'static str>,
    pub rhs: Vec<String>,
    pub lower: Vec<Option<String>>,
    pub upper: Vec<Option<String>>,
}

impl From<&LpProblem> for LpJson {
    fn from(lp: &LpProblem) -> Self {
        LpJson {
            sense: "max",
            objective: rational_strings(&lp.objective),
            rows: lp.rows.iter().map(|r| rational_strings(r)).collect(),
            relations: lp
                .relations
                .iter()
                .map(|r| match r {
                    Relation::Le => "<=",
                    Relation::Eq => "=",
                    Relation::Ge => ">=",
                })
                .collect(),
            rhs: rational_strings(&lp.rhs),
            lower: lp
                .lower
                .iter()
                .map(|l| match l {
                    LowerBound::Zero => Some("0".to_owned()),
                    LowerBound::NegInfinity => None,
                })
                .collect(),
            upper: lp.upper.iter().map(|u| u.as_ref().map(rational_string)).collect(),
        }
    }
}

/// `q` as a decimal string with `digits` places, truncated toward zero.
pub fn decimal(q: &Rational, digits: usize) -> String {
    use num_traits::Signed;
    let neg = q.is_negative();
    let a = q.abs();
    let whole = a.trunc();
    let mut frac = a - &whole;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&whole.to_integer().to_string());
    if digits > 0 {
        out.push('.');
        let ten = Rational::from_integer(10.into());
        for _ in 0..digits {
            frac *= &ten;
            let d = frac.trunc();
            out.push_str(&d.to_integer().to_string());
            frac -= d;
        }
    }
    out
}

//! Serializable reports and their aligned-column text rendering.

use lcbayes_core::parametric::{
    BernoulliBoundaryReport, BlythOutcome, NormalLocationReport, NotCertifiedReason, Probe, RegularityVerdict,
};
use lcbayes_core::synthesis::{ClassificationReport, GameAnalysis};
use lcbayes_core::{LcNumber, Rational, Valuation};
use serde::Serialize;
use serde_json::Value;

use crate::format::{decimal, rational_string, rational_strings, ProcedureJson};

/// Places after the decimal point in text-mode approximations.
const TEXT_DIGITS: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct LcJson {
    pub value: String,
    /// Coefficients are exact through `eps^k`; later terms were dropped.
    /// Null for exact values.
    pub exact_through: Option<String>,
    pub valuation: String,
    pub st: String,
}

fn eps_power(e: &Rational) -> String {
    if e.is_integer() {
        format!("eps^{e}")
    } else {
        format!("eps^({e})")
    }
}

impl From<&LcNumber> for LcJson {
    fn from(x: &LcNumber) -> Self {
        LcJson {
            value: x.to_string(),
            exact_through: x.precision_bound().map(eps_power),
            valuation: match x.valuation() {
                Valuation::Finite(v) => rational_string(&v),
                Valuation::Infinity => "inf".to_owned(),
            },
            st: x.st().map(|s| rational_string(&s)).unwrap_or_else(|_| "undefined".to_owned()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationJson {
    pub procedure: usize,
    pub rule: ProcedureJson,
    pub admissible: bool,
    pub extended_admissible: bool,
    pub bayes: bool,
    pub witness: Option<ProcedureJson>,
    pub epsilon_star: String,
    pub game_value: String,
    pub prior: Vec<String>,
    pub prior_may_be_nonunique: bool,
    pub bayes_slack: String,
    pub inner_best_responses: Vec<usize>,
}

impl ClassificationJson {
    pub fn new(index: usize, rule: &lcbayes_core::decision::Procedure, r: &ClassificationReport) -> Self {
        ClassificationJson {
            procedure: index,
            rule: ProcedureJson::from_procedure(rule),
            admissible: r.admissible,
            extended_admissible: r.extended_admissible,
            bayes: r.is_bayes(),
            witness: r.witness.as_ref().map(ProcedureJson::from_procedure),
            epsilon_star: rational_string(&r.epsilon_star),
            game_value: rational_string(&r.game_value),
            prior: rational_strings(r.prior.weights()),
            prior_may_be_nonunique: r.prior_may_be_nonunique,
            bayes_slack: rational_string(&r.bayes_slack),
            inner_best_responses: r.inner_best_responses.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesisJson {
    pub procedure: usize,
    pub game_value: String,
    pub epsilon_star: String,
    pub prior: Vec<String>,
    pub prior_may_be_nonunique: bool,
    pub bayes_slack: String,
    pub epsilon_bayes_verified: bool,
    pub inner_best_responses: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp: Option<crate::format::LpJson>,
}

impl SynthesisJson {
    pub fn new(index: usize, g: &GameAnalysis, verified: bool) -> Self {
        SynthesisJson {
            procedure: index,
            game_value: rational_string(&g.value),
            epsilon_star: rational_string(&-g.value.clone()),
            prior: rational_strings(g.witness_prior.weights()),
            prior_may_be_nonunique: g.prior_may_be_nonunique,
            bayes_slack: rational_string(&g.slack),
            epsilon_bayes_verified: verified,
            inner_best_responses: g.inner_best_responses.clone(),
            lp: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeJson {
    pub center: Vec<String>,
    pub radius: String,
}

impl From<&Probe> for ProbeJson {
    fn from(p: &Probe) -> Self {
        ProbeJson { center: rational_strings(&p.center), radius: rational_string(&p.radius) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityJson {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<String>,
}

impl From<&RegularityVerdict> for RegularityJson {
    fn from(v: &RegularityVerdict) -> Self {
        match v {
            RegularityVerdict::Regular => RegularityJson { verdict: "Regular", probe: None, lower: None, upper: None },
            RegularityVerdict::NotRegular { probe, upper } => RegularityJson {
                verdict: "NotRegular",
                probe: Some(probe.into()),
                lower: None,
                upper: Some(upper.to_string()),
            },
            RegularityVerdict::Indeterminate { probe, lower, upper } => RegularityJson {
                verdict: "Indeterminate",
                probe: Some(probe.into()),
                lower: Some(lower.to_string()),
                upper: Some(upper.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub outcome: &'static str,
    pub scope: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub challenger: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regularity: Option<RegularityJson>,
}

impl CertificateJson {
    pub fn new(o: &BlythOutcome, scope: String) -> Self {
        match o {
            BlythOutcome::CertifiedAdmissibleOnGrid { .. } => CertificateJson {
                outcome: "CertifiedAdmissibleOnGrid",
                scope,
                reason: None,
                challenger: None,
                regularity: None,
            },
            BlythOutcome::NotCertified(NotCertifiedReason::NotEpsilonBayes { challenger, .. }) => CertificateJson {
                outcome: "NotCertified",
                scope,
                reason: Some("not_epsilon_bayes"),
                challenger: Some(*challenger),
                regularity: None,
            },
            BlythOutcome::NotCertified(NotCertifiedReason::Regularity(v)) => CertificateJson {
                outcome: "NotCertified",
                scope,
                reason: Some("regularity"),
                challenger: None,
                regularity: Some(v.as_ref().into()),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RiskJson {
    /// `risk(θ) = constant + quadratic·‖θ‖²`.
    pub constant: LcJson,
    pub quadratic: LcJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalLocationJson {
    pub example: &'static str,
    pub dim: usize,
    pub order: u32,
    pub scale: String,
    pub epsilon: LcJson,
    pub shrinkage: LcJson,
    pub bayes_b: LcJson,
    pub bayes_b_closed_form: String,
    pub bayes_m: LcJson,
    pub gap: String,
    pub gap_series: LcJson,
    pub gap_infinitesimal: bool,
    pub risk: RiskJson,
    pub regularity: RegularityJson,
    pub certificate: CertificateJson,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// `n·x` written in the expression syntax, with `1·x` shortened to `x`.
fn times(n: usize, x: &str) -> String {
    if n == 1 {
        x.to_owned()
    } else {
        format!("{n}*{x}")
    }
}

impl NormalLocationJson {
    pub fn new(r: &NormalLocationReport, order: u32) -> Self {
        let mut notes = Vec::new();
        if r.dim == 2 {
            notes.push(
                "d = 2: every probe ball has mass of valuation 2, equal to the valuation of epsilon, \
                 so mass >> epsilon fails and the prior is reported NotRegular"
                    .to_owned(),
            );
        }
        NormalLocationJson {
            example: "normal-location",
            dim: r.dim,
            order,
            scale: r.scale.to_string(),
            epsilon: (&r.epsilon).into(),
            shrinkage: (&r.shrinkage).into(),
            bayes_b: (&r.bayes_b).into(),
            bayes_b_closed_form: format!("{}/(1+eps^2)", r.dim),
            bayes_m: (&r.bayes_m).into(),
            gap: format!("{}/(1+eps^2)", times(r.dim, "eps^2")),
            gap_series: (&r.gap).into(),
            gap_infinitesimal: r.gap_infinitesimal,
            risk: RiskJson { constant: (&r.risk_constant).into(), quadratic: (&r.risk_quadratic).into() },
            regularity: (&r.regularity).into(),
            certificate: CertificateJson::new(
                &r.certificate,
                "challengers c = j/10 for j = 0..10; probe balls centred at 0 and e1 with radii 1/2, 1, 2".to_owned(),
            ),
            notes,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NonBayesJson {
    pub states: Vec<String>,
    pub prior_step: String,
    pub priors_checked: usize,
    pub all_components_positive: bool,
    pub min_excess: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridDominatorJson {
    pub a: String,
    pub b: String,
    pub refuting_state: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoDominationJson {
    pub challengers: usize,
    pub states: usize,
    pub grid_dominators: Vec<GridDominatorJson>,
    /// Every grid dominator is strictly worse than `(0,0)` somewhere in
    /// `[0, 1]`.
    pub all_refuted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BernoulliJson {
    pub example: &'static str,
    pub lc_bayes_risk: String,
    pub lc_bayes_risk_st: String,
    pub risk_at_half: String,
    pub risk_at_zero: String,
    pub non_bayes: NonBayesJson,
    pub no_domination: NoDominationJson,
    pub certificate: CertificateJson,
}

impl From<&BernoulliBoundaryReport> for BernoulliJson {
    fn from(r: &BernoulliBoundaryReport) -> Self {
        let nd = &r.no_domination;
        let grid_dominators: Vec<GridDominatorJson> = nd
            .grid_dominators
            .iter()
            .zip(&nd.refuting_states)
            .map(|((a, b), t)| GridDominatorJson {
                a: rational_string(a),
                b: rational_string(b),
                refuting_state: rational_string(t),
            })
            .collect();
        BernoulliJson {
            example: "bernoulli-boundary",
            lc_bayes_risk: r.lc_bayes_risk.to_string(),
            lc_bayes_risk_st: rational_string(&r.lc_bayes_risk_st),
            risk_at_half: rational_string(&r.risk_at_half),
            risk_at_zero: rational_string(&r.risk_at_zero),
            non_bayes: NonBayesJson {
                states: rational_strings(&r.non_bayes.states),
                prior_step: format!("1/{}", lcbayes_core::parametric::NON_BAYES_PRIOR_STEPS),
                priors_checked: r.non_bayes.priors_checked,
                all_components_positive: r.non_bayes.all_components_positive,
                min_excess: rational_string(&r.non_bayes.min_excess),
            },
            no_domination: NoDominationJson {
                challengers: nd.challengers,
                states: nd.states,
                all_refuted: nd.refuting_states.len() == nd.grid_dominators.len(),
                grid_dominators,
            },
            certificate: CertificateJson::new(
                &r.certificate,
                "challengers (a, b) with a, b in {0, 1/4, 1/2, 3/4, 1}; probe balls centred at 0 and 1 with radii 1/2, 1, 2"
                    .to_owned(),
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LcEvalJson {
    pub expr: String,
    pub order: u32,
    pub value: String,
    pub exact_through: Option<String>,
    pub valuation: String,
    pub st: String,
}

impl LcEvalJson {
    pub fn new(expr: &str, order: u32, x: &LcNumber) -> Self {
        let j = LcJson::from(x);
        LcEvalJson {
            expr: expr.to_owned(),
            order,
            value: j.value,
            exact_through: j.exact_through,
            valuation: j.valuation,
            st: j.st,
        }
    }
}

/// Renders a JSON value as `path  value` lines with aligned columns.
/// Standard parts gain a decimal approximation.
pub fn to_text(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in rows {
        if k.is_empty() {
            out.push_str(&val);
        } else {
            out.push_str(&format!("{k:<width$}  {val}"));
        }
        out.push('\n');
    }
    out
}

fn is_standard_part_key(key: &str) -> bool {
    key == "st" || key.ends_with(".st") || key.ends_with("_st")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            out.push((prefix.to_owned(), format!("[{}]", items.join(", "))));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        _ => {
            let mut s = scalar_text(v);
            if is_standard_part_key(prefix) {
                if let Ok(q) = crate::format::parse_rational(&s) {
                    s = format!("{s}  (~ {})", decimal(&q, TEXT_DIGITS));
                }
            }
            out.push((prefix.to_owned(), s));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_owned(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_aligns_and_approximates() {
        let v = serde_json::json!({"value": "1 - eps^2", "st": "1/3", "list": ["1", "2"]});
        let t = to_text(&v);
        assert!(t.contains("st     1/3  (~ 0.333333)"), "{t}");
        assert!(t.contains("list   [1, 2]"), "{t}");
    }

    #[test]
    fn lc_json_for_infinite_values() {
        let j = LcJson::from(&LcNumber::infinite_unit());
        assert_eq!(j.st, "undefined");
        assert_eq!(j.valuation, "-1");
        assert_eq!(j.exact_through, None);
    }
}

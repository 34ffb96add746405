//! Finite decision problems, procedures, priors and their risks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;


use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub label: String,
    pub coords: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub label: String,
    /// Numeric embedding used by [`derandomize`].
    pub value: Option<Rational>,
}

impl State {
    pub fn new(label: impl Into<String>) -> Self {
        State { label: label.into(), coords: None }
    }
}

impl Action {
    pub fn new(label: impl Into<String>) -> Self {
        Action { label: label.into(), value: None }
    }

    pub fn valued(label: impl Into<String>, value: Rational) -> Self {
        Action { label: label.into(), value: Some(value) }
    }
}

/// States Θ, observations X, actions A, a model `P[θ][x]` and a loss
/// `ℓ[θ][a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteProblem<S = Rational> {
    states: Vec<State>,
    observations: Vec<String>,
    actions: Vec<Action>,
    model: Vec<Vec<S>>,
    loss: Vec<Vec<S>>,
}

impl<S: Scalar> FiniteProblem<S> {
    /// Validates that every model row is a probability vector and every loss
    /// entry is nonnegative.
    pub fn new(
        states: Vec<State>,
        observations: Vec<String>,
        actions: Vec<Action>,
        model: Vec<Vec<S>>,
        loss: Vec<Vec<S>>,
    ) -> Result<Self> {
        if states.is_empty() || observations.is_empty() || actions.is_empty() {
            return Err(Error::InvalidProblem("states, observations and actions must be nonempty".into()));
        }
        if model.len() != states.len() || loss.len() != states.len() {
            return Err(Error::InvalidProblem("model and loss need one row per state".into()));
        }
        for (t, row) in model.iter().enumerate() {
            if row.len() != observations.len() {
                return Err(Error::InvalidProblem(format!("model row {t} has the wrong length")));
            }
            if row.iter().any(|p| p.lt_zero() || *p > S::one()) {
                return Err(Error::InvalidProblem(format!("model row {t} has an entry outside [0,1]")));
            }
            if sum(row) != S::one() {
                return Err(Error::InvalidProblem(format!("model row {t} does not sum to 1")));
            }
        }
        for (t, row) in loss.iter().enumerate() {
            if row.len() != actions.len() {
                return Err(Error::InvalidProblem(format!("loss row {t} has the wrong length")));
            }
            if row.iter().any(S::lt_zero) {
                return Err(Error::InvalidProblem(format!("loss row {t} has a negative entry")));
            }
        }
        Ok(FiniteProblem { states, observations, actions, model, loss })
    }

    /// Labels `s1..`, `x1..`, `a1..`.
    pub fn unlabeled(model: Vec<Vec<S>>, loss: Vec<Vec<S>>) -> Result<Self> {
        let states = (1..=model.len()).map(|i| State::new(format!("s{i}"))).collect();
        let nx = model.first().map_or(0, Vec::len);
        let na = loss.first().map_or(0, Vec::len);
        let observations = (1..=nx).map(|i| format!("x{i}")).collect();
        let actions = (1..=na).map(|i| Action::new(format!("a{i}"))).collect();
        Self::new(states, observations, actions, model, loss)
    }

    pub fn with_action_values(mut self, values: Vec<Rational>) -> Result<Self> {
        if values.len() != self.actions.len() {
            return Err(Error::ShapeMismatch("one value per action required".into()));
        }
        for (a, v) in self.actions.iter_mut().zip(values) {
            a.value = Some(v);
        }
        Ok(self)
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn model(&self) -> &[Vec<S>] {
        &self.model
    }

    pub fn loss(&self) -> &[Vec<S>] {
        &self.loss
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_observations(&self) -> usize {
        self.observations.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// `P_θ(x) ℓ(θ, a)`: the risk contribution of playing `a` on `x`.
    pub fn weighted_loss(&self, state: usize, obs: usize, action: usize) -> S {
        self.model[state][obs].clone() * self.loss[state][action].clone()
    }

    pub fn max_loss(&self) -> S {
        self.loss.iter().flatten().cloned().max().unwrap_or_else(S::zero)
    }
}

impl FiniteProblem<Rational> {
    /// The same problem over a larger scalar field.
    pub fn lift<T: Scalar>(&self) -> FiniteProblem<T> {
        let up = |m: &Vec<Vec<Rational>>| -> Vec<Vec<T>> {
            m.iter().map(|r| r.iter().cloned().map(T::from_rational).collect()).collect()
        };
        FiniteProblem {
            states: self.states.clone(),
            observations: self.observations.clone(),
            actions: self.actions.clone(),
            model: up(&self.model),
            loss: up(&self.loss),
        }
    }
}

fn sum<S: Scalar>(xs: &[S]) -> S {
    xs.iter().cloned().fold(S::zero(), |a, b| a + b)
}

/// A decision rule: either an action per observation or a row-stochastic
/// `|X|×|A|` matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Procedure<S = Rational> {
    Nonrandomized(Vec<usize>),
    Randomized(Vec<Vec<S>>),
}

impl<S: Scalar> Procedure<S> {
    /// Always play `action`.
    pub fn constant(num_observations: usize, action: usize) -> Self {
        Procedure::Nonrandomized(vec![action; num_observations])
    }

    pub fn validate(&self, p: &FiniteProblem<S>) -> Result<()> {
        match self {
            Procedure::Nonrandomized(map) => {
                if map.len() != p.num_observations() {
                    return Err(Error::ShapeMismatch(format!(
                        "procedure covers {} observations, problem has {}",
                        map.len(),
                        p.num_observations()
                    )));
                }
                if let Some(&a) = map.iter().find(|&&a| a >= p.num_actions()) {
                    return Err(Error::IndexOutOfRange { what: "action", index: a, len: p.num_actions() });
                }
            }
            Procedure::Randomized(m) => {
                if m.len() != p.num_observations() || m.iter().any(|r| r.len() != p.num_actions()) {
                    return Err(Error::ShapeMismatch("randomized procedure must be |X|×|A|".into()));
                }
                for (x, row) in m.iter().enumerate() {
                    if row.iter().any(|v| v.lt_zero() || *v > S::one()) || sum(row) != S::one() {
                        return Err(Error::InvalidProcedure(format!("row {x} is not a probability vector")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `δ(x, a)`.
    pub fn prob(&self, obs: usize, action: usize) -> S {
        match self {
            Procedure::Nonrandomized(map) => {
                if map[obs] == action {
                    S::one()
                } else {
                    S::zero()
                }
            }
            Procedure::Randomized(m) => m[obs][action].clone(),
        }
    }

    pub fn to_matrix(&self, num_actions: usize) -> Vec<Vec<S>> {
        match self {
            Procedure::Randomized(m) => m.clone(),
            Procedure::Nonrandomized(map) => {
                map.iter().map(|&a| (0..num_actions).map(|b| if a == b { S::one() } else { S::zero() }).collect()).collect()
            }
        }
    }

    pub fn is_nonrandomized(&self) -> bool {
        match self {
            Procedure::Nonrandomized(_) => true,
            Procedure::Randomized(m) => m.iter().all(|r| r.iter().all(|v| v.is_zero() || *v == S::one())),
        }
    }
}

/// Probability weights over the states of a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Prior<S = Rational> {
    weights: Vec<S>,
}

impl<S: Scalar> Prior<S> {
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidPrior("no weights".into()));
        }
        if weights.iter().any(S::lt_zero) {
            return Err(Error::InvalidPrior("negative weight".into()));
        }
        if sum(&weights) != S::one() {
            return Err(Error::InvalidPrior("weights do not sum to 1".into()));
        }
        Ok(Prior { weights })
    }

    pub fn point(num_states: usize, state: usize) -> Self {
        let weights = (0..num_states).map(|i| if i == state { S::one() } else { S::zero() }).collect();
        Prior { weights }
    }

    pub fn uniform(num_states: usize) -> Self {
        let w = S::from_int(num_states as i64).try_inv().expect("nonzero state count");
        Prior { weights: vec![w; num_states] }
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    fn check_support(&self, p: &FiniteProblem<S>) -> Result<()> {
        if self.weights.len() != p.num_states() {
            return Err(Error::SupportMismatch { expected: p.num_states(), found: self.weights.len() });
        }
        Ok(())
    }
}

/// `r(θ, δ) = Σ_x P_θ(x) Σ_a δ(x,a) ℓ(θ,a)`.
pub fn risk<S: Scalar>(p: &FiniteProblem<S>, d: &Procedure<S>, state: usize) -> Result<S> {
    if state >= p.num_states() {
        return Err(Error::IndexOutOfRange { what: "state", index: state, len: p.num_states() });
    }
    d.validate(p)?;
    Ok(risk_unchecked(p, d, state))
}

fn risk_unchecked<S: Scalar>(p: &FiniteProblem<S>, d: &Procedure<S>, state: usize) -> S {
    let mut total = S::zero();
    for x in 0..p.num_observations() {
        let px = &p.model[state][x];
        if px.is_zero() {
            continue;
        }
        let inner = match d {
            Procedure::Nonrandomized(map) => p.loss[state][map[x]].clone(),
            Procedure::Randomized(m) => (0..p.num_actions())
                .filter(|&a| !m[x][a].is_zero())
                .fold(S::zero(), |acc, a| acc + m[x][a].clone() * p.loss[state][a].clone()),
        };
        total = total + px.clone() * inner;
    }
    total
}

/// The risk function as a vector over states.
pub fn risk_vector<S: Scalar>(p: &FiniteProblem<S>, d: &Procedure<S>) -> Result<Vec<S>> {
    d.validate(p)?;
    Ok((0..p.num_states()).map(|t| risk_unchecked(p, d, t)).collect())
}

/// `r(π, δ) = Σ_θ π(θ) r(θ, δ)`.
pub fn bayes_risk<S: Scalar>(p: &FiniteProblem<S>, d: &Procedure<S>, prior: &Prior<S>) -> Result<S> {
    prior.check_support(p)?;
    d.validate(p)?;
    Ok(prior
        .weights
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .fold(S::zero(), |acc, (t, w)| acc + w.clone() * risk_unchecked(p, d, t)))
}

/// Smallest Bayes risk over all randomized procedures,
/// `Σ_x min_a Σ_θ π_θ P_θ(x) ℓ(θ,a)`, with a minimizing action per
/// observation (lowest index on ties).
pub fn minimum_bayes_risk<S: Scalar>(p: &FiniteProblem<S>, prior: &Prior<S>) -> Result<(S, Vec<usize>)> {
    prior.check_support(p)?;
    let mut total = S::zero();
    let mut best = Vec::with_capacity(p.num_observations());
    for x in 0..p.num_observations() {
        let mut arg = 0;
        let mut min: Option<S> = None;
        for a in 0..p.num_actions() {
            let v = (0..p.num_states())
                .fold(S::zero(), |acc, t| acc + prior.weights[t].clone() * p.weighted_loss(t, x, a));
            if min.as_ref().map_or(true, |m| v < *m) {
                min = Some(v);
                arg = a;
            }
        }
        total = total + min.expect("at least one action");
        best.push(arg);
    }
    Ok((total, best))
}

/// Row-wise mixture `Σ w_i δ_i`. The action count is taken from the first
/// randomized input, or from the largest action a nonrandomized input uses;
/// see [`convex_combine_in`] to fix it from the problem instead.
pub fn convex_combine<S: Scalar>(ds: &[Procedure<S>], ws: &[S]) -> Result<Procedure<S>> {
    check_mixture_weights(ds, ws)?;
    if ds.len() == 1 {
        return Ok(ds[0].clone());
    }
    let num_actions = ds
        .iter()
        .find_map(|d| match d {
            Procedure::Randomized(m) => m.first().map(Vec::len),
            Procedure::Nonrandomized(_) => None,
        })
        .unwrap_or_else(|| {
            ds.iter()
                .filter_map(|d| match d {
                    Procedure::Nonrandomized(map) => map.iter().max().map(|a| a + 1),
                    Procedure::Randomized(_) => None,
                })
                .max()
                .unwrap_or(0)
        });
    mix(ds, ws, num_actions)
}

/// [`convex_combine`] for procedures of `p`, always producing an
/// `|X|×|A|` matrix.
pub fn convex_combine_in<S: Scalar>(p: &FiniteProblem<S>, ds: &[Procedure<S>], ws: &[S]) -> Result<Procedure<S>> {
    check_mixture_weights(ds, ws)?;
    for d in ds {
        d.validate(p)?;
    }
    mix(ds, ws, p.num_actions())
}

fn check_mixture_weights<S: Scalar>(ds: &[Procedure<S>], ws: &[S]) -> Result<()> {
    if ds.is_empty() || ds.len() != ws.len() {
        return Err(Error::WeightError("need one weight per procedure".into()));
    }
    if ws.iter().any(S::lt_zero) || sum(ws) != S::one() {
        return Err(Error::WeightError("weights must be nonnegative and sum to 1".into()));
    }
    Ok(())
}

fn mix<S: Scalar>(ds: &[Procedure<S>], ws: &[S], num_actions: usize) -> Result<Procedure<S>> {
    let mats: Vec<Vec<Vec<S>>> = ds.iter().map(|d| d.to_matrix(num_actions)).collect();
    let nx = mats[0].len();
    if mats.iter().any(|m| m.len() != nx || m.iter().any(|r| r.len() != num_actions)) {
        return Err(Error::ShapeMismatch("procedures have different shapes".into()));
    }
    let mut out = vec![vec![S::zero(); num_actions]; nx];
    for (m, w) in mats.iter().zip(ws) {
        for (orow, mrow) in out.iter_mut().zip(m) {
            for (o, v) in orow.iter_mut().zip(mrow) {
                *o = o.clone() + w.clone() * v.clone();
            }
        }
    }
    Ok(Procedure::Randomized(out))
}

/// Result of [`derandomize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Derandomized {
    pub procedure: Procedure<Rational>,
    /// Per observation: the mean fell strictly between embedded actions and
    /// had to be snapped.
    pub snapped: Vec<bool>,
}

impl Derandomized {
    /// No observation needed snapping, so the convexity inequality applies.
    pub fn exact(&self) -> bool {
        !self.snapped.iter().any(|&s| s)
    }
}

/// Replaces each randomized row by the action nearest to its mean embedded
/// value (lowest index on ties).
pub fn derandomize(p: &FiniteProblem<Rational>, d: &Procedure<Rational>) -> Result<Derandomized> {
    d.validate(p)?;
    let values: Vec<Rational> = p.actions.iter().map(|a| a.value.clone()).collect::<Option<_>>().ok_or(Error::NoEmbedding)?;
    if let Procedure::Nonrandomized(_) = d {
        return Ok(Derandomized { procedure: d.clone(), snapped: vec![false; p.num_observations()] });
    }
    let mut map = Vec::with_capacity(p.num_observations());
    let mut snapped = Vec::with_capacity(p.num_observations());
    for x in 0..p.num_observations() {
        let mean: Rational = (0..p.num_actions()).map(|a| d.prob(x, a) * &values[a]).sum();
        let mut best = 0;
        let mut best_dist: Option<Rational> = None;
        for (a, v) in values.iter().enumerate() {
            let dist = num_traits::Signed::abs(&(v - &mean));
            if best_dist.as_ref().map_or(true, |b| dist < *b) {
                best = a;
                best_dist = Some(dist);
            }
        }
        snapped.push(values[best] != mean);
        map.push(best);
    }
    Ok(Derandomized { procedure: Procedure::Nonrandomized(map), snapped })
}

/// Whether every loss row is convex along the action embedding (slopes of
/// consecutive embedded actions nondecreasing).
pub fn loss_is_convex(p: &FiniteProblem<Rational>) -> Result<bool> {
    let values: Vec<Rational> = p.actions.iter().map(|a| a.value.clone()).collect::<Option<_>>().ok_or(Error::NoEmbedding)?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    for row in &p.loss {
        let mut prev_slope: Option<Rational> = None;
        for w in order.windows(2) {
            let (a, b) = (w[0], w[1]);
            if values[a] == values[b] {
                if row[a] != row[b] {
                    return Ok(false);
                }
                continue;
            }
            let slope = (&row[b] - &row[a]) / (&values[b] - &values[a]);
            if prev_slope.as_ref().is_some_and(|s| slope < *s) {
                return Ok(false);
            }
            prev_slope = Some(slope);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lc::LcNumber;
    use crate::scalar::ratio;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// Two states, one observation, 0-1 loss.
    pub(crate) fn fp1() -> FiniteProblem {
        FiniteProblem::unlabeled(vec![vec![q(1)], vec![q(1)]], vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap()
    }

    fn mix(p: Rational) -> Procedure {
        Procedure::Randomized(vec![vec![p.clone(), q(1) - p]])
    }

    #[test]
    fn fp1_risk_is_the_segment() {
        let p = fp1();
        for k in 0..=4 {
            let pr = ratio(k, 4);
            let r = risk_vector(&p, &mix(pr.clone())).unwrap();
            assert_eq!(r, vec![q(1) - &pr, pr]);
        }
        assert_eq!(risk_vector(&p, &mix(ratio(1, 2))).unwrap(), vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn zero_loss_gives_zero_risk() {
        let p = FiniteProblem::unlabeled(vec![vec![ratio(1, 3), ratio(2, 3)]], vec![vec![q(0), q(0)]]).unwrap();
        assert_eq!(risk(&p, &Procedure::Nonrandomized(vec![1, 0]), 0).unwrap(), q(0));
    }

    #[test]
    fn nonrandomized_matches_its_matrix() {
        let p = FiniteProblem::unlabeled(
            vec![vec![ratio(1, 4), ratio(3, 4)], vec![ratio(1, 2), ratio(1, 2)]],
            vec![vec![q(3), q(1), q(2)], vec![q(0), q(5), q(1)]],
        )
        .unwrap();
        let d = Procedure::Nonrandomized(vec![2, 1]);
        let m = Procedure::Randomized(d.to_matrix(3));
        assert_eq!(risk_vector(&p, &d).unwrap(), risk_vector(&p, &m).unwrap());
    }

    #[test]
    fn bayes_risks() {
        let p = fp1();
        assert_eq!(bayes_risk(&p, &mix(ratio(1, 2)), &Prior::uniform(2)).unwrap(), ratio(1, 2));
        let d = mix(ratio(1, 3));
        assert_eq!(bayes_risk(&p, &d, &Prior::point(2, 0)).unwrap(), risk(&p, &d, 0).unwrap());
        assert!(matches!(
            bayes_risk(&p, &d, &Prior::uniform(3)),
            Err(Error::SupportMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn lc_prior_on_fp1() {
        let p = fp1().lift::<LcNumber>();
        let eps = LcNumber::eps();
        let prior = Prior::new(vec![LcNumber::one() - eps.clone(), eps.clone()]).unwrap();
        let d: Procedure<LcNumber> = Procedure::Nonrandomized(vec![0]);
        let br = bayes_risk(&p, &d, &prior).unwrap();
        assert_eq!(br, eps);
        assert_eq!(br.st().unwrap(), q(0));
    }

    #[test]
    fn combining() {
        let a1 = Procedure::constant(1, 0);
        let a2 = Procedure::constant(1, 1);
        let c = convex_combine(&[a1.clone(), a2], &[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(c, Procedure::Randomized(vec![vec![ratio(1, 2), ratio(1, 2)]]));
        assert_eq!(convex_combine(core::slice::from_ref(&a1), &[q(1)]).unwrap(), a1);
        assert!(matches!(convex_combine(core::slice::from_ref(&a1), &[ratio(1, 2)]), Err(Error::WeightError(_))));
        assert!(matches!(
            convex_combine(&[a1.clone(), a1], &[q(2), q(-1)]),
            Err(Error::WeightError(_))
        ));
    }

    #[test]
    fn derandomize_tie_goes_to_lower_index() {
        let p = fp1().with_action_values(vec![q(0), q(1)]).unwrap();
        let out = derandomize(&p, &mix(ratio(1, 2))).unwrap();
        assert_eq!(out.procedure, Procedure::Nonrandomized(vec![0]));
        assert!(!out.exact());
    }

    #[test]
    fn derandomize_convex_loss() {
        // ℓ(θ,a) = (g(θ) - a)^2 with g = (0, 1/4, 1)
        let acts = [q(0), ratio(1, 2), q(1)];
        let g = [q(0), ratio(1, 4), q(1)];
        let loss = g.iter().map(|gt| acts.iter().map(|a| (gt - a) * (gt - a)).collect()).collect();
        let p = FiniteProblem::unlabeled(vec![vec![q(1)]; 3], loss).unwrap().with_action_values(acts.to_vec()).unwrap();
        assert!(loss_is_convex(&p).unwrap());
        let d = Procedure::Randomized(vec![vec![ratio(1, 2), q(0), ratio(1, 2)]]);
        let out = derandomize(&p, &d).unwrap();
        assert_eq!(out.procedure, Procedure::Nonrandomized(vec![1]));
        assert!(out.exact());
        let before = risk_vector(&p, &d).unwrap();
        let after = risk_vector(&p, &out.procedure).unwrap();
        assert_eq!(before, vec![ratio(1, 2), ratio(5, 16), ratio(1, 2)]);
        assert_eq!(after, vec![ratio(1, 4), ratio(1, 16), ratio(1, 4)]);
    }

    #[test]
    fn derandomize_fixed_point_and_errors() {
        let p = fp1().with_action_values(vec![q(0), q(1)]).unwrap();
        let d = Procedure::Nonrandomized(vec![1]);
        assert_eq!(derandomize(&p, &d).unwrap().procedure, d);
        assert_eq!(derandomize(&fp1(), &d), Err(Error::NoEmbedding));
    }

    #[test]
    fn invalid_problems() {
        assert!(FiniteProblem::unlabeled(vec![vec![ratio(1, 2)]], vec![vec![q(0)]]).is_err());
        assert!(FiniteProblem::unlabeled(vec![vec![q(1)]], vec![vec![q(-1)]]).is_err());
        assert!(FiniteProblem::unlabeled(vec![vec![q(2), q(-1)]], vec![vec![q(0)]]).is_err());
    }

    #[test]
    fn index_errors() {
        let p = fp1();
        assert!(matches!(risk(&p, &mix(q(1)), 5), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(risk(&p, &Procedure::Nonrandomized(vec![7]), 0), Err(Error::IndexOutOfRange { .. })));
    }
}

//! Witness priors from zero-sum game duality, ε-Bayes checks, and
//! pushdowns of priors with infinitesimal support.
//!
//! For a finite problem and a candidate `d`, the game
//! `max_π min_δ' [r(π,δ') - r(π,d)]` has value `v*`, and its LP is the dual
//! of the uniform-improvement LP in [`crate::admissibility`], so
//! `v* = -ε*` exactly. An optimal `π*` is the normal of a hyperplane
//! separating the risk set from the orthant below `d`'s risk point.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::admissibility::{check_admissible, AdmissibilityVerdict};
use crate::decision::{bayes_risk, minimum_bayes_risk, risk_vector, FiniteProblem, Prior, Procedure};
use crate::lc::LcNumber;
use crate::lp::{self, LpProblem, LpSolution, Relation};
use crate::parametric::ParametricFamily;
use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GameAnalysis {
    /// `v* = max_π [min_δ' r(π,δ') - r(π,d)]`; never positive.
    pub value: Rational,
    pub witness_prior: Prior,
    /// Bayes action per observation under the witness prior.
    pub inner_best_responses: Vec<usize>,
    /// `max(0, -v*)`: the ε for which `d` is ε-Bayes under the witness prior.
    pub slack: Rational,
    /// Set when `v* < 0`; any prior is then optimal up to the LP's choice
    /// and the reported one is just the solver's basic optimum.
    pub prior_may_be_nonunique: bool,
}

/// Builds the game LP over variables `(π_1..π_|Θ|, m_1..m_|X|)`.
pub fn game_lp(p: &FiniteProblem, d: &Procedure) -> Result<LpProblem> {
    let base = risk_vector(p, d)?;
    let nt = p.num_states();
    let nx = p.num_observations();
    let n = nt + nx;
    let mut objective = vec![Rational::zero(); n];
    for (t, r) in base.iter().enumerate() {
        objective[t] = -r.clone();
    }
    for o in objective.iter_mut().skip(nt) {
        *o = Rational::one();
    }
    let mut lp = LpProblem::maximize(objective);
    for x in 0..nx {
        lp = lp.free(nt + x);
    }
    let mut simplex = vec![Rational::zero(); n];
    for s in simplex.iter_mut().take(nt) {
        *s = Rational::one();
    }
    lp.add_constraint(simplex, Relation::Eq, Rational::one());
    for x in 0..nx {
        for a in 0..p.num_actions() {
            let mut row = vec![Rational::zero(); n];
            for (t, cell) in row.iter_mut().enumerate().take(nt) {
                *cell = -p.weighted_loss(t, x, a);
            }
            row[nt + x] = Rational::one();
            lp.add_constraint(row, Relation::Le, Rational::zero());
        }
    }
    Ok(lp)
}

/// Solves the game for `d` and returns its value and an optimal prior.
pub fn synthesize_prior(p: &FiniteProblem, d: &Procedure) -> Result<GameAnalysis> {
    let lp = game_lp(p, d)?;
    let (primal, value) = match lp::solve(&lp)? {
        LpSolution::Optimal { primal, objective, .. } => (primal, objective),
        other => {
            return Err(Error::CertificateFailure(format!("game LP reported {:?}", other.status())));
        }
    };
    let weights = primal[..p.num_states()].to_vec();
    let witness_prior = Prior::new(weights)?;
    let (_, inner_best_responses) = minimum_bayes_risk(p, &witness_prior)?;
    let slack = if value.is_negative() { -value.clone() } else { Rational::zero() };
    Ok(GameAnalysis {
        prior_may_be_nonunique: value.is_negative(),
        value,
        witness_prior,
        inner_best_responses,
        slack,
    })
}

/// `r(π,d) <= min_δ' r(π,δ') + ε`, with the minimum taken over all
/// randomized procedures observation by observation.
pub fn verify_epsilon_bayes<S: Scalar>(p: &FiniteProblem<S>, d: &Procedure<S>, prior: &Prior<S>, epsilon: &S) -> Result<bool> {
    let own = bayes_risk(p, d, prior)?;
    let (best, _) = minimum_bayes_risk(p, prior)?;
    Ok(own <= best + epsilon.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub admissible: bool,
    pub extended_admissible: bool,
    pub witness: Option<Procedure>,
    pub epsilon_star: Rational,
    pub game_value: Rational,
    pub prior: Prior,
    pub bayes_slack: Rational,
    pub inner_best_responses: Vec<usize>,
    pub prior_may_be_nonunique: bool,
}

impl ClassificationReport {
    /// Exactly Bayes with respect to the reported prior.
    pub fn is_bayes(&self) -> bool {
        self.bayes_slack.is_zero()
    }
}

/// Runs both LP routes and cross-checks them: `v* = -ε*`, the witness prior
/// certifies ε-Bayes at the reported slack, and Bayes implies extended
/// admissible. Any disagreement is a [`Error::CertificateFailure`].
pub fn classify(p: &FiniteProblem, d: &Procedure) -> Result<ClassificationReport> {
    let AdmissibilityVerdict { admissible, extended_admissible, epsilon_star, witness, .. } = check_admissible(p, d)?;
    let game = synthesize_prior(p, d)?;
    if game.value != -epsilon_star.clone() {
        return Err(Error::CertificateFailure(format!(
            "duality broken: game value {} but uniform improvement {}",
            game.value, epsilon_star
        )));
    }
    if !verify_epsilon_bayes(p, d, &game.witness_prior, &game.slack)? {
        return Err(Error::CertificateFailure("witness prior does not certify the slack".into()));
    }
    if game.slack.is_zero() && !extended_admissible {
        return Err(Error::CertificateFailure("Bayes procedure reported as not extended admissible".into()));
    }
    Ok(ClassificationReport {
        admissible,
        extended_admissible,
        witness,
        epsilon_star,
        game_value: game.value,
        prior: game.witness_prior,
        bayes_slack: game.slack,
        inner_best_responses: game.inner_best_responses,
        prior_may_be_nonunique: game.prior_may_be_nonunique,
    })
}

/// A prior with finite support on parameter points in `S^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPrior<S = Rational> {
    points: Vec<Vec<S>>,
    weights: Vec<S>,
}

pub type LcPrior = PointPrior<LcNumber>;

impl<S: Scalar> PointPrior<S> {
    pub fn new(points: Vec<Vec<S>>, weights: Vec<S>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidPrior("need one weight per support point".into()));
        }
        let dim = points[0].len();
        if points.iter().any(|pt| pt.len() != dim) {
            return Err(Error::InvalidPrior("support points differ in dimension".into()));
        }
        if weights.iter().any(S::lt_zero) {
            return Err(Error::InvalidPrior("negative weight".into()));
        }
        let total = weights.iter().cloned().fold(S::zero(), |a, b| a + b);
        if total != S::one() {
            return Err(Error::InvalidPrior("weights do not sum to 1".into()));
        }
        Ok(PointPrior { points, weights })
    }

    pub fn point_mass(point: Vec<S>) -> Self {
        PointPrior { points: vec![point], weights: vec![S::one()] }
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// `Σ_i w_i f(t_i)`.
    pub fn expect<F>(&self, mut f: F) -> Result<S>
    where
        F: FnMut(&[S]) -> Result<S>,
    {
        let mut acc = S::zero();
        for (pt, w) in self.points.iter().zip(&self.weights) {
            if w.is_zero() {
                continue;
            }
            acc = acc + w.clone() * f(pt)?;
        }
        Ok(acc)
    }
}

/// Maps every support point to its standard part, merging points with equal
/// shadows; each merged weight is the standard part of the summed weights.
pub fn pushdown(prior: &LcPrior) -> Result<PointPrior<Rational>> {
    let mut points: Vec<Vec<Rational>> = Vec::new();
    let mut sums: Vec<LcNumber> = Vec::new();
    for (pt, w) in prior.points.iter().zip(&prior.weights) {
        let shadow = pt.iter().map(LcNumber::st).collect::<Result<Vec<_>>>()?;
        match points.iter().position(|p| *p == shadow) {
            Some(i) => sums[i] = &sums[i] + w,
            None => {
                points.push(shadow);
                sums.push(w.clone());
            }
        }
    }
    let weights = sums.iter().map(LcNumber::st).collect::<Result<Vec<_>>>()?;
    let keep: Vec<usize> = (0..points.len()).filter(|&i| !weights[i].is_zero()).collect();
    let points = keep.iter().map(|&i| points[i].clone()).collect();
    let weights = keep.iter().map(|&i| weights[i].clone()).collect();
    PointPrior::new(points, weights)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PushdownConsistency {
    /// Bayes risk under the infinitesimally supported prior.
    pub lc_bayes_risk: LcNumber,
    /// Bayes risk under its pushdown.
    pub pushdown_bayes_risk: Rational,
    /// The standard part of the first equals the second.
    pub consistent: bool,
}

/// Compares the Bayes risk under an LC prior with the Bayes risk under its
/// pushdown. The two agree up to an infinitesimal whenever the risk
/// function is continuous; a mismatch exposes a discontinuity.
pub fn pushdown_risk_consistency(family: &ParametricFamily, params: &[Rational], prior: &LcPrior) -> Result<PushdownConsistency> {
    let lc_params: Vec<LcNumber> = params.iter().cloned().map(LcNumber::from_rational).collect();
    let lc_bayes_risk = prior.expect(|t| family.risk(&lc_params, t))?;
    let standard = pushdown(prior)?;
    let pushdown_bayes_risk = standard.expect(|t| family.risk(params, t))?;
    let consistent = lc_bayes_risk.st()? == pushdown_bayes_risk;
    Ok(PushdownConsistency { lc_bayes_risk, pushdown_bayes_risk, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn fp1() -> FiniteProblem {
        FiniteProblem::unlabeled(vec![vec![q(1)], vec![q(1)]], vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap()
    }

    fn fp2() -> FiniteProblem {
        FiniteProblem::unlabeled(vec![vec![q(1)], vec![q(1)]], vec![vec![q(0), q(1)], vec![q(1), q(2)]]).unwrap()
    }

    fn mix(p: Rational) -> Procedure {
        Procedure::Randomized(vec![vec![p.clone(), q(1) - p]])
    }

    /// Max over the 101-point prior grid of `min_δ' r(π,δ') - r(π,d)`,
    /// reported with the maximizing grid priors.
    fn grid_game_value(p: &FiniteProblem, d: &Procedure) -> (Rational, Vec<Rational>) {
        let mut best: Option<Rational> = None;
        let mut argmax = Vec::new();
        for k in 0..=100 {
            let pi = ratio(k, 100);
            let prior = Prior::new(vec![pi.clone(), q(1) - &pi]).unwrap();
            let (m, _) = minimum_bayes_risk(p, &prior).unwrap();
            let v = m - bayes_risk(p, d, &prior).unwrap();
            match &best {
                Some(b) if v < *b => {}
                Some(b) if v == *b => argmax.push(pi),
                _ => {
                    best = Some(v);
                    argmax = vec![pi];
                }
            }
        }
        (best.unwrap(), argmax)
    }

    #[test]
    fn fp1_half_is_exact_bayes_under_uniform() {
        let (oracle, argmax) = grid_game_value(&fp1(), &mix(ratio(1, 2)));
        assert_eq!(oracle, q(0));
        assert_eq!(argmax, vec![ratio(1, 2)]);
        let g = synthesize_prior(&fp1(), &mix(ratio(1, 2))).unwrap();
        assert_eq!(g.value, q(0));
        assert_eq!(g.witness_prior.weights(), &[ratio(1, 2), ratio(1, 2)]);
        assert_eq!(g.slack, q(0));
    }

    #[test]
    fn fp2_gap_is_one() {
        let d = Procedure::constant(1, 1);
        let (oracle, _) = grid_game_value(&fp2(), &d);
        assert_eq!(oracle, q(-1));
        let g = synthesize_prior(&fp2(), &d).unwrap();
        assert_eq!(g.value, q(-1));
        assert_eq!(g.slack, q(1));
        assert!(g.prior_may_be_nonunique);
    }

    #[test]
    fn fp1_boundary_rule_supported_by_axis_prior() {
        let d = mix(q(0));
        let (oracle, argmax) = grid_game_value(&fp1(), &d);
        assert_eq!(oracle, q(0));
        // every prior with π(θ1) <= 1/2 supports the risk point (1, 0)
        assert_eq!(argmax.len(), 51);
        assert_eq!(argmax[0], q(0));
        let g = synthesize_prior(&fp1(), &d).unwrap();
        assert_eq!(g.value, q(0));
        assert!(g.witness_prior.weights()[0] <= ratio(1, 2));
        assert!(verify_epsilon_bayes(&fp1(), &d, &g.witness_prior, &q(0)).unwrap());
    }

    fn brute_min_bayes(p: &FiniteProblem, prior: &Prior) -> Rational {
        (0..=100).map(|k| bayes_risk(p, &mix(ratio(k, 100)), prior).unwrap()).min().unwrap()
    }

    #[test]
    fn epsilon_bayes_sub_cases() {
        let p = fp1();
        let uniform = Prior::uniform(2);
        assert_eq!(brute_min_bayes(&p, &uniform), ratio(1, 2));
        assert!(verify_epsilon_bayes(&p, &mix(ratio(1, 2)), &uniform, &q(0)).unwrap());
        // always-a2 has Bayes risk 1/2 under the uniform prior, which is the minimum
        assert!(verify_epsilon_bayes(&p, &mix(q(0)), &uniform, &q(0)).unwrap());
        // under the point prior at θ1 it has Bayes risk 1 against a minimum of 0
        let at_one = Prior::point(2, 0);
        assert_eq!(brute_min_bayes(&p, &at_one), q(0));
        assert!(!verify_epsilon_bayes(&p, &mix(q(0)), &at_one, &ratio(1, 2)).unwrap());
        assert!(verify_epsilon_bayes(&p, &mix(q(0)), &at_one, &q(1)).unwrap());
    }

    #[test]
    fn classification_reports() {
        let r = classify(&fp1(), &mix(ratio(1, 2))).unwrap();
        assert!(r.admissible && r.extended_admissible && r.is_bayes());
        assert_eq!((r.epsilon_star.clone(), r.game_value.clone()), (q(0), q(0)));

        let r = classify(&fp2(), &Procedure::constant(1, 1)).unwrap();
        assert!(!r.admissible && !r.extended_admissible);
        assert_eq!(r.epsilon_star, q(1));
        assert_eq!(r.game_value, q(-1));
        assert_eq!(r.bayes_slack, q(1));

        let single = FiniteProblem::unlabeled(vec![vec![q(1)], vec![q(1)]], vec![vec![q(2)], vec![q(5)]]).unwrap();
        let r = classify(&single, &Procedure::constant(1, 0)).unwrap();
        assert!(r.admissible && r.extended_admissible);
        assert_eq!(r.epsilon_star, q(0));
    }

    #[test]
    fn dominator_of_a_bayes_rule_is_bayes() {
        // a2 is Bayes under the point prior at θ1 but dominated by a1
        let p = FiniteProblem::unlabeled(vec![vec![q(1)], vec![q(1)]], vec![vec![q(0), q(0)], vec![q(0), q(1)]]).unwrap();
        let d = Procedure::constant(1, 1);
        let pi = Prior::point(2, 0);
        assert!(verify_epsilon_bayes(&p, &d, &pi, &q(0)).unwrap());
        let r = classify(&p, &d).unwrap();
        assert!(!r.admissible);
        let dominator = r.witness.unwrap();
        assert!(verify_epsilon_bayes(&p, &dominator, &pi, &q(0)).unwrap());
    }

    fn lc_point(x: LcNumber) -> Vec<LcNumber> {
        vec![x]
    }

    #[test]
    fn pushdown_examples() {
        let eps = LcNumber::eps();
        let half = LcNumber::from_rational(ratio(1, 2));
        let pr = PointPrior::new(
            vec![lc_point(eps.clone()), lc_point(LcNumber::one() + &eps * &eps)],
            vec![half.clone(), half],
        )
        .unwrap();
        let pd = pushdown(&pr).unwrap();
        assert_eq!(pd.points(), &[vec![q(0)], vec![q(1)]]);
        assert_eq!(pd.weights(), &[ratio(1, 2), ratio(1, 2)]);

        let pr = PointPrior::new(
            vec![lc_point(eps.clone()), lc_point(LcNumber::from_int(2) * eps.clone())],
            vec![LcNumber::from_rational(ratio(1, 3)), LcNumber::from_rational(ratio(2, 3))],
        )
        .unwrap();
        let pd = pushdown(&pr).unwrap();
        assert_eq!(pd.points(), &[vec![q(0)]]);
        assert_eq!(pd.weights(), &[q(1)]);

        let pr = PointPrior::point_mass(lc_point(LcNumber::infinite_unit()));
        assert_eq!(pushdown(&pr), Err(Error::NotNearStandard));
    }

    #[test]
    fn pushdown_with_infinitesimal_weights() {
        let eps = LcNumber::eps();
        let pr = PointPrior::new(
            vec![lc_point(LcNumber::from_rational(ratio(1, 4))), lc_point(LcNumber::one() - eps.clone())],
            vec![LcNumber::one() - eps.clone(), eps],
        )
        .unwrap();
        let pd = pushdown(&pr).unwrap();
        assert_eq!(pd.points(), &[vec![ratio(1, 4)]]);
        assert_eq!(pd.weights(), &[q(1)]);
    }

    #[test]
    fn pushdown_of_standard_prior_is_identity() {
        let pts = vec![vec![ratio(1, 3), q(2)], vec![q(0), q(-1)]];
        let ws = vec![ratio(1, 5), ratio(4, 5)];
        let lc = PointPrior::new(
            pts.iter().map(|p| p.iter().cloned().map(LcNumber::from_rational).collect()).collect(),
            ws.iter().cloned().map(LcNumber::from_rational).collect(),
        )
        .unwrap();
        let pd = pushdown(&lc).unwrap();
        assert_eq!(pd, PointPrior::new(pts, ws).unwrap());
    }

    #[test]
    fn prior_validation() {
        assert!(PointPrior::<Rational>::new(vec![vec![q(0)]], vec![ratio(1, 2)]).is_err());
        assert!(PointPrior::<Rational>::new(vec![vec![q(0)], vec![q(1), q(2)]], vec![ratio(1, 2), ratio(1, 2)]).is_err());
    }
}

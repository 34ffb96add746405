//! Domination, admissibility and extended admissibility verdicts.
//!
//! Both LP queries range over the full randomized class: the variables are
//! the entries of an `|X|×|A|` row-stochastic matrix, whose extreme points
//! are exactly the nonrandomized rules.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::decision::{risk_vector, FiniteProblem, Procedure};
use crate::lc::LcNumber;
use crate::lp::{self, LpProblem, LpSolution, Relation};
use crate::scalar::Rational;
use crate::{Error, Result};

/// The class a challenger is drawn from.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcedureClass {
    AllRandomized,
    ExplicitList(Vec<Procedure>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationQuery {
    pub problem: FiniteProblem,
    pub candidate: Procedure,
    pub epsilon: Rational,
    pub class: ProcedureClass,
}

impl DominationQuery {
    pub fn new(problem: FiniteProblem, candidate: Procedure, epsilon: Rational, class: ProcedureClass) -> Result<Self> {
        if epsilon.is_negative() {
            return Err(Error::InvalidProblem("epsilon must be nonnegative".into()));
        }
        candidate.validate(&problem)?;
        Ok(DominationQuery { problem, candidate, epsilon, class })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub extended_admissible: bool,
    /// Largest uniform improvement available; never negative because the
    /// candidate can always improve on itself by zero.
    pub epsilon_star: Rational,
    /// A dominating procedure when `admissible` is false.
    pub witness: Option<Procedure>,
    /// A procedure improving by `epsilon_star` everywhere, when positive.
    pub uniform_improver: Option<Procedure>,
}

/// Risk-domination of raw risk vectors: `challenger <= candidate - eps`
/// everywhere, plus strict improvement somewhere when `eps == 0`.
pub fn dominates_risks(candidate: &[Rational], challenger: &[Rational], epsilon: &Rational) -> Result<bool> {
    if candidate.len() != challenger.len() {
        return Err(Error::ShapeMismatch("risk vectors differ in length".into()));
    }
    let uniform = candidate.iter().zip(challenger).all(|(r, c)| *c <= r - epsilon);
    if !uniform {
        return Ok(false);
    }
    if epsilon.is_positive() {
        return Ok(true);
    }
    Ok(candidate.iter().zip(challenger).any(|(r, c)| c != r))
}

/// Whether `challenger` ε-dominates the query's candidate.
pub fn check_domination(q: &DominationQuery, challenger: &Procedure) -> Result<bool> {
    challenger.validate(&q.problem)?;
    let base = risk_vector(&q.problem, &q.candidate)?;
    let other = risk_vector(&q.problem, challenger)?;
    dominates_risks(&base, &other, &q.epsilon)
}

/// Searches the query's class for an ε-dominator.
pub fn find_dominator(q: &DominationQuery) -> Result<Option<Procedure>> {
    match &q.class {
        ProcedureClass::ExplicitList(list) => {
            for c in list {
                if check_domination(q, c)? {
                    return Ok(Some(c.clone()));
                }
            }
            Ok(None)
        }
        ProcedureClass::AllRandomized => {
            if q.epsilon.is_zero() {
                let v = check_admissible(&q.problem, &q.candidate)?;
                return Ok(v.witness);
            }
            let (eps_star, witness) = max_uniform_improvement(&q.problem, &q.candidate)?;
            Ok((q.epsilon <= eps_star).then_some(witness))
        }
    }
}

/// Index of the variable `δ(x, a)` in the LPs below.
fn var(p: &FiniteProblem, x: usize, a: usize) -> usize {
    x * p.num_actions() + a
}

/// Adds `Σ_a δ(x,a) = 1` for every observation.
fn add_stochastic_rows(lp: &mut LpProblem, p: &FiniteProblem) {
    let n = lp.num_vars();
    for x in 0..p.num_observations() {
        let mut row = vec![Rational::zero(); n];
        for a in 0..p.num_actions() {
            row[var(p, x, a)] = Rational::one();
        }
        lp.add_constraint(row, Relation::Eq, Rational::one());
    }
}

/// Coefficients of `r(θ, D)` in the δ variables, padded to `n`.
fn risk_row(p: &FiniteProblem, state: usize, n: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); n];
    for x in 0..p.num_observations() {
        for a in 0..p.num_actions() {
            row[var(p, x, a)] = p.weighted_loss(state, x, a);
        }
    }
    row
}

fn extract_procedure(p: &FiniteProblem, primal: &[Rational]) -> Procedure {
    let m = (0..p.num_observations())
        .map(|x| (0..p.num_actions()).map(|a| primal[var(p, x, a)].clone()).collect())
        .collect();
    let d = Procedure::Randomized(m);
    if d.is_nonrandomized() {
        Procedure::Nonrandomized(
            (0..p.num_observations())
                .map(|x| (0..p.num_actions()).find(|&a| primal[var(p, x, a)].is_one()).unwrap_or(0))
                .collect(),
        )
    } else {
        d
    }
}

fn expect_optimal(sol: LpSolution) -> Result<(Vec<Rational>, Rational, Vec<Rational>)> {
    match sol {
        LpSolution::Optimal { primal, objective, duals, .. } => Ok((primal, objective, duals)),
        other => Err(Error::CertificateFailure(alloc::format!(
            "feasible bounded LP reported {:?}",
            other.status()
        ))),
    }
}

/// The LP `max ε` over randomized `D` with `r(θ,D) + ε <= r(θ,d)` for all θ.
pub fn uniform_improvement_lp(p: &FiniteProblem, d: &Procedure) -> Result<LpProblem> {
    let base = risk_vector(p, d)?;
    let nd = p.num_observations() * p.num_actions();
    let n = nd + 1;
    let mut objective = vec![Rational::zero(); n];
    objective[nd] = Rational::one();
    let mut lp = LpProblem::maximize(objective).free(nd);
    add_stochastic_rows(&mut lp, p);
    for (t, r) in base.iter().enumerate() {
        let mut row = risk_row(p, t, n);
        row[nd] = Rational::one();
        lp.add_constraint(row, Relation::Le, r.clone());
    }
    Ok(lp)
}

/// `ε*`: the largest `ε` such that some randomized procedure has risk at
/// most `r(θ,d) - ε` at every state, with an optimizing procedure.
pub fn max_uniform_improvement(p: &FiniteProblem, d: &Procedure) -> Result<(Rational, Procedure)> {
    let lp = uniform_improvement_lp(p, d)?;
    let (primal, objective, _) = expect_optimal(lp::solve(&lp)?)?;
    Ok((objective, extract_procedure(p, &primal)))
}

/// Decides admissibility with `max Σ s_θ` s.t. `r(θ,D) + s_θ = r(θ,d)`,
/// `s >= 0`, and extended admissibility through [`max_uniform_improvement`].
pub fn check_admissible(p: &FiniteProblem, d: &Procedure) -> Result<AdmissibilityVerdict> {
    let base = risk_vector(p, d)?;
    let nd = p.num_observations() * p.num_actions();
    let ns = p.num_states();
    let n = nd + ns;
    let mut objective = vec![Rational::zero(); n];
    for o in objective.iter_mut().skip(nd) {
        *o = Rational::one();
    }
    let mut lp = LpProblem::maximize(objective);
    add_stochastic_rows(&mut lp, p);
    for (t, r) in base.iter().enumerate() {
        let mut row = risk_row(p, t, n);
        row[nd + t] = Rational::one();
        lp.add_constraint(row, Relation::Eq, r.clone());
    }
    let (primal, total_slack, _) = expect_optimal(lp::solve(&lp)?)?;
    let admissible = total_slack.is_zero();
    let witness = (!admissible).then(|| extract_procedure(p, &primal));

    let (epsilon_star, improver) = max_uniform_improvement(p, d)?;
    let extended_admissible = !epsilon_star.is_positive();
    Ok(AdmissibilityVerdict {
        admissible,
        extended_admissible,
        epsilon_star,
        witness,
        uniform_improver: (!extended_admissible).then_some(improver),
    })
}

/// Which coordinates the uniform clause of [`check_lc_domination`] ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    /// Only the standard-tagged points.
    OnStandard,
    /// Every grid point.
    OnAll,
}

/// Domination of `candidate` by `challenger` on a finite grid of possibly
/// nonstandard points: `challenger <= candidate - epsilon` on the designated
/// points, and `challenger ≉ candidate` at some standard-tagged point.
pub fn check_lc_domination(
    candidate: &[LcNumber],
    challenger: &[LcNumber],
    standard: &[bool],
    epsilon: &LcNumber,
    mode: GridMode,
) -> Result<bool> {
    if candidate.len() != challenger.len() || candidate.len() != standard.len() {
        return Err(Error::ShapeMismatch("risk vectors and tags differ in length".into()));
    }
    let uniform = (0..candidate.len())
        .filter(|&i| mode == GridMode::OnAll || standard[i])
        .all(|i| challenger[i] <= &candidate[i] - epsilon);
    if !uniform {
        return Ok(false);
    }
    Ok((0..candidate.len()).any(|i| standard[i] && !challenger[i].approx_eq(&candidate[i])))
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

    /// Column a2 is column a1 shifted up by one.
    fn fp2() -> FiniteProblem {
        FiniteProblem::unlabeled(vec![vec![q(1)], vec![q(1)]], vec![vec![q(0), q(1)], vec![q(1), q(2)]]).unwrap()
    }

    fn mix(p: Rational) -> Procedure {
        Procedure::Randomized(vec![vec![p.clone(), q(1) - p]])
    }

    fn query(p: FiniteProblem, d: Procedure, eps: Rational) -> DominationQuery {
        DominationQuery::new(p, d, eps, ProcedureClass::AllRandomized).unwrap()
    }

    #[test]
    fn fp2_one_domination() {
        let q1 = query(fp2(), Procedure::constant(1, 1), q(1));
        assert!(check_domination(&q1, &Procedure::constant(1, 0)).unwrap());
    }

    #[test]
    fn fp1_crossing_risks() {
        let q1 = query(fp1(), mix(ratio(1, 2)), q(0));
        assert!(!check_domination(&q1, &mix(ratio(1, 4))).unwrap());
    }

    #[test]
    fn no_self_domination() {
        let q1 = query(fp1(), mix(ratio(1, 3)), q(0));
        assert!(!check_domination(&q1, &mix(ratio(1, 3))).unwrap());
    }

    #[test]
    fn shape_mismatch() {
        let q1 = query(fp1(), mix(ratio(1, 3)), q(0));
        assert!(check_domination(&q1, &Procedure::Nonrandomized(vec![0, 0])).is_err());
    }

    #[test]
    fn epsilon_star_fp2() {
        let (e, w) = max_uniform_improvement(&fp2(), &Procedure::constant(1, 1)).unwrap();
        assert_eq!(e, q(1));
        assert_eq!(w, Procedure::constant(1, 0));
    }

    #[test]
    fn epsilon_star_fp1_is_zero() {
        let (e, _) = max_uniform_improvement(&fp1(), &mix(ratio(1, 2))).unwrap();
        assert_eq!(e, q(0));
    }

    #[test]
    fn single_action_problem() {
        let p = FiniteProblem::unlabeled(vec![vec![ratio(1, 2), ratio(1, 2)], vec![q(1), q(0)]], vec![vec![q(3)], vec![q(1)]])
            .unwrap();
        let d = Procedure::Nonrandomized(vec![0, 0]);
        let v = check_admissible(&p, &d).unwrap();
        assert_eq!(v.epsilon_star, q(0));
        assert!(v.admissible && v.extended_admissible);
        assert!(v.witness.is_none());
    }

    #[test]
    fn fp1_everything_admissible() {
        for k in 0..=8 {
            let v = check_admissible(&fp1(), &mix(ratio(k, 8))).unwrap();
            assert!(v.admissible, "p = {k}/8");
            assert!(v.extended_admissible);
        }
    }

    #[test]
    fn fp2_inadmissible_with_witness() {
        let v = check_admissible(&fp2(), &Procedure::constant(1, 1)).unwrap();
        assert!(!v.admissible && !v.extended_admissible);
        assert_eq!(v.witness, Some(Procedure::constant(1, 0)));
        assert_eq!(v.epsilon_star, q(1));
    }

    #[test]
    fn single_state_argmin_is_admissible() {
        let p = FiniteProblem::unlabeled(vec![vec![q(1)]], vec![vec![q(4), q(2), q(7)]]).unwrap();
        assert!(check_admissible(&p, &Procedure::constant(1, 1)).unwrap().admissible);
        assert!(!check_admissible(&p, &Procedure::constant(1, 0)).unwrap().admissible);
    }

    #[test]
    fn inadmissible_but_extended_admissible() {
        // a2 ties a1 at θ1 and is worse at θ2: dominated, but not uniformly
        let p = FiniteProblem::unlabeled(vec![vec![q(1)], vec![q(1)]], vec![vec![q(0), q(0)], vec![q(0), q(1)]]).unwrap();
        let v = check_admissible(&p, &Procedure::constant(1, 1)).unwrap();
        assert!(!v.admissible);
        assert!(v.extended_admissible);
        assert_eq!(v.epsilon_star, q(0));
    }

    #[test]
    fn find_dominator_respects_epsilon_star() {
        let d = Procedure::constant(1, 1);
        assert!(find_dominator(&query(fp2(), d.clone(), q(1))).unwrap().is_some());
        assert!(find_dominator(&query(fp2(), d.clone(), ratio(3, 2))).unwrap().is_none());
        let listed = DominationQuery::new(
            fp2(),
            d,
            ratio(1, 2),
            ProcedureClass::ExplicitList(vec![Procedure::constant(1, 1), Procedure::constant(1, 0)]),
        )
        .unwrap();
        assert_eq!(find_dominator(&listed).unwrap(), Some(Procedure::constant(1, 0)));
    }

    fn lc(v: &[LcNumber]) -> Vec<LcNumber> {
        v.to_vec()
    }

    #[test]
    fn lc_domination_cases() {
        let eps = LcNumber::eps();
        let a = lc(&[LcNumber::from_int(1), LcNumber::from_int(2) + eps.clone()]);
        let half = LcNumber::from_rational(ratio(1, 2));
        let b: Vec<LcNumber> = a.iter().map(|x| x - &half).collect();
        let tags = [true, true];
        assert!(check_lc_domination(&a, &b, &tags, &half, GridMode::OnStandard).unwrap());

        let e2 = &eps * &eps;
        let b2: Vec<LcNumber> = a.iter().map(|x| x - &e2).collect();
        assert!(!check_lc_domination(&a, &b2, &tags, &LcNumber::zero(), GridMode::OnStandard).unwrap());

        let third = LcNumber::from_rational(ratio(1, 3));
        let b3 = lc(&[&a[0] - &third, a[1].clone()]);
        assert!(check_lc_domination(&a, &b3, &tags, &LcNumber::zero(), GridMode::OnAll).unwrap());
    }

    #[test]
    fn lc_domination_modes_differ_on_nonstandard_points() {
        let a = lc(&[LcNumber::from_int(1), LcNumber::eps()]);
        let b = lc(&[LcNumber::zero(), LcNumber::eps() * LcNumber::from_int(2)]);
        let tags = [true, false];
        assert!(check_lc_domination(&a, &b, &tags, &LcNumber::zero(), GridMode::OnStandard).unwrap());
        assert!(!check_lc_domination(&a, &b, &tags, &LcNumber::zero(), GridMode::OnAll).unwrap());
    }
}

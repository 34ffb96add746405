//! Closed-form risk for two parametric families, ε-regularity of priors, and
//! a grid-scoped Blyth-style admissibility certificate.
//!
//! * `NormalLocationLinear { dim }`: `X ~ N(θ, I_d)`, squared error, linear
//!   estimators `δ_c(x) = c·x` with risk `d·c² + (1-c)²·‖θ‖²`.
//! * `BernoulliBoundary`: `X ~ Bernoulli(g(t))` with `g(t) = t` for `t > 0`
//!   and `g(0) = 1`, loss `(g(t) - y)²`, estimators `(δ(0), δ(1)) = (a, b)`.
//!
//! Both evaluate over any [`Scalar`], so the same code handles rational
//! parameters and parameters at infinitesimal distance from them.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};


use crate::lc::{LcNumber, Valuation};
use crate::scalar::{ratio, Rational, Scalar};
use crate::synthesis::LcPrior;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParametricFamily {
    NormalLocationLinear { dim: usize },
    BernoulliBoundary,
}

/// `g(t) = t` for `t > 0`, `g(0) = 1`; defined on `[0, 1]`.
pub fn bernoulli_mean<S: Scalar>(t: &S) -> Result<S> {
    if t.lt_zero() || *t > S::one() {
        return Err(Error::ParameterOutOfDomain(format!("t = {t:?} is outside [0, 1]")));
    }
    Ok(if t.gt_zero() { t.clone() } else { S::one() })
}

fn norm_sq<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + x.clone() * x.clone())
}

impl ParametricFamily {
    /// Number of procedure parameters: `c`, or the pair `(a, b)`.
    pub fn procedure_arity(&self) -> usize {
        match self {
            ParametricFamily::NormalLocationLinear { .. } => 1,
            ParametricFamily::BernoulliBoundary => 2,
        }
    }

    pub fn parameter_dim(&self) -> usize {
        match self {
            ParametricFamily::NormalLocationLinear { dim } => *dim,
            ParametricFamily::BernoulliBoundary => 1,
        }
    }

    fn check_shapes<S>(&self, params: &[S], point: &[S]) -> Result<()> {
        if params.len() != self.procedure_arity() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} procedure parameters, got {}",
                self.procedure_arity(),
                params.len()
            )));
        }
        if point.len() != self.parameter_dim() {
            return Err(Error::ShapeMismatch(format!(
                "expected a {}-dimensional parameter, got {}",
                self.parameter_dim(),
                point.len()
            )));
        }
        Ok(())
    }

    /// Risk of the procedure `params` at parameter `point`.
    pub fn risk<S: Scalar>(&self, params: &[S], point: &[S]) -> Result<S> {
        self.check_shapes(params, point)?;
        match self {
            ParametricFamily::NormalLocationLinear { dim } => {
                let c = params[0].clone();
                let one_minus = S::one() - c.clone();
                Ok(S::from_int(*dim as i64) * c.clone() * c + one_minus.clone() * one_minus * norm_sq(point))
            }
            ParametricFamily::BernoulliBoundary => {
                let (a, b) = (&params[0], &params[1]);
                for v in [a, b] {
                    if v.lt_zero() || *v > S::one() {
                        return Err(Error::ParameterOutOfDomain(format!("action {v:?} outside [0, 1]")));
                    }
                }
                let g = bernoulli_mean(&point[0])?;
                let da = g.clone() - a.clone();
                let db = g.clone() - b.clone();
                Ok((S::one() - g.clone()) * da.clone() * da + g * db.clone() * db)
            }
        }
    }

    /// Bayes risk of `params` under a prior given either in closed form or
    /// by finite LC support.
    pub fn bayes_risk(&self, params: &[LcNumber], prior: &PriorSpec) -> Result<LcNumber> {
        match (self, prior) {
            (ParametricFamily::NormalLocationLinear { dim }, PriorSpec::CenteredNormal { scale }) => {
                if params.len() != 1 {
                    return Err(Error::ShapeMismatch("normal location takes one parameter".into()));
                }
                // E‖θ‖² = d·k² under N(0, k² I_d)
                let c = &params[0];
                let d = LcNumber::from_int(*dim as i64);
                let one_minus = LcNumber::one() - c;
                Ok(&d * c * c + &one_minus * &one_minus * &d * scale * scale)
            }
            (_, PriorSpec::Finite(pr)) => pr.expect(|t| self.risk(params, t)),
            (ParametricFamily::BernoulliBoundary, PriorSpec::CenteredNormal { .. }) => {
                Err(Error::Unsupported("normal priors do not live on [0, 1]".into()))
            }
        }
    }
}

/// A prior for [`ParametricFamily::bayes_risk`] and [`blyth_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    /// `N(0, scale² I_d)`.
    CenteredNormal { scale: LcNumber },
    Finite(LcPrior),
}

/// An open ball `{t : ‖t - center‖ < radius}` used to probe regularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub center: Vec<Rational>,
    pub radius: Rational,
}

impl Probe {
    fn validate(&self, dim: usize) -> Result<()> {
        if !self.radius.is_positive() {
            return Err(Error::BadProbe(format!("radius {} is not positive", self.radius)));
        }
        if self.center.len() != dim {
            return Err(Error::BadProbe(format!("center has dimension {}, expected {dim}", self.center.len())));
        }
        Ok(())
    }
}

/// Centers `0` and `e_1`, radii `1/2`, `1`, `2`.
pub fn default_probes(dim: usize) -> Vec<Probe> {
    let mut e1 = vec![Rational::zero(); dim];
    if dim > 0 {
        e1[0] = Rational::one();
    }
    let centers = [vec![Rational::zero(); dim], e1];
    centers
        .iter()
        .flat_map(|c| [ratio(1, 2), ratio(1, 1), ratio(2, 1)].into_iter().map(move |r| Probe { center: c.clone(), radius: r }))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityKind {
    Regular,
    NotRegular,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegularityVerdict {
    /// Every probe's lower mass bound is `≫ ε`.
    Regular,
    /// This probe's upper mass bound is not `≫ ε`.
    NotRegular { probe: Probe, upper: LcNumber },
    /// This probe's bounds straddle the decision.
    Indeterminate { probe: Probe, lower: LcNumber, upper: LcNumber },
}

impl RegularityVerdict {
    pub fn kind(&self) -> RegularityKind {
        match self {
            RegularityVerdict::Regular => RegularityKind::Regular,
            RegularityVerdict::NotRegular { .. } => RegularityKind::NotRegular,
            RegularityVerdict::Indeterminate { .. } => RegularityKind::Indeterminate,
        }
    }
}

/// Enclosure of a ball's prior mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MassBounds {
    pub lower: LcNumber,
    pub upper: LcNumber,
}

fn decide(probes: &[Probe], epsilon: &LcNumber, bounds: &[MassBounds]) -> RegularityVerdict {
    for (probe, b) in probes.iter().zip(bounds) {
        if !b.upper.much_greater(epsilon) {
            return RegularityVerdict::NotRegular { probe: probe.clone(), upper: b.upper.clone() };
        }
    }
    for (probe, b) in probes.iter().zip(bounds) {
        if !b.lower.much_greater(epsilon) {
            return RegularityVerdict::Indeterminate {
                probe: probe.clone(),
                lower: b.lower.clone(),
                upper: b.upper.clone(),
            };
        }
    }
    RegularityVerdict::Regular
}

const PI_LOWER: (i64, i64) = (314_159, 100_000);
const PI_UPPER: (i64, i64) = (314_160, 100_000);
const SQRT_DIGITS: usize = 9;

/// Rational `lo <= sqrt(x) <= hi` with `hi - lo = 10^-digits`.
fn sqrt_bounds(x: &Rational, digits: usize) -> (Rational, Rational) {
    let scale: BigInt = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = x * Rational::from_integer(&scale * &scale);
    let s = scaled.floor().to_integer().sqrt();
    (Rational::new(s.clone(), scale.clone()), Rational::new(s + BigInt::one(), scale))
}

/// Rational enclosure of `vol(B_d(1)) · (2π)^{-d/2} = 2^{-d/2} / Γ(d/2 + 1)`.
///
/// Even `d = 2m` gives the exact `2^{-m} / m!`; odd `d = 2m + 1` gives
/// `sqrt(2/π) / (2m+1)!!`, enclosed through bounds on π and the square root.
pub fn unit_ball_gaussian_constant(dim: usize) -> (Rational, Rational) {
    if dim % 2 == 0 {
        let m = dim / 2;
        let fact: BigInt = (1..=m).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
        let c = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(2u32), m) * fact);
        return (c.clone(), c);
    }
    let double_fact: BigInt = (1..=dim).step_by(2).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    let df = Rational::from_integer(double_fact);
    let two = Rational::from_integer(BigInt::from(2));
    let (lo_in, _) = sqrt_bounds(&(&two / ratio(PI_UPPER.0, PI_UPPER.1)), SQRT_DIGITS);
    let (_, hi_in) = sqrt_bounds(&(&two / ratio(PI_LOWER.0, PI_LOWER.1)), SQRT_DIGITS);
    (lo_in / &df, hi_in / df)
}

fn check_infinite(k: &LcNumber) -> Result<()> {
    match k.valuation() {
        Valuation::Finite(v) if v.is_negative() && k.signum() > 0 => Ok(()),
        _ => Err(Error::NotInfinite),
    }
}

/// Bounds on the `N(0, K² I_d)` mass of a probe ball:
/// `κ_lo r^d K^{-d} (1 - (‖c‖² + r²)/K²) <= mass <= κ_hi r^d K^{-d}`, using
/// `exp(-u) >= 1 - u` and `‖t‖² <= 2‖c‖² + 2r²` on the ball.
pub fn normal_ball_mass_bounds(dim: usize, k: &LcNumber, probe: &Probe) -> Result<MassBounds> {
    probe.validate(dim)?;
    check_infinite(k)?;
    let (lo, hi) = unit_ball_gaussian_constant(dim);
    let inv_k = k.inv()?;
    let scale = inv_k.powi(dim as i32)?;
    let r_d = num_traits::pow(probe.radius.clone(), dim);
    let upper = LcNumber::from_rational(hi * &r_d) * &scale;
    let spread = norm_sq(&probe.center) + &probe.radius * &probe.radius;
    let damp = LcNumber::one() - LcNumber::from_rational(spread) * &inv_k * &inv_k;
    let lower = LcNumber::from_rational(lo * r_d) * scale * damp;
    Ok(MassBounds { lower, upper })
}

/// ε-regularity of `N(0, K² I_d)` at the given probes.
pub fn check_epsilon_regular_normal(dim: usize, k: &LcNumber, epsilon: &LcNumber, probes: &[Probe]) -> Result<RegularityVerdict> {
    let bounds = probes.iter().map(|p| normal_ball_mass_bounds(dim, k, p)).collect::<Result<Vec<_>>>()?;
    Ok(decide(probes, epsilon, &bounds))
}

/// Exact mass of an open ball under a finitely supported LC prior.
pub fn finite_ball_mass(prior: &LcPrior, probe: &Probe) -> Result<LcNumber> {
    probe.validate(prior.dim())?;
    let r2 = LcNumber::from_rational(&probe.radius * &probe.radius);
    let mut mass = LcNumber::zero();
    for (pt, w) in prior.points().iter().zip(prior.weights()) {
        let diff: Vec<LcNumber> = pt.iter().zip(&probe.center).map(|(x, c)| x - LcNumber::from_rational(c.clone())).collect();
        if norm_sq(&diff) < r2 {
            mass = mass + w;
        }
    }
    Ok(mass)
}

/// ε-regularity of a finitely supported LC prior at the given probes.
pub fn check_epsilon_regular_finite(prior: &LcPrior, epsilon: &LcNumber, probes: &[Probe]) -> Result<RegularityVerdict> {
    let bounds = probes
        .iter()
        .map(|p| finite_ball_mass(prior, p).map(|m| MassBounds { lower: m.clone(), upper: m }))
        .collect::<Result<Vec<_>>>()?;
    Ok(decide(probes, epsilon, &bounds))
}

#[derive(Debug, Clone, PartialEq)]
pub enum NotCertifiedReason {
    /// The candidate's Bayes risk exceeds this challenger's by more than ε.
    NotEpsilonBayes { challenger: usize, candidate_risk: LcNumber, challenger_risk: LcNumber },
    Regularity(Box<RegularityVerdict>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlythOutcome {
    /// ε-Bayes against every listed challenger and ε-regular at every listed
    /// probe. The claim covers exactly those challengers and probes.
    CertifiedAdmissibleOnGrid { challengers: usize, probes: usize },
    NotCertified(NotCertifiedReason),
}

/// Checks the two hypotheses of the nonstandard Blyth argument on a finite
/// challenger set and probe list: the candidate is ε-Bayes among the
/// challengers, and the prior is ε-regular.
pub fn blyth_certificate(
    family: &ParametricFamily,
    candidate: &[Rational],
    prior: &PriorSpec,
    epsilon: &LcNumber,
    challengers: &[Vec<Rational>],
    probes: &[Probe],
) -> Result<BlythOutcome> {
    let lift = |v: &[Rational]| -> Vec<LcNumber> { v.iter().cloned().map(LcNumber::from_rational).collect() };
    let own = family.bayes_risk(&lift(candidate), prior)?;
    for (i, ch) in challengers.iter().enumerate() {
        let other = family.bayes_risk(&lift(ch), prior)?;
        if own > &other + epsilon {
            return Ok(BlythOutcome::NotCertified(NotCertifiedReason::NotEpsilonBayes {
                challenger: i,
                candidate_risk: own,
                challenger_risk: other,
            }));
        }
    }
    let verdict = match prior {
        PriorSpec::CenteredNormal { scale } => {
            check_epsilon_regular_normal(family.parameter_dim(), scale, epsilon, probes)?
        }
        PriorSpec::Finite(pr) => check_epsilon_regular_finite(pr, epsilon, probes)?,
    };
    if verdict != RegularityVerdict::Regular {
        return Ok(BlythOutcome::NotCertified(NotCertifiedReason::Regularity(Box::new(verdict))));
    }
    Ok(BlythOutcome::CertifiedAdmissibleOnGrid { challengers: challengers.len(), probes: probes.len() })
}

/// Shrinkage estimators `δ_c` for `c = j/10`, `j = 0..=10`.
pub fn shrinkage_grid() -> Vec<Vec<Rational>> {
    (0..=10).map(|j| vec![ratio(j, 10)]).collect()
}

/// Exact quantities for the normal-location problem with prior
/// `N(0, K² I_d)` at an infinite `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalLocationReport {
    pub dim: usize,
    pub scale: LcNumber,
    /// `c = K²/(K²+1)`, the Bayes shrinkage.
    pub shrinkage: LcNumber,
    /// Bayes risk of `δ_c`, `d·K²/(K²+1)`.
    pub bayes_b: LcNumber,
    /// Bayes risk of the identity estimator, `d`.
    pub bayes_m: LcNumber,
    /// `d/(K²+1)`.
    pub gap: LcNumber,
    pub gap_infinitesimal: bool,
    /// Risk of `δ_c` at θ is `risk_constant + risk_quadratic·‖θ‖²`.
    pub risk_constant: LcNumber,
    pub risk_quadratic: LcNumber,
    /// `1/(K²+1)`, the ε used for regularity and the certificate.
    pub epsilon: LcNumber,
    pub regularity: RegularityVerdict,
    pub certificate: BlythOutcome,
}

pub fn normal_location_report(dim: usize, k: &LcNumber, order: u32) -> Result<NormalLocationReport> {
    if dim == 0 {
        return Err(Error::ShapeMismatch("dimension must be at least 1".into()));
    }
    check_infinite(k)?;
    let k = k.clone().with_order(order);
    let family = ParametricFamily::NormalLocationLinear { dim };
    let d = LcNumber::from_int(dim as i64);
    let k2 = &k * &k;
    let epsilon = (&k2 + LcNumber::one()).inv()?;
    let shrinkage = &k2 * &epsilon;
    let prior = PriorSpec::CenteredNormal { scale: k.clone() };
    let bayes_b = family.bayes_risk(core::slice::from_ref(&shrinkage), &prior)?;
    let closed_form = &d * &shrinkage;
    if !bayes_b.agrees_with(&closed_form) {
        return Err(Error::CertificateFailure(format!("Bayes risk {bayes_b} disagrees with d·K²/(K²+1) = {closed_form}")));
    }
    let bayes_m = family.bayes_risk(&[LcNumber::one()], &prior)?;
    let gap = &bayes_m - &bayes_b;
    let one_minus = LcNumber::one() - &shrinkage;
    let probes = default_probes(dim);
    let regularity = check_epsilon_regular_normal(dim, &k, &epsilon, &probes)?;
    let certificate = blyth_certificate(&family, &[Rational::one()], &prior, &epsilon, &shrinkage_grid(), &probes)?;
    Ok(NormalLocationReport {
        dim,
        gap_infinitesimal: gap.is_infinitesimal(),
        risk_constant: &d * &shrinkage * &shrinkage,
        risk_quadratic: &one_minus * &one_minus,
        scale: k,
        shrinkage,
        bayes_b: closed_form,
        bayes_m,
        gap,
        epsilon,
        regularity,
        certificate,
    })
}

/// The Bayes rule under a finite prior on `[0, 1]` for the Bernoulli
/// boundary problem: posterior means of `g` per observation. An observation
/// with zero marginal gets the prior mean of `g`.
pub fn bernoulli_bayes_rule(points: &[Rational], weights: &[Rational]) -> Result<(Rational, Rational)> {
    let mut num0 = Rational::zero();
    let mut den0 = Rational::zero();
    let mut num1 = Rational::zero();
    let mut den1 = Rational::zero();
    let mut prior_mean = Rational::zero();
    for (t, w) in points.iter().zip(weights) {
        let g = bernoulli_mean(t)?;
        let miss = Rational::one() - &g;
        num0 += w * &miss * &g;
        den0 += w * &miss;
        num1 += w * &g * &g;
        den1 += w * &g;
        prior_mean += w * &g;
    }
    let a = if den0.is_zero() { prior_mean.clone() } else { num0 / den0 };
    let b = if den1.is_zero() { prior_mean } else { num1 / den1 };
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonBayesDemo {
    pub states: Vec<Rational>,
    pub priors_checked: usize,
    /// Every Bayes rule found had `a > 0` and `b > 0`.
    pub all_components_positive: bool,
    /// Smallest `r(π,(0,0)) - min_δ r(π,δ)` over the priors checked.
    pub min_excess: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoDominationCheck {
    pub challengers: usize,
    pub states: usize,
    /// Challengers that dominate `(0,0)` on the state grid.
    pub grid_dominators: Vec<(Rational, Rational)>,
    /// For each grid dominator, a state in `(0, 1]` off the grid where its
    /// risk is strictly above that of `(0,0)`.
    pub refuting_states: Vec<Rational>,
}

/// A state where `(a, b) != (0, 0)` has strictly larger risk than `(0, 0)`:
/// `t = a/4` gives risk at least `9t²(1-t) > t²`, and for `a = 0` the
/// state `t = b/4` gives `t² + 8t³`.
fn refuting_state(a: &Rational, b: &Rational) -> Option<Rational> {
    if a.is_positive() {
        Some(a / Rational::from_integer(4.into()))
    } else if b.is_positive() {
        Some(b / Rational::from_integer(4.into()))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliBoundaryReport {
    /// Bayes risk of `(0,0)` under the point prior at `eps`.
    pub lc_bayes_risk: LcNumber,
    pub lc_bayes_risk_st: Rational,
    pub risk_at_half: Rational,
    pub risk_at_zero: Rational,
    pub non_bayes: NonBayesDemo,
    pub no_domination: NoDominationCheck,
    pub certificate: BlythOutcome,
}

/// All weight vectors on `n` points whose entries are multiples of
/// `1/steps`.
fn simplex_lattice(n: usize, steps: i64) -> Vec<Vec<Rational>> {
    fn rec(n: usize, left: i64, steps: i64, cur: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
        if n == 1 {
            cur.push(ratio(left, steps));
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(ratio(k, steps));
            rec(n - 1, left - k, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, steps, steps, &mut Vec::new(), &mut out);
    out
}

/// Grid step for the priors in the non-Bayes demonstration.
pub const NON_BAYES_PRIOR_STEPS: i64 = 4;

pub fn bernoulli_boundary_report() -> Result<BernoulliBoundaryReport> {
    let family = ParametricFamily::BernoulliBoundary;
    let zero_rule = [Rational::zero(), Rational::zero()];
    let eps = LcNumber::eps();
    let lc_zero = [LcNumber::zero(), LcNumber::zero()];
    let lc_bayes_risk = family.risk(&lc_zero, core::slice::from_ref(&eps))?;
    let lc_bayes_risk_st = lc_bayes_risk.st()?;
    let risk_at_half = family.risk(&zero_rule, &[ratio(1, 2)])?;
    let risk_at_zero = family.risk(&zero_rule, &[Rational::zero()])?;

    // states 0, 1/10, ..., 1
    let states: Vec<Rational> = (0..=10).map(|k| ratio(k, 10)).collect();
    let mut all_positive = true;
    let mut min_excess: Option<Rational> = None;
    let priors = simplex_lattice(states.len(), NON_BAYES_PRIOR_STEPS);
    for w in &priors {
        let (a, b) = bernoulli_bayes_rule(&states, w)?;
        all_positive &= a.is_positive() && b.is_positive();
        let mut opt = Rational::zero();
        let mut zero = Rational::zero();
        for (t, wt) in states.iter().zip(w) {
            opt += wt * family.risk(&[a.clone(), b.clone()], core::slice::from_ref(t))?;
            zero += wt * family.risk(&zero_rule, core::slice::from_ref(t))?;
        }
        let excess = zero - opt;
        if min_excess.as_ref().map_or(true, |m| excess < *m) {
            min_excess = Some(excess);
        }
    }
    let non_bayes = NonBayesDemo {
        states,
        priors_checked: priors.len(),
        all_components_positive: all_positive,
        min_excess: min_excess.unwrap_or_else(Rational::zero),
    };

    // states {1/n : n = 1..40} ∪ {0}, challengers (j/20, k/20)
    let mut grid: Vec<Rational> = (1..=40).map(|n| ratio(1, n)).collect();
    grid.push(Rational::zero());
    let base = grid.iter().map(|t| family.risk(&zero_rule, core::slice::from_ref(t))).collect::<Result<Vec<_>>>()?;
    let mut grid_dominators = Vec::new();
    let mut refuting_states = Vec::new();
    let mut challengers = 0;
    for j in 0..=20 {
        for k in 0..=20 {
            challengers += 1;
            let ch = [ratio(j, 20), ratio(k, 20)];
            let r = grid.iter().map(|t| family.risk(&ch, core::slice::from_ref(t))).collect::<Result<Vec<_>>>()?;
            if !crate::admissibility::dominates_risks(&base, &r, &Rational::zero())? {
                continue;
            }
            let t = refuting_state(&ch[0], &ch[1])
                .ok_or_else(|| Error::CertificateFailure("(0,0) dominates itself".into()))?;
            let tt = core::slice::from_ref(&t);
            if family.risk(&ch, tt)? <= family.risk(&zero_rule, tt)? {
                return Err(Error::CertificateFailure(format!("no refuting state for ({}, {})", ch[0], ch[1])));
            }
            refuting_states.push(t);
            grid_dominators.push((ch[0].clone(), ch[1].clone()));
        }
    }
    let no_domination = NoDominationCheck { challengers, states: grid.len(), grid_dominators, refuting_states };

    let quarter_grid: Vec<Vec<Rational>> =
        (0..=4).flat_map(|a| (0..=4).map(move |b| vec![ratio(a, 4), ratio(b, 4)])).collect();
    let prior = PriorSpec::Finite(LcPrior::point_mass(vec![eps.clone()]));
    let certificate = blyth_certificate(&family, &zero_rule, &prior, &eps, &quarter_grid, &default_probes(1))?;

    Ok(BernoulliBoundaryReport {
        lc_bayes_risk,
        lc_bayes_risk_st,
        risk_at_half,
        risk_at_zero,
        non_bayes,
        no_domination,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn k_inf() -> LcNumber {
        LcNumber::infinite_unit()
    }

    fn eps_pow(n: i64) -> LcNumber {
        LcNumber::monomial(q(1), q(n))
    }

    #[test]
    fn normal_location_d1() {
        let r = normal_location_report(1, &k_inf(), 8).unwrap();
        let expected_b = LcNumber::from_terms((0..=4).map(|k| (q(2 * k), q(if k % 2 == 0 { 1 } else { -1 }))));
        assert_eq!(r.bayes_b, expected_b);
        assert_eq!(r.bayes_m, LcNumber::one());
        assert_eq!(r.gap, LcNumber::one() - expected_b);
        assert!(r.gap_infinitesimal);
        assert_eq!(r.shrinkage.st().unwrap(), q(1));
        assert_eq!(r.regularity, RegularityVerdict::Regular);
        assert!(matches!(r.certificate, BlythOutcome::CertifiedAdmissibleOnGrid { challengers: 11, probes: 6 }));
    }

    #[test]
    fn normal_location_finite_k() {
        let fam = ParametricFamily::NormalLocationLinear { dim: 3 };
        let k = LcNumber::from_int(2);
        let c = LcNumber::from_rational(ratio(4, 5));
        let prior = PriorSpec::CenteredNormal { scale: k };
        assert_eq!(fam.bayes_risk(&[c], &prior).unwrap(), LcNumber::from_rational(ratio(12, 5)));
        assert_eq!(fam.bayes_risk(&[LcNumber::one()], &prior).unwrap(), LcNumber::from_int(3));
        assert_eq!(normal_location_report(3, &LcNumber::from_int(2), 8), Err(Error::NotInfinite));
    }

    #[test]
    fn regularity_thresholds() {
        let k = k_inf();
        let eps = (&k * &k + LcNumber::one()).inv().unwrap();
        let probes = default_probes(1);
        assert_eq!(check_epsilon_regular_normal(1, &k, &eps, &probes).unwrap(), RegularityVerdict::Regular);
        let v3 = check_epsilon_regular_normal(3, &k, &eps, &default_probes(3)).unwrap();
        assert_eq!(v3.kind(), RegularityKind::NotRegular);
        assert_eq!(
            check_epsilon_regular_normal(1, &k, &eps_pow(3), &probes).unwrap(),
            RegularityVerdict::Regular
        );
        let v2 = check_epsilon_regular_normal(2, &k, &eps, &default_probes(2)).unwrap();
        assert_eq!(v2.kind(), RegularityKind::NotRegular);
    }

    #[test]
    fn mass_bounds_share_valuation() {
        for dim in 1..=4 {
            for p in default_probes(dim) {
                let b = normal_ball_mass_bounds(dim, &k_inf(), &p).unwrap();
                assert!(b.lower <= b.upper);
                assert_eq!(b.lower.valuation(), Valuation::Finite(q(dim as i64)));
                assert_eq!(b.upper.valuation(), Valuation::Finite(q(dim as i64)));
            }
        }
    }

    #[test]
    fn gaussian_constants() {
        // d = 1: 2/sqrt(2π) ≈ 0.7978845608
        let (lo, hi) = unit_ball_gaussian_constant(1);
        assert!(lo < ratio(797_884_561, 1_000_000_000) && hi > ratio(797_884_560, 1_000_000_000));
        assert!(lo < hi);
        assert_eq!(unit_ball_gaussian_constant(2), (ratio(1, 2), ratio(1, 2)));
        assert_eq!(unit_ball_gaussian_constant(4), (ratio(1, 8), ratio(1, 8)));
    }

    #[test]
    fn bad_probes() {
        let bad = Probe { center: vec![q(0)], radius: q(0) };
        assert!(matches!(normal_ball_mass_bounds(1, &k_inf(), &bad), Err(Error::BadProbe(_))));
        let wrong_dim = Probe { center: vec![q(0), q(0)], radius: q(1) };
        assert!(matches!(normal_ball_mass_bounds(1, &k_inf(), &wrong_dim), Err(Error::BadProbe(_))));
    }

    #[test]
    fn blyth_cases() {
        let k = k_inf();
        let eps = (&k * &k + LcNumber::one()).inv().unwrap();
        let fam1 = ParametricFamily::NormalLocationLinear { dim: 1 };
        let prior = PriorSpec::CenteredNormal { scale: k.clone() };
        let out = blyth_certificate(&fam1, &[q(1)], &prior, &eps, &shrinkage_grid(), &default_probes(1)).unwrap();
        assert_eq!(out, BlythOutcome::CertifiedAdmissibleOnGrid { challengers: 11, probes: 6 });

        let fam3 = ParametricFamily::NormalLocationLinear { dim: 3 };
        let out = blyth_certificate(&fam3, &[q(1)], &prior, &eps, &shrinkage_grid(), &default_probes(3)).unwrap();
        assert!(matches!(out, BlythOutcome::NotCertified(NotCertifiedReason::Regularity(_))));

        // a strictly shrinking candidate is not ε-Bayes: its Bayes risk is infinite
        let out = blyth_certificate(&fam1, &[ratio(1, 2)], &prior, &eps, &shrinkage_grid(), &default_probes(1)).unwrap();
        assert!(matches!(out, BlythOutcome::NotCertified(NotCertifiedReason::NotEpsilonBayes { .. })));
    }

    #[test]
    fn bernoulli_risks() {
        let fam = ParametricFamily::BernoulliBoundary;
        let zero = [q(0), q(0)];
        assert_eq!(fam.risk(&zero, &[ratio(1, 2)]).unwrap(), ratio(1, 4));
        assert_eq!(fam.risk(&zero, &[q(0)]).unwrap(), q(1));
        let lz = [LcNumber::zero(), LcNumber::zero()];
        assert_eq!(fam.risk(&lz, &[LcNumber::eps()]).unwrap(), eps_pow(2));
        assert!(fam.risk(&zero, &[q(2)]).is_err());
        assert!(fam.risk(&zero, &[q(-1)]).is_err());
    }

    #[test]
    fn bernoulli_challenger_risks_at_eps() {
        // every challenger on the quarter grid has LC Bayes risk >= 0, and (0,0) has eps^2
        let fam = ParametricFamily::BernoulliBoundary;
        let eps = LcNumber::eps();
        let prior = PriorSpec::Finite(LcPrior::point_mass(vec![eps.clone()]));
        let own = fam.bayes_risk(&[LcNumber::zero(), LcNumber::zero()], &prior).unwrap();
        assert_eq!(own, eps_pow(2));
        for a in 0..=4 {
            for b in 0..=4 {
                let ch = [LcNumber::from_rational(ratio(a, 4)), LcNumber::from_rational(ratio(b, 4))];
                let r = fam.bayes_risk(&ch, &prior).unwrap();
                // (1-eps)(eps-a)^2 + eps(eps-b)^2, expanded by hand
                let a_ = LcNumber::from_rational(ratio(a, 4));
                let b_ = LcNumber::from_rational(ratio(b, 4));
                let hand = (LcNumber::one() - &eps) * (&eps - &a_) * (&eps - &a_) + &eps * (&eps - &b_) * (&eps - &b_);
                assert_eq!(r, hand);
                assert!(own <= &r + &eps);
            }
        }
    }

    #[test]
    fn bernoulli_report() {
        let r = bernoulli_boundary_report().unwrap();
        assert_eq!(r.lc_bayes_risk, eps_pow(2));
        assert_eq!(r.lc_bayes_risk_st, q(0));
        assert_eq!(r.risk_at_half, ratio(1, 4));
        assert_eq!(r.risk_at_zero, q(1));
        assert_eq!(r.non_bayes.priors_checked, 1001);
        assert!(r.non_bayes.all_components_positive);
        assert!(r.non_bayes.min_excess.is_positive());
        assert_eq!(r.no_domination.challengers, 441);
        assert_eq!(r.no_domination.states, 41);
        // b <= 2t at every grid state forces a, b <= 1/20: weak domination
        // on the grid, undone off it at t = 1/80
        let nd = &r.no_domination;
        assert_eq!(
            nd.grid_dominators,
            vec![(q(0), ratio(1, 20)), (ratio(1, 20), q(0)), (ratio(1, 20), ratio(1, 20))]
        );
        assert!(nd.refuting_states.iter().all(|t| *t == ratio(1, 80)));
        assert!(matches!(r.certificate, BlythOutcome::NotCertified(NotCertifiedReason::Regularity(_))));
    }

    #[test]
    fn finite_prior_regularity() {
        let eps = LcNumber::eps();
        let point = LcPrior::point_mass(vec![eps.clone()]);
        let v = check_epsilon_regular_finite(&point, &eps, &default_probes(1)).unwrap();
        assert_eq!(v.kind(), RegularityKind::NotRegular);
        // full-support-ish prior on {0, 1/2, 1} with standard weights
        let third = LcNumber::from_rational(ratio(1, 3));
        let spread = LcPrior::new(
            vec![vec![LcNumber::zero()], vec![LcNumber::from_rational(ratio(1, 2))], vec![LcNumber::one()]],
            vec![third.clone(), third.clone(), third],
        )
        .unwrap();
        assert_eq!(check_epsilon_regular_finite(&spread, &eps, &default_probes(1)).unwrap(), RegularityVerdict::Regular);
    }

    #[test]
    fn bayes_rule_posterior_means() {
        let pts = [q(0), ratio(1, 2), q(1)];
        let (a, b) = bernoulli_bayes_rule(&pts, &[q(0), q(1), q(0)]).unwrap();
        assert_eq!((a, b), (ratio(1, 2), ratio(1, 2)));
        // no mass where X = 0 is possible: fall back to the prior mean of g
        let (a, b) = bernoulli_bayes_rule(&pts, &[ratio(1, 2), q(0), ratio(1, 2)]).unwrap();
        assert_eq!((a, b), (q(1), q(1)));
    }
}

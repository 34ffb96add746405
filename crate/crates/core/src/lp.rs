//! Exact-rational linear programming.
//!
//! Dense two-phase primal simplex with Bland's rule. Every outcome carries a
//! certificate that [`check_certificate`] re-validates by exact substitution:
//! optimal solutions come with dual multipliers of equal objective value,
//! infeasible problems with a Farkas vector, unbounded problems with a
//! feasible point and an improving ray.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBound {
    Zero,
    NegInfinity,
}

/// `maximize objective·x` subject to `rows[i]·x (relations[i]) rhs[i]` and
/// per-variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<Rational>,
    pub lower: Vec<LowerBound>,
    pub upper: Vec<Option<Rational>>,
}

impl LpProblem {
    /// All variables nonnegative and unbounded above.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            lower: vec![LowerBound::Zero; n],
            upper: vec![None; n],
        }
    }

    pub fn constraint(mut self, row: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        self.add_constraint(row, relation, rhs);
        self
    }

    pub fn add_constraint(&mut self, row: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.rows.push(row);
        self.relations.push(relation);
        self.rhs.push(rhs);
    }

    pub fn free(mut self, var: usize) -> Self {
        self.lower[var] = LowerBound::NegInfinity;
        self
    }

    pub fn upper_bound(mut self, var: usize, bound: Rational) -> Self {
        self.upper[var] = Some(bound);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        let m = self.rows.len();
        if self.relations.len() != m || self.rhs.len() != m {
            return Err(Error::MalformedProblem(format!(
                "{} rows but {} relations and {} right-hand sides",
                m,
                self.relations.len(),
                self.rhs.len()
            )));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::MalformedProblem(format!("bounds do not cover {n} variables")));
        }
        if let Some((i, r)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::MalformedProblem(format!("row {i} has length {} instead of {n}", r.len())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Multipliers proving that no `x` satisfies the constraints.
///
/// `row_multipliers` are sign-restricted like the dual (`>= 0` on `<=` rows,
/// `<= 0` on `>=` rows), `bound_multipliers >= 0` apply to finite upper
/// bounds, every nonnegative variable gets a nonnegative combined
/// coefficient and every free variable a zero one, yet the combined
/// right-hand side is negative.
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate {
    pub row_multipliers: Vec<Rational>,
    pub bound_multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal {
        primal: Vec<Rational>,
        objective: Rational,
        /// One multiplier per constraint row.
        duals: Vec<Rational>,
        /// One multiplier per variable; zero where there is no upper bound.
        bound_duals: Vec<Rational>,
    },
    Infeasible(FarkasCertificate),
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal { .. } => LpStatus::Optimal,
            LpSolution::Infeasible(_) => LpStatus::Infeasible,
            LpSolution::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn objective(&self) -> Option<&Rational> {
        match self {
            LpSolution::Optimal { objective, .. } => Some(objective),
            _ => None,
        }
    }

    pub fn primal(&self) -> Option<&[Rational]> {
        match self {
            LpSolution::Optimal { primal, .. } => Some(primal),
            _ => None,
        }
    }
}

/// Where each original variable lives among the standard-form columns.
struct ColumnMap {
    plus: Vec<usize>,
    minus: Vec<Option<usize>>,
}

struct Tableau {
    /// m rows of `ncols + 1` entries, the last being the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Structural columns come first, then one artificial per row.
    structural: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.structural + self.rows.len()
    }

    fn rhs(&self, k: usize) -> &Rational {
        &self.rows[k][self.width()]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut rc = cost[j].clone();
        for (k, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[k][j].is_zero() {
                rc -= &cost[b] * &self.rows[k][j];
            }
        }
        rc
    }

    /// Runs Bland's rule over columns `0..allowed`. Returns the entering
    /// column of an unbounded direction, if any.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Option<usize> {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let j = entering?;
            let mut leave: Option<(usize, Rational)> = None;
            for k in 0..self.rows.len() {
                let a = &self.rows[k][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(k) / a;
                let better = match &leave {
                    None => true,
                    Some((lk, lr)) => ratio < *lr || (ratio == *lr && self.basis[k] < self.basis[*lk]),
                };
                if better {
                    leave = Some((k, ratio));
                }
            }
            match leave {
                Some((k, _)) => self.pivot(k, j),
                None => return Some(j),
            }
        }
    }

    /// `c_B^T B^{-1}`, read from the artificial columns.
    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        let m = self.rows.len();
        (0..m)
            .map(|i| {
                let col = self.structural + i;
                let mut y = Rational::zero();
                for (k, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() {
                        y += &cost[b] * &self.rows[k][col];
                    }
                }
                y
            })
            .collect()
    }

    fn values(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.width()];
        for (k, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(k).clone();
        }
        x
    }
}

/// Solves `p` exactly. The returned certificate has already passed
/// [`check_certificate`]; a rejection is reported as
/// [`Error::CertificateFailure`].
pub fn solve(p: &LpProblem) -> Result<LpSolution> {
    let sol = solve_unchecked(p)?;
    check_certificate(p, &sol).map_err(Error::CertificateFailure)?;
    Ok(sol)
}

fn solve_unchecked(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let n = p.num_vars();

    // user rows followed by one `x_j <= u_j` row per finite upper bound
    let mut rows: Vec<Vec<Rational>> = p.rows.clone();
    let mut relations = p.relations.clone();
    let mut rhs = p.rhs.clone();
    let mut bound_row_var = Vec::new();
    for (j, u) in p.upper.iter().enumerate() {
        if let Some(u) = u {
            let mut r = vec![Rational::zero(); n];
            r[j] = Rational::one();
            rows.push(r);
            relations.push(Relation::Le);
            rhs.push(u.clone());
            bound_row_var.push(j);
        }
    }
    let m = rows.len();

    let mut next = 0;
    let mut map = ColumnMap { plus: Vec::with_capacity(n), minus: Vec::with_capacity(n) };
    for lb in &p.lower {
        map.plus.push(next);
        next += 1;
        if *lb == LowerBound::NegInfinity {
            map.minus.push(Some(next));
            next += 1;
        } else {
            map.minus.push(None);
        }
    }
    let mut slack_of_row = vec![None; m];
    for (i, rel) in relations.iter().enumerate() {
        if *rel != Relation::Eq {
            slack_of_row[i] = Some(next);
            next += 1;
        }
    }
    let structural = next;
    let width = structural + m;

    let mut sign = vec![Rational::one(); m];
    let mut tab_rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); width + 1];
        for j in 0..n {
            row[map.plus[j]] = rows[i][j].clone();
            if let Some(mc) = map.minus[j] {
                row[mc] = -rows[i][j].clone();
            }
        }
        if let Some(s) = slack_of_row[i] {
            row[s] = if relations[i] == Relation::Le { Rational::one() } else { -Rational::one() };
        }
        row[width] = rhs[i].clone();
        if rhs[i].is_negative() {
            sign[i] = -Rational::one();
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[structural + i] = Rational::one();
        tab_rows.push(row);
    }
    let mut t = Tableau { rows: tab_rows, basis: (structural..width).collect(), structural };

    // phase 1: maximize -sum(artificials)
    let mut cost1 = vec![Rational::zero(); width];
    for c in cost1.iter_mut().skip(structural) {
        *c = -Rational::one();
    }
    t.optimize(&cost1, width);
    let infeasibility: Rational = t.basis.iter().enumerate().map(|(k, &b)| &cost1[b] * t.rhs(k)).sum();

    let split = |y: &[Rational]| -> (Vec<Rational>, Vec<Rational>) {
        let ys: Vec<Rational> = y.iter().zip(&sign).map(|(a, s)| a * s).collect();
        let row_mult = ys[..p.rows.len()].to_vec();
        let mut bound_mult = vec![Rational::zero(); n];
        for (k, &j) in bound_row_var.iter().enumerate() {
            bound_mult[j] = ys[p.rows.len() + k].clone();
        }
        (row_mult, bound_mult)
    };

    if infeasibility.is_negative() {
        let (row_multipliers, bound_multipliers) = split(&t.duals(&cost1));
        return Ok(LpSolution::Infeasible(FarkasCertificate { row_multipliers, bound_multipliers }));
    }

    // drive zero-level artificials out of the basis where possible
    for k in 0..m {
        if t.basis[k] >= structural {
            if let Some(j) = (0..structural).find(|&j| !t.rows[k][j].is_zero()) {
                t.pivot(k, j);
            }
        }
    }

    let mut cost2 = vec![Rational::zero(); width];
    for j in 0..n {
        cost2[map.plus[j]] = p.objective[j].clone();
        if let Some(mc) = map.minus[j] {
            cost2[mc] = -p.objective[j].clone();
        }
    }

    let to_original = |z: &[Rational]| -> Vec<Rational> {
        (0..n)
            .map(|j| {
                let mut v = z[map.plus[j]].clone();
                if let Some(mc) = map.minus[j] {
                    v -= &z[mc];
                }
                v
            })
            .collect()
    };

    if let Some(j) = t.optimize(&cost2, structural) {
        let point = to_original(&t.values());
        let mut d = vec![Rational::zero(); width];
        d[j] = Rational::one();
        for (k, &b) in t.basis.iter().enumerate() {
            d[b] = -t.rows[k][j].clone();
        }
        return Ok(LpSolution::Unbounded { point, ray: to_original(&d) });
    }

    let primal = to_original(&t.values());
    let objective = dot(&p.objective, &primal);
    let (duals, bound_duals) = split(&t.duals(&cost2));
    Ok(LpSolution::Optimal { primal, objective, duals, bound_duals })
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn row_holds(lhs: &Rational, rel: Relation, rhs: &Rational) -> bool {
    match rel {
        Relation::Le => lhs <= rhs,
        Relation::Eq => lhs == rhs,
        Relation::Ge => lhs >= rhs,
    }
}

fn check_primal(p: &LpProblem, x: &[Rational]) -> core::result::Result<(), String> {
    if x.len() != p.num_vars() {
        return Err(format!("primal has length {} instead of {}", x.len(), p.num_vars()));
    }
    for (i, row) in p.rows.iter().enumerate() {
        let lhs = dot(row, x);
        if !row_holds(&lhs, p.relations[i], &p.rhs[i]) {
            return Err(format!("row {i} violated: {lhs} vs {}", p.rhs[i]));
        }
    }
    for (j, v) in x.iter().enumerate() {
        if p.lower[j] == LowerBound::Zero && v.is_negative() {
            return Err(format!("variable {j} negative"));
        }
        if let Some(u) = &p.upper[j] {
            if v > u {
                return Err(format!("variable {j} above its upper bound"));
            }
        }
    }
    Ok(())
}

/// Sign restrictions shared by dual solutions and Farkas vectors; returns
/// the combined column coefficients `A^T y + w`.
fn check_multipliers(p: &LpProblem, y: &[Rational], w: &[Rational]) -> core::result::Result<Vec<Rational>, String> {
    if y.len() != p.rows.len() || w.len() != p.num_vars() {
        return Err("multiplier vector has the wrong length".into());
    }
    for (i, yi) in y.iter().enumerate() {
        let ok = match p.relations[i] {
            Relation::Le => !yi.is_negative(),
            Relation::Ge => !yi.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return Err(format!("multiplier {i} has the wrong sign"));
        }
    }
    for (j, wj) in w.iter().enumerate() {
        if wj.is_negative() || (p.upper[j].is_none() && !wj.is_zero()) {
            return Err(format!("bound multiplier {j} invalid"));
        }
    }
    Ok((0..p.num_vars())
        .map(|j| {
            let mut g = w[j].clone();
            for (i, row) in p.rows.iter().enumerate() {
                g += &y[i] * &row[j];
            }
            g
        })
        .collect())
}

fn bound_value(p: &LpProblem, w: &[Rational]) -> Rational {
    p.upper
        .iter()
        .zip(w)
        .filter_map(|(u, wj)| u.as_ref().map(|u| u * wj))
        .sum()
}

/// Independent exact re-validation of a solver outcome.
pub fn check_certificate(p: &LpProblem, sol: &LpSolution) -> core::result::Result<(), String> {
    p.validate().map_err(|e| format!("{e}"))?;
    match sol {
        LpSolution::Optimal { primal, objective, duals, bound_duals } => {
            check_primal(p, primal)?;
            if dot(&p.objective, primal) != *objective {
                return Err("reported objective does not match the primal".into());
            }
            let g = check_multipliers(p, duals, bound_duals)?;
            for (j, gj) in g.iter().enumerate() {
                let ok = match p.lower[j] {
                    LowerBound::Zero => *gj >= p.objective[j],
                    LowerBound::NegInfinity => *gj == p.objective[j],
                };
                if !ok {
                    return Err(format!("dual constraint {j} violated"));
                }
            }
            let dual_obj = dot(duals, &p.rhs) + bound_value(p, bound_duals);
            if dual_obj != *objective {
                return Err(format!("duality gap: primal {objective}, dual {dual_obj}"));
            }
            Ok(())
        }
        LpSolution::Infeasible(cert) => {
            let g = check_multipliers(p, &cert.row_multipliers, &cert.bound_multipliers)?;
            for (j, gj) in g.iter().enumerate() {
                let ok = match p.lower[j] {
                    LowerBound::Zero => !gj.is_negative(),
                    LowerBound::NegInfinity => gj.is_zero(),
                };
                if !ok {
                    return Err(format!("Farkas column {j} has the wrong sign"));
                }
            }
            let value = dot(&cert.row_multipliers, &p.rhs) + bound_value(p, &cert.bound_multipliers);
            if !value.is_negative() {
                return Err("Farkas right-hand side is not negative".into());
            }
            Ok(())
        }
        LpSolution::Unbounded { point, ray } => {
            check_primal(p, point)?;
            if ray.len() != p.num_vars() {
                return Err("ray has the wrong length".into());
            }
            for (i, row) in p.rows.iter().enumerate() {
                if !row_holds(&dot(row, ray), p.relations[i], &Rational::zero()) {
                    return Err(format!("ray leaves row {i}"));
                }
            }
            for (j, r) in ray.iter().enumerate() {
                if p.lower[j] == LowerBound::Zero && r.is_negative() {
                    return Err(format!("ray decreases nonnegative variable {j}"));
                }
                if p.upper[j].is_some() && r.is_positive() {
                    return Err(format!("ray increases bounded variable {j}"));
                }
            }
            if !dot(&p.objective, ray).is_positive() {
                return Err("ray does not improve the objective".into());
            }
            Ok(())
        }
    }
}

//! Exact linear feasibility over an ordered field.
//!
//! Decides whether `{x : A_eq x = b_eq, A_ge x >= b_ge}` (free `x`) is
//! non-empty. The answer is always checkable: either a point satisfying
//! every constraint, or Farkas multipliers `y_eq` (any sign) and
//! `y_ge >= 0` with `y_eq A_eq + y_ge A_ge = 0` and
//! `y_eq b_eq + y_ge b_ge > 0`, i.e. a non-negative combination of the
//! constraints reading `0 >= positive`.
//!
//! The solver is a phase-one simplex on the split `x = x⁺ - x⁻` with
//! Bland's rule, so it terminates on degenerate input. At a phase-one
//! optimum with positive infeasibility the simplex multipliers are the
//! certificate.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `coeffs · x (= | >=) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    fn lhs(&self, x: &[T]) -> T {
        self.coeffs.iter().zip(x).map(|(a, xi)| a.clone() * xi.clone()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem<T> {
    vars: usize,
    equalities: Vec<Constraint<T>>,
    inequalities: Vec<Constraint<T>>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(vars: usize) -> Self {
        Self { vars, equalities: Vec::new(), inequalities: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn equalities(&self) -> &[Constraint<T>] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Constraint<T>] {
        &self.inequalities
    }

    fn checked(&self, coeffs: Vec<T>, rhs: T) -> Result<Constraint<T>> {
        if coeffs.len() != self.vars {
            return Err(Error::DimensionMismatch(format!(
                "constraint has {} coefficients, system has {} variables",
                coeffs.len(),
                self.vars
            )));
        }
        Ok(Constraint { coeffs, rhs })
    }

    /// Adds `coeffs · x = rhs`; returns its index among the equalities.
    pub fn add_equality(&mut self, coeffs: Vec<T>, rhs: T) -> Result<usize> {
        let c = self.checked(coeffs, rhs)?;
        self.equalities.push(c);
        Ok(self.equalities.len() - 1)
    }

    /// Adds `coeffs · x >= rhs`; returns its index among the inequalities.
    pub fn add_at_least(&mut self, coeffs: Vec<T>, rhs: T) -> Result<usize> {
        let c = self.checked(coeffs, rhs)?;
        self.inequalities.push(c);
        Ok(self.inequalities.len() - 1)
    }

    pub fn is_satisfied_by(&self, x: &[T]) -> bool {
        x.len() == self.vars
            && self.equalities.iter().all(|c| c.lhs(x) == c.rhs)
            && self.inequalities.iter().all(|c| c.lhs(x) >= c.rhs)
    }

    /// Subsystem keeping the listed constraints, in the given order.
    fn select(&self, eq: &[usize], ge: &[usize]) -> Self {
        Self {
            vars: self.vars,
            equalities: eq.iter().map(|&i| self.equalities[i].clone()).collect(),
            inequalities: ge.iter().map(|&i| self.inequalities[i].clone()).collect(),
        }
    }
}

/// Farkas multipliers proving infeasibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<T> {
    pub equality_weights: Vec<T>,
    pub inequality_weights: Vec<T>,
}

impl<T: Scalar> Certificate<T> {
    /// `Σ y b`: the right-hand side of the combined constraint `0 >= Σ y b`.
    pub fn combined_rhs(&self, system: &LinearSystem<T>) -> T {
        self.weighted(system).map(|(y, c)| y * c.rhs.clone()).sum()
    }

    /// Coefficients of the combined constraint; all zero for a valid certificate.
    pub fn combined_coeffs(&self, system: &LinearSystem<T>) -> Vec<T> {
        let mut out = vec![T::zero(); system.vars];
        for (y, c) in self.weighted(system) {
            for (o, a) in out.iter_mut().zip(&c.coeffs) {
                *o = o.clone() + y.clone() * a.clone();
            }
        }
        out
    }

    pub fn verify(&self, system: &LinearSystem<T>) -> bool {
        self.equality_weights.len() == system.equalities.len()
            && self.inequality_weights.len() == system.inequalities.len()
            && self.inequality_weights.iter().all(|y| !y.is_negative())
            && self.combined_coeffs(system).iter().all(Zero::is_zero)
            && self.combined_rhs(system).is_positive()
    }

    /// Indices of the equalities and inequalities with non-zero weight.
    pub fn support(&self) -> (Vec<usize>, Vec<usize>) {
        let nz = |w: &[T]| w.iter().enumerate().filter(|(_, y)| !y.is_zero()).map(|(i, _)| i).collect();
        (nz(&self.equality_weights), nz(&self.inequality_weights))
    }

    fn weighted<'a>(&'a self, system: &'a LinearSystem<T>) -> impl Iterator<Item = (T, &'a Constraint<T>)> + 'a {
        self.equality_weights
            .iter()
            .zip(&system.equalities)
            .chain(self.inequality_weights.iter().zip(&system.inequalities))
            .map(|(y, c)| (y.clone(), c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility<T> {
    Feasible(Vec<T>),
    Infeasible(Certificate<T>),
}

impl<T> Feasibility<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// How row `r` of the tableau was formed from its source constraint.
#[derive(Clone, Copy)]
struct RowOrigin {
    /// +1 or -1: the row is `sign * (source row)`.
    negated: bool,
    /// Column that formed the initial identity entry for this row.
    initial: usize,
    /// Whether `initial` is an artificial (cost 1) or a slack (cost 0).
    artificial: bool,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    reduced: Vec<T>,
    objective: T,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.rows[r][e].clone();
        if !p.is_one() {
            for a in self.rows[r].iter_mut() {
                if !a.is_zero() {
                    *a = a.clone() / p.clone();
                }
            }
            self.rhs[r] = self.rhs[r].clone() / p;
        }
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            eliminate(&mut self.rows[i], &pivot_row, &f);
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let f = self.reduced[e].clone();
        if !f.is_zero() {
            eliminate(&mut self.reduced, &pivot_row, &f);
            self.objective = self.objective.clone() + f * pivot_rhs;
        }
        self.basis[r] = e;
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving
    /// variable among ratio-test ties.
    fn minimize(&mut self) {
        while self.objective.is_positive() {
            let Some(e) = self.reduced.iter().position(|d| d.is_negative()) else {
                return;
            };
            let mut best: Option<(usize, T)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = self.rhs[r].clone() / row[e].clone();
                let better = match &best {
                    None => true,
                    Some((b, q)) => ratio < *q || (ratio == *q && self.basis[r] < self.basis[*b]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let (r, _) = best.expect("phase-one objective is bounded below");
            self.pivot(r, e);
        }
    }
}

fn eliminate<T: Scalar>(row: &mut [T], pivot_row: &[T], factor: &T) {
    for (a, p) in row.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *a = a.clone() - factor.clone() * p.clone();
        }
    }
}

/// Decides feasibility; every answer is verified before it is returned.
pub fn feasible<T: Scalar>(system: &LinearSystem<T>) -> Result<Feasibility<T>> {
    let n = system.vars;
    let sources: Vec<(&Constraint<T>, bool)> = system
        .equalities
        .iter()
        .map(|c| (c, true))
        .chain(system.inequalities.iter().map(|c| (c, false)))
        .collect();
    let m = sources.len();
    let slack_base = 2 * n;
    let slack_count = system.inequalities.len();
    let art_base = slack_base + slack_count;

    let mut origins = Vec::with_capacity(m);
    let mut artificials = 0;
    for (r, &(c, is_eq)) in sources.iter().enumerate() {
        let origin = if is_eq {
            let o = RowOrigin { negated: c.rhs.is_negative(), initial: art_base + artificials, artificial: true };
            artificials += 1;
            o
        } else if c.rhs.is_positive() {
            let o = RowOrigin { negated: false, initial: art_base + artificials, artificial: true };
            artificials += 1;
            o
        } else {
            let slack = slack_base + (r - system.equalities.len());
            RowOrigin { negated: true, initial: slack, artificial: false }
        };
        origins.push(origin);
    }
    let cols = art_base + artificials;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (r, &(c, is_eq)) in sources.iter().enumerate() {
        let o = origins[r];
        let sign = |v: T| if o.negated { -v } else { v };
        let mut row = vec![T::zero(); cols];
        for (j, a) in c.coeffs.iter().enumerate() {
            if !a.is_zero() {
                row[j] = sign(a.clone());
                row[n + j] = -row[j].clone();
            }
        }
        if !is_eq {
            row[slack_base + (r - system.equalities.len())] = sign(-T::one());
        }
        if o.artificial {
            row[o.initial] = T::one();
        }
        rows.push(row);
        rhs.push(sign(c.rhs.clone()));
    }

    let mut reduced = vec![T::zero(); cols];
    let mut objective = T::zero();
    for j in art_base..cols {
        reduced[j] = T::one();
    }
    for (r, o) in origins.iter().enumerate() {
        if o.artificial {
            eliminate(&mut reduced, &rows[r], &T::one());
            objective = objective + rhs[r].clone();
        }
    }
    let basis = origins.iter().map(|o| o.initial).collect();
    let mut tableau = Tableau { rows, rhs, basis, reduced, objective };
    tableau.minimize();

    if tableau.objective.is_zero() {
        let mut x = vec![T::zero(); n];
        for (r, &b) in tableau.basis.iter().enumerate() {
            if b < n {
                x[b] = x[b].clone() + tableau.rhs[r].clone();
            } else if b < 2 * n {
                x[b - n] = x[b - n].clone() - tableau.rhs[r].clone();
            }
        }
        if !system.is_satisfied_by(&x) {
            return Err(Error::Inconsistent("simplex witness violates a constraint".into()));
        }
        return Ok(Feasibility::Feasible(x));
    }

    // y_r = c_initial - reduced_initial; multiplier on the source row is sign * y_r.
    let weights: Vec<T> = origins
        .iter()
        .map(|o| {
            let cost = if o.artificial { T::one() } else { T::zero() };
            let y = cost - tableau.reduced[o.initial].clone();
            if o.negated {
                -y
            } else {
                y
            }
        })
        .collect();
    let (eq, ge) = weights.split_at(system.equalities.len());
    let certificate = Certificate { equality_weights: eq.to_vec(), inequality_weights: ge.to_vec() };
    if !certificate.verify(system) {
        return Err(Error::Inconsistent("simplex multipliers are not a Farkas certificate".into()));
    }
    Ok(Feasibility::Infeasible(certificate))
}

/// Shrinks a certificate to an irreducible infeasible subsystem: dropping
/// any constraint with non-zero weight in the result makes the remaining
/// system feasible.
pub fn minimal_conflict<T: Scalar>(system: &LinearSystem<T>, certificate: &Certificate<T>) -> Result<Certificate<T>> {
    let (mut eq, mut ge) = certificate.support();
    let mut current = certificate.clone();
    // Deletion filter over the support, equalities first.
    let candidates: Vec<(bool, usize)> =
        eq.iter().map(|&i| (true, i)).chain(ge.iter().map(|&i| (false, i))).collect();
    for (is_eq, idx) in candidates {
        let (trial_eq, trial_ge): (Vec<usize>, Vec<usize>) = if is_eq {
            (eq.iter().copied().filter(|&i| i != idx).collect(), ge.clone())
        } else {
            (eq.clone(), ge.iter().copied().filter(|&i| i != idx).collect())
        };
        if trial_eq.len() == eq.len() && trial_ge.len() == ge.len() {
            continue;
        }
        if let Feasibility::Infeasible(sub) = feasible(&system.select(&trial_eq, &trial_ge))? {
            let mut full = Certificate {
                equality_weights: vec![T::zero(); system.equalities.len()],
                inequality_weights: vec![T::zero(); system.inequalities.len()],
            };
            for (w, &i) in sub.equality_weights.iter().zip(&trial_eq) {
                full.equality_weights[i] = w.clone();
            }
            for (w, &i) in sub.inequality_weights.iter().zip(&trial_ge) {
                full.inequality_weights[i] = w.clone();
            }
            (eq, ge) = full.support();
            current = full;
        }
    }
    if !current.verify(system) {
        return Err(Error::Inconsistent("reduced certificate is invalid".into()));
    }
    Ok(current)
}

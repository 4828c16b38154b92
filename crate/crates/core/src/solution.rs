//! Fair and stable allocations: Shapley value, core, balancedness.

use crate::coalition::{all_coalitions, Coalition, PairCheck};
use crate::error::{Error, Result};
use crate::game::{Allocation, Backing, CoalitionalGame, Game, MCNet, RuleContext};
use crate::limits::{ensure_cap, ensure_within, SHAPLEY_ORACLE_MAX_AGENTS, VERTEX_ENUMERATION_MAX_AGENTS};
use crate::ratsolve::{self, Certificate, Feasibility, LinearSystem};
use crate::scalar::{factorial, Scalar};

/// Shapley value by the subset-sum formula
/// `Φ_i = Σ_{S ⊆ N\{i}} s!(n-s-1)!/n! · (v(S ∪ {i}) - v(S))`.
pub fn shapley_permutation<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<Allocation<T>> {
    let n = game.agents();
    ensure_within("subset-sum Shapley", n, SHAPLEY_ORACLE_MAX_AGENTS)?;
    if n == 0 {
        return Ok(Allocation(Vec::new()));
    }
    let v = game.tabulate()?;
    let total = factorial::<T>(n);
    let weights: Vec<T> =
        (0..n).map(|s| factorial::<T>(s) * factorial::<T>(n - s - 1) / total.clone()).collect();
    let payoffs = (0..n)
        .map(|i| {
            let bit = 1u64 << i;
            (0..1u64 << n)
                .filter(|s| s & bit == 0)
                .map(|s| {
                    let marginal = v[(s | bit) as usize].clone() - v[s as usize].clone();
                    weights[s.count_ones() as usize].clone() * marginal
                })
                .sum()
        })
        .collect();
    Ok(Allocation(payoffs))
}

/// Shapley value of an MC-Net as the sum of per-rule values: for a rule
/// `(P, N) -> v` with `p = |P|`, `m = |N|`, each positive agent gets
/// `v (p-1)! m! / (p+m)!` and each negative agent `-v p! (m-1)! / (p+m)!`.
/// Linear in the size of the net; no agent cap.
pub fn shapley_mcnet<T: Scalar>(net: &MCNet<T>) -> Result<Allocation<T>> {
    net.ensure_well_formed(RuleContext::Incentive)?;
    let mut payoffs = vec![T::zero(); net.universe().len()];
    for rule in net.rules() {
        if rule.value.is_zero() {
            continue;
        }
        let (p, m) = (rule.positive.len(), rule.negative.len());
        let whole = factorial::<T>(p + m);
        let gain = rule.value.clone() * factorial::<T>(p - 1) * factorial::<T>(m) / whole.clone();
        for i in rule.positive.members() {
            payoffs[i] = payoffs[i].clone() + gain.clone();
        }
        if m > 0 {
            let loss = rule.value.clone() * factorial::<T>(p) * factorial::<T>(m - 1) / whole;
            for j in rule.negative.members() {
                payoffs[j] = payoffs[j].clone() - loss.clone();
            }
        }
    }
    Ok(Allocation(payoffs))
}

/// Rule-wise route for net-backed games, subset sums otherwise.
pub fn shapley<T: Scalar>(game: &Game<T>) -> Result<Allocation<T>> {
    match game.backing() {
        Backing::Net(net) => shapley_mcnet(net),
        Backing::Table(_) => shapley_permutation(game),
    }
}

/// The first core constraint an allocation breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreViolation<T> {
    /// `x(N) != v(N)`.
    Efficiency { required: T, allocated: T },
    /// `x(S) < v(S)`.
    Rationality { coalition: Coalition, required: T, allocated: T },
}

/// `None` when `x` is in the core. Efficiency is reported before
/// rationality; among rationality violations the largest shortfall wins,
/// ties going to the canonically first coalition.
pub fn core_membership<T: Scalar, G: CoalitionalGame<T>>(
    game: &G,
    x: &Allocation<T>,
) -> Result<Option<CoreViolation<T>>> {
    let n = game.agents();
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    ensure_cap("core membership", n)?;
    let grand = Coalition::grand(n);
    let (required, allocated) = (game.worth(grand), x.total());
    if required != allocated {
        return Ok(Some(CoreViolation::Efficiency { required, allocated }));
    }
    let mut worst: Option<(T, CoreViolation<T>)> = None;
    for s in all_coalitions(n) {
        let (required, allocated) = (game.worth(s), x.coalition_total(s));
        if allocated >= required {
            continue;
        }
        let shortfall = required.clone() - allocated.clone();
        if worst.as_ref().map_or(true, |(w, _)| shortfall > *w) {
            worst = Some((shortfall, CoreViolation::Rationality { coalition: s, required, allocated }));
        }
    }
    Ok(worst.map(|(_, v)| v))
}

/// Weights `λ_S` with `Σ_{S ∋ i} λ_S = 1` for every agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedVector<T> {
    pub weights: Vec<(Coalition, T)>,
}

impl<T: Scalar> BalancedVector<T> {
    pub fn is_balanced_over(&self, n: usize) -> bool {
        self.weights.iter().all(|(s, w)| s.within(n) && !w.is_negative() && *w <= T::one())
            && (0..n).all(|i| {
                self.weights.iter().filter(|(s, _)| s.contains(i)).map(|(_, w)| w.clone()).sum::<T>()
                    == T::one()
            })
    }

    /// `Σ λ_S v(S)`.
    pub fn weighted_value<G: CoalitionalGame<T>>(&self, game: &G) -> T {
        self.weights.iter().map(|(s, w)| w.clone() * game.worth(*s)).sum()
    }
}

/// Why the core is empty: the efficiency row and coalition rows of the
/// core system combine (with the certificate's weights) into `0 >= gap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreConflict<T> {
    /// The core system; row 0 of the equalities is `x(N) = v(N)`, the
    /// inequalities follow `coalitions`.
    pub system: LinearSystem<T>,
    pub coalitions: Vec<Coalition>,
    /// Irreducible: removing any weighted row makes the rest feasible.
    pub certificate: Certificate<T>,
    /// Certificate scaled so the efficiency row has weight -1.
    pub balanced: BalancedVector<T>,
    /// `Σ λ_S v(S) - v(N) > 0`.
    pub gap: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreVerdict<T> {
    pub nonempty: bool,
    pub witness: Option<Allocation<T>>,
    pub conflict: Option<CoreConflict<T>>,
}

/// `x(N) = v(N)` plus `x(S) >= v(S)` for every non-empty proper `S`,
/// coalitions in canonical order.
pub fn core_system<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<(LinearSystem<T>, Vec<Coalition>)> {
    let n = game.agents();
    ensure_cap("core system", n)?;
    let grand = Coalition::grand(n);
    let indicator = |s: Coalition| (0..n).map(|i| if s.contains(i) { T::one() } else { T::zero() }).collect();
    let mut system = LinearSystem::new(n);
    system.add_equality(indicator(grand), game.worth(grand))?;
    let coalitions: Vec<Coalition> =
        all_coalitions(n).into_iter().filter(|s| !s.is_empty() && *s != grand).collect();
    for &s in &coalitions {
        system.add_at_least(indicator(s), game.worth(s))?;
    }
    Ok((system, coalitions))
}

/// Decides core non-emptiness by exact linear feasibility.
pub fn core_feasible<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<CoreVerdict<T>> {
    let (system, coalitions) = core_system(game)?;
    match ratsolve::feasible(&system)? {
        Feasibility::Feasible(x) => {
            let witness = Allocation(x);
            if core_membership(game, &witness)?.is_some() {
                return Err(Error::Inconsistent("core witness fails membership".into()));
            }
            Ok(CoreVerdict { nonempty: true, witness: Some(witness), conflict: None })
        }
        Feasibility::Infeasible(raw) => {
            let certificate = ratsolve::minimal_conflict(&system, &raw)?;
            let scale = -certificate.equality_weights[0].clone();
            if !scale.is_positive() {
                return Err(Error::Inconsistent("certificate does not use the efficiency row".into()));
            }
            let weights = certificate
                .inequality_weights
                .iter()
                .zip(&coalitions)
                .filter(|(w, _)| !w.is_zero())
                .map(|(w, &s)| (s, w.clone() / scale.clone()))
                .collect();
            let balanced = BalancedVector { weights };
            let gap = certificate.combined_rhs(&system) / scale;
            Ok(CoreVerdict {
                nonempty: false,
                witness: None,
                conflict: Some(CoreConflict { system, coalitions, certificate, balanced, gap }),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceVerdict<T> {
    pub balanced: bool,
    /// A balanced vector with `Σ λ_S v(S) > v(N)` when unbalanced.
    pub violating: Option<BalancedVector<T>>,
}

/// Balancedness through the primal core system; for small universes the
/// independent vertex enumeration must agree.
pub fn is_balanced<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<BalanceVerdict<T>> {
    let primal = core_feasible(game)?;
    if game.agents() <= VERTEX_ENUMERATION_MAX_AGENTS {
        let dual = balanced_by_vertex_enumeration(game)?;
        if dual.balanced != primal.nonempty {
            return Err(Error::Inconsistent(format!(
                "core feasibility says {} but balanced-vector enumeration says {}",
                primal.nonempty, dual.balanced
            )));
        }
        return Ok(dual);
    }
    Ok(BalanceVerdict { balanced: primal.nonempty, violating: primal.conflict.map(|c| c.balanced) })
}

/// Enumerates every vertex of `{λ >= 0 : Σ_{S ∋ i} λ_S = 1 ∀i}` and checks
/// `Σ λ_S v(S) <= v(N)` at each. Reports the vertex with the largest excess.
pub fn balanced_by_vertex_enumeration<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<BalanceVerdict<T>> {
    let n = game.agents();
    ensure_within("balanced-vector enumeration", n, VERTEX_ENUMERATION_MAX_AGENTS)?;
    if n == 0 {
        return Ok(BalanceVerdict { balanced: true, violating: None });
    }
    let grand_value = game.worth(Coalition::grand(n));
    let columns: Vec<Coalition> = all_coalitions(n).into_iter().filter(|s| !s.is_empty()).collect();
    let mut best: Option<(T, BalancedVector<T>)> = None;
    for basis in combinations(columns.len(), n) {
        let chosen: Vec<Coalition> = basis.iter().map(|&k| columns[k]).collect();
        let Some(lambda) = solve_membership_system::<T>(&chosen, n) else { continue };
        if lambda.iter().any(|l| l.is_negative()) {
            continue;
        }
        let vector = BalancedVector {
            weights: chosen.into_iter().zip(lambda).filter(|(_, l)| !l.is_zero()).collect(),
        };
        let excess = vector.weighted_value(game) - grand_value.clone();
        if excess.is_positive() && best.as_ref().map_or(true, |(b, _)| excess > *b) {
            best = Some((excess, vector));
        }
    }
    Ok(match best {
        None => BalanceVerdict { balanced: true, violating: None },
        Some((_, v)) => BalanceVerdict { balanced: false, violating: Some(v) },
    })
}

/// Solves `Σ_k λ_k 1_{S_k} = 1` for a square choice of coalitions, or
/// `None` when their membership vectors are dependent.
fn solve_membership_system<T: Scalar>(chosen: &[Coalition], n: usize) -> Option<Vec<T>> {
    let mut m: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row: Vec<T> =
                chosen.iter().map(|s| if s.contains(i) { T::one() } else { T::zero() }).collect();
            row.push(T::one());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for a in m[col].iter_mut() {
            *a = a.clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (a, b) in m[r].iter_mut().zip(pivot_row) {
                    *a = a.clone() - f.clone() * b;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// All `k`-subsets of `0..len` in lexicographic order.
fn combinations(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > len {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + len - k) else { break };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

/// `v(S) + v(T) <= v(S ∪ T) + v(S ∩ T)` for all pairs.
pub fn is_supermodular<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<PairCheck> {
    let n = game.agents();
    ensure_cap("supermodularity check", n)?;
    let v = game.tabulate()?;
    let order = all_coalitions(n);
    let at = |s: Coalition| v[s.bits() as usize].clone();
    for (a, &s) in order.iter().enumerate() {
        for &t in &order[a + 1..] {
            if at(s) + at(t) > at(s.union(t)) + at(s.intersection(t)) {
                return Ok(PairCheck::Violated { first: s, second: t });
            }
        }
    }
    Ok(PairCheck::Holds)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Implementability<T> {
    /// The core is non-empty.
    pub stable: bool,
    /// The Shapley allocation is in the core.
    pub fair_and_stable: bool,
    pub shapley: Allocation<T>,
    pub core: CoreVerdict<T>,
}

pub fn check_implementable<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<Implementability<T>> {
    let shapley = shapley_permutation(game)?;
    check_implementable_with(game, shapley)
}

/// As [`check_implementable`] with a Shapley allocation computed elsewhere
/// (e.g. rule-wise on an MC-Net).
pub fn check_implementable_with<T: Scalar, G: CoalitionalGame<T>>(
    game: &G,
    shapley: Allocation<T>,
) -> Result<Implementability<T>> {
    let core = core_feasible(game)?;
    let fair_and_stable = core_membership(game, &shapley)?.is_none();
    if fair_and_stable && !core.nonempty {
        return Err(Error::Inconsistent("Shapley point in an empty core".into()));
    }
    Ok(Implementability { stable: core.nonempty, fair_and_stable, shapley, core })
}

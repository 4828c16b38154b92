//! Compliance with a policy, collectible taxes and their Shapley-weighted
//! budget-balanced redistribution.

use crate::coalition::{Coalition, Universe};
use crate::error::{Error, Result};
use crate::game::{Allocation, CoalitionalGame};
use crate::policy::Policy;
use crate::regulation::CisnGame;
use crate::scalar::Scalar;
use crate::solution::shapley;

/// The networks actually implemented. Each agent is in at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceSet {
    universe: Universe,
    realized: Vec<Coalition>,
}

impl EvidenceSet {
    pub fn new(universe: Universe, realized: Vec<Coalition>) -> Result<Self> {
        for (k, &s) in realized.iter().enumerate() {
            universe.check(s)?;
            if s.is_empty() {
                return Err(Error::MalformedEvidence("empty coalition in evidence".into()));
            }
            if let Some(&t) = realized[..k].iter().find(|t| !t.is_disjoint(s)) {
                return Err(Error::MalformedEvidence(format!(
                    "realized coalitions {} and {} share agents",
                    universe.render(t),
                    universe.render(s)
                )));
            }
        }
        Ok(Self { universe, realized })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn realized(&self) -> &[Coalition] {
        &self.realized
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compliance {
    pub compliant: bool,
    /// Promoted but not realized.
    pub missing: Vec<Coalition>,
    /// Realized (two or more agents) but not promoted.
    pub extra: Vec<Coalition>,
}

/// Compliant iff the realized networks of two or more agents are exactly
/// the promoted coalitions.
pub fn compliance(evidence: &EvidenceSet, policy: &Policy) -> Result<Compliance> {
    if evidence.universe != *policy.universe() {
        return Err(Error::UniverseMismatch("evidence and policy differ in agents".into()));
    }
    let realized: Vec<Coalition> = evidence.realized.iter().copied().filter(|s| s.len() >= 2).collect();
    let mut missing: Vec<Coalition> =
        policy.promoted().iter().copied().filter(|s| !realized.contains(s)).collect();
    let mut extra: Vec<Coalition> = realized.into_iter().filter(|s| !policy.is_promoted(*s)).collect();
    missing.sort_unstable();
    extra.sort_unstable();
    Ok(Compliance { compliant: missing.is_empty() && extra.is_empty(), missing, extra })
}

/// `τ`: the taxes due on realized coalitions, `Σ max(0, -ι(S))`.
/// Subsidies on realized coalitions do not offset it.
pub fn collectible_tax<T: Scalar>(cisn: &CisnGame<T>, evidence: &EvidenceSet) -> Result<T> {
    if evidence.universe != *cisn.base().universe() {
        return Err(Error::UniverseMismatch("evidence and game differ in agents".into()));
    }
    evidence.realized.iter().try_fold(T::zero(), |acc, &s| {
        let incentive = cisn.incentives().incentive(s)?;
        Ok(if incentive.is_negative() { acc - incentive } else { acc })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedistributionResult<T> {
    /// `Ω_i`; zero outside the union of implemented promoted coalitions.
    pub omega: Allocation<T>,
    pub tau: T,
    /// Undistributed remainder; `Σ Ω + residual = τ`.
    pub residual: T,
    /// Realized coalitions that were promoted.
    pub implemented_promoted: Vec<Coalition>,
    /// Their union.
    pub union: Coalition,
    /// `v(union)` differs from the sum of the groups' own values, so
    /// cross-group synergies shape the weights.
    pub cross_group_synergy: bool,
}

/// Pays `Ω_i = τ · Φ_i / v(U)` to every member `i` of `U`, the union of
/// implemented promoted coalitions, where `Φ` is the Shapley value of the
/// base game restricted to `U`. With nothing to pay (no implemented
/// promoted coalition, or `v(U) = 0`) all of `τ` stays as residual.
pub fn redistribute<T: Scalar>(
    cisn: &CisnGame<T>,
    policy: &Policy,
    evidence: &EvidenceSet,
    tau: T,
) -> Result<RedistributionResult<T>> {
    let universe = cisn.base().universe();
    if universe != policy.universe() || *universe != evidence.universe {
        return Err(Error::UniverseMismatch("game, policy and evidence differ in agents".into()));
    }
    if tau.is_negative() {
        return Err(Error::NegativeTax);
    }
    let n = universe.len();
    let implemented_promoted: Vec<Coalition> =
        evidence.realized.iter().copied().filter(|s| policy.is_promoted(*s)).collect();
    let union = implemented_promoted.iter().fold(Coalition::EMPTY, |acc, s| acc.union(*s));
    let base = cisn.base();
    let union_value = base.worth(union);
    let groups_value: T = implemented_promoted.iter().map(|s| base.worth(*s)).sum();
    let cross_group_synergy = union_value != groups_value;

    let mut omega = Allocation::zeros(n);
    if !implemented_promoted.is_empty() && !union_value.is_zero() {
        let sub = base.restrict(union)?;
        let phi = shapley(&sub)?;
        for (pos, i) in union.members().enumerate() {
            omega.0[i] = tau.clone() * phi[pos].clone() / union_value.clone();
        }
    }
    let residual = tau.clone() - omega.total();
    Ok(RedistributionResult { omega, tau, residual, implemented_promoted, union, cross_group_synergy })
}

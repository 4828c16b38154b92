//! Incentive rule sets (taxes and subsidies) and coordinated games.

use crate::coalition::{all_coalitions, by_size_then_canonical, Coalition};
use crate::error::{Error, Result};
use crate::game::{Backing, CoalitionalGame, Game, MCNet, Restricted, Rule, RuleContext};
use crate::limits::ensure_cap;
use crate::policy::{Label, Policy};
use crate::scalar::Scalar;
use crate::solution::{check_implementable, core_feasible, Implementability};

/// An MC-Net of incentives: negative rule values are taxes, positive ones
/// subsidies. Zero-valued rules are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncentiveRuleSet<T> {
    net: MCNet<T>,
}

impl<T: Scalar> IncentiveRuleSet<T> {
    pub fn new(net: MCNet<T>) -> Result<Self> {
        net.ensure_well_formed(RuleContext::Incentive)?;
        Ok(Self { net })
    }

    pub fn empty(universe: crate::coalition::Universe) -> Self {
        Self { net: MCNet::new(universe, Vec::new()) }
    }

    pub fn net(&self) -> &MCNet<T> {
        &self.net
    }

    pub fn rules(&self) -> &[Rule<T>] {
        self.net.rules()
    }

    /// `ι(S)`.
    pub fn incentive(&self, s: Coalition) -> Result<T> {
        self.net.value(s)
    }

    /// Same evaluation, zero-valued rules dropped.
    pub fn without_zero_rules(&self) -> Self {
        let rules = self.net.rules().iter().filter(|r| !r.value.is_zero()).cloned().collect();
        Self { net: MCNet::new(self.net.universe().clone(), rules) }
    }
}

/// Taxes away every rule that does not fire on the grand coalition:
/// rule `i` becomes `(P_i, N_i) -> 0` if it applies to `N`, otherwise
/// `(P_i, N_i) -> -v_i`. Rule order is preserved.
pub fn generate_regulation<T: Scalar>(game: &MCNet<T>) -> Result<IncentiveRuleSet<T>> {
    game.ensure_well_formed(RuleContext::Basic)?;
    let grand = Coalition::grand(game.universe().len());
    let rules = game
        .rules()
        .iter()
        .map(|r| {
            let value = if r.applies_to(grand) { T::zero() } else { -r.value.clone() };
            Rule::new(r.positive, r.negative, value)
        })
        .collect();
    Ok(IncentiveRuleSet { net: MCNet::new(game.universe().clone(), rules) })
}

/// Regulation enforcing a whole policy: a tax `(S, N \ S) -> -v(S)` on
/// every non-promoted coalition of two or more agents with `v(S) != 0`,
/// nothing on promoted coalitions. Each tax fires on exactly its own
/// coalition, so the composed game keeps `v` on promoted coalitions and is
/// zero on every other coalition of size two or more.
pub fn generate_policy_regulation<T: Scalar, G: CoalitionalGame<T>>(
    game: &G,
    policy: &Policy,
) -> Result<IncentiveRuleSet<T>> {
    let n = policy.universe().len();
    if game.agents() != n {
        return Err(Error::UniverseMismatch(format!(
            "game has {} agents, policy has {}",
            game.agents(),
            n
        )));
    }
    policy.ensure_exclusive()?;
    ensure_cap("policy regulation", n)?;
    let grand = Coalition::grand(n);
    let mut taxed: Vec<Coalition> = all_coalitions(n)
        .into_iter()
        .filter(|&s| s.len() >= 2 && !policy.is_promoted(s))
        .collect();
    taxed.sort_by(by_size_then_canonical);
    let rules = taxed
        .into_iter()
        .filter_map(|s| {
            let v = game.worth(s);
            (!v.is_zero()).then(|| Rule::new(s, grand.difference(s), -v))
        })
        .collect();
    Ok(IncentiveRuleSet { net: MCNet::new(policy.universe().clone(), rules) })
}

/// A base game plus incentives: `c(S) = v(S) + ι(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CisnGame<T> {
    base: Game<T>,
    incentives: IncentiveRuleSet<T>,
}

pub fn compose<T: Scalar>(base: Game<T>, incentives: IncentiveRuleSet<T>) -> Result<CisnGame<T>> {
    if base.universe() != incentives.net.universe() {
        return Err(Error::UniverseMismatch("base game and incentives differ in agents".into()));
    }
    Ok(CisnGame { base, incentives })
}

impl<T: Scalar> CisnGame<T> {
    pub fn base(&self) -> &Game<T> {
        &self.base
    }

    pub fn incentives(&self) -> &IncentiveRuleSet<T> {
        &self.incentives
    }

    pub fn value(&self, s: Coalition) -> Result<T> {
        self.base.universe().check(s)?;
        Ok(self.worth(s))
    }

    /// The composed game as a single net when the base is net-backed.
    pub fn as_net(&self) -> Option<MCNet<T>> {
        match self.base.backing() {
            Backing::Net(net) => net.concat(&self.incentives.net).ok(),
            Backing::Table(_) => None,
        }
    }
}

impl<T: Scalar> CoalitionalGame<T> for CisnGame<T> {
    fn agents(&self) -> usize {
        self.base.universe().len()
    }

    fn worth(&self, s: Coalition) -> T {
        self.base.worth(s) + self.incentives.net.worth(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromotedOutcome<T> {
    pub coalition: Coalition,
    pub composed_value: T,
    /// Of the composed game restricted to the coalition's members.
    pub implementability: Implementability<T>,
    /// Fair and stable with a strictly positive composed value.
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProhibitedOutcome<T> {
    pub coalition: Coalition,
    pub composed_value: T,
    /// Core non-emptiness of the restricted composed game.
    pub core_nonempty: bool,
    /// No strictly positive gain over staying apart: `c(S) <= 0`.
    pub unimplementable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnforcementReport<T> {
    pub promoted: Vec<PromotedOutcome<T>>,
    pub prohibited: Vec<ProhibitedOutcome<T>>,
    pub ok: bool,
}

/// Checks that every promoted coalition is implementable (fair, stable,
/// strictly profitable) on its own members, and that every coalition of
/// two or more agents labelled prohibited gains nothing.
pub fn verify_enforcement<T: Scalar>(cisn: &CisnGame<T>, policy: &Policy) -> Result<EnforcementReport<T>> {
    if cisn.base.universe() != policy.universe() {
        return Err(Error::UniverseMismatch("game and policy differ in agents".into()));
    }
    policy.ensure_exclusive()?;
    let n = cisn.agents();
    ensure_cap("enforcement check", n)?;

    let mut promoted = Vec::with_capacity(policy.promoted().len());
    for &s in policy.promoted() {
        let composed_value = cisn.worth(s);
        let implementability = check_implementable(&Restricted::new(cisn, s))?;
        let ok = implementability.stable && implementability.fair_and_stable && composed_value.is_positive();
        promoted.push(PromotedOutcome { coalition: s, composed_value, implementability, ok });
    }

    let mut prohibited = Vec::new();
    for s in all_coalitions(n) {
        if s.len() < 2 || policy.label(s)? != Label::Prohibited {
            continue;
        }
        let composed_value = cisn.worth(s);
        let core_nonempty = core_feasible(&Restricted::new(cisn, s))?.nonempty;
        let unimplementable = !composed_value.is_positive();
        prohibited.push(ProhibitedOutcome { coalition: s, composed_value, core_nonempty, unimplementable });
    }

    let ok = promoted.iter().all(|p| p.ok) && prohibited.iter().all(|p| p.unimplementable);
    Ok(EnforcementReport { promoted, prohibited, ok })
}

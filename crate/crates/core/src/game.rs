//! MC-Net rules, characteristic-function games and allocations.

use std::fmt;
use std::ops::Index;

use crate::coalition::{Coalition, Universe};
use crate::error::{Error, Result};
use crate::limits::ensure_cap;
use crate::scalar::Scalar;

/// Anything that assigns a value to every coalition of a fixed universe.
///
/// `worth` assumes its argument lies inside the universe; the checked entry
/// points ([`Game::value`], [`MCNet::applicable_rules`]) validate first.
pub trait CoalitionalGame<T: Scalar> {
    fn agents(&self) -> usize;

    fn worth(&self, s: Coalition) -> T;

    fn grand(&self) -> Coalition {
        Coalition::grand(self.agents())
    }

    /// Dense value table indexed by membership bits.
    fn tabulate(&self) -> Result<Vec<T>> {
        ensure_cap("tabulating a game", self.agents())?;
        Ok((0..1u64 << self.agents()).map(|b| self.worth(Coalition::from_bits(b))).collect())
    }
}

impl<T: Scalar, G: CoalitionalGame<T> + ?Sized> CoalitionalGame<T> for &G {
    fn agents(&self) -> usize {
        (**self).agents()
    }

    fn worth(&self, s: Coalition) -> T {
        (**self).worth(s)
    }
}

/// A dense table viewed as a game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table<T> {
    agents: usize,
    values: Vec<T>,
}

impl<T: Scalar> Table<T> {
    pub fn new(agents: usize, values: Vec<T>) -> Self {
        assert_eq!(values.len(), 1 << agents);
        Self { agents, values }
    }

    pub fn from_game<G: CoalitionalGame<T>>(game: &G) -> Result<Self> {
        Ok(Self { agents: game.agents(), values: game.tabulate()? })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

impl<T: Scalar> CoalitionalGame<T> for Table<T> {
    fn agents(&self) -> usize {
        self.agents
    }

    fn worth(&self, s: Coalition) -> T {
        self.values[s.bits() as usize].clone()
    }

    fn tabulate(&self) -> Result<Vec<T>> {
        Ok(self.values.clone())
    }
}

/// `(positive, negative) -> value`: contributes `value` to every coalition
/// containing all of `positive` and none of `negative`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule<T> {
    pub positive: Coalition,
    pub negative: Coalition,
    pub value: T,
}

impl<T: Scalar> Rule<T> {
    pub fn new(positive: Coalition, negative: Coalition, value: T) -> Self {
        Self { positive, negative, value }
    }

    pub fn applies_to(&self, s: Coalition) -> bool {
        self.positive.is_subset_of(s) && self.negative.is_disjoint(s)
    }
}

/// Which rule invariants apply: basic MC-Nets forbid zero-valued rules,
/// incentive nets allow them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleContext {
    Basic,
    Incentive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleViolation {
    EmptyPositive,
    /// Agents listed in both patterns.
    Overlap(Coalition),
    /// Agents missing from the universe.
    OutsideUniverse(Coalition),
    ZeroValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: usize,
    pub kind: RuleViolation,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RuleViolation::EmptyPositive => write!(f, "rule {}: positive pattern is empty", self.rule),
            RuleViolation::Overlap(s) => {
                write!(f, "rule {}: agents {:?} are in both patterns", self.rule, s)
            }
            RuleViolation::OutsideUniverse(s) => {
                write!(f, "rule {}: agents {:?} are outside the universe", self.rule, s)
            }
            RuleViolation::ZeroValue => write!(f, "rule {}: value is zero", self.rule),
        }
    }
}

/// Outcome of [`MCNet::validate`]; empty iff the net is well formed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            let msgs: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
            Err(Error::MalformedNet(msgs.join("; ")))
        }
    }
}

/// A basic marginal contribution net over a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCNet<T> {
    universe: Universe,
    rules: Vec<Rule<T>>,
}

impl<T: Scalar> MCNet<T> {
    /// Builds a net without checking rule invariants; see [`validate`](Self::validate).
    pub fn new(universe: Universe, rules: Vec<Rule<T>>) -> Self {
        Self { universe, rules }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn rules(&self) -> &[Rule<T>] {
        &self.rules
    }

    pub fn into_rules(self) -> Vec<Rule<T>> {
        self.rules
    }

    pub fn validate(&self, context: RuleContext) -> ValidationReport {
        let n = self.universe.len();
        let mut violations = Vec::new();
        for (rule, r) in self.rules.iter().enumerate() {
            let mut push = |kind| violations.push(Violation { rule, kind });
            if r.positive.is_empty() {
                push(RuleViolation::EmptyPositive);
            }
            let overlap = r.positive.intersection(r.negative);
            if !overlap.is_empty() {
                push(RuleViolation::Overlap(overlap));
            }
            let outside = r.positive.union(r.negative).difference(Coalition::grand(n));
            if !outside.is_empty() {
                push(RuleViolation::OutsideUniverse(outside));
            }
            if context == RuleContext::Basic && r.value.is_zero() {
                push(RuleViolation::ZeroValue);
            }
        }
        ValidationReport { violations }
    }

    pub(crate) fn ensure_well_formed(&self, context: RuleContext) -> Result<()> {
        self.validate(context).into_result()
    }

    /// Indices of the rules applicable to `s`, ascending.
    pub fn applicable_rules(&self, s: Coalition) -> Result<Vec<usize>> {
        self.universe.check(s)?;
        Ok(self
            .rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.applies_to(s))
            .map(|(i, _)| i)
            .collect())
    }

    pub fn value(&self, s: Coalition) -> Result<T> {
        self.universe.check(s)?;
        Ok(self.worth(s))
    }

    /// The net induced on the members of `host`, re-indexed to the
    /// sub-universe. Rules whose positive pattern leaves `host` can never
    /// fire there and are dropped.
    pub fn restrict(&self, host: Coalition) -> Result<MCNet<T>> {
        self.universe.check(host)?;
        let rules = self
            .rules
            .iter()
            .filter(|r| r.positive.is_subset_of(host))
            .map(|r| {
                Rule::new(host.project(r.positive), host.project(r.negative.intersection(host)), r.value.clone())
            })
            .collect();
        Ok(MCNet::new(self.universe.restrict(host), rules))
    }

    /// Rule-wise concatenation over a shared universe.
    pub fn concat(&self, other: &MCNet<T>) -> Result<MCNet<T>> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch("nets are over different universes".into()));
        }
        let rules = self.rules.iter().chain(other.rules.iter()).cloned().collect();
        Ok(MCNet::new(self.universe.clone(), rules))
    }
}

impl<T: Scalar> CoalitionalGame<T> for MCNet<T> {
    fn agents(&self) -> usize {
        self.universe.len()
    }

    fn worth(&self, s: Coalition) -> T {
        self.rules.iter().filter(|r| r.applies_to(s)).map(|r| r.value.clone()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backing<T> {
    /// Dense table indexed by membership bits.
    Table(Vec<T>),
    Net(MCNet<T>),
}

/// A transferable-utility game `(N, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game<T> {
    universe: Universe,
    backing: Backing<T>,
}

impl<T: Scalar> Game<T> {
    /// Table-backed game from sparse entries.
    ///
    /// Coalitions of size 0 or 1 default to 0; every larger coalition must
    /// be listed exactly once.
    pub fn from_table<I>(universe: Universe, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coalition, T)>,
    {
        let n = universe.len();
        ensure_cap("a table-backed game", n)?;
        let mut values: Vec<Option<T>> = vec![None; 1 << n];
        for (s, v) in entries {
            universe.check(s)?;
            let slot = &mut values[s.bits() as usize];
            if slot.is_some() {
                return Err(Error::DuplicateEntry(s));
            }
            *slot = Some(v);
        }
        if values[0].as_ref().is_some_and(|v| !v.is_zero()) {
            return Err(Error::NonZeroEmpty);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(bits, v)| {
                let s = Coalition::from_bits(bits as u64);
                match v {
                    Some(v) => Ok(v),
                    None if s.len() <= 1 => Ok(T::zero()),
                    None => Err(Error::MissingEntry(s)),
                }
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(Self { universe, backing: Backing::Table(values) })
    }

    /// Table-backed game from a value function; `f(∅)` is forced to 0.
    pub fn tabulate_with<F: FnMut(Coalition) -> T>(universe: Universe, mut f: F) -> Result<Self> {
        let n = universe.len();
        ensure_cap("a table-backed game", n)?;
        let values = (0..1u64 << n)
            .map(|b| if b == 0 { T::zero() } else { f(Coalition::from_bits(b)) })
            .collect();
        Ok(Self { universe, backing: Backing::Table(values) })
    }

    pub fn from_net(net: MCNet<T>) -> Self {
        Self { universe: net.universe.clone(), backing: Backing::Net(net) }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn backing(&self) -> &Backing<T> {
        &self.backing
    }

    pub fn as_net(&self) -> Option<&MCNet<T>> {
        match &self.backing {
            Backing::Net(net) => Some(net),
            Backing::Table(_) => None,
        }
    }

    pub fn value(&self, s: Coalition) -> Result<T> {
        self.universe.check(s)?;
        Ok(self.worth(s))
    }

    /// The sub-game on the members of `host`, re-indexed from 0.
    pub fn restrict(&self, host: Coalition) -> Result<Game<T>> {
        self.universe.check(host)?;
        match &self.backing {
            Backing::Net(net) => Ok(Game::from_net(net.restrict(host)?)),
            Backing::Table(_) => {
                Game::tabulate_with(self.universe.restrict(host), |sub| self.worth(host.lift(sub)))
            }
        }
    }
}

impl<T: Scalar> CoalitionalGame<T> for Game<T> {
    fn agents(&self) -> usize {
        self.universe.len()
    }

    fn worth(&self, s: Coalition) -> T {
        match &self.backing {
            Backing::Table(values) => values[s.bits() as usize].clone(),
            Backing::Net(net) => net.worth(s),
        }
    }

    fn tabulate(&self) -> Result<Vec<T>> {
        match &self.backing {
            Backing::Table(values) => Ok(values.clone()),
            Backing::Net(net) => net.tabulate(),
        }
    }
}

/// A game viewed on the members of `host` (re-indexed from 0) without copying.
pub struct Restricted<G> {
    parent: G,
    host: Coalition,
}

impl<G> Restricted<G> {
    pub fn new(parent: G, host: Coalition) -> Self {
        Self { parent, host }
    }

    pub fn host(&self) -> Coalition {
        self.host
    }
}

impl<T: Scalar, G: CoalitionalGame<T>> CoalitionalGame<T> for Restricted<G> {
    fn agents(&self) -> usize {
        self.host.len()
    }

    fn worth(&self, s: Coalition) -> T {
        self.parent.worth(self.host.lift(s))
    }
}

/// Payoff vector indexed by agent id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Allocation<T>(pub Vec<T>);

impl<T: Scalar> Allocation<T> {
    pub fn zeros(n: usize) -> Self {
        Self(vec![T::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn payoffs(&self) -> &[T] {
        &self.0
    }

    pub fn total(&self) -> T {
        self.0.iter().cloned().sum()
    }

    /// `x(S)`: the total paid to the members of `s`.
    pub fn coalition_total(&self, s: Coalition) -> T {
        s.members().map(|i| self.0[i].clone()).sum()
    }
}

impl<T> Index<usize> for Allocation<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: fmt::Display> fmt::Display for Allocation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

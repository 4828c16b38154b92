//! Agent universes and coalitions.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Hard upper bound on the number of agents in any universe.
pub const MAX_UNIVERSE: usize = 64;

/// Dense index of an agent within its universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An ordered list of uniquely named agents; position is the [`AgentId`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    names: Vec<String>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge { agents: names.len(), limit: MAX_UNIVERSE });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateAgent(name.clone()));
            }
        }
        Ok(Self { names })
    }

    /// Universe with agents named `a0 .. a{n-1}`.
    pub fn indexed(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("a{i}"))).expect("indexed universe within bounds")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: AgentId) -> &str {
        &self.names[id.0]
    }

    pub fn id_of(&self, name: &str) -> Option<AgentId> {
        self.names.iter().position(|n| n == name).map(AgentId)
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.len())
    }

    /// Coalition of the named agents.
    pub fn coalition<S: AsRef<str>>(&self, names: &[S]) -> Result<Coalition> {
        names.iter().try_fold(Coalition::EMPTY, |acc, name| {
            let name = name.as_ref();
            let id = self.id_of(name).ok_or_else(|| Error::UnknownAgent(name.to_string()))?;
            Ok(acc.with(id.0))
        })
    }

    /// Member names in ascending id order.
    pub fn member_names(&self, s: Coalition) -> Vec<&str> {
        s.members().map(|i| self.names[i].as_str()).collect()
    }

    /// `{i,j}` style rendering.
    pub fn render(&self, s: Coalition) -> String {
        format!("{{{}}}", self.member_names(s).join(","))
    }

    pub fn contains(&self, s: Coalition) -> bool {
        s.within(self.len())
    }

    pub fn check(&self, s: Coalition) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::InvalidCoalition { bits: s.bits(), agents: self.len() })
        }
    }

    /// Sub-universe holding the members of `s`, in ascending id order.
    pub fn restrict(&self, s: Coalition) -> Universe {
        Universe { names: s.members().map(|i| self.names[i].clone()).collect() }
    }
}

/// A set of agents stored as a membership bit vector (bit `i` is agent `i`).
///
/// `Ord` is the canonical order used for every deterministic report: the
/// membership vectors `(1_S)_0, (1_S)_1, ...` compared lexicographically
/// with 1 before 0. For three agents this reads
/// `{0,1,2} < {0,1} < {0,2} < {0} < {1,2} < {1} < {2} < {}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn grand(n: usize) -> Self {
        assert!(n <= MAX_UNIVERSE);
        if n == 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Coalition(1 << i)
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        members.into_iter().fold(Self::EMPTY, Self::with)
    }

    pub fn with(self, i: usize) -> Self {
        Coalition(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        Coalition(self.0 & !(1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Coalition(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Coalition(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Whether every member has an id below `n`.
    pub fn within(self, n: usize) -> bool {
        n >= 64 || self.0 >> n == 0
    }

    /// Member ids in ascending order.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    /// Maps a coalition of a sub-universe (indexed by position within
    /// `self`) back to parent ids.
    pub fn lift(self, sub: Coalition) -> Coalition {
        self.members()
            .enumerate()
            .filter(|&(pos, _)| sub.contains(pos))
            .fold(Coalition::EMPTY, |acc, (_, id)| acc.with(id))
    }

    /// Inverse of [`lift`](Self::lift) for coalitions contained in `self`.
    pub fn project(self, s: Coalition) -> Coalition {
        self.members()
            .enumerate()
            .filter(|&(_, id)| s.contains(id))
            .fold(Coalition::EMPTY, |acc, (pos, _)| acc.with(pos))
    }

    fn canonical_key(self) -> u64 {
        self.0.reverse_bits()
    }
}

impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.canonical_key().cmp(&self.canonical_key())
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Every coalition of an `n`-agent universe in canonical order.
pub fn all_coalitions(n: usize) -> Vec<Coalition> {
    assert!(n < 64, "2^n enumeration needs n < 64");
    let mut out: Vec<Coalition> = (0..1u64 << n).map(Coalition).collect();
    out.sort_unstable();
    out
}

/// Every subset of `s` in canonical order.
pub fn subsets_of(s: Coalition) -> Vec<Coalition> {
    let mut out = Vec::with_capacity(1 << s.len());
    let mut sub = s.0;
    loop {
        out.push(Coalition(sub));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & s.0;
    }
    out.sort_unstable();
    out
}

/// Outcome of a check over pairs of coalitions: either it holds, or the
/// first violating pair in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCheck {
    Holds,
    Violated { first: Coalition, second: Coalition },
}

impl PairCheck {
    pub fn holds(self) -> bool {
        matches!(self, PairCheck::Holds)
    }

    pub fn witness(self) -> Option<(Coalition, Coalition)> {
        match self {
            PairCheck::Holds => None,
            PairCheck::Violated { first, second } => Some((first, second)),
        }
    }
}

/// Order by size, then canonically; the order rule lists are emitted in.
pub fn by_size_then_canonical(a: &Coalition, b: &Coalition) -> Ordering {
    a.len().cmp(&b.len()).then(a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_for_three_agents() {
        let order: Vec<Vec<usize>> =
            all_coalitions(3).into_iter().map(|s| s.members().collect()).collect();
        assert_eq!(
            order,
            vec![
                vec![0, 1, 2],
                vec![0, 1],
                vec![0, 2],
                vec![0],
                vec![1, 2],
                vec![1],
                vec![2],
                vec![],
            ]
        );
    }

    #[test]
    fn lift_and_project_are_inverse() {
        let host = Coalition::from_members([1, 3, 4]);
        for sub in all_coalitions(3) {
            let lifted = host.lift(sub);
            assert!(lifted.is_subset_of(host));
            assert_eq!(host.project(lifted), sub);
        }
        assert_eq!(host.lift(Coalition::from_members([0, 2])), Coalition::from_members([1, 4]));
    }

    #[test]
    fn subsets_enumeration() {
        let s = Coalition::from_members([0, 2, 5]);
        let subs = subsets_of(s);
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset_of(s)));
        assert_eq!(subs[0], s);
        assert_eq!(*subs.last().unwrap(), Coalition::EMPTY);
    }

    #[test]
    fn universe_lookup_and_errors() {
        let u = Universe::new(["i", "j", "k"]).unwrap();
        let ik = u.coalition(&["k", "i"]).unwrap();
        assert_eq!(ik, Coalition::from_members([0, 2]));
        assert_eq!(u.render(ik), "{i,k}");
        assert!(matches!(u.coalition(&["z"]), Err(Error::UnknownAgent(_))));
        assert!(matches!(Universe::new(["a", "a"]), Err(Error::DuplicateAgent(_))));
        assert!(u.check(Coalition::singleton(7)).is_err());
        assert!(u.check(ik).is_ok());
    }
}

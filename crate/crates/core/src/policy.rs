//! Socio-economic policies: game-independent labels on coalitions.

use std::fmt;

use crate::coalition::{Coalition, PairCheck, Universe};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Promoted,
    Permitted,
    Prohibited,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Promoted => "promoted",
            Label::Permitted => "permitted",
            Label::Prohibited => "prohibited",
        })
    }
}

/// Explicit promoted and prohibited lists plus a default for everything else.
///
/// Unlisted coalitions of fewer than two agents are always permitted: no
/// network forms among them, whatever the default says.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    universe: Universe,
    promoted: Vec<Coalition>,
    prohibited: Vec<Coalition>,
    default: Label,
}

impl Policy {
    pub fn new(
        universe: Universe,
        promoted: Vec<Coalition>,
        prohibited: Vec<Coalition>,
        default: Label,
    ) -> Result<Self> {
        for &s in promoted.iter().chain(&prohibited) {
            universe.check(s)?;
        }
        if let Some(&s) = promoted.iter().find(|s| prohibited.contains(s)) {
            return Err(Error::ConflictingLabels(s));
        }
        let dedup = |mut v: Vec<Coalition>| {
            let mut seen = Vec::with_capacity(v.len());
            v.retain(|s| {
                let fresh = !seen.contains(s);
                seen.push(*s);
                fresh
            });
            v
        };
        Ok(Self { universe, promoted: dedup(promoted), prohibited: dedup(prohibited), default })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// `P⁺` in listed order.
    pub fn promoted(&self) -> &[Coalition] {
        &self.promoted
    }

    pub fn prohibited(&self) -> &[Coalition] {
        &self.prohibited
    }

    pub fn default_label(&self) -> Label {
        self.default
    }

    pub fn label(&self, s: Coalition) -> Result<Label> {
        self.universe.check(s)?;
        Ok(if self.promoted.contains(&s) {
            Label::Promoted
        } else if self.prohibited.contains(&s) {
            Label::Prohibited
        } else if s.len() <= 1 {
            Label::Permitted
        } else {
            self.default
        })
    }

    pub fn is_promoted(&self, s: Coalition) -> bool {
        self.promoted.contains(&s)
    }

    /// Pairwise disjointness of the promoted coalitions.
    pub fn check_mutual_exclusivity(&self) -> PairCheck {
        for (a, &first) in self.promoted.iter().enumerate() {
            if let Some(&second) = self.promoted[a + 1..].iter().find(|t| !first.is_disjoint(**t)) {
                return PairCheck::Violated { first, second };
            }
        }
        PairCheck::Holds
    }

    /// No promoted coalition strictly contains another; the witness is
    /// `(smaller, larger)`.
    pub fn check_minimality(&self) -> PairCheck {
        for &larger in &self.promoted {
            if let Some(&smaller) = self.promoted.iter().find(|s| **s != larger && s.is_subset_of(larger)) {
                return PairCheck::Violated { first: smaller, second: larger };
            }
        }
        PairCheck::Holds
    }

    pub(crate) fn ensure_exclusive(&self) -> Result<()> {
        match self.check_mutual_exclusivity() {
            PairCheck::Holds => Ok(()),
            PairCheck::Violated { first, second } => Err(Error::NotExclusive { first, second }),
        }
    }
}

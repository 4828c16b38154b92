//! Exact cooperative-game engine for industrial symbiotic networks.
//!
//! Games are MC-Nets or explicit tables over a named universe of agents.
//! Everything is generic over a [`Scalar`] (an exact rational type); the
//! aliases at the bottom fix it to arbitrary-precision rationals.

pub mod coalition;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod isn;
pub mod limits;
pub mod policy;
pub mod ratsolve;
pub mod redistribution;
pub mod regulation;
pub mod scalar;
pub mod scenarios;
pub mod solution;

pub use coalition::{all_coalitions, subsets_of, AgentId, Coalition, PairCheck, Universe};
pub use error::{Error, Result};
pub use game::{
    Allocation, Backing, CoalitionalGame, Game, MCNet, Restricted, Rule, RuleContext, Table, ValidationReport,
};
pub use isn::{build_isn_game, check_superadditive, classify, to_mcnet, CostTable, Costs, IsnClass};
pub use policy::{Label, Policy};
pub use ratsolve::{feasible, minimal_conflict, Certificate, Feasibility, LinearSystem};
pub use redistribution::{collectible_tax, compliance, redistribute, Compliance, EvidenceSet, RedistributionResult};
pub use regulation::{
    compose, generate_policy_regulation, generate_regulation, verify_enforcement, CisnGame, EnforcementReport,
    IncentiveRuleSet,
};
pub use scalar::{parse_scalar, Scalar};
pub use solution::{
    balanced_by_vertex_enumeration, check_implementable, core_feasible, core_membership, is_balanced,
    is_supermodular, shapley, shapley_mcnet, shapley_permutation, BalancedVector, CoreVerdict, CoreViolation,
    Implementability,
};

pub type Rational = num_rational::BigRational;
pub type RationalGame = Game<Rational>;
pub type RationalMCNet = MCNet<Rational>;
pub type RationalAllocation = Allocation<Rational>;
pub type RationalCisn = CisnGame<Rational>;

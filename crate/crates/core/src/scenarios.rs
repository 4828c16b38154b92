//! Seeded random scenarios and the bundled property-suite runner.
//!
//! Everything here is reproducible from a `u64` seed (ChaCha8).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::{all_coalitions, subsets_of, Coalition, Universe};
use crate::error::Result;
use crate::game::{CoalitionalGame, Game, MCNet, Rule};
use crate::isn::{build_isn_game, to_mcnet, CostTable, Costs};
use crate::policy::{Label, Policy};
use crate::redistribution::{collectible_tax, redistribute, EvidenceSet};
use crate::regulation::{compose, generate_policy_regulation};
use crate::scalar::Scalar;
use crate::solution::{
    balanced_by_vertex_enumeration, core_feasible, core_membership, is_balanced, is_supermodular, shapley_mcnet,
    shapley_permutation,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` in `[lo, hi]` with `q` in `1..=3`.
fn small_rational<T: Scalar, R: Rng>(rng: &mut R, lo: i64, hi: i64) -> T {
    let q = rng.gen_range(1..=3);
    T::ratio(rng.gen_range(lo * q..=hi * q), q)
}

/// Explicit superadditive game: every coalition of two or more agents is
/// worth its best split plus a random non-negative surplus, so pairs are
/// worth at least 1 and singletons 0.
pub fn superadditive_game<T: Scalar, R: Rng>(rng: &mut R, n: usize) -> Result<Game<T>> {
    let universe = Universe::indexed(n);
    let mut values = vec![T::zero(); 1usize << n];
    let mut order = all_coalitions(n);
    order.sort_by_key(|s| s.len());
    for s in order {
        if s.len() < 2 {
            continue;
        }
        let best_split = subsets_of(s)
            .into_iter()
            .filter(|t| !t.is_empty() && *t != s)
            .map(|t| values[t.bits() as usize].clone() + values[s.difference(t).bits() as usize].clone())
            .max()
            .unwrap_or_else(T::zero);
        let floor = if s.len() == 2 { T::one() } else { T::zero() };
        let surplus: T = small_rational(rng, 0, 4);
        values[s.bits() as usize] = best_split.max(floor) + surplus;
    }
    Game::tabulate_with(universe, |s| values[s.bits() as usize].clone())
}

/// Random MC-Net of up to `max_rules` rules with non-zero values; negative
/// literals are kept sparse.
pub fn mcnet<T: Scalar, R: Rng>(rng: &mut R, n: usize, max_rules: usize) -> MCNet<T> {
    let universe = Universe::indexed(n);
    let count = rng.gen_range(0..=max_rules);
    let rules = (0..count)
        .map(|_| {
            let positive = loop {
                let s = random_subset(rng, n, 0.4);
                if !s.is_empty() {
                    break s;
                }
            };
            let negative = random_subset(rng, n, 0.15).difference(positive);
            let value = loop {
                let v: T = small_rational(rng, -5, 5);
                if !v.is_zero() {
                    break v;
                }
            };
            Rule::new(positive, negative, value)
        })
        .collect();
    MCNet::new(universe, rules)
}

fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Coalition {
    Coalition::from_members((0..n).filter(|_| rng.gen_bool(p)))
}

/// Exclusive policy: a random partition of the agents, each block of two
/// or more promoted with probability 1/2. The default is prohibited or
/// permitted with equal odds.
pub fn exclusive_policy<R: Rng>(rng: &mut R, universe: &Universe) -> Result<Policy> {
    let promoted = random_partition(rng, universe.len()).into_iter().filter(|s| s.len() >= 2 && rng.gen_bool(0.5)).collect();
    let default = if rng.gen_bool(0.5) { Label::Prohibited } else { Label::Permitted };
    Policy::new(universe.clone(), promoted, vec![], default)
}

fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<Coalition> {
    let mut agents: Vec<usize> = (0..n).collect();
    agents.shuffle(rng);
    let mut blocks = Vec::new();
    let mut rest = &agents[..];
    while !rest.is_empty() {
        let size = rng.gen_range(1..=rest.len().min(4));
        blocks.push(Coalition::from_members(rest[..size].iter().copied()));
        rest = &rest[size..];
    }
    blocks
}

/// Two-agent ISN costs with `T >= O` on the pair, which is exactly
/// superadditivity for two agents.
pub fn two_agent_costs<T: Scalar, R: Rng>(rng: &mut R) -> Result<CostTable<T>> {
    let traditional: T = small_rational(rng, 0, 100);
    let fraction: T = T::ratio(rng.gen_range(0..=20), 20);
    let operational = traditional.clone() * fraction;
    CostTable::new(
        Universe::new(["a", "b"])?,
        [(Coalition::grand(2), Costs { traditional, operational })],
    )
}

/// Disjoint realized coalitions: at least one promoted coalition (when the
/// policy has any) plus a random grouping of the remaining agents.
pub fn evidence<R: Rng>(rng: &mut R, policy: &Policy) -> Result<EvidenceSet> {
    let universe = policy.universe();
    let mut realized: Vec<Coalition> = policy.promoted().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if realized.is_empty() {
        if let Some(&s) = policy.promoted().choose(rng) {
            realized.push(s);
        }
    }
    let taken = realized.iter().fold(Coalition::EMPTY, |acc, s| acc.union(*s));
    let free: Vec<usize> = (0..universe.len()).filter(|&i| !taken.contains(i)).collect();
    for block in random_partition(rng, free.len()) {
        if rng.gen_bool(0.6) {
            realized.push(Coalition::from_members(block.members().map(|k| free[k])));
        }
    }
    EvidenceSet::new(universe.clone(), realized)
}

/// Outcome of one property family in [`selftest`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn run_check<F>(name: &'static str, cases: usize, mut case: F) -> Check
where
    F: FnMut(usize) -> Result<Option<String>>,
{
    let mut failures = 0;
    let mut first_failure = None;
    for k in 0..cases {
        let outcome = match case(k) {
            Ok(None) => continue,
            Ok(Some(why)) => why,
            Err(e) => format!("error: {e}"),
        };
        failures += 1;
        first_failure.get_or_insert_with(|| format!("case {k}: {outcome}"));
    }
    Check { name, cases, failures, first_failure }
}

/// Runs the bundled property families on `cases` random instances each.
pub fn selftest<T: Scalar>(seed: u64, cases: usize) -> Vec<Check> {
    let mut r = rng(seed);
    let mut checks = Vec::new();

    checks.push(run_check("two-agent ISN games are supermodular, balanced, Shapley in core", cases, |_| {
        let game = build_isn_game(&two_agent_costs::<T, _>(&mut r)?)?;
        let supermodular = is_supermodular(&game)?.holds();
        let balanced = is_balanced(&game)?.balanced;
        let in_core = core_membership(&game, &shapley_permutation(&game)?)?.is_none();
        Ok((!(supermodular && balanced && in_core))
            .then(|| format!("supermodular={supermodular} balanced={balanced} shapley_in_core={in_core}")))
    }));

    checks.push(run_check("rule-wise Shapley equals subset-sum Shapley", cases, |_| {
        let n = r.gen_range(1..=6);
        let net = mcnet::<T, _>(&mut r, n, 12);
        let (fast, slow) = (shapley_mcnet(&net)?, shapley_permutation(&net)?);
        Ok((fast != slow).then(|| format!("{fast} vs {slow}")))
    }));

    checks.push(run_check("core feasibility agrees with balanced-vector enumeration", cases, |_| {
        let n = r.gen_range(1..=4);
        let game = Game::from_net(mcnet::<T, _>(&mut r, n, 8));
        let (primal, dual) = (core_feasible(&game)?.nonempty, balanced_by_vertex_enumeration(&game)?.balanced);
        Ok((primal != dual).then(|| format!("primal={primal} dual={dual}")))
    }));

    checks.push(run_check("policy regulation is enforced", cases, |_| {
        let n = r.gen_range(2..=5);
        let game = superadditive_game::<T, _>(&mut r, n)?;
        let policy = exclusive_policy(&mut r, game.universe())?;
        let regulation = generate_policy_regulation(&game, &policy)?;
        let cisn = compose(game, regulation)?;
        let report = crate::regulation::verify_enforcement(&cisn, &policy)?;
        let leaked = all_coalitions(n)
            .into_iter()
            .find(|&s| s.len() >= 2 && !policy.is_promoted(s) && !cisn.worth(s).is_zero());
        Ok(match (report.ok, leaked) {
            (true, None) => None,
            (ok, leaked) => Some(format!("report ok={ok}, non-zero unpromoted value at {leaked:?}")),
        })
    }));

    checks.push(run_check("redistribution is budget balanced", cases, |_| {
        let n = r.gen_range(2..=6);
        let game = superadditive_game::<T, _>(&mut r, n)?;
        let policy = exclusive_policy(&mut r, game.universe())?;
        let regulation = generate_policy_regulation(&game, &policy)?;
        let cisn = compose(game, regulation)?;
        let evidence = evidence(&mut r, &policy)?;
        let tau = collectible_tax(&cisn, &evidence)?;
        let result = redistribute(&cisn, &policy, &evidence, tau.clone())?;
        let paid = result.omega.total();
        let expected = if result.implemented_promoted.is_empty() || cisn.base().worth(result.union).is_zero() {
            T::zero()
        } else {
            tau
        };
        Ok((paid != expected).then(|| format!("paid {paid}, expected {expected}")))
    }));

    checks.push(run_check("explicit games round-trip through MC-Nets", cases, |_| {
        let n = r.gen_range(1..=6);
        let game = superadditive_game::<T, _>(&mut r, n)?;
        let net = to_mcnet(&game)?;
        Ok(all_coalitions(n).into_iter().find(|&s| net.worth(s) != game.worth(s)).map(|s| format!("differs at {s:?}")))
    }));

    checks
}

//! Industrial symbiotic network games built from cost data.

use std::collections::BTreeMap;

use crate::coalition::{all_coalitions, by_size_then_canonical, subsets_of, Coalition, PairCheck, Universe};
use crate::error::{Error, Result};
use crate::game::{Backing, CoalitionalGame, Game, MCNet, Rule};
use crate::limits::ensure_cap;
use crate::scalar::Scalar;

/// Traditional and operational cost of one coalition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Costs<T> {
    pub traditional: T,
    pub operational: T,
}

/// `T(S)` and `O(S)` for every coalition of two or more agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostTable<T> {
    universe: Universe,
    entries: BTreeMap<Coalition, Costs<T>>,
}

impl<T: Scalar> CostTable<T> {
    pub fn new<I>(universe: Universe, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coalition, Costs<T>)>,
    {
        ensure_cap("a cost table", universe.len())?;
        let mut map = BTreeMap::new();
        for (s, costs) in entries {
            universe.check(s)?;
            if costs.traditional.is_negative() || costs.operational.is_negative() {
                return Err(Error::NegativeCost(s));
            }
            if map.insert(s, costs).is_some() {
                return Err(Error::DuplicateEntry(s));
            }
        }
        if let Some(&missing) =
            all_coalitions(universe.len()).iter().find(|s| s.len() >= 2 && !map.contains_key(s))
        {
            return Err(Error::MissingEntry(missing));
        }
        Ok(Self { universe, entries: map })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn entries(&self) -> &BTreeMap<Coalition, Costs<T>> {
        &self.entries
    }

    /// `T(S) - O(S)`, or 0 for coalitions below two agents.
    pub fn benefit(&self, s: Coalition) -> T {
        match self.entries.get(&s) {
            Some(c) if s.len() >= 2 => c.traditional.clone() - c.operational.clone(),
            _ => T::zero(),
        }
    }
}

/// Bilateral (`Lambda`) or multilateral (`Delta`) network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsnClass {
    Lambda,
    Delta,
}

/// The normalized game `v(S) = T(S) - O(S)` (zero below two agents).
/// Cost data yielding a non-superadditive game is rejected.
pub fn build_isn_game<T: Scalar>(costs: &CostTable<T>) -> Result<Game<T>> {
    let n = costs.universe.len();
    if n < 2 {
        return Err(Error::TooFewAgents(n));
    }
    let game = Game::tabulate_with(costs.universe.clone(), |s| costs.benefit(s))?;
    match check_superadditive(&game)? {
        PairCheck::Holds => Ok(game),
        PairCheck::Violated { first, second } => Err(Error::NotSuperadditive { first, second }),
    }
}

/// `v(S ∪ T) >= v(S) + v(T)` for all disjoint `S, T`; the first violating
/// pair in canonical order otherwise.
pub fn check_superadditive<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<PairCheck> {
    let n = game.agents();
    ensure_cap("superadditivity check", n)?;
    let v = game.tabulate()?;
    let grand = Coalition::grand(n);
    for s in all_coalitions(n) {
        if s.is_empty() {
            continue;
        }
        let vs = &v[s.bits() as usize];
        for t in subsets_of(grand.difference(s)) {
            if t.is_empty() {
                continue;
            }
            let joint = &v[s.union(t).bits() as usize];
            if *joint < vs.clone() + v[t.bits() as usize].clone() {
                return Ok(PairCheck::Violated { first: s, second: t });
            }
        }
    }
    Ok(PairCheck::Holds)
}

pub fn classify<T: Scalar, G: CoalitionalGame<T>>(game: &G) -> Result<IsnClass> {
    match game.agents() {
        n if n < 2 => Err(Error::TooFewAgents(n)),
        2 => Ok(IsnClass::Lambda),
        _ => Ok(IsnClass::Delta),
    }
}

/// One rule `(S, N \ S) -> v(S)` per coalition with non-zero value, ordered
/// by size and then canonically. Each rule fires on exactly its own
/// coalition, so the net reproduces the table everywhere.
pub fn to_mcnet<T: Scalar>(game: &Game<T>) -> Result<MCNet<T>> {
    let Backing::Table(values) = game.backing() else {
        return Err(Error::NotExplicit);
    };
    let n = game.universe().len();
    ensure_cap("MC-Net conversion", n)?;
    let grand = Coalition::grand(n);
    let mut coalitions: Vec<Coalition> = all_coalitions(n)
        .into_iter()
        .filter(|s| !s.is_empty() && !values[s.bits() as usize].is_zero())
        .collect();
    coalitions.sort_by(by_size_then_canonical);
    let rules = coalitions
        .into_iter()
        .map(|s| Rule::new(s, grand.difference(s), values[s.bits() as usize].clone()))
        .collect();
    Ok(MCNet::new(game.universe().clone(), rules))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_example_game, running_example_net, running_example_universe};
    use crate::game::RuleContext;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn costs(n: i64, o: i64) -> Costs<Rational> {
        Costs { traditional: q(n), operational: q(o) }
    }

    #[test]
    fn pair_benefit_is_cost_difference() {
        let u = Universe::new(["i", "j"]).unwrap();
        let table = CostTable::new(u.clone(), [(u.grand(), costs(10, 6))]).unwrap();
        let game = build_isn_game(&table).unwrap();
        assert_eq!(game.value(u.grand()).unwrap(), q(4));
        assert_eq!(game.value(Coalition::singleton(0)).unwrap(), q(0));
        assert_eq!(classify(&game).unwrap(), IsnClass::Lambda);
    }

    #[test]
    fn engineered_costs_reproduce_running_example() {
        let u = running_example_universe();
        let c = |names: &[&str]| u.coalition(names).unwrap();
        let table = CostTable::new(
            u.clone(),
            [
                (c(&["i", "j"]), costs(12, 8)),
                (c(&["i", "k"]), costs(9, 4)),
                (c(&["j", "k"]), costs(7, 3)),
                (c(&["i", "j", "k"]), costs(20, 14)),
            ],
        )
        .unwrap();
        let game = build_isn_game(&table).unwrap();
        let reference = running_example_game();
        for s in all_coalitions(3) {
            assert_eq!(game.value(s).unwrap(), reference.value(s).unwrap());
        }
        assert_eq!(classify(&game).unwrap(), IsnClass::Delta);
    }

    #[test]
    fn cost_table_errors() {
        let u = Universe::indexed(3);
        let pair = Coalition::from_members([0, 1]);
        assert!(matches!(CostTable::new(u.clone(), [(pair, costs(1, 0))]), Err(Error::MissingEntry(_))));
        assert_eq!(CostTable::new(u.clone(), [(pair, costs(-1, 0))]), Err(Error::NegativeCost(pair)));
        let one = CostTable::<Rational>::new(Universe::indexed(1), []).unwrap();
        assert_eq!(build_isn_game(&one), Err(Error::TooFewAgents(1)));
    }

    #[test]
    fn non_superadditive_costs_are_rejected_with_witness() {
        let u = running_example_universe();
        let c = |names: &[&str]| u.coalition(names).unwrap();
        let table = CostTable::new(
            u.clone(),
            [
                (c(&["i", "j"]), costs(4, 0)),
                (c(&["i", "k"]), costs(5, 0)),
                (c(&["j", "k"]), costs(4, 0)),
                (c(&["i", "j", "k"]), costs(3, 0)),
            ],
        )
        .unwrap();
        assert_eq!(
            build_isn_game(&table),
            Err(Error::NotSuperadditive { first: c(&["i", "j"]), second: c(&["k"]) })
        );
    }

    #[test]
    fn superadditivity_of_running_example() {
        assert_eq!(check_superadditive(&running_example_game()).unwrap(), PairCheck::Holds);
        let zero = Game::<Rational>::tabulate_with(Universe::indexed(3), |_| q(0)).unwrap();
        assert!(check_superadditive(&zero).unwrap().holds());
    }

    #[test]
    fn classify_rejects_single_agent() {
        let g = Game::<Rational>::tabulate_with(Universe::indexed(1), |_| q(0)).unwrap();
        assert_eq!(classify(&g), Err(Error::TooFewAgents(1)));
    }

    #[test]
    fn running_example_converts_to_reference_net() {
        let net = to_mcnet(&running_example_game()).unwrap();
        assert_eq!(net, running_example_net());
        assert!(net.validate(RuleContext::Basic).is_ok());
    }

    #[test]
    fn zero_game_converts_to_empty_net() {
        let zero = Game::<Rational>::tabulate_with(Universe::indexed(4), |_| q(0)).unwrap();
        let net = to_mcnet(&zero).unwrap();
        assert!(net.rules().is_empty());
        for s in all_coalitions(4) {
            assert_eq!(net.value(s).unwrap(), q(0));
        }
        assert_eq!(to_mcnet(&Game::from_net(net)), Err(Error::NotExplicit));
    }
}

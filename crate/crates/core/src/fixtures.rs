//! Reference games: the three-firm `ijk` scenario and its policy.

use crate::coalition::{Coalition, Universe};
use crate::game::{Game, MCNet, Rule};
use crate::policy::{Label, Policy};
use crate::scalar::Scalar;
use crate::Rational;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

pub fn running_example_universe() -> Universe {
    Universe::new(["i", "j", "k"]).expect("three distinct names")
}

/// `v(ij)=4, v(ik)=5, v(jk)=4, v(ijk)=6`, zero elsewhere.
pub fn running_example_game() -> Game<Rational> {
    let u = running_example_universe();
    let entries = [(vec!["i", "j"], 4), (vec!["i", "k"], 5), (vec!["j", "k"], 4), (vec!["i", "j", "k"], 6)]
        .into_iter()
        .map(|(names, v)| (u.coalition(&names).expect("known agents"), q(v)));
    Game::from_table(u.clone(), entries).expect("complete table")
}

/// The four-rule net `(ij,k)->4, (ik,j)->5, (jk,i)->4, (ijk,{})->6`.
pub fn running_example_net() -> MCNet<Rational> {
    let u = running_example_universe();
    let c = |names: &[&str]| u.coalition(names).expect("known agents");
    MCNet::new(
        u.clone(),
        vec![
            Rule::new(c(&["i", "j"]), c(&["k"]), q(4)),
            Rule::new(c(&["i", "k"]), c(&["j"]), q(5)),
            Rule::new(c(&["j", "k"]), c(&["i"]), q(4)),
            Rule::new(c(&["i", "j", "k"]), Coalition::EMPTY, q(6)),
        ],
    )
}

/// Promotes the grand coalition and prohibits every other group.
pub fn grand_coalition_policy() -> Policy {
    let u = running_example_universe();
    Policy::new(u.clone(), vec![u.grand()], vec![], Label::Prohibited).expect("consistent policy")
}

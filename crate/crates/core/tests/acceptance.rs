//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Values are exact rationals, so every numeric tolerance is zero. Wall
//! clock limits are pinned below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use symbiont::fixtures::{grand_coalition_policy, running_example_game, running_example_net};
use symbiont::scenarios::{evidence, exclusive_policy, mcnet, rng, superadditive_game, two_agent_costs};
use symbiont::{
    all_coalitions, balanced_by_vertex_enumeration, build_isn_game, check_implementable, collectible_tax, compose,
    core_feasible, core_membership, generate_policy_regulation, is_balanced, is_supermodular, redistribute,
    shapley_mcnet, shapley_permutation, to_mcnet, verify_enforcement, Allocation, Coalition,
    CoalitionalGame, EvidenceSet, Game, Label, MCNet, Policy, Rational, Rule, Scalar, Universe,
};

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_EQUIVALENCE_LIMIT: Duration = Duration::from_secs(60);
const SEED: u64 = 0x15_0c0de;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

// ---- independent oracles ----

/// Sum of the values of the rules whose literals hold, straight from the bits.
fn rule_sum(rules: &[Rule<Rational>], s: Coalition) -> Rational {
    rules
        .iter()
        .filter(|rule| {
            rule.positive.bits() & s.bits() == rule.positive.bits() && rule.negative.bits() & s.bits() == 0
        })
        .map(|rule| rule.value.clone())
        .sum()
}

/// Shapley value as the average marginal contribution over all `n!` orders.
fn shapley_by_orders<G: CoalitionalGame<Rational>>(game: &G) -> Vec<Rational> {
    let n = game.agents();
    let mut totals = vec![q(0); n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut count = 0i64;
    permute(&mut order, 0, &mut |perm| {
        let mut bits = 0u64;
        let mut before = game.worth(Coalition::EMPTY);
        for &i in perm {
            bits |= 1 << i;
            let after = game.worth(Coalition::from_bits(bits));
            totals[i] = totals[i].clone() + after.clone() - before;
            before = after;
        }
        count += 1;
    });
    totals.into_iter().map(|t| t / q(count)).collect()
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Core membership straight from the definition.
fn in_core<G: CoalitionalGame<Rational>>(game: &G, x: &[Rational]) -> bool {
    let n = game.agents();
    let share = |bits: u64| -> Rational { (0..n).filter(|i| bits >> i & 1 == 1).map(|i| x[i].clone()).sum() };
    let grand = (1u64 << n) - 1;
    share(grand) == game.worth(Coalition::from_bits(grand))
        && (1..grand).all(|b| share(b) >= game.worth(Coalition::from_bits(b)))
}

// ---- criteria ----

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let expected = vec![r(13, 6), r(10, 6), r(13, 6)];
    let by_rules = shapley_mcnet(&running_example_net()).unwrap();
    let by_subsets = shapley_permutation(&running_example_game()).unwrap();
    let by_orders = shapley_by_orders(&running_example_game());
    let elapsed = start.elapsed();
    let pass = by_rules.0 == expected && by_subsets.0 == expected && by_orders == expected && elapsed < GOLDEN_LIMIT;
    outcome(pass, format!("rules {by_rules}, subsets {by_subsets}, in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let game = running_example_game();
    let verdict = core_feasible(&game).unwrap();
    let elapsed = start.elapsed();
    let Some(conflict) = verdict.conflict.filter(|_| !verdict.nonempty) else {
        return outcome(false, "core reported non-empty");
    };
    // Recombine the certificate by hand: Σ y·a must vanish and Σ y·b be positive.
    let system = &conflict.system;
    let cert = &conflict.certificate;
    let mut coeffs = vec![q(0); 3];
    let mut rhs = q(0);
    for (y, c) in cert.equality_weights.iter().zip(system.equalities()).chain(
        cert.inequality_weights.iter().zip(system.inequalities()),
    ) {
        for (acc, a) in coeffs.iter_mut().zip(&c.coeffs) {
            *acc = acc.clone() + y.clone() * a.clone();
        }
        rhs = rhs + y.clone() * c.rhs.clone();
    }
    let valid = coeffs.iter().all(|c| *c == q(0))
        && rhs > q(0)
        && cert.inequality_weights.iter().all(|w| *w >= q(0));

    let u = game.universe();
    let used: Vec<(String, Rational)> = cert
        .inequality_weights
        .iter()
        .zip(&conflict.coalitions)
        .filter(|(w, _)| **w != q(0))
        .map(|(_, &s)| (u.render(s), game.worth(s)))
        .collect();
    let wanted = vec![("{i,j}".to_string(), q(4)), ("{i,k}".to_string(), q(5)), ("{j,k}".to_string(), q(4))];
    let eff_used = cert.equality_weights[0] != q(0) && system.equalities()[0].rhs == q(6);
    let pass = valid && eff_used && used == wanted && elapsed < GOLDEN_LIMIT;
    let rendered: Vec<String> = used.iter().map(|(s, v)| format!("x{s} >= {v}")).collect();
    outcome(pass, format!("x(ijk) = 6 against {}, gap {}, in {elapsed:?}", rendered.join(", "), conflict.gap))
}

fn criterion_3() -> Outcome {
    let game = running_example_game();
    let policy = grand_coalition_policy();
    let u = game.universe().clone();
    let c = |names: &[&str]| u.coalition(names).unwrap();
    let regulation = generate_policy_regulation(&game, &policy).unwrap();
    let expected = vec![
        Rule::new(c(&["i", "j"]), c(&["k"]), q(-4)),
        Rule::new(c(&["i", "k"]), c(&["j"]), q(-5)),
        Rule::new(c(&["j", "k"]), c(&["i"]), q(-4)),
    ];
    let rules_ok = regulation.rules() == expected.as_slice();
    let cisn = compose(game, regulation).unwrap();
    let imp = check_implementable(&cisn).unwrap();
    let by_orders = shapley_by_orders(&cisn);
    let pass = rules_ok && imp.stable && imp.fair_and_stable && imp.shapley.0 == vec![q(2); 3] && by_orders == imp.shapley.0;
    outcome(
        pass,
        format!(
            "{} rules, implementable ({}, {}), CISN Shapley {}",
            regulation_len(&cisn),
            imp.stable,
            imp.fair_and_stable,
            imp.shapley
        ),
    )
}

fn regulation_len(cisn: &symbiont::RationalCisn) -> usize {
    cisn.incentives().rules().len()
}

fn criterion_4() -> Outcome {
    let mut g = rng(SEED ^ 4);
    let mut failures = 0;
    for _ in 0..1000 {
        let costs = two_agent_costs::<Rational, _>(&mut g).unwrap();
        let game = build_isn_game(&costs).unwrap();
        // With v(a) = v(b) = 0, supermodularity and balancedness both reduce to v(ab) >= 0.
        let pair = game.worth(Coalition::grand(2));
        let phi = shapley_permutation(&game).unwrap();
        let ok = is_supermodular(&game).unwrap().holds()
            && is_balanced(&game).unwrap().balanced
            && core_membership(&game, &phi).unwrap().is_none()
            && pair >= q(0)
            && in_core(&game, &phi.0);
        failures += usize::from(!ok);
    }
    outcome(failures == 0, format!("1000 games, {failures} failures"))
}

fn criterion_5() -> Outcome {
    let mut g = rng(SEED ^ 5);
    let start = Instant::now();
    let mut failures = 0;
    for _ in 0..200 {
        let n = g.gen_range(1..=8);
        let net = mcnet::<Rational, _>(&mut g, n, 12);
        let fast = shapley_mcnet(&net).unwrap();
        let slow = shapley_permutation(&net).unwrap();
        let mut ok = fast == slow;
        if n <= 6 {
            ok &= shapley_by_orders(&net) == fast.0;
        }
        failures += usize::from(!ok);
    }
    let elapsed = start.elapsed();
    outcome(failures == 0 && elapsed < ORACLE_EQUIVALENCE_LIMIT, format!("200 nets, {failures} mismatches, in {elapsed:?}"))
}

fn criterion_6() -> Outcome {
    let mut g = rng(SEED ^ 6);
    let (mut failures, mut empty) = (0, 0);
    for k in 0..200 {
        let n = g.gen_range(1..=4);
        let game = if k % 2 == 0 {
            Game::from_net(mcnet::<Rational, _>(&mut g, n, 8))
        } else {
            superadditive_game::<Rational, _>(&mut g, n).unwrap()
        };
        let primal = core_feasible(&game).unwrap();
        let dual = balanced_by_vertex_enumeration(&game).unwrap();
        let mut ok = primal.nonempty == dual.balanced;
        if let Some(x) = &primal.witness {
            ok &= in_core(&game, &x.0);
        }
        if let Some(v) = &dual.violating {
            ok &= v.is_balanced_over(n) && v.weighted_value(&game) > game.worth(Coalition::grand(n));
        }
        empty += usize::from(!primal.nonempty);
        failures += usize::from(!ok);
    }
    outcome(failures == 0, format!("200 games ({empty} with empty core), {failures} disagreements"))
}

fn criterion_7() -> Outcome {
    let mut g = rng(SEED ^ 7);
    let mut failures = 0;
    for _ in 0..100 {
        let n = g.gen_range(2..=8);
        let game = superadditive_game::<Rational, _>(&mut g, n).unwrap();
        let policy = exclusive_policy(&mut g, game.universe()).unwrap();
        let regulation = generate_policy_regulation(&game, &policy).unwrap();
        let rules = regulation.rules().to_vec();
        let cisn = compose(game.clone(), regulation).unwrap();
        let report = verify_enforcement(&cisn, &policy).unwrap();
        let zeroed = all_coalitions(n)
            .into_iter()
            .filter(|s| s.len() >= 2 && !policy.is_promoted(*s))
            .all(|s| game.worth(s) + rule_sum(&rules, s) == q(0));
        failures += usize::from(!(report.ok && zeroed));
    }
    outcome(failures == 0, format!("100 games, {failures} failures"))
}

/// Six agents `a..f`, promoted `ab, cd, ef`, evidence `ab, ce`.
fn six_agent_example() -> bool {
    let u = Universe::new(["a", "b", "c", "d", "e", "f"]).unwrap();
    let c = |names: &[&str]| u.coalition(names).unwrap();
    let base = Game::from_net(MCNet::new(
        u.clone(),
        vec![
            Rule::new(c(&["a", "b"]), Coalition::EMPTY, q(4)),
            Rule::new(c(&["c", "d"]), Coalition::EMPTY, q(2)),
            Rule::new(c(&["e", "f"]), Coalition::EMPTY, q(5)),
            Rule::new(c(&["c", "e"]), Coalition::EMPTY, q(3)),
        ],
    ));
    let policy =
        Policy::new(u.clone(), vec![c(&["a", "b"]), c(&["c", "d"]), c(&["e", "f"])], vec![], Label::Prohibited).unwrap();
    let regulation = generate_policy_regulation(&base, &policy).unwrap();
    let cisn = compose(base, regulation).unwrap();
    let evidence = EvidenceSet::new(u.clone(), vec![c(&["a", "b"]), c(&["c", "e"])]).unwrap();
    let tau = collectible_tax(&cisn, &evidence).unwrap();
    let result = redistribute(&cisn, &policy, &evidence, tau.clone()).unwrap();
    tau == q(3) && result.omega == Allocation(vec![r(3, 2), r(3, 2), q(0), q(0), q(0), q(0)])
}

fn criterion_8() -> Outcome {
    let mut g = rng(SEED ^ 8);
    let (mut accepted, mut failures, mut drawn) = (0, 0, 0);
    while accepted < 200 {
        drawn += 1;
        let n = g.gen_range(2..=7);
        let game = superadditive_game::<Rational, _>(&mut g, n).unwrap();
        let policy = exclusive_policy(&mut g, game.universe()).unwrap();
        let evidence = evidence(&mut g, &policy).unwrap();
        let union = evidence
            .realized()
            .iter()
            .filter(|s| policy.is_promoted(**s))
            .fold(Coalition::EMPTY, |acc, s| acc.union(*s));
        if union.is_empty() || game.worth(union) <= q(0) {
            continue;
        }
        accepted += 1;
        let regulation = generate_policy_regulation(&game, &policy).unwrap();
        let rules = regulation.rules().to_vec();
        let cisn = compose(game.clone(), regulation).unwrap();
        let tau = collectible_tax(&cisn, &evidence).unwrap();
        let tau_oracle: Rational =
            evidence.realized().iter().map(|&s| rule_sum(&rules, s)).filter(|i| *i < q(0)).map(|i| -i).sum();
        let result = redistribute(&cisn, &policy, &evidence, tau.clone()).unwrap();

        let sub = game.restrict(union).unwrap();
        let phi = shapley_by_orders(&sub);
        let v_union = game.worth(union);
        let mut omega = vec![q(0); n];
        for (pos, i) in union.members().enumerate() {
            omega[i] = tau.clone() * phi[pos].clone() / v_union.clone();
        }
        let ok = tau == tau_oracle && result.omega.total() == tau && result.omega.0 == omega && result.residual == q(0);
        failures += usize::from(!ok);
    }
    let example = six_agent_example();
    outcome(
        failures == 0 && example,
        format!("200 scenarios ({drawn} drawn), {failures} unbalanced; six-agent example {}", if example { "ok" } else { "wrong" }),
    )
}

fn criterion_9() -> Outcome {
    let mut g = rng(SEED ^ 9);
    let mut failures = 0;
    for _ in 0..100 {
        let n = g.gen_range(1..=8);
        let game = superadditive_game::<Rational, _>(&mut g, n).unwrap();
        let net = to_mcnet(&game).unwrap();
        let ok = all_coalitions(n).into_iter().all(|s| {
            let v = game.worth(s);
            net.value(s).unwrap() == v && rule_sum(net.rules(), s) == v
        });
        failures += usize::from(!ok);
    }
    outcome(failures == 0, format!("100 games, {failures} mismatches"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("running-example Shapley", criterion_1),
        ("running-example core emptiness", criterion_2),
        ("policy regulation on the running example", criterion_3),
        ("two-agent ISN guarantee", criterion_4),
        ("rule-wise Shapley oracle equivalence", criterion_5),
        ("primal/dual balancedness coherence", criterion_6),
        ("policy enforcement", criterion_7),
        ("budget-balanced redistribution", criterion_8),
        ("MC-Net round trip", criterion_9),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.pass;
        println!("criterion {}: {} [{name}] {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

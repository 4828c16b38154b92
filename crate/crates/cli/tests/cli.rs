use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use symbiont::scenarios::{exclusive_policy, mcnet, rng, superadditive_game};
use symbiont::{core_feasible, shapley, verify_enforcement, Game, Rational};
use symbiont_cli::input::{GameFile, PolicyFile};
use symbiont_cli::{run, Outcome, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn symbiont(args: &[&str]) -> Outcome {
    run(std::iter::once("symbiont").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = symbiont(&full);
    assert!(out.stderr.is_empty() || out.code == EXIT_INPUT, "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap_or(Value::Null))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

fn write(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

#[test]
fn shapley_on_running_example() {
    for file in ["running-example.json", "running-example-values.json", "running-example-costs.json"] {
        let (code, v) = json(&["shapley", &data(file)]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(strings(&v["shapley"]), ["13/6", "5/3", "13/6"], "{file}");
    }
    let (code, v) = json(&["shapley", &data("running-example.json"), "--method", "both"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["agree"], Value::Bool(true));
}

#[test]
fn core_on_running_example_is_empty() {
    let out = symbiont(&["core", &data("running-example.json")]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    assert!(out.stdout.contains("core: empty"), "{}", out.stdout);

    let (_, v) = json(&["core", &data("running-example.json")]);
    let rows: Vec<(Vec<String>, String)> = v["conflict"]["constraints"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (strings(&r["coalition"]), r["at_least"].as_str().unwrap().to_string()))
        .collect();
    let pair = |a: &str, b: &str, v: &str| (vec![a.to_string(), b.to_string()], v.to_string());
    assert_eq!(rows, [pair("i", "j", "4"), pair("i", "k", "5"), pair("j", "k", "4")]);
    assert_eq!(v["conflict"]["efficiency"]["equals"], "6");
    assert_eq!(v["conflict"]["certificate_verified"], true);
}

#[test]
fn core_membership_reports_ik() {
    let (code, v) = json(&["core", &data("running-example.json"), "--alloc", "13/6,10/6,13/6"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(strings(&v["violation"]["coalition"]), ["i", "k"]);
    assert_eq!(v["violation"]["allocated"], "13/3");
    let (code, _) = json(&["core", &data("running-example.json"), "--alloc", "1,2"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn regulate_with_policy_matches_three_taxes() {
    let (code, v) = json(&["regulate", &data("running-example.json"), "--policy", &data("p1.json")]);
    assert_eq!(code, EXIT_OK);
    let rules: Vec<(Vec<String>, Vec<String>, String)> = v["mcnet"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (strings(&r["positive"]), strings(&r["negative"]), r["value"].as_str().unwrap().to_string()))
        .collect();
    let rule = |p: &[&str], n: &str, v: &str| {
        (p.iter().map(|s| s.to_string()).collect::<Vec<_>>(), vec![n.to_string()], v.to_string())
    };
    assert_eq!(rules, [rule(&["i", "j"], "k", "-4"), rule(&["i", "k"], "j", "-5"), rule(&["j", "k"], "i", "-4")]);
    assert_eq!(v["incentive"], true);
}

#[test]
fn regulation_pipeline_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (_, re) = json(&["regulate", &data("running-example.json"), "--policy", &data("p1.json")]);
    let re_path = write(dir.path(), "re.json", &re);
    let re_path = re_path.to_str().unwrap();

    let (code, v) = json(&["enforce", &data("running-example.json"), "--policy", &data("p1.json"), "--incentives", re_path]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["ok"], true);
    assert_eq!(strings(&v["composed_shapley"]), ["2", "2", "2"]);

    let (code, composed) = json(&["compose", &data("running-example.json"), re_path]);
    assert_eq!(code, EXIT_OK);
    let composed_path = write(dir.path(), "cisn.json", &composed);
    let (_, v) = json(&["shapley", composed_path.to_str().unwrap()]);
    assert_eq!(strings(&v["shapley"]), ["2", "2", "2"]);

    // Without regulation the grand coalition is not implementable.
    let empty = serde_json::json!({"universe": ["i", "j", "k"], "mcnet": [], "incentive": true});
    let empty_path = write(dir.path(), "none.json", &empty);
    let (code, v) =
        json(&["enforce", &data("running-example.json"), "--policy", &data("p1.json"), "--incentives", empty_path.to_str().unwrap()]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["ok"], false);
}

#[test]
fn compliance_tax_and_redistribution() {
    let (code, v) = json(&["comply", "--policy", &data("p1.json"), "--evidence", &data("evidence-ik.json")]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["compliant"], false);

    let (code, v) =
        json(&["tax", &data("running-example.json"), "--policy", &data("p1.json"), "--evidence", &data("evidence-ik.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["tau"], "5");

    let (code, v) = json(&[
        "redistribute",
        &data("six-agents.json"),
        "--policy",
        &data("six-agents-policy.json"),
        "--evidence",
        &data("six-agents-evidence.json"),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["tau"], "3");
    assert_eq!(strings(&v["omega"]), ["3/2", "3/2", "0", "0", "0", "0"]);
    assert_eq!(v["budget_balanced"], true);

    let (code, _) = json(&[
        "redistribute",
        &data("six-agents.json"),
        "--policy",
        &data("six-agents-policy.json"),
        "--evidence",
        &data("six-agents-evidence.json"),
        "--tau",
        "-1",
    ]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn game_files_round_trip() {
    for file in ["running-example.json", "running-example-values.json", "running-example-costs.json", "six-agents.json"] {
        let parsed = GameFile::parse(&std::fs::read_to_string(data(file)).unwrap()).unwrap();
        let emitted = parsed.to_value().to_string();
        assert_eq!(GameFile::parse(&emitted).unwrap(), parsed, "{file}");
    }
    let p = PolicyFile::parse(&std::fs::read_to_string(data("p1.json")).unwrap()).unwrap();
    assert_eq!(PolicyFile::parse(&p.to_value().to_string()).unwrap(), p);
}

#[test]
fn convert_round_trips_values() {
    let dir = tempfile::tempdir().unwrap();
    let (_, net) = json(&["convert", &data("running-example-values.json")]);
    let net_path = write(dir.path(), "net.json", &net);
    let (_, back) = json(&["convert", net_path.to_str().unwrap(), "--to", "values"]);
    let original = GameFile::parse(&std::fs::read_to_string(data("running-example-values.json")).unwrap()).unwrap();
    assert_eq!(GameFile::from_value(&back).unwrap(), original);
}

#[test]
fn equal_rationals_parse_equal() {
    let text = |v: &str| format!(r#"{{"universe": ["a", "b"], "values": [{{"coalition": ["a", "b"], "value": "{v}"}}]}}"#);
    assert_eq!(GameFile::parse(&text("5")).unwrap(), GameFile::parse(&text("5/1")).unwrap());
    assert_eq!(GameFile::parse(&text("10/2")).unwrap(), GameFile::parse(&text("5")).unwrap());
}

#[test]
fn input_errors_exit_two_with_distinct_messages() {
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.json");
    std::fs::write(
        &dup,
        r#"{"universe": ["a", "b"], "values": [{"coalition": ["a", "b"], "value": "1"}, {"coalition": ["b", "a"], "value": "2"}]}"#,
    )
    .unwrap();
    let out = symbiont(&["shapley", dup.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("/values/1/coalition") && out.stderr.contains("duplicate coalition key {a,b}"), "{}", out.stderr);

    let out = symbiont(&["frobnicate"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("unrecognized subcommand"), "{}", out.stderr);

    let out = symbiont(&["shapley", "/definitely/not/here.json"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("cannot read"), "{}", out.stderr);
}

#[test]
fn cap_override_comes_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_symbiont");
    let out = Command::new(bin).args(["core", &data("running-example.json")]).env("SYMBIONT_MAX_AGENTS", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("agent cap exceeded"));

    let out = Command::new(bin).args(["core", &data("running-example.json")]).env("SYMBIONT_MAX_AGENTS", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NEGATIVE));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["core", "--format", "json"],
        vec!["shapley", "--decimals", "5"],
        vec!["enforce", "--policy"],
    ] {
        let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        full.insert(1, data("running-example.json"));
        if args[0] == "enforce" {
            full.push(data("p1.json"));
        }
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        assert_eq!(symbiont(&refs), symbiont(&refs));
    }
    let a = symbiont(&["shapley", &data("running-example.json"), "--timestamps", "--format", "json"]);
    assert!(a.stdout.contains("generated_at"));
}

#[test]
fn text_and_json_carry_the_same_values() {
    let (_, v) = json(&["shapley", &data("running-example.json")]);
    let text = symbiont(&["shapley", &data("running-example.json")]).stdout;
    assert!(text.contains(&format!("shapley: [{}]", strings(&v["shapley"]).join(", "))), "{text}");
}

/// The CLI reports exactly what the library computes.
#[test]
fn verdicts_match_library_calls() {
    let dir = tempfile::tempdir().unwrap();
    let mut g = rng(2024);
    for k in 0..24 {
        let n = 2 + k % 4;
        let game: Game<Rational> =
            if k % 2 == 0 { Game::from_net(mcnet(&mut g, n, 8)) } else { superadditive_game(&mut g, n).unwrap() };
        let file = match game.as_net() {
            Some(net) => GameFile::from_net(net, false),
            None => GameFile::from_values(game.universe(), symbiont::all_coalitions(n).into_iter().filter(|s| !s.is_empty()).map(|s| (s, game.value(s).unwrap()))),
        };
        let path = write(dir.path(), &format!("g{k}.json"), &file.to_value());
        let path = path.to_str().unwrap();

        let (_, v) = json(&["shapley", path]);
        let expected: Vec<String> = shapley(&game).unwrap().payoffs().iter().map(|q| q.to_string()).collect();
        assert_eq!(strings(&v["shapley"]), expected);

        let (code, v) = json(&["core", path]);
        let nonempty = core_feasible(&game).unwrap().nonempty;
        assert_eq!(v["core"], if nonempty { "non-empty" } else { "empty" });
        assert_eq!(code, if nonempty { EXIT_OK } else { EXIT_NEGATIVE });

        if k % 2 == 1 {
            let policy = exclusive_policy(&mut g, game.universe()).unwrap();
            let pfile = PolicyFile { policy: policy.clone(), default_assumed: false };
            let ppath = write(dir.path(), &format!("p{k}.json"), &pfile.to_value());
            let (code, v) = json(&["enforce", path, "--policy", ppath.to_str().unwrap()]);
            let regulation = symbiont::generate_policy_regulation(&game, &policy).unwrap();
            let report = verify_enforcement(&symbiont::compose(game.clone(), regulation).unwrap(), &policy).unwrap();
            assert_eq!(v["ok"], report.ok);
            assert_eq!(code, if report.ok { EXIT_OK } else { EXIT_NEGATIVE });
        }
    }
}

#[test]
fn file_outputs_stay_json_in_text_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = symbiont(&["regulate", &data("running-example.json"), "--policy", &data("p1.json")]);
    assert_eq!(out.code, EXIT_OK);
    let path = dir.path().join("inc.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let (code, v) = json(&[
        "enforce",
        &data("running-example.json"),
        "--policy",
        &data("p1.json"),
        "--incentives",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["ok"], Value::Bool(true));
}

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use symbiont::isn::classify;
use symbiont::limits::{max_agents, set_max_agents, HARD_MAX_AGENTS, VERTEX_ENUMERATION_MAX_AGENTS};
use symbiont::scenarios::selftest;
use symbiont::{
    all_coalitions, check_implementable, check_superadditive, collectible_tax, compliance, compose, core_feasible,
    core_membership, generate_policy_regulation, generate_regulation, is_balanced, is_supermodular, parse_scalar,
    redistribute, shapley, shapley_mcnet, shapley_permutation, to_mcnet, verify_enforcement, Allocation, Backing,
    CisnGame, Coalition, CoalitionalGame, EvidenceSet, Game, IncentiveRuleSet, IsnClass, MCNet, PairCheck,
    Rational, RuleContext, Universe,
};

use crate::input::{describe, parse_evidence, GameFile, GameSource, InputError, PolicyFile};
use crate::report::{emit, Format, Report, Style};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable overriding the cap on 2^N operations.
pub const MAX_AGENTS_ENV: &str = "SYMBIONT_MAX_AGENTS";

#[derive(Debug, Parser)]
#[command(name = "symbiont", version, about = "Exact coalition analysis and regulation for industrial symbiotic networks")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Also print decimal approximations with this many places.
    #[arg(long, global = true)]
    pub decimals: Option<usize>,
    /// Stamp reports with the generation time (off by default so output is reproducible).
    #[arg(long, global = true)]
    pub timestamps: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Rule-wise on MC-Nets, subset sums on tables.
    Auto,
    /// Rule-wise; tables are converted to MC-Nets first.
    Mcnet,
    /// Subset sums over all coalitions.
    Subsets,
    /// Both, cross-checked.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Mcnet,
    Values,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schema and invariant checks on a game file.
    Validate { game: PathBuf },
    /// Value of one coalition, given as comma-separated agent names.
    Value { game: PathBuf, coalition: String },
    /// Shapley value.
    Shapley {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Core membership of an allocation, or core non-emptiness.
    Core {
        game: PathBuf,
        /// Comma-separated payoffs in universe order, e.g. "13/6,5/3,13/6".
        #[arg(long)]
        alloc: Option<String>,
    },
    /// Bondareva-Shapley balancedness.
    Balanced { game: PathBuf },
    /// Supermodularity (convexity).
    Supermodular { game: PathBuf },
    /// Rewrite a game file as an MC-Net (or as explicit values).
    Convert {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Mcnet)]
        to: Target,
    },
    /// Incentive net taxing everything but the grand coalition, or enforcing a policy.
    Regulate {
        game: PathBuf,
        #[arg(long)]
        policy: Option<PathBuf>,
    },
    /// Game plus incentive net.
    Compose { game: PathBuf, incentives: PathBuf },
    /// Check that a regulation enforces a policy.
    Enforce {
        game: PathBuf,
        #[arg(long)]
        policy: PathBuf,
        /// Incentive net to check; generated from the policy when absent.
        #[arg(long)]
        incentives: Option<PathBuf>,
    },
    /// Compare realized networks against a policy.
    Comply {
        #[arg(long)]
        policy: PathBuf,
        #[arg(long)]
        evidence: PathBuf,
    },
    /// Taxes collectible from the realized networks.
    Tax {
        game: PathBuf,
        #[arg(long)]
        evidence: PathBuf,
        #[arg(long, required_unless_present = "incentives")]
        policy: Option<PathBuf>,
        #[arg(long)]
        incentives: Option<PathBuf>,
    },
    /// Shapley-weighted redistribution of collected taxes.
    Redistribute {
        game: PathBuf,
        #[arg(long)]
        policy: PathBuf,
        #[arg(long)]
        evidence: PathBuf,
        #[arg(long)]
        incentives: Option<PathBuf>,
        /// Amount to redistribute; defaults to the collectible tax.
        #[arg(long)]
        tau: Option<String>,
    },
    /// Run the bundled property suite on random scenarios.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Read { path: PathBuf, message: String },
    Input { path: PathBuf, error: InputError },
    Cap(String),
    Usage(String),
    Engine(String),
}

impl Failure {
    fn message(&self) -> String {
        match self {
            Failure::Read { path, message } => format!("error: cannot read {}: {message}", path.display()),
            Failure::Input { path, error } => format!("error: invalid input in {} {error}", path.display()),
            Failure::Cap(m) => format!("error: agent cap exceeded: {m} (raise it with {MAX_AGENTS_ENV}, at most {HARD_MAX_AGENTS})"),
            Failure::Usage(m) => format!("error: {m}"),
            Failure::Engine(m) => format!("error: {m}"),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn engine(universe: &Universe) -> impl Fn(symbiont::Error) -> Failure + '_ {
    move |e| match e {
        symbiont::Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
        other => Failure::Engine(describe(universe, &other)),
    }
}

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Read { path: path.to_path_buf(), message: e.to_string() })
}

fn load_game_file(path: &Path) -> Run<GameFile> {
    GameFile::parse(&read(path)?).map_err(|error| Failure::Input { path: path.to_path_buf(), error })
}

fn load_game(path: &Path) -> Run<(GameFile, Game<Rational>)> {
    let file = load_game_file(path)?;
    if file.incentive {
        return Err(Failure::Usage(format!("{} is an incentive net, not a game", path.display())));
    }
    let game = file.game().map_err(Failure::Engine)?;
    Ok((file, game))
}

fn load_policy(path: &Path) -> Run<PolicyFile> {
    PolicyFile::parse(&read(path)?).map_err(|error| Failure::Input { path: path.to_path_buf(), error })
}

fn load_evidence(path: &Path) -> Run<EvidenceSet> {
    parse_evidence(&read(path)?).map_err(|error| Failure::Input { path: path.to_path_buf(), error })
}

fn load_incentives(path: &Path) -> Run<IncentiveRuleSet<Rational>> {
    let file = load_game_file(path)?;
    let Some(net) = file.net() else {
        return Err(Failure::Usage(format!("{} must be an MC-Net file", path.display())));
    };
    IncentiveRuleSet::new(net).map_err(engine(&file.universe))
}

fn same_universe(a: &Universe, b: &Universe, what: &str) -> Run<()> {
    if a == b {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{what} use different agents: [{}] vs [{}]", a.names().join(", "), b.names().join(", "))))
    }
}

/// The incentive net from `--incentives`, or the policy regulation.
fn regulation(
    game: &Game<Rational>,
    policy: Option<&PolicyFile>,
    incentives: Option<&Path>,
) -> Run<(IncentiveRuleSet<Rational>, &'static str)> {
    match (incentives, policy) {
        (Some(path), _) => {
            let set = load_incentives(path)?;
            same_universe(game.universe(), set.net().universe(), "game and incentives")?;
            Ok((set, "file"))
        }
        (None, Some(p)) => {
            same_universe(game.universe(), p.policy.universe(), "game and policy")?;
            let set = generate_policy_regulation(game, &p.policy).map_err(engine(game.universe()))?;
            Ok((set, "generated from policy"))
        }
        (None, None) => Err(Failure::Usage("either --policy or --incentives is required".into())),
    }
}

fn parse_coalition(universe: &Universe, text: &str) -> Run<Coalition> {
    let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
    let names: Vec<&str> = trimmed.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    universe.coalition(&names).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_rational(text: &str, what: &str) -> Run<Rational> {
    parse_scalar(text.trim()).ok_or_else(|| Failure::Usage(format!("{what}: `{text}` is not a rational \"p/q\"")))
}

fn pair(universe: &Universe, check: PairCheck) -> Value {
    match check.witness() {
        None => Value::Null,
        Some((a, b)) => json!({"first": universe.member_names(a), "second": universe.member_names(b)}),
    }
}

/// Parses arguments, runs the command and renders its output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((code, value)) => {
            let format = if cli.command.writes_game_file() { Format::Json } else { cli.format };
            Outcome { code, stdout: emit(&value, format), stderr: String::new() }
        }
        Err(f) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: f.message() + "\n" },
    }
}

impl Command {
    /// Commands whose output is itself a game file, printed as JSON whatever the format.
    fn writes_game_file(&self) -> bool {
        matches!(self, Command::Convert { .. } | Command::Regulate { .. } | Command::Compose { .. })
    }
}

fn apply_cap_override() -> Run<()> {
    match std::env::var(MAX_AGENTS_ENV) {
        Err(_) => Ok(()),
        Ok(text) => {
            let cap: usize = text
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{MAX_AGENTS_ENV}=`{text}` is not a number of agents")))?;
            set_max_agents(cap);
            Ok(())
        }
    }
}

fn execute(cli: &Cli) -> Run<(i32, Value)> {
    apply_cap_override()?;
    let style = Style { format: cli.format, decimals: cli.decimals };
    let (code, value, is_report) = dispatch(&cli.command, &style)?;
    let value = match value {
        Value::Object(mut map) if is_report && cli.timestamps => {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            map.insert("generated_at".into(), Value::from(secs));
            Value::Object(map)
        }
        other => other,
    };
    Ok((code, value))
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

/// Returns the exit code, the output tree, and whether the tree is a
/// report (as opposed to a file meant to be read back).
fn dispatch(command: &Command, style: &Style) -> Run<(i32, Value, bool)> {
    match command {
        Command::Validate { game } => validate(game, style).map(|(c, v)| (c, v, true)),
        Command::Value { game, coalition } => {
            let (file, game) = load_game(game)?;
            let u = &file.universe;
            let s = parse_coalition(u, coalition)?;
            let mut r = Report::new("value");
            r.set("coalition", style.coalition(u, s)).set("value", style.number(&game.worth(s)));
            if let Some(net) = game.as_net() {
                let applicable = net.applicable_rules(s).map_err(engine(u))?;
                r.set("applicable_rules", applicable);
            }
            Ok((EXIT_OK, r.into_value(), true))
        }
        Command::Shapley { game, method } => shapley_command(game, *method, style).map(|(c, v)| (c, v, true)),
        Command::Core { game, alloc } => core_command(game, alloc.as_deref(), style).map(|(c, v)| (c, v, true)),
        Command::Balanced { game } => {
            let (file, game) = load_game(game)?;
            let u = &file.universe;
            let verdict_ = is_balanced(&game).map_err(engine(u))?;
            let mut r = Report::new("balanced");
            r.set("agents", u.names()).set("balanced", verdict_.balanced).set(
                "method",
                if u.len() <= VERTEX_ENUMERATION_MAX_AGENTS {
                    "core feasibility, cross-checked by balanced-vector enumeration"
                } else {
                    "core feasibility"
                },
            );
            if let Some(v) = &verdict_.violating {
                let weights: Vec<Value> = v
                    .weights
                    .iter()
                    .map(|(s, w)| json!({"coalition": style.coalition(u, *s), "weight": style.number(w)}))
                    .collect();
                r.set("violating_weights", weights)
                    .set("weighted_value", style.number(&v.weighted_value(&game)))
                    .set("grand_value", style.number(&game.worth(u.grand())));
            }
            Ok((verdict(verdict_.balanced), r.into_value(), true))
        }
        Command::Supermodular { game } => {
            let (file, game) = load_game(game)?;
            let check = is_supermodular(&game).map_err(engine(&file.universe))?;
            let mut r = Report::new("supermodular");
            r.set("supermodular", check.holds()).set("witness", pair(&file.universe, check));
            Ok((verdict(check.holds()), r.into_value(), true))
        }
        Command::Convert { game, to } => {
            let (file, game) = load_game(game)?;
            let out = match to {
                Target::Mcnet => match game.as_net() {
                    Some(net) => GameFile::from_net(net, false),
                    None => GameFile::from_net(&to_mcnet(&game).map_err(engine(&file.universe))?, false),
                },
                Target::Values => explicit(&file.universe, &game).map_err(engine(&file.universe))?,
            };
            Ok((EXIT_OK, out.to_value(), false))
        }
        Command::Regulate { game, policy } => {
            let (file, game) = load_game(game)?;
            let u = &file.universe;
            let set = match policy {
                Some(path) => {
                    let p = load_policy(path)?;
                    same_universe(u, p.policy.universe(), "game and policy")?;
                    generate_policy_regulation(&game, &p.policy).map_err(engine(u))?
                }
                None => {
                    let net = match game.as_net() {
                        Some(net) => net.clone(),
                        None => to_mcnet(&game).map_err(engine(u))?,
                    };
                    generate_regulation(&net).map_err(engine(u))?
                }
            };
            Ok((EXIT_OK, GameFile::from_net(set.net(), true).to_value(), false))
        }
        Command::Compose { game, incentives } => {
            let (_, game) = load_game(game)?;
            let (set, _) = regulation(&game, None, Some(incentives))?;
            let u = game.universe().clone();
            let cisn = compose(game, set).map_err(engine(&u))?;
            let out = match cisn.as_net() {
                Some(net) => {
                    let rules = net.into_rules().into_iter().filter(|r| r.value != Rational::default()).collect();
                    GameFile::from_net(&MCNet::new(u, rules), false)
                }
                None => explicit(&u, &cisn).map_err(engine(&u))?,
            };
            Ok((EXIT_OK, out.to_value(), false))
        }
        Command::Enforce { game, policy, incentives } => {
            enforce_command(game, policy, incentives.as_deref(), style).map(|(c, v)| (c, v, true))
        }
        Command::Comply { policy, evidence } => {
            let p = load_policy(policy)?;
            let e = load_evidence(evidence)?;
            let u = p.policy.universe();
            same_universe(u, e.universe(), "policy and evidence")?;
            let c = compliance(&e, &p.policy).map_err(engine(u))?;
            let list = |v: &[Coalition]| Value::Array(v.iter().map(|s| style.coalition(u, *s)).collect());
            let mut r = Report::new("comply");
            r.set("compliant", c.compliant)
                .set("missing", list(&c.missing))
                .set("extra", list(&c.extra))
                .set("policy_default_assumed", p.default_assumed);
            Ok((verdict(c.compliant), r.into_value(), true))
        }
        Command::Tax { game, evidence, policy, incentives } => {
            let (cisn, _, e, source) = cisn_setup(game, policy.as_deref(), evidence, incentives.as_deref())?;
            let u = cisn.base().universe().clone();
            let tau = collectible_tax(&cisn, &e).map_err(engine(&u))?;
            let per: Vec<Value> = e
                .realized()
                .iter()
                .map(|&s| {
                    let i = cisn.incentives().incentive(s).map_err(engine(&u))?;
                    Ok(json!({"coalition": style.coalition(&u, s), "incentive": style.number(&i)}))
                })
                .collect::<Run<_>>()?;
            let mut r = Report::new("tax");
            r.set("tau", style.number(&tau)).set("realized", per).set("regulation", source);
            Ok((EXIT_OK, r.into_value(), true))
        }
        Command::Redistribute { game, policy, evidence, incentives, tau } => {
            let (cisn, p, e, source) = cisn_setup(game, Some(policy), evidence, incentives.as_deref())?;
            let p = p.expect("policy given");
            let u = cisn.base().universe().clone();
            let tau = match tau {
                Some(text) => parse_rational(text, "--tau")?,
                None => collectible_tax(&cisn, &e).map_err(engine(&u))?,
            };
            let result = redistribute(&cisn, &p.policy, &e, tau).map_err(engine(&u))?;
            let mut r = Report::new("redistribute");
            r.set("agents", u.names())
                .set("tau", style.number(&result.tau))
                .set("omega", style.allocation(&result.omega))
                .set("residual", style.number(&result.residual))
                .set("budget_balanced", result.omega.total() == result.tau)
                .set(
                    "implemented_promoted",
                    Value::Array(result.implemented_promoted.iter().map(|s| style.coalition(&u, *s)).collect()),
                )
                .set("union", style.coalition(&u, result.union))
                .set("cross_group_synergy", result.cross_group_synergy)
                .set("regulation", source)
                .set("policy_default_assumed", p.default_assumed);
            Ok((EXIT_OK, r.into_value(), true))
        }
        Command::Selftest { seed, cases } => {
            let checks = selftest::<Rational>(*seed, *cases);
            let ok = checks.iter().all(|c| c.passed());
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "cases": c.cases,
                        "failures": c.failures,
                        "first_failure": c.first_failure,
                    })
                })
                .collect();
            let mut r = Report::new("selftest");
            r.set("seed", *seed).set("checks", rows).set("passed", ok);
            Ok((verdict(ok), r.into_value(), true))
        }
    }
}

/// Explicit values for every coalition of two or more agents plus the
/// non-zero singletons.
fn explicit<G: CoalitionalGame<Rational>>(universe: &Universe, game: &G) -> symbiont::Result<GameFile> {
    let values = game.tabulate()?;
    let entries = all_coalitions(universe.len())
        .into_iter()
        .filter(|s| s.len() >= 2 || (s.len() == 1 && values[s.bits() as usize] != Rational::default()))
        .map(|s| (s, values[s.bits() as usize].clone()));
    Ok(GameFile::from_values(universe, entries))
}

fn cisn_setup(
    game: &Path,
    policy: Option<&Path>,
    evidence: &Path,
    incentives: Option<&Path>,
) -> Run<(CisnGame<Rational>, Option<PolicyFile>, EvidenceSet, &'static str)> {
    let (_, game) = load_game(game)?;
    let policy = policy.map(load_policy).transpose()?;
    if let Some(p) = &policy {
        same_universe(game.universe(), p.policy.universe(), "game and policy")?;
    }
    let e = load_evidence(evidence)?;
    same_universe(game.universe(), e.universe(), "game and evidence")?;
    let (set, source) = regulation(&game, policy.as_ref(), incentives)?;
    let u = game.universe().clone();
    let cisn = compose(game, set).map_err(engine(&u))?;
    Ok((cisn, policy, e, source))
}

fn validate(path: &Path, style: &Style) -> Run<(i32, Value)> {
    let file = load_game_file(path)?;
    let u = &file.universe;
    let mut r = Report::new("validate");
    r.set("agents", u.names());
    let backing = match &file.source {
        GameSource::Values(_) => "values",
        GameSource::Costs(_) => "costs",
        GameSource::Net(_) => "mcnet",
    };
    r.set("backing", backing).set("incentive", file.incentive);
    let mut valid = true;
    if let Some(net) = file.net() {
        let context = if file.incentive { RuleContext::Incentive } else { RuleContext::Basic };
        let report = net.validate(context);
        valid &= report.is_ok();
        r.set("rule_violations", report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    }
    if !file.incentive {
        let game = file.game().map_err(Failure::Engine)?;
        let check = check_superadditive(&game).map_err(engine(u))?;
        valid &= check.holds();
        r.set("superadditive", check.holds()).set("superadditivity_witness", pair(u, check));
        if check.holds() && u.len() >= 2 {
            let class = classify(&game).map_err(engine(u))?;
            r.set("class", if class == IsnClass::Lambda { "lambda" } else { "delta" });
        }
        r.set("grand_value", style.number(&game.worth(u.grand())));
    }
    r.set("valid", valid).set("max_agents", max_agents());
    Ok((verdict(valid), r.into_value()))
}

fn shapley_command(path: &Path, method: Method, style: &Style) -> Run<(i32, Value)> {
    let (file, game) = load_game(path)?;
    let u = &file.universe;
    let by_rules = || -> Run<Allocation<Rational>> {
        match game.backing() {
            Backing::Net(net) => shapley_mcnet(net),
            Backing::Table(_) => to_mcnet(&game).and_then(|net| shapley_mcnet(&net)),
        }
        .map_err(engine(u))
    };
    let by_subsets = || shapley_permutation(&game).map_err(engine(u));
    let mut r = Report::new("shapley");
    r.set("agents", u.names());
    let code = match method {
        Method::Auto => {
            let phi = shapley(&game).map_err(engine(u))?;
            let used = if game.as_net().is_some() { "mcnet" } else { "subsets" };
            r.set("method", used).set("shapley", style.allocation(&phi));
            EXIT_OK
        }
        Method::Mcnet => {
            r.set("method", "mcnet").set("shapley", style.allocation(&by_rules()?));
            EXIT_OK
        }
        Method::Subsets => {
            r.set("method", "subsets").set("shapley", style.allocation(&by_subsets()?));
            EXIT_OK
        }
        Method::Both => {
            let (a, b) = (by_rules()?, by_subsets()?);
            let agree = a == b;
            r.set("method", "both")
                .set("shapley", style.allocation(&a))
                .set("by_method", json!({"mcnet": style.allocation(&a), "subsets": style.allocation(&b)}))
                .set("agree", agree);
            verdict(agree)
        }
    };
    Ok((code, r.into_value()))
}

fn core_command(path: &Path, alloc: Option<&str>, style: &Style) -> Run<(i32, Value)> {
    let (file, game) = load_game(path)?;
    let u = &file.universe;
    let mut r = Report::new("core");
    r.set("agents", u.names());
    if let Some(text) = alloc {
        let payoffs = text
            .split(',')
            .map(|p| parse_rational(p, "--alloc"))
            .collect::<Run<Vec<Rational>>>()?;
        let x = Allocation(payoffs);
        let violation = core_membership(&game, &x).map_err(engine(u))?;
        r.set("allocation", style.allocation(&x)).set("in_core", violation.is_none());
        if let Some(v) = &violation {
            let detail = match v {
                symbiont::CoreViolation::Efficiency { required, allocated } => json!({
                    "kind": "efficiency",
                    "coalition": style.coalition(u, u.grand()),
                    "required": style.number(required),
                    "allocated": style.number(allocated),
                }),
                symbiont::CoreViolation::Rationality { coalition, required, allocated } => json!({
                    "kind": "rationality",
                    "coalition": style.coalition(u, *coalition),
                    "required": style.number(required),
                    "allocated": style.number(allocated),
                }),
            };
            r.set("violation", detail);
        }
        return Ok((verdict(violation.is_none()), r.into_value()));
    }

    let core = core_feasible(&game).map_err(engine(u))?;
    r.set("core", if core.nonempty { "non-empty" } else { "empty" });
    if let Some(x) = &core.witness {
        r.set("witness", style.allocation(x));
    }
    if let Some(c) = &core.conflict {
        let rows: Vec<Value> = c
            .certificate
            .inequality_weights
            .iter()
            .zip(&c.coalitions)
            .filter(|(w, _)| **w != Rational::default())
            .map(|(w, &s)| {
                json!({
                    "coalition": style.coalition(u, s),
                    "at_least": style.number(&game.worth(s)),
                    "weight": style.number(w),
                })
            })
            .collect();
        let balanced: Vec<Value> = c
            .balanced
            .weights
            .iter()
            .map(|(s, w)| json!({"coalition": style.coalition(u, *s), "weight": style.number(w)}))
            .collect();
        r.set(
            "conflict",
            json!({
                "efficiency": {
                    "coalition": style.coalition(u, u.grand()),
                    "equals": style.number(&game.worth(u.grand())),
                    "weight": style.number(&c.certificate.equality_weights[0]),
                },
                "constraints": rows,
                "balanced_weights": balanced,
                "gap": style.number(&c.gap),
                "certificate_verified": c.certificate.verify(&c.system),
            }),
        );
    }
    Ok((verdict(core.nonempty), r.into_value()))
}

fn enforce_command(game: &Path, policy: &Path, incentives: Option<&Path>, style: &Style) -> Run<(i32, Value)> {
    let (_, game) = load_game(game)?;
    let p = load_policy(policy)?;
    same_universe(game.universe(), p.policy.universe(), "game and policy")?;
    let (set, source) = regulation(&game, Some(&p), incentives)?;
    let u = game.universe().clone();
    let cisn = compose(game, set).map_err(engine(&u))?;
    let report = verify_enforcement(&cisn, &p.policy).map_err(engine(&u))?;
    let promoted: Vec<Value> = report
        .promoted
        .iter()
        .map(|o| {
            json!({
                "coalition": style.coalition(&u, o.coalition),
                "composed_value": style.number(&o.composed_value),
                "stable": o.implementability.stable,
                "fair_and_stable": o.implementability.fair_and_stable,
                "shapley": style.allocation(&o.implementability.shapley),
                "ok": o.ok,
            })
        })
        .collect();
    let prohibited: Vec<Value> = report
        .prohibited
        .iter()
        .map(|o| {
            json!({
                "coalition": style.coalition(&u, o.coalition),
                "composed_value": style.number(&o.composed_value),
                "core_nonempty": o.core_nonempty,
                "unimplementable": o.unimplementable,
            })
        })
        .collect();
    let grand = check_implementable(&cisn).map_err(engine(&u))?;
    let mut r = Report::new("enforce");
    r.set("agents", u.names())
        .set("ok", report.ok)
        .set("promoted", promoted)
        .set("prohibited", prohibited)
        .set("composed_shapley", style.allocation(&grand.shapley))
        .set("regulation", source)
        .set("policy_default_assumed", p.default_assumed);
    Ok((verdict(report.ok), r.into_value()))
}

//! Game, policy and evidence files.
//!
//! Parsing goes through a strict JSON reader (duplicate object keys are
//! errors) and then a schema walk that reports JSON-pointer paths.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};
use serde_json::{Map, Value};
use symbiont::coalition::by_size_then_canonical;
use symbiont::{
    build_isn_game, parse_scalar, Coalition, CostTable, Costs, EvidenceSet, Game, Label, MCNet, Policy, Rational,
    Rule, Universe,
};

/// A schema or syntax problem, anchored at a JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "at {at}: {}", self.message)
    }
}

impl std::error::Error for InputError {}

type Parsed<T> = Result<T, InputError>;

fn fail<T>(pointer: &str, message: impl Into<String>) -> Parsed<T> {
    Err(InputError { pointer: pointer.to_string(), message: message.into() })
}

// ---- strict JSON ----

struct Strict(Value);

impl<'de> Deserialize<'de> for Strict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(StrictVisitor).map(Strict)
    }
}

struct StrictVisitor;

impl<'de> Visitor<'de> for StrictVisitor {
    type Value = Value;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a JSON value")
    }

    fn visit_bool<E>(self, v: bool) -> Result<Value, E> {
        Ok(Value::Bool(v))
    }

    fn visit_i64<E>(self, v: i64) -> Result<Value, E> {
        Ok(Value::from(v))
    }

    fn visit_u64<E>(self, v: u64) -> Result<Value, E> {
        Ok(Value::from(v))
    }

    fn visit_f64<E>(self, v: f64) -> Result<Value, E> {
        Ok(Value::from(v))
    }

    fn visit_str<E>(self, v: &str) -> Result<Value, E> {
        Ok(Value::String(v.to_string()))
    }

    fn visit_string<E>(self, v: String) -> Result<Value, E> {
        Ok(Value::String(v))
    }

    fn visit_unit<E>(self) -> Result<Value, E> {
        Ok(Value::Null)
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Value, A::Error> {
        let mut out = Vec::new();
        while let Some(Strict(v)) = seq.next_element()? {
            out.push(v);
        }
        Ok(Value::Array(out))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Value, A::Error> {
        let mut out = Map::new();
        while let Some(key) = map.next_key::<String>()? {
            if out.contains_key(&key) {
                return Err(de::Error::custom(format!("duplicate key `{key}`")));
            }
            let Strict(v) = map.next_value()?;
            out.insert(key, v);
        }
        Ok(Value::Object(out))
    }
}

/// Parses JSON text, rejecting duplicate object keys. Syntax errors carry
/// line and column.
pub fn parse_json(text: &str) -> Parsed<Value> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = Strict::deserialize(&mut de).map_err(|e| InputError { pointer: String::new(), message: e.to_string() })?;
    de.end().map_err(|e| InputError { pointer: String::new(), message: e.to_string() })?;
    Ok(value.0)
}

// ---- schema walk ----

#[derive(Clone, Copy)]
struct Node<'a> {
    value: &'a Value,
    pointer: &'a str,
}

fn child(pointer: &str, key: impl fmt::Display) -> String {
    let key = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{pointer}/{key}")
}

fn object<'a>(node: Node<'a>, allowed: &[&str]) -> Parsed<&'a Map<String, Value>> {
    let Value::Object(map) = node.value else { return fail(node.pointer, "expected an object") };
    if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return fail(&child(node.pointer, key), format!("unknown field `{key}`; expected one of {}", allowed.join(", ")));
    }
    Ok(map)
}

fn array<'a>(node: Node<'a>) -> Parsed<&'a [Value]> {
    match node.value {
        Value::Array(items) => Ok(items),
        _ => fail(node.pointer, "expected an array"),
    }
}

fn rational(node: Node<'_>) -> Parsed<Rational> {
    let parsed = match node.value {
        Value::String(s) => parse_scalar::<Rational>(s.trim()),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_scalar::<Rational>(&n.to_string()),
        Value::Number(_) => return fail(node.pointer, "fractional JSON numbers are not exact; write \"p/q\""),
        _ => None,
    };
    parsed.map_or_else(|| fail(node.pointer, format!("expected a rational \"p/q\" or integer, got {}", node.value)), Ok)
}

fn coalition(node: Node<'_>, universe: &Universe) -> Parsed<Coalition> {
    let mut s = Coalition::EMPTY;
    for (k, item) in array(node)?.iter().enumerate() {
        let pointer = child(node.pointer, k);
        let Value::String(name) = item else { return fail(&pointer, "expected an agent name") };
        let Some(id) = universe.id_of(name) else { return fail(&pointer, format!("unknown agent `{name}`")) };
        if s.contains(id.0) {
            return fail(&pointer, format!("agent `{name}` listed twice"));
        }
        s = s.with(id.0);
    }
    Ok(s)
}

fn coalitions(node: Node<'_>, universe: &Universe) -> Parsed<Vec<Coalition>> {
    array(node)?
        .iter()
        .enumerate()
        .map(|(k, v)| coalition(Node { value: v, pointer: &child(node.pointer, k) }, universe))
        .collect()
}

fn universe(root: &Map<String, Value>) -> Parsed<Universe> {
    let Some(value) = root.get("universe") else { return fail("", "missing field `universe`") };
    let node = Node { value, pointer: "/universe" };
    let mut names = Vec::new();
    for (k, item) in array(node)?.iter().enumerate() {
        match item {
            Value::String(s) if !s.is_empty() => names.push(s.clone()),
            _ => return fail(&child("/universe", k), "expected a non-empty agent name"),
        }
    }
    Universe::new(names).or_else(|e| fail("/universe", e.to_string()))
}

fn field<'a>(map: &'a Map<String, Value>, pointer: &str, key: &str) -> Parsed<(&'a Value, String)> {
    match map.get(key) {
        Some(v) => Ok((v, child(pointer, key))),
        None => fail(pointer, format!("missing field `{key}`")),
    }
}

/// Renders a coalition the way files write it.
pub fn names(universe: &Universe, s: Coalition) -> Value {
    Value::Array(universe.member_names(s).into_iter().map(|n| Value::String(n.to_string())).collect())
}

pub fn rational_value(q: &Rational) -> Value {
    Value::String(q.to_string())
}

// ---- game files ----

/// The three ways a game file may describe its game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameSource {
    /// Explicit values; sorted by size then canonical order.
    Values(Vec<(Coalition, Rational)>),
    /// ISN costs; sorted like values.
    Costs(Vec<(Coalition, Costs<Rational>)>),
    /// Rules in file order.
    Net(Vec<Rule<Rational>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameFile {
    pub universe: Universe,
    pub source: GameSource,
    /// Marks an incentive net; zero-valued rules are then allowed.
    pub incentive: bool,
}

impl GameFile {
    pub fn parse(text: &str) -> Parsed<Self> {
        Self::from_value(&parse_json(text)?)
    }

    pub fn from_value(value: &Value) -> Parsed<Self> {
        let root = object(Node { value, pointer: "" }, &["universe", "values", "costs", "mcnet", "incentive"])?;
        let universe = universe(root)?;
        let backings: Vec<&str> = ["values", "costs", "mcnet"].into_iter().filter(|k| root.contains_key(*k)).collect();
        if backings.len() != 1 {
            return fail("", format!("exactly one of `values`, `costs`, `mcnet` is required, found {}", backings.len()));
        }
        let incentive = match root.get("incentive") {
            None => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => return fail("/incentive", "expected true or false"),
        };
        if incentive && backings[0] != "mcnet" {
            return fail("/incentive", "only `mcnet` files can be incentive nets");
        }
        let source = match backings[0] {
            "values" => GameSource::Values(Self::keyed(root, "values", &universe, |entry, pointer| {
                let map = object(Node { value: entry, pointer }, &["coalition", "value"])?;
                let (v, p) = field(map, pointer, "value")?;
                rational(Node { value: v, pointer: &p })
            })?),
            "costs" => GameSource::Costs(Self::keyed(root, "costs", &universe, |entry, pointer| {
                let map = object(Node { value: entry, pointer }, &["coalition", "traditional", "operational"])?;
                let (t, tp) = field(map, pointer, "traditional")?;
                let (o, op) = field(map, pointer, "operational")?;
                Ok(Costs {
                    traditional: rational(Node { value: t, pointer: &tp })?,
                    operational: rational(Node { value: o, pointer: &op })?,
                })
            })?),
            _ => GameSource::Net(Self::rules(root, &universe)?),
        };
        let file = Self { universe, source, incentive };
        file.check_structure()?;
        Ok(file)
    }

    /// Entries keyed by coalition; duplicates are reported by name.
    fn keyed<V>(
        root: &Map<String, Value>,
        key: &str,
        universe: &Universe,
        mut payload: impl FnMut(&Value, &str) -> Parsed<V>,
    ) -> Parsed<Vec<(Coalition, V)>> {
        let pointer = child("", key);
        let mut seen: BTreeMap<Coalition, String> = BTreeMap::new();
        let mut out = Vec::new();
        for (k, entry) in array(Node { value: &root[key], pointer: &pointer })?.iter().enumerate() {
            let entry_pointer = child(&pointer, k);
            let map = match entry {
                Value::Object(map) => map,
                _ => return fail(&entry_pointer, "expected an object"),
            };
            let (c, cp) = field(map, &entry_pointer, "coalition")?;
            let s = coalition(Node { value: c, pointer: &cp }, universe)?;
            if let Some(first) = seen.get(&s) {
                return fail(
                    &cp,
                    format!("duplicate coalition key {} (first given at {first})", universe.render(s)),
                );
            }
            seen.insert(s, cp);
            out.push((s, payload(entry, &entry_pointer)?));
        }
        out.sort_by(|a, b| by_size_then_canonical(&a.0, &b.0));
        Ok(out)
    }

    fn rules(root: &Map<String, Value>, universe: &Universe) -> Parsed<Vec<Rule<Rational>>> {
        let mut out = Vec::new();
        for (k, entry) in array(Node { value: &root["mcnet"], pointer: "/mcnet" })?.iter().enumerate() {
            let pointer = child("/mcnet", k);
            let map = object(Node { value: entry, pointer: &pointer }, &["positive", "negative", "value"])?;
            let (p, pp) = field(map, &pointer, "positive")?;
            let positive = coalition(Node { value: p, pointer: &pp }, universe)?;
            let negative = match map.get("negative") {
                Some(n) => coalition(Node { value: n, pointer: &child(&pointer, "negative") }, universe)?,
                None => Coalition::EMPTY,
            };
            let (v, vp) = field(map, &pointer, "value")?;
            let value = rational(Node { value: v, pointer: &vp })?;
            if positive.is_empty() {
                return fail(&pp, "positive pattern must name at least one agent");
            }
            if !positive.is_disjoint(negative) {
                return fail(
                    &child(&pointer, "negative"),
                    format!("agents {} appear in both patterns", universe.render(positive.intersection(negative))),
                );
            }
            out.push(Rule::new(positive, negative, value));
        }
        Ok(out)
    }

    /// Checks every constructor will accept, reported with paths.
    fn check_structure(&self) -> Parsed<()> {
        match &self.source {
            GameSource::Values(_) => self.game().map(|_| ()).or_else(|e| fail("/values", e)),
            GameSource::Costs(_) => self.game().map(|_| ()).or_else(|e| fail("/costs", e)),
            GameSource::Net(_) => Ok(()),
        }
    }

    pub fn cost_table(&self) -> Result<CostTable<Rational>, String> {
        match &self.source {
            GameSource::Costs(entries) => {
                CostTable::new(self.universe.clone(), entries.iter().cloned()).map_err(|e| describe(&self.universe, &e))
            }
            _ => Err("not a cost file".into()),
        }
    }

    /// The game this file describes. Cost files must be superadditive.
    pub fn game(&self) -> Result<Game<Rational>, String> {
        let u = &self.universe;
        match &self.source {
            GameSource::Values(entries) => {
                Game::from_table(u.clone(), entries.iter().cloned()).map_err(|e| describe(u, &e))
            }
            GameSource::Costs(_) => build_isn_game(&self.cost_table()?).map_err(|e| describe(u, &e)),
            GameSource::Net(_) => Ok(Game::from_net(self.net().expect("net source"))),
        }
    }

    pub fn net(&self) -> Option<MCNet<Rational>> {
        match &self.source {
            GameSource::Net(rules) => Some(MCNet::new(self.universe.clone(), rules.clone())),
            _ => None,
        }
    }

    pub fn from_net(net: &MCNet<Rational>, incentive: bool) -> Self {
        Self { universe: net.universe().clone(), source: GameSource::Net(net.rules().to_vec()), incentive }
    }

    /// Every non-empty coalition with a non-zero value, in canonical order.
    pub fn from_values(universe: &Universe, values: impl IntoIterator<Item = (Coalition, Rational)>) -> Self {
        let mut entries: Vec<(Coalition, Rational)> = values.into_iter().collect();
        entries.sort_by(|a, b| by_size_then_canonical(&a.0, &b.0));
        Self { universe: universe.clone(), source: GameSource::Values(entries), incentive: false }
    }

    /// Canonical JSON; parses back to an equal file.
    pub fn to_value(&self) -> Value {
        let u = &self.universe;
        let mut root = Map::new();
        root.insert("universe".into(), Value::Array(u.names().iter().cloned().map(Value::String).collect()));
        match &self.source {
            GameSource::Values(entries) => {
                let items = entries
                    .iter()
                    .map(|(s, v)| serde_json::json!({"coalition": names(u, *s), "value": rational_value(v)}))
                    .collect();
                root.insert("values".into(), Value::Array(items));
            }
            GameSource::Costs(entries) => {
                let items = entries
                    .iter()
                    .map(|(s, c)| {
                        serde_json::json!({
                            "coalition": names(u, *s),
                            "traditional": rational_value(&c.traditional),
                            "operational": rational_value(&c.operational),
                        })
                    })
                    .collect();
                root.insert("costs".into(), Value::Array(items));
            }
            GameSource::Net(rules) => {
                let items = rules
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "positive": names(u, r.positive),
                            "negative": names(u, r.negative),
                            "value": rational_value(&r.value),
                        })
                    })
                    .collect();
                root.insert("mcnet".into(), Value::Array(items));
                if self.incentive {
                    root.insert("incentive".into(), Value::Bool(true));
                }
            }
        }
        Value::Object(root)
    }
}

// ---- policy and evidence files ----

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolicyFile {
    pub policy: Policy,
    /// `default` was absent and `permitted` was assumed.
    pub default_assumed: bool,
}

impl PolicyFile {
    pub fn parse(text: &str) -> Parsed<Self> {
        let value = parse_json(text)?;
        let root = object(Node { value: &value, pointer: "" }, &["universe", "promoted", "prohibited", "default"])?;
        let universe = universe(root)?;
        let list = |key: &str| -> Parsed<Vec<Coalition>> {
            match root.get(key) {
                Some(v) => coalitions(Node { value: v, pointer: &child("", key) }, &universe),
                None => Ok(Vec::new()),
            }
        };
        let (promoted, prohibited) = (list("promoted")?, list("prohibited")?);
        let (default, default_assumed) = match root.get("default") {
            None => (Label::Permitted, true),
            Some(Value::String(s)) => match s.as_str() {
                "promoted" => (Label::Promoted, false),
                "permitted" => (Label::Permitted, false),
                "prohibited" => (Label::Prohibited, false),
                _ => return fail("/default", format!("unknown label `{s}`; expected promoted, permitted or prohibited")),
            },
            Some(_) => return fail("/default", "expected a label string"),
        };
        let policy = Policy::new(universe.clone(), promoted, prohibited, default)
            .or_else(|e| fail("", describe(&universe, &e)))?;
        Ok(Self { policy, default_assumed })
    }

    pub fn to_value(&self) -> Value {
        let u = self.policy.universe();
        serde_json::json!({
            "universe": u.names(),
            "promoted": self.policy.promoted().iter().map(|s| names(u, *s)).collect::<Vec<_>>(),
            "prohibited": self.policy.prohibited().iter().map(|s| names(u, *s)).collect::<Vec<_>>(),
            "default": self.policy.default_label().to_string(),
        })
    }
}

pub fn parse_evidence(text: &str) -> Parsed<EvidenceSet> {
    let value = parse_json(text)?;
    let root = object(Node { value: &value, pointer: "" }, &["universe", "realized"])?;
    let universe = universe(root)?;
    let (v, p) = field(root, "", "realized")?;
    let realized = coalitions(Node { value: v, pointer: &p }, &universe)?;
    EvidenceSet::new(universe.clone(), realized).or_else(|e| fail("/realized", describe(&universe, &e)))
}

/// Library errors with coalitions spelled out by agent name.
pub fn describe(universe: &Universe, error: &symbiont::Error) -> String {
    use symbiont::Error as E;
    let r = |s: &Coalition| universe.render(*s);
    match error {
        E::MissingEntry(s) => format!("missing value for coalition {}", r(s)),
        E::DuplicateEntry(s) => format!("duplicate coalition key {}", r(s)),
        E::NegativeCost(s) => format!("negative cost for coalition {}", r(s)),
        E::NotSuperadditive { first, second } => format!(
            "game is not superadditive: v({}) < v({}) + v({})",
            r(&first.union(*second)),
            r(first),
            r(second)
        ),
        E::ConflictingLabels(s) => format!("coalition {} is both promoted and prohibited", r(s)),
        E::NotExclusive { first, second } => format!("promoted coalitions {} and {} overlap", r(first), r(second)),
        other => other.to_string(),
    }
}

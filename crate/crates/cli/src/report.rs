//! Reports: a JSON tree and its plain-text rendering.
//!
//! Objects are `serde_json::Map`s (sorted keys), so identical inputs give
//! identical bytes. The text form is a walk over the same tree.

use clap::ValueEnum;
use serde_json::{Map, Value};
use symbiont::{Allocation, Coalition, Rational, Scalar, Universe};

use crate::input::{names, rational_value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Style {
    pub format: Format,
    /// Adds a decimal approximation with this many places next to every
    /// exact number.
    pub decimals: Option<usize>,
}

impl Style {
    pub fn number(&self, q: &Rational) -> Value {
        match self.decimals {
            None => rational_value(q),
            Some(places) => serde_json::json!({
                "exact": q.to_string(),
                "approx": format!("{:.*}", places, q.approx_f64()),
            }),
        }
    }

    pub fn numbers<'a>(&self, qs: impl IntoIterator<Item = &'a Rational>) -> Value {
        Value::Array(qs.into_iter().map(|q| self.number(q)).collect())
    }

    pub fn allocation(&self, x: &Allocation<Rational>) -> Value {
        self.numbers(x.payoffs())
    }

    pub fn coalition(&self, universe: &Universe, s: Coalition) -> Value {
        names(universe, s)
    }
}

/// Builder for a report object.
#[derive(Clone, Debug, Default)]
pub struct Report(Map<String, Value>);

impl Report {
    pub fn new(command: &str) -> Self {
        let mut map = Map::new();
        map.insert("command".into(), Value::String(command.into()));
        Self(map)
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.into(), value.into());
        self
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }
}

pub fn emit(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(value).expect("JSON values always serialize");
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = String::new();
            render(value, 0, &mut out);
            out
        }
    }
}

fn inline(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(map) if map.len() == 2 && map.contains_key("exact") && map.contains_key("approx") => {
            Some(format!("{} (~{})", inline(&map["exact"])?, inline(&map["approx"])?))
        }
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(_) => None,
    }
}

fn render(value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                match inline(v) {
                    Some(text) => out.push_str(&format!("{pad}{key}: {text}\n")),
                    None => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render(v, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match inline(item) {
                    Some(text) => out.push_str(&format!("{pad}- {text}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(item, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_keys_are_sorted() {
        let v = json!({"zeta": 1, "alpha": {"b": 2, "a": 1}});
        assert_eq!(emit(&v, Format::Json), "{\n  \"alpha\": {\n    \"a\": 1,\n    \"b\": 2\n  },\n  \"zeta\": 1\n}\n");
    }

    #[test]
    fn text_walks_the_same_tree() {
        let v = json!({
            "shapley": ["13/6", "5/3"],
            "conflict": {"gap": "1/2", "rows": [{"coalition": ["i", "j"], "weight": "1/2"}]},
            "empty": true,
        });
        assert_eq!(
            emit(&v, Format::Text),
            "conflict:\n  gap: 1/2\n  rows:\n    -\n      coalition: [i, j]\n      weight: 1/2\nempty: true\nshapley: [13/6, 5/3]\n"
        );
    }

    #[test]
    fn decimals_sit_next_to_exact_values() {
        let style = Style { format: Format::Text, decimals: Some(3) };
        let v = style.number(&Rational::ratio(13, 6));
        assert_eq!(v, json!({"exact": "13/6", "approx": "2.167"}));
        assert_eq!(inline(&v).unwrap(), "13/6 (~2.167)");
    }
}

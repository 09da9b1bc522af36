//! Plain-text and JSON reports.
//!
//! The JSON form is one object with the command name under `command`, scalar
//! entries in insertion order, optional arrays of flat row objects, and the
//! notes under `notes`.

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    command: String,
    entries: Vec<(String, Value)>,
    notes: Vec<String>,
}

/// Finite floats become numbers; infinities and NaN become strings.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(v.to_string()))
}

pub fn row<const N: usize>(fields: [(&str, Value); N]) -> Map<String, Value> {
    fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), entries: Vec::new(), notes: Vec::new() }
    }

    pub fn value(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }

    pub fn real(&mut self, key: &str, value: f64) -> &mut Self {
        self.value(key, number(value))
    }

    pub fn rows(&mut self, key: &str, rows: Vec<Map<String, Value>>) -> &mut Self {
        self.value(key, Value::Array(rows.into_iter().map(Value::Object).collect()))
    }

    pub fn note(&mut self, text: &str) -> &mut Self {
        self.notes.push(text.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), Value::String(self.command.clone()));
        for (k, v) in &self.entries {
            out.insert(k.clone(), v.clone());
        }
        if !self.notes.is_empty() {
            out.insert("notes".into(), Value::Array(self.notes.iter().cloned().map(Value::String).collect()));
        }
        Value::Object(out)
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        for (k, v) in &self.entries {
            match v {
                Value::Array(rows) => {
                    out.push_str(&format!("{k}:\n"));
                    render_rows(&mut out, rows);
                }
                other => out.push_str(&format!("{k}: {}\n", scalar(other))),
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_rows(out: &mut String, rows: &[Value]) {
    let Some(Value::Object(first)) = rows.first() else { return };
    let header: Vec<&String> = first.keys().collect();
    out.push_str("  ");
    out.push_str(&header.iter().map(|h| h.as_str()).collect::<Vec<_>>().join("  "));
    out.push('\n');
    for r in rows {
        if let Value::Object(map) = r {
            let cells: Vec<String> = header.iter().map(|h| map.get(*h).map(scalar).unwrap_or_default()).collect();
            out.push_str("  ");
            out.push_str(&cells.join("  "));
            out.push('\n');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_keep_order() {
        let mut r = Report::new("demo");
        r.real("b", 1.5).value("a", "x").rows("rows", vec![row([("k", 1.into()), ("v", number(-2.0))])]);
        r.note("hello");
        assert_eq!(r.render_text(), "# demo\nb: 1.5\na: x\nrows:\n  k  v\n  1  -2.0\nnote: hello\n");
        let json = r.render_json();
        assert!(json.find("\"b\"").unwrap() < json.find("\"a\"").unwrap());
        assert_eq!(r.to_json()["notes"][0], "hello");
    }

    #[test]
    fn non_finite_numbers_are_strings() {
        assert_eq!(number(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(number(0.25), serde_json::json!(0.25));
    }
}

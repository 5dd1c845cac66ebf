//! Deterministic command reports in two renderings: a human-readable
//! key/value listing and a machine-readable JSON object with sorted keys.

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

/// Everything a command wants to say: a fixed header (command, input,
/// parameters), a one-word status that also drives the exit code, free-form
/// detail lines for the human rendering, and a structured payload for the
/// machine rendering.
pub struct Report {
    pub command: &'static str,
    pub input: String,
    pub params: Vec<(&'static str, String)>,
    pub status: String,
    pub lines: Vec<String>,
    pub payload: Value,
}

impl Report {
    pub fn new(command: &'static str, input: &str) -> Report {
        Report {
            command,
            input: input.to_string(),
            params: Vec::new(),
            status: String::new(),
            lines: Vec::new(),
            payload: Value::Null,
        }
    }

    pub fn param(&mut self, key: &'static str, value: impl ToString) {
        self.params.push((key, value.to_string()));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// Renders to stdout. The machine format is a single JSON object; keys
    /// are emitted sorted, so equal reports are byte-equal.
    pub fn print(&self, format: Format) {
        match format {
            Format::Human => {
                println!("# toric {} {}", self.command, self.input);
                for (k, v) in &self.params {
                    println!("{k}: {v}");
                }
                println!("status: {}", self.status);
                for l in &self.lines {
                    println!("{l}");
                }
            }
            Format::Machine => {
                let params: serde_json::Map<String, Value> = self
                    .params
                    .iter()
                    .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                    .collect();
                let obj = json!({
                    "command": self.command,
                    "input": self.input,
                    "params": params,
                    "status": self.status,
                    "result": self.payload,
                });
                println!("{}", serde_json::to_string_pretty(&obj).expect("report is serializable"));
            }
        }
    }
}

/// Renders an integer vector as space-separated entries, matching the file
/// formats.
pub fn vec_str(v: &[toric::arith::Int]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Renders an index set like `{0, 2}`; the empty set is `{}`.
pub fn set_str<'a>(it: impl IntoIterator<Item = &'a usize>) -> String {
    let inner = it.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    format!("{{{inner}}}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_rendering_is_valid_json_with_sorted_keys() {
        let mut r = Report::new("check", "p2");
        r.param("k", 2);
        r.status = "valid".into();
        r.payload = json!({"b": 1, "a": 2});
        let params: serde_json::Map<String, Value> =
            r.params.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
        let obj = json!({
            "command": r.command,
            "input": r.input,
            "params": params,
            "status": r.status,
            "result": r.payload,
        });
        let s = serde_json::to_string(&obj).unwrap();
        // serde_json maps sort keys, so the rendering is canonical.
        assert!(s.find("\"command\"").unwrap() < s.find("\"input\"").unwrap());
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }

    #[test]
    fn formatting_helpers() {
        use toric::arith::vec_i64;
        assert_eq!(vec_str(&vec_i64(&[1, -2, 0])), "1 -2 0");
        assert_eq!(set_str(&[0usize, 2]), "{0, 2}");
        assert_eq!(set_str(&[]), "{}");
    }
}

use isorabi::{Complex64, Matrix2C};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::Path;

/// 17 significant digits, enough for an exact f64 round trip.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn cnum(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

pub fn matrix(m: &Matrix2C) -> Value {
    Value::Array(
        m.a.iter()
            .map(|row| Value::Array(row.iter().map(|&z| cnum(z)).collect()))
            .collect(),
    )
}

/// Top-level document: {command, params, results[], checks[]}.
pub struct Report {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub results: Vec<Value>,
    pub checks: Vec<Value>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            params: Map::new(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: Value) {
        self.params.insert(key.to_string(), value);
    }

    pub fn check(&mut self, name: &str, passed: bool, metric: f64, threshold: f64, detail: &str) {
        self.checks.push(json!({
            "name": name,
            "passed": passed,
            "metric": num(metric),
            "threshold": num(threshold),
            "detail": detail,
        }));
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "params": Value::Object(self.params.clone()),
            "results": self.results,
            "checks": self.checks,
        })
    }

    /// Flat CSV of `results` using `columns`; missing fields are left empty.
    pub fn to_csv(&self, columns: &[&str]) -> String {
        let mut out = columns.join(",");
        out.push('\n');
        for r in &self.results {
            let cells: Vec<String> = columns.iter().map(|c| cell(r.get(*c))).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) if s.contains(',') || s.contains('"') => {
            format!("\"{}\"", s.replace('"', "\"\""))
        }
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.1,
            -1.0 / 3.0,
            1e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
            -0.0,
        ] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn csv_fills_missing_columns() {
        let mut r = Report::new("x");
        r.results.push(json!({"a": "1", "c": true}));
        assert_eq!(r.to_csv(&["a", "b", "c"]), "a,b,c\n1,,true\n");
    }
}

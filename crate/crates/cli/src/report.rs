//! The JSON report envelope: {inputs, results, subcommand, version,
//! warnings} with sorted keys and floats rounded to 12 significant digits
//! so identical invocations render byte-identically.

use serde_json::{Map, Value};

use holotorsion_core::Scalar;

pub struct Report {
    subcommand: String,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    warnings: Vec<String>,
}

impl Report {
    pub fn new(subcommand: &str) -> Self {
        Report {
            subcommand: subcommand.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.to_string(), value);
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn warn(&mut self, message: String) {
        self.warnings.push(message);
    }

    pub fn render(&self) -> String {
        let body = serde_json::json!({
            "subcommand": self.subcommand,
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": Value::Object(self.inputs.clone()),
            "results": Value::Object(self.results.clone()),
            "warnings": self.warnings,
        });
        let mut text = serde_json::to_string_pretty(&body).expect("valid JSON");
        text.push('\n');
        text
    }

    pub fn print(&self) {
        print!("{}", self.render());
    }
}

/// Rounds to 12 significant digits; the shortest-roundtrip rendering of
/// the result is identical across platforms.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = 12 - 1 - x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits);
    (x * scale).round() / scale
}

pub fn sig12(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig12(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Exact scalar with a decimal companion.
pub fn scalar_value(s: &Scalar) -> Value {
    serde_json::json!({
        "exact": s.to_string(),
        "approx": sig12(s.to_f64()),
    })
}

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "liouville-lab/1";

/// How a verdict was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Rational arithmetic or Sturm sequences.
    Exact,
    /// Sampled over a deterministic grid.
    Grid,
    /// Seeded random trials.
    Randomized,
    /// Deterministic floating-point linear algebra with stated tolerances.
    Numeric,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Exact => "exact",
            Kind::Grid => "grid",
            Kind::Randomized => "randomized",
            Kind::Numeric => "numeric",
        }
    }
}

pub struct Report {
    pub command: &'static str,
    pub operation: &'static str,
    pub inputs: Value,
    pub verdict: String,
    pub kind: Kind,
    pub pass: bool,
    pub tolerances: Value,
    pub orientation: Value,
    pub result: Value,
    /// Lines for the human summary.
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, operation: &'static str, inputs: Value, kind: Kind) -> Self {
        Report {
            command,
            operation,
            inputs,
            verdict: String::new(),
            kind,
            pass: false,
            tolerances: json!({}),
            orientation: Value::Null,
            result: Value::Null,
            summary: vec![],
        }
    }

    pub fn verdict(mut self, verdict: impl Into<String>, pass: bool) -> Self {
        self.verdict = verdict.into();
        self.pass = pass;
        self
    }

    pub fn tolerances(mut self, t: Value) -> Self {
        self.tolerances = t;
        self
    }

    pub fn orientation(mut self, o: Value) -> Self {
        self.orientation = o;
        self
    }

    pub fn result(mut self, r: Value) -> Self {
        self.result = r;
        self
    }

    pub fn line(mut self, l: impl Into<String>) -> Self {
        self.summary.push(l.into());
        self
    }

    pub fn to_json(&self, seed: u64, timing: Option<f64>) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command));
        m.insert("operation".into(), json!(self.operation));
        m.insert("inputs".into(), self.inputs.clone());
        m.insert("verdict".into(), json!(self.verdict));
        m.insert("certificate_kind".into(), json!(self.kind.as_str()));
        m.insert("certificate".into(), json!(format!("{}-{}", self.verdict, self.kind.as_str())));
        m.insert("pass".into(), json!(self.pass));
        m.insert("tolerances".into(), self.tolerances.clone());
        m.insert("orientation".into(), self.orientation.clone());
        m.insert("seed".into(), json!(seed));
        m.insert("result".into(), self.result.clone());
        if let Some(t) = timing {
            m.insert("timing".into(), json!({"seconds": t}));
        }
        Value::Object(m)
    }

    pub fn human(&self, timing: Option<f64>) -> String {
        let mut out = format!(
            "{}: {} ({} certificate, {})\n",
            self.command,
            if self.pass { "PASS" } else { "FAIL" },
            self.kind.as_str(),
            self.verdict
        );
        for l in &self.summary {
            out.push_str("  ");
            out.push_str(l);
            out.push('\n');
        }
        if let Some(t) = timing {
            out.push_str(&format!("  time: {t:.3}s\n"));
        }
        out
    }
}

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

/// One table cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    /// A 0-based index sequence, shown 1-based.
    Seq(Vec<usize>),
    /// A decimal integer of any size.
    Int(String),
    Text(String),
}

impl Cell {
    pub fn int(v: impl ToString) -> Self {
        Cell::Int(v.to_string())
    }

    fn tsv(&self) -> String {
        match self {
            Cell::Seq(s) => s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" "),
            Cell::Int(s) | Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Seq(s) => json!(s.iter().map(|i| i + 1).collect::<Vec<_>>()),
            Cell::Int(s) => s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(s.as_str())),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    /// Columns past this index appear only in JSON output.
    pub tsv_width: usize,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str], tsv_width: usize) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            tsv_width,
            rows: Vec::new(),
        }
    }
}

/// Everything a command prints. Only `wall_time_ms` depends on the run;
/// the rest is a function of the inputs, flags and seed.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub input_sha256: Option<String>,
    pub seed: Option<u64>,
    pub engine: String,
    pub wall_time_ms: f64,
    /// Scalar results, in order.
    pub fields: Vec<(String, Cell)>,
    pub tables: Vec<(String, Table)>,
    pub text: Vec<String>,
    pub violations: Vec<Value>,
}

impl RunReport {
    pub fn new(command: String, engine: &str) -> Self {
        RunReport {
            command,
            engine: engine.to_string(),
            ..Default::default()
        }
    }

    pub fn field(&mut self, key: &str, value: Cell) {
        self.fields.push((key.to_string(), value));
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        if let Some(d) = &self.input_sha256 {
            let _ = writeln!(out, "# input-sha256: {d}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "# seed: {s}");
        }
        let _ = writeln!(out, "# engine: {}", self.engine);
        let _ = writeln!(out, "# wall-time-ms: {:.3}", self.wall_time_ms);
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k}\t{}", v.tsv());
        }
        for (name, t) in &self.tables {
            if !name.is_empty() {
                let _ = writeln!(out, "# {name}");
            }
            let _ = writeln!(out, "{}", t.columns[..t.tsv_width].join("\t"));
            for r in &t.rows {
                let cells: Vec<String> = r[..t.tsv_width].iter().map(Cell::tsv).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
        }
        for line in &self.text {
            let _ = writeln!(out, "{line}");
        }
        for v in &self.violations {
            let _ = writeln!(out, "violation\t{v}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("input_sha256".into(), json!(self.input_sha256));
        doc.insert("seed".into(), json!(self.seed));
        doc.insert("engine".into(), json!(self.engine));
        doc.insert("wall_time_ms".into(), json!(self.wall_time_ms));
        let fields: Map<String, Value> = self.fields.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        doc.insert("results".into(), Value::Object(fields));
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|(name, t)| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| Value::Object(t.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
                    .collect();
                (if name.is_empty() { "rows".to_string() } else { name.clone() }, Value::Array(rows))
            })
            .collect();
        doc.insert("tables".into(), Value::Object(tables));
        doc.insert("text".into(), json!(self.text));
        doc.insert("violations".into(), Value::Array(self.violations.clone()));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
        s.push('\n');
        s
    }
}

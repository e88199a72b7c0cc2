//! Output formatting: scientific floats, aligned terminal tables, comma
//! separated rows, and the bundled reference-results constants.

use lpbsa_core::problem::Fitness;

/// Locale-independent scientific rendering with seven significant digits.
pub fn fmt_value(v: f64) -> String {
    format!("{v:.6E}")
}

/// Integers print exactly; reals print in scientific form.
pub fn fmt_fitness(f: Fitness) -> String {
    match f {
        Fitness::Int(v) => v.to_string(),
        Fitness::Real(v) => fmt_value(v),
    }
}

/// A left-aligned plain-text table with a header row.
pub struct TextTable {
    columns: usize,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        let header: Vec<String> = header.into_iter().map(Into::into).collect();
        TextTable {
            columns: header.len(),
            rows: vec![header],
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: Vec<S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        assert_eq!(row.len(), self.columns, "ragged table row");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut widths = vec![0usize; self.columns];
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        for row in &self.rows {
            let mut line = String::new();
            for (i, (cell, w)) in row.iter().zip(&widths).enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                line.push_str(cell);
                if i + 1 < self.columns {
                    for _ in cell.len()..*w {
                        line.push(' ');
                    }
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

/// One comma-separated line. Values are numeric or identifier tokens, never
/// quoted.
pub fn csv_line<S: AsRef<str>>(fields: &[S]) -> String {
    let mut out = String::new();
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(f.as_ref());
    }
    out.push('\n');
    out
}

/// Column labels of the bundled reference results, in file order.
pub const REFERENCE_COLUMNS: [&str; 10] = [
    "ref_lpbsa_avg",
    "ref_lpbsa_std",
    "ref_lpb_avg",
    "ref_lpb_std",
    "ref_da_avg",
    "ref_da_std",
    "ref_pso_avg",
    "ref_pso_std",
    "ref_ga_avg",
    "ref_ga_std",
];

const REFERENCE_RESULTS: &str = include_str!("../data/reference_results.csv");

/// Published comparison constants per function id, verbatim.
pub fn reference_results() -> Vec<(String, Vec<String>)> {
    let mut rows = Vec::new();
    for line in REFERENCE_RESULTS.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let tf = fields.next().expect("reference row has a function id");
        let cells: Vec<String> = fields.map(String::from).collect();
        assert_eq!(cells.len(), REFERENCE_COLUMNS.len(), "reference row width");
        rows.push((tf.to_string(), cells));
    }
    rows
}

/// Looks up one function's reference cells.
pub fn reference_for(tf: &str) -> Option<Vec<String>> {
    reference_results()
        .into_iter()
        .find(|(id, _)| id == tf)
        .map(|(_, cells)| cells)
}

//! Line-oriented key/value documents with nested blocks.
//!
//! Structured output is deterministic: fields print in insertion order,
//! rationals as `p/q` (integers bare), so identical invocations are
//! byte-identical and every value re-parses losslessly.

#[derive(Default)]
pub struct Report {
    lines: Vec<(usize, String)>,
    indent: usize,
}

impl Report {
    pub fn new(kind: &str) -> Self {
        let mut r = Report::default();
        r.field("report", kind);
        r
    }

    pub fn field(&mut self, key: &str, value: impl ToString) {
        self.lines.push((self.indent, format!("{key}: {}", value.to_string())));
    }

    /// A verbatim line at the current indent (for `x -> value` tables).
    pub fn raw(&mut self, line: impl Into<String>) {
        self.lines.push((self.indent, line.into()));
    }

    pub fn block(&mut self, key: &str) {
        self.lines.push((self.indent, format!("{key}:")));
        self.indent += 1;
    }

    pub fn end_block(&mut self) {
        self.indent = self.indent.saturating_sub(1);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (indent, line) in &self.lines {
            for _ in 0..*indent {
                out.push_str("  ");
            }
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// Joins items with single spaces; `-` for an empty list.
pub fn join_list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|i| i.to_string()).collect();
    if parts.is_empty() {
        "-".to_string()
    } else {
        parts.join(" ")
    }
}

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Command output in every supported shape. `ok = false` makes the process exit with 1.
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Summary lines printed after the table.
    pub notes: Vec<String>,
    /// Replaces every format when set.
    pub raw: Option<String>,
    pub ok: bool,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report { json, header: vec![], rows: vec![], notes: vec![], raw: None, ok: true }
    }

    pub fn columns(mut self, header: &[&str]) -> Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn render(&self, format: Format) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json values serialize") + "\n",
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !self.header.is_empty() {
            w.write_record(&self.header).expect("in-memory write");
        }
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    fn table(&self) -> String {
        let mut out = String::new();
        if !self.header.is_empty() {
            let ncol = self.header.len();
            let widths: Vec<usize> = (0..ncol)
                .map(|c| {
                    self.rows
                        .iter()
                        .filter_map(|r| r.get(c))
                        .map(|s| s.chars().count())
                        .chain([self.header[c].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| -> String {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}", w = *w)).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out += &line(&self.header);
            out += &line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
            for r in &self.rows {
                out += &line(r);
            }
        }
        for n in &self.notes {
            out += n;
            out.push('\n');
        }
        out
    }
}

pub fn join<T: ToString>(v: &[T]) -> String {
    format!("[{}]", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_each_format() {
        let mut r = Report::new(json!({"x": 1})).columns(&["a", "bb"]);
        r.row(vec!["[0,1]".into(), "2".into()]);
        r.note("done");
        assert_eq!(r.render(Format::Table), "a      bb\n-----  --\n[0,1]  2\ndone\n");
        assert_eq!(r.render(Format::Csv), "a,bb\n\"[0,1]\",2\n");
        assert_eq!(r.render(Format::Json), "{\n  \"x\": 1\n}\n");
    }
}

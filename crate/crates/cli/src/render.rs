use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[value(alias = "markdown")]
    Md,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        _ => v.to_string(),
    }
}

fn is_records(v: &Value) -> bool {
    matches!(v, Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object))
}

fn columns(rows: &[Value]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object().into_iter().flat_map(|o| o.keys()) {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

fn md_table(header: &[String], rows: &[Vec<String>]) -> String {
    let esc = |s: &str| s.replace('|', "\\|");
    let mut out = format!("| {} |\n", header.iter().map(|h| esc(h)).collect::<Vec<_>>().join(" | "));
    out += &format!("|{}\n", "---|".repeat(header.len()));
    for r in rows {
        out += &format!("| {} |\n", r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | "));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_table(header: &[String], rows: &[Vec<String>]) -> String {
    let line = |r: &[String]| r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",") + "\n";
    let mut out = line(header);
    for r in rows {
        out += &line(r);
    }
    out
}

fn record_rows(rows: &[Value]) -> (Vec<String>, Vec<Vec<String>>) {
    let cols = columns(rows);
    let body = rows
        .iter()
        .map(|r| cols.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect())
        .collect();
    (cols, body)
}

/// Objects become a field/value table followed by one table per array of
/// records; arrays of records become a single table.
pub fn render(format: Format, v: &Value) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(v).expect("values serialize") + "\n";
    }
    let table = |h: &[String], r: &[Vec<String>]| match format {
        Format::Csv => csv_table(h, r),
        _ => md_table(h, r),
    };
    match v {
        Value::Object(map) => {
            let scalars: Vec<Vec<String>> = map
                .iter()
                .filter(|(_, x)| !is_records(x))
                .map(|(k, x)| vec![k.clone(), cell(x)])
                .collect();
            let mut out = table(&["field".into(), "value".into()], &scalars);
            for (k, x) in map.iter().filter(|(_, x)| is_records(x)) {
                let (h, r) = record_rows(x.as_array().expect("records"));
                out += "\n";
                if format == Format::Md {
                    out += &format!("{k}:\n\n");
                }
                out += &table(&h, &r);
            }
            out
        }
        Value::Array(rows) if is_records(v) => {
            let (h, r) = record_rows(rows);
            table(&h, &r)
        }
        other => cell(other) + "\n",
    }
}

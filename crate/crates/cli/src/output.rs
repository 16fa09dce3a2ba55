use clap::ValueEnum;
use std::io::Write;
use std::path::PathBuf;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct Row {
    pub x: f64,
    pub value: f64,
    pub err_est: f64,
}

/// 17 significant digits in scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn render(format: Format, inputs: serde_json::Value, rows: &[Row]) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("x,value,err_est\n");
            for r in rows {
                s.push_str(&format!("{},{},{}\n", num(r.x), num(r.value), num(r.err_est)));
            }
            s
        }
        Format::Json => {
            let results: Vec<_> = rows
                .iter()
                .map(|r| serde_json::json!({ "x": r.x, "value": r.value, "err_est": r.err_est }))
                .collect();
            let doc = serde_json::json!({ "inputs": inputs, "results": results });
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            s.push('\n');
            s
        }
    }
}

pub fn write(out: &Option<PathBuf>, format: Format, inputs: serde_json::Value, rows: &[Row]) -> std::io::Result<()> {
    let text = render(format, inputs, rows);
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

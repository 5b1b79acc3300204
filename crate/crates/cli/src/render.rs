use std::fmt::Write;

use mmin_core::{BoundReport, BoundResult, MatrixClass};

/// Text-mode precision. `{:.4}` rounds the exact binary value, with exact
/// ties going to even.
pub const TEXT_DECIMALS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

pub fn report(report: &BoundReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => report_text(report),
        OutputFormat::Csv => report_csv(report),
        OutputFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serialises") + "\n"
        }
    }
}

fn fixed(x: f64) -> String {
    format!("{x:.prec$}", prec = TEXT_DECIMALS)
}

fn report_text(report: &BoundReport) -> String {
    let mut out = String::new();
    writeln!(out, "matrix: {}", report.matrix_id).unwrap();
    match report.tau {
        Some(tau) => writeln!(out, "tau: {}", fixed(tau)).unwrap(),
        None => writeln!(out, "tau: n/a").unwrap(),
    }
    writeln!(out, "t_max: {}", report.t_max).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "{:<24} {:<6} {:>3}  value", "method", "kind", "t").unwrap();
    for row in &report.rows {
        writeln!(
            out,
            "{:<24} {:<6} {:>3}  {}",
            row.method.name(),
            row.kind.to_string(),
            row.t.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
            text_value(row)
        )
        .unwrap();
    }
    out
}

fn text_value(row: &BoundResult) -> String {
    match (row.value, &row.reason) {
        (Some(v), _) => fixed(v),
        (None, Some(reason)) => format!("n/a ({reason})"),
        (None, None) => "n/a".into(),
    }
}

pub const CSV_HEADER: &str = "method,kind,t,value,applicable,reason";

fn report_csv(report: &BoundReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.method.name(),
            row.kind,
            row.t.map(|t| t.to_string()).unwrap_or_default(),
            row.value.map(|v| v.to_string()).unwrap_or_default(),
            row.applicable,
            csv_field(row.reason.as_deref().unwrap_or(""))
        )
        .unwrap();
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

pub fn class(c: &MatrixClass) -> String {
    let ratios = c
        .dominance_ratios
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    format!(
        "is_z_matrix: {}\npositive_diagonal: {}\nis_sdd: {}\nis_wcdd: {}\nis_m_matrix: {}\n\
         zero_tolerance: {:e}\ndominance_ratios: {}\n",
        c.is_z_matrix,
        c.positive_diagonal,
        c.is_sdd,
        c.is_wcdd,
        c.is_m_matrix,
        c.zero_tolerance,
        ratios
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rounding_is_half_even_on_exact_ties() {
        // 1/32 and 3/32 are exact binary ties at four decimals
        assert_eq!(fixed(0.03125), "0.0312");
        assert_eq!(fixed(0.09375), "0.0938");
        assert_eq!(format!("{:.2}", 0.125), "0.12");
        assert_eq!(format!("{:.2}", 0.375), "0.38");
        // nearest-binary values round by their exact expansion
        assert_eq!(fixed(0.78054), "0.7805");
        assert_eq!(fixed(1.07846), "1.0785");
    }

    #[test]
    fn csv_fields_are_quoted_when_needed() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }
}

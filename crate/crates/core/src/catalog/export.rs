//! Report serialization. JSON output has sorted keys and floats rounded to
//! twelve significant digits, so identical runs export identical bytes.
//! Timings are excluded unless asked for.

use serde_json::{Map, Number, Value};

use super::Report;
use crate::error::Result;
use crate::report::{CheckReport, Status};
use crate::Complex64;

/// Significant digits kept in exported floats.
pub const SIGNIFICANT_DIGITS: i32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    /// One row per check: status, name, residual.
    TextTable,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" | "table" => Ok(Format::TextTable),
            other => Err(format!("unknown format {other:?} (json or text)")),
        }
    }
}

/// Deterministic export. An empty report serializes to `{}`.
pub fn export_report(report: &Report, format: Format) -> Result<Vec<u8>> {
    export(report, format, false)
}

/// As [`export_report`], with the elapsed time of each check in seconds.
pub fn export_report_timed(report: &Report, format: Format) -> Result<Vec<u8>> {
    export(report, format, true)
}

fn export(report: &Report, format: Format, timings: bool) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            if report.is_empty() {
                return Ok(b"{}\n".to_vec());
            }
            let mut v = serde_json::to_value(report)?;
            if timings {
                if let Value::Object(m) = &mut v {
                    m.insert("timings".into(), timing_value(report));
                }
            }
            // serde_json's default map is ordered, so keys come out sorted.
            let mut out = serde_json::to_vec_pretty(&round_floats(v))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::TextTable => Ok(text_table(report, timings).into_bytes()),
    }
}

fn timing_value(report: &Report) -> Value {
    let mut m = Map::new();
    for c in report.checks.checks().iter().chain(report.diagnostics.checks()) {
        m.insert(c.name.clone(), Value::from(c.elapsed.as_secs_f64()));
    }
    Value::Object(m)
}

/// Rounds `x` to [`SIGNIFICANT_DIGITS`]; non-finite values become strings.
pub fn round_sig(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    if x == 0.0 {
        return Value::from(0.0);
    }
    let text = format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, x);
    let rounded: f64 = text.parse().expect("formatted float parses");
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round_sig(n.as_f64().expect("f64")),
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    }
}

fn rows(out: &mut String, title: &str, r: &CheckReport, timings: bool) {
    if r.is_empty() {
        return;
    }
    out.push_str(&format!("{title}\n"));
    let width = r.checks().iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    for c in r.checks() {
        let pad = width - c.name.chars().count();
        out.push_str(&format!("  {}  {}{}  {:.3e}", status_text(c.status), c.name, " ".repeat(pad), c.residual));
        if timings {
            out.push_str(&format!("  {:.3}s", c.elapsed.as_secs_f64()));
        }
        if let Some(n) = &c.note {
            out.push_str(&format!("  ({n})"));
        }
        out.push('\n');
    }
}

fn text_table(report: &Report, timings: bool) -> String {
    let mut out = String::new();
    if report.is_empty() {
        return out;
    }
    let params: Vec<String> = report.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    out.push_str(&format!(
        "scenario {} [{}] on {} (order {}), tol {:e}\n",
        report.scenario,
        params.join(", "),
        report.computed.group,
        report.computed.group_order,
        report.tolerance
    ));
    rows(&mut out, "checks", &report.checks, timings);
    rows(&mut out, "diagnostics", &report.diagnostics, timings);
    if !report.expected.is_empty() {
        out.push_str("expected\n");
        let width = report.expected.iter().map(|e| e.quantity.chars().count()).max().unwrap_or(0);
        for e in &report.expected {
            let pad = width - e.quantity.chars().count();
            out.push_str(&format!(
                "  {}  {}{}  expected {}  computed {}\n",
                status_text(e.status),
                e.quantity,
                " ".repeat(pad),
                e.expected,
                round_floats(e.computed.clone())
            ));
        }
    }
    out.push_str(&format!("result {}\n", if report.passed() { "PASS" } else { "FAIL" }));
    out
}

/// `a+bi` with both parts rounded, dropping a zero part.
pub(crate) fn complex_text(z: Complex64) -> String {
    let r = |x: f64| {
        let s = format!("{:.6}", x);
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    };
    match (z.re.abs() < 1e-12, z.im.abs() < 1e-12) {
        (_, true) => r(z.re),
        (true, false) => format!("{}i", r(z.im)),
        (false, false) => format!("({}{}{}i)", r(z.re), if z.im < 0.0 { "" } else { "+" }, r(z.im)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Params, RunOptions};

    #[test]
    fn empty_report_exports_empty_object() {
        assert_eq!(export_report(&Report::default(), Format::Json).unwrap(), b"{}\n");
        assert!(export_report(&Report::default(), Format::TextTable).unwrap().is_empty());
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(0.1 + 0.2), Value::from(0.3));
        assert_eq!(round_sig(1.234_567_890_123_456e-20), Value::from(1.234_567_890_12e-20));
        assert_eq!(round_sig(f64::INFINITY), Value::from("inf"));
    }

    #[test]
    fn timings_only_when_requested() {
        let mut r = Report::new("x", &Params::new(), &RunOptions::default());
        r.checks.timed("c", 1.0, || 0.5);
        let plain = String::from_utf8(export_report(&r, Format::Json).unwrap()).unwrap();
        let timed = String::from_utf8(export_report_timed(&r, Format::Json).unwrap()).unwrap();
        assert!(!plain.contains("timings") && timed.contains("timings"));
    }

    #[test]
    fn complex_rendering() {
        assert_eq!(complex_text(Complex64::new(0.5, 0.0)), "0.5");
        assert_eq!(complex_text(Complex64::new(0.0, -1.0)), "-1i");
        assert_eq!(complex_text(Complex64::new(0.25, 0.5)), "(0.25+0.5i)");
    }
}

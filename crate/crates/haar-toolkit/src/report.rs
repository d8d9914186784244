//! The uniform report schema shared by every CLI subcommand:
//! `{schema_version, timestamp_ms, config, results, diagnostics}`.
//!
//! Reports are deterministic: for a fixed configuration and seed the
//! rendered text is byte-identical across runs and thread counts, with
//! `timestamp_ms` as the single volatile field (comparisons must strip it).
//! Object keys serialize in sorted order and floats in shortest
//! round-trip form, so no formatting state leaks into the bytes.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Version stamp written into every report.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A machine-readable run report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Format version of the report file.
    pub schema_version: u32,
    /// Wall-clock milliseconds since the Unix epoch at generation time —
    /// the only field that varies between identical runs.
    pub timestamp_ms: u64,
    /// Echo of the fully resolved run configuration (subcommand, moment
    /// order, dimensions, seed, sample counts, input paths).
    pub config: Value,
    /// Numeric results. Every sampled quantity carries its mode
    /// (`"exact"` or `"mc"`) and, when `"mc"`, its sample count and
    /// standard errors.
    pub results: Value,
    /// Cross-checks, tolerances, and cap notes that support the results
    /// without being results themselves.
    pub diagnostics: Value,
}

impl Report {
    /// Assembles a report, stamping the schema version and current time.
    pub fn new(config: Value, results: Value, diagnostics: Value) -> Self {
        let timestamp_ms = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        Report { schema_version: REPORT_SCHEMA_VERSION, timestamp_ms, config, results, diagnostics }
    }

    /// Renders the report as pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self)
            .expect("report values contain no non-serializable numbers");
        text.push('\n');
        text
    }

    /// Writes the rendered report to `path`.
    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }

    /// Parses a rendered report back into its five fields.
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("report parse failed: {e}")))?;
        let object = value.as_object().ok_or_else(|| {
            Error::Parse("report must be a JSON object".into())
        })?;
        let field = |name: &str| -> Result<Value> {
            object
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("report is missing the {name:?} field")))
        };
        Ok(Report {
            schema_version: field("schema_version")?
                .as_u64()
                .ok_or_else(|| Error::Parse("schema_version must be an integer".into()))?
                as u32,
            timestamp_ms: field("timestamp_ms")?
                .as_u64()
                .ok_or_else(|| Error::Parse("timestamp_ms must be an integer".into()))?,
            config: field("config")?,
            results: field("results")?,
            diagnostics: field("diagnostics")?,
        })
    }
}

/// Strips the volatile timestamp line from a rendered report, for
/// byte-level comparisons between runs.
pub fn strip_timestamp(rendered: &str) -> String {
    rendered
        .lines()
        .filter(|line| !line.trim_start().starts_with("\"timestamp_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn roundtrip_and_timestamp_strip() {
        let report = Report::new(
            json!({"subcommand": "wg", "k": 2, "d": 2}),
            json!({"value": 1.0 / 3.0}),
            json!({"mode": "exact"}),
        );
        let text = report.render();
        let parsed = Report::parse(&text).unwrap();
        assert_eq!(parsed.schema_version, REPORT_SCHEMA_VERSION);
        assert_eq!(parsed.config, report.config);
        assert_eq!(parsed.results, report.results);
        assert_eq!(parsed.diagnostics, report.diagnostics);

        // Two renders differing only in timestamp agree after stripping.
        let mut other = report.clone();
        other.timestamp_ms = report.timestamp_ms.wrapping_add(12345);
        assert_ne!(report.render(), other.render());
        assert_eq!(strip_timestamp(&report.render()), strip_timestamp(&other.render()));
    }

    #[test]
    fn malformed_reports_are_rejected() {
        assert!(Report::parse("not json").is_err());
        assert!(Report::parse("{\"schema_version\": 1}").is_err());
        assert!(Report::parse("[1, 2]").is_err());
    }
}

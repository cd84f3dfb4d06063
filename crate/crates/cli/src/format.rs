//! Deterministic number formatting shared by the CSV and JSON writers.

/// 17 significant digits in scientific notation; enough to round-trip any
/// `f64`. Non-finite values print as `nan`, `inf` or `-inf`.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// One header line and one line per row, `\n`-terminated.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum JsonValue {
    Null,
    Number(f64),
    Integer(u64),
    String(String),
    Strings(Vec<String>),
}

impl From<f64> for JsonValue {
    fn from(v: f64) -> Self {
        JsonValue::Number(v)
    }
}

impl From<Option<f64>> for JsonValue {
    fn from(v: Option<f64>) -> Self {
        v.map_or(JsonValue::Null, JsonValue::Number)
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialise")
}

impl JsonValue {
    fn render(&self) -> String {
        match self {
            JsonValue::Null => "null".into(),
            JsonValue::Number(v) if v.is_finite() => format_number(*v),
            JsonValue::Number(_) => "null".into(),
            JsonValue::Integer(n) => n.to_string(),
            JsonValue::String(s) => quote(s),
            JsonValue::Strings(items) => {
                let inner: Vec<String> = items.iter().map(|s| quote(s)).collect();
                format!("[{}]", inner.join(", "))
            }
        }
    }
}

/// A flat JSON object with keys in the given order, one per line.
pub fn json_object(fields: &[(&str, JsonValue)]) -> String {
    let body: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("  {}: {}", quote(k), v.render()))
        .collect();
    format!("{{\n{}\n}}\n", body.join(",\n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        assert_eq!(format_number(-0.25), "-2.5000000000000000e-1");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn json_is_valid() {
        let text = json_object(&[
            ("a", JsonValue::Number(1.5e-300)),
            ("b", JsonValue::Null),
            ("c", JsonValue::String("x\"y\n".into())),
            ("d", JsonValue::Strings(vec!["p".into(), "q".into()])),
            ("e", JsonValue::Number(f64::INFINITY)),
            ("f", JsonValue::Integer(7)),
        ]);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["a"].as_f64(), Some(1.5e-300));
        assert!(parsed["e"].is_null());
        assert_eq!(parsed["c"], "x\"y\n");
    }

    proptest! {
        #[test]
        fn numbers_round_trip(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }
}

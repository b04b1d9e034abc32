//! Deterministic JSON output: every float is rounded to 12 significant digits.

use serde::Serialize;
use serde_json::Value;

/// Significant digits kept in emitted reports.
pub const REPORT_DIGITS: usize = 12;

/// Rounds `x` to [`REPORT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", REPORT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Serializes `value` with rounded floats as a JSON tree.
pub fn to_value<T: Serialize>(value: &T) -> Value {
    round_value(serde_json::to_value(value).unwrap_or(Value::Null))
}

/// Pretty-printed JSON with rounded floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(&to_value(value)).unwrap_or_else(|_| "null".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(std::f64::consts::PI), 3.14159265359);
        assert_eq!(round_sig(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round_sig(0.0), 0.0);
        assert!(round_sig(f64::NAN).is_nan());
    }

    #[test]
    fn nested_values_are_rounded() {
        let s = to_json(&serde_json::json!({"a": [1.0 / 3.0, 2], "b": {"c": 2.0f64.sqrt()}}));
        assert!(s.contains("0.333333333333"));
        assert!(s.contains("1.41421356237"));
        assert!(s.contains("2"));
    }
}

//! Fixed 12-significant-digit rendering of every float in a report, so that
//! golden outputs do not depend on shortest-round-trip formatting.

use serde_json::{Number, Value};

pub const SIGNIFICANT: usize = 12;

/// `x` with 12 significant digits: fixed notation for decimal exponents in
/// `[-5, 12)`, scientific otherwise.
pub fn format_float(x: f64) -> String {
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if x == 0.0 || (-5..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

fn number(text: &str) -> Value {
    // with arbitrary_precision the literal is stored verbatim
    serde_json::from_str::<Number>(text)
        .map(Value::Number)
        .expect("formatted float is a JSON number")
}

/// Rewrites every non-integer number in `value`; non-finite values become
/// `null`.
pub fn normalize(value: Value) -> Value {
    match value {
        Value::Number(n) => {
            if n.is_u64() || n.is_i64() {
                Value::Number(n)
            } else {
                match n.as_f64() {
                    Some(x) if x.is_finite() => number(&format_float(x)),
                    _ => Value::Null,
                }
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect())
        }
        other => other,
    }
}

/// Float for a report field, `null` when not finite.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        number(&format_float(x))
    } else {
        Value::Null
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_float(1.0 / 3.0_f64.sqrt()), "0.577350269190");
        assert_eq!(format_float(0.5), "0.500000000000");
        assert_eq!(format_float(1.0), "1.00000000000");
        assert_eq!(format_float(-2.5), "-2.50000000000");
        assert_eq!(format_float(123456.0), "123456.000000");
        assert_eq!(format_float(0.0), "0.00000000000");
        assert_eq!(format_float(1.5e-7), "1.50000000000e-7");
        assert_eq!(format_float(2.0e13), "2.00000000000e13");
        assert_eq!(format_float(0.99999999999999), "1.00000000000");
    }

    #[test]
    fn normalizes_nested_values() {
        let v = normalize(json!({ "a": [0.25, 3, f64::NAN], "b": { "c": -1e-20 }, "d": true }));
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"a":[0.250000000000,3,null],"b":{"c":-1.00000000000e-20},"d":true}"#
        );
    }
}

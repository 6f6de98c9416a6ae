//! Number formatting shared by CSV and JSON output: floats always carry 17
//! significant digits.

use serde_json::{Number, Value};

/// `x` with 17 significant digits, in fixed notation for moderate
/// magnitudes and scientific notation otherwise.
pub fn sig17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..17).contains(&exp) {
        format!("{x:.*}", (16 - exp) as usize)
    } else {
        sci
    }
}

/// JSON number printed with [`sig17`]; `null` for non-finite values.
pub fn json_f64(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = sig17(x);
    // Rust's scientific form has no `+` and is valid JSON as is.
    Value::Number(text.parse::<Number>().expect("formatted float is a valid JSON number"))
}

/// Exact JSON integer of any width.
pub fn json_u128(x: u128) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer is a valid JSON number"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(sig17(1.0), "1.0000000000000000");
        assert_eq!(sig17(-0.25), "-0.25000000000000000");
        assert_eq!(sig17(123.5), "123.50000000000000");
        assert_eq!(sig17(1e-9), "1.0000000000000001e-9");
        assert_eq!(sig17(0.0), "0.0000000000000000");
        for x in [std::f64::consts::PI, 0.256_363, 1e300, -7.5e-12, 2f64.sqrt()] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_keeps_digits() {
        assert_eq!(serde_json::to_string(&json_f64(1.0)).unwrap(), "1.0000000000000000");
        assert_eq!(serde_json::to_string(&json_u128(u128::MAX)).unwrap(), u128::MAX.to_string());
    }
}

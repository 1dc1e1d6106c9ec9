//! Numeric formatting for text and CSV outputs: six significant digits in the
//! style of C's `%g`, undefined values as `NaN`.

pub fn real(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

pub fn opt_real(x: Option<f64>) -> String {
    real(x.unwrap_or(f64::NAN))
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// JSON number rounded to the same six significant digits; non-finite values
/// become the string `"NaN"` / `"inf"`.
pub fn json_real(x: f64) -> serde_json::Value {
    let text = real(x);
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => serde_json::Number::from_f64(v)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::String(text)),
        _ => serde_json::Value::String(text),
    }
}

pub fn json_opt_real(x: Option<f64>) -> serde_json::Value {
    json_real(x.unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::real;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (24.48, "24.48"),
            (2.0 / 3.0, "0.666667"),
            (123456.0, "123456"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-3.5, "-3.5"),
            (999999.6, "1e+06"),
            (0.34659, "0.34659"),
            (1e300, "1e+300"),
        ];
        for (x, want) in cases {
            assert_eq!(real(x), want, "{x}");
        }
        assert_eq!(real(f64::NAN), "NaN");
    }
}

//! Number formatting shared by the text and CSV outputs.

/// Formats `x` with at most `sig` significant digits, trailing zeros
/// removed, switching to exponent notation for very large or small
/// magnitudes (the C `%g` convention).
pub fn sig_digits(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= sig as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig_digits(4.0 / 3.0, 12), "1.33333333333");
        assert_eq!(sig_digits(4.0, 12), "4");
        assert_eq!(sig_digits(2.0, 12), "2");
        assert_eq!(sig_digits(-0.5, 12), "-0.5");
        assert_eq!(sig_digits(123456.0, 3), "1.23e+05");
        assert_eq!(sig_digits(1.5e-7, 12), "1.5e-07");
        assert_eq!(sig_digits(0.0001, 12), "0.0001");
        assert_eq!(sig_digits(99.99999999999999, 12), "100");
        assert_eq!(sig_digits(1.0 / 3.0, 4), "0.3333");
    }
}

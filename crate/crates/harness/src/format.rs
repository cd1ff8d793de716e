//! Fixed-precision float text shared by every CSV the harness writes.

/// Significant digits in CSV output.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// Formats like C's `%.15g`: 15 significant digits, trailing zeros removed,
/// scientific notation below `1e-4` or from `1e15` on.
pub fn g15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to the value [`g15`] prints.
pub fn canonical(x: f64) -> f64 {
    g15(x).parse().unwrap_or(x)
}

/// 12 significant digits for console energies; integral values keep a `.0`.
pub fn g12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let s = g15(rounded);
    if s.contains(['.', 'e', 'n']) {
        s
    } else {
        s + ".0"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_style() {
        assert_eq!(g15(1.0), "1");
        assert_eq!(g15(-2.5), "-2.5");
        assert_eq!(g15(0.1), "0.1");
        assert_eq!(g15(1e-6), "1e-06");
        assert_eq!(g15(1.5e-7), "1.5e-07");
        assert_eq!(g15(0.0001), "0.0001");
        assert_eq!(g15(123456789012345.0), "123456789012345");
        assert_eq!(g15(1234567890123456.0), "1.23456789012346e+15");
        assert_eq!(g15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(g15(-5.84f64.sqrt()), "-2.41660919471891");
        assert_eq!(g15(999.9999999999999), "1000");
        assert_eq!(g15(f64::INFINITY), "inf");
        assert_eq!(g15(0.0), "0");
    }

    #[test]
    fn twelve_digit_oracle_output() {
        assert_eq!(g12(-5.84f64.sqrt()), "-2.41660919472");
        assert_eq!(g12(-1.0), "-1.0");
        assert_eq!(g12(-3.0), "-3.0");
    }

    #[test]
    fn canonical_is_a_fixed_point() {
        for x in [std::f64::consts::PI, -1e-300, 6.02214076e23, 1.0 / 7.0, 2.5e-5] {
            let c = canonical(x);
            assert_eq!(canonical(c), c);
            assert_eq!(g15(c), g15(x));
        }
    }
}

//! Fixed-precision number formatting for emitted documents.

/// Significant digits used for every float written to JSON or text dumps.
pub const SIG_DIGITS: usize = 12;

/// Round `x` to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// `%g`-style rendering with `digits` significant digits: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros removed.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
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
    fn twelve_digit_rendering() {
        assert_eq!(fmt_sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(fmt_sig(std::f64::consts::FRAC_PI_2, 12), "1.57079632679");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(-0.25, 12), "-0.25");
        assert_eq!(fmt_sig(1.5e-17, 12), "1.5e-17");
        assert_eq!(fmt_sig(0.0, 12), "0");
    }

    #[test]
    fn rounding_is_stable() {
        let r = round_sig(2.0 / 3.0, 12);
        assert_eq!(r, 0.666666666667);
        assert_eq!(round_sig(r, 12), r);
    }
}

//! Fixed textual formats used by every CSV writer.

use crate::Rational;

/// Significant digits used when printing doubles.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats a double with 12 significant digits, `%g` style.
///
/// Rounding is done by the standard library on the exact binary value, so
/// output is identical across platforms and thread counts.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `p/q` in lowest terms (`p` alone when `q = 1`).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn floats() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-2.5), "-2.5");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_float(123456.789), "123456.789");
        assert_eq!(format_float(1e-7), "1e-7");
        assert_eq!(format_float(1.5e15), "1.5e15");
        assert_eq!(format_float(0.000123), "0.000123");
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn rationals() {
        let r = Rational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&Rational::from_integer(BigInt::from(7))), "7");
    }
}

//! Deterministic float rendering at 9 significant digits.

const SIG_DIGITS: usize = 9;

/// Renders with 9 significant digits, positional notation for exponents in
/// [-4, 8] and scientific outside, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // Let the standard formatter do the correctly-rounded work.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("numeric exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let body = if (-4..=8).contains(&exp) {
        positional(&digits, exp)
    } else {
        let trimmed = trim_zeros(&digits);
        if trimmed.len() == 1 {
            format!("{}e{}", &trimmed[..1], exp)
        } else {
            format!("{}.{}e{}", &trimmed[..1], &trimmed[1..], exp)
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_zeros(digits: &str) -> &str {
    let trimmed = digits.trim_end_matches('0');
    if trimmed.is_empty() {
        "0"
    } else {
        trimmed
    }
}

fn positional(digits: &str, exp: i32) -> String {
    let point = exp + 1; // digits before the decimal point
    if point <= 0 {
        let frac = trim_zeros(digits);
        format!("0.{}{}", "0".repeat(-point as usize), frac)
    } else if (point as usize) >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (int_part, frac_part) = digits.split_at(point as usize);
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    }
}

//! Numeric argument parsing. Reals accept decimals and `p/q` fractions.

/// Parses a decimal or a `p/q` fraction.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| format!("bad numerator in '{text}'"))?;
            let den: f64 = den.trim().parse().map_err(|_| format!("bad denominator in '{text}'"))?;
            if den == 0.0 {
                return Err(format!("zero denominator in '{text}'"));
            }
            num / den
        }
        None => text.parse().map_err(|_| format!("'{text}' is not a number"))?,
    };
    if value.is_nan() {
        return Err(format!("'{text}' is not a number"));
    }
    Ok(value)
}

/// Comma-separated reals.
pub fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Err("empty list".into());
    }
    text.split(',').map(parse_real).collect()
}

/// Exact non-negative ratio for `p/q`, integer or plain decimal input.
/// `None` when the text has an exponent, a sign or too many digits.
pub fn parse_ratio(text: &str) -> Option<(u64, u64)> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<u64>().ok()?, d.trim().parse::<u64>().ok()?),
        None => {
            let (int, frac) = text.split_once('.').unwrap_or((text, ""));
            if frac.len() > 18
                || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
                || int.len() + frac.len() == 0
            {
                return None;
            }
            let den = 10u64.checked_pow(frac.len() as u32)?;
            let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
            let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
            (int.checked_mul(den)?.checked_add(frac)?, den)
        }
    };
    if den == 0 {
        return None;
    }
    let g = gcd(num, den);
    Some((num / g, den / g))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

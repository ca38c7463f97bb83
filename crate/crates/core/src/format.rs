//! Decimal formatting with a fixed number of significant digits.

/// Renders `x` in plain decimal notation (never exponent form) with `digits`
/// significant digits. Zero renders as `"0"`; non-finite values use Rust's
/// default spelling.
pub fn sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    // Let the exponent formatter do the rounding so 9.99.. -> 1.0e1 is handled.
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

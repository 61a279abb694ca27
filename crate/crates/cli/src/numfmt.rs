//! Deterministic float formatting at a fixed number of significant digits,
//! with trailing zeros trimmed (so 0.1 prints as "0.1", 0 as "0").

/// Round to `digits` significant decimal digits and print the shortest
/// representation of the rounded value.
pub fn fmt_sig(x: f64, digits: i32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = digits - 1 - magnitude;
    let factor = 10f64.powi(scale);
    let rounded = (x * factor).round() / factor;
    format!("{rounded}")
}

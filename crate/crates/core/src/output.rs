//! Locale-free number formatting for CSV and table output.

/// Significant digits kept in emitted data files.
pub const SIG_DIGITS: usize = 12;

/// Rounds to [`SIG_DIGITS`] significant digits and prints the shortest
/// decimal that round-trips that rounded value (`0.2`, not `0.200000000000`).
pub fn format_sig(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIG_DIGITS - 1, value)
        .parse()
        .expect("scientific notation parses");
    let plain = format!("{rounded}");
    // Rust prints very small or large magnitudes in full positional form;
    // switch to exponent notation when that gets long.
    if plain.len() > 20 {
        format!("{rounded:e}")
    } else {
        plain
    }
}

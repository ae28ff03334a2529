//! Fixed output formatting shared by every exporter.

/// 17 significant digits in scientific notation; identical input bits give
/// identical text.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        // fold -0.0 into 0.0
        return format!("{:.16e}", 0.0);
    }
    format!("{v:.16e}")
}

//! Number formatting for machine-readable output.

/// Rounds to 12 significant digits and prints the shortest decimal form.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn rounding() {
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-0.0), "0");
        assert_eq!(sig12(0.1 + 0.2), "0.3");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(-2.5e-20), "-0.000000000000000000025");
        assert_eq!(sig12(f64::NAN), "NaN");
    }
}

//! Fixed-precision float formatting shared by every text emitter.

/// `x` rounded to 12 significant digits, in plain decimal notation.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).clamp(0, 40) as usize;
    let s = format!("{x:.decimals$}");
    if s.starts_with("-0") && s.trim_start_matches(['-', '0', '.']).is_empty() {
        return "0".to_string();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(std::f64::consts::LN_2), "0.693147180560");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(1234.5), "1234.50000000");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-1e-3), "-0.00100000000000");
    }
}

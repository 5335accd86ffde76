//! Fixed, locale-free number formatting for CSV artifacts.

/// 17 significant digits, scientific notation, `.` decimal separator.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        // fold -0.0 so identical values print identically
        return format!("{:.16e}", 0.0);
    }
    format!("{v:.16e}")
}

/// Join a header and rows into CSV text with `\n` line endings.
pub fn csv<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(num(-0.0), num(0.0));
        let v = 0.1 + 0.2;
        assert_eq!(num(v).parse::<f64>().unwrap(), v);
    }
}

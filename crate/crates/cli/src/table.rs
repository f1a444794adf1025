//! CSV output.
//!
//! Every table starts with a `# schema=1` comment line, then a header row.
//! Numbers are printed with 12 significant digits so that runs are
//! byte-identical across invocations.

use std::fmt::Write as _;

pub const SCHEMA_LINE: &str = "# schema=1";

pub const SOLVE_COLUMNS: [&str; 17] = [
    "name",
    "case",
    "kappa",
    "q",
    "w",
    "status",
    "p_star",
    "d1_star",
    "d2_star",
    "a1_star",
    "a2_star",
    "residual",
    "house_revenue",
    "diffuse_actual_profit",
    "diffuse_subjective_profit",
    "atomic_subjective_profit",
    "pool_total",
];

const SIG_DIGITS: i32 = 12;

/// Formats `x` with 12 significant digits, dropping trailing zeros. Switches
/// to exponent notation outside `[1e-5, 1e12)`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS).contains(&exp) {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Quotes a text field when it would break the row.
pub fn text_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    buf: String,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(SCHEMA_LINE);
        buf.push('\n');
        buf.push_str(&columns.join(","));
        buf.push('\n');
        Table { buf }
    }

    pub fn push_row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for c in cells {
            if !first {
                self.buf.push(',');
            }
            first = false;
            let _ = write!(self.buf, "{}", c.as_ref());
        }
        self.buf.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(fmt_num(123456.789), "123456.789");
        assert_eq!(fmt_num(1e-10), "1e-10");
        assert_eq!(fmt_num(1.5e-7), "1.5e-7");
        assert_eq!(fmt_num(0.00012345), "0.00012345");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1e15), "1e15");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn quotes_awkward_text() {
        assert_eq!(text_field("ok"), "ok");
        assert_eq!(text_field("a, b"), "\"a, b\"");
        assert_eq!(text_field("say \"x\""), "\"say \"\"x\"\"\"");
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push_row(["1", "2"]);
        assert_eq!(t.into_string(), "# schema=1\na,b\n1,2\n");
    }
}

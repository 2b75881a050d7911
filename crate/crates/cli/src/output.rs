//! CSV buffering and number formatting.

use std::fmt::Write;

/// Significant digits in every numeric CSV cell.
pub const SIG_DIGITS: i32 = 12;

/// Formats `x` in plain decimal with 12 significant digits, trailing zeros
/// trimmed. Independent of locale.
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
    // round to 12 significant digits first so the decimal count is right
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let rounded: f64 = sci.parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor() as i32;
    let decimals = (SIG_DIGITS - 1 - exp).clamp(0, 60) as usize;
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// A fully buffered CSV table; nothing reaches stdout until the command
/// has succeeded.
#[derive(Debug, Default)]
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Table::default();
        t.text.push_str(&header.join(","));
        t.text.push('\n');
        t
    }

    pub fn row(&mut self, cells: &[Cell]) {
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        writeln!(self.text, "{}", line.join(",")).expect("writing to a String");
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_num(12345.678), "12345.678");
        assert_eq!(fmt_num(1e-13), "0.0000000000001");
        assert_eq!(fmt_num(-0.0625), "-0.0625");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(99.99999999999999), "100");
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.row(&[Cell::Num(0.25), Cell::Bool(true)]);
        assert_eq!(t.into_string(), "a,b\n0.25,true\n");
    }
}

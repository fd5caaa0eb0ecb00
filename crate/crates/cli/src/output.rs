use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
}

/// Column names plus rows in grid order, outer axis slowest.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl SweepResult {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// First non-finite real cell as `(row, column)`.
    pub fn first_non_finite(&self) -> Option<(usize, &str)> {
        self.rows.iter().enumerate().find_map(|(i, row)| {
            row.iter().enumerate().find_map(|(j, c)| match c {
                Cell::Real(x) if !x.is_finite() => Some((i, self.header[j].as_str())),
                _ => None,
            })
        })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        self.rows
            .iter()
            .map(|r| match &r[j] {
                Cell::Real(x) => Some(*x),
                Cell::Int(n) => Some(*n as f64),
                Cell::Text(_) => None,
            })
            .collect()
    }
}

/// Twelve significant digits, positional for exponents in `[-5, 11]` and
/// scientific outside, trailing zeros removed.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    if !(-5..=11).contains(&exp) {
        let m = trim_fraction(mantissa);
        return format!("{sign}{m}e{exp}");
    }
    let body = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn render_cell(c: &Cell) -> String {
    match c {
        Cell::Int(n) => n.to_string(),
        Cell::Real(x) => format_real(*x),
        Cell::Text(t) => t.clone(),
    }
}

/// Config header, column names, then one line per row.
pub fn render(cfg: &RunConfig, result: &SweepResult) -> String {
    let delim = cfg.format.delimiter().to_string();
    let mut out = cfg.header_line();
    out.push('\n');
    out.push_str(&result.header.join(&delim));
    out.push('\n');
    for row in &result.rows {
        let cells: Vec<String> = row.iter().map(render_cell).collect();
        out.push_str(&cells.join(&delim));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Command, Format};

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(0.25), "0.25");
        assert_eq!(format_real(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_real(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(format_real(1234.5), "1234.5");
        assert_eq!(format_real(1.5e-7), "1.5e-7");
        assert_eq!(format_real(0.000012345), "0.000012345");
        assert_eq!(format_real(6.02e23), "6.02e23");
        assert_eq!(format_real(0.9999999999999), "1");
        assert_eq!(format_real(0.0), "0");
    }

    #[test]
    fn formatted_values_stay_within_twelve_digits() {
        for &x in &[0.7446478814781051, 1e-300, 123456789.12345679, -9.87654321e-3] {
            let back: f64 = format_real(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11, "{x}");
        }
    }

    #[test]
    fn render_uses_delimiter() {
        let mut cfg = RunConfig::defaults(Command::Fig6);
        cfg.format = Format::Tsv;
        let mut r = SweepResult::new(&["n", "T"]);
        r.rows.push(vec![Cell::Int(1), Cell::Real(0.5)]);
        let text = render(&cfg, &r);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# command=fig6 format=tsv"));
        assert_eq!(lines[1], "n\tT");
        assert_eq!(lines[2], "1\t0.5");
    }

    #[test]
    fn non_finite_is_located() {
        let mut r = SweepResult::new(&["x", "y"]);
        r.rows.push(vec![Cell::Real(1.0), Cell::Real(2.0)]);
        r.rows.push(vec![Cell::Real(1.0), Cell::Real(f64::NAN)]);
        assert_eq!(r.first_non_finite(), Some((1, "y")));
    }
}

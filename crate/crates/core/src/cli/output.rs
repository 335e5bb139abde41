//! Deterministic CSV and SVG emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;

pub const TOOL: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// CSV table preceded by `#` comment lines.
pub struct CsvTable {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            comments: vec![
                TOOL.to_owned(),
                "float format: shortest round-trip decimal".to_owned(),
            ],
            header: header.iter().map(|s| (*s).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    /// One comment line per line of `text`, each prefixed with `label`.
    pub fn comment_block(&mut self, label: &str, text: &str) -> &mut Self {
        for line in text.lines() {
            self.comments.push(format!("{label}: {line}"));
        }
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer
            .write_record(&self.header)
            .expect("writing to memory cannot fail");
        for row in &self.rows {
            writer.write_record(row).expect("writing to memory cannot fail");
        }
        let body = writer.into_inner().expect("writing to memory cannot fail");
        out.push_str(std::str::from_utf8(&body).expect("CSV of UTF-8 cells is UTF-8"));
        out
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf> {
        write_file(dir, name, &self.render())
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

pub struct Series<'a> {
    pub name: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
    pub color: &'a str,
}

/// Minimal line plot. Non-positive values are dropped on a log axis.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series], log_y: bool) -> String {
    const W: f64 = 720.0;
    const H: f64 = 440.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;

    let ty = |y: f64| if log_y { y.log10() } else { y };
    let usable = |y: f64| y.is_finite() && (!log_y || y > 0.0);
    let mut xr = (f64::INFINITY, f64::NEG_INFINITY);
    let mut yr = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for (&x, &y) in s.x.iter().zip(s.y) {
            if usable(y) {
                xr = (xr.0.min(x), xr.1.max(x));
                yr = (yr.0.min(ty(y)), yr.1.max(ty(y)));
            }
        }
    }
    if xr.0 >= xr.1 {
        xr = (xr.0.min(0.0), xr.0.max(0.0) + 1.0);
    }
    if yr.0 >= yr.1 {
        yr = (yr.0.min(0.0), yr.0.max(0.0) + 1.0);
    }
    let px = |x: f64| LEFT + (x - xr.0) / (xr.1 - xr.0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (ty(y) - yr.0) / (yr.1 - yr.0) * (H - TOP - BOTTOM);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    for i in 0..=4 {
        let f = f64::from(i) / 4.0;
        let xv = xr.0 + f * (xr.1 - xr.0);
        let yv = yr.0 + f * (yr.1 - yr.0);
        let ylabel = if log_y { format!("1e{yv:.1}") } else { format!("{yv:.4}") };
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{xv:.4}</text>"#,
            px(xv),
            H - BOTTOM + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{ylabel}</text>"#,
            LEFT - 6.0,
            H - BOTTOM - f * (H - TOP - BOTTOM) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 10.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    for (k, s) in series.iter().enumerate() {
        let mut points = String::new();
        for (&x, &y) in s.x.iter().zip(s.y) {
            if usable(y) {
                let _ = write!(points, "{:.2},{:.2} ", px(x), py(y));
            }
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
            s.color,
            points.trim_end()
        );
        let ly = TOP + 16.0 + 16.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}"/><text x="{}" y="{}">{}</text>"#,
            W - RIGHT - 150.0,
            W - RIGHT - 130.0,
            s.color,
            W - RIGHT - 124.0,
            ly + 4.0,
            escape(s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0, 1e-20, 31.21853097604805, 2.0f64.sqrt(), 0.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.5), "0.5");
    }

    #[test]
    fn table_renders_comments_then_rows() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.comment("note");
        t.row(vec!["1.0".into(), "x, y".into()]);
        let text = t.render();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# cavity-cascade"));
        assert_eq!(lines[2], "# note");
        assert_eq!(lines[3], "a,b");
        assert_eq!(lines[4], "1.0,\"x, y\"");
    }

    #[test]
    fn plot_is_well_formed() {
        let x = [1.0, 2.0, 3.0];
        let y = [1.0, 0.0, 3.0];
        let svg = line_plot("t<1>", "x", "y", &[Series { name: "s", x: &x, y: &y, color: "black" }], true);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("t&lt;1&gt;"));
    }
}

//! CSV, SVG and manifest writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Formats `x` with 9 significant digits, `%.9g` style.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    // rounding may carry into the next decade; let the scientific form decide
    let sci = format!("{:.8e}", x);
    let exp = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let (mantissa, e) = sci.split_once('e').unwrap_or((&sci, "0"));
        format!("{}e{}", trim_zeros(mantissa.to_string()), e)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Column-ordered CSV text builder.
#[derive(Debug, Clone)]
pub struct CsvTable {
    header: Vec<String>,
    body: String,
}

pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}
impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}
impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}
impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        CsvTable {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            body: String::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.header.len(), "CSV row width");
        let line: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::Num(x) => fmt_num(x),
                Cell::Int(i) => i.to_string(),
                Cell::Text(t) => t,
            })
            .collect();
        self.body.push_str(&line.join(","));
        self.body.push('\n');
    }

    pub fn render(&self) -> String {
        format!("{}\n{}", self.header.join(","), self.body)
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// One curve or bar set on a panel.
#[derive(Debug, Clone)]
pub enum Series {
    Line {
        label: String,
        x: Vec<f64>,
        y: Vec<f64>,
        color: String,
        width: f64,
    },
    ErrorBars {
        label: String,
        x: Vec<f64>,
        y: Vec<f64>,
        err: Vec<f64>,
        color: String,
    },
    Bars {
        labels: Vec<String>,
        values: Vec<f64>,
        colors: Vec<String>,
    },
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl Panel {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Panel {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0_f64, f64::NEG_INFINITY);
        for s in &self.series {
            match s {
                Series::Line { x, y, .. } => {
                    x.iter().for_each(|&v| {
                        x0 = x0.min(v);
                        x1 = x1.max(v);
                    });
                    y.iter().for_each(|&v| {
                        y0 = y0.min(v);
                        y1 = y1.max(v);
                    });
                }
                Series::ErrorBars { x, y, err, .. } => {
                    for k in 0..x.len() {
                        x0 = x0.min(x[k]);
                        x1 = x1.max(x[k]);
                        y0 = y0.min(y[k] - err[k]);
                        y1 = y1.max(y[k] + err[k]);
                    }
                }
                Series::Bars { values, .. } => {
                    x0 = 0.0;
                    x1 = x1.max(values.len() as f64);
                    values.iter().for_each(|&v| y1 = y1.max(v));
                }
            }
        }
        if !x0.is_finite() || x1 <= x0 {
            x0 = 0.0;
            x1 = 1.0;
        }
        if !y1.is_finite() || y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let pad = 0.05 * (y1 - y0);
        (x0, x1, y0, y1 + pad)
    }
}

/// Renders panels side by side into one SVG document.
pub fn render_svg(panels: &[Panel]) -> String {
    let (pw, ph) = (520.0, 380.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 55.0);
    let width = pw * panels.len().max(1) as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{ph}" viewBox="0 0 {width} {ph}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for (pi, panel) in panels.iter().enumerate() {
        let ox = pi as f64 * pw;
        let (x0, x1, y0, y1) = panel.bounds();
        let (left, right, top, bottom) = (ox + ml, ox + pw - mr, mt, ph - mb);
        let sx = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
        let sy = |y: f64| bottom - (y - y0) / (y1 - y0) * (bottom - top);

        let _ = writeln!(
            svg,
            r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            right - left,
            bottom - top
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            (left + right) / 2.0,
            escape(&panel.title)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            ph - 12.0,
            escape(&panel.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
            ox + 16.0,
            (top + bottom) / 2.0,
            ox + 16.0,
            (top + bottom) / 2.0,
            escape(&panel.y_label)
        );
        let is_bar = panel.series.iter().any(|s| matches!(s, Series::Bars { .. }));
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let yv = y0 + t * (y1 - y0);
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                left - 4.0,
                sy(yv) + 4.0,
                tick(yv)
            );
            if !is_bar {
                let xv = x0 + t * (x1 - x0);
                let _ = writeln!(
                    svg,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                    sx(xv),
                    bottom + 16.0,
                    tick(xv)
                );
            }
        }

        let mut legend_y = top + 14.0;
        for s in &panel.series {
            match s {
                Series::Line {
                    label,
                    x,
                    y,
                    color,
                    width,
                } => {
                    let pts: Vec<String> = x
                        .iter()
                        .zip(y)
                        .map(|(&a, &b)| format!("{:.2},{:.2}", sx(a), sy(b)))
                        .collect();
                    let _ = writeln!(
                        svg,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
                        pts.join(" ")
                    );
                    legend(&mut svg, right, &mut legend_y, label, color);
                }
                Series::ErrorBars {
                    label,
                    x,
                    y,
                    err,
                    color,
                } => {
                    let pts: Vec<String> = x
                        .iter()
                        .zip(y)
                        .map(|(&a, &b)| format!("{:.2},{:.2}", sx(a), sy(b)))
                        .collect();
                    let _ = writeln!(
                        svg,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                        pts.join(" ")
                    );
                    for k in 0..x.len() {
                        let (px, lo, hi) = (sx(x[k]), sy(y[k] - err[k]), sy(y[k] + err[k]));
                        let _ = writeln!(
                            svg,
                            r#"<line x1="{px:.2}" y1="{lo:.2}" x2="{px:.2}" y2="{hi:.2}" stroke="{color}"/><circle cx="{px:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                            sy(y[k])
                        );
                    }
                    legend(&mut svg, right, &mut legend_y, label, color);
                }
                Series::Bars {
                    labels,
                    values,
                    colors,
                } => {
                    let slot = (right - left) / values.len().max(1) as f64;
                    for (k, v) in values.iter().enumerate() {
                        let bx = left + slot * (k as f64 + 0.15);
                        let by = sy(*v);
                        let _ = writeln!(
                            svg,
                            r#"<rect x="{bx:.2}" y="{by:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                            slot * 0.7,
                            (bottom - by).max(0.0),
                            colors.get(k).map(String::as_str).unwrap_or("gray")
                        );
                        let _ = writeln!(
                            svg,
                            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"#,
                            bx + slot * 0.35,
                            bottom + 14.0,
                            escape(&labels[k])
                        );
                    }
                }
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn legend(svg: &mut String, right: f64, y: &mut f64, label: &str, color: &str) {
    if label.is_empty() {
        return;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="{color}">{}</text>"#,
        right - 6.0,
        *y,
        escape(label)
    );
    *y += 14.0;
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        trim_zeros(format!("{v:.3}"))
    } else {
        format!("{v:.1e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-0.10622_f64), "-0.10622");
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265");
        assert_eq!(fmt_num(123456789.4), "123456789");
        assert_eq!(fmt_num(1.0e-7 / 3.0), "3.33333333e-8");
        assert_eq!(fmt_num(2.5e12), "2.5e12");
        assert_eq!(fmt_num(0.99999999996), "1");
    }

    #[test]
    fn csv_layout() {
        let mut t = CsvTable::new(&["a", "b", "c"]);
        t.row(vec!["x".into(), 1usize.into(), 0.5.into()]);
        assert_eq!(t.render(), "a,b,c\nx,1,0.5\n");
    }

    #[test]
    fn svg_is_well_formed() {
        let mut p = Panel::new("t", "x", "y");
        p.series.push(Series::Line {
            label: "a<b".into(),
            x: vec![0.0, 1.0],
            y: vec![0.0, 2.0],
            color: color(0).into(),
            width: 2.0,
        });
        let s = render_svg(&[p]);
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a&lt;b"));
    }
}

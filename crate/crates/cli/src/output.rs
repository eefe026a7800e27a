//! CSV, JSON and SVG encoders.
//!
//! Numbers are written with Rust's `Debug` for `f64`: the shortest decimal
//! that parses back to the same value, in exponent form for very large or
//! small magnitudes, independent of the locale.

use std::fmt::Write as _;
use std::path::Path;

use halfplane_bvp::solver::{FieldGrid, FieldKind};

use crate::CliError;

/// Write to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn csv<R: AsRef<[f64]>>(header: &[&str], rows: &[R]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let mut first = true;
        for v in r.as_ref() {
            if !first {
                s.push(',');
            }
            first = false;
            let _ = write!(s, "{v:?}");
        }
        s.push('\n');
    }
    s
}

pub fn field_header(kind: FieldKind) -> &'static [&'static str] {
    match kind {
        FieldKind::Potential => &["t", "x", "u"],
        FieldKind::Gradient => &["t", "x", "f0", "f1"],
    }
}

pub fn field_csv(grid: &FieldGrid<f64>) -> String {
    let mut rows = Vec::with_capacity(grid.t_levels.len() * grid.x_nodes.len());
    for (i, &t) in grid.t_levels.iter().enumerate() {
        for (j, &x) in grid.x_nodes.iter().enumerate() {
            let mut r = vec![t, x];
            r.extend_from_slice(grid.at(i, j));
            rows.push(r);
        }
    }
    csv(field_header(grid.kind), &rows)
}

/// Inverse of [`field_csv`].
#[cfg(test)]
pub fn parse_field_csv(text: &str) -> Result<FieldGrid<f64>, CliError> {
    let bad = |m: &str| CliError::Config(format!("malformed field CSV: {m}"));
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty"))?.split(',').collect();
    let kind = match header.len() {
        3 => FieldKind::Potential,
        4 => FieldKind::Gradient,
        _ => return Err(bad("unexpected header")),
    };
    let (mut ts, mut xs, mut values) = (Vec::<f64>::new(), Vec::<f64>::new(), Vec::new());
    for line in lines.filter(|l| !l.is_empty()) {
        let nums: Vec<f64> = line
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|_| bad(line)))
            .collect::<Result<_, _>>()?;
        if nums.len() != header.len() {
            return Err(bad(line));
        }
        if ts.last() != Some(&nums[0]) {
            ts.push(nums[0]);
        }
        if ts.len() == 1 {
            xs.push(nums[1]);
        }
        values.extend_from_slice(&nums[2..]);
    }
    Ok(FieldGrid::new(ts, xs, kind, values)?)
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Self-contained line plot, one polyline per curve, with a legend.
pub fn svg_plot(title: &str, xlabel: &str, ylabel: &str, curves: &[(String, Vec<(f64, f64)>)]) -> String {
    let (w, h) = (720.0, 480.0);
    let (ml, mr, mt, mb) = (70.0, 150.0, 40.0, 50.0);
    let pts = curves.iter().flat_map(|c| c.1.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, (ml + w - mr) / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - ml - mr,
        h - mt - mb
    );
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(
            s,
            r##"<line x1="{ml}" x2="{}" y1="{y}" y2="{y}" stroke="#999" stroke-dasharray="4 3"/>"##,
            w - mr,
            y = py(0.0)
        );
    }
    for j in 0..=4 {
        let fx = x0 + (x1 - x0) * j as f64 / 4.0;
        let fy = y0 + (y1 - y0) * j as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, px(fx), h - mb + 16.0, tick(fx));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, ml - 6.0, py(fy) + 4.0, tick(fy));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (ml + w - mr) / 2.0, h - 12.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{y}" text-anchor="middle" transform="rotate(-90 16 {y})">{}</text>"#,
        escape(ylabel),
        y = (mt + h - mb) / 2.0
    );
    for (n, (label, data)) in curves.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let mut seg = String::new();
        for &(x, y) in data {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            let _ = write!(seg, "{:.2},{:.2} ", px(x), py(y));
        }
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, seg.trim_end());
        let ly = mt + 16.0 + 18.0 * n as f64;
        let lx = w - mr + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" x2="{}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-2 && v.abs() < 1e4) {
        format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

//! Artifact emitters: CSV tables, JSON documents and static SVG plots.
//!
//! Every artifact carries a metadata block with the toolkit version and the
//! configuration that produced it. CSV puts it in `#` comment lines.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::VERSION;

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Metadata attached to every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
}

impl Meta {
    pub fn new(command: impl Into<String>, config: Value) -> Self {
        Meta {
            tool: "quasilab",
            version: VERSION,
            command: command.into(),
            config,
        }
    }
}

/// A cell of a CSV table.
#[derive(Clone, Debug)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
            Cell::Text(t) => t.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
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

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
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

/// Column-named table rendered as CSV (',' separator, LF endings).
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, meta: &Meta) -> String {
        let mut out = String::new();
        // Metadata is compact JSON on a single comment line.
        let _ = writeln!(out, "# tool={} version={}", meta.tool, meta.version);
        let _ = writeln!(out, "# command={}", meta.command);
        let _ = writeln!(out, "# config={}", meta.config);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Rows as JSON objects keyed by column name.
    pub fn to_json_value(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Float(x) => json_f64(*x),
                            Cell::Int(i) => Value::from(*i),
                            Cell::Bool(b) => Value::from(*b),
                            Cell::Text(t) => Value::from(t.clone()),
                        };
                        (k.clone(), v)
                    })
                    .collect::<serde_json::Map<_, _>>();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// JSON has no infinities; they are written as strings.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(fmt_f64(x))
    }
}

/// Pretty JSON document `{ "meta": ..., "data": ... }` with a trailing newline.
pub fn json_document(meta: &Meta, data: Value) -> String {
    let doc = serde_json::json!({ "meta": meta, "data": data });
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 500.0;
const MARGIN: f64 = 60.0;

/// Minimal SVG canvas with a fixed data-to-pixel mapping.
pub struct Svg {
    body: String,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Svg {
    pub fn new(title: &str, meta: &Meta, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
        );
        let _ = writeln!(
            body,
            "<metadata>{}</metadata>",
            xml_escape(&serde_json::to_string(meta).expect("meta serializes"))
        );
        let _ = writeln!(body, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{}" y="30" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
            SVG_W / 2.0,
            xml_escape(title)
        );
        let mut svg = Svg {
            body,
            x_range: widen(x_range),
            y_range: widen(y_range),
        };
        svg.axes();
        svg
    }

    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        MARGIN + (x - lo) / (hi - lo) * (SVG_W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        SVG_H - MARGIN - (y - lo) / (hi - lo) * (SVG_H - 2.0 * MARGIN)
    }

    fn axes(&mut self) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let (l, r, b, t) = (self.px(x0), self.px(x1), self.py(y0), self.py(y1));
        let _ = writeln!(
            self.body,
            r#"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            r - l,
            b - t
        );
        for (v, anchor_x) in [(x0, l), (x1, r)] {
            let _ = writeln!(
                self.body,
                r#"<text x="{anchor_x:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
                b + 18.0,
                tick(v)
            );
        }
        for (v, anchor_y) in [(y0, b), (y1, t)] {
            let _ = writeln!(
                self.body,
                r#"<text x="{:.2}" y="{anchor_y:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
                l - 6.0,
                tick(v)
            );
        }
    }

    /// Filled rectangle in data coordinates.
    pub fn rect(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, fill: &str) {
        let (l, r) = (self.px(x0), self.px(x1));
        let (t, b) = (self.py(y1), self.py(y0));
        // Keep sub-pixel bands visible.
        let w = (r - l).max(0.5);
        let _ = writeln!(
            self.body,
            r#"<rect x="{l:.3}" y="{t:.3}" width="{w:.3}" height="{:.3}" fill="{fill}"/>"#,
            (b - t).max(0.5)
        );
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        let mut pts = String::new();
        for &(x, y) in points {
            let _ = write!(pts, "{:.3},{:.3} ", self.px(x), self.py(y));
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.2"/>"#,
            pts.trim_end()
        );
    }

    pub fn label(&mut self, x: f64, y: f64, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            self.px(x),
            self.py(y),
            xml_escape(text)
        );
    }

    pub fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn widen((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn tick(v: f64) -> String {
    format!("{v:.3}")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Color ramp from blue (0) to red (1).
pub fn heat_color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{Dendrogram, DistanceMatrix, Embedding2D};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportKind {
    Csv,
    Newick,
    Svg,
}

impl FromStr for ExportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportKind::Csv),
            "newick" | "nwk" => Ok(ExportKind::Newick),
            "svg" => Ok(ExportKind::Svg),
            other => Err(Error::InvalidArgument(format!("unknown export kind {other:?}"))),
        }
    }
}

impl ExportKind {
    /// Guess from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension()?.to_str()?.parse().ok()
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Artifact<'a> {
    Matrix(&'a DistanceMatrix),
    Dendrogram(&'a Dendrogram),
    Embedding(&'a Embedding2D),
}

pub fn export(artifact: Artifact<'_>, path: impl AsRef<Path>, kind: ExportKind) -> Result<()> {
    let path = path.as_ref();
    let text = render(artifact, kind)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// File contents for an artifact in the given format.
pub fn render(artifact: Artifact<'_>, kind: ExportKind) -> Result<String> {
    match (artifact, kind) {
        (Artifact::Matrix(m), ExportKind::Csv) => matrix_csv(m),
        (Artifact::Embedding(e), ExportKind::Csv) => embedding_csv(e),
        (Artifact::Dendrogram(d), ExportKind::Newick) => Ok(newick(d)),
        (Artifact::Dendrogram(d), ExportKind::Svg) => Ok(dendrogram_svg(d)),
        (Artifact::Embedding(e), ExportKind::Svg) => Ok(embedding_svg(e)),
        (a, k) => Err(Error::InvalidArgument(format!("cannot export {a:?} as {k:?}"))),
    }
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("csv: {e}"))
}

fn matrix_csv(m: &DistanceMatrix) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(m.labels()).map_err(csv_error)?;
    for row in m.rows() {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(csv_error)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)
}

fn embedding_csv(e: &Embedding2D) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["label".to_string()];
    header.extend((1..=e.dims()).map(|k| format!("x{k}")));
    w.write_record(&header).map_err(csv_error)?;
    for (label, c) in e.labels.iter().zip(&e.coords) {
        let mut rec = vec![label.clone()];
        rec.extend(c.iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(csv_error)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)
}

/// Reads a matrix written by the CSV export: a label header, then rows.
pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DistanceMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let labels: Vec<String> = r.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        let row = rec
            .iter()
            .map(|f| f.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad matrix entry {f:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    DistanceMatrix::from_rows(labels, rows)
}

fn newick_label(s: &str) -> String {
    if s.chars().any(|c| "()[]':;,".contains(c) || c.is_whitespace()) {
        format!("'{}'", s.replace('\'', "''"))
    } else {
        s.to_string()
    }
}

/// Newick string; branch lengths are height differences, leaves sit at 0.
pub fn newick(d: &Dendrogram) -> String {
    let n = d.item_count();
    if n == 0 {
        return ";".into();
    }
    if d.steps.is_empty() {
        return format!("{};", newick_label(&d.labels[0]));
    }
    let height = |id: usize| if id < n { 0.0 } else { d.steps[id - n].height };
    fn write(d: &Dendrogram, id: usize, n: usize, height: &dyn Fn(usize) -> f64, out: &mut String) {
        if id < n {
            out.push_str(&newick_label(&d.labels[id]));
            return;
        }
        let s = d.steps[id - n];
        out.push('(');
        for (k, c) in [s.a, s.b].into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write(d, c, n, height, out);
            let _ = write!(out, ":{}", s.height - height(c));
        }
        out.push(')');
    }
    let mut out = String::new();
    write(d, n + d.steps.len() - 1, n, &height, &mut out);
    out.push(';');
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 480.0;
const MARGIN: f64 = 40.0;

fn svg_open(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

pub fn dendrogram_svg(d: &Dendrogram) -> String {
    let n = d.item_count();
    let mut out = String::new();
    svg_open(&mut out);
    if n == 0 {
        out.push_str("</svg>\n");
        return out;
    }
    // leaf order from a depth-first walk so that links never cross
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![n + d.steps.len().max(1) - 1];
    if d.steps.is_empty() {
        stack = vec![0];
    }
    while let Some(id) = stack.pop() {
        if id < n {
            order.push(id);
        } else {
            let s = d.steps[id - n];
            stack.push(s.b);
            stack.push(s.a);
        }
    }
    let max_h = d.steps.iter().map(|s| s.height).fold(0.0f64, f64::max);
    let y_of = |h: f64| {
        let plot = SVG_H - 2.0 * MARGIN - 20.0;
        SVG_H - MARGIN - 20.0 - if max_h > 0.0 { h / max_h * plot } else { 0.0 }
    };
    let step = (SVG_W - 2.0 * MARGIN) / n as f64;
    let mut x = vec![0.0; n + d.steps.len()];
    for (pos, &leaf) in order.iter().enumerate() {
        x[leaf] = MARGIN + step * (pos as f64 + 0.5);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            x[leaf],
            SVG_H - MARGIN,
            xml_escape(&d.labels[leaf])
        );
    }
    let height = |id: usize| if id < n { 0.0 } else { d.steps[id - n].height };
    for (k, s) in d.steps.iter().enumerate() {
        let id = n + k;
        x[id] = 0.5 * (x[s.a] + x[s.b]);
        let top = y_of(s.height);
        for c in [s.a, s.b] {
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
                x[c],
                y_of(height(c)),
                x[c],
                top
            );
        }
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{top:.2}" x2="{:.2}" y2="{top:.2}" stroke="black"/>"#,
            x[s.a], x[s.b]
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn embedding_svg(e: &Embedding2D) -> String {
    let mut out = String::new();
    svg_open(&mut out);
    let coord = |c: &Vec<f64>, k: usize| c.get(k).copied().unwrap_or(0.0);
    let xs: Vec<f64> = e.coords.iter().map(|c| coord(c, 0)).collect();
    let ys: Vec<f64> = e.coords.iter().map(|c| coord(c, 1)).collect();
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if v.is_empty() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, lo + 1.0)
        }
    };
    let ((x0, x1), (y0, y1)) = (span(&xs), span(&ys));
    for ((x, y), label) in xs.iter().zip(&ys).zip(&e.labels) {
        let px = MARGIN + (x - x0) / (x1 - x0) * (SVG_W - 2.0 * MARGIN);
        let py = SVG_H - MARGIN - (y - y0) / (y1 - y0) * (SVG_H - 2.0 * MARGIN);
        let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="steelblue"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="9">{}</text>"#,
            px + 4.0,
            py - 4.0,
            xml_escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

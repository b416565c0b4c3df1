//! Rendering of tabular results as aligned text, CSV, JSON and SVG.
//!
//! Machine formats carry every value at full precision (`{}` on `f64`
//! prints the shortest string that parses back to the same bits); rounding
//! only happens in the text and SVG renderers.

use std::fmt::Write as _;

use clap::ValueEnum;
use fpbound::positivity::format_percent;
use fpbound::{BoundTable, JohnsonTableRow};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
    Svg,
}

/// A table that every output format, SVG included, can render.
#[derive(Debug, Clone, Copy)]
pub enum TablePayload<'a> {
    Bound(&'a BoundTable),
    Johnson(&'a [JohnsonTableRow]),
}

impl TablePayload<'_> {
    fn is_empty(&self) -> bool {
        match self {
            TablePayload::Bound(t) => t.is_empty(),
            TablePayload::Johnson(rows) => rows.is_empty(),
        }
    }
}

pub fn render_table(table: TablePayload<'_>, fmt: OutputFormat) -> Result<String, CliError> {
    if table.is_empty() {
        return Err(CliError::usage("nothing to render: the table is empty"));
    }
    Ok(match (table, fmt) {
        (TablePayload::Bound(t), OutputFormat::Text) => bound_text(t),
        (TablePayload::Bound(t), OutputFormat::Csv) => bound_csv(t)?,
        (TablePayload::Bound(t), OutputFormat::Json) => to_json(&BoundJson::from(t))?,
        (TablePayload::Bound(t), OutputFormat::Svg) => bound_svg(t),
        (TablePayload::Johnson(rows), OutputFormat::Text) => johnson_text(rows),
        (TablePayload::Johnson(rows), OutputFormat::Csv) => johnson_csv(rows)?,
        (TablePayload::Johnson(rows), OutputFormat::Json) => {
            to_json(&rows.iter().map(JohnsonJson::from).collect::<Vec<_>>())?
        }
        (TablePayload::Johnson(rows), OutputFormat::Svg) => johnson_svg(rows),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// CSV with a header row and string cells.
pub fn to_csv<S: AsRef<str>>(header: &[S], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::internal(e.to_string());
    w.write_record(header.iter().map(AsRef::as_ref)).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::internal(e.to_string()))
}

/// `x` rounded to `digits` significant digits, for human-readable output.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..=6).contains(&magnitude) {
        return format!("{:.*e}", digits.saturating_sub(1), x);
    }
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Left-aligned first column, right-aligned others.
pub fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                let _ = write!(line, "{cell:<w$}", w = widths[0]);
            } else {
                let _ = write!(line, "  {cell:>w$}", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn bound_text(t: &BoundTable) -> String {
    let mut rows =
        vec![std::iter::once("r \\ alpha".to_string()).chain(t.alphas.iter().map(|a| a.to_string())).collect()];
    for (r, cells) in t.ratios.iter().zip(&t.cells) {
        rows.push(std::iter::once(r.to_string()).chain(cells.iter().map(|&b| format_percent(b))).collect());
    }
    format!("Upper bound on the share of false positives among positive results\n{}", align(&rows))
}

fn bound_csv(t: &BoundTable) -> Result<String, CliError> {
    let header: Vec<String> = std::iter::once("r".to_string()).chain(t.alphas.iter().map(|a| a.to_string())).collect();
    let rows: Vec<Vec<String>> = t
        .ratios
        .iter()
        .zip(&t.cells)
        .map(|(r, cells)| std::iter::once(r.to_string()).chain(cells.iter().map(|c| c.to_string())).collect())
        .collect();
    to_csv(&header, &rows)
}

#[derive(Serialize)]
struct BoundJson {
    alphas: Vec<f64>,
    rows: Vec<BoundJsonRow>,
}

#[derive(Serialize)]
struct BoundJsonRow {
    r: f64,
    cells: Vec<BoundJsonCell>,
}

#[derive(Serialize)]
struct BoundJsonCell {
    alpha: f64,
    bound: f64,
    capped: f64,
}

impl From<&BoundTable> for BoundJson {
    fn from(t: &BoundTable) -> Self {
        BoundJson {
            alphas: t.alphas.clone(),
            rows: t
                .ratios
                .iter()
                .zip(&t.cells)
                .map(|(&r, cells)| BoundJsonRow {
                    r,
                    cells: t
                        .alphas
                        .iter()
                        .zip(cells)
                        .map(|(&alpha, &bound)| BoundJsonCell { alpha, bound, capped: bound.min(1.0) })
                        .collect(),
                })
                .collect(),
        }
    }
}

pub const JOHNSON_COLUMNS: [&str; 6] = ["bf_lo", "bf_hi", "p_lo", "p_hi", "prob_bin", "prob_h0_given_bin"];

fn johnson_text(rows: &[JohnsonTableRow]) -> String {
    let mut table = vec![["Bayes factor", "p-value", "P[E]", "P[H0|E]"].map(String::from).to_vec()];
    for row in rows {
        table.push(vec![
            interval_label(row),
            format!("{} - {}", sig(row.p_lo.get(), 2), sig(row.p_hi.get(), 2)),
            sig(row.prob_bin.get(), 3),
            sig(row.prob_h0_given_bin.get(), 3),
        ]);
    }
    let total = fpbound::bayes::false_positive_total(rows);
    format!("{}sum P[E] P[H0|E] = {}\n", align(&table), sig(total, 4))
}

fn interval_label(row: &JohnsonTableRow) -> String {
    let (lo, hi) = (row.interval.lo(), row.interval.hi());
    if hi.is_infinite() {
        format!(">= {}", sig(lo, 3))
    } else {
        format!("{} - {}", sig(lo, 3), sig(hi, 3))
    }
}

fn johnson_csv(rows: &[JohnsonTableRow]) -> Result<String, CliError> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            [r.interval.lo(), r.interval.hi(), r.p_lo.get(), r.p_hi.get(), r.prob_bin.get(), r.prob_h0_given_bin.get()]
                .iter()
                .map(|v| v.to_string())
                .collect()
        })
        .collect();
    to_csv(&JOHNSON_COLUMNS, &body)
}

#[derive(Serialize)]
struct JohnsonJson {
    bf_lo: f64,
    /// `null` for the open-ended last bin.
    bf_hi: Option<f64>,
    p_lo: f64,
    p_hi: f64,
    prob_bin: f64,
    prob_h0_given_bin: f64,
}

impl From<&JohnsonTableRow> for JohnsonJson {
    fn from(r: &JohnsonTableRow) -> Self {
        JohnsonJson {
            bf_lo: r.interval.lo(),
            bf_hi: r.interval.hi().is_finite().then(|| r.interval.hi()),
            p_lo: r.p_lo.get(),
            p_hi: r.p_hi.get(),
            prob_bin: r.prob_bin.get(),
            prob_h0_given_bin: r.prob_h0_given_bin.get(),
        }
    }
}

// ---------------------------------------------------------------------------
// SVG

const FONT: &str = "font-family=\"sans-serif\" font-size=\"12\"";

fn svg_open(width: u32, height: u32) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    )
}

/// White at 0 through red at 1.
fn heat(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let fade = (255.0 * (1.0 - v)).round() as u8;
    format!("#ff{fade:02x}{fade:02x}")
}

fn bound_svg(t: &BoundTable) -> String {
    const CELL_W: u32 = 80;
    const CELL_H: u32 = 40;
    const LEFT: u32 = 70;
    const TOP: u32 = 60;
    let width = LEFT + CELL_W * t.alphas.len() as u32 + 20;
    let height = TOP + CELL_H * t.ratios.len() as u32 + 20;
    let mut s = svg_open(width, height);
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" {FONT} font-weight=\"bold\">Bound on false positives among positives</text>",
        width / 2
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" {FONT}>alpha</text>",
        LEFT + CELL_W * t.alphas.len() as u32 / 2,
        TOP - 25
    );
    let _ = writeln!(
        s,
        "<text x=\"15\" y=\"{}\" text-anchor=\"middle\" {FONT}>r</text>",
        TOP + CELL_H * t.ratios.len() as u32 / 2
    );
    for (j, a) in t.alphas.iter().enumerate() {
        let x = LEFT + CELL_W * j as u32 + CELL_W / 2;
        let _ = writeln!(s, "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" {FONT}>{a}</text>", TOP - 6);
    }
    for (i, (r, cells)) in t.ratios.iter().zip(&t.cells).enumerate() {
        let y = TOP + CELL_H * i as u32;
        let _ =
            writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" {FONT}>{r}</text>", LEFT - 8, y + CELL_H / 2 + 4);
        for (j, &b) in cells.iter().enumerate() {
            let x = LEFT + CELL_W * j as u32;
            let _ = writeln!(
                s,
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL_W}\" height=\"{CELL_H}\" fill=\"{}\" stroke=\"#444\"/>",
                heat(b)
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" {FONT}>{}</text>",
                x + CELL_W / 2,
                y + CELL_H / 2 + 4,
                format_percent(b)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn johnson_svg(rows: &[JohnsonTableRow]) -> String {
    const GROUP_W: u32 = 110;
    const BAR_W: u32 = 36;
    const LEFT: u32 = 60;
    const TOP: u32 = 50;
    const PLOT_H: u32 = 220;
    let width = LEFT + GROUP_W * rows.len() as u32 + 20;
    let height = TOP + PLOT_H + 70;
    let max = rows
        .iter()
        .flat_map(|r| [r.prob_bin.get(), r.prob_h0_given_bin.get()])
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let base = TOP + PLOT_H;
    let mut s = svg_open(width, height);
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" {FONT} font-weight=\"bold\">Bayes factor bins</text>",
        width / 2
    );
    let _ = writeln!(s, "<line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{base}\" stroke=\"black\"/>");
    let _ = writeln!(s, "<line x1=\"{LEFT}\" y1=\"{base}\" x2=\"{}\" y2=\"{base}\" stroke=\"black\"/>", width - 20);
    for tick in 0..=4 {
        let v = max * tick as f64 / 4.0;
        let y = base - (PLOT_H as f64 * tick as f64 / 4.0).round() as u32;
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" {FONT}>{}</text>", LEFT - 6, y + 4, sig(v, 2));
    }
    let colors = ["#4477aa", "#ee6677"];
    for (i, row) in rows.iter().enumerate() {
        let gx = LEFT + GROUP_W * i as u32 + (GROUP_W - 2 * BAR_W) / 2;
        for (k, v) in [row.prob_bin.get(), row.prob_h0_given_bin.get()].into_iter().enumerate() {
            let h = (PLOT_H as f64 * v / max).round() as u32;
            let x = gx + BAR_W * k as u32;
            let _ = writeln!(
                s,
                "<rect x=\"{x}\" y=\"{}\" width=\"{BAR_W}\" height=\"{h}\" fill=\"{}\"/>",
                base - h,
                colors[k]
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{}</text>",
                x + BAR_W / 2,
                base - h - 3,
                sig(v, 2)
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" {FONT}>{}</text>",
            gx + BAR_W,
            base + 18,
            xml_escape(&interval_label(row))
        );
    }
    let ly = height - 20;
    for (k, label) in ["P[E]", "P[H0|E]"].iter().enumerate() {
        let x = LEFT + 120 * k as u32;
        let _ = writeln!(s, "<rect x=\"{x}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>", ly - 10, colors[k]);
        let _ = writeln!(s, "<text x=\"{}\" y=\"{ly}\" {FONT}>{label}</text>", x + 18);
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpbound::positivity::bound_table;

    fn standard_grid() -> BoundTable {
        bound_table(&[0.1, 0.05, 0.01, 0.005], &[0.5, 0.2, 0.1]).unwrap()
    }

    #[test]
    fn sig_digits() {
        assert_eq!(sig(0.17978, 3), "0.180");
        assert_eq!(sig(0.0234, 2), "0.023");
        assert_eq!(sig(21.77, 3), "21.8");
        assert_eq!(sig(0.0, 3), "0");
        assert_eq!(sig(1.5e-9, 2), "1.5e-9");
    }

    #[test]
    fn bound_text_cells() {
        let text = render_table(TablePayload::Bound(&standard_grid()), OutputFormat::Text).unwrap();
        for cell in ["11%", "5.3%", "1.0%", "0.5%", "44%", "21%", "4.0%", "2.0%", "100%", "47%", "9.1%", "4.5%"] {
            assert!(text.split_whitespace().any(|w| w == cell), "missing {cell} in\n{text}");
        }
    }

    #[test]
    fn bound_csv_shape() {
        let csv = render_table(TablePayload::Bound(&standard_grid()), OutputFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "r,0.1,0.05,0.01,0.005");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("0.2,"));
    }

    #[test]
    fn svg_is_self_contained() {
        let svg = render_table(TablePayload::Bound(&standard_grid()), OutputFormat::Svg).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<rect").count(), 1 + 12);
        assert!(!svg.contains("href"));
        let rows = fpbound::bayes::johnson_table(0.05, 100, &[3.87, 5.44]).unwrap();
        let bars = render_table(TablePayload::Johnson(&rows), OutputFormat::Svg).unwrap();
        assert!(bars.contains("&gt;= 5.44"));
    }

    #[test]
    fn empty_tables_are_rejected() {
        let empty = BoundTable { alphas: vec![], ratios: vec![0.5], cells: vec![vec![]] };
        let err = render_table(TablePayload::Bound(&empty), OutputFormat::Text).unwrap_err();
        assert_eq!(err.code, 2);
        assert_eq!(render_table(TablePayload::Johnson(&[]), OutputFormat::Csv).unwrap_err().code, 2);
    }

    #[test]
    fn johnson_json_marks_open_bin() {
        let rows = fpbound::bayes::johnson_table(0.05, 100, &[3.87]).unwrap();
        let json = render_table(TablePayload::Johnson(&rows), OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v[0]["bf_hi"].is_null());
        assert!((v[0]["prob_bin"].as_f64().unwrap() - 0.275).abs() < 1e-3);
    }
}

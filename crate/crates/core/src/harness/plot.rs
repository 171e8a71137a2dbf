//! Minimal self-contained SVG line charts for harness CSV files: one series
//! per group value, optional one-standard-deviation error bars, optional
//! base-10 log y-axis with ticks at powers of ten.

use std::path::Path;

use super::experiments::read_csv;
use crate::{Error, Result};

/// What to plot from a harness CSV.
#[derive(Debug, Clone)]
pub struct PlotStyle {
    /// Column for the x-axis (numeric).
    pub x_col: String,
    /// Column for the y-axis (numeric).
    pub y_col: String,
    /// Optional column with one standard deviation for error bars.
    pub sd_col: Option<String>,
    /// Columns whose joined values split rows into series.
    pub series_cols: Vec<String>,
    /// Optional exact-match row filter `(column, value)`.
    pub filter: Option<(String, String)>,
    /// Base-10 logarithmic y-axis.
    pub log10_y: bool,
    pub title: String,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const PX0: f64 = 72.0;
const PX1: f64 = 616.0;
const PY0: f64 = 34.0;
const PY1: f64 = 378.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Renders a line chart from a harness CSV. Fails, writing nothing, when no
/// data rows survive the filter.
pub fn render_plot(csv_path: &Path, style: &PlotStyle) -> Result<String> {
    let (header, rows) = read_csv(csv_path)?;
    let col = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Csv {
                path: csv_path.to_path_buf(),
                reason: format!("missing column `{name}`"),
            })
    };
    let xi = col(&style.x_col)?;
    let yi = col(&style.y_col)?;
    let sdi = style.sd_col.as_deref().map(col).transpose()?;
    let series_idx: Vec<usize> = style
        .series_cols
        .iter()
        .map(|c| col(c))
        .collect::<Result<_>>()?;
    let filter_idx = style
        .filter
        .as_ref()
        .map(|(c, _)| col(c))
        .transpose()?;

    // (series key, x, y, sd)
    let mut data: Vec<(String, f64, f64, f64)> = Vec::new();
    for row in &rows {
        if let (Some(fi), Some((_, want))) = (filter_idx, style.filter.as_ref()) {
            if &row[fi] != want {
                continue;
            }
        }
        let x: f64 = row[xi].parse().map_err(|_| Error::Csv {
            path: csv_path.to_path_buf(),
            reason: format!("non-numeric x `{}`", row[xi]),
        })?;
        let y: f64 = row[yi].parse().map_err(|_| Error::Csv {
            path: csv_path.to_path_buf(),
            reason: format!("non-numeric y `{}`", row[yi]),
        })?;
        let sd: f64 = match sdi {
            Some(i) => row[i].parse().unwrap_or(0.0),
            None => 0.0,
        };
        if style.log10_y && !(y > 0.0) {
            continue;
        }
        let key = series_idx
            .iter()
            .map(|&i| row[i].clone())
            .collect::<Vec<_>>()
            .join("/");
        data.push((key, x, y, sd));
    }
    if data.is_empty() {
        return Err(Error::Csv {
            path: csv_path.to_path_buf(),
            reason: "no data rows to plot".into(),
        });
    }

    let ymap = |y: f64| if style.log10_y { y.log10() } else { y };
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut vmin = f64::INFINITY;
    let mut vmax = f64::NEG_INFINITY;
    for &(_, x, y, sd) in &data {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        let lo = if style.log10_y {
            ymap((y - sd).max(y * 1e-2))
        } else {
            ymap(y - sd)
        };
        vmin = vmin.min(lo).min(ymap(y));
        vmax = vmax.max(ymap(y + sd)).max(ymap(y));
    }
    if xmax == xmin {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if vmax == vmin {
        vmin -= 1.0;
        vmax += 1.0;
    }
    let pad = 0.05 * (vmax - vmin);
    let (vmin, vmax) = (vmin - pad, vmax + pad);
    let sx = move |x: f64| PX0 + (x - xmin) / (xmax - xmin) * (PX1 - PX0);
    let sv = move |v: f64| PY1 - (v - vmin) / (vmax - vmin) * (PY1 - PY0);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        0.5 * (PX0 + PX1),
        xml_escape(&style.title)
    ));
    // Axes.
    svg.push_str(&format!(
        "  <line x1=\"{PX0}\" y1=\"{PY1}\" x2=\"{PX1}\" y2=\"{PY1}\" stroke=\"black\"/>\n\
         \x20 <line x1=\"{PX0}\" y1=\"{PY0}\" x2=\"{PX0}\" y2=\"{PY1}\" stroke=\"black\"/>\n"
    ));

    // Y ticks: powers of ten in log mode, five even ticks otherwise.
    if style.log10_y {
        let lo = vmin.floor() as i64;
        let hi = vmax.ceil() as i64;
        for e in lo..=hi {
            let v = e as f64;
            if v < vmin || v > vmax {
                continue;
            }
            let y = sv(v);
            svg.push_str(&format!(
                "  <line x1=\"{}\" y1=\"{y}\" x2=\"{PX0}\" y2=\"{y}\" stroke=\"black\"/>\n",
                PX0 - 5.0
            ));
            svg.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\" class=\"ytick\">1e{e}</text>\n",
                PX0 - 8.0,
                y + 4.0
            ));
        }
    } else {
        for k in 0..=4 {
            let v = vmin + (vmax - vmin) * k as f64 / 4.0;
            let y = sv(v);
            svg.push_str(&format!(
                "  <line x1=\"{}\" y1=\"{y}\" x2=\"{PX0}\" y2=\"{y}\" stroke=\"black\"/>\n",
                PX0 - 5.0
            ));
            svg.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\" class=\"ytick\">{:.4}</text>\n",
                PX0 - 8.0,
                y + 4.0,
                v
            ));
        }
    }
    for k in 0..=4 {
        let x = xmin + (xmax - xmin) * k as f64 / 4.0;
        let px = sx(x);
        svg.push_str(&format!(
            "  <line x1=\"{px}\" y1=\"{PY1}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>\n",
            PY1 + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{px}\" y=\"{}\" text-anchor=\"middle\" class=\"xtick\">{:.4}</text>\n",
            PY1 + 18.0,
            x
        ));
    }

    // Series, sorted for deterministic output.
    let mut keys: Vec<String> = data.iter().map(|d| d.0.clone()).collect();
    keys.sort();
    keys.dedup();
    for (si, key) in keys.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let mut pts: Vec<(f64, f64, f64)> = data
            .iter()
            .filter(|d| &d.0 == key)
            .map(|d| (d.1, d.2, d.3))
            .collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if sdi.is_some() {
            for &(x, y, sd) in &pts {
                if sd <= 0.0 {
                    continue;
                }
                let px = sx(x);
                let y_lo = if style.log10_y {
                    ymap((y - sd).max(y * 1e-2))
                } else {
                    ymap(y - sd)
                };
                let y_hi = ymap(y + sd);
                svg.push_str(&format!(
                    "  <line class=\"errbar\" x1=\"{px}\" y1=\"{}\" x2=\"{px}\" y2=\"{}\" \
                     stroke=\"{color}\"/>\n",
                    sv(y_lo),
                    sv(y_hi)
                ));
            }
        }
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y, _)| format!("{:.2},{:.2}", sx(x), sv(ymap(y))))
            .collect();
        svg.push_str(&format!(
            "  <polyline class=\"series\" points=\"{}\" fill=\"none\" stroke=\"{color}\" \
             stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        for &(x, y, _) in &pts {
            svg.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
                sx(x),
                sv(ymap(y))
            ));
        }
        let label = if key.is_empty() { "series" } else { key };
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" fill=\"{color}\" class=\"legend\">{}</text>\n",
            PX1 - 90.0,
            PY0 + 16.0 * si as f64 + 4.0,
            xml_escape(label)
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

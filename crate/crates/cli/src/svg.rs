//! Minimal standalone SVG line plots.

use std::fmt::Write as _;

use friedel_core::Error;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub dashed: bool,
}

impl Curve {
    pub fn new(label: impl Into<String>, x: Vec<f64>, y: Vec<f64>) -> Self {
        Curve {
            label: label.into(),
            x,
            y,
            dashed: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvgStyle {
    pub width: u32,
    pub height: u32,
    pub x_label: String,
    pub y_label: String,
    /// Extra legend line, e.g. the display scale.
    pub note: Option<String>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            width: 800,
            height: 500,
            x_label: "R".into(),
            y_label: "V(R)".into(),
            note: None,
        }
    }
}

/// Data range padded by 5% of its span on each side.
pub fn axis_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let span = hi - lo;
    let pad = if span > 0.0 {
        0.05 * span
    } else if lo != 0.0 {
        0.05 * lo.abs()
    } else {
        1.0
    };
    (lo - pad, hi + pad)
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders curves on shared linear axes, one `<polyline>` per curve.
pub fn emit_svg(curves: &[Curve], style: &SvgStyle) -> Result<String, Error> {
    if curves.is_empty() {
        return Err(Error::Domain("nothing to plot".into()));
    }
    for c in curves {
        if c.x.is_empty() || c.x.len() != c.y.len() {
            return Err(Error::Domain(format!(
                "curve `{}` is empty or ragged",
                c.label
            )));
        }
        if !c.x.iter().chain(&c.y).all(|v| v.is_finite()) {
            return Err(Error::Domain(format!(
                "curve `{}` has non-finite points",
                c.label
            )));
        }
    }
    let (x_lo, x_hi) = axis_range(curves.iter().flat_map(|c| c.x.iter().copied()));
    let (y_lo, y_hi) = axis_range(curves.iter().flat_map(|c| c.y.iter().copied()));

    let (w, h) = (style.width as f64, style.height as f64);
    let (left, right, top, bottom) = (80.0, 20.0, 20.0, 50.0);
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;
    let px = |x: f64| left + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| top + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        style.width, style.height, style.width, style.height
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#);
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = x_lo + t * (x_hi - x_lo);
        let yv = y_lo + t * (y_hi - y_lo);
        let (x, y) = (px(xv), py(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            top + plot_h,
            top + plot_h + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            top + plot_h + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="black"/>"#,
            left - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 8.0,
            y + 4.0,
            tick_label(yv)
        );
    }
    if y_lo < 0.0 && y_hi > 0.0 {
        let _ = writeln!(
            s,
            r##"<line x1="{left:.2}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="#999999" stroke-dasharray="2,3"/>"##,
            py(0.0),
            left + plot_w
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        left + plot_w / 2.0,
        h - 10.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">{1}</text>"#,
        top + plot_h / 2.0,
        escape(&style.y_label)
    );
    let _ = writeln!(s, "</g>");

    for (i, c) in curves.iter().enumerate() {
        let points: Vec<String> =
            c.x.iter()
                .zip(&c.y)
                .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
        let dash = if c.dashed {
            r#" stroke-dasharray="6,4""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            points.join(" ")
        );
    }

    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="12">"#);
    let legend_x = left + plot_w - 150.0;
    let mut legend_y = top + 16.0;
    for (i, c) in curves.iter().enumerate() {
        let dash = if c.dashed {
            r#" stroke-dasharray="6,4""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<line x1="{legend_x:.2}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="{2}" stroke-width="1.5"{dash}/>"#,
            legend_y - 4.0,
            legend_x + 24.0,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{legend_y:.2}">{}</text>"#,
            legend_x + 30.0,
            escape(&c.label)
        );
        legend_y += 16.0;
    }
    if let Some(note) = &style.note {
        let _ = writeln!(
            s,
            r#"<text x="{legend_x:.2}" y="{legend_y:.2}">{}</text>"#,
            escape(note)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    Ok(s)
}

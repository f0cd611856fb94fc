use std::fmt::Write as _;
use std::io::Write;

use super::{delta, StatSeries};
use crate::error::Result;

/// Column layout of a delta CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaColumns {
    /// `x,delta_re[,delta_im]`; the imaginary column appears only for complex series.
    Complex,
    /// `x,delta_sq`.
    Squared,
}

/// Every norm jump.
pub fn checkpoints(series: &StatSeries) -> Vec<f64> {
    series.norms().iter().map(|&n| n as f64).collect()
}

/// `count` logarithmically spaced points from the first to the last norm.
pub fn log_checkpoints(series: &StatSeries, count: usize) -> Result<Vec<f64>> {
    let (a, b) = (series.first_norm()? as f64, series.last_norm()? as f64);
    if count < 2 || b <= a {
        return Ok(vec![b]);
    }
    let (la, lb) = (a.ln(), b.ln());
    let mut out: Vec<f64> = (0..count)
        .map(|i| (la + (lb - la) * i as f64 / (count - 1) as f64).exp())
        .collect();
    // land exactly on the endpoints despite exp/ln rounding
    out[0] = a;
    out[count - 1] = b;
    Ok(out)
}

/// Writes `delta(phi, x)` at the given points, preceded by `# `-prefixed comment lines.
pub fn write_delta_csv<W: Write>(
    mut w: W,
    series: &StatSeries,
    xs: &[f64],
    columns: DeltaColumns,
    comments: &[String],
) -> Result<()> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    let complex = series.sums().iter().any(|s| s.im != 0.0);
    match columns {
        DeltaColumns::Squared => writeln!(w, "x,delta_sq")?,
        DeltaColumns::Complex if complex => writeln!(w, "x,delta_re,delta_im")?,
        DeltaColumns::Complex => writeln!(w, "x,delta_re")?,
    }
    for &x in xs {
        let d = delta(series, x)?;
        match columns {
            DeltaColumns::Squared => writeln!(w, "{x},{:e}", d.norm_sqr())?,
            DeltaColumns::Complex if complex => writeln!(w, "{x},{:e},{:e}", d.re, d.im)?,
            DeltaColumns::Complex => writeln!(w, "{x},{:e}", d.re)?,
        }
    }
    Ok(())
}

/// One named line of a plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Series2d {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A self-contained SVG line plot with one `<polyline>` per series.
pub fn svg_plot(series: &[Series2d], log_x: bool, title: &str, y_label: &str) -> String {
    let (w, h) = (800.0, 500.0);
    let (ml, mr, mt, mb) = (70.0, 160.0, 40.0, 50.0);
    let tx = |x: f64| if log_x { x.max(f64::MIN_POSITIVE).log10() } else { x };
    let pts = series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        let x = tx(x);
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| ml + (tx(x) - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        (w - mr + ml) / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<path d="M{ml} {mt} V{} H{}" stroke="black" fill="none"/>"#,
        h - mb,
        w - mr
    );
    let xlab = if log_x { "log10 x" } else { "x" };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{xlab} [{x0:.3}, {x1:.3}]</text>"#,
        (w - mr + ml) / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">{} [{y0:.3e}, {y1:.3e}]</text>"#,
        h / 2.0,
        h / 2.0,
        escape(y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = mt + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            w - mr + 10.0,
            ly + 12.0,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn csv_and_svg() {
        let s = StatSeries::from_values([(2, Complex64::new(1.0, 0.0)), (3, Complex64::new(-1.0, 0.0))]).unwrap();
        let mut buf = Vec::new();
        write_delta_csv(&mut buf, &s, &checkpoints(&s), DeltaColumns::Complex, &["hdr".into()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# hdr\nx,delta_re\n2,1e0\n3,0e0\n");
        let xs = log_checkpoints(&s, 5).unwrap();
        assert_eq!((xs[0], xs[4]), (2.0, 3.0));
        let svg = svg_plot(
            &[Series2d { name: "a<b".into(), points: vec![(2.0, 1.0), (3.0, 0.0)] }],
            true,
            "t",
            "y",
        );
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("a&lt;b"));
    }
}

//! Minimal static scatter plots.

use std::fmt::Write;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 70.0;

pub struct Scatter {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub points: Vec<(f64, f64)>,
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { (hi - lo) * 0.05 } else { 0.5 };
    (lo - pad, hi + pad)
}

impl Scatter {
    /// Renders an 800x800 SVG document; identical input gives identical bytes.
    pub fn render(&self) -> String {
        let xs: Vec<f64> = self
            .points
            .iter()
            .map(|&(x, _)| if self.log_x { x.log10() } else { x })
            .collect();
        let (x0, x1) = extent(xs.iter().copied());
        let (y0, y1) = extent(self.points.iter().map(|p| p.1));
        let span = SIZE - 2.0 * MARGIN;
        let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * span;
        let py = |y: f64| SIZE - MARGIN - (y - y0) / (y1 - y0) * span;
        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
        )
        .unwrap();
        writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="30" text-anchor="middle" font-size="18">{}</text>"#,
            SIZE / 2.0,
            escape(&self.title)
        )
        .unwrap();
        let (l, r, t, b) = (MARGIN, SIZE - MARGIN, MARGIN, SIZE - MARGIN);
        writeln!(
            s,
            r#"<path d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#
        )
        .unwrap();
        let fmt_x = |v: f64| {
            if self.log_x {
                format!("{:.0}", 10f64.powf(v))
            } else {
                format!("{v:.2}")
            }
        };
        for (v, anchor) in [(x0, "start"), (x1, "end")] {
            writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}" font-size="12">{}</text>"#,
                px(v),
                b + 18.0,
                fmt_x(v)
            )
            .unwrap();
        }
        for v in [y0, y1] {
            writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{v:.2}</text>"#,
                l - 6.0,
                py(v) + 4.0
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
            SIZE / 2.0,
            SIZE - 20.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="20" y="{0}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {0})">{1}</text>"#,
            SIZE / 2.0,
            escape(&self.y_label)
        )
        .unwrap();
        for (x, &(_, y)) in xs.iter().zip(&self.points) {
            writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue"/>"#,
                px(*x),
                py(y)
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_circle_per_point() {
        let sc = Scatter {
            title: "a < b".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            log_x: true,
            points: vec![(10.0, 1.0), (100.0, 2.0), (1000.0, 1.5)],
        };
        let svg = sc.render();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg, sc.render());
    }

    #[test]
    fn empty_plot_is_well_formed() {
        let sc = Scatter {
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            log_x: false,
            points: Vec::new(),
        };
        assert!(!sc.render().contains("NaN"));
    }
}

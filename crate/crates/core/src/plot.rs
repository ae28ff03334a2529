//! Minimal static SVG output and marching-squares level sets.

use std::fmt::Write as _;

/// Line segments of the level set `value = level` of a scalar field sampled
/// on an `nx x ny` lattice (row-major, `values[iy * nx + ix]`). Endpoints are
/// in fractional lattice coordinates `(ix, iy)`.
pub fn marching_squares(values: &[f64], nx: usize, ny: usize, level: f64) -> Vec<[(f64, f64); 2]> {
    assert_eq!(values.len(), nx * ny);
    let at = |ix: usize, iy: usize| values[iy * nx + ix];
    let mut segments = Vec::new();
    for iy in 0..ny.saturating_sub(1) {
        for ix in 0..nx.saturating_sub(1) {
            // corners counter-clockwise from the lower left
            let corners = [(ix, iy), (ix + 1, iy), (ix + 1, iy + 1), (ix, iy + 1)];
            let vals = corners.map(|(a, b)| at(a, b));
            let mut case = 0;
            for (bit, v) in vals.iter().enumerate() {
                if *v > level {
                    case |= 1 << bit;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            // crossing on edge e joins corners e and e+1
            let cross = |e: usize| {
                let (a, b) = (e, (e + 1) % 4);
                let t = (level - vals[a]) / (vals[b] - vals[a]);
                let (pa, pb) = (corners[a], corners[b]);
                (
                    pa.0 as f64 + t * (pb.0 as f64 - pa.0 as f64),
                    pa.1 as f64 + t * (pb.1 as f64 - pa.1 as f64),
                )
            };
            let edges: Vec<usize> = (0..4)
                .filter(|&e| ((case >> e) & 1) != ((case >> ((e + 1) % 4)) & 1))
                .collect();
            if edges.len() == 2 {
                segments.push([cross(edges[0]), cross(edges[1])]);
            } else {
                // saddle: decide the pairing by the cell average
                let center_above = vals.iter().sum::<f64>() / 4.0 > level;
                let corner0_above = (case & 1) == 1;
                if center_above == corner0_above {
                    segments.push([cross(0), cross(1)]);
                    segments.push([cross(2), cross(3)]);
                } else {
                    segments.push([cross(3), cross(0)]);
                    segments.push([cross(1), cross(2)]);
                }
            }
        }
    }
    segments
}

/// Plot in data coordinates mapped onto a fixed-size canvas.
#[derive(Debug, Clone)]
pub struct SvgPlot {
    width: f64,
    height: f64,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
}

pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

impl SvgPlot {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        let pad = |(a, b): (f64, f64)| if b > a { (a, b) } else { (a - 0.5, b + 0.5) };
        Self {
            width: 640.0,
            height: 480.0,
            margin: 40.0,
            x_range: pad(x_range),
            y_range: pad(y_range),
            body: String::new(),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let w = self.width - 2.0 * self.margin;
        let h = self.height - 2.0 * self.margin;
        (
            self.margin + (x - x0) / (x1 - x0) * w,
            self.height - self.margin - (y - y0) / (y1 - y0) * h,
        )
    }

    pub fn axes(&mut self) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let (a, b) = self.map(x0, y0);
        let (c, d) = self.map(x1, y1);
        let _ = writeln!(
            self.body,
            r#"<rect x="{a:.3}" y="{d:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black"/>"#,
            c - a,
            b - d
        );
        let label = |v: f64| format!("{v:.3}");
        let _ = writeln!(
            self.body,
            r#"<text x="{a:.3}" y="{:.3}" font-size="11">{}</text>"#,
            b + 14.0,
            label(x0)
        );
        let _ = writeln!(
            self.body,
            r#"<text x="{:.3}" y="{:.3}" font-size="11" text-anchor="end">{}</text>"#,
            c,
            b + 14.0,
            label(x1)
        );
        let _ = writeln!(
            self.body,
            r#"<text x="{:.3}" y="{b:.3}" font-size="11" text-anchor="end">{}</text>"#,
            a - 3.0,
            label(y0)
        );
        let _ = writeln!(
            self.body,
            r#"<text x="{:.3}" y="{:.3}" font-size="11" text-anchor="end">{}</text>"#,
            a - 3.0,
            d + 10.0,
            label(y1)
        );
        let _ = writeln!(
            self.body,
            r#"<text x="{:.3}" y="{:.3}" font-size="12" text-anchor="middle">Re</text>"#,
            (a + c) / 2.0,
            b + 28.0
        );
        let _ = writeln!(
            self.body,
            r#"<text x="12" y="{:.3}" font-size="12">Im</text>"#,
            (b + d) / 2.0
        );
    }

    pub fn segments(&mut self, segs: &[[(f64, f64); 2]], stroke: &str) {
        if segs.is_empty() {
            return;
        }
        let mut d = String::new();
        for [p, q] in segs {
            let (a, b) = self.map(p.0, p.1);
            let (c, e) = self.map(q.0, q.1);
            let _ = write!(d, "M{a:.3} {b:.3}L{c:.3} {e:.3}");
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="1"/>"#
        );
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, closed: bool) {
        if pts.is_empty() {
            return;
        }
        if pts.len() == 1 {
            self.dot(pts[0], 3.0, stroke);
            return;
        }
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (a, b) = self.map(p.0, p.1);
            let _ = write!(d, "{}{a:.3} {b:.3}", if i == 0 { "M" } else { "L" });
        }
        if closed {
            d.push('Z');
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#
        );
    }

    pub fn dot(&mut self, p: (f64, f64), r: f64, fill: &str) {
        let (a, b) = self.map(p.0, p.1);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{a:.3}" cy="{b:.3}" r="{r:.1}" fill="{fill}"/>"#
        );
    }

    pub fn legend(&mut self, row: usize, text: &str, color: &str) {
        let y = self.margin + 14.0 * row as f64 + 12.0;
        let x = self.width - self.margin - 4.0;
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.3}" y="{y:.3}" font-size="11" text-anchor="end" fill="{color}">{text}</text>"#
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n",
            w = self.width,
            h = self.height,
            body = self.body
        )
    }
}

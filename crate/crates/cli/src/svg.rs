//! Static SVG 1.1 figures.

use std::fmt::Write;

use abp_core::{Polygon, Vec2};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 0.06;

/// A figure in world coordinates, mapped to a square canvas with `y` up.
pub struct Figure {
    lo: Vec2,
    hi: Vec2,
    body: String,
}

impl Figure {
    pub fn new(points: impl IntoIterator<Item = Vec2>) -> Self {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.x.is_finite() {
            lo = Vec2::new(-1.0, -1.0);
            hi = Vec2::new(1.0, 1.0);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        let pad = MARGIN * span;
        let c = (lo + hi) * 0.5;
        let half = 0.5 * span + pad;
        Figure { lo: c - Vec2::new(half, half), hi: c + Vec2::new(half, half), body: String::new() }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let s = SIZE / (self.hi.x - self.lo.x);
        ((p.x - self.lo.x) * s, (self.hi.y - p.y) * s)
    }

    pub fn polygon(&mut self, poly: &Polygon, stroke: &str, fill: &str) {
        let pts: Vec<String> = poly
            .vertices()
            .iter()
            .map(|&v| {
                let (x, y) = self.map(v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" stroke="{stroke}" fill="{fill}" stroke-width="1.2"/>"#,
            pts.join(" ")
        );
    }

    pub fn segment(&mut self, a: Vec2, b: Vec2, stroke: &str) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-dasharray="4 3"/>"#
        );
    }

    pub fn points(&mut self, pts: impl IntoIterator<Item = Vec2>, radius: f64, fill: &str) {
        let _ = writeln!(self.body, r#"<g fill="{fill}">"#);
        for p in pts {
            let (x, y) = self.map(p);
            let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius}"/>"#);
        }
        self.body.push_str("</g>\n");
    }

    pub fn title(&mut self, text: &str) {
        let esc = text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(self.body, r#"<text x="8" y="16" font-family="sans-serif" font-size="12">{esc}</text>"#);
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

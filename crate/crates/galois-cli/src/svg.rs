//! Static plot of the pencil parameter plane.

use std::fmt::Write;

use crate::report::{PipelineReport, C};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;

fn colour(kind: &str) -> &'static str {
    match kind {
        "dual-tangent" => "#1f77b4",
        "multiple-branch-line" => "#d62728",
        "singular-point-line" => "#2ca02c",
        _ => "#7f7f7f",
    }
}

struct View {
    min: C,
    scale: f64,
}

impl View {
    fn fit(points: impl Iterator<Item = C>) -> View {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if !lo[0].is_finite() {
            return View { min: [-1.0, -1.0], scale: (SIZE - 2.0 * MARGIN) / 2.0 };
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        View { min: lo, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    /// Imaginary axis points up.
    fn map(&self, p: C) -> (f64, f64) {
        (MARGIN + (p[0] - self.min[0]) * self.scale, SIZE - MARGIN - (p[1] - self.min[1]) * self.scale)
    }
}

/// One `<circle>` per branch point, petals as polylines and the base point
/// as a square.
pub fn render(report: &PipelineReport) -> String {
    let all = report
        .branch_points
        .iter()
        .map(|b| b.s)
        .chain(report.loops.iter().flat_map(|l| l.points.iter().copied()))
        .chain(std::iter::once(report.pencil.s0));
    let view = View::fit(all);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##);
    for l in &report.loops {
        let pts: Vec<String> = l
            .points
            .iter()
            .map(|&p| {
                let (x, y) = view.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let kind = report.branch_points.get(l.target - 1).map_or("", |b| b.kind.as_str());
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="0.8" stroke-opacity="0.6"/>"#, pts.join(" "), colour(kind));
    }
    for b in &report.branch_points {
        let (x, y) = view.map(b.s);
        let r = if b.kind == "dual-tangent" { 3.0 } else { 5.0 };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{}" class="{}"><title>{} {} (s = {:.6}{:+.6}i)</title></circle>"#,
            colour(&b.kind),
            b.kind,
            b.kind,
            b.index,
            b.s[0],
            b.s[1]
        );
    }
    let (x, y) = view.map(report.pencil.s0);
    let _ = writeln!(out, r##"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="#000000"><title>base point s0</title></rect>"##, x - 4.0, y - 4.0);
    for (k, kind) in ["dual-tangent", "multiple-branch-line", "singular-point-line"].iter().enumerate() {
        let y = 16.0 + 16.0 * k as f64;
        let _ = writeln!(out, r#"<rect x="8" y="{:.0}" width="10" height="10" fill="{}"/>"#, y - 9.0, colour(kind));
        let _ = writeln!(out, r#"<text x="24" y="{y:.0}" font-family="sans-serif" font-size="12">{kind}</text>"#);
    }
    let _ = writeln!(
        out,
        r#"<text x="8" y="{:.0}" font-family="sans-serif" font-size="12">order {} verdict {}</text>"#,
        SIZE - 10.0,
        report.group.order,
        report.verdict
    );
    out.push_str("</svg>\n");
    out
}

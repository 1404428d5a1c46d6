//! Plain SVG rendering of a space with optional member overlay.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::geometry::Point2;
use crate::space::{CellId, Space};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];

struct Frame {
    min: Point2,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(space: &Space) -> Self {
        let (mut lo, mut hi) = (Point2::new(f64::MAX, f64::MAX), Point2::new(f64::MIN, f64::MIN));
        for c in 0..space.cell_count() {
            for p in space.cell_polyline(c, 2) {
                lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
                hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
            }
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        Frame { min: lo, scale, height: (hi.y - lo.y) * scale + 2.0 * MARGIN }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        (MARGIN + (p.x - self.min.x) * self.scale, self.height - MARGIN - (p.y - self.min.y) * self.scale)
    }
}

fn draw_cell(out: &mut String, space: &Space, frame: &Frame, c: CellId, stroke: &str, width: f64) {
    let pts = space.cell_polyline(c, 8);
    if pts.len() == 1 {
        let (x, y) = frame.map(pts[0]);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.1}" fill="{stroke}"/>"#, width + 1.0);
        return;
    }
    let path: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#, path.join(" "));
}

/// Renders every cell in grey, the given landmarks in colour and `members`
/// in black on top.
pub fn render(space: &Space, landmarks: &[&str], members: Option<&BTreeSet<CellId>>) -> String {
    let frame = Frame::fit(space);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{:.0}" viewBox="0 0 {SIZE} {:.0}">"#,
        frame.height, frame.height
    );
    let _ = writeln!(out, "<title>{}</title>", space.name);
    for c in 0..space.cell_count() {
        draw_cell(&mut out, space, &frame, c, "#bbbbbb", 1.0);
    }
    for (k, name) in landmarks.iter().enumerate() {
        let Ok(cells) = space.landmark_cells(name) else { continue };
        let colour = PALETTE[k % PALETTE.len()];
        let _ = writeln!(out, r#"<g id="{name}">"#);
        for c in cells {
            draw_cell(&mut out, space, &frame, c, colour, 2.0);
        }
        out.push_str("</g>\n");
    }
    if let Some(m) = members {
        out.push_str("<g id=\"members\">\n");
        for &c in m {
            draw_cell(&mut out, space, &frame, c, "#000000", 3.0);
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

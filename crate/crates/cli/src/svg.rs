//! SVG drawing of planar fans: every ray is scaled to a common radius, each
//! maximal cone is a shaded triangle labelled with its lattice index.

use std::fmt::Write;

use nash_toric::cones::{Cone, Fan};
use nash_toric::lattice::LatticeVector;

const SIZE: f64 = 480.0;
const RADIUS: f64 = 190.0;

fn direction(v: &LatticeVector) -> (f64, f64) {
    let x: f64 = v[0].to_string().parse().unwrap_or(0.0);
    let y: f64 = v[1].to_string().parse().unwrap_or(0.0);
    let len = x.hypot(y);
    (x / len, y / len)
}

fn tip(v: &LatticeVector, r: f64) -> (f64, f64) {
    let (x, y) = direction(v);
    (SIZE / 2.0 + r * x, SIZE / 2.0 - r * y)
}

fn index_label(c: &Cone) -> String {
    c.multiplicity().map(|m| m.to_string()).unwrap_or_else(|| "-".into())
}

/// One `<polygon>` per maximal cone, then rays and labels.
pub fn render_fan(fan: &Fan) -> String {
    let mut out = String::new();
    let c = SIZE / 2.0;
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    for (i, cone) in fan.maximal_cones().iter().enumerate() {
        let shade = if cone.is_smooth() { "#9ecae1" } else { "#fc9272" };
        let mut points = format!("{c:.2},{c:.2}");
        for r in cone.rays() {
            let (x, y) = tip(r, RADIUS);
            write!(points, " {x:.2},{y:.2}").unwrap();
        }
        writeln!(out, r#"<polygon id="cone{i}" points="{points}" fill="{shade}" fill-opacity="0.6" stroke="black" stroke-width="1"/>"#)
            .unwrap();
    }
    let mut rays: Vec<&LatticeVector> = fan.maximal_cones().iter().flat_map(|k| k.rays()).collect();
    rays.sort();
    rays.dedup();
    for r in rays {
        let (x, y) = tip(r, RADIUS);
        let (lx, ly) = tip(r, RADIUS + 18.0);
        writeln!(out, r#"<line x1="{c:.2}" y1="{c:.2}" x2="{x:.2}" y2="{y:.2}" stroke="black" stroke-width="2"/>"#).unwrap();
        writeln!(out, r#"<text x="{lx:.2}" y="{ly:.2}" font-size="12" text-anchor="middle">{r}</text>"#).unwrap();
    }
    for cone in fan.maximal_cones() {
        let (mut x, mut y) = (0.0, 0.0);
        for r in cone.rays() {
            let (dx, dy) = direction(r);
            x += dx;
            y += dy;
        }
        let len = x.hypot(y).max(1e-9);
        let (px, py) = (c + 0.55 * RADIUS * x / len, c - 0.55 * RADIUS * y / len);
        writeln!(out, r#"<text x="{px:.2}" y="{py:.2}" font-size="12" text-anchor="middle">index {}</text>"#, index_label(cone)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

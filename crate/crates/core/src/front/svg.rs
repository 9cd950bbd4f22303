use std::fmt::Write as _;

use super::diagram::{Event, FrontDiagram};

const COL_W: f64 = 40.0;
const ROW_H: f64 = 24.0;
const MARGIN: f64 = 30.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn x(c: usize) -> f64 {
    MARGIN + c as f64 * COL_W
}

fn y(slot: usize) -> f64 {
    MARGIN + slot as f64 * ROW_H
}

fn color(component: usize) -> &'static str {
    PALETTE[component % PALETTE.len()]
}

/// Deterministic SVG of the front. Crossings are drawn as plain intersections since
/// the front determines the over-strand; handle balls are drawn as paired circles.
pub fn render_svg(f: &FrontDiagram) -> String {
    let cols = f.columns().len();
    let max_slots = (0..=cols).map(|c| f.strands_before(c)).max().unwrap_or(0).max(1);
    let handle_rows = f.handles().len();
    let width = 2.0 * MARGIN + cols.max(1) as f64 * COL_W + 60.0;
    let height = 2.0 * MARGIN + (max_slots + handle_rows) as f64 * ROW_H;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(s, r#"<g fill="none" stroke-width="2">"#);

    for (c, ev) in f.columns().iter().enumerate() {
        let n = f.strands_before(c);
        let (x0, x1) = (x(c), x(c + 1));
        let xm = (x0 + x1) / 2.0;
        // Straight strands that pass through the column untouched.
        let passthrough: Vec<(usize, usize)> = match ev {
            Event::LeftCusp(k) => (0..n).map(|i| (i, if i < *k { i } else { i + 2 })).collect(),
            Event::RightCusp(k) => (0..n)
                .filter(|i| *i != *k && *i != k + 1)
                .map(|i| (i, if i < *k { i } else { i - 2 }))
                .collect(),
            Event::Crossing(k) => (0..n).filter(|i| *i != *k && *i != k + 1).map(|i| (i, i)).collect(),
            Event::HandlePass { .. } => (0..n).map(|i| (i, i)).collect(),
        };
        for (from, to) in passthrough {
            let comp = f.component_at(c, from);
            let _ = writeln!(
                s,
                r#"<path class="strand" stroke="{}" d="M{x0:.1},{:.1} L{x1:.1},{:.1}"/>"#,
                color(comp),
                y(from),
                y(to)
            );
        }
        match ev {
            Event::LeftCusp(k) => {
                let comp = f.component_at(c + 1, *k);
                let ym = (y(*k) + y(k + 1)) / 2.0;
                let _ = writeln!(
                    s,
                    r#"<path class="cusp" stroke="{}" d="M{x1:.1},{:.1} C{xm:.1},{:.1} {xm:.1},{ym:.1} {xm:.1},{ym:.1} C{xm:.1},{ym:.1} {xm:.1},{:.1} {x1:.1},{:.1}"/>"#,
                    color(comp),
                    y(*k),
                    y(*k),
                    y(k + 1),
                    y(k + 1)
                );
            }
            Event::RightCusp(k) => {
                let comp = f.component_at(c, *k);
                let ym = (y(*k) + y(k + 1)) / 2.0;
                let _ = writeln!(
                    s,
                    r#"<path class="cusp" stroke="{}" d="M{x0:.1},{:.1} C{xm:.1},{:.1} {xm:.1},{ym:.1} {xm:.1},{ym:.1} C{xm:.1},{ym:.1} {xm:.1},{:.1} {x0:.1},{:.1}"/>"#,
                    color(comp),
                    y(*k),
                    y(*k),
                    y(k + 1),
                    y(k + 1)
                );
            }
            Event::Crossing(k) => {
                let a = f.component_at(c, *k);
                let b = f.component_at(c, k + 1);
                let _ = writeln!(
                    s,
                    r#"<g class="crossing"><path stroke="{}" d="M{x0:.1},{:.1} L{x1:.1},{:.1}"/><path stroke="{}" d="M{x0:.1},{:.1} L{x1:.1},{:.1}"/></g>"#,
                    color(a),
                    y(*k),
                    y(k + 1),
                    color(b),
                    y(k + 1),
                    y(*k)
                );
            }
            Event::HandlePass { slot, handle, dir } => {
                let sign = if *dir > 0 { '+' } else { '-' };
                let _ = writeln!(
                    s,
                    r##"<g class="handle-pass"><circle cx="{xm:.1}" cy="{:.1}" r="4" fill="#000"/><text x="{xm:.1}" y="{:.1}" font-size="10" text-anchor="middle" fill="#000" stroke="none">{handle}{sign}</text></g>"##,
                    y(*slot),
                    y(*slot) - 7.0
                );
            }
        }
    }

    for (i, h) in f.handles().iter().enumerate() {
        let cy = y(max_slots) + i as f64 * ROW_H;
        let right = x(cols.max(1)) + 30.0;
        let _ = writeln!(
            s,
            r##"<g class="handle" stroke="#555"><circle cx="{:.1}" cy="{cy:.1}" r="8"/><circle cx="{right:.1}" cy="{cy:.1}" r="8"/><text x="{:.1}" y="{:.1}" font-size="10" fill="#555" stroke="none">{h}</text></g>"##,
            MARGIN - 15.0,
            MARGIN - 5.0,
            cy + 3.0
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

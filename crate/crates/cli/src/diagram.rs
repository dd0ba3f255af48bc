//! Identification diagram of a filling permutation: the polygon with its
//! labeled, directed sides and a chord between every glued pair.

use std::f64::consts::PI;
use std::fmt::Write;

use fillperm::{Curve, Direction, FillingPermutation};

const SIZE: f64 = 640.0;
const RADIUS: f64 = 250.0;
const LABEL_OFFSET: f64 = 22.0;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    x: f64,
    y: f64,
}

impl Point {
    fn lerp(self, other: Point, t: f64) -> Point {
        Point { x: self.x + (other.x - self.x) * t, y: self.y + (other.y - self.y) * t }
    }
}

/// Polygon corner `t`, starting at the top and going clockwise on screen.
fn corner(t: usize, n: usize) -> Point {
    let phi = -PI / 2.0 + 2.0 * PI * t as f64 / n as f64;
    Point { x: SIZE / 2.0 + RADIUS * phi.cos(), y: SIZE / 2.0 + RADIUS * phi.sin() }
}

fn label_point(mid: Point) -> Point {
    let (dx, dy) = (mid.x - SIZE / 2.0, mid.y - SIZE / 2.0);
    let len = (dx * dx + dy * dy).sqrt();
    Point { x: mid.x + dx / len * LABEL_OFFSET, y: mid.y + dy / len * LABEL_OFFSET }
}

pub struct Diagram {
    pub svg: String,
    pub edges: usize,
    pub chords: usize,
}

pub fn render(fp: &FillingPermutation) -> Diagram {
    let ctx = fp.ctx();
    let word = fp.boundary_word();
    let n = word.len();
    let half = ctx.half();
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, "  <title>genus {} filling permutation {}</title>", ctx.genus(), fp.perm());
    svg.push_str(concat!(
        "  <defs>\n",
        r#"    <marker id="arrow" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="7" markerHeight="7" orient="auto">"#,
        "\n",
        r#"      <path d="M 0 0 L 10 5 L 0 10 z" fill="black"/>"#,
        "\n    </marker>\n  </defs>\n",
    ));
    let _ = writeln!(svg, r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);

    let mut position = vec![0usize; n + 1];
    for (t, &j) in word.iter().enumerate() {
        position[j as usize] = t;
    }
    let mid = |t: usize| corner(t, n).lerp(corner(t + 1, n), 0.5);

    let _ = writeln!(svg, r#"  <g id="chords" stroke="gray" stroke-width="1" stroke-dasharray="4 3" fill="none">"#);
    let mut chords = 0;
    for j in 1..=half {
        let (s, t) = (position[j as usize], position[(j + half) as usize]);
        let (a, b) = (mid(s), mid(t));
        let _ = writeln!(
            svg,
            r#"    <line class="chord" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            a.x, a.y, b.x, b.y
        );
        chords += 1;
    }
    svg.push_str("  </g>\n");

    let _ = writeln!(svg, r#"  <g id="edges" stroke-width="2.5">"#);
    for (t, &j) in word.iter().enumerate() {
        let info = ctx.symbol_info(j).expect("boundary symbols are in range");
        let (p, q) = (corner(t, n), corner(t + 1, n));
        let colour = match info.curve {
            Curve::Alpha => "#c0392b",
            Curve::Beta => "#2471a3",
        };
        // the arrowhead sits at the middle of the side, pointing along the arc
        let (from, to) = match info.direction {
            Direction::Forward => (p, q),
            Direction::Inverse => (q, p),
        };
        let m = from.lerp(to, 0.55);
        let _ = writeln!(
            svg,
            r#"    <line class="edge" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}"/>"#,
            p.x, p.y, q.x, q.y
        );
        let _ = writeln!(
            svg,
            r#"    <line class="arrow" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" marker-end="url(#arrow)"/>"#,
            from.x, from.y, m.x, m.y
        );
        let name = match info.curve {
            Curve::Alpha => 'a',
            Curve::Beta => 'b',
        };
        let l = label_point(mid(t));
        let _ = writeln!(
            svg,
            r#"    <text x="{:.2}" y="{:.2}" font-family="serif" font-size="15" text-anchor="middle" dominant-baseline="middle" fill="{colour}">{name}{}</text>"#,
            l.x, l.y, info.arc_index
        );
    }
    svg.push_str("  </g>\n</svg>\n");
    Diagram { svg, edges: n, chords }
}

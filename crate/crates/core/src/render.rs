//! Deterministic SVG rendering of base diagrams.
//!
//! Geometry stays in math orientation; the y-axis is flipped only when a
//! coordinate is written. Every number in the output is the exact pixel
//! value expanded to at most 20 decimal places with round-half-even and
//! trailing zeros removed, so identical inputs give identical bytes.

use std::fmt::Write;

use crate::affine_plane::{HalfPlane, Point};
use crate::atf_base::BaseDiagram;
use crate::exact_arith::QField;

const MARGIN: i64 = 20;
const MARKER: i64 = 5;
const DIGITS: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderStyle {
    /// Pixels per lattice unit; must be positive.
    pub scale: QField,
    pub show_levels: Vec<QField>,
    pub show_cuts: bool,
    pub show_nodes: bool,
    pub show_eigenlines: bool,
    /// Half-planes to shade inside the polygon.
    pub shade: Vec<HalfPlane>,
    /// Extra points drawn as small dots, e.g. an orbit.
    pub points: Vec<Point>,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            scale: QField::from_int(100),
            show_levels: Vec::new(),
            show_cuts: true,
            show_nodes: true,
            show_eigenlines: false,
            shade: Vec::new(),
            points: Vec::new(),
        }
    }
}

impl RenderStyle {
    /// Nothing but the polygon outline.
    pub fn outline(scale: QField) -> Self {
        RenderStyle { scale, show_cuts: false, show_nodes: false, ..RenderStyle::default() }
    }
}

struct Frame {
    xmin: QField,
    ymax: QField,
    scale: QField,
    margin: QField,
}

impl Frame {
    fn x(&self, p: &Point) -> QField {
        (&p.x1 - &self.xmin) * &self.scale + &self.margin
    }

    fn y(&self, p: &Point) -> QField {
        (&self.ymax - &p.x2) * &self.scale + &self.margin
    }

    fn pair(&self, p: &Point) -> String {
        format!("{},{}", num(&self.x(p)), num(&self.y(p)))
    }

    fn points(&self, ps: &[Point]) -> String {
        ps.iter().map(|p| self.pair(p)).collect::<Vec<_>>().join(" ")
    }
}

fn num(x: &QField) -> String {
    x.to_decimal(DIGITS)
}

/// SVG 1.1 document for `diagram` under `style`.
pub fn render_svg(diagram: &BaseDiagram, style: &RenderStyle) -> String {
    assert!(style.scale.is_positive(), "render scale must be positive");
    let poly = &diagram.polygon;
    let vs = poly.vertices();
    let xmin = vs.iter().map(|p| &p.x1).min().unwrap().clone();
    let xmax = vs.iter().map(|p| &p.x1).max().unwrap().clone();
    let ymin = vs.iter().map(|p| &p.x2).min().unwrap().clone();
    let ymax = vs.iter().map(|p| &p.x2).max().unwrap().clone();
    let margin = QField::from_int(MARGIN);
    let two_m = &margin * &QField::from_int(2);
    let width = (&xmax - &xmin) * &style.scale + &two_m;
    let height = (&ymax - &ymin) * &style.scale + &two_m;
    let f = Frame { xmin, ymax, scale: style.scale.clone(), margin };

    let mut out = String::new();
    let (w, h) = (num(&width), num(&height));
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    for hp in &style.shade {
        if let Some(region) = poly.clip(hp) {
            let _ = writeln!(
                out,
                "  <polygon class=\"shade\" points=\"{}\" fill=\"#dddddd\" stroke=\"none\"/>",
                f.points(region.vertices())
            );
        }
    }
    let _ = writeln!(
        out,
        "  <polygon class=\"polygon\" points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
        f.points(vs)
    );
    for lvl in &style.show_levels {
        if let Ok(level) = poly.level_set(lvl) {
            let _ = writeln!(
                out,
                "  <polygon class=\"level\" data-h=\"{lvl}\" points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-dasharray=\"1,3\"/>",
                f.points(level.vertices())
            );
        }
    }
    if style.show_eigenlines {
        for node in &diagram.nodes {
            let ends = (
                poly.ray_exit(&node.position, node.eigen_dir),
                poly.ray_exit(&node.position, node.eigen_dir.neg()),
            );
            if let (Some(a), Some(b)) = ends {
                let _ = writeln!(
                    out,
                    "  <line class=\"eigenline\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999999\" stroke-width=\"0.5\"/>",
                    num(&f.x(&a)),
                    num(&f.y(&a)),
                    num(&f.x(&b)),
                    num(&f.y(&b))
                );
            }
        }
    }
    if style.show_cuts {
        for cut in &diagram.cuts {
            let _ = writeln!(
                out,
                "  <polyline class=\"cut\" points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>",
                f.points(&cut.path)
            );
        }
    }
    for p in &style.points {
        let _ = writeln!(
            out,
            "  <circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"1.5\" fill=\"#2ca02c\"/>",
            num(&f.x(p)),
            num(&f.y(p))
        );
    }
    if style.show_nodes {
        let m = QField::from_int(MARKER);
        for node in &diagram.nodes {
            let (x, y) = (f.x(&node.position), f.y(&node.position));
            let (x0, x1, y0, y1) = (num(&(&x - &m)), num(&(&x + &m)), num(&(&y - &m)), num(&(&y + &m)));
            let _ = writeln!(
                out,
                "  <path class=\"node\" d=\"M {x0} {y0} L {x1} {y1} M {x0} {y1} L {x1} {y0}\" stroke=\"black\" stroke-width=\"1.5\"/>"
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atf_base::build_pi0;
    use crate::delzant::ConstructionParams;

    fn q(s: &str) -> QField {
        s.parse().unwrap()
    }

    fn pi0() -> BaseDiagram {
        build_pi0(&ConstructionParams::parse("4", "2", "1/2", "1/4").unwrap()).unwrap()
    }

    #[test]
    fn counts_markers_and_cuts() {
        let style = RenderStyle { show_levels: vec![q("1/4")], ..RenderStyle::default() };
        let svg = render_svg(&pi0(), &style);
        assert_eq!(svg.matches("class=\"node\"").count(), 5);
        assert_eq!(svg.matches("class=\"cut\"").count(), 5);
        assert_eq!(svg.matches("class=\"level\"").count(), 1);
        // level vertex (-7/4, -3/4) sits 1/4 right of and 7/4 below the top left corner
        assert!(svg.contains("points=\"45,195 370,195 395,170 395,45 45,45\""), "{svg}");
        assert_eq!(svg, render_svg(&pi0(), &style));
    }

    #[test]
    fn outline_only() {
        let svg = render_svg(&pi0(), &RenderStyle::outline(q("10")));
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(!svg.contains("class=\"node\""));
        assert!(!svg.contains("class=\"cut\""));
        assert!(svg.contains("width=\"80\" height=\"60\""));
    }

    #[test]
    fn irrational_coordinates_expand() {
        let style = RenderStyle { points: vec![Point::new(q("1/8*sqrt(2)"), q("0"))], ..RenderStyle::outline(q("1")) };
        let svg = render_svg(&pi0(), &style);
        assert!(svg.contains("cx=\"22.17677669529663688" ), "{svg}");
    }

    #[test]
    fn optional_layers() {
        let style = RenderStyle {
            show_eigenlines: true,
            shade: vec![HalfPlane::new(crate::affine_plane::LatticeVector::new(0, -1), q("-1/2"))],
            ..RenderStyle::default()
        };
        let svg = render_svg(&pi0(), &style);
        assert_eq!(svg.matches("class=\"eigenline\"").count(), 5);
        assert_eq!(svg.matches("class=\"shade\"").count(), 1);
    }
}

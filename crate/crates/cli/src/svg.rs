//! Standalone SVG drawings in plane coordinates: 100 px per metre, y up.

use std::fmt::Write;

use zmp_core::contacts::{surface_to_points, Contact};
use zmp_core::geom::{Polygon2, UnitVec3, Vec2, Vec3, VirtualPlane};

use crate::report::AreaReport;
use crate::scene_file::LoadedScene;
use crate::traj::TrajReport;

pub const PX_PER_M: f64 = 100.0;
const PAD_M: f64 = 0.25;
/// Points farther than this from the contacts do not widen the view.
const MAX_REACH_M: f64 = 3.0;

struct Canvas {
    lo: Vec2<f64>,
    hi: Vec2<f64>,
    body: String,
}

impl Canvas {
    fn new(core: &[Vec2<f64>], extra: &[Vec2<f64>]) -> Self {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let grow = |lo: &mut Vec2<f64>, hi: &mut Vec2<f64>, p: Vec2<f64>| {
            *lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            *hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        };
        core.iter().for_each(|&p| grow(&mut lo, &mut hi, p));
        let (clo, chi) = (lo, hi);
        for &p in extra {
            let near = p.x > clo.x - MAX_REACH_M
                && p.x < chi.x + MAX_REACH_M
                && p.y > clo.y - MAX_REACH_M
                && p.y < chi.y + MAX_REACH_M;
            if near && p.is_finite() {
                grow(&mut lo, &mut hi, p);
            }
        }
        if !lo.is_finite() {
            lo = Vec2::new(-0.5, -0.5);
            hi = Vec2::new(0.5, 0.5);
        }
        let pad = Vec2::new(PAD_M, PAD_M);
        Self {
            lo: lo - pad,
            hi: hi + pad,
            body: String::new(),
        }
    }

    fn window(&self) -> Polygon2<f64> {
        Polygon2::from_points(&[
            self.lo,
            Vec2::new(self.hi.x, self.lo.y),
            self.hi,
            Vec2::new(self.lo.x, self.hi.y),
        ])
    }

    fn px(&self, p: Vec2<f64>) -> (f64, f64) {
        ((p.x - self.lo.x) * PX_PER_M, (self.hi.y - p.y) * PX_PER_M)
    }

    fn size(&self) -> (f64, f64) {
        self.px(Vec2::new(self.hi.x, self.lo.y))
    }

    fn inside(&self, p: Vec2<f64>) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }

    fn points_attr(&self, pts: &[Vec2<f64>]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn polygon(&mut self, pts: &[Vec2<f64>], style: &str) {
        if pts.is_empty() {
            return;
        }
        let attr = self.points_attr(pts);
        let _ = writeln!(self.body, r#"<polygon points="{attr}" {style}/>"#);
    }

    fn polyline(&mut self, pts: &[Vec2<f64>], style: &str) {
        let attr = self.points_attr(pts);
        let _ = writeln!(self.body, r#"<polyline points="{attr}" fill="none" {style}/>"#);
    }

    fn circle(&mut self, p: Vec2<f64>, r: f64, style: &str) {
        if !self.inside(p) {
            return;
        }
        let (x, y) = self.px(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" {style}/>"#);
    }

    fn cross(&mut self, p: Vec2<f64>, style: &str) {
        if !self.inside(p) {
            return;
        }
        let (x, y) = self.px(p);
        let _ = writeln!(
            self.body,
            r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" {style}/>"#,
            x - 5.0,
            y - 5.0,
            x + 5.0,
            y + 5.0,
            x - 5.0,
            y + 5.0,
            x + 5.0,
            y - 5.0
        );
    }

    fn legend(&mut self, lines: &[(&str, &str)]) {
        for (i, (color, text)) in lines.iter().enumerate() {
            let y = 16.0 + 16.0 * i as f64;
            if !color.is_empty() {
                let _ = writeln!(
                    self.body,
                    r#"<circle cx="10" cy="{:.2}" r="4" fill="{color}"/>"#,
                    y - 4.0
                );
            }
            let _ = writeln!(
                self.body,
                r#"<text x="20" y="{y:.2}" font-family="sans-serif" font-size="12">{text}</text>"#
            );
        }
    }

    fn finish(self) -> String {
        let (w, h) = self.size();
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             <rect x=\"0\" y=\"0\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Contact outlines projected on the plane: surfaces as quadrilaterals,
/// points as single-vertex lists.
fn contact_outlines(s: &LoadedScene, plane: &VirtualPlane<f64>) -> Vec<Vec<Vec2<f64>>> {
    s.scene
        .contacts
        .iter()
        .map(|c| match c {
            Contact::Point(p) => vec![plane.to_plane(p.position)],
            Contact::Surface(sf) => surface_to_points(sf)
                .iter()
                .map(|p| plane.to_plane(p.position))
                .collect(),
        })
        .collect()
}

fn draw_contacts(c: &mut Canvas, outlines: &[Vec<Vec2<f64>>]) {
    for o in outlines {
        if o.len() == 1 {
            c.circle(o[0], 3.0, r##"fill="#444""##);
        } else {
            c.polygon(o, r##"fill="#ddd" fill-opacity="0.5" stroke="#444" stroke-width="1""##);
        }
    }
}

fn report_plane(r: &AreaReport) -> VirtualPlane<f64> {
    let n = r.plane.normal;
    let unit = UnitVec3::new(Vec3::new(n[0], n[1], n[2])).unwrap_or(UnitVec3::e_z());
    VirtualPlane::new(unit, r.plane.d_z)
}

/// Contacts, friction-edge intersections coloured by pressure sign, and
/// the area clipped to the view.
pub fn area_svg(s: &LoadedScene, r: &AreaReport) -> String {
    let plane = report_plane(r);
    let outlines = contact_outlines(s, &plane);
    let mut core: Vec<Vec2<f64>> = outlines.iter().flatten().copied().collect();
    core.push(plane.to_plane(s.scene.com));
    let mut extra: Vec<Vec2<f64>> = r.generators.iter().map(|p| p.xy()).collect();
    extra.extend(r.pieces.iter().flat_map(|p| p.vertices.iter().map(|v| v.xy())));
    let mut c = Canvas::new(&core, &extra);
    let window = c.window();

    let fill = |role: &str| match role {
        "minus" => r##"fill="#ff9800" fill-opacity="0.35" stroke="#e65100" stroke-width="1.5""##,
        _ => r##"fill="#4caf50" fill-opacity="0.35" stroke="#1b5e20" stroke-width="1.5""##,
    };
    if r.shape == "whole_plane" {
        let w = window.vertices().to_vec();
        c.polygon(&w, fill("polygon"));
    }
    for piece in &r.pieces {
        let clipped = piece.to_cone().clip_to(&window);
        let v = clipped.vertices().to_vec();
        c.polygon(&v, fill(&piece.role));
    }
    draw_contacts(&mut c, &outlines);
    for (p, w) in r.generators.iter().zip(&r.pressures) {
        let color = if *w > 0.0 { "#1565c0" } else { "#c62828" };
        c.circle(p.xy(), 2.0, &format!(r#"fill="{color}""#));
    }
    c.cross(plane.to_plane(s.scene.com), r#"stroke="black" stroke-width="1.5""#);
    let title = format!("{} {} area ({:?}): {}", r.scene, kind_name(r), r.algorithm, r.shape);
    c.legend(&[
        ("", &title),
        ("#1565c0", "friction edge on plane, pressure &gt; 0"),
        ("#c62828", "friction edge on plane, pressure &lt; 0"),
        ("", "x: centre of mass; scale 100 px/m"),
    ]);
    c.finish()
}

fn kind_name(r: &AreaReport) -> &'static str {
    match r.kind {
        crate::report::AreaKind::Full => "full",
        crate::report::AreaKind::Pendular => "pendular",
        crate::report::AreaKind::Static => "static",
        crate::report::AreaKind::Nmp => "n-MP",
    }
}

/// ZMP and COM paths of a trajectory over the contacts.
pub fn traj_svg(s: &LoadedScene, t: &TrajReport) -> String {
    let plane = t.plane();
    let outlines = contact_outlines(s, &plane);
    let to2 = |p: &[f64; 3]| plane.to_plane(Vec3::new(p[0], p[1], p[2]));
    let zmp: Vec<Vec2<f64>> = t.zmp.iter().map(to2).collect();
    let com: Vec<Vec2<f64>> = t.samples.com.iter().map(to2).collect();
    let mut core: Vec<Vec2<f64>> = outlines.iter().flatten().copied().collect();
    core.extend(zmp.iter().chain(&com));
    let mut c = Canvas::new(&core, &[]);
    draw_contacts(&mut c, &outlines);
    c.polyline(&zmp, r##"stroke="#c62828" stroke-width="1.5""##);
    c.polyline(&com, r##"stroke="#1565c0" stroke-width="1.5""##);
    for (i, z) in zmp.iter().enumerate() {
        if !t.feasible[i] {
            c.circle(*z, 3.0, r#"fill="none" stroke="black""#);
        }
    }
    c.legend(&[
        ("#c62828", "ZMP"),
        ("#1565c0", "COM (integrated)"),
        ("", "open circles: infeasible samples; scale 100 px/m"),
    ]);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::area::compute_area;
    use crate::report::AreaKind;
    use crate::scene_file::bundled;

    #[test]
    fn deterministic_and_y_up() {
        let s = bundled("fig3").unwrap();
        let r = compute_area(&s, AreaKind::Full, None, false).unwrap();
        let a = area_svg(&s, &r);
        assert_eq!(a, area_svg(&s, &r));
        assert!(a.starts_with("<svg"));
        assert!(a.matches("<polygon").count() >= 4);
        let c = Canvas::new(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)], &[]);
        let (_, y_low) = c.px(Vec2::new(0.0, 0.0));
        let (_, y_high) = c.px(Vec2::new(0.0, 1.0));
        assert!((y_low - y_high - PX_PER_M).abs() < 1e-9);
    }

    #[test]
    fn far_points_do_not_stretch_the_view() {
        let c = Canvas::new(&[Vec2::new(0.0, 0.0)], &[Vec2::new(100.0, 0.0), Vec2::new(1.0, 0.0)]);
        assert!((c.hi.x - 1.0 - PAD_M).abs() < 1e-12);
    }
}

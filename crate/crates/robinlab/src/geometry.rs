//! Model domains, their geometric summaries, Steiner volumes and the
//! constants of outward-pointing vector fields.

use crate::error::{Error, Result};
use crate::polygon::{self, Point};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Boundary condition data. `Dirichlet` is a mode flag, not `h = ∞`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryData {
    Constant(f64),
    Segments(Vec<f64>),
    Dirichlet,
}

impl Default for BoundaryData {
    fn default() -> Self {
        BoundaryData::Constant(0.0)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Disk { radius: f64 },
    /// Axis-aligned, centred at the offset.
    Rectangle { a: f64, b: f64 },
    ConvexPolygon { vertices: Vec<Point> },
    /// Convex polygon whose corners are rounded by arcs of `corner_radius`.
    SmoothedPolygon { vertices: Vec<Point>, corner_radius: f64 },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "is_origin")]
    pub offset: Point,
    #[serde(default)]
    pub h: BoundaryData,
}

fn is_origin(p: &Point) -> bool {
    p[0] == 0.0 && p[1] == 0.0
}

/// One smooth piece of the boundary, traversed counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Line { a: Point, b: Point, id: usize },
    Arc { center: Point, radius: f64, theta0: f64, theta1: f64, id: usize },
}

impl Segment {
    pub fn id(&self) -> usize {
        match self {
            Segment::Line { id, .. } | Segment::Arc { id, .. } => *id,
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Segment::Line { a, b, .. } => polygon::dist(*a, *b),
            Segment::Arc { radius, theta0, theta1, .. } => radius * (theta1 - theta0),
        }
    }

    /// Point and outward unit normal at parameter `t ∈ [0, 1]`.
    pub fn eval(&self, t: f64) -> (Point, Point) {
        match self {
            Segment::Line { a, b, .. } => (
                [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])],
                polygon::outward_normal(*a, *b),
            ),
            Segment::Arc { center, radius, theta0, theta1, .. } => {
                let th = theta0 + t * (theta1 - theta0);
                let nrm = [th.cos(), th.sin()];
                ([center[0] + radius * nrm[0], center[1] + radius * nrm[1]], nrm)
            }
        }
    }

    pub fn distance(&self, p: Point) -> f64 {
        match self {
            Segment::Line { a, b, .. } => polygon::point_segment_distance(p, *a, *b),
            Segment::Arc { center, radius, theta0, theta1, .. } => {
                let d = polygon::sub(p, *center);
                let mut th = d[1].atan2(d[0]);
                while th < *theta0 {
                    th += 2.0 * PI;
                }
                if th <= *theta1 {
                    (polygon::norm(d) - radius).abs()
                } else {
                    let (p0, _) = self.eval(0.0);
                    let (p1, _) = self.eval(1.0);
                    polygon::dist(p, p0).min(polygon::dist(p, p1))
                }
            }
        }
    }
}

/// A closed boundary given piecewise by smooth parametrisations.
pub trait BoundaryCurve {
    fn pieces(&self) -> usize;
    /// Point and outward unit normal on piece `i` at `t ∈ [0, 1]`.
    fn eval(&self, piece: usize, t: f64) -> (Point, Point);
}

impl BoundaryCurve for DomainSpec {
    fn pieces(&self) -> usize {
        self.segment_count()
    }
    fn eval(&self, piece: usize, t: f64) -> (Point, Point) {
        self.segments()[piece].eval(t)
    }
}

impl DomainSpec {
    pub fn disk(radius: f64, h: BoundaryData) -> Self {
        DomainSpec { shape: Shape::Disk { radius }, offset: [0.0, 0.0], h }
    }

    pub fn rectangle(a: f64, b: f64, h: BoundaryData) -> Self {
        DomainSpec { shape: Shape::Rectangle { a, b }, offset: [0.0, 0.0], h }
    }

    pub fn convex_polygon(vertices: Vec<Point>, h: BoundaryData) -> Self {
        DomainSpec { shape: Shape::ConvexPolygon { vertices }, offset: [0.0, 0.0], h }
    }

    pub fn smoothed_polygon(vertices: Vec<Point>, corner_radius: f64, h: BoundaryData) -> Self {
        DomainSpec {
            shape: Shape::SmoothedPolygon { vertices, corner_radius },
            offset: [0.0, 0.0],
            h,
        }
    }

    pub fn with_offset(mut self, offset: Point) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_h(mut self, h: BoundaryData) -> Self {
        self.h = h;
        self
    }

    pub fn kind_name(&self) -> &'static str {
        match self.shape {
            Shape::Disk { .. } => "disk",
            Shape::Rectangle { .. } => "rectangle",
            Shape::ConvexPolygon { .. } => "convex_polygon",
            Shape::SmoothedPolygon { .. } => "smoothed_polygon",
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self.h, BoundaryData::Dirichlet)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDomain(m.to_string()));
        match &self.shape {
            Shape::Disk { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad("disk radius must be strictly positive");
                }
            }
            Shape::Rectangle { a, b } => {
                if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) {
                    return bad("rectangle sides must be strictly positive");
                }
            }
            Shape::ConvexPolygon { vertices } => {
                if vertices.len() < 3 || polygon::signed_area(vertices).abs() < 1e-300 {
                    return bad("degenerate polygon");
                }
                if !polygon::is_strictly_convex_ccw(vertices) {
                    return bad("polygon vertices must be counterclockwise and strictly convex");
                }
            }
            Shape::SmoothedPolygon { vertices, corner_radius } => {
                if vertices.len() < 3 || polygon::signed_area(vertices).abs() < 1e-300 {
                    return bad("degenerate polygon");
                }
                if !polygon::is_strictly_convex_ccw(vertices) {
                    return bad("polygon vertices must be counterclockwise and strictly convex");
                }
                if !(*corner_radius > 0.0) {
                    return bad("corner radius must be strictly positive");
                }
                let n = vertices.len();
                let shortest = (0..n)
                    .map(|i| polygon::dist(vertices[i], vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min);
                if *corner_radius > 0.5 * shortest {
                    return bad("corner radius exceeds half the shortest edge");
                }
                // The tangent points of neighbouring arcs must not cross.
                let tans = corner_tangent_lengths(vertices, *corner_radius);
                for i in 0..n {
                    let len = polygon::dist(vertices[i], vertices[(i + 1) % n]);
                    if tans[i] + tans[(i + 1) % n] >= len {
                        return bad("corner arcs overlap along an edge");
                    }
                }
            }
        }
        if let BoundaryData::Segments(v) = &self.h {
            if v.len() != self.segment_count() {
                return Err(Error::InvalidDomain(format!(
                    "expected {} boundary segment values, got {}",
                    self.segment_count(),
                    v.len()
                )));
            }
        }
        let finite = match &self.h {
            BoundaryData::Constant(c) => c.is_finite(),
            BoundaryData::Segments(v) => v.iter().all(|c| c.is_finite()),
            BoundaryData::Dirichlet => true,
        };
        if !finite {
            return bad("h must be finite");
        }
        Ok(())
    }

    pub fn segment_count(&self) -> usize {
        match &self.shape {
            Shape::Disk { .. } => 1,
            Shape::Rectangle { .. } => 4,
            Shape::ConvexPolygon { vertices } => vertices.len(),
            Shape::SmoothedPolygon { vertices, .. } => 2 * vertices.len(),
        }
    }

    /// Robin coefficient on a boundary segment; `None` in Dirichlet mode.
    pub fn h_on(&self, segment: usize) -> Option<f64> {
        match &self.h {
            BoundaryData::Constant(c) => Some(*c),
            BoundaryData::Segments(v) => v.get(segment).copied(),
            BoundaryData::Dirichlet => None,
        }
    }

    /// Constant Robin coefficient if there is one.
    pub fn constant_h(&self) -> Option<f64> {
        match &self.h {
            BoundaryData::Constant(c) => Some(*c),
            BoundaryData::Segments(v) if v.windows(2).all(|w| w[0] == w[1]) => v.first().copied(),
            _ => None,
        }
    }

    /// `H = sup over the boundary of max(-h, 0)`.
    pub fn h_sup(&self) -> f64 {
        match &self.h {
            BoundaryData::Constant(c) => (-c).max(0.0),
            BoundaryData::Segments(v) => v.iter().fold(0.0_f64, |acc, c| acc.max(-c)),
            BoundaryData::Dirichlet => 0.0,
        }
    }

    /// `(tΩ, h/t)`.
    pub fn scaled(&self, t: f64) -> DomainSpec {
        let sc = |p: &Point| [t * p[0], t * p[1]];
        let shape = match &self.shape {
            Shape::Disk { radius } => Shape::Disk { radius: t * radius },
            Shape::Rectangle { a, b } => Shape::Rectangle { a: t * a, b: t * b },
            Shape::ConvexPolygon { vertices } => {
                Shape::ConvexPolygon { vertices: vertices.iter().map(sc).collect() }
            }
            Shape::SmoothedPolygon { vertices, corner_radius } => Shape::SmoothedPolygon {
                vertices: vertices.iter().map(sc).collect(),
                corner_radius: t * corner_radius,
            },
        };
        let h = match &self.h {
            BoundaryData::Constant(c) => BoundaryData::Constant(c / t),
            BoundaryData::Segments(v) => BoundaryData::Segments(v.iter().map(|c| c / t).collect()),
            BoundaryData::Dirichlet => BoundaryData::Dirichlet,
        };
        DomainSpec { shape, offset: sc(&self.offset), h }
    }

    /// A natural interior reference point (centre or centroid).
    pub fn center(&self) -> Point {
        let o = self.offset;
        match &self.shape {
            Shape::Disk { .. } | Shape::Rectangle { .. } => o,
            Shape::ConvexPolygon { vertices } | Shape::SmoothedPolygon { vertices, .. } => {
                let c = polygon::centroid(vertices);
                [c[0] + o[0], c[1] + o[1]]
            }
        }
    }

    /// Boundary pieces in counterclockwise order.
    pub fn segments(&self) -> Vec<Segment> {
        let o = self.offset;
        let tr = |p: Point| [p[0] + o[0], p[1] + o[1]];
        match &self.shape {
            Shape::Disk { radius } => vec![Segment::Arc {
                center: o,
                radius: *radius,
                theta0: 0.0,
                theta1: 2.0 * PI,
                id: 0,
            }],
            Shape::Rectangle { a, b } => {
                let (x0, x1, y0, y1) = (-a / 2.0, a / 2.0, -b / 2.0, b / 2.0);
                let c = [[x0, y0], [x1, y0], [x1, y1], [x0, y1]];
                (0..4)
                    .map(|i| Segment::Line { a: tr(c[i]), b: tr(c[(i + 1) % 4]), id: i })
                    .collect()
            }
            Shape::ConvexPolygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| Segment::Line {
                        a: tr(vertices[i]),
                        b: tr(vertices[(i + 1) % n]),
                        id: i,
                    })
                    .collect()
            }
            Shape::SmoothedPolygon { vertices, corner_radius } => {
                let r = *corner_radius;
                let q = inner_polygon(vertices, r);
                let n = vertices.len();
                let mut segs = Vec::with_capacity(2 * n);
                for i in 0..n {
                    let j = (i + 1) % n;
                    let k = (i + 2) % n;
                    let ni = polygon::outward_normal(vertices[i], vertices[j]);
                    let nj = polygon::outward_normal(vertices[j], vertices[k]);
                    segs.push(Segment::Line {
                        a: tr([q[i][0] + r * ni[0], q[i][1] + r * ni[1]]),
                        b: tr([q[j][0] + r * ni[0], q[j][1] + r * ni[1]]),
                        id: 2 * i,
                    });
                    let th0 = ni[1].atan2(ni[0]);
                    let mut th1 = nj[1].atan2(nj[0]);
                    while th1 <= th0 {
                        th1 += 2.0 * PI;
                    }
                    segs.push(Segment::Arc {
                        center: tr(q[j]),
                        radius: r,
                        theta0: th0,
                        theta1: th1,
                        id: 2 * i + 1,
                    });
                }
                segs
            }
        }
    }

    /// Distance from `p` to the boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.segments().iter().map(|s| s.distance(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point) -> bool {
        let q = polygon::sub(p, self.offset);
        match &self.shape {
            Shape::Disk { radius } => polygon::norm(q) < *radius,
            Shape::Rectangle { a, b } => q[0].abs() < a / 2.0 && q[1].abs() < b / 2.0,
            Shape::ConvexPolygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| {
                    polygon::cross(
                        polygon::sub(vertices[(i + 1) % n], vertices[i]),
                        polygon::sub(q, vertices[i]),
                    ) > 0.0
                })
            }
            Shape::SmoothedPolygon { vertices, corner_radius } => {
                let inner = inner_polygon(vertices, *corner_radius);
                let n = inner.len();
                let inside = (0..n).all(|i| {
                    polygon::cross(
                        polygon::sub(inner[(i + 1) % n], inner[i]),
                        polygon::sub(q, inner[i]),
                    ) >= 0.0
                });
                if inside {
                    return true;
                }
                let d = (0..n)
                    .map(|i| polygon::point_segment_distance(q, inner[i], inner[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min);
                d < *corner_radius
            }
        }
    }
}

/// Distance from each polygon corner to the tangent points of a rounding arc of radius `r`.
fn corner_tangent_lengths(vertices: &[Point], r: f64) -> Vec<f64> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let prev = vertices[(i + n - 1) % n];
            let next = vertices[(i + 1) % n];
            let d1 = polygon::sub(vertices[i], prev);
            let d2 = polygon::sub(next, vertices[i]);
            let turn = polygon::cross(d1, d2).atan2(polygon::dot(d1, d2));
            r * (0.5 * turn).tan()
        })
        .collect()
}

/// Centres of the rounding arcs: the polygon offset inward by `r`.
fn inner_polygon(vertices: &[Point], r: f64) -> Vec<Point> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let prev = vertices[(i + n - 1) % n];
            let next = vertices[(i + 1) % n];
            let n1 = polygon::outward_normal(prev, vertices[i]);
            let n2 = polygon::outward_normal(vertices[i], next);
            // Solve n1·x = n1·v - r, n2·x = n2·v - r.
            let c1 = polygon::dot(n1, vertices[i]) - r;
            let c2 = polygon::dot(n2, vertices[i]) - r;
            let det = n1[0] * n2[1] - n1[1] * n2[0];
            [(c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det]
        })
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct GeometricSummary {
    pub n: u32,
    #[serde(rename = "V")]
    pub area: f64,
    #[serde(rename = "S")]
    pub perimeter: f64,
    pub rho: f64,
    pub kappa_max: Option<f64>,
    pub t_plus: Option<f64>,
    pub delta0: f64,
    pub delta1: f64,
    pub inradius: f64,
    pub diameter: f64,
}

pub fn summarize(spec: &DomainSpec) -> Result<GeometricSummary> {
    spec.validate()?;
    let (area, perimeter, kappa, inradius, diameter) = match &spec.shape {
        Shape::Disk { radius } => {
            let r = *radius;
            (PI * r * r, 2.0 * PI * r, Some(1.0 / r), r, 2.0 * r)
        }
        Shape::Rectangle { a, b } => (a * b, 2.0 * (a + b), None, 0.5 * a.min(*b), a.hypot(*b)),
        Shape::ConvexPolygon { vertices } => (
            polygon::signed_area(vertices),
            polygon::perimeter(vertices),
            None,
            polygon::inradius(vertices),
            polygon::diameter(vertices),
        ),
        Shape::SmoothedPolygon { vertices, corner_radius } => {
            let r = *corner_radius;
            let q = inner_polygon(vertices, r);
            let aq = polygon::signed_area(&q);
            let pq = polygon::perimeter(&q);
            (
                aq + pq * r + PI * r * r,
                pq + 2.0 * PI * r,
                Some(1.0 / r),
                polygon::inradius(&q) + r,
                polygon::diameter(&q) + 2.0 * r,
            )
        }
    };
    if !(area > 0.0) {
        return Err(Error::InvalidDomain("zero-area domain".into()));
    }
    let t_plus = kappa.map(|k| 1.0 / k);
    // Convex specs: the cut distance equals t_+ when curvature is available;
    // for cornered specs the inradius stands in.
    let delta0 = t_plus.map_or(inradius, |t| t.min(inradius));
    Ok(GeometricSummary {
        n: 2,
        area,
        perimeter,
        rho: perimeter / area.sqrt(),
        kappa_max: kappa,
        t_plus,
        delta0,
        delta1: delta0,
        inradius,
        diameter,
    })
}

/// `|Ω + δB| = V + Sδ + πδ²` (exact for planar convex sets).
pub fn steiner_volume(spec: &DomainSpec, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative dilation {delta}")));
    }
    let s = summarize(spec)?;
    Ok(s.area + s.perimeter * delta + PI * delta * delta)
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum FieldStrategy {
    /// `F(x) = x - x0`.
    Star { center: Point },
    /// Distance-function construction: `Γ1 = c1/δ0`, `Γ2 = c2`.
    DistanceBased { c1: f64, c2: f64 },
}

impl FieldStrategy {
    pub fn distance_default(n: u32) -> Self {
        FieldStrategy::DistanceBased { c1: 4.0 * n as f64, c2: 4.0 }
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq)]
pub struct FieldConstants {
    #[serde(rename = "gamma_F")]
    pub gamma_f: f64,
    #[serde(rename = "Gamma1")]
    pub gamma1: f64,
    #[serde(rename = "Gamma2")]
    pub gamma2: f64,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

impl FieldConstants {
    pub fn new(gamma_f: f64, gamma1: f64, gamma2: f64, h: f64) -> Self {
        FieldConstants { gamma_f, gamma1, gamma2, k1: gamma1, k2: 0.25 * gamma2 * gamma2, h }
    }
}

/// Extreme value of `f(point, normal)` over the boundary, with its location.
///
/// Each piece is sampled on a uniform grid, the best sample is polished by
/// golden-section search, and the grid is doubled until the extreme moves by
/// less than `1e-8` relative.
pub fn boundary_extreme<C, F>(curve: &C, f: F, minimize: bool) -> (f64, Point)
where
    C: BoundaryCurve + ?Sized,
    F: Fn(Point, Point) -> f64,
{
    let sign = if minimize { 1.0 } else { -1.0 };
    let g = |piece: usize, t: f64| {
        let (p, nrm) = curve.eval(piece, t);
        sign * f(p, nrm)
    };
    let mut prev: Option<f64> = None;
    let mut n = 64usize;
    loop {
        let mut best = (f64::INFINITY, 0usize, 0.0f64);
        for piece in 0..curve.pieces() {
            let mut bi = 0usize;
            let mut bv = f64::INFINITY;
            for i in 0..=n {
                let v = g(piece, i as f64 / n as f64);
                if v < bv {
                    bv = v;
                    bi = i;
                }
            }
            let lo = bi.saturating_sub(1) as f64 / n as f64;
            let hi = ((bi + 1).min(n)) as f64 / n as f64;
            let (t, v) = golden_min(|t| g(piece, t), lo, hi);
            let (t, v) = if v < bv { (t, v) } else { (bi as f64 / n as f64, bv) };
            if v < best.0 {
                best = (v, piece, t);
            }
        }
        let val = sign * best.0;
        if let Some(p) = prev {
            if (val - p).abs() <= 1e-8 * val.abs().max(1e-300) || n >= 1 << 16 {
                return (val, curve.eval(best.1, best.2).0);
            }
        }
        prev = Some(val);
        n *= 2;
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..100 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Star-field constants for an arbitrary boundary curve in `R^n`.
pub fn star_field_constants<C: BoundaryCurve + ?Sized>(
    curve: &C,
    center: Point,
    n: u32,
    h_sup: f64,
) -> Result<FieldConstants> {
    let (gamma_f, at) = boundary_extreme(curve, |p, nrm| polygon::dot(polygon::sub(p, center), nrm), true);
    if !(gamma_f > 0.0) {
        return Err(Error::NotStarShaped {
            x0: center[0],
            y0: center[1],
            px: at[0],
            py: at[1],
            value: gamma_f,
        });
    }
    let (rmax, _) = boundary_extreme(curve, |p, _| polygon::dist(p, center), false);
    Ok(FieldConstants::new(gamma_f, n as f64 / gamma_f, 2.0 * rmax / gamma_f, h_sup))
}

pub fn field_constants(spec: &DomainSpec, strategy: FieldStrategy, h_sup: f64) -> Result<FieldConstants> {
    let s = summarize(spec)?;
    if h_sup < 0.0 {
        return Err(Error::InvalidArgument("H must be nonnegative".into()));
    }
    match strategy {
        FieldStrategy::Star { center } => star_field_constants(spec, center, s.n, h_sup),
        FieldStrategy::DistanceBased { c1, c2 } => {
            if !(c1 > 0.0 && c2 > 0.0) {
                return Err(Error::InvalidArgument("distance-field constants must be positive".into()));
            }
            Ok(FieldConstants::new(1.0, c1 / s.delta0, c2, h_sup))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> DomainSpec {
        DomainSpec::rectangle(1.0, 1.0, BoundaryData::Constant(0.0))
    }

    #[test]
    fn json_shape() {
        let d: DomainSpec =
            serde_json::from_str(r#"{"kind":"disk","radius":1.0,"h":{"constant":-0.5}}"#).unwrap();
        assert_eq!(d, DomainSpec::disk(1.0, BoundaryData::Constant(-0.5)));
        let p: DomainSpec = serde_json::from_str(
            r#"{"kind":"convex_polygon","vertices":[[0,0],[1,0],[0,1]],"h":{"segments":[1,2,3]}}"#,
        )
        .unwrap();
        p.validate().unwrap();
        assert_eq!(p.h_on(2), Some(3.0));
        let back = serde_json::to_string(&d).unwrap();
        assert_eq!(back, r#"{"kind":"disk","radius":1.0,"h":{"constant":-0.5}}"#);
    }

    #[test]
    fn summary_examples() {
        let d = summarize(&DomainSpec::disk(1.0, BoundaryData::default())).unwrap();
        assert!((d.area - PI).abs() < 1e-15);
        assert!((d.perimeter - 2.0 * PI).abs() < 1e-15);
        assert!((d.rho - 2.0 * PI.sqrt()).abs() < 1e-14);
        assert_eq!((d.t_plus, d.delta0, d.delta1, d.kappa_max), (Some(1.0), 1.0, 1.0, Some(1.0)));
        let s = summarize(&unit_square()).unwrap();
        assert_eq!((s.area, s.perimeter, s.rho, s.inradius), (1.0, 4.0, 4.0, 0.5));
        assert!((s.diameter - 2f64.sqrt()).abs() < 1e-15);
        assert!(s.kappa_max.is_none() && s.t_plus.is_none());
        let d2 = summarize(&DomainSpec::disk(2.0, BoundaryData::default())).unwrap();
        assert!((d2.rho - d.rho).abs() < 1e-14);
    }

    #[test]
    fn smoothed_polygon_is_minkowski_sum() {
        let sq = vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let spec = DomainSpec::smoothed_polygon(sq, 0.25, BoundaryData::default());
        let s = summarize(&spec).unwrap();
        // Inner square of side 1.5.
        assert!((s.area - (2.25 + 6.0 * 0.25 + PI * 0.0625)).abs() < 1e-13);
        assert!((s.perimeter - (6.0 + 2.0 * PI * 0.25)).abs() < 1e-13);
        let segs = spec.segments();
        let total: f64 = segs.iter().map(|s| s.length()).sum();
        assert!((total - s.perimeter).abs() < 1e-12);
        assert_eq!((s.t_plus, s.delta0), (Some(0.25), 0.25));
        assert!((s.inradius - 1.0).abs() < 1e-12);
        assert!(spec.contains([0.9, 0.0]) && !spec.contains([0.99, 0.99]));
    }

    #[test]
    fn rejections() {
        let cw = DomainSpec::convex_polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]], BoundaryData::default());
        assert!(summarize(&cw).is_err());
        let bad = DomainSpec::smoothed_polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 0.45, BoundaryData::default());
        assert!(summarize(&bad).is_err());
        assert!(summarize(&DomainSpec::disk(0.0, BoundaryData::default())).is_err());
        assert!(steiner_volume(&unit_square(), -1.0).is_err());
    }

    #[test]
    fn steiner_examples() {
        assert!((steiner_volume(&unit_square(), 0.5).unwrap() - (3.0 + PI / 4.0)).abs() < 1e-14);
        let disk = DomainSpec::disk(1.0, BoundaryData::default());
        assert!((steiner_volume(&disk, 1.0).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert_eq!(steiner_volume(&unit_square(), 0.0).unwrap(), 1.0);
    }

    struct Ellipse {
        a: f64,
        b: f64,
    }

    impl BoundaryCurve for Ellipse {
        fn pieces(&self) -> usize {
            1
        }
        fn eval(&self, _: usize, t: f64) -> (Point, Point) {
            let th = 2.0 * PI * t;
            let p = [self.a * th.cos(), self.b * th.sin()];
            let g = [self.b * th.cos(), self.a * th.sin()];
            let l = polygon::norm(g);
            (p, [g[0] / l, g[1] / l])
        }
    }

    #[test]
    fn star_constants() {
        let disk = DomainSpec::disk(1.0, BoundaryData::Constant(-1.0));
        let f = field_constants(&disk, FieldStrategy::Star { center: [0.0, 0.0] }, disk.h_sup()).unwrap();
        assert!((f.gamma_f - 1.0).abs() < 1e-12 && (f.gamma1 - 2.0).abs() < 1e-12);
        assert!((f.gamma2 - 2.0).abs() < 1e-12 && f.h == 1.0 && (f.k2 - 1.0).abs() < 1e-12);

        let sq = unit_square();
        let f = field_constants(&sq, FieldStrategy::Star { center: [0.0, 0.0] }, 0.0).unwrap();
        assert!((f.gamma_f - 0.5).abs() < 1e-12 && (f.gamma1 - 4.0).abs() < 1e-12);
        assert!((f.gamma2 - 2.0 * 2f64.sqrt()).abs() < 1e-10);

        // Oracle: x·ν = ab/|(b cos θ, a sin θ)| on a fine grid.
        let oracle = (0..200_000)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / 200_000.0;
                2.0 / (th.cos().powi(2) + 4.0 * th.sin().powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        let f = star_field_constants(&Ellipse { a: 2.0, b: 1.0 }, [0.0, 0.0], 2, 0.0).unwrap();
        assert!((f.gamma_f - oracle).abs() < 1e-9 && (oracle - 1.0).abs() < 1e-9);
        assert!((f.gamma1 - 2.0).abs() < 1e-8 && (f.gamma2 - 4.0).abs() < 1e-8);
    }

    #[test]
    fn star_rejects_bad_center() {
        let sq = unit_square();
        let e = field_constants(&sq, FieldStrategy::Star { center: [0.7, 0.0] }, 0.0).unwrap_err();
        assert!(matches!(e, Error::NotStarShaped { .. }));
    }

    #[test]
    fn distance_based_defaults() {
        let disk = DomainSpec::disk(2.0, BoundaryData::default());
        let f = field_constants(&disk, FieldStrategy::distance_default(2), 0.5).unwrap();
        assert_eq!((f.gamma1, f.gamma2, f.k2), (4.0, 4.0, 4.0));
    }
}

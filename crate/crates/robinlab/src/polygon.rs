//! Planar polygon helpers shared by geometry, meshing and the asymmetry code.

pub type Point = [f64; 2];

pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

/// Signed shoelace area (positive for counterclockwise loops).
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        s += cross(poly[i], poly[(i + 1) % n]);
    }
    0.5 * s
}

pub fn perimeter(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| dist(poly[i], poly[(i + 1) % n])).sum()
}

/// Area centroid of a simple polygon.
pub fn centroid(poly: &[Point]) -> Point {
    let n = poly.len();
    let a = signed_area(poly);
    if a.abs() < 1e-300 {
        let s = poly.iter().fold([0.0, 0.0], |acc, p| [acc[0] + p[0], acc[1] + p[1]]);
        return [s[0] / n as f64, s[1] / n as f64];
    }
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let c = cross(p, q);
        cx += (p[0] + q[0]) * c;
        cy += (p[1] + q[1]) * c;
    }
    [cx / (6.0 * a), cy / (6.0 * a)]
}

/// True when every consecutive turn is a strict left turn.
pub fn is_strictly_convex_ccw(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        cross(sub(b, a), sub(c, b)) > 0.0
    })
}

/// Outward unit normal of the edge `a -> b` of a counterclockwise polygon.
pub fn outward_normal(a: Point, b: Point) -> Point {
    let d = sub(b, a);
    let l = norm(d);
    [d[1] / l, -d[0] / l]
}

/// Keep the part of `poly` with `n·x <= c` (Sutherland–Hodgman, one plane).
pub fn clip_halfplane(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 2);
    let len = poly.len();
    for i in 0..len {
        let p = poly[i];
        let q = poly[(i + 1) % len];
        let fp = dot(n, p) - c;
        let fq = dot(n, q) - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Intersection of an arbitrary simple polygon with a convex counterclockwise
/// clip polygon. The returned loop may contain degenerate slivers along the
/// clip boundary, which do not affect its area.
pub fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut out = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % n];
        let nrm = outward_normal(a, b);
        out = clip_halfplane(&out, nrm, dot(nrm, a));
    }
    out
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = sub(b, a);
    let l2 = dot(d, d);
    if l2 == 0.0 {
        return dist(p, a);
    }
    let t = (dot(sub(p, a), d) / l2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

/// Inner parallel polygon `{x : d(x, complement) >= t}` of a convex CCW polygon.
pub fn inner_parallel(poly: &[Point], t: f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = poly.to_vec();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let nrm = outward_normal(a, b);
        out = clip_halfplane(&out, nrm, dot(nrm, a) - t);
        if out.len() < 3 {
            return Vec::new();
        }
    }
    out
}

/// Inradius of a convex CCW polygon by bisection on the inner parallel body.
pub fn inradius(poly: &[Point]) -> f64 {
    let mut lo = 0.0;
    let mut hi = perimeter(poly);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inner_parallel(poly, mid).len() >= 3 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    lo
}

pub fn diameter(points: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max(dist(points[i], points[j]));
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_basics() {
        let sq = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(signed_area(&sq), 1.0);
        assert_eq!(perimeter(&sq), 4.0);
        assert_eq!(centroid(&sq), [0.5, 0.5]);
        assert!(is_strictly_convex_ccw(&sq));
        assert!((inradius(&sq) - 0.5).abs() < 1e-12);
        let inner = inner_parallel(&sq, 0.25);
        assert!((signed_area(&inner) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn clip_nonconvex_subject() {
        // L-shape clipped by the unit square keeps the overlapping 3 unit cells' share.
        let l = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
        let window = vec![[0.5, 0.5], [1.5, 0.5], [1.5, 1.5], [0.5, 1.5]];
        let c = clip_convex(&l, &window);
        assert!((signed_area(&c) - 0.75).abs() < 1e-14);
    }
}

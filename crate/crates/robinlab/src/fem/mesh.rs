//! Triangulations of the model domains.
//!
//! Disks use a concentric ring mesh (6i vertices on ring i), which keeps the
//! discrete problem exactly invariant under rotation by π/3. Rectangles use a
//! structured grid with alternating diagonals. Polygons and smoothed polygons
//! use Bowyer–Watson Delaunay triangulation of boundary samples plus a
//! hexagonal interior lattice, followed by Laplacian smoothing.

use crate::error::{Error, Result};
use crate::geometry::{self, DomainSpec, Shape};
use crate::polygon::{self, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub v: [usize; 2],
    /// Index of the boundary segment of the domain spec.
    pub segment: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub target_h: f64,
}

fn tri_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * polygon::cross(polygon::sub(b, a), polygon::sub(c, a))
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        tri_area(a, b, c)
    }

    pub fn triangle_centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.triangle_points(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.vertices.len()];
        for e in &self.boundary_edges {
            m[e.v[0]] = true;
            m[e.v[1]] = true;
        }
        m
    }

    /// Triangles incident to each vertex, in increasing triangle order.
    pub fn vertex_triangles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                out[v].push(t);
            }
        }
        out
    }

    /// Sorted vertex neighbours along triangle edges.
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for tri in &self.triangles {
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                out[a].push(b);
                out[b].push(a);
            }
        }
        for n in out.iter_mut() {
            n.sort_unstable();
            n.dedup();
        }
        out
    }

    /// Undirected edges with the number of triangles sharing each.
    fn edge_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for tri in &self.triangles {
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                *m.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn min_angle_degrees(&self) -> f64 {
        let mut best = 180.0_f64;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            for i in 0..3 {
                let u = polygon::sub(p[(i + 1) % 3], p[i]);
                let v = polygon::sub(p[(i + 2) % 3], p[i]);
                let ang = polygon::cross(u, v).abs().atan2(polygon::dot(u, v));
                best = best.min(ang.to_degrees());
            }
        }
        best
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edge_counts()
            .keys()
            .map(|&(a, b)| polygon::dist(self.vertices[a], self.vertices[b]))
            .fold(0.0, f64::max)
    }

    /// Checks orientation, degeneracy, boundary-edge consistency and, for
    /// simply connected meshes, the Euler relation.
    pub fn validate(&self) -> Result<()> {
        let total = self.total_area();
        for t in 0..self.triangles.len() {
            let a = self.triangle_area(t);
            if !(a > 1e-14 * total) {
                return Err(Error::Mesh(format!("triangle {t} is degenerate or inverted (area {a})")));
            }
        }
        let counts = self.edge_counts();
        let mut boundary: Vec<(usize, usize)> =
            counts.iter().filter(|(_, &c)| c == 1).map(|(&e, _)| e).collect();
        if counts.values().any(|&c| c > 2) {
            return Err(Error::Mesh("an edge is shared by more than two triangles".into()));
        }
        let mut tagged: Vec<(usize, usize)> =
            self.boundary_edges.iter().map(|e| (e.v[0].min(e.v[1]), e.v[0].max(e.v[1]))).collect();
        boundary.sort_unstable();
        tagged.sort_unstable();
        if boundary != tagged {
            return Err(Error::Mesh("tagged boundary edges differ from single-triangle edges".into()));
        }
        let euler = self.vertices.len() as i64 - counts.len() as i64 + self.triangles.len() as i64;
        if euler != 1 {
            return Err(Error::Mesh(format!("Euler characteristic {euler}, expected 1")));
        }
        Ok(())
    }

    /// Boundary vertices in counterclockwise order (single loop).
    pub fn boundary_loop(&self) -> Result<Vec<usize>> {
        let mut next = HashMap::new();
        for e in &self.boundary_edges {
            next.insert(e.v[0], e.v[1]);
        }
        let start = self
            .boundary_edges
            .iter()
            .map(|e| e.v[0])
            .min()
            .ok_or_else(|| Error::Mesh("mesh has no boundary".into()))?;
        let mut out = vec![start];
        let mut cur = next[&start];
        while cur != start {
            out.push(cur);
            cur = *next
                .get(&cur)
                .ok_or_else(|| Error::Mesh("boundary is not a closed loop".into()))?;
            if out.len() > self.boundary_edges.len() {
                return Err(Error::Mesh("boundary loop does not close".into()));
            }
        }
        if out.len() != self.boundary_edges.len() {
            return Err(Error::Mesh("boundary has several loops".into()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("mesh serialises")
    }

    pub fn from_json(s: &str) -> Result<Mesh> {
        serde_json::from_str(s).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Triangulate a model domain at resolution `target_h`.
pub fn mesh(spec: &DomainSpec, target_h: f64) -> Result<Mesh> {
    let summary = geometry::summarize(spec)?;
    if !(target_h > 0.0) || target_h >= 0.5 * summary.inradius {
        return Err(Error::Mesh(format!(
            "target_h = {target_h} too coarse: needs 0 < target_h < inradius/2 = {}",
            0.5 * summary.inradius
        )));
    }
    let m = match &spec.shape {
        Shape::Disk { radius } => disk_mesh(*radius, spec.offset, target_h),
        Shape::Rectangle { a, b } => rectangle_mesh(*a, *b, spec.offset, target_h),
        Shape::ConvexPolygon { .. } | Shape::SmoothedPolygon { .. } => delaunay_mesh(spec, target_h)?,
    };
    m.validate()?;
    Ok(m)
}

/// Ring mesh of the disk with `ceil(R/h)` rings.
pub fn disk_mesh(radius: f64, center: Point, target_h: f64) -> Mesh {
    let n = (radius / target_h).ceil() as usize;
    let mut vertices = vec![center];
    let mut ring_start = vec![0usize];
    for i in 1..=n {
        ring_start.push(vertices.len());
        let r = radius * i as f64 / n as f64;
        for j in 0..6 * i {
            let th = 2.0 * PI * j as f64 / (6 * i) as f64;
            let (x, y) = if i == n {
                (radius * th.cos(), radius * th.sin())
            } else {
                (r * th.cos(), r * th.sin())
            };
            vertices.push([center[0] + x, center[1] + y]);
        }
    }
    let mut triangles = Vec::with_capacity(6 * n * n);
    for j in 0..6 {
        triangles.push([0, 1 + j, 1 + (j + 1) % 6]);
    }
    for i in 2..=n {
        // Zip ring i-1 (6(i-1) points) with ring i (6i points) by angle. Each
        // sector of π/3 holds i-1 inner and i outer steps; inner steps go first
        // on ties so the pattern repeats exactly in every sector.
        let (ni, no) = (6 * (i - 1), 6 * i);
        let (si, so) = (ring_start[i - 1], ring_start[i]);
        let (mut a, mut b) = (0usize, 0usize);
        while a < ni || b < no {
            // Compare next angles a+1 / ni and b+1 / no as fractions.
            let advance_inner = a < ni && (b >= no || (a + 1) * no <= (b + 1) * ni);
            if advance_inner {
                triangles.push([si + a % ni, so + b % no, si + (a + 1) % ni]);
                a += 1;
            } else {
                triangles.push([si + a % ni, so + b % no, so + (b + 1) % no]);
                b += 1;
            }
        }
    }
    let so = ring_start[n];
    let boundary_edges = (0..6 * n)
        .map(|j| BoundaryEdge { v: [so + j, so + (j + 1) % (6 * n)], segment: 0 })
        .collect();
    Mesh { vertices, triangles, boundary_edges, target_h }
}

/// Structured `nx × ny` grid on an axis-aligned rectangle centred at `center`,
/// each cell split along alternating diagonals.
pub fn rectangle_mesh(a: f64, b: f64, center: Point, target_h: f64) -> Mesh {
    let nx = (a / target_h).ceil() as usize;
    let ny = (b / target_h).ceil() as usize;
    grid_mesh(a, b, center, nx, ny, target_h)
}

pub fn grid_mesh(a: f64, b: f64, center: Point, nx: usize, ny: usize, target_h: f64) -> Mesh {
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([
                center[0] - a / 2.0 + a * i as f64 / nx as f64,
                center[1] - b / 2.0 + b * j as f64 / ny as f64,
            ]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (p00, p10, p01, p11) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([p00, p10, p11]);
                triangles.push([p00, p11, p01]);
            } else {
                triangles.push([p00, p10, p01]);
                triangles.push([p10, p11, p01]);
            }
        }
    }
    let mut boundary_edges = Vec::new();
    for i in 0..nx {
        boundary_edges.push(BoundaryEdge { v: [idx(i, 0), idx(i + 1, 0)], segment: 0 });
    }
    for j in 0..ny {
        boundary_edges.push(BoundaryEdge { v: [idx(nx, j), idx(nx, j + 1)], segment: 1 });
    }
    for i in (0..nx).rev() {
        boundary_edges.push(BoundaryEdge { v: [idx(i + 1, ny), idx(i, ny)], segment: 2 });
    }
    for j in (0..ny).rev() {
        boundary_edges.push(BoundaryEdge { v: [idx(0, j + 1), idx(0, j)], segment: 3 });
    }
    Mesh { vertices, triangles, boundary_edges, target_h }
}

struct Tri {
    v: [usize; 3],
    cc: Point,
    r2: f64,
    alive: bool,
}

fn circumcircle(p: &[Point], v: [usize; 3]) -> (Point, f64) {
    let (a, b, c) = (p[v[0]], p[v[1]], p[v[2]]);
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    let a2 = polygon::dot(a, a);
    let b2 = polygon::dot(b, b);
    let c2 = polygon::dot(c, c);
    let ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    let uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    let cc = [ux, uy];
    (cc, polygon::dot(polygon::sub(a, cc), polygon::sub(a, cc)))
}

/// Bowyer–Watson triangulation of `points`; returns CCW triangles.
pub fn delaunay(points: &[Point]) -> Vec<[usize; 3]> {
    let n = points.len();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
    let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
    let mut p = points.to_vec();
    let big = 50.0 * span;
    p.push([mid[0] - big, mid[1] - big]);
    p.push([mid[0] + big, mid[1] - big]);
    p.push([mid[0], mid[1] + big]);
    let mut tris = Vec::new();
    let make = |p: &[Point], v: [usize; 3]| {
        let (cc, r2) = circumcircle(p, v);
        Tri { v, cc, r2, alive: true }
    };
    tris.push(make(&p, [n, n + 1, n + 2]));
    for i in 0..n {
        let q = p[i];
        let mut bad = Vec::new();
        for (t, tri) in tris.iter().enumerate() {
            if tri.alive {
                let d = polygon::sub(q, tri.cc);
                if polygon::dot(d, d) < tri.r2 * (1.0 - 1e-12) {
                    bad.push(t);
                }
            }
        }
        let mut edges: BTreeMap<(usize, usize), (usize, usize, usize)> = BTreeMap::new();
        for &t in &bad {
            tris[t].alive = false;
            let v = tris[t].v;
            for k in 0..3 {
                let (a, b) = (v[k], v[(k + 1) % 3]);
                let e = edges.entry((a.min(b), a.max(b))).or_insert((a, b, 0));
                e.2 += 1;
            }
        }
        for (_, (a, b, c)) in edges {
            if c == 1 {
                let nt = make(&p, [a, b, i]);
                tris.push(nt);
            }
        }
        if tris.len() > 4 * (i + 8) * 4 {
            tris.retain(|t| t.alive);
        }
    }
    tris.into_iter()
        .filter(|t| t.alive && t.v.iter().all(|&v| v < n))
        .map(|t| t.v)
        .collect()
}

fn delaunay_mesh(spec: &DomainSpec, target_h: f64) -> Result<Mesh> {
    let segs = spec.segments();
    let mut points: Vec<Point> = Vec::new();
    let mut seg_of_point: Vec<usize> = Vec::new();
    for s in &segs {
        let k = (s.length() / target_h).ceil().max(1.0) as usize;
        for i in 0..k {
            points.push(s.eval(i as f64 / k as f64).0);
            seg_of_point.push(s.id());
        }
    }
    let nb = points.len();
    let boundary_poly = points.clone();
    // Hexagonal interior lattice.
    let summary = geometry::summarize(spec)?;
    let c = spec.center();
    let reach = summary.diameter;
    let dy = target_h * 3f64.sqrt() / 2.0;
    let ny = (reach / dy).ceil() as i64;
    let nx = (reach / target_h).ceil() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_7368);
    for j in -ny..=ny {
        for i in -nx..=nx {
            let x = c[0] + (i as f64 + if j.rem_euclid(2) == 1 { 0.5 } else { 0.0 }) * target_h;
            let y = c[1] + j as f64 * dy;
            let q = [x, y];
            if spec.contains(q) && spec.boundary_distance(q) > 0.6 * target_h {
                // A tiny deterministic jitter breaks lattice cocircularity.
                let jx = rng.gen_range(-1e-6..1e-6) * target_h;
                let jy = rng.gen_range(-1e-6..1e-6) * target_h;
                points.push([x + jx, y + jy]);
            }
        }
    }
    let mut tris = delaunay(&points);
    // Laplacian smoothing of interior points, then re-triangulate.
    for _ in 0..2 {
        let mut nbrs = vec![Vec::new(); points.len()];
        for t in &tris {
            for k in 0..3 {
                nbrs[t[k]].push(t[(k + 1) % 3]);
                nbrs[t[(k + 1) % 3]].push(t[k]);
            }
        }
        for _ in 0..5 {
            let old = points.clone();
            for v in nb..points.len() {
                let mut list = nbrs[v].clone();
                list.sort_unstable();
                list.dedup();
                let mut s = [0.0, 0.0];
                for &w in &list {
                    s[0] += old[w][0];
                    s[1] += old[w][1];
                }
                let q = [s[0] / list.len() as f64, s[1] / list.len() as f64];
                if spec.contains(q) && spec.boundary_distance(q) > 0.3 * target_h {
                    points[v] = q;
                }
            }
        }
        tris = delaunay(&points);
    }
    // Collinear boundary samples can leave slivers along straight edges.
    let hull_area = polygon::signed_area(&boundary_poly);
    let tri_sum: f64 = tris.iter().map(|t| tri_area(points[t[0]], points[t[1]], points[t[2]])).sum();
    let area_tol = 1e-9 * hull_area;
    tris.retain(|t| tri_area(points[t[0]], points[t[1]], points[t[2]]) > 1e-12 * hull_area);
    if (tri_sum - hull_area).abs() > area_tol {
        return Err(Error::Mesh(format!(
            "triangulation covers area {tri_sum} but the boundary polygon has {hull_area}"
        )));
    }
    let boundary_edges: Vec<BoundaryEdge> = (0..nb)
        .map(|i| BoundaryEdge { v: [i, (i + 1) % nb], segment: seg_of_point[i] })
        .collect();
    let m = Mesh { vertices: points, triangles: tris, boundary_edges, target_h };
    let min_corner = match &spec.shape {
        Shape::ConvexPolygon { vertices } => {
            let n = vertices.len();
            (0..n)
                .map(|i| {
                    let u = polygon::sub(vertices[(i + 1) % n], vertices[i]);
                    let v = polygon::sub(vertices[(i + n - 1) % n], vertices[i]);
                    polygon::cross(u, v).abs().atan2(polygon::dot(u, v)).to_degrees()
                })
                .fold(180.0, f64::min)
        }
        _ => 180.0,
    };
    let ang = m.min_angle_degrees();
    if ang < 20.0_f64.min(0.5 * min_corner) {
        let worst = (0..m.triangles.len())
            .min_by(|&a, &b| {
                let qa = Mesh { triangles: vec![m.triangles[a]], ..m.clone() }.min_angle_degrees();
                let qb = Mesh { triangles: vec![m.triangles[b]], ..m.clone() }.min_angle_degrees();
                qa.total_cmp(&qb)
            })
            .unwrap_or(0);
        let c = m.triangle_centroid(worst);
        return Err(Error::Mesh(format!("minimum angle {ang:.2}° near ({:.4}, {:.4})", c[0], c[1])));
    }
    Ok(m)
}

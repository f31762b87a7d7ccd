//! P1 assembly of stiffness, mass and Robin boundary-mass matrices.

use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::geometry::BoundaryData;
use crate::polygon;
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use rayon::prelude::*;

pub type Local = [[f64; 3]; 3];

/// Element stiffness `∫ ∇φi·∇φj` on triangle `t`.
pub fn local_stiffness(mesh: &Mesh, t: usize) -> Local {
    let p = mesh.triangle_points(t);
    let area = mesh.triangle_area(t);
    let mut b = [0.0; 3];
    let mut c = [0.0; 3];
    for i in 0..3 {
        let (q1, q2) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        b[i] = q1[1] - q2[1];
        c[i] = q2[0] - q1[0];
    }
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
        }
    }
    k
}

/// Element mass `∫ φi φj` on triangle `t`.
pub fn local_mass(mesh: &Mesh, t: usize) -> Local {
    let a = mesh.triangle_area(t) / 12.0;
    let mut m = [[a; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2.0 * a;
    }
    m
}

/// Gradient of the P1 function with vertex values `u` on triangle `t`.
pub fn gradient(mesh: &Mesh, t: usize, u: &[f64]) -> [f64; 2] {
    let p = mesh.triangle_points(t);
    let tri = mesh.triangles[t];
    let area2 = 2.0 * mesh.triangle_area(t);
    let mut g = [0.0, 0.0];
    for i in 0..3 {
        let (q1, q2) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        g[0] += u[tri[i]] * (q1[1] - q2[1]) / area2;
        g[1] += u[tri[i]] * (q2[0] - q1[0]) / area2;
    }
    g
}

/// Sparse operators of the pencil `(A + B_h, M)` on the free vertices.
#[derive(Clone, Debug)]
pub struct OperatorBundle {
    pub stiffness: CsrMatrix<f64>,
    pub mass: CsrMatrix<f64>,
    pub boundary: CsrMatrix<f64>,
    /// Boundary mass with `h ≡ 1` on the same (non-Dirichlet) edges.
    pub boundary_unit: CsrMatrix<f64>,
    pub dirichlet_mask: Option<Vec<bool>>,
    /// Vertex of each matrix row.
    pub free: Vec<usize>,
    /// Matrix row of each vertex; `None` when eliminated.
    pub row_of: Vec<Option<usize>>,
    /// `sup max(-h, 0)` over the Robin edges.
    pub h_sup: f64,
}

impl OperatorBundle {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Full vertex vector from a reduced one, zero on eliminated vertices.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.row_of.len()];
        for (r, &v) in self.free.iter().enumerate() {
            out[v] = x[r];
        }
        out
    }

    pub fn restrict(&self, u: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&v| u[v]).collect()
    }
}

pub fn matvec(m: &CsrMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let (offs, cols, vals) = m.csr_data();
    (0..m.nrows())
        .map(|i| (offs[i]..offs[i + 1]).map(|k| vals[k] * x[cols[k]]).sum())
        .collect()
}

pub fn quad(m: &CsrMatrix<f64>, x: &[f64]) -> f64 {
    matvec(m, x).iter().zip(x).map(|(a, b)| a * b).sum()
}

fn h_of_segment(h: &BoundaryData, seg: usize) -> Result<f64> {
    match h {
        BoundaryData::Constant(c) => Ok(*c),
        BoundaryData::Segments(v) => v
            .get(seg)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("h has no value for boundary segment id {seg}"))),
        BoundaryData::Dirichlet => Ok(0.0),
    }
}

fn to_csr(n: usize, entries: impl Iterator<Item = (usize, usize, f64)>) -> CsrMatrix<f64> {
    let mut coo = CooMatrix::new(n, n);
    for (i, j, v) in entries {
        coo.push(i, j, v);
    }
    CsrMatrix::from(&coo)
}

/// Assemble the pencil. `h = Dirichlet` eliminates every boundary vertex;
/// `dirichlet` eliminates the marked vertices in addition. Robin terms are
/// integrated exactly on edges with both endpoints free.
pub fn assemble(mesh: &Mesh, h: &BoundaryData, dirichlet: Option<&[bool]>) -> Result<OperatorBundle> {
    let nv = mesh.n_vertices();
    let mut mask = dirichlet.map(|d| d.to_vec());
    if let Some(m) = &mask {
        if m.len() != nv {
            return Err(Error::InvalidArgument("Dirichlet mask length differs from vertex count".into()));
        }
    }
    if matches!(h, BoundaryData::Dirichlet) {
        let bm = mesh.boundary_mask();
        let m = mask.get_or_insert_with(|| vec![false; nv]);
        for (v, b) in bm.into_iter().enumerate() {
            m[v] |= b;
        }
    }
    let mut row_of = vec![None; nv];
    let mut free = Vec::with_capacity(nv);
    for v in 0..nv {
        if !mask.as_ref().is_some_and(|m| m[v]) {
            row_of[v] = Some(free.len());
            free.push(v);
        }
    }
    let n = free.len();
    if n == 0 {
        return Err(Error::InvalidArgument("every vertex is constrained".into()));
    }
    let locals: Vec<(Local, Local)> = (0..mesh.triangles.len())
        .into_par_iter()
        .map(|t| (local_stiffness(mesh, t), local_mass(mesh, t)))
        .collect();
    let scatter = |pick: fn(&(Local, Local)) -> &Local| {
        let row_of = &row_of;
        mesh.triangles.iter().zip(&locals).flat_map(move |(tri, l)| {
            let loc = *pick(l);
            (0..3).flat_map(move |i| {
                (0..3).filter_map(move |j| match (row_of[tri[i]], row_of[tri[j]]) {
                    (Some(r), Some(c)) => Some((r, c, loc[i][j])),
                    _ => None,
                })
            })
        })
    };
    let stiffness = to_csr(n, scatter(|l| &l.0));
    let mass = to_csr(n, scatter(|l| &l.1));
    let mut bent = Vec::new();
    let mut uent = Vec::new();
    let mut h_sup: f64 = 0.0;
    for e in &mesh.boundary_edges {
        let hv = h_of_segment(h, e.segment)?;
        if !hv.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite h on segment {}", e.segment)));
        }
        let (Some(r0), Some(r1)) = (row_of[e.v[0]], row_of[e.v[1]]) else {
            continue;
        };
        h_sup = h_sup.max(-hv);
        let l = polygon::dist(mesh.vertices[e.v[0]], mesh.vertices[e.v[1]]);
        for (i, j, w) in [(r0, r0, 2.0), (r1, r1, 2.0), (r0, r1, 1.0), (r1, r0, 1.0)] {
            bent.push((i, j, hv * l * w / 6.0));
            uent.push((i, j, l * w / 6.0));
        }
    }
    Ok(OperatorBundle {
        stiffness,
        mass,
        boundary: to_csr(n, bent.into_iter()),
        boundary_unit: to_csr(n, uent.into_iter()),
        dirichlet_mask: mask,
        free,
        row_of,
        h_sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh;
    use crate::geometry::DomainSpec;

    #[test]
    fn partition_of_unity_identities() {
        for spec in [
            DomainSpec::disk(1.0, BoundaryData::Constant(-0.7)),
            DomainSpec::rectangle(1.0, 2.0, BoundaryData::Constant(-0.7)),
            DomainSpec::convex_polygon(vec![[0.0, 0.0], [2.0, 0.0], [1.0, 1.5]], BoundaryData::Constant(-0.7)),
        ] {
            let m = mesh::mesh(&spec, 0.1).unwrap();
            let ops = assemble(&m, &spec.h, None).unwrap();
            let one = vec![1.0; ops.dim()];
            assert!(matvec(&ops.stiffness, &one).iter().all(|x| x.abs() < 1e-11));
            let area = m.total_area();
            assert!((quad(&ops.mass, &one) - area).abs() < 1e-10 * area);
            let s: f64 = m
                .boundary_edges
                .iter()
                .map(|e| polygon::dist(m.vertices[e.v[0]], m.vertices[e.v[1]]))
                .sum();
            assert!((quad(&ops.boundary, &one) - (-0.7 * s)).abs() < 1e-10 * 0.7 * s);
            assert_eq!(ops.h_sup, 0.7);
            let zero = assemble(&m, &BoundaryData::Constant(0.0), None).unwrap();
            assert!(zero.boundary.values().iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn dirichlet_and_segments() {
        let spec = DomainSpec::rectangle(1.0, 1.0, BoundaryData::Dirichlet);
        let m = mesh::mesh(&spec, 0.1).unwrap();
        let ops = assemble(&m, &BoundaryData::Dirichlet, None).unwrap();
        assert_eq!(ops.dim(), 81);
        assert!(assemble(&m, &BoundaryData::Segments(vec![1.0, 2.0]), None).is_err());
        let ops = assemble(&m, &BoundaryData::Segments(vec![1.0, 2.0, 3.0, 4.0]), None).unwrap();
        let one = vec![1.0; ops.dim()];
        assert!((quad(&ops.boundary, &one) - 10.0).abs() < 1e-12);
    }
}

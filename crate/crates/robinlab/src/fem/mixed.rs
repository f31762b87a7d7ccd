//! Subset quantities: Rayleigh quotients over triangle sets and the mixed
//! Dirichlet–Neumann ground state of a subdomain.

use super::assemble::{assemble, local_mass, local_stiffness};
use super::eigen::solve_eigens;
use super::mesh::{BoundaryEdge, Mesh};
use crate::error::{Error, Result};
use crate::geometry::BoundaryData;
use std::collections::BTreeMap;

/// Segment tag of submesh edges that are interior to the parent mesh.
pub const INTERFACE: usize = usize::MAX;

/// `∫_D |∇u|² / ∫_D u²` over the triangles of `subset` (no boundary term).
pub fn rayleigh_quotient(mesh: &Mesh, u: &[f64], subset: &[usize]) -> Result<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for &t in subset {
        let k = local_stiffness(mesh, t);
        let m = local_mass(mesh, t);
        let tri = mesh.triangles[t];
        for i in 0..3 {
            for j in 0..3 {
                let w = u[tri[i]] * u[tri[j]];
                num += k[i][j] * w;
                den += m[i][j] * w;
            }
        }
    }
    if !(den > 0.0) {
        return Err(Error::InvalidArgument("zero mass on the subset".into()));
    }
    Ok(num / den)
}

pub fn subset_area(mesh: &Mesh, subset: &[usize]) -> f64 {
    subset.iter().map(|&t| mesh.triangle_area(t)).sum()
}

/// Submesh of the listed triangles, with the old index of each new vertex.
pub fn submesh(mesh: &Mesh, subset: &[usize]) -> Result<(Mesh, Vec<usize>)> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty triangle subset".into()));
    }
    let mut tris: Vec<usize> = subset.to_vec();
    tris.sort_unstable();
    tris.dedup();
    if tris.iter().any(|&t| t >= mesh.triangles.len()) {
        return Err(Error::InvalidArgument("subset names a triangle outside the mesh".into()));
    }
    let mut new_of = vec![usize::MAX; mesh.n_vertices()];
    let mut old_of = Vec::new();
    let mut triangles = Vec::with_capacity(tris.len());
    for &t in &tris {
        let mut nt = [0; 3];
        for (k, &v) in mesh.triangles[t].iter().enumerate() {
            if new_of[v] == usize::MAX {
                new_of[v] = old_of.len();
                old_of.push(v);
            }
            nt[k] = new_of[v];
        }
        triangles.push(nt);
    }
    let mut parent_tag = BTreeMap::new();
    for e in &mesh.boundary_edges {
        parent_tag.insert((e.v[0].min(e.v[1]), e.v[0].max(e.v[1])), e.segment);
    }
    // Directed edges of the subset that have no reverse twin lie on its boundary.
    let mut directed = BTreeMap::new();
    for &t in &tris {
        let tri = mesh.triangles[t];
        for i in 0..3 {
            directed.insert((tri[i], tri[(i + 1) % 3]), ());
        }
    }
    let mut boundary_edges = Vec::new();
    for &(a, b) in directed.keys() {
        if !directed.contains_key(&(b, a)) {
            let seg = parent_tag.get(&(a.min(b), a.max(b))).copied().unwrap_or(INTERFACE);
            boundary_edges.push(BoundaryEdge { v: [new_of[a], new_of[b]], segment: seg });
        }
    }
    let vertices = old_of.iter().map(|&v| mesh.vertices[v]).collect();
    let sub = Mesh { vertices, triangles, boundary_edges, target_h: mesh.target_h };
    if !is_connected(&sub) {
        return Err(Error::InvalidArgument("triangle subset is not connected".into()));
    }
    Ok((sub, old_of))
}

fn is_connected(mesh: &Mesh) -> bool {
    let nb = mesh.vertex_neighbors();
    let mut seen = vec![false; mesh.n_vertices()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &nb[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixedResult {
    pub lambda: f64,
    pub area: f64,
    pub dirichlet_vertices: usize,
}

/// First eigenvalue on the triangle subset `U` with `u = 0` on vertices shared
/// with triangles outside `U` and the natural condition on `∂U ∩ ∂Ω`.
pub fn mixed_dn_eigenvalue(mesh: &Mesh, subset: &[usize]) -> Result<MixedResult> {
    let (sub, old_of) = submesh(mesh, subset)?;
    let mut inside = vec![false; mesh.triangles.len()];
    for &t in subset {
        inside[t] = true;
    }
    let mut touches_outside = vec![false; mesh.n_vertices()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if !inside[t] {
            for &v in tri {
                touches_outside[v] = true;
            }
        }
    }
    let mask: Vec<bool> = old_of.iter().map(|&v| touches_outside[v]).collect();
    let nd = mask.iter().filter(|&&m| m).count();
    let ops = assemble(&sub, &BoundaryData::Constant(0.0), Some(&mask))?;
    let sol = solve_eigens(&sub, &ops, 1)?;
    Ok(MixedResult { lambda: sol.values[0], area: sub.total_area(), dirichlet_vertices: nd })
}

/// Triangles whose centroid satisfies `pred`.
pub fn select_triangles<F: Fn([f64; 2]) -> bool>(mesh: &Mesh, pred: F) -> Vec<usize> {
    (0..mesh.triangles.len()).filter(|&t| pred(mesh.triangle_centroid(t))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble::assemble, eigen::solve_eigens, mesh};
    use crate::geometry::DomainSpec;
    use crate::polygon;
    use crate::special;

    fn j0sq() -> f64 {
        let j0 = special::first_bessel_zero(0.0).unwrap();
        j0 * j0
    }

    #[test]
    fn interior_disk_is_dirichlet() {
        let m = mesh::mesh(&DomainSpec::rectangle(1.0, 1.0, BoundaryData::default()), 0.01).unwrap();
        let r = 0.2;
        let sub = select_triangles(&m, |c| polygon::norm(c) < r);
        let res = mixed_dn_eigenvalue(&m, &sub).unwrap();
        assert!((res.lambda - j0sq() / (r * r)).abs() < 0.02 * j0sq() / (r * r));
    }

    #[test]
    fn half_disk_on_boundary() {
        let m = mesh::mesh(&DomainSpec::rectangle(1.0, 1.0, BoundaryData::default()), 0.01).unwrap();
        let r = 0.3;
        let sub = select_triangles(&m, |c| polygon::dist(c, [0.0, -0.5]) < r);
        let res = mixed_dn_eigenvalue(&m, &sub).unwrap();
        let product = res.lambda * res.area;
        assert!((product - 0.5 * j0sq() * std::f64::consts::PI).abs() < 0.05 * 0.5 * j0sq() * std::f64::consts::PI);
    }

    #[test]
    fn whole_domain_is_neumann() {
        let m = mesh::mesh(&DomainSpec::disk(1.0, BoundaryData::default()), 0.1).unwrap();
        let all: Vec<usize> = (0..m.triangles.len()).collect();
        let res = mixed_dn_eigenvalue(&m, &all).unwrap();
        assert!(res.lambda.abs() < 1e-8 && res.dirichlet_vertices == 0);
        assert!(mixed_dn_eigenvalue(&m, &[]).is_err());
    }

    #[test]
    fn rayleigh_examples() {
        let spec = DomainSpec::disk(1.0, BoundaryData::Dirichlet);
        let m = mesh::mesh(&spec, 0.03).unwrap();
        let ops = assemble(&m, &spec.h, None).unwrap();
        let s = solve_eigens(&m, &ops, 1).unwrap();
        let all: Vec<usize> = (0..m.triangles.len()).collect();
        let rq = rayleigh_quotient(&m, &s.vectors[0], &all).unwrap();
        assert!((rq - s.values[0]).abs() < 1e-9 * rq);
        assert!((rq - j0sq()).abs() < 0.01 * j0sq());
        assert!(rayleigh_quotient(&m, &vec![0.0; m.n_vertices()], &all).is_err());
    }
}

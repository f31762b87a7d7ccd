//! Nodal domains of mesh functions, Courant-sharp detection, Pleijel ratios
//! and the nodal Rayleigh-quotient check.

use crate::error::{Error, Result};
use crate::fem::{self, mixed, Mesh};
use crate::geometry::{DomainSpec, FieldConstants};
use crate::spectra::{self, EigenLabel, Spectrum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::hash_map::{Entry, HashMap};
use std::f64::consts::PI;

/// Default neutral-vertex threshold.
pub const TAU: f64 = 1e-6;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so labels do not depend on edge order.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct NodalDomains {
    pub count: usize,
    /// Component of each vertex, numbered by smallest vertex; `None` when neutral.
    pub labels: Vec<Option<usize>>,
    /// Sign (+1/−1) of each component.
    pub signs: Vec<i8>,
}

impl NodalDomains {
    pub fn vertices_of(&self, c: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&v| self.labels[v] == Some(c)).collect()
    }
}

/// Mesh adjacency reused across many nodal counts on one mesh.
pub struct NodalTopology {
    /// Edge-adjacent triangle across each edge `(t[i], t[i+1])`, if any.
    tri_adj: Vec<[usize; 3]>,
    nb_start: Vec<usize>,
    nb: Vec<usize>,
}

impl NodalTopology {
    pub fn new(mesh: &Mesh) -> Self {
        let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut tri_adj = vec![[usize::MAX; 3]; mesh.triangles.len()];
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                match edge_owner.entry((a.min(b), a.max(b))) {
                    Entry::Occupied(o) => {
                        let (s, j) = *o.get();
                        tri_adj[s][j] = t;
                        tri_adj[t][i] = s;
                    }
                    Entry::Vacant(v) => {
                        v.insert((t, i));
                    }
                }
            }
        }
        let lists = mesh.vertex_neighbors();
        let mut nb_start = Vec::with_capacity(lists.len() + 1);
        let mut nb = Vec::new();
        nb_start.push(0);
        for l in &lists {
            nb.extend_from_slice(l);
            nb_start.push(nb.len());
        }
        NodalTopology { tri_adj, nb_start, nb }
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.nb[self.nb_start[v]..self.nb_start[v + 1]]
    }
}

/// Nodal domains of the P1 function `u`.
///
/// Vertices with `|u| <= tau·max|u|` are neutral and join no component. Signed
/// vertices that touch no fully signed triangle and have no same-sign
/// neighbour in a component are also left unlabelled.
pub fn nodal_domains(mesh: &Mesh, u: &[f64], tau: f64) -> Result<NodalDomains> {
    components(mesh, &NodalTopology::new(mesh), u, tau)
}

/// [`nodal_domains`] with precomputed adjacency.
pub fn nodal_domains_with(mesh: &Mesh, topo: &NodalTopology, u: &[f64], tau: f64) -> Result<NodalDomains> {
    if topo.tri_adj.len() != mesh.triangles.len() || topo.nb_start.len() != mesh.n_vertices() + 1 {
        return Err(Error::InvalidArgument("topology was built for a different mesh".into()));
    }
    components(mesh, topo, u, tau)
}

fn validate_input(mesh: &Mesh, u: &[f64], tau: f64) -> Result<()> {
    if u.len() != mesh.n_vertices() {
        return Err(Error::InvalidArgument("vector length differs from vertex count".into()));
    }
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument("tau must be nonnegative".into()));
    }
    Ok(())
}

/// Neutral level applied to FEM eigenfunctions: `max(tau, target_h²·μ/4)`.
///
/// P1 eigenvectors carry errors of relative size about `(h√μ)²`; where a mode
/// vanishes to high order (the centre of a disk mode with large angular
/// number) that error decides the vertex signs and joins sectors.
pub fn fem_tau(tau: f64, target_h: f64, mu: f64) -> f64 {
    tau.max(target_h * target_h * mu.abs() / 4.0)
}

fn components(mesh: &Mesh, topo: &NodalTopology, u: &[f64], tau: f64) -> Result<NodalDomains> {
    validate_input(mesh, u, tau)?;
    let umax = u.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let thr = tau * umax;
    let sign: Vec<i8> = u
        .iter()
        .map(|&x| if x.abs() <= thr { 0 } else if x > 0.0 { 1 } else { -1 })
        .collect();
    if sign.iter().all(|&s| s == 0) {
        return Err(Error::NumericallyZero);
    }
    // Components are built from triangles whose three vertices share a sign,
    // glued along shared edges. Gluing through single vertices or lone edges
    // would bridge quadrants at discrete saddles where nodal lines cross.
    let nt = mesh.triangles.len();
    let tsign: Vec<i8> = mesh
        .triangles
        .iter()
        .map(|t| if sign[t[0]] != 0 && sign[t[0]] == sign[t[1]] && sign[t[0]] == sign[t[2]] { sign[t[0]] } else { 0 })
        .collect();
    let mut uf = UnionFind::new(nt);
    for t in 0..nt {
        if tsign[t] == 0 {
            continue;
        }
        for &s in &topo.tri_adj[t] {
            // Edge neighbours share two vertices, hence the sign.
            if s != usize::MAX && s > t && tsign[s] != 0 {
                uf.union(s, t);
            }
        }
    }
    // Vertex root: smallest triangle-component root among its signed triangles.
    let mut root = vec![usize::MAX; u.len()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if tsign[t] != 0 {
            let r = uf.find(t);
            for &v in tri {
                root[v] = root[v].min(r);
            }
        }
    }
    // Signed vertices outside every signed triangle join a same-sign neighbour.
    loop {
        let mut changed = false;
        for v in 0..u.len() {
            if sign[v] == 0 || root[v] != usize::MAX {
                continue;
            }
            let best = topo.neighbors(v).iter().filter(|&&w| sign[w] == sign[v]).map(|&w| root[w]).min();
            if let Some(r) = best.filter(|&r| r != usize::MAX) {
                root[v] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut comp_of_root = vec![usize::MAX; nt];
    let mut labels = vec![None; u.len()];
    let mut signs = Vec::new();
    for v in 0..u.len() {
        if root[v] == usize::MAX {
            continue;
        }
        let slot = &mut comp_of_root[root[v]];
        if *slot == usize::MAX {
            signs.push(sign[v]);
            *slot = signs.len() - 1;
        }
        labels[v] = Some(*slot);
    }
    Ok(NodalDomains { count: signs.len(), labels, signs })
}

/// Resolution guard for nodal counting: `target_h <= 0.2/√μ`.
pub fn check_resolution(target_h: f64, mu: f64) -> Result<()> {
    if mu > 0.0 && target_h > 0.2 / mu.sqrt() {
        return Err(Error::InvalidArgument(format!(
            "target_h = {target_h} is too coarse for nodal counting at μ = {mu}; need <= {}",
            0.2 / mu.sqrt()
        )));
    }
    Ok(())
}

/// Eigenvalue cluster occupying indices `first..first+len`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Cluster {
    pub first: usize,
    pub len: usize,
    pub mu: f64,
    /// Nodal counts of every examined eigenfunction.
    pub counts: Vec<usize>,
    /// True when the eigenspace exceeded what was scanned (canonical basis only).
    pub canonical_only: bool,
}

/// Group sorted eigenvalues into clusters of equal value within `rel_tol`.
pub fn clusters(values: &[f64], rel_tol: f64) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some((s, l)) if (v - values[*s + *l - 1]).abs() <= rel_tol * v.abs().max(1.0) => *l += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SharpConvention {
    /// The count must equal the first index of the cluster.
    FirstIndex,
    /// The count may equal any index the cluster occupies.
    AnyIndex,
}

/// Sorted Courant-sharp indices (1-based).
pub fn courant_sharp_scan(cl: &[Cluster], convention: SharpConvention) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for c in cl {
        if c.counts.is_empty() {
            return Err(Error::InvalidArgument(format!("missing nodal count for index {}", c.first)));
        }
        let k = c.first;
        match convention {
            SharpConvention::FirstIndex => {
                if c.counts.contains(&k) {
                    out.push(k);
                }
            }
            SharpConvention::AnyIndex => {
                for kk in k..k + c.len {
                    if c.counts.contains(&kk) {
                        out.push(kk);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Clusters whose eigenfunctions exceed the Courant bound `ν <= first index`.
pub fn courant_violations(cl: &[Cluster]) -> Vec<(usize, usize)> {
    cl.iter()
        .flat_map(|c| c.counts.iter().filter(|&&n| n > c.first).map(move |&n| (c.first, n)))
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PleijelSeries {
    /// `(k, ν(k)/k)` with `ν(k)` the largest examined count of the cluster
    /// holding `k`, divided by the cluster's first index.
    pub ratios: Vec<(usize, f64)>,
    pub k_max: usize,
    /// `max ν(k)/k` over `k ∈ [k_max/2, k_max]`.
    pub tail_max: f64,
    pub tail_argmax: usize,
}

pub fn pleijel_series(cl: &[Cluster], k_max: usize) -> Result<PleijelSeries> {
    let covered = cl.iter().map(|c| c.first + c.len - 1).max().unwrap_or(0);
    if covered < k_max {
        return Err(Error::Incomplete { requested: k_max as f64, complete_below: covered as f64 });
    }
    let mut ratios = Vec::with_capacity(k_max);
    for c in cl {
        let nu = *c.counts.iter().max().ok_or_else(|| Error::InvalidArgument("cluster without counts".into()))?;
        for k in c.first..c.first + c.len {
            if k <= k_max {
                ratios.push((k, nu as f64 / c.first as f64));
            }
        }
    }
    let lo = (k_max / 2).max(1);
    let (mut tail_max, mut tail_argmax) = (0.0, lo);
    for &(k, r) in &ratios {
        if k >= lo && r > tail_max {
            tail_max = r;
            tail_argmax = k;
        }
    }
    Ok(PleijelSeries { ratios, k_max, tail_max, tail_argmax })
}

/// Rectangle Dirichlet eigenfunction `sin(iπx/a) sin(jπy/b)` on `[0,a]×[0,b]`.
fn rect_dirichlet_mode(i: usize, j: usize, a: f64, b: f64, p: [f64; 2]) -> f64 {
    (i as f64 * PI * p[0] / a).sin() * (j as f64 * PI * p[1] / b).sin()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Nodal counts over a rotation grid of the eigenspace spanned by the
/// Dirichlet modes `(i,j)` and `(j,i)` of the square of side `a`, sampled on
/// a structured grid whose lines contain every canonical nodal line.
pub fn square_pair_rotation_counts(i: usize, j: usize, a: f64, steps: usize) -> Result<Vec<usize>> {
    let l = i * j / gcd(i, j);
    let n = l * (12 * i.max(j)).div_ceil(l);
    let mesh = fem::mesh::grid_mesh(a, a, [a / 2.0, a / 2.0], n, n, a / n as f64);
    let ui: Vec<f64> = mesh.vertices.iter().map(|&p| rect_dirichlet_mode(i, j, a, a, p)).collect();
    let uj: Vec<f64> = mesh.vertices.iter().map(|&p| rect_dirichlet_mode(j, i, a, a, p)).collect();
    let topo = NodalTopology::new(&mesh);
    let mut out = Vec::with_capacity(steps);
    for s in 0..steps {
        // Angles α and α+π give ±u, which share a nodal count.
        if steps % 2 == 0 && s >= steps / 2 {
            out.push(out[s - steps / 2]);
            continue;
        }
        let al = 2.0 * PI * s as f64 / steps as f64;
        let (c, sn) = (al.cos(), al.sin());
        let u: Vec<f64> = ui.iter().zip(&uj).map(|(x, y)| c * x + sn * y).collect();
        out.push(nodal_domains_with(&mesh, &topo, &u, 1e-9)?.count);
    }
    Ok(out)
}

/// Nodal clusters of an analytic disk or rectangle spectrum, up to index `k_max`.
///
/// Disk pairs `(m ≥ 1)` are rotations of one another, so the canonical count
/// covers the eigenspace. For square Dirichlet spectra with `rotation_steps`,
/// each `(i,j)/(j,i)` pair is scanned over that many rotation angles.
pub fn analytic_clusters(spec: &Spectrum, k_max: usize, rotation_steps: Option<usize>) -> Result<Vec<Cluster>> {
    let values = spec.values();
    if values.len() < k_max {
        return Err(Error::Incomplete { requested: k_max as f64, complete_below: spec.complete_below });
    }
    let firsts = spec.first_indices();
    let square = match spec.domain.as_ref().map(|d| &d.shape) {
        Some(crate::geometry::Shape::Rectangle { a, b }) if a == b => Some(*a),
        _ => None,
    };
    // Group records by equal eigenvalue.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for r in 0..spec.records.len() {
        if firsts[r] > k_max {
            break;
        }
        match groups.last_mut() {
            Some(g) if (spec.records[r].mu - spec.records[g[0]].mu).abs() <= 1e-12 * spec.records[r].mu.abs().max(1.0) => {
                g.push(r)
            }
            _ => groups.push(vec![r]),
        }
    }
    groups
        .par_iter()
        .map(|g| {
            let first = firsts[g[0]];
            let len: usize = g.iter().map(|&r| spec.records[r].multiplicity).sum();
            let mut counts = Vec::new();
            for &r in g {
                counts.push(spectra::nodal_count_analytic(&spec.records[r].label, spec.dirichlet)?);
            }
            let mut canonical_only = len > 2;
            if let (Some(a), Some(steps), true) = (square, rotation_steps, spec.dirichlet) {
                for &r in g {
                    if let EigenLabel::Rect { i, j } = spec.records[r].label {
                        if i < j && g.iter().any(|&q| spec.records[q].label == EigenLabel::Rect { i: j, j: i }) {
                            counts.extend(square_pair_rotation_counts(i, j, a, steps)?);
                            if len == 2 {
                                canonical_only = false;
                            }
                        }
                    }
                }
            }
            counts.sort_unstable();
            counts.dedup();
            Ok(Cluster { first, len, mu: spec.records[g[0]].mu, counts, canonical_only })
        })
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ComponentRayleigh {
    pub component: usize,
    pub sign: i8,
    pub rayleigh: f64,
    pub bound: f64,
    /// `bound · (1 + 5·target_h·√μ)`.
    pub slack_bound: f64,
    pub pass: bool,
}

/// Rayleigh quotient of `u` truncated to each nodal component against
/// `(√(μ + Γ1 H) + Γ2 H)²` with the discretisation slack.
pub fn verify_nodal_rayleigh(
    mesh: &Mesh,
    mu: f64,
    u: &[f64],
    domains: &NodalDomains,
    constants: &FieldConstants,
) -> Result<Vec<ComponentRayleigh>> {
    let bound = crate::bounds::rayleigh_bound(mu.max(0.0), constants.gamma1, constants.gamma2, constants.h)?;
    let slack = 1.0 + 5.0 * mesh.target_h * mu.abs().sqrt();
    let vt = mesh.vertex_triangles();
    let mut out = Vec::with_capacity(domains.count);
    for c in 0..domains.count {
        let verts = domains.vertices_of(c);
        let mut ud = vec![0.0; u.len()];
        let mut tris = Vec::new();
        for &v in &verts {
            ud[v] = u[v];
            tris.extend_from_slice(&vt[v]);
        }
        tris.sort_unstable();
        tris.dedup();
        let rq = mixed::rayleigh_quotient(mesh, &ud, &tris)?;
        out.push(ComponentRayleigh {
            component: c,
            sign: domains.signs[c],
            rayleigh: rq,
            bound,
            slack_bound: bound * slack,
            pass: rq <= bound * slack,
        });
    }
    Ok(out)
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct NodalEntry {
    pub k: usize,
    pub mu: f64,
    pub nu: usize,
    /// First index of the eigenvalue cluster containing `k`.
    pub cluster_first: usize,
    pub courant_sharp: bool,
    pub courant_sharp_any_index: bool,
    pub pleijel_ratio: f64,
    pub components: Vec<ComponentRayleigh>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct NodalReport {
    pub entries: Vec<NodalEntry>,
    pub gamma_n: f64,
    pub tau: f64,
    pub target_h: f64,
}

impl NodalReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,mu,nu,ratio,sharp\n");
        for e in &self.entries {
            s.push_str(&format!("{},{},{},{},{}\n", e.k, e.mu, e.nu, e.pleijel_ratio, e.courant_sharp));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Plot data: `k,ratio` rows followed by the `γ(n)` reference row.
    pub fn plot_csv(&self) -> String {
        let mut s = String::from("k,ratio\n");
        for e in &self.entries {
            s.push_str(&format!("{},{}\n", e.k, e.pleijel_ratio));
        }
        s.push_str(&format!("gamma_n,{}\n", self.gamma_n));
        s
    }

    pub fn courant_violations(&self) -> Vec<(usize, usize)> {
        self.entries.iter().filter(|e| e.nu > e.cluster_first).map(|e| (e.k, e.nu)).collect()
    }
}

/// FEM nodal report for the first `count` eigenfunctions.
///
/// Refuses when `target_h` does not resolve the largest requested eigenvalue.
/// With `constants`, each nodal component's Rayleigh quotient is checked.
pub fn fem_nodal_report(
    spec: &DomainSpec,
    target_h: f64,
    count: usize,
    tau: f64,
    constants: Option<&FieldConstants>,
) -> Result<(NodalReport, Mesh, fem::EigenSolution)> {
    let (mesh, sol) = fem::fem_spectrum(spec, target_h, count)?;
    for &mu in &sol.values {
        check_resolution(target_h, mu)?;
    }
    let report = nodal_report_from(&mesh, &sol, tau, constants)?;
    Ok((report, mesh, sol))
}

pub fn nodal_report_from(
    mesh: &Mesh,
    sol: &fem::EigenSolution,
    tau: f64,
    constants: Option<&FieldConstants>,
) -> Result<NodalReport> {
    let cl = clusters(&sol.values, 1e-8);
    let mut entries = Vec::with_capacity(sol.values.len());
    for (start, len) in cl {
        for k in start..start + len {
            let nd = nodal_domains(mesh, &sol.vectors[k], fem_tau(tau, mesh.target_h, sol.values[k]))?;
            let first = start + 1;
            let components = match constants {
                Some(c) => verify_nodal_rayleigh(mesh, sol.values[k], &sol.vectors[k], &nd, c)?,
                None => Vec::new(),
            };
            entries.push(NodalEntry {
                k: k + 1,
                mu: sol.values[k],
                nu: nd.count,
                cluster_first: first,
                courant_sharp: nd.count == first,
                courant_sharp_any_index: (first..first + len).contains(&nd.count),
                pleijel_ratio: nd.count as f64 / first as f64,
                components,
            });
        }
    }
    Ok(NodalReport {
        entries,
        gamma_n: crate::bounds::universal_constants(2)?.gamma_n,
        tau,
        target_h: mesh.target_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::grid_mesh;
    use crate::geometry::{self, BoundaryData, FieldStrategy};
    use crate::spectra::Bc;

    #[test]
    fn checkerboard_sixteen() {
        let m = grid_mesh(1.0, 1.0, [0.5, 0.5], 16, 16, 1.0 / 16.0);
        let u: Vec<f64> = m.vertices.iter().map(|p| (4.0 * PI * p[0]).sin() * (4.0 * PI * p[1]).sin()).collect();
        assert_eq!(nodal_domains(&m, &u, 1e-9).unwrap().count, 16);
        assert_eq!(nodal_domains(&m, &vec![0.0; u.len()], 1e-6), Err(Error::NumericallyZero));
    }

    #[test]
    fn analytic_courant_sharp_sets() {
        let disk = spectra::disk_robin_spectrum(1.0, Bc::Dirichlet, 30).unwrap();
        let cl = analytic_clusters(&disk, 30, None).unwrap();
        assert_eq!(courant_sharp_scan(&cl, SharpConvention::FirstIndex).unwrap(), vec![1, 2, 4]);
        let mut sq = spectra::rectangle_spectrum(1.0, 1.0, Bc::Dirichlet, 30).unwrap();
        sq.domain = Some(DomainSpec::rectangle(1.0, 1.0, BoundaryData::Dirichlet));
        let cl = analytic_clusters(&sq, 30, Some(64)).unwrap();
        assert_eq!(courant_sharp_scan(&cl, SharpConvention::FirstIndex).unwrap(), vec![1, 2, 4]);
        assert!(courant_violations(&cl).is_empty());
    }

    #[test]
    fn rotation_counts_of_first_pair() {
        let c = square_pair_rotation_counts(1, 2, 1.0, 64).unwrap();
        assert!(c.iter().all(|&n| n == 2));
    }

    #[test]
    fn pleijel_small_k() {
        let disk = spectra::disk_robin_spectrum(1.0, Bc::Robin(1.0), 60).unwrap();
        let cl = analytic_clusters(&disk, 50, None).unwrap();
        let s = pleijel_series(&cl, 50).unwrap();
        assert_eq!(s.ratios[0], (1, 1.0));
        assert!(pleijel_series(&cl, 10_000).is_err());
    }

    #[test]
    fn fem_disk_nodal_counts_match_analytic() {
        let spec = DomainSpec::disk(1.0, BoundaryData::Constant(0.0));
        let exact = spectra::disk_robin_spectrum(1.0, Bc::Robin(0.0), 20).unwrap();
        let mut labels = Vec::new();
        for r in &exact.records {
            for _ in 0..r.multiplicity {
                labels.push(r.label);
            }
        }
        let (rep, _, _) = fem_nodal_report(&spec, 0.02, 20, TAU, None).unwrap();
        for (e, lab) in rep.entries.iter().zip(&labels) {
            assert_eq!(e.nu, spectra::nodal_count_analytic(lab, false).unwrap(), "k={}", e.k);
        }
        assert!(rep.courant_violations().is_empty());
        assert!(fem_nodal_report(&spec, 0.1, 20, TAU, None).is_err());
    }

    #[test]
    fn nodal_rayleigh_equality_at_h_zero() {
        let spec = DomainSpec::disk(1.0, BoundaryData::Constant(0.0));
        let fc = geometry::field_constants(&spec, FieldStrategy::Star { center: [0.0, 0.0] }, 0.0).unwrap();
        let (rep, _, _) = fem_nodal_report(&spec, 0.025, 6, TAU, Some(&fc)).unwrap();
        for e in &rep.entries[1..] {
            for c in &e.components {
                assert!((c.bound - e.mu).abs() < 1e-12 * e.mu);
                assert!(c.pass, "k={} rq={} mu={}", e.k, c.rayleigh, e.mu);
            }
        }
    }

    fn expand_labels(s: &Spectrum) -> Vec<EigenLabel> {
        s.records.iter().flat_map(|r| std::iter::repeat(r.label).take(r.multiplicity)).collect()
    }

    #[test]
    fn fem_rectangle_counts_match_analytic() {
        let (a, b) = (1.0, 0.72);
        for (h, bc, dir) in [
            (BoundaryData::Dirichlet, Bc::Dirichlet, true),
            (BoundaryData::Constant(0.0), Bc::Robin(0.0), false),
        ] {
            let spec = DomainSpec::rectangle(a, b, h);
            let exact = spectra::rectangle_spectrum(a, b, bc, 20).unwrap();
            let labels = expand_labels(&exact);
            let (rep, mesh, sol) = fem_nodal_report(&spec, 0.0095, 20, TAU, None).unwrap();
            for (e, lab) in rep.entries.iter().zip(&labels) {
                assert_eq!(e.nu, spectra::nodal_count_analytic(lab, dir).unwrap(), "k={} {:?}", e.k, lab);
            }
            for tau in [1e-8, 1e-6, 1e-4] {
                for (k, e) in rep.entries.iter().enumerate() {
                    let t = fem_tau(tau, mesh.target_h, sol.values[k]);
                    assert_eq!(nodal_domains(&mesh, &sol.vectors[k], t).unwrap().count, e.nu);
                }
            }
        }
    }

    #[test]
    fn raw_threshold_on_first_neumann_pair() {
        let spec = DomainSpec::disk(1.0, BoundaryData::Constant(0.0));
        let (mesh, sol) = fem::fem_spectrum(&spec, 0.05, 3).unwrap();
        assert_eq!(nodal_domains(&mesh, &sol.vectors[1], 1e-6).unwrap().count, 2);
    }
}

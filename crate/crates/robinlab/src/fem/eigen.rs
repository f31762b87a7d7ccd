//! Generalized symmetric eigensolver for `(A + B_h) x = μ M x`.
//!
//! Block shift-invert Krylov iteration in the `M` inner product with full
//! reorthogonalization, followed by Rayleigh–Ritz on the pencil. The shift is
//! placed below a certified lower bound of the spectrum, so `A + B_h − σM` is
//! positive definite and is factored once by sparse Cholesky after a reverse
//! Cuthill–McKee reordering.

use super::assemble::{matvec, OperatorBundle};
use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::polygon;
use crate::spectra::{EigenLabel, EigenRecord, Source, Spectrum};
use nalgebra::{DMatrix, SymmetricEigen};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix, CsrMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

const BLOCK: usize = 4;
const SEED: u64 = 0x5eed_1a2c;

/// Reverse Cuthill–McKee ordering of a symmetric sparsity pattern.
pub fn rcm(m: &CsrMatrix<f64>) -> Vec<usize> {
    let n = m.nrows();
    let (offs, cols, _) = m.csr_data();
    let deg = |i: usize| offs[i + 1] - offs[i];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        // Start each component at a minimum-degree vertex, then move to a
        // pseudo-peripheral vertex by repeated BFS.
        let mut start = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| (deg(i), i)).unwrap();
        let mut ecc = 0;
        for _ in 0..8 {
            let levels = bfs_levels(offs, cols, start, &visited);
            let last = levels.iter().copied().filter(|&(_, l)| l == levels.last().unwrap().1);
            let far = last.map(|(v, _)| v).min_by_key(|&v| (deg(v), v)).unwrap();
            let e = levels.last().unwrap().1;
            if e <= ecc {
                break;
            }
            ecc = e;
            start = far;
        }
        let mut q = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = q.pop_front() {
            order.push(v);
            let mut nb: Vec<usize> = cols[offs[v]..offs[v + 1]].iter().copied().filter(|&w| !visited[w]).collect();
            nb.sort_by_key(|&w| (deg(w), w));
            for w in nb {
                if !visited[w] {
                    visited[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(offs: &[usize], cols: &[usize], start: usize, blocked: &[bool]) -> Vec<(usize, usize)> {
    let mut seen = blocked.to_vec();
    let mut out = vec![(start, 0)];
    seen[start] = true;
    let mut i = 0;
    while i < out.len() {
        let (v, l) = out[i];
        for &w in &cols[offs[v]..offs[v + 1]] {
            if !seen[w] {
                seen[w] = true;
                out.push((w, l + 1));
            }
        }
        i += 1;
    }
    out
}

/// Sparse Cholesky of a symmetric positive definite matrix, with RCM ordering.
pub struct SpdSolver {
    perm: Vec<usize>,
    chol: CscCholesky<f64>,
}

impl SpdSolver {
    pub fn new(k: &CsrMatrix<f64>) -> Result<SpdSolver> {
        let perm = rcm(k);
        let n = perm.len();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut coo = CooMatrix::new(n, n);
        for (i, j, v) in k.triplet_iter() {
            coo.push(inv[i], inv[j], *v);
        }
        let csc = CscMatrix::from(&coo);
        let chol = CscCholesky::factor(&csc).map_err(|_| Error::NotPositiveDefinite(0))?;
        Ok(SpdSolver { perm, chol })
    }

    /// Solve `K X = B` column by column, `B` given as vectors.
    pub fn solve(&self, rhs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = self.perm.len();
        let mut b = DMatrix::zeros(n, rhs.len());
        for (c, r) in rhs.iter().enumerate() {
            for (new, &old) in self.perm.iter().enumerate() {
                b[(new, c)] = r[old];
            }
        }
        self.chol.solve_mut(&mut b);
        (0..rhs.len())
            .map(|c| {
                let mut x = vec![0.0; n];
                for (new, &old) in self.perm.iter().enumerate() {
                    x[old] = b[(new, c)];
                }
                x
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Certified lower bound for the smallest eigenvalue of the assembled pencil.
///
/// Zero when `h ≥ 0`. Otherwise the larger of a Gershgorin estimate
/// `−H λmax(B_1)/λmin(M)` and, for star-shaped unconstrained meshes, the
/// trace-inequality bound `−(Γ1 H + Γ2² H²/4)` of the mesh polygon.
pub fn certified_lower_bound(mesh: &Mesh, ops: &OperatorBundle) -> f64 {
    let h = ops.h_sup;
    if h == 0.0 {
        return 0.0;
    }
    let (offs, _, vals) = ops.boundary_unit.csr_data();
    let bmax = (0..ops.dim())
        .map(|i| vals[offs[i]..offs[i + 1]].iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut lumped = vec![0.0; mesh.n_vertices()];
    for t in 0..mesh.triangles.len() {
        let a = mesh.triangle_area(t) / 12.0;
        for &v in &mesh.triangles[t] {
            lumped[v] += a;
        }
    }
    let mmin = ops.free.iter().map(|&v| lumped[v]).fold(f64::INFINITY, f64::min);
    let mut bound = -h * bmax / mmin;
    if ops.dirichlet_mask.is_none() {
        if let Ok(lp) = mesh.boundary_loop() {
            let poly: Vec<_> = lp.iter().map(|&v| mesh.vertices[v]).collect();
            let x0 = polygon::centroid(&poly);
            let n = poly.len();
            let gamma_f = (0..n)
                .map(|i| {
                    let nrm = polygon::outward_normal(poly[i], poly[(i + 1) % n]);
                    polygon::dot(polygon::sub(poly[i], x0), nrm)
                })
                .fold(f64::INFINITY, f64::min);
            if gamma_f > 0.0 {
                let r = poly.iter().map(|&p| polygon::dist(p, x0)).fold(0.0, f64::max);
                let (g1, g2) = (2.0 / gamma_f, 2.0 * r / gamma_f);
                bound = bound.max(-(g1 * h + 0.25 * g2 * g2 * h * h));
            }
        }
    }
    bound
}

#[derive(Clone, Debug)]
pub struct EigenSolution {
    pub values: Vec<f64>,
    /// Full-length vertex vectors, zero on eliminated vertices, `M`-orthonormal.
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub shift: f64,
    pub lower_bound: f64,
}

impl EigenSolution {
    pub fn to_spectrum(&self, domain: Option<DomainSpec>, dirichlet: bool) -> Spectrum {
        let records = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &mu)| EigenRecord {
                mu,
                label: EigenLabel::Fem { index: k + 1 },
                multiplicity: 1,
                source: Source::Fem,
            })
            .collect();
        Spectrum {
            records,
            domain,
            count_requested: self.values.len(),
            complete_below: *self.values.last().unwrap_or(&f64::NEG_INFINITY),
            dirichlet,
        }
    }

    /// One CSV per eigenpair: `vertex,value`.
    pub fn vector_csv(&self, k: usize) -> String {
        let mut s = String::from("vertex,value\n");
        for (i, v) in self.vectors[k].iter().enumerate() {
            s.push_str(&format!("{i},{v:e}\n"));
        }
        s
    }
}

fn combine(a: &CsrMatrix<f64>, b: &CsrMatrix<f64>, m: &CsrMatrix<f64>, sigma: f64) -> CsrMatrix<f64> {
    let mut coo = CooMatrix::new(a.nrows(), a.ncols());
    for (i, j, v) in a.triplet_iter() {
        coo.push(i, j, *v);
    }
    for (i, j, v) in b.triplet_iter() {
        coo.push(i, j, *v);
    }
    if sigma != 0.0 {
        for (i, j, v) in m.triplet_iter() {
            coo.push(i, j, -sigma * v);
        }
    }
    CsrMatrix::from(&coo)
}

struct Basis {
    q: Vec<Vec<f64>>,
    mq: Vec<Vec<f64>>,
    aq: Vec<Vec<f64>>,
}

impl Basis {
    /// M-orthonormalize `v` against the basis (two passes) and append it.
    fn push(&mut self, mut v: Vec<f64>, ops: &OperatorBundle, pencil: &CsrMatrix<f64>) -> bool {
        let mv0 = matvec(&ops.mass, &v);
        let n0 = dot(&v, &mv0).max(0.0).sqrt();
        if n0 == 0.0 {
            return false;
        }
        for _ in 0..2 {
            for (q, mq) in self.q.iter().zip(&self.mq) {
                let c = dot(mq, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let mv = matvec(&ops.mass, &v);
        let nv = dot(&v, &mv).max(0.0).sqrt();
        if nv < 1e-10 * n0 {
            return false;
        }
        let inv = 1.0 / nv;
        v.iter_mut().for_each(|x| *x *= inv);
        let mv: Vec<f64> = mv.into_iter().map(|x| x * inv).collect();
        self.aq.push(matvec(pencil, &v));
        self.q.push(v);
        self.mq.push(mv);
        true
    }
}

/// Rayleigh–Ritz on an `M`-orthonormal basis: the `count` smallest Ritz
/// values, vectors (sign-normalised) and relative residuals.
fn rayleigh_ritz(basis: &Basis, count: usize, n: usize) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let d = basis.q.len();
    let s = DMatrix::from_fn(d, d, |i, j| 0.5 * (dot(&basis.q[i], &basis.aq[j]) + dot(&basis.q[j], &basis.aq[i])));
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for &k in order.iter().take(count) {
        let mu = eig.eigenvalues[k];
        let y = eig.eigenvectors.column(k);
        let mut x = vec![0.0; n];
        let mut ax = vec![0.0; n];
        let mut mx = vec![0.0; n];
        for i in 0..d {
            let c = y[i];
            for r in 0..n {
                x[r] += c * basis.q[i][r];
                ax[r] += c * basis.aq[i][r];
                mx[r] += c * basis.mq[i][r];
            }
        }
        let res: Vec<f64> = ax.iter().zip(&mx).map(|(a, m)| a - mu * m).collect();
        residuals.push(norm(&res) / (norm(&mx) * mu.abs().max(1.0)));
        // Deterministic sign: largest-magnitude entry positive.
        let imax = (0..n).fold(0, |b, i| if x[i].abs() > x[b].abs() { i } else { b });
        if x[imax] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        values.push(mu);
        vectors.push(x);
    }
    (values, vectors, residuals)
}

/// The `count` smallest eigenpairs of the assembled pencil.
pub fn solve_eigens(mesh: &Mesh, ops: &OperatorBundle, count: usize) -> Result<EigenSolution> {
    let n = ops.dim();
    if count == 0 || count + 1 > n {
        return Err(Error::InvalidArgument(format!("count {count} needs 1 <= count <= dim - 1 = {}", n - 1)));
    }
    let lower = certified_lower_bound(mesh, ops);
    let shift = lower - 1.0_f64.max(0.1 * lower.abs());
    let pencil = combine(&ops.stiffness, &ops.boundary, &ops.mass, 0.0);
    let shifted = combine(&ops.stiffness, &ops.boundary, &ops.mass, shift);
    let solver = SpdSolver::new(&shifted)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random = |k: usize| -> Vec<Vec<f64>> {
        (0..k).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
    };
    let mut basis = Basis { q: Vec::new(), mq: Vec::new(), aq: Vec::new() };
    let b = BLOCK.min(n);
    let mut last: Vec<usize> = Vec::new();
    // Smooth the random start block so the basis carries no raw
    // high-frequency content, which would dominate the residuals.
    let mut start = random(b);
    for _ in 0..2 {
        let rhs: Vec<Vec<f64>> = start.iter().map(|v| matvec(&ops.mass, v)).collect();
        start = solver.solve(&rhs);
    }
    for v in start {
        if basis.push(v, ops, &pencil) {
            last.push(basis.q.len() - 1);
        }
    }
    let mut target = n.min((2 * count + 20).max(count + 3 * b + 10));
    let mut worst;
    loop {
        while basis.q.len() < target {
            let rhs: Vec<Vec<f64>> = last.iter().map(|&i| basis.mq[i].clone()).collect();
            let w = solver.solve(&rhs);
            last.clear();
            for v in w {
                if basis.q.len() < target && basis.push(v, ops, &pencil) {
                    last.push(basis.q.len() - 1);
                }
            }
            if last.is_empty() {
                for v in random(b) {
                    if basis.q.len() < target && basis.push(v, ops, &pencil) {
                        last.push(basis.q.len() - 1);
                    }
                }
                if last.is_empty() {
                    break;
                }
            }
        }
        let d = basis.q.len();
        // Ritz vectors of the large basis, polished by two inverse-iteration
        // steps and a second Rayleigh–Ritz on the small space they span.
        let keep = (count + b).min(d);
        let (_, mut xs, _) = rayleigh_ritz(&basis, keep, n);
        for _ in 0..2 {
            let rhs: Vec<Vec<f64>> = xs.iter().map(|x| matvec(&ops.mass, x)).collect();
            xs = solver.solve(&rhs);
        }
        let mut small = Basis { q: Vec::new(), mq: Vec::new(), aq: Vec::new() };
        for x in xs {
            small.push(x, ops, &pencil);
        }
        if small.q.len() < count {
            return Err(Error::NoConvergence("polishing space collapsed".into()));
        }
        let (values, xs, residuals) = rayleigh_ritz(&small, count, n);
        worst = residuals.iter().copied().fold(0.0, f64::max);
        if worst <= 1e-8 {
            let vectors = xs.iter().map(|x| ops.expand(x)).collect();
            return Ok(EigenSolution { values, vectors, residuals, shift, lower_bound: lower });
        }
        if d >= n || target >= n {
            return Err(Error::NoConvergence(format!(
                "relative residual {worst:e} with the full basis of dimension {d}"
            )));
        }
        if d > 8 * count + 400 {
            return Err(Error::NoConvergence(format!("relative residual {worst:e} at basis dimension {d}")));
        }
        target = n.min(target + (2 * b).max(target / 2));
    }
}

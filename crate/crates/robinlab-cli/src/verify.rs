//! The acceptance suite. Criteria 1–12 are computed by [`run_once`];
//! [`verify`] runs it twice and compares every emitted byte for criterion 13.

use crate::commands::{self, Artifacts, ROTATION_STEPS};
use crate::config::RunConfig;
use crate::corpus;
use crate::error::{Context, Result};
use robinlab::asymmetry;
use robinlab::bounds;
use robinlab::fem::{self, mixed};
use robinlab::geometry::{self, BoundaryData, DomainSpec, FieldStrategy};
use robinlab::nodal::{self, SharpConvention};
use robinlab::polygon::dist;
use robinlab::spectra::{self, Bc, Spectrum};
use std::time::Instant;

pub const FEM_TARGET_H: f64 = 0.03;
pub const NODAL_TARGET_H: f64 = 0.02;
pub const SHARP_K_MAX: usize = 200;
pub const PLEIJEL_K_MAX: usize = 2000;
pub const WEYL_MIN_COUNT: usize = 500;
pub const WEYL_MU_MAX: f64 = 3000.0;
/// Mesh for the mixed eigenvalue subdomains of the unit disk.
pub const MIXED_TARGET_H: f64 = 0.005;
/// Relative round-off allowance in inequality checks between closed forms.
const ROUNDOFF: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!("[{}] criterion {:>2} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

/// Outputs of one pass over criteria 1–12.
#[derive(Clone, Debug, Default)]
pub struct Pass {
    pub criteria: Vec<CriterionResult>,
    pub files: Vec<(String, String)>,
    /// Wall-clock seconds per timed step; kept out of the emitted bytes.
    pub timings: Vec<(String, f64)>,
}

impl Pass {
    pub fn csv(&self) -> String {
        let mut s = String::from("criterion,name,pass,detail\n");
        for c in &self.criteria {
            s.push_str(&format!("{},{},{},\"{}\"\n", c.id, c.name, c.pass, c.detail.replace('"', "'")));
        }
        s
    }

    /// Every emitted byte: the criteria table followed by the data files.
    pub fn bytes(&self) -> Vec<u8> {
        let mut b = self.csv().into_bytes();
        for (name, body) in &self.files {
            b.extend_from_slice(name.as_bytes());
            b.push(0);
            b.extend_from_slice(body.as_bytes());
        }
        b
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub criteria: Vec<CriterionResult>,
    pub first: Pass,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn csv(&self) -> String {
        Pass { criteria: self.criteria.clone(), ..Default::default() }.csv()
    }

    pub fn artifacts(&self) -> Artifacts {
        let mut files = vec![("verify.csv".to_string(), self.csv())];
        files.extend(self.first.files.iter().cloned());
        let mut summary: Vec<String> = self.criteria.iter().map(|c| c.line()).collect();
        for (what, secs) in &self.first.timings {
            summary.push(format!("time {what}: {secs:.2} s"));
        }
        Artifacts { files, summary, pass: self.all_pass() }
    }
}

pub fn verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let first = run_once(cfg)?;
    let second = run_once(cfg)?;
    let (a, b) = (first.bytes(), second.bytes());
    let mismatch = a.iter().zip(&b).position(|(x, y)| x != y).or((a.len() != b.len()).then_some(a.len().min(b.len())));
    let mut criteria = first.criteria.clone();
    criteria.push(CriterionResult {
        id: 13,
        name: "determinism",
        pass: mismatch.is_none(),
        detail: match mismatch {
            None => format!("two runs emitted identical bytes ({} bytes, {} files)", a.len(), first.files.len() + 1),
            Some(i) => format!("runs differ at byte {i} of {}/{}", a.len(), b.len()),
        },
    });
    Ok(VerifyReport { criteria, first })
}

fn rel_err(approx: f64, exact: f64) -> f64 {
    (approx - exact).abs() / exact.abs().max(1.0)
}

fn unit_disk(h: BoundaryData) -> DomainSpec {
    DomainSpec::disk(1.0, h)
}

fn unit_square(h: BoundaryData) -> DomainSpec {
    DomainSpec::rectangle(1.0, 1.0, h)
}

fn square_spectrum(bc: Bc, h: BoundaryData, count: usize) -> Result<Spectrum> {
    let mut s = spectra::rectangle_spectrum(1.0, 1.0, bc, count).ctx("square spectrum")?;
    s.domain = Some(unit_square(h));
    Ok(s)
}

/// Courant violations `(k, ν)` gathered for criterion 2, with the number of counts examined.
#[derive(Default)]
struct CourantLedger {
    examined: usize,
    violations: Vec<String>,
}

impl CourantLedger {
    fn clusters(&mut self, what: &str, cl: &[nodal::Cluster]) {
        self.examined += cl.iter().map(|c| c.counts.len()).sum::<usize>();
        for (k, n) in nodal::courant_violations(cl) {
            self.violations.push(format!("{what} k={k} nu={n}"));
        }
    }

    fn report(&mut self, what: &str, rep: &nodal::NodalReport) {
        self.examined += rep.entries.len();
        for (k, n) in rep.courant_violations() {
            self.violations.push(format!("{what} k={k} nu={n}"));
        }
    }
}

pub fn run_once(cfg: &RunConfig) -> Result<Pass> {
    let tol = &cfg.tolerances;
    let mut p = Pass::default();
    let mut ledger = CourantLedger::default();
    let mut c = Vec::new();

    c.push(fem_vs_analytic(&mut p, tol.fem_relative, tol.fem_seconds)?);
    let c3 = courant_sharp_sets(&mut p, &mut ledger, tol.sharp_seconds)?;
    let c4 = pleijel_tail(&mut p, &mut ledger)?;
    let c5 = nodal_rayleigh(&mut p, &mut ledger)?;
    c.push(CriterionResult {
        id: 2,
        name: "courant_bound",
        pass: ledger.violations.is_empty(),
        detail: format!(
            "{} nodal counts examined (criteria 3, 4, 5), violations: [{}]",
            ledger.examined,
            ledger.violations.join("; ")
        ),
    });
    c.extend([c3, c4, c5]);
    c.push(robin_neumann_bounds(&mut p)?);
    c.push(neumann_count_bounds(&mut p)?);
    c.push(scale_invariance(tol.scale)?);
    c.push(isoperimetric_corpus(&mut p, cfg)?);
    c.push(mixed_faber_krahn(&mut p, tol.mixed_interior, tol.mixed_half)?);
    c.push(polya_szego(&mut p)?);
    c.push(weyl(&mut p, tol.weyl_band)?);
    c.sort_by_key(|r| r.id);
    p.criteria = c;
    Ok(p)
}

fn fem_vs_analytic(p: &mut Pass, rel_tol: f64, seconds: f64) -> Result<CriterionResult> {
    let mut csv = String::from("h,k,analytic,fem,relative_error\n");
    let (mut worst, mut slow) = (0.0_f64, Vec::new());
    for h in [-1.0, 0.0, 1.0] {
        let t = Instant::now();
        let (_, sol) = fem::fem_spectrum(&unit_disk(BoundaryData::Constant(h)), FEM_TARGET_H, 10).ctx("criterion 1 fem")?;
        let secs = t.elapsed().as_secs_f64();
        p.timings.push((format!("criterion 1 fem h={h}"), secs));
        if secs >= seconds {
            slow.push(h);
        }
        let exact = spectra::disk_robin_spectrum(1.0, Bc::Robin(h), 10).ctx("criterion 1 analytic")?.values();
        for k in 0..10 {
            let e = rel_err(sol.values[k], exact[k]);
            worst = worst.max(e);
            csv.push_str(&format!("{h},{},{},{},{e}\n", k + 1, exact[k], sol.values[k]));
        }
    }
    p.files.push(("c01_fem_vs_analytic.csv".into(), csv));
    Ok(CriterionResult {
        id: 1,
        name: "fem_vs_analytic",
        pass: worst <= rel_tol && slow.is_empty(),
        detail: format!(
            "unit disk, target_h {FEM_TARGET_H}, 10 eigenvalues, h in {{-1,0,1}}: max relative error {worst:.3e} (limit {rel_tol}, floor max(|mu|,1)); over {seconds} s: {slow:?}"
        ),
    })
}

fn courant_sharp_sets(p: &mut Pass, ledger: &mut CourantLedger, seconds: f64) -> Result<CriterionResult> {
    let t = Instant::now();
    let disk = spectra::disk_robin_spectrum(1.0, Bc::Dirichlet, SHARP_K_MAX).ctx("criterion 3 disk")?;
    let dcl = nodal::analytic_clusters(&disk, SHARP_K_MAX, None).ctx("criterion 3 disk clusters")?;
    let sq = square_spectrum(Bc::Dirichlet, BoundaryData::Dirichlet, SHARP_K_MAX)?;
    let scl = nodal::analytic_clusters(&sq, SHARP_K_MAX, Some(ROTATION_STEPS)).ctx("criterion 3 square clusters")?;
    let secs = t.elapsed().as_secs_f64();
    p.timings.push(("criterion 3 scans".into(), secs));
    let ds = nodal::courant_sharp_scan(&dcl, SharpConvention::FirstIndex).ctx("criterion 3")?;
    let ss = nodal::courant_sharp_scan(&scl, SharpConvention::FirstIndex).ctx("criterion 3")?;
    ledger.clusters("disk dirichlet", &dcl);
    ledger.clusters("square dirichlet", &scl);
    p.files.push(("c03_disk_clusters.csv".into(), commands::clusters_csv(&dcl)));
    p.files.push(("c03_square_clusters.csv".into(), commands::clusters_csv(&scl)));
    let expected = vec![1, 2, 4];
    let canon = scl.iter().filter(|c| c.canonical_only).count();
    Ok(CriterionResult {
        id: 3,
        name: "courant_sharp_sets",
        pass: ds == expected && ss == expected && secs < seconds,
        detail: format!(
            "k <= {SHARP_K_MAX}: disk {ds:?}, square {ss:?} (rotation grid {ROTATION_STEPS}; {canon} square clusters of dimension > 2 scanned in the canonical basis only); expected [1, 2, 4]; time limit {seconds} s"
        ),
    })
}

fn pleijel_tail(p: &mut Pass, ledger: &mut CourantLedger) -> Result<CriterionResult> {
    let gamma = bounds::universal_constants(2).ctx("criterion 4")?.gamma_n;
    let mut csv = String::from("domain,h,tail_max,tail_argmax,gamma_n\n");
    let mut worst = (0.0, String::new());
    for h in [-1.0, 0.0, 1.0] {
        let disk = spectra::disk_robin_spectrum(1.0, Bc::Robin(h), PLEIJEL_K_MAX).ctx("criterion 4 disk")?;
        let sq = square_spectrum(Bc::Robin(h), BoundaryData::Constant(h), PLEIJEL_K_MAX)?;
        for (name, s) in [("disk", disk), ("square", sq)] {
            let cl = nodal::analytic_clusters(&s, PLEIJEL_K_MAX, None).ctx("criterion 4 clusters")?;
            ledger.clusters(&format!("{name} h={h}"), &cl);
            let series = nodal::pleijel_series(&cl, PLEIJEL_K_MAX).ctx("criterion 4 series")?;
            csv.push_str(&format!("{name},{h},{},{},{gamma}\n", series.tail_max, series.tail_argmax));
            if series.tail_max > worst.0 {
                worst = (series.tail_max, format!("{name} h={h} k={}", series.tail_argmax));
            }
        }
    }
    p.files.push(("c04_pleijel_tail.csv".into(), csv));
    Ok(CriterionResult {
        id: 4,
        name: "pleijel_tail",
        pass: worst.0 < gamma,
        detail: format!(
            "max nu(k)/k over k in [1000, 2000], disk and square, h in {{-1,0,1}}: {:.6} ({}) < gamma(2) = {gamma:.10}",
            worst.0, worst.1
        ),
    })
}

fn nodal_rayleigh(p: &mut Pass, ledger: &mut CourantLedger) -> Result<CriterionResult> {
    let spec = unit_disk(BoundaryData::Constant(-1.0));
    let fc = geometry::field_constants(&spec, FieldStrategy::Star { center: [0.0, 0.0] }, spec.h_sup())
        .ctx("criterion 5 constants")?;
    let (rep, _, _) =
        nodal::fem_nodal_report(&spec, NODAL_TARGET_H, 20, nodal::TAU, Some(&fc)).ctx("criterion 5 nodal report")?;
    ledger.report("fem disk h=-1", &rep);
    let mut csv = String::from("k,mu,component,sign,rayleigh,bound,slack_bound,pass\n");
    let (mut n, mut fails, mut worst) = (0, 0, 0.0_f64);
    for e in &rep.entries {
        for comp in &e.components {
            n += 1;
            fails += usize::from(!comp.pass);
            worst = worst.max(comp.rayleigh / comp.slack_bound);
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                e.k, e.mu, comp.component, comp.sign, comp.rayleigh, comp.bound, comp.slack_bound, comp.pass
            ));
        }
    }
    p.files.push(("c05_nodal_rayleigh.csv".into(), csv));
    Ok(CriterionResult {
        id: 5,
        name: "nodal_rayleigh",
        pass: fails == 0 && n > 0,
        detail: format!(
            "disk h=-1, 20 FEM modes at target_h {NODAL_TARGET_H}, Gamma1={:.6} Gamma2={:.6} H={}: {n} nodal domains, {fails} above (sqrt(mu+2)+2)^2 (1+5 h sqrt(mu)); max ratio {worst:.4}",
            fc.gamma1, fc.gamma2, fc.h
        ),
    })
}

fn robin_neumann_bounds(p: &mut Pass) -> Result<CriterionResult> {
    let k = SHARP_K_MAX;
    let etas: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let neu = spectra::disk_robin_spectrum(1.0, Bc::Robin(0.0), k).ctx("criterion 6 neumann")?.values();
    let mut csv = String::from("h,eig_checks,eig_violations,eig_min_margin,count_checks,count_violations,count_min_slack\n");
    let mut total_viol = 0;
    for h in [-2.0, -1.0, -0.5] {
        let spec = unit_disk(BoundaryData::Constant(h));
        let fc = geometry::field_constants(&spec, FieldStrategy::Star { center: [0.0, 0.0] }, spec.h_sup())
            .ctx("criterion 6 constants")?;
        let rob = spectra::disk_robin_spectrum(1.0, Bc::Robin(h), k).ctx("criterion 6 robin")?.values();
        let (mut ev, mut emargin, mut en) = (0, f64::INFINITY, 0);
        for i in 0..k {
            for &eta in &etas {
                let lb = bounds::robin_eig_lower(neu[i], eta, fc.k1, fc.k2, fc.h).ctx("criterion 6")?;
                en += 1;
                emargin = emargin.min(rob[i] - lb);
                if rob[i] < lb - ROUNDOFF * lb.abs().max(1.0) {
                    ev += 1;
                }
            }
        }
        // Counting bound on 50 points up to the k-th Robin eigenvalue.
        let mu_top = rob[k - 1];
        let robin_all = spectra::disk_spectrum_below(1.0, Bc::Robin(h), mu_top).ctx("criterion 6 robin below")?;
        let arg_top = bounds::robin_count_argument(mu_top, 0.9, fc.k1, fc.k2, fc.h).ctx("criterion 6")?;
        let neu_all = spectra::disk_spectrum_below(1.0, Bc::Robin(0.0), arg_top * 1.001 + 1.0).ctx("criterion 6 neumann below")?;
        let (mut cv, mut cslack, mut cn) = (0, i64::MAX, 0);
        for j in 0..50 {
            let mu = rob[0] + (mu_top - rob[0]) * (j as f64 + 0.5) / 50.0;
            let exact = spectra::counting_function(&robin_all, mu).ctx("criterion 6")? as i64;
            for &eta in &etas {
                let up = bounds::robin_count_upper(mu, eta, fc.k1, fc.k2, fc.h, bounds::counting_evaluator(&neu_all))
                    .ctx("criterion 6")? as i64;
                cn += 1;
                cslack = cslack.min(up - exact);
                if up < exact {
                    cv += 1;
                }
            }
        }
        total_viol += ev + cv;
        csv.push_str(&format!("{h},{en},{ev},{emargin},{cn},{cv},{cslack}\n"));
    }
    p.files.push(("c06_robin_neumann_bounds.csv".into(), csv));
    Ok(CriterionResult {
        id: 6,
        name: "robin_neumann_bounds",
        pass: total_viol == 0,
        detail: format!(
            "disk, h in {{-2,-1,-0.5}}, k <= {k}, eta in 0.1..0.9, 50-point mu grid: {total_viol} violations"
        ),
    })
}

fn neumann_count_bounds(p: &mut Pass) -> Result<CriterionResult> {
    let spec = unit_disk(BoundaryData::Constant(0.0));
    let g = geometry::summarize(&spec).ctx("criterion 7")?;
    let neu = spectra::disk_spectrum_below(1.0, Bc::Robin(0.0), 510.0).ctx("criterion 7 spectrum")?;
    let mut csv = String::from("mu,exact,convex,convex_c2\n");
    let mut viol = 0;
    let both = |mu: f64| -> Result<(f64, f64, f64)> {
        let exact = spectra::counting_function(&neu, mu).ctx("criterion 7")? as f64;
        let b1 = bounds::neumann_count_convex(mu, &spec).ctx("criterion 7")?;
        let b2 = bounds::neumann_count_convex_c2(mu, g.area, g.perimeter, g.kappa_max, 2).ctx("criterion 7")?;
        Ok((exact, b1, b2))
    };
    for i in 0..100 {
        let mu = 500f64.powf(i as f64 / 99.0);
        let (e, b1, b2) = both(mu)?;
        viol += usize::from(b1 < e) + usize::from(b2 < e);
        csv.push_str(&format!("{mu},{e},{b1},{b2}\n"));
    }
    let (e, b1, b2) = both(100.0)?;
    p.files.push(("c07_neumann_count.csv".into(), csv));
    Ok(CriterionResult {
        id: 7,
        name: "neumann_count_bounds",
        pass: viol == 0 && (b1 - b2).abs() < 0.5 && b1 >= e && b2 >= e,
        detail: format!(
            "unit disk, 100 log-spaced mu in [1, 500]: {viol} violations; mu=100: exact {e}, Steiner {b1:.4}, curvature {b2:.4}"
        ),
    })
}

fn scale_invariance(tol: f64) -> Result<CriterionResult> {
    let domains = [
        unit_disk(BoundaryData::Constant(1.0)),
        DomainSpec::smoothed_polygon(vec![[-1.0, -0.6], [1.2, -0.6], [0.3, 1.0]], 0.15, BoundaryData::Constant(0.5)),
    ];
    let mut worst = 0.0_f64;
    for d in &domains {
        let hs = d.h_sup();
        let eig = |s: &DomainSpec, t: f64| {
            let g = geometry::summarize(s)?;
            bounds::cs_eig_bound(g.area, g.delta1, g.rho, hs / t, g.n, 1.0)
        };
        let cnt = |s: &DomainSpec, t: f64| {
            let g = geometry::summarize(s)?;
            let tp = g.t_plus.ok_or_else(|| robinlab::Error::Unavailable("t_plus".into()))?;
            bounds::cs_count_bound(g.area, tp, g.rho, hs / t, g.n, 1.0)
        };
        worst = worst.max(bounds::scale_deviation(d, -2, eig).ctx("criterion 8")?);
        worst = worst.max(bounds::scale_deviation(d, 0, cnt).ctx("criterion 8")?);
    }
    Ok(CriterionResult {
        id: 8,
        name: "scale_invariance",
        pass: worst < tol,
        detail: format!(
            "cs_eig_bound ~ t^-2 and cs_count_bound invariant under (t Omega, h/t), t in {:?}, disk and smoothed triangle: max relative deviation {worst:.3e} (limit {tol:e})",
            bounds::SCALES
        ),
    })
}

fn isoperimetric_corpus(p: &mut Pass, cfg: &RunConfig) -> Result<CriterionResult> {
    let omega = unit_disk(BoundaryData::Constant(0.0));
    let run = corpus::run(&omega, cfg.eps, cfg.c1, cfg.corpus_size, cfg.seed)?;
    let half = commands::half_disk_probe(&omega, &run)?.expect("disk domain");
    p.files.push(("c09_corpus.csv".into(), run.to_csv()));
    let ok = run.applicable() == run.rows.len() && run.all_pass() && !half.applicable;
    Ok(CriterionResult {
        id: 9,
        name: "isoperimetric_corpus",
        pass: ok,
        detail: format!(
            "{} sets (seed {}), eps {}, C1 {}: {} applicable, {} pass; largest passing C1 {:.4e}; boundary half-disk r=0.6 t0: applicable={} (layer fraction {:.3} > beta {:.4}), raw ratio {:.4}",
            run.rows.len(),
            cfg.seed,
            cfg.eps,
            cfg.c1,
            run.applicable(),
            run.rows.iter().filter(|(_, r)| r.pass == Some(true)).count(),
            run.max_c1(),
            half.applicable,
            half.layer_fraction,
            run.params.beta,
            half.raw_ratio
        ),
    })
}

fn mixed_faber_krahn(p: &mut Pass, interior_frac: f64, half_tol: f64) -> Result<CriterionResult> {
    let fk = bounds::universal_constants(2).ctx("criterion 10")?.fk_product;
    let mesh = fem::mesh::disk_mesh(1.0, [0.0, 0.0], MIXED_TARGET_H);
    let mut csv = String::from("subset,center_x,center_y,radius,lambda,area,product,ratio_to_fk\n");
    let mut rows = Vec::new();
    let cases = [("interior", [0.2, -0.1], 0.05), ("interior", [0.2, -0.1], 0.1), ("boundary_half", [1.0, 0.0], 0.1)];
    for (name, c, r) in cases {
        let sub = mixed::select_triangles(&mesh, |q| dist(q, c) < r);
        let res = mixed::mixed_dn_eigenvalue(&mesh, &sub).ctx("criterion 10 mixed eigenvalue")?;
        let prod = res.lambda * res.area;
        csv.push_str(&format!("{name},{},{},{r},{},{},{prod},{}\n", c[0], c[1], res.lambda, res.area, prod / fk));
        rows.push((name, r, prod / fk));
    }
    p.files.push(("c10_mixed.csv".into(), csv));
    let interior_ok = rows.iter().filter(|r| r.0 == "interior").all(|r| r.2 >= interior_frac);
    let half = rows.iter().find(|r| r.0 == "boundary_half").map_or(f64::NAN, |r| r.2);
    let half_ok = (half / 0.5 - 1.0).abs() <= half_tol;
    Ok(CriterionResult {
        id: 10,
        name: "mixed_faber_krahn",
        pass: interior_ok && half_ok,
        detail: format!(
            "lambda|U|/fk (fk = {fk:.4}) for interior disks r=0.05, 0.1: {:.4}, {:.4} (need >= {interior_frac}); boundary half-disk r=0.1: {half:.4} (need 0.5 within {}%)",
            rows[0].2,
            rows[1].2,
            half_tol * 100.0
        ),
    })
}

fn polya_szego(p: &mut Pass) -> Result<CriterionResult> {
    let mut fails = Vec::new();
    let mut files = Vec::new();
    for (name, spec) in [("square", unit_square(BoundaryData::Dirichlet)), ("disk", unit_disk(BoundaryData::Dirichlet))] {
        let rows = commands::polya_szego_rows(&spec, FEM_TARGET_H, 10)?;
        for (k, _, r) in &rows {
            if !r.pass {
                fails.push(format!("{name} k={k}"));
            }
        }
        files.push((format!("c11_polya_szego_{name}.csv"), commands::polya_szego_csv(&rows)));
    }
    // Radial decreasing input: u* = u, so the energies agree up to the grid.
    let m = fem::mesh::mesh(&unit_disk(BoundaryData::Dirichlet), FEM_TARGET_H).ctx("criterion 11 mesh")?;
    let u: Vec<f64> = m.vertices.iter().map(|q| 1.0 - q[0] * q[0] - q[1] * q[1]).collect();
    let u: Vec<f64> = u.iter().map(|x| x.max(0.0)).collect();
    let mut radial = String::from("level,lhs_energy,rhs_energy,grid_term,relative_gap\n");
    let mut radial_worst = 0.0_f64;
    let mut radial_ok = true;
    for s in [1.0_f64, 0.5] {
        let smax = u.iter().cloned().fold(0.0, f64::max);
        let r = asymmetry::polya_szego_check(&m, &u, s.min(smax)).ctx("criterion 11 radial")?;
        let gap = (r.lhs_energy - r.rhs_energy).abs();
        radial_worst = radial_worst.max(gap / r.lhs_energy);
        radial_ok &= gap <= r.grid_term + 0.01 * r.lhs_energy;
        radial.push_str(&format!("{s},{},{},{},{}\n", r.lhs_energy, r.rhs_energy, r.grid_term, gap / r.lhs_energy));
    }
    files.push(("c11_polya_szego_radial.csv".into(), radial));
    p.files.extend(files);
    Ok(CriterionResult {
        id: 11,
        name: "polya_szego",
        pass: fails.is_empty() && radial_ok,
        detail: format!(
            "10 Dirichlet FEM eigenfunctions each on square and disk at s = max|u|: failures [{}]; radial 1-r^2 at s in {{1, 0.5}}: max relative gap {radial_worst:.3e} (limit 1% + grid term)",
            fails.join(", ")
        ),
    })
}

fn weyl(p: &mut Pass, band: f64) -> Result<CriterionResult> {
    let mut csv = String::from("h,mu,count,ratio\n");
    // (count, ratio) at every extreme of the ratio over N(μ) >= WEYL_MIN_COUNT.
    let mut extremes: Vec<(usize, f64)> = Vec::new();
    for h in [-1.0, 0.0, 1.0] {
        let s = spectra::disk_spectrum_below(1.0, Bc::Robin(h), WEYL_MU_MAX).ctx("criterion 12 spectrum")?;
        let v = s.values();
        // N(μ)·4π²/(ω₂|Ω|μ) = 4N(μ)/μ on the unit disk. N is constant between
        // eigenvalues, so the ratio's extremes sit just after and just before
        // each jump: 4·#{λ ≤ λ_j}/λ_j and 4·#{λ < λ_j}/λ_j.
        let mut j = 0;
        while j < v.len() {
            let mut e = j;
            while e + 1 < v.len() && v[e + 1] == v[j] {
                e += 1;
            }
            let (mu, before, after) = (v[j], j, e + 1);
            if after >= WEYL_MIN_COUNT && mu > 0.0 {
                let r_after = 4.0 * after as f64 / mu;
                extremes.push((after, r_after));
                csv.push_str(&format!("{h},{mu},{after},{r_after}\n"));
                if before >= WEYL_MIN_COUNT {
                    extremes.push((before, 4.0 * before as f64 / mu));
                }
            }
            j = e + 1;
        }
        extremes.push((v.len(), 4.0 * v.len() as f64 / WEYL_MU_MAX));
    }
    p.files.push(("c12_weyl.csv".into(), csv));
    let inside = |r: f64| (1.0 - band..=1.0 + band).contains(&r);
    let lo = extremes.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let hi = extremes.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let onset = extremes.iter().filter(|e| !inside(e.1)).map(|e| e.0 + 1).max();
    Ok(CriterionResult {
        id: 12,
        name: "weyl_ratio",
        pass: onset.is_none(),
        detail: format!(
            "disk, h in {{-1,0,1}}, N(mu) >= {WEYL_MIN_COUNT}, mu <= {WEYL_MU_MAX}: exact ratio range [{lo:.4}, {hi:.4}] (band 1 +/- {band}); {}",
            match onset {
                None => "band holds throughout".to_string(),
                Some(n) => format!("band holds only from N(mu) >= {n}"),
            }
        ),
    })
}

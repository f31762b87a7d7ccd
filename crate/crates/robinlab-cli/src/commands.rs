//! One runner per subcommand. Each returns its artifacts and a pass flag.

use crate::config::{Command, RunConfig};
use crate::corpus;
use crate::error::{CliError, Context, Result};
use crate::verify;
use robinlab::asymmetry::{self, PlanarSet};
use robinlab::bounds::{self, Family, Observation};
use robinlab::fem;
use robinlab::geometry::{self, DomainSpec, FieldStrategy, Shape};
use robinlab::nodal::{self, SharpConvention};
use robinlab::spectra;
use std::path::Path;

/// Spectral parameter at which the bounds table is evaluated.
pub const BOUNDS_MU_REF: f64 = 100.0;
/// Rotation grid for two-dimensional square eigenspaces.
pub const ROTATION_STEPS: usize = 64;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Artifacts {
    /// `(file name, contents)`; the first entry is the main table.
    pub files: Vec<(String, String)>,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
    pub pass: bool,
}

impl Artifacts {
    /// Writes every file into `dir`, or prints the main table when `dir` is `None`.
    pub fn emit(&self, dir: Option<&Path>) -> Result<()> {
        match dir {
            Some(d) => {
                std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
                for (name, body) in &self.files {
                    let p = d.join(name);
                    std::fs::write(&p, body).map_err(|e| CliError::io(&p, e))?;
                }
            }
            None => {
                if let Some((_, body)) = self.files.first() {
                    print!("{body}");
                }
            }
        }
        for line in &self.summary {
            eprintln!("{line}");
        }
        Ok(())
    }
}

pub fn run(cfg: &RunConfig) -> Result<Artifacts> {
    match cfg.command {
        Command::Spectrum => spectrum(cfg),
        Command::Nodal => nodal_cmd(cfg),
        Command::Pleijel => pleijel(cfg),
        Command::CourantSharp => courant_sharp(cfg),
        Command::Bounds => bounds_cmd(cfg),
        Command::Isoperimetric => isoperimetric(cfg),
        Command::PolyaSzego => polya_szego(cfg),
        Command::Verify => Ok(verify::verify(cfg)?.artifacts()),
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<Artifacts> {
    let spec = cfg.domain_spec()?;
    let s = if cfg.fem {
        let (_, sol) = fem::fem_spectrum(&spec, cfg.target_h, cfg.count).ctx("fem spectrum")?;
        sol.to_spectrum(Some(spec.clone()), spec.is_dirichlet())
    } else {
        spectra::analytic_spectrum(&spec, cfg.count).ctx("analytic spectrum")?
    };
    Ok(Artifacts {
        files: vec![("spectrum.csv".into(), s.to_csv()), ("spectrum.json".into(), s.to_json())],
        summary: vec![format!("{} eigenvalues, complete below {}", s.total(), s.complete_below)],
        pass: true,
    })
}

fn star_constants(spec: &DomainSpec) -> Result<geometry::FieldConstants> {
    geometry::field_constants(spec, FieldStrategy::Star { center: spec.center() }, spec.h_sup()).ctx("field constants")
}

pub fn nodal_cmd(cfg: &RunConfig) -> Result<Artifacts> {
    let spec = cfg.domain_spec()?;
    let constants = if spec.is_dirichlet() { None } else { Some(star_constants(&spec)?) };
    let (rep, _, _) =
        nodal::fem_nodal_report(&spec, cfg.target_h, cfg.count, nodal::TAU, constants.as_ref()).ctx("nodal report")?;
    let violations = rep.courant_violations();
    let rayleigh_fail = rep.entries.iter().flat_map(|e| &e.components).filter(|c| !c.pass).count();
    Ok(Artifacts {
        files: vec![
            ("nodal.csv".into(), rep.to_csv()),
            ("nodal.json".into(), rep.to_json()),
            ("nodal_plot.csv".into(), rep.plot_csv()),
        ],
        summary: vec![
            format!("Courant violations: {violations:?}"),
            format!("nodal Rayleigh failures: {rayleigh_fail}"),
        ],
        pass: violations.is_empty() && rayleigh_fail == 0,
    })
}

fn clusters_for(spec: &DomainSpec, k_max: usize, rotation: bool) -> Result<Vec<nodal::Cluster>> {
    let s = spectra::analytic_spectrum(spec, k_max).ctx("analytic spectrum")?;
    nodal::analytic_clusters(&s, k_max, rotation.then_some(ROTATION_STEPS)).ctx("nodal clusters")
}

pub fn pleijel(cfg: &RunConfig) -> Result<Artifacts> {
    let spec = cfg.domain_spec()?;
    let cl = clusters_for(&spec, cfg.k_max, false)?;
    let series = nodal::pleijel_series(&cl, cfg.k_max).ctx("pleijel series")?;
    let gamma = bounds::universal_constants(2).ctx("universal constants")?.gamma_n;
    let mut csv = String::from("k,ratio\n");
    for (k, r) in &series.ratios {
        csv.push_str(&format!("{k},{r}\n"));
    }
    csv.push_str(&format!("gamma_n,{gamma}\n"));
    let violations = nodal::courant_violations(&cl);
    Ok(Artifacts {
        files: vec![("pleijel.csv".into(), csv)],
        summary: vec![format!(
            "tail max over [{}, {}] = {} at k = {}; gamma(2) = {gamma}",
            (cfg.k_max / 2).max(1),
            cfg.k_max,
            series.tail_max,
            series.tail_argmax
        )],
        pass: series.tail_max < gamma && violations.is_empty(),
    })
}

fn is_square(spec: &DomainSpec) -> bool {
    matches!(spec.shape, Shape::Rectangle { a, b } if a == b)
}

pub fn clusters_csv(cl: &[nodal::Cluster]) -> String {
    let mut s = String::from("first,len,mu,counts,canonical_only\n");
    for c in cl {
        let counts: Vec<String> = c.counts.iter().map(|n| n.to_string()).collect();
        s.push_str(&format!("{},{},{},{},{}\n", c.first, c.len, c.mu, counts.join(" "), c.canonical_only));
    }
    s
}

pub fn courant_sharp(cfg: &RunConfig) -> Result<Artifacts> {
    let spec = cfg.domain_spec()?;
    let rotation = spec.is_dirichlet() && is_square(&spec);
    let cl = clusters_for(&spec, cfg.k_max, rotation)?;
    let first = nodal::courant_sharp_scan(&cl, SharpConvention::FirstIndex).ctx("sharp scan")?;
    let any = nodal::courant_sharp_scan(&cl, SharpConvention::AnyIndex).ctx("sharp scan")?;
    let violations = nodal::courant_violations(&cl);
    let mut summary = vec![
        format!("Courant-sharp (first index): {first:?}"),
        format!("Courant-sharp (any index in cluster): {any:?}"),
        format!("canonical-only clusters: {}", cl.iter().filter(|c| c.canonical_only).count()),
    ];
    let mut table = String::from("quantity,value\n");
    table.push_str(&format!("largest_sharp,{}\n", first.last().copied().unwrap_or(0)));
    let g = geometry::summarize(&spec).ctx("summary")?;
    match (spec.is_dirichlet(), g.t_plus, first.last()) {
        (false, Some(tp), Some(&k)) => {
            let h = spec.h_sup();
            let mu_k = cl.iter().find(|c| c.first == k).map(|c| c.mu).unwrap_or(f64::NAN);
            let cc = bounds::cs_count_bound(g.area, tp, g.rho, h, g.n, cfg.cs_constant).ctx("count bound")?;
            let ce = bounds::cs_eig_bound(g.area, g.delta1, g.rho, h, g.n, cfg.cs_constant).ctx("eigenvalue bound")?;
            let obs = |delta, required| Observation { area: g.area, delta, rho: g.rho, h, n: g.n, required };
            let c_count = bounds::calibrate_constant(&[obs(tp, k as f64)], Family::CsCount).ctx("calibration")?;
            let c_eig = bounds::calibrate_constant(&[obs(g.delta1, mu_k)], Family::CsEig).ctx("calibration")?;
            table.push_str(&format!("cs_count_bound,{cc}\ncs_eig_bound,{ce}\nmu_largest_sharp,{mu_k}\n"));
            table.push_str(&format!("calibrated_c_count,{}\ncalibrated_c_eig,{}\n", c_count.c, c_eig.c));
            summary.push(format!("count bound {cc} vs largest sharp index {k} (C = {})", cfg.cs_constant));
        }
        _ => summary.push("bound comparison not applicable (Dirichlet or non-C² boundary)".into()),
    }
    Ok(Artifacts {
        files: vec![("courant_sharp.csv".into(), table), ("clusters.csv".into(), clusters_csv(&cl))],
        summary,
        pass: violations.is_empty(),
    })
}

pub fn bounds_csv(rows: &[bounds::BoundReport]) -> String {
    let mut s = String::from("name,value,scale_check,inputs,notes\n");
    for r in rows {
        let sc = r.scale_check.map_or(String::new(), |x| format!("{x:e}"));
        s.push_str(&format!("{},{},{},\"{}\",\"{}\"\n", r.name, r.value, sc, r.inputs, r.notes));
    }
    s
}

pub fn bounds_cmd(cfg: &RunConfig) -> Result<Artifacts> {
    let spec = cfg.domain_spec()?;
    let rows = bounds::bounds_table(&spec, BOUNDS_MU_REF, cfg.cs_constant).ctx("bounds table")?;
    let worst = rows.iter().filter_map(|r| r.scale_check).fold(0.0, f64::max);
    Ok(Artifacts {
        files: vec![("bounds.csv".into(), bounds_csv(&rows))],
        summary: vec![format!("{} rows, worst scale check {worst:e}", rows.len())],
        pass: worst < cfg.tolerances.scale,
    })
}

/// The boundary cap `B(p, r) ∩ Ω` with `r = 0.6·t₀`, for a disk `Ω`.
pub fn half_disk_probe(spec: &DomainSpec, run: &corpus::CorpusRun) -> Result<Option<asymmetry::IsoReport>> {
    let Shape::Disk { radius } = spec.shape else { return Ok(None) };
    let base = spec.clone().with_offset([0.0, 0.0]);
    let cap = PlanarSet::boundary_cap(radius, 0.0, 0.6 * run.layer.t0, 256).ctx("boundary cap")?;
    let rep = asymmetry::isoperimetric_check(&cap, &base, &run.layer, &run.params, corpus::CANDIDATES)
        .ctx("half-disk check")?;
    Ok(Some(rep))
}

pub fn isoperimetric(cfg: &RunConfig) -> Result<Artifacts> {
    let spec = cfg.domain_spec()?;
    let run = corpus::run(&spec, cfg.eps, cfg.c1, cfg.corpus_size, cfg.seed)?;
    let mut summary = vec![
        format!("layer t0 = {}, alpha = {}, beta = {}", run.layer.t0, run.params.alpha, run.params.beta),
        format!("{} of {} sets applicable; largest passing C1 = {}", run.applicable(), run.rows.len(), run.max_c1()),
    ];
    let mut files = vec![("isoperimetric.csv".into(), run.to_csv())];
    if let Some(h) = half_disk_probe(&spec.clone().with_offset([0.0, 0.0]), &run)? {
        summary.push(format!(
            "boundary half-disk: applicable = {}, layer fraction = {}, raw ratio = {}",
            h.applicable, h.layer_fraction, h.raw_ratio
        ));
        files.push(("half_disk.json".into(), serde_json::to_string_pretty(&h).expect("report serialises")));
    }
    Ok(Artifacts { files, summary, pass: run.all_pass() && run.applicable() == run.rows.len() })
}

pub fn polya_szego_csv(rows: &[(usize, f64, asymmetry::PolyaSzego)]) -> String {
    let mut s = String::from("k,mu,lhs_energy,rhs_energy,grid_term,tolerance,pass,flat_elements\n");
    for (k, mu, p) in rows {
        s.push_str(&format!(
            "{k},{mu},{},{},{},{},{},{}\n",
            p.lhs_energy, p.rhs_energy, p.grid_term, p.tolerance, p.pass, p.flat_elements
        ));
    }
    s
}

/// Pólya–Szegő comparison at `s = max|u|` for the first `count` eigenfunctions.
pub fn polya_szego_rows(spec: &DomainSpec, target_h: f64, count: usize) -> Result<Vec<(usize, f64, asymmetry::PolyaSzego)>> {
    let (m, sol) = fem::fem_spectrum(spec, target_h, count).ctx("fem spectrum")?;
    let mut rows = Vec::with_capacity(count);
    for k in 0..count {
        let u: Vec<f64> = sol.vectors[k].iter().map(|x| x.abs()).collect();
        let s = u.iter().cloned().fold(0.0, f64::max);
        let p = asymmetry::polya_szego_check(&m, &u, s).ctx(&format!("Pólya–Szegő check k = {}", k + 1))?;
        rows.push((k + 1, sol.values[k], p));
    }
    Ok(rows)
}

pub fn polya_szego(cfg: &RunConfig) -> Result<Artifacts> {
    // Rearrangement compares functions vanishing on ∂Ω, so the mode is ignored.
    let spec = cfg.domain_spec()?.with_h(geometry::BoundaryData::Dirichlet);
    let rows = polya_szego_rows(&spec, cfg.target_h, cfg.count)?;
    let fails = rows.iter().filter(|r| !r.2.pass).count();
    Ok(Artifacts {
        files: vec![("polya_szego.csv".into(), polya_szego_csv(&rows))],
        summary: vec![format!("{} eigenfunctions, {fails} failures", rows.len())],
        pass: fails == 0,
    })
}

//! Seeded corpus of small interior sets for the isoperimetric check.

use crate::error::{Context, Result};
use robinlab::asymmetry::{self, BoundaryLayer, IsoParams, IsoReport, PlanarSet};
use robinlab::geometry::DomainSpec;
use robinlab::polygon::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const ELLIPSE_SAMPLES: usize = 96;
/// Candidates `U_s` used for the modified asymmetry.
pub const CANDIDATES: usize = 4;

#[derive(Clone, Debug)]
pub struct CorpusSet {
    pub id: usize,
    pub kind: &'static str,
    pub set: PlanarSet,
}

fn ellipse_loop(c: Point, a: f64, b: f64, ang: f64) -> Vec<Point> {
    let (ca, sa) = (ang.cos(), ang.sin());
    (0..ELLIPSE_SAMPLES)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / ELLIPSE_SAMPLES as f64;
            let (x, y) = (a * t.cos(), b * t.sin());
            [c[0] + ca * x - sa * y, c[1] + sa * x + ca * y]
        })
        .collect()
}

/// Uniform point of the bounding box whose distance to `∂Ω` exceeds `clearance`.
fn interior_center(rng: &mut ChaCha8Rng, omega: &DomainSpec, clearance: f64) -> Point {
    let g = robinlab::geometry::summarize(omega).expect("validated domain");
    let c = omega.center();
    let half = 0.5 * g.diameter;
    loop {
        let p = [c[0] + rng.gen_range(-half..half), c[1] + rng.gen_range(-half..half)];
        if omega.contains(p) && omega.boundary_distance(p) > clearance {
            return p;
        }
    }
}

/// `n` sets cycling through ellipses, rectangles and unions of two ellipses,
/// each of area at most `max_area` and placed at distance more than `t0`
/// from the boundary, so the layer gate holds with zero layer mass.
pub fn generate(omega: &DomainSpec, t0: f64, max_area: f64, n: usize, seed: u64) -> Result<Vec<CorpusSet>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for id in 0..n {
        let area = max_area * rng.gen_range(0.2..0.9);
        let q: f64 = rng.gen_range(1.0..4.0);
        let ang: f64 = rng.gen_range(0.0..PI);
        let (kind, set) = match id % 3 {
            0 => {
                let b = (area / (PI * q)).sqrt();
                let c = interior_center(&mut rng, omega, t0 + q * b);
                ("ellipse", PlanarSet::polygon(vec![ellipse_loop(c, q * b, b, ang)]))
            }
            1 => {
                let w = (area * q).sqrt();
                let h = area / w;
                let c = interior_center(&mut rng, omega, t0 + 0.5 * w.hypot(h));
                ("rectangle", PlanarSet::rectangle(c, w, h, ang))
            }
            _ => {
                let q2: f64 = rng.gen_range(1.0..2.0);
                let b = (0.5 * area / (PI * q2)).sqrt();
                let gap = rng.gen_range(0.2..2.0) * b;
                let d = q2 * b + 0.5 * gap;
                let c = interior_center(&mut rng, omega, t0 + 2.0 * d);
                let (dx, dy) = (d * ang.cos(), d * ang.sin());
                let tilt: f64 = rng.gen_range(0.0..PI);
                let l1 = ellipse_loop([c[0] + dx, c[1] + dy], q2 * b, b, tilt);
                let l2 = ellipse_loop([c[0] - dx, c[1] - dy], q2 * b, b, PI - tilt);
                ("two_blobs", PlanarSet::polygon(vec![l1, l2]))
            }
        };
        out.push(CorpusSet { id, kind, set: set.ctx("corpus set")?.with_ambient(omega.clone()) });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CorpusRun {
    pub layer: BoundaryLayer,
    pub params: IsoParams,
    pub rows: Vec<(CorpusSet, IsoReport)>,
}

impl CorpusRun {
    pub fn applicable(&self) -> usize {
        self.rows.iter().filter(|(_, r)| r.applicable).count()
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|(_, r)| r.pass == Some(true))
    }

    /// Largest `C₁` for which every set still passes.
    pub fn max_c1(&self) -> f64 {
        self.rows.iter().filter_map(|(_, r)| r.max_c1).fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,kind,volume,layer_fraction,lhs,raw_ratio,a_tilde_upper,rhs,pass,max_c1\n");
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x}"));
        for (c, r) in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                c.id,
                c.kind,
                r.volume,
                r.layer_fraction,
                r.lhs,
                r.raw_ratio,
                opt(r.a_tilde_upper),
                opt(r.rhs),
                r.pass.map_or(String::new(), |p| p.to_string()),
                opt(r.max_c1)
            ));
        }
        s
    }
}

/// Layer with `|Ω_δ| < |Ω|/2`; sets up to 90% of the gate volume `α`.
pub fn run(omega: &DomainSpec, eps: f64, c1: f64, n: usize, seed: u64) -> Result<CorpusRun> {
    let area = robinlab::geometry::summarize(omega).ctx("corpus domain")?.area;
    let layer = BoundaryLayer::new(omega, 0.5 * area).ctx("boundary layer")?;
    let params = IsoParams::from_layer(eps, &layer, c1).ctx("isoperimetric parameters")?;
    let sets = generate(omega, layer.t0, params.alpha, n, seed)?;
    let mut rows = Vec::with_capacity(n);
    for c in sets {
        let r = asymmetry::isoperimetric_check(&c.set, omega, &layer, &params, CANDIDATES)
            .ctx(&format!("isoperimetric check of corpus set {}", c.id))?;
        rows.push((c, r));
    }
    Ok(CorpusRun { layer, params, rows })
}

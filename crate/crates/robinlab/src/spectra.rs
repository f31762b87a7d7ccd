//! Analytic Robin, Neumann and Dirichlet spectra of intervals, rectangles and
//! disks, counting functions and the Weyl remainder.
//!
//! Every secular equation is solved by scanning a grid for sign changes and
//! bisecting. The grid is accepted only if halving its resolution finds the
//! same number of sign changes; otherwise it is refined, and a persistent
//! disagreement is an error rather than a silently skipped root.

use crate::error::{Error, Result};
use crate::geometry::{BoundaryData, DomainSpec, Shape};
use crate::special::{self, bisect};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Boundary condition for analytic spectra.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Bc {
    Robin(f64),
    Dirichlet,
}

impl Bc {
    pub fn from_boundary(data: &BoundaryData) -> Result<Bc> {
        match data {
            BoundaryData::Constant(h) => Ok(Bc::Robin(*h)),
            BoundaryData::Dirichlet => Ok(Bc::Dirichlet),
            BoundaryData::Segments(v) => {
                if !v.is_empty() && v.iter().all(|x| *x == v[0]) {
                    Ok(Bc::Robin(v[0]))
                } else {
                    Err(Error::InvalidArgument(
                        "piecewise h is not separable; analytic spectra need a constant h".into(),
                    ))
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EigenLabel {
    /// Number of interior zeros for Robin; number of half-waves for Dirichlet.
    Interval { index: usize },
    Rect { i: usize, j: usize },
    /// Angular order `m` and number of interior radial zeros `p`.
    Disk { m: usize, p: usize },
    Fem { index: usize },
}

impl fmt::Display for EigenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EigenLabel::Interval { index } => write!(f, "interval({index})"),
            EigenLabel::Rect { i, j } => write!(f, "rect({i};{j})"),
            EigenLabel::Disk { m, p } => write!(f, "disk({m};{p})"),
            EigenLabel::Fem { index } => write!(f, "fem({index})"),
        }
    }
}

impl FromStr for EigenLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse label '{s}'"));
        let open = s.find('(').ok_or_else(bad)?;
        let name = &s[..open];
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let nums: Vec<usize> = inner
            .split(';')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (name, nums.as_slice()) {
            ("interval", [i]) => Ok(EigenLabel::Interval { index: *i }),
            ("rect", [i, j]) => Ok(EigenLabel::Rect { i: *i, j: *j }),
            ("disk", [m, p]) => Ok(EigenLabel::Disk { m: *m, p: *p }),
            ("fem", [i]) => Ok(EigenLabel::Fem { index: *i }),
            _ => Err(bad()),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Analytic,
    Fem,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct EigenRecord {
    pub mu: f64,
    pub label: EigenLabel,
    pub multiplicity: usize,
    pub source: Source,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub records: Vec<EigenRecord>,
    pub domain: Option<DomainSpec>,
    pub count_requested: usize,
    /// No eigenvalue below this threshold is missing.
    pub complete_below: f64,
    /// Dirichlet mode (affects analytic nodal counts of rectangle labels).
    #[serde(default)]
    pub dirichlet: bool,
}

impl Spectrum {
    fn from_records(
        mut records: Vec<EigenRecord>,
        domain: Option<DomainSpec>,
        count_requested: usize,
        complete_below: f64,
        dirichlet: bool,
    ) -> Spectrum {
        records.retain(|r| r.mu < complete_below);
        records.sort_by(|a, b| a.mu.total_cmp(&b.mu).then(a.label.cmp(&b.label)));
        Spectrum { records, domain, count_requested, complete_below, dirichlet }
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn values(&self) -> Vec<f64> {
        self.records
            .iter()
            .flat_map(|r| std::iter::repeat(r.mu).take(r.multiplicity))
            .collect()
    }

    /// Total multiplicity of the stored records.
    pub fn total(&self) -> usize {
        self.records.iter().map(|r| r.multiplicity).sum()
    }

    /// 1-based index of the first slot of each record.
    pub fn first_indices(&self) -> Vec<usize> {
        let mut k = 1;
        self.records
            .iter()
            .map(|r| {
                let s = k;
                k += r.multiplicity;
                s
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serialises")
    }

    pub fn from_json(s: &str) -> Result<Spectrum> {
        serde_json::from_str(s).map_err(|e| Error::Io(e.to_string()))
    }

    /// CSV with columns `index, mu, label, multiplicity`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "mu", "label", "multiplicity"]).unwrap();
        for (r, k) in self.records.iter().zip(self.first_indices()) {
            w.write_record([
                k.to_string(),
                format!("{}", r.mu),
                r.label.to_string(),
                r.multiplicity.to_string(),
            ])
            .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn records_from_csv(s: &str) -> Result<Vec<EigenRecord>> {
        let mut rd = csv::Reader::from_reader(s.as_bytes());
        let mut out = Vec::new();
        for row in rd.records() {
            let row = row.map_err(|e| Error::Io(e.to_string()))?;
            let parse_err = |what: &str| Error::Io(format!("bad {what} in row {row:?}"));
            let mu: f64 = row[1].parse().map_err(|_| parse_err("mu"))?;
            let label: EigenLabel = row[2].parse()?;
            let multiplicity: usize = row[3].parse().map_err(|_| parse_err("multiplicity"))?;
            let source = if matches!(label, EigenLabel::Fem { .. }) { Source::Fem } else { Source::Analytic };
            out.push(EigenRecord { mu, label, multiplicity, source });
        }
        Ok(out)
    }
}

fn record(mu: f64, label: EigenLabel, multiplicity: usize) -> EigenRecord {
    EigenRecord { mu, label, multiplicity, source: Source::Analytic }
}

/// Sign-change scan of `f` on `[lo, hi]` with certified resolution.
///
/// Returns the brackets of all sign changes. The grid spacing starts at
/// `step` and is halved until the fine grid and its every-other-point
/// subgrid see the same number of sign changes.
fn certified_brackets<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, step: f64, what: &str) -> Result<Vec<(f64, f64)>> {
    if hi <= lo {
        return Ok(Vec::new());
    }
    let mut step = step;
    for _ in 0..8 {
        let n = (((hi - lo) / step).ceil() as usize).max(2);
        let n = n + n % 2;
        let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        if vs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Bracket { lo, hi, what: format!("{what}: non-finite secular value") });
        }
        let fine = sign_changes(&vs);
        let coarse_vals: Vec<f64> = vs.iter().step_by(2).copied().collect();
        if sign_changes(&coarse_vals).len() == fine.len() {
            return Ok(fine.into_iter().map(|i| (xs[i], xs[i + 1])).collect());
        }
        step *= 0.5;
    }
    Err(Error::Bracket { lo, hi, what: format!("{what}: root cluster not resolved by grid refinement") })
}

fn sign_changes(vs: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..vs.len() - 1 {
        let (a, b) = (vs[i], vs[i + 1]);
        // A sample that lands exactly on a root counts once, with the next interval.
        if a == 0.0 {
            continue;
        }
        if b == 0.0 || a.signum() != b.signum() {
            out.push(i);
        }
    }
    out
}

fn refine_roots<F: Fn(f64) -> f64>(f: &F, brackets: &[(f64, f64)], what: &str) -> Result<Vec<f64>> {
    brackets
        .iter()
        .map(|&(a, b)| {
            let fb = f(b);
            let r = if fb == 0.0 { b } else { bisect(f, a, b, what)? };
            let res = f(r).abs();
            // Bisection ends with a bracket of rounding width; allow its slope times that width.
            let width = 4.0 * f64::EPSILON * r.abs().max(1.0);
            let slope = (f(r + width) - f(r - width)).abs() / (2.0 * width);
            if res > 1e-10 && res > 4.0 * slope * width {
                return Err(Error::Bracket { lo: a, hi: b, what: format!("{what}: residual {res:e}") });
            }
            Ok(r)
        })
        .collect()
}

fn approx_zero(x: f64, scale: f64) -> bool {
    x.abs() <= 1e-12 * scale.max(1.0)
}

/// Robin eigenvalues of `-u'' = μu` on `(0, L)` strictly below `mu_max`,
/// returned with their Sturm index (number of interior zeros).
pub fn interval_robin_below(l: f64, h0: f64, h1: f64, mu_max: f64) -> Result<Vec<(f64, usize)>> {
    if !(l > 0.0) {
        return Err(Error::InvalidArgument("interval length must be positive".into()));
    }
    let mut mus = Vec::new();
    // Negative branch μ = -κ²: (h0 h1 + κ²) tanh(κL) + κ(h0 + h1) = 0.
    if h0 < 0.0 || h1 < 0.0 {
        let g = |k: f64| {
            let v = (h0 * h1 + k * k) * (k * l).tanh() + k * (h0 + h1);
            v / (k * k + (h0 * h1).abs() + k * (h0.abs() + h1.abs()) + 1e-300)
        };
        let s = h0.abs() + h1.abs();
        let kmax = 2.0 * s + 2.0 * (s / l).sqrt() + 1.0;
        let lo = 1e-9 / l;
        let br = certified_brackets(&g, lo, kmax, kmax / 4000.0, "interval negative branch")?;
        for k in refine_roots(&g, &br, "interval negative branch")? {
            mus.push(-k * k);
        }
    }
    let c1 = h0 + h1 + h0 * h1 * l;
    if approx_zero(c1, h0.abs() + h1.abs() + (h0 * h1).abs() * l) {
        mus.push(0.0);
    }
    if mu_max > 0.0 {
        let f = |w: f64| {
            let v = (h0 * h1 - w * w) * (w * l).sin() + w * (h0 + h1) * (w * l).cos();
            v / (w * w + (h0 * h1).abs() + w * (h0.abs() + h1.abs()) + 1e-300)
        };
        let wmax = mu_max.sqrt();
        let br = certified_brackets(&f, 1e-7 / l, wmax, PI / (20.0 * l), "interval positive branch")?;
        for w in refine_roots(&f, &br, "interval positive branch")? {
            mus.push(w * w);
        }
    }
    mus.sort_by(f64::total_cmp);
    Ok(mus.into_iter().filter(|m| *m < mu_max).enumerate().map(|(i, m)| (m, i)).collect())
}

/// Dirichlet eigenvalues `(nπ/L)²` below `mu_max`, labelled by `n >= 1`.
pub fn interval_dirichlet_below(l: f64, mu_max: f64) -> Vec<(f64, usize)> {
    let mut out = Vec::new();
    let mut n = 1;
    loop {
        let mu = (n as f64 * PI / l).powi(2);
        if mu >= mu_max {
            return out;
        }
        out.push((mu, n));
        n += 1;
    }
}

fn interval_below(l: f64, bc: Bc, mu_max: f64) -> Result<Vec<(f64, usize)>> {
    match bc {
        Bc::Robin(h) => interval_robin_below(l, h, h, mu_max),
        Bc::Dirichlet => Ok(interval_dirichlet_below(l, mu_max)),
    }
}

fn interval_first(l: f64, bc: Bc) -> Result<f64> {
    let mut mu_max = (PI / l).powi(2) * 1.5;
    loop {
        let v = interval_below(l, bc, mu_max)?;
        if let Some(first) = v.first() {
            return Ok(first.0);
        }
        mu_max *= 2.0;
    }
}

/// Grow a threshold until `total(threshold) >= count`.
fn grow_until<F: Fn(f64) -> Result<Spectrum>>(start: f64, count: usize, build: F) -> Result<Spectrum> {
    let mut mu_max = start;
    for _ in 0..60 {
        let s = build(mu_max)?;
        if s.total() >= count {
            return Ok(s);
        }
        mu_max = if mu_max > 0.0 { mu_max * 1.3 + 1.0 } else { 1.0 };
    }
    Err(Error::InvalidArgument(format!("could not reach {count} eigenvalues")))
}

pub fn interval_robin_spectrum(l: f64, h0: f64, h1: f64, count: usize) -> Result<Spectrum> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let start = ((count as f64 + 1.0) * PI / l).powi(2);
    grow_until(start, count, |mu_max| {
        let recs = interval_robin_below(l, h0, h1, mu_max)?
            .into_iter()
            .map(|(mu, i)| record(mu, EigenLabel::Interval { index: i }, 1))
            .collect();
        Ok(Spectrum::from_records(recs, None, count, mu_max, false))
    })
}

pub fn interval_dirichlet_spectrum(l: f64, count: usize) -> Result<Spectrum> {
    let mu_max = ((count as f64 + 0.5) * PI / l).powi(2);
    let recs = interval_dirichlet_below(l, mu_max)
        .into_iter()
        .map(|(mu, i)| record(mu, EigenLabel::Interval { index: i }, 1))
        .collect();
    Ok(Spectrum::from_records(recs, None, count, mu_max, true))
}

/// Separable rectangle spectrum complete below `mu_max`.
pub fn rectangle_spectrum_below(a: f64, b: f64, bc: Bc, mu_max: f64) -> Result<Spectrum> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument("rectangle sides must be positive".into()));
    }
    let fa = interval_first(a, bc)?;
    let fb = interval_first(b, bc)?;
    let ea = interval_below(a, bc, mu_max - fb)?;
    let eb = interval_below(b, bc, mu_max - fa)?;
    let mut recs = Vec::new();
    for &(ma, i) in &ea {
        for &(mb, j) in &eb {
            if ma + mb < mu_max {
                recs.push(record(ma + mb, EigenLabel::Rect { i, j }, 1));
            }
        }
    }
    let h = match bc {
        Bc::Robin(h) => BoundaryData::Constant(h),
        Bc::Dirichlet => BoundaryData::Dirichlet,
    };
    Ok(Spectrum::from_records(
        recs,
        Some(DomainSpec::rectangle(a, b, h)),
        0,
        mu_max,
        matches!(bc, Bc::Dirichlet),
    ))
}

pub fn rectangle_spectrum(a: f64, b: f64, bc: Bc, count: usize) -> Result<Spectrum> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let start = 4.0 * PI * count as f64 / (a * b) + 20.0;
    let mut s = grow_until(start, count, |mu| rectangle_spectrum_below(a, b, bc, mu))?;
    s.count_requested = count;
    Ok(s)
}

/// Normalised disk secular function in `k = √μ R`.
fn disk_secular(m: usize, c: Option<f64>, k: f64) -> f64 {
    let (j, jp) = special::bessel_j_and_deriv(m, k);
    let scale = (j * j + jp * jp).sqrt();
    match c {
        None => j / scale,
        Some(c) => (k * jp + c * j) / ((k + c.abs()) * scale),
    }
}

/// Roots of one angular branch, ascending: `(μ R², p)`.
fn disk_branch(m: usize, c: Option<f64>, kmax: f64) -> Result<Vec<f64>> {
    let mf = m as f64;
    let mut out = Vec::new();
    let mut pre_sign = 1.0;
    if let Some(c) = c {
        let s = mf + c;
        if approx_zero(s, c.abs()) {
            out.push(0.0);
            pre_sign = -1.0;
        } else if s < 0.0 {
            // Negative branch: κ I_m'(κ)/I_m(κ) + c = 0, increasing in κ from m.
            let g = |x: f64| special::bessel_i_log_deriv(m, x) + c;
            let mut hi = 1.0;
            while g(hi) < 0.0 {
                hi *= 2.0;
                if hi > 1e8 {
                    return Err(Error::Bracket { lo: 0.0, hi, what: "disk negative branch".into() });
                }
            }
            let k = bisect(g, 0.0, hi, "disk negative branch")?;
            out.push(-k * k);
            pre_sign = -1.0;
        }
        if m == 0 && c == 0.0 {
            pre_sign = -1.0;
        }
    }
    // No positive root lies below m/2 unless |c| is comparable to m.
    let far = match c {
        Some(c) => c >= 0.0 || c.abs() < 0.8 * mf,
        None => true,
    };
    let mut lo = if far { (0.5 * mf).max(1e-3) } else { 1e-3 };
    let f = |k: f64| disk_secular(m, c, k);
    while f(lo).signum() != pre_sign {
        lo *= 0.5;
        if lo < 1e-9 {
            return Err(Error::Bracket { lo, hi: kmax, what: format!("disk branch m={m}: unexpected sign near 0") });
        }
    }
    let br = certified_brackets(&f, lo, kmax, 0.05, &format!("disk branch m={m}"))?;
    for k in refine_roots(&f, &br, "disk branch")? {
        out.push(k * k);
    }
    Ok(out)
}

/// Disk spectrum complete below `mu_max`.
pub fn disk_spectrum_below(r: f64, bc: Bc, mu_max: f64) -> Result<Spectrum> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("disk radius must be positive".into()));
    }
    let c = match bc {
        Bc::Robin(h) => Some(h * r),
        Bc::Dirichlet => None,
    };
    let kmax = if mu_max > 0.0 { mu_max.sqrt() * r } else { 0.0 };
    // Branches with m/2 > kmax and no negative or zero root contribute nothing.
    let mut mmax = (2.0 * kmax).ceil() as usize + 1;
    if let Some(c) = c {
        mmax = mmax.max((-c).ceil().max(0.0) as usize + 1);
    }
    let branches: Vec<Result<Vec<f64>>> = (0..=mmax).into_par_iter().map(|m| disk_branch(m, c, kmax)).collect();
    let mut recs = Vec::new();
    for (m, br) in branches.into_iter().enumerate() {
        for (p, kk) in br?.into_iter().enumerate() {
            let mu = kk / (r * r);
            if mu < mu_max {
                recs.push(record(mu, EigenLabel::Disk { m, p }, if m == 0 { 1 } else { 2 }));
            }
        }
    }
    let h = match bc {
        Bc::Robin(h) => BoundaryData::Constant(h),
        Bc::Dirichlet => BoundaryData::Dirichlet,
    };
    Ok(Spectrum::from_records(
        recs,
        Some(DomainSpec::disk(r, h)),
        0,
        mu_max,
        matches!(bc, Bc::Dirichlet),
    ))
}

pub fn disk_robin_spectrum(r: f64, bc: Bc, count: usize) -> Result<Spectrum> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let start = (4.0 * count as f64 + 8.0 * (count as f64).sqrt() + 20.0) / (r * r);
    let mut s = grow_until(start, count, |mu| disk_spectrum_below(r, bc, mu))?;
    s.count_requested = count;
    Ok(s)
}

/// Analytic spectrum of a disk or rectangle spec, complete below `mu_max`.
pub fn analytic_spectrum_below(spec: &DomainSpec, mu_max: f64) -> Result<Spectrum> {
    spec.validate()?;
    let bc = Bc::from_boundary(&spec.h)?;
    let mut s = match spec.shape {
        Shape::Disk { radius } => disk_spectrum_below(radius, bc, mu_max)?,
        Shape::Rectangle { a, b } => rectangle_spectrum_below(a, b, bc, mu_max)?,
        _ => return Err(Error::Unavailable(format!("no analytic spectrum for {}", spec.kind_name()))),
    };
    s.domain = Some(spec.clone());
    Ok(s)
}

/// Analytic spectrum of a disk or rectangle spec with at least `count` eigenvalues.
pub fn analytic_spectrum(spec: &DomainSpec, count: usize) -> Result<Spectrum> {
    spec.validate()?;
    let bc = Bc::from_boundary(&spec.h)?;
    let mut s = match spec.shape {
        Shape::Disk { radius } => disk_robin_spectrum(radius, bc, count)?,
        Shape::Rectangle { a, b } => rectangle_spectrum(a, b, bc, count)?,
        _ => return Err(Error::Unavailable(format!("no analytic spectrum for {}", spec.kind_name()))),
    };
    s.domain = Some(spec.clone());
    Ok(s)
}

/// `N(μ) = #{k : μ_k < μ}` with multiplicity.
pub fn counting_function(spec: &Spectrum, mu: f64) -> Result<usize> {
    if mu > spec.complete_below {
        return Err(Error::Incomplete { requested: mu, complete_below: spec.complete_below });
    }
    Ok(spec.records.iter().filter(|r| r.mu < mu).map(|r| r.multiplicity).sum())
}

/// Leading Weyl term `ω_n V μ^{n/2} / (2π)^n` for `n = 2`.
pub fn weyl_term(mu: f64, area: f64) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    PI * area * mu / (4.0 * PI * PI)
}

/// `R = ω_n V μ^{n/2}/(2π)^n − N(μ)`.
pub fn weyl_remainder(spec: &Spectrum, mu: f64, area: f64) -> Result<f64> {
    Ok(weyl_term(mu, area) - counting_function(spec, mu)? as f64)
}

/// Number of nodal domains of the canonical separable eigenfunction.
pub fn nodal_count_analytic(label: &EigenLabel, dirichlet: bool) -> Result<usize> {
    match *label {
        EigenLabel::Rect { i, j } => Ok(if dirichlet { i * j } else { (i + 1) * (j + 1) }),
        EigenLabel::Interval { index } => Ok(if dirichlet { index } else { index + 1 }),
        EigenLabel::Disk { m, p } => Ok(if m == 0 { p + 1 } else { 2 * m * (p + 1) }),
        EigenLabel::Fem { .. } => Err(Error::InvalidArgument(
            "FEM labels carry no analytic nodal count; use the nodal module".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn interval_neumann() {
        let s = interval_robin_spectrum(1.0, 0.0, 0.0, 4).unwrap();
        let v = s.values();
        for (k, want) in [0.0, PI * PI, 4.0 * PI * PI, 9.0 * PI * PI].iter().enumerate() {
            assert!(close(v[k], *want, 1e-12), "{} vs {}", v[k], want);
        }
        let s = interval_robin_spectrum(PI, 0.0, 0.0, 2).unwrap();
        assert!(close(s.values()[0], 0.0, 1e-12) && close(s.values()[1], 1.0, 1e-12));
    }

    #[test]
    fn interval_negative_robin() {
        // Oracle: bisection on ω tanh(ω/2) − 1 on (0, 10).
        let (mut a, mut b) = (1e-9_f64, 10.0_f64);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m * (0.5 * m).tanh() - 1.0 < 0.0 {
                a = m
            } else {
                b = m
            }
        }
        let omega = 0.5 * (a + b);
        let s = interval_robin_spectrum(1.0, -1.0, -1.0, 1).unwrap();
        assert!(close(s.values()[0], -omega * omega, 1e-12));
        assert!((s.values()[0] + 2.382).abs() < 1e-3);
    }

    #[test]
    fn rectangle_examples() {
        let s = rectangle_spectrum(1.0, 1.0, Bc::Robin(0.0), 4).unwrap();
        let v = s.values();
        let p2 = PI * PI;
        for (k, want) in [0.0, p2, p2, 2.0 * p2].iter().enumerate() {
            assert!(close(v[k], *want, 1e-12));
        }
        assert_eq!(s.records[3].label, EigenLabel::Rect { i: 1, j: 1 });
        let d = rectangle_spectrum(1.0, 1.0, Bc::Dirichlet, 3).unwrap().values();
        assert!(close(d[0], 2.0 * p2, 1e-12) && close(d[1], 5.0 * p2, 1e-12) && close(d[2], 5.0 * p2, 1e-12));
        let r = rectangle_spectrum(2.0, 1.0, Bc::Robin(0.0), 3).unwrap().values();
        assert!(close(r[1], p2 / 4.0, 1e-12) && close(r[2], p2, 1e-12));
    }

    #[test]
    fn piecewise_h_rejected() {
        assert!(Bc::from_boundary(&BoundaryData::Segments(vec![0.0, 1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn disk_examples() {
        // Oracles by bisection on J_1' on (1, 3) and J_0 on (2, 3).
        let jp11 = bisect(|x| special::bessel_j_and_deriv(1, x).1, 1.0, 3.0, "").unwrap();
        let j0 = bisect(|x| special::bessel_j(0, x), 2.0, 3.0, "").unwrap();
        assert!((jp11 - 1.841_18).abs() < 1e-5 && (j0 - 2.404_83).abs() < 1e-5);
        let s = disk_robin_spectrum(1.0, Bc::Robin(0.0), 2).unwrap();
        assert!(s.records[0].mu.abs() < 1e-14);
        assert!(close(s.records[1].mu, jp11 * jp11, 1e-12) && s.records[1].multiplicity == 2);
        let d = disk_robin_spectrum(1.0, Bc::Dirichlet, 1).unwrap();
        assert!(close(d.records[0].mu, j0 * j0, 1e-12));
        let k1 = bisect(
            |x| {
                let (j, jp) = special::bessel_j_and_deriv(0, x);
                x * jp + j
            },
            0.5,
            2.0,
            "",
        )
        .unwrap();
        let r = disk_robin_spectrum(1.0, Bc::Robin(1.0), 1).unwrap();
        assert!(close(r.records[0].mu, k1 * k1, 1e-12) && (r.records[0].mu - 1.58).abs() < 0.01);
    }

    #[test]
    fn disk_negative_h_has_zero_mode() {
        // h = -1 on the unit disk: r cos θ satisfies ∂_r u = u, so μ = 0 (double).
        let s = disk_robin_spectrum(1.0, Bc::Robin(-1.0), 3).unwrap();
        assert!(s.records[0].mu < 0.0);
        assert_eq!(s.records[1].label, EigenLabel::Disk { m: 1, p: 0 });
        assert_eq!(s.records[1].mu, 0.0);
    }

    #[test]
    fn counting_and_weyl() {
        let neu = rectangle_spectrum(1.0, 1.0, Bc::Robin(0.0), 10).unwrap();
        assert_eq!(counting_function(&neu, 1.0).unwrap(), 1);
        let dir = rectangle_spectrum_below(1.0, 1.0, Bc::Dirichlet, 60.0).unwrap();
        // Lattice oracle: #{i, j >= 1 : π²(i² + j²) < 50}.
        let mut n = 0;
        for i in 1..10 {
            for j in 1..10 {
                if PI * PI * ((i * i + j * j) as f64) < 50.0 {
                    n += 1;
                }
            }
        }
        assert_eq!(counting_function(&dir, 50.0).unwrap(), n);
        assert_eq!(n, 3);
        let r = weyl_remainder(&dir, 50.0, 1.0).unwrap();
        assert!((r - (50.0 / (4.0 * PI) - 3.0)).abs() < 1e-12);
        assert_eq!(counting_function(&dir, dir.records[0].mu).unwrap(), 0);
        assert!(counting_function(&dir, 61.0).is_err());
    }

    #[test]
    fn disk_neumann_weyl_remainder() {
        // Oracle: enumerate squared zeros of J_m' below 100 with the 0 mode.
        let mut n = 1usize;
        for m in 0..12usize {
            let mut prev = special::bessel_j_and_deriv(m, 0.01).1;
            let mut x = 0.01;
            while x < 10.0 {
                let nx = x + 0.001;
                let v = special::bessel_j_and_deriv(m, nx).1;
                if v.signum() != prev.signum() {
                    n += if m == 0 { 1 } else { 2 };
                }
                prev = v;
                x = nx;
            }
        }
        let s = disk_spectrum_below(1.0, Bc::Robin(0.0), 120.0).unwrap();
        assert_eq!(counting_function(&s, 100.0).unwrap(), n);
        let r = weyl_remainder(&s, 100.0, PI).unwrap();
        assert!((r - (25.0 - n as f64)).abs() < 1e-12);
    }

    #[test]
    fn nodal_counts() {
        assert_eq!(nodal_count_analytic(&EigenLabel::Rect { i: 2, j: 1 }, false).unwrap(), 6);
        assert_eq!(nodal_count_analytic(&EigenLabel::Disk { m: 1, p: 0 }, false).unwrap(), 2);
        assert_eq!(nodal_count_analytic(&EigenLabel::Disk { m: 0, p: 1 }, false).unwrap(), 2);
        assert_eq!(nodal_count_analytic(&EigenLabel::Disk { m: 0, p: 0 }, true).unwrap(), 1);
        assert!(nodal_count_analytic(&EigenLabel::Fem { index: 1 }, false).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let s = disk_robin_spectrum(1.0, Bc::Robin(-0.5), 12).unwrap();
        let back = Spectrum::records_from_csv(&s.to_csv()).unwrap();
        assert_eq!(back, s.records);
        let js = Spectrum::from_json(&s.to_json()).unwrap();
        assert_eq!(js, s);
    }
}

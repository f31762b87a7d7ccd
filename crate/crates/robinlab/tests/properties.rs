use proptest::prelude::*;
use robinlab::asymmetry::{self, BoundaryLayer, PlanarSet};
use robinlab::bounds;
use robinlab::fem::mesh;
use robinlab::geometry::{self, BoundaryData, DomainSpec, FieldStrategy};
use robinlab::spectra::{self, Bc};
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Convex polygon from sorted angles on an ellipse.
fn convex_from(angles: &[f64], a: f64, b: f64) -> Vec<[f64; 2]> {
    let mut th: Vec<f64> = angles.to_vec();
    th.sort_by(|x, y| x.total_cmp(y));
    th.dedup_by(|x, y| (*x - *y).abs() < 0.2);
    th.iter().map(|t| [a * t.cos(), b * t.sin()]).collect()
}

fn domain_strategy() -> impl Strategy<Value = DomainSpec> {
    prop_oneof![
        (0.3f64..3.0).prop_map(|r| DomainSpec::disk(r, BoundaryData::default())),
        (0.3f64..3.0, 0.3f64..3.0).prop_map(|(a, b)| DomainSpec::rectangle(a, b, BoundaryData::default())),
        (0.5f64..2.0, 0.5f64..2.0).prop_map(|(a, b)| {
            let v = convex_from(&[0.1, 1.3, 2.4, 3.5, 4.4, 5.6], a, b);
            DomainSpec::convex_polygon(v, BoundaryData::default())
        }),
        (0.05f64..0.2).prop_map(|rc| {
            DomainSpec::smoothed_polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]], rc, BoundaryData::default())
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn summary_scale_covariance(spec in domain_strategy(), t in 0.1f64..10.0) {
        let s = geometry::summarize(&spec).unwrap();
        let st = geometry::summarize(&spec.scaled(t)).unwrap();
        prop_assert!(rel(st.area, t * t * s.area) < 1e-12);
        prop_assert!(rel(st.perimeter, t * s.perimeter) < 1e-12);
        prop_assert!(rel(st.rho, s.rho) < 1e-12);
        if let (Some(a), Some(b)) = (s.t_plus, st.t_plus) {
            prop_assert!(rel(b, t * a) < 1e-12);
        }
    }

    #[test]
    fn steiner_monotone_convex(spec in domain_strategy()) {
        let s = geometry::summarize(&spec).unwrap();
        let ds: Vec<f64> = (0..20).map(|i| 0.1 * i as f64).collect();
        let v: Vec<f64> = ds.iter().map(|&d| geometry::steiner_volume(&spec, d).unwrap()).collect();
        for i in 0..ds.len() {
            prop_assert!(v[i] >= s.area + s.perimeter * ds[i]);
            if i > 0 {
                prop_assert!(v[i] > v[i - 1]);
            }
            if i > 1 {
                prop_assert!(v[i] - 2.0 * v[i - 1] + v[i - 2] >= -1e-12 * v[i]);
            }
        }
    }

    #[test]
    fn star_constants_scaling(spec in domain_strategy(), t in 0.1f64..10.0, h in 0.0f64..2.0) {
        let c = spec.center();
        let f = geometry::field_constants(&spec, FieldStrategy::Star { center: c }, h).unwrap();
        let scaled = spec.scaled(t);
        let ft = geometry::field_constants(&scaled, FieldStrategy::Star { center: scaled.center() }, h / t).unwrap();
        prop_assert!(rel(ft.gamma2, f.gamma2) < 1e-8);
        prop_assert!(rel(ft.gamma1, f.gamma1 / t) < 1e-8);
    }

    #[test]
    fn centred_disk_rayleigh_reduction(mu in 0.0f64..500.0, big_h in 0.0f64..3.0) {
        let spec = DomainSpec::disk(1.0, BoundaryData::Constant(-big_h));
        let f = geometry::field_constants(&spec, FieldStrategy::Star { center: [0.0, 0.0] }, big_h).unwrap();
        let b = bounds::rayleigh_bound(mu, f.gamma1, f.gamma2, f.h).unwrap();
        let expected = ((mu + 2.0 * big_h).sqrt() + 2.0 * big_h).powi(2);
        prop_assert!(rel(b, expected) < 1e-8);
    }

    #[test]
    fn spectrum_scaling(r in 0.3f64..3.0, h in -2.0f64..2.0, t in 0.1f64..10.0) {
        let s = spectra::disk_robin_spectrum(r, Bc::Robin(h), 30).unwrap().values();
        let st = spectra::disk_robin_spectrum(t * r, Bc::Robin(h / t), 30).unwrap().values();
        for (a, b) in s.iter().zip(&st) {
            prop_assert!((b * t * t - a).abs() <= 1e-10 * a.abs().max(1.0), "{} {}", a, b * t * t);
        }
        let q = spectra::rectangle_spectrum(r, 1.3 * r, Bc::Robin(h), 30).unwrap().values();
        let qt = spectra::rectangle_spectrum(t * r, 1.3 * t * r, Bc::Robin(h / t), 30).unwrap().values();
        for (a, b) in q.iter().zip(&qt) {
            prop_assert!((b * t * t - a).abs() <= 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn monotone_in_h(h in -3.0f64..3.0, dh in 0.0f64..2.0) {
        let lo = spectra::disk_robin_spectrum(1.0, Bc::Robin(h), 40).unwrap().values();
        let hi = spectra::disk_robin_spectrum(1.0, Bc::Robin(h + dh), 40).unwrap().values();
        let dir = spectra::disk_robin_spectrum(1.0, Bc::Dirichlet, 40).unwrap().values();
        for k in 0..40 {
            prop_assert!(hi[k] >= lo[k] - 1e-10 * lo[k].abs().max(1.0));
            prop_assert!(dir[k] >= hi[k]);
        }
        let il = spectra::interval_robin_spectrum(1.0, h, h, 20).unwrap().values();
        let ih = spectra::interval_robin_spectrum(1.0, h + dh, h + dh, 20).unwrap().values();
        for k in 0..20 {
            prop_assert!(ih[k] >= il[k] - 1e-10 * il[k].abs().max(1.0));
        }
    }

    #[test]
    fn robin_above_lower_bound(big_h in 0.05f64..2.0, eta in 0.05f64..0.95) {
        let spec = DomainSpec::disk(1.0, BoundaryData::Constant(-big_h));
        let f = geometry::field_constants(&spec, FieldStrategy::Star { center: [0.0, 0.0] }, big_h).unwrap();
        let rob = spectra::disk_robin_spectrum(1.0, Bc::Robin(-big_h), 60).unwrap().values();
        let neu = spectra::disk_robin_spectrum(1.0, Bc::Robin(0.0), 60).unwrap().values();
        for k in 0..60 {
            let lb = bounds::robin_eig_lower(neu[k], eta, f.k1, f.k2, f.h).unwrap();
            prop_assert!(rob[k] >= lb, "k={} robin={} lb={}", k, rob[k], lb);
        }
    }

    #[test]
    fn cs_bound_scaling(spec in domain_strategy(), t in 0.1f64..10.0, h in 0.0f64..2.0) {
        let s = geometry::summarize(&spec).unwrap();
        let st = geometry::summarize(&spec.scaled(t)).unwrap();
        let e = bounds::cs_eig_bound(s.area, s.delta1, s.rho, h, 2, 1.0).unwrap();
        let et = bounds::cs_eig_bound(st.area, st.delta1, st.rho, h / t, 2, 1.0).unwrap();
        prop_assert!(rel(et, e / (t * t)) < 1e-10);
        let tp = s.t_plus.unwrap_or(s.delta0);
        let tpt = st.t_plus.unwrap_or(st.delta0);
        let c = bounds::cs_count_bound(s.area, tp, s.rho, h, 2, 1.0).unwrap();
        let ct = bounds::cs_count_bound(st.area, tpt, st.rho, h / t, 2, 1.0).unwrap();
        prop_assert!(rel(ct, c) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fraenkel_translation_scale(a in 0.2f64..1.0, b in 0.2f64..1.0, ang in 0.0f64..3.0, dx in -5.0f64..5.0, t in 0.2f64..5.0) {
        let e = PlanarSet::ellipse([0.0, 0.0], a, b, ang, 128).unwrap();
        let f = asymmetry::fraenkel(&e).unwrap().value;
        let moved = PlanarSet::ellipse([dx, -dx / 2.0], t * a, t * b, ang, 128).unwrap();
        prop_assert!((asymmetry::fraenkel(&moved).unwrap().value - f).abs() < 1e-6);
        let ras = PlanarSet::raster(e.to_raster(a.max(b) / 150.0).unwrap()).unwrap();
        prop_assert!((asymmetry::fraenkel(&ras).unwrap().value - f).abs() < 2e-2);
    }

    #[test]
    fn modified_below_plain_and_perimeter_below_full(x in -0.4f64..0.4, y in -0.4f64..0.4, s in 0.02f64..0.1, ang in 0.0f64..1.5) {
        let omega = DomainSpec::rectangle(1.0, 1.0, BoundaryData::default());
        let layer = BoundaryLayer::new(&omega, 0.2).unwrap();
        let e = PlanarSet::rectangle([x, y], s, 0.5 * s, ang).unwrap();
        prop_assume!(e.bbox().0[0] > -0.5 && e.bbox().0[1] > -0.5 && e.bbox().1[0] < 0.5 && e.bbox().1[1] < 0.5);
        let plain = asymmetry::fraenkel(&e).unwrap().value;
        if let Ok(m) = asymmetry::modified_fraenkel(&e, &omega, &layer, 6) {
            prop_assert!(m.value <= plain + 1e-12);
        }
        let ip = asymmetry::interior_perimeter(&e, &omega).unwrap().length;
        prop_assert!(ip <= 3.0 * s + 1e-12);
    }

    #[test]
    fn equimeasurable(c0 in -0.3f64..0.3, w in 0.5f64..3.0, k in 1.0f64..3.0) {
        let spec = DomainSpec::rectangle(1.0, 1.0, BoundaryData::default());
        let m = mesh::mesh(&spec, 0.04).unwrap();
        let u: Vec<f64> = m
            .vertices
            .iter()
            .map(|p| (-(w * ((p[0] - c0).powi(2) + p[1].powi(2)))).exp() * (1.0 + 0.3 * (k * PI * p[0]).cos()))
            .collect();
        let prof = asymmetry::decreasing_rearrangement(&m, &u, 600).unwrap();
        let l2 = asymmetry::l2_squared(&m, &u);
        prop_assert!((prof.l2_squared() - l2).abs() < 0.01 * l2);
    }
}

#[test]
fn gamma_decreasing_in_dimension() {
    let g: Vec<f64> = (2..=10).map(|n| bounds::universal_constants(n).unwrap().gamma_n).collect();
    assert!(g.windows(2).all(|w| w[1] < w[0]));
    assert!((g[0] - 0.691_660_276).abs() < 1e-8);
}

#[test]
fn neumann_count_bounds_dominate_disk() {
    let spec = DomainSpec::disk(1.0, BoundaryData::Constant(0.0));
    let s = geometry::summarize(&spec).unwrap();
    let neu = spectra::disk_spectrum_below(1.0, Bc::Robin(0.0), 510.0).unwrap();
    for i in 0..100 {
        let mu = 500f64.powf(i as f64 / 99.0);
        let exact = spectra::counting_function(&neu, mu).unwrap() as f64;
        assert!(bounds::neumann_count_convex(mu, &spec).unwrap() >= exact);
        assert!(bounds::neumann_count_convex_c2(mu, s.area, s.perimeter, s.kappa_max, 2).unwrap() >= exact);
    }
}

use robinlab::bounds;
use robinlab::geometry::{BoundaryData, DomainSpec};
use robinlab::nodal::{self, SharpConvention};
use robinlab::spectra::{self, Bc, Spectrum};

fn families(h: f64) -> Vec<(&'static str, Spectrum)> {
    let mut sq = spectra::rectangle_spectrum(1.0, 1.0, Bc::Robin(h), 2000).unwrap();
    sq.domain = Some(DomainSpec::rectangle(1.0, 1.0, BoundaryData::Constant(h)));
    vec![("disk", spectra::disk_robin_spectrum(1.0, Bc::Robin(h), 2000).unwrap()), ("square", sq)]
}

#[test]
fn pleijel_tail_and_finiteness() {
    let gamma = bounds::universal_constants(2).unwrap().gamma_n;
    for h in [-1.0, 0.0, 1.0] {
        for (name, s) in families(h) {
            let cl = nodal::analytic_clusters(&s, 2000, None).unwrap();
            assert!(nodal::courant_violations(&cl).is_empty(), "{name} h={h}");
            let series = nodal::pleijel_series(&cl, 2000).unwrap();
            assert!(series.tail_max < gamma, "{name} h={h}: {} at {}", series.tail_max, series.tail_argmax);
            let sharp = nodal::courant_sharp_scan(&cl, SharpConvention::FirstIndex).unwrap();
            assert!(sharp.iter().all(|&k| k <= 100), "{name} h={h}: {sharp:?}");
        }
    }
}

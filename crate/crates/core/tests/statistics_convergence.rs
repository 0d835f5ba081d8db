//! Convergence behavior of the coarse-grained frequency density and the
//! CSV round trip of distributions.

use everett_core::stats::{coarse_histogram, exact_count_density, relative_frequency_at};

/// With Δz = 0.5·N^(−1/2) the histogram's distance to the Gaussian curve
/// must shrink as N climbs by decades.
///
/// The distance is taken at the histogram's own resolution — bin masses
/// against the curve integrated over the same intervals, in units of the
/// peak — since the raw pointwise sup saturates at the bin-averaging bias
/// (≈0.30·peak at this Δz₁) no matter how large N grows.
#[test]
fn coarse_histogram_approaches_the_frequency_gaussian() {
    let rho = 0.3f64;
    let mut last = f64::INFINITY;
    for &n in &[1_000u64, 10_000, 100_000] {
        let delta_z = 0.5 / (n as f64).sqrt();
        let coarse = coarse_histogram(n, rho, delta_z).unwrap();
        let peak = (n as f64 / (2.0 * std::f64::consts::PI * rho * (1.0 - rho))).sqrt();
        let mut sup = 0.0f64;
        for (i, iv) in coarse.spec.intervals().iter().enumerate() {
            let cells = 64;
            let h = iv.width() / cells as f64;
            if h == 0.0 {
                continue;
            }
            // Simpson quadrature of the curve over the interval
            let mut gauss_mass = 0.0;
            for c in 0..cells {
                let a = iv.lo + c as f64 * h;
                gauss_mass += h / 6.0
                    * (relative_frequency_at(n, rho, a)
                        + 4.0 * relative_frequency_at(n, rho, a + 0.5 * h)
                        + relative_frequency_at(n, rho, a + h));
            }
            sup = sup.max((coarse.bar.density()[i] - gauss_mass).abs() / iv.width() / peak);
        }
        assert!(
            sup < last,
            "scaled sup distance not decreasing at N={n}: {sup} ≥ {last}"
        );
        last = sup;
    }
}

#[test]
fn distribution_csv_round_trips() {
    let d = exact_count_density(40, 0.3).unwrap();
    let csv = d.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "kind,N,rho_u,delta_z");
    let meta: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(meta[0], "exact_count");
    assert_eq!(meta[1], "40");
    assert_eq!(meta[2].parse::<f64>().unwrap(), 0.3);
    assert_eq!(lines.next().unwrap(), "support_value,density");
    for (row, (support, density)) in lines.zip(d.support().iter().zip(d.density())) {
        let mut fields = row.split(',');
        let s: f64 = fields.next().unwrap().parse().unwrap();
        let v: f64 = fields.next().unwrap().parse().unwrap();
        // 17 significant digits reproduce the doubles exactly
        assert_eq!(s, *support);
        assert_eq!(v, *density);
    }
}

//! Invariance of the flat metric and of the uniform measure over states.

use igq_core::classify::apply;
use igq_core::linalg::inner;
use igq_core::sampling::{
    haar_unitary, ks_statistic, metric_invariance_check, pushforward_histograms, random_state, square_and_renormalize,
};
use igq_core::stats::{ks_p_value, map_uniformity_check, uniformity_verdict, UniformityVerdict, SIGNIFICANCE};
use igq_core::GaugeMap;

use crate::config::Settings;
use crate::report::{run_check, CheckReport, Measured};

const PAIRS: usize = 10_000;
const DISPLACEMENT: f64 = 1e-3;
const SAMPLES: usize = 100_000;
const BINS: usize = 20;

fn verdict_details(m: Measured, v: &UniformityVerdict) -> Measured {
    m.with("statistic", v.statistic).with("dof", v.dof).with("p_value", v.p_value).with("verdict", v.passed)
}

pub fn run(s: &Settings) -> Vec<CheckReport> {
    let n = *s.dimensions(&[3]).first().unwrap_or(&3);
    let maps = s.trials("haar", 100);
    let metric = |name: &str, anti: bool| {
        run_check(s, name, 1e-10, maps * PAIRS, |rng, _| {
            let mut worst: f64 = 0.0;
            for _ in 0..maps {
                let v = haar_unitary(n, rng);
                let g = if anti { GaugeMap::antiunitary(v)? } else { GaugeMap::unitary(v)? };
                worst = worst.max(metric_invariance_check(&g, PAIRS, DISPLACEMENT, rng)?);
            }
            Ok(Measured::new(worst).with("n", n).with("maps", maps).with("pairs_per_map", PAIRS))
        })
    };
    vec![
        metric("haar.metric_invariance_unitary", false),
        metric("haar.metric_invariance_antiunitary", true),
        run_check(s, "haar.measure_uniformity", 1.0, 2 * SAMPLES, |rng, _| {
            // One unitary and one antiunitary pushforward, tested jointly.
            let u = GaugeMap::unitary(haar_unitary(n, rng))?;
            let a = GaugeMap::antiunitary(haar_unitary(n, rng))?;
            let mut hists = pushforward_histograms(n, |v| apply(&u, v), SAMPLES, BINS, rng)?;
            hists.extend(pushforward_histograms(n, |v| apply(&a, v), SAMPLES, BINS, rng)?);
            let v = uniformity_verdict(hists)?;
            // Passes when the adjusted p-value exceeds the significance level.
            Ok(verdict_details(Measured::new(SIGNIFICANCE / v.p_value), &v).with("bins", BINS))
        }),
        run_check(s, "haar.negative_control", 1.0, SAMPLES, |rng, _| {
            // Squaring amplitudes is not an isometry and must be detected.
            let v = map_uniformity_check(n, square_and_renormalize, SAMPLES, BINS, rng)?;
            Ok(verdict_details(Measured::new(v.p_value / SIGNIFICANCE), &v).with("bins", BINS))
        }),
        run_check(s, "haar.rotation_invariance", 1.0, 2 * SAMPLES, |rng, _| {
            // Re⟨u, v⟩ has the same law for any fixed unit vector u.
            let (u, w) = (random_state(n, rng), random_state(n, rng));
            let mut a: Vec<f64> = (0..SAMPLES).map(|_| inner(u.as_slice(), random_state(n, rng).as_slice()).re).collect();
            let mut b: Vec<f64> = (0..SAMPLES).map(|_| inner(w.as_slice(), random_state(n, rng).as_slice()).re).collect();
            let d = ks_statistic(&mut a, &mut b);
            let p = ks_p_value(d, SAMPLES, SAMPLES);
            Ok(Measured::new(SIGNIFICANCE / p).with("ks_statistic", d).with("p_value", p).with("verdict", p >= SIGNIFICANCE))
        }),
    ]
}

//! NSGA-II beats random search on the single-peak family at n = 10.

use cobi::baseline::{calibrate_epsilon, run_nsga2_lite, run_random_search, HvReference, ScalingConfig};
use cobi::generator::generate;

#[test]
fn nsga2_beats_random_search_at_n10() {
    let cfg = ScalingConfig::single_peak_family(11);
    let (mut nsga, mut random) = (0.0, 0.0);
    for r in 0..15u64 {
        let mut family = cfg.family.clone();
        family.dimension = 10;
        family.seed ^= r;
        let prob = generate(&family).unwrap();
        let (_, approx) = calibrate_epsilon(&prob, 500, 0.05).unwrap();
        let reference = HvReference::from_approximation(&approx).unwrap();
        let seed = family.seed;
        nsga += run_nsga2_lite(&prob, &reference, 100, 10_000, seed).unwrap().trace.final_gap();
        random += run_random_search(&prob, &reference, 10_000, seed, prob.search_box()).trace.final_gap();
    }
    let (nsga, random) = (nsga / 15.0, random / 15.0);
    assert!(nsga < random, "mean final gap: nsga2 {nsga}, random {random}");
}

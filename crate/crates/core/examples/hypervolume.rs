//! Exact two-objective hypervolume by a sweep over sorted points.

use cobi::dominance::ObjectivePair;
use cobi::hypervolume::hypervolume;

fn main() {
    let r = ObjectivePair::new(3.0, 3.0);
    let front = [ObjectivePair::new(1.0, 2.0), ObjectivePair::new(2.0, 1.0)];
    println!("HV{{(1,2), (2,1)}} w.r.t. (3,3) = {}", hypervolume(&front, r));

    // Dominated and out-of-box points add nothing.
    let noisy = [front[0], front[1], ObjectivePair::new(2.5, 2.5), ObjectivePair::new(0.5, 4.0)];
    println!("with a dominated point and one beyond the reference = {}", hypervolume(&noisy, r));

    // A dense linear front approaches the triangle area 0.5 from below.
    let r = ObjectivePair::new(1.0, 1.0);
    for k in [2usize, 10, 100, 1000] {
        let pts: Vec<ObjectivePair> =
            (0..=k).map(|i| ObjectivePair::new(i as f64 / k as f64, 1.0 - i as f64 / k as f64)).collect();
        println!("linear front, {:>4} segments: {:.6}", k, hypervolume(&pts, r));
    }
}

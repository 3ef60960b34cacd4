use std::time::Instant;

use adplab_core::certify::{certify_prop1, certify_prop2, SuiteOptions};
use adplab_core::lp::Exponent;

fn main() {
    let opts = SuiteOptions {
        eps_samples: 128,
        ..SuiteOptions::default()
    };
    for pv in [2.1, 2.5, 3.0, 5.0, 8.0] {
        let p = Exponent::new(pv).unwrap();
        let t = Instant::now();
        let rep = certify_prop1(p, 200, 20_000, 42, &opts).unwrap();
        println!(
            "prop1 p={pv} n=200: worst={:.6} passed={} ({:?})",
            rep.worst_margin,
            rep.passed,
            t.elapsed()
        );
    }
    for pv in [2.1, 2.5, 3.0] {
        let p = Exponent::new(pv).unwrap();
        for n in [16usize, 64, 256, 1024] {
            let t = Instant::now();
            let rep = certify_prop2(p, n, 100, 42, &opts).unwrap();
            println!(
                "prop2 p={pv} n={n}: worst={:.3e} passed={} ({:?}) {}",
                rep.worst_margin,
                rep.passed,
                t.elapsed(),
                rep.grid_or_samples
            );
        }
    }
}

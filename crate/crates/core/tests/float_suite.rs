//! Every entry on seeded float draws: 100 points at 1e-8, or 1e-7 with
//! terminating orders up to 6 for the weighted integrals.

use qseries::identities::{register_all, sample_params, Mode, SampleOptions, Strategy, Verdict};
use qseries::Policy;
use rayon::prelude::*;

const INTEGRALS: [&str; 5] = ["AA", "PROP4_2a", "PROP4_2b", "THM4_3", "THM4_4"];

#[test]
fn every_entry_passes_on_seeded_float_draws() {
    let pol = Policy::default();
    let mut bad = Vec::new();
    for def in register_all() {
        let integral = INTEGRALS.contains(&def.id);
        let mut opts = SampleOptions::new(31, 100, Strategy::Random, Mode::Float);
        for order in ["M", "N"] {
            if integral && def.slots.iter().any(|s| s.name == order) {
                opts.ranges.insert(order.into(), (1.0, 6.0));
            }
        }
        let tol = if integral { 1e-7 } else { 1e-8 };
        let pts = sample_params(def.id, &opts, &pol).unwrap();
        assert_eq!(pts.len(), 100, "{}", def.id);
        let fails: Vec<_> = pts
            .par_iter()
            .filter_map(|p| {
                let r = def.evaluate(p, Mode::Float, Some(tol), &pol).unwrap();
                (r.verdict != Verdict::Pass).then(|| format!("{} {:?} {:?}", def.id, r.verdict, p))
            })
            .collect();
        bad.extend(fails);
    }
    assert!(bad.is_empty(), "{} failures, first: {}", bad.len(), bad[0]);
}

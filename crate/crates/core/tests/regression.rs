//! Pinned model counts at family depth 1.

use nam_core::catalog::preset;
use nam_core::search::{find_models, SearchOptions};

const COUNTS: &[(&str, [(u64, u64); 3])] = &[
    ("NAM0a", [(4, 1), (48, 12), (2688, 438)]),
    ("NAM0b", [(4, 1), (48, 12), (2688, 360)]),
    ("NAM0c", [(4, 2), (48, 30), (2688, 1662)]),
    ("NAM1a", [(4, 1), (48, 10), (2688, 234)]),
    ("NAM1b", [(4, 0), (96, 0), (8064, 0)]),
    ("NAM2a", [(4, 1), (48, 10), (2688, 234)]),
    ("NAM2c", [(4, 0), (96, 18), (8064, 1530)]),
];

#[test]
fn preset_model_counts() {
    for (name, rows) in COUNTS {
        let cfg = preset(name).unwrap();
        assert_eq!(cfg.family_depth, 1);
        for (i, &(candidates, models)) in rows.iter().enumerate() {
            let n = i + 1;
            let v = find_models(
                &cfg,
                n,
                &SearchOptions {
                    workers: 4,
                    ..SearchOptions::default()
                },
            )
            .unwrap();
            assert_eq!(
                (v.candidates, v.model_count),
                (candidates, models),
                "{name} n={n}"
            );
        }
    }
}

// scratch probe, deleted before release
use std::time::Instant;

use phlab_core::diffeo::{ToralDiffeo, TrackedMap};
use phlab_core::entropy::*;
use phlab_core::intmat::IntegerMatrix;
use phlab_core::suspension::SuspensionFlow;

fn show(name: &str, est: &EntropyEstimate, table: &SeparatedSetTable, t: Instant) {
    println!(
        "{name}: h_hat={:.4} at eps={} ({}ms)",
        est.h_hat,
        est.h_hat_eps,
        t.elapsed().as_millis()
    );
    for r in &est.h_of_eps {
        println!(
            "  eps={:.3} rate={:.4} r2={:.5} pts={} sat={}",
            r.eps, r.rate, r.r_squared, r.points_used, r.saturated
        );
    }
    for (row, sat) in table.counts.iter().zip(&table.saturated_at) {
        let c: Vec<usize> = row.iter().map(|(_, c)| *c).collect();
        println!("  counts={c:?} sat_at={sat:?}");
    }
}

#[test]
#[ignore]
fn probe_acceptance_configs() {
    // cat2 at the acceptance configuration (plain 512^2 grid)
    let f = ToralDiffeo::linear_map(IntegerMatrix::cat());
    let d = ToralDynamics {
        map: TrackedMap::forward(&f),
    };
    let t = Instant::now();
    let (est, table) = estimate_topological_entropy(
        &d,
        &EntropyParams {
            eps_ladder: vec![0.2, 0.1, 0.05],
            n_max: 8,
            sample: SampleSpec::Grid {
                per_axis: vec![512, 512],
            },
        },
    )
    .unwrap();
    show("cat2 512^2", &est, &table, t);

    // ph3 on a plain grid
    let ph3 = ToralDiffeo::linear_map(
        IntegerMatrix::new(3, vec![2, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap(),
    );
    let d3 = ToralDynamics {
        map: TrackedMap::forward(&ph3),
    };
    let t = Instant::now();
    let (est, table) = estimate_topological_entropy(
        &d3,
        &EntropyParams {
            eps_ladder: vec![0.25, 0.15],
            n_max: 7,
            sample: SampleSpec::Grid {
                per_axis: vec![64, 64, 64],
            },
        },
    )
    .unwrap();
    show("ph3 64^3 grid", &est, &table, t);

    // ph3 on a leaf segment
    let t = Instant::now();
    let (est, table) = estimate_topological_entropy(
        &d3,
        &EntropyParams {
            eps_ladder: vec![0.25, 0.15],
            n_max: 10,
            sample: SampleSpec::Leaf {
                radius: 0.2,
                per_axis: vec![200_000],
                seed: 7,
            },
        },
    )
    .unwrap();
    show("ph3 leaf", &est, &table, t);

    // t4 on a 2-D leaf patch
    let t4 = ToralDiffeo::linear_map(IntegerMatrix::cat().direct_sum(&IntegerMatrix::cat()));
    let d4 = ToralDynamics {
        map: TrackedMap::forward(&t4),
    };
    let t = Instant::now();
    let (est, table) = estimate_topological_entropy(
        &d4,
        &EntropyParams {
            eps_ladder: vec![0.3, 0.2],
            n_max: 6,
            sample: SampleSpec::Leaf {
                radius: 0.2,
                per_axis: vec![500, 500],
                seed: 11,
            },
        },
    )
    .unwrap();
    show("t4 leaf 500^2", &est, &table, t);

    // suspension time-1 / time-2 on leaf segments
    let flow = SuspensionFlow::new(IntegerMatrix::cat()).unwrap();
    for tau in [1.0, 2.0] {
        let dz = SuspensionTimeT { flow: &flow, tau };
        let t = Instant::now();
        let result = estimate_topological_entropy(
            &dz,
            &EntropyParams {
                eps_ladder: vec![0.25, 0.15],
                n_max: if tau > 1.5 { 6 } else { 10 },
                sample: SampleSpec::Leaf {
                    radius: 0.2,
                    per_axis: vec![150_000],
                    seed: 3,
                },
            },
        )
        .unwrap();
        show(&format!("susp tau={tau} leaf"), &result.0, &result.1, t);
    }
}

//! Constructive searches: independence witnesses, entropy-maximizing
//! sequences, correlation profiles, and pair localization.

mod common;

use common::*;
use seqent::circle::{Arc, ArcSet};
use seqent::{
    correlation_profile, greedy_entropy_sequence, greedy_independence,
    ip_restricted_independence, join_cells, se_pair_localize, Cover, FiniteGroupSet,
    FolnerSequence, GroupElement, NRange, PointRep, SePairOptions, SubsetGenerator,
    SymbolicPartition,
};
use std::f64::consts::LN_2;

const BUDGET: u64 = 1 << 24;

fn naturals_pool(m: usize) -> Vec<GroupElement> {
    (0..m as i64).map(|k| g(&[k])).collect()
}

#[test]
fn full_shift_reaches_any_independence_length() {
    let sys = full_shift_z();
    let sets = vec![letter_cylinder(0), letter_cylinder(1)];
    let witness = greedy_independence(&sys, &sets, 5, &naturals_pool(10), BUDGET).unwrap();
    assert!(witness.verified && witness.complete);
    assert_eq!(witness.elements, naturals_pool(5));
}

#[test]
fn single_step_accepts_the_first_pool_element() {
    let sys = full_shift_z();
    let sets = vec![letter_cylinder(0), letter_cylinder(1)];
    let pool = vec![g(&[3]), g(&[0]), g(&[7])];
    let witness = greedy_independence(&sys, &sets, 1, &pool, BUDGET).unwrap();
    assert!(witness.complete);
    assert_eq!(witness.elements, vec![g(&[3])]);
}

#[test]
fn disjointness_is_checked_up_front() {
    let sys = full_shift_z();
    let overlapping = vec![symbolic_full_region(2), letter_cylinder(1)];
    assert!(greedy_independence(&sys, &overlapping, 2, &naturals_pool(4), BUDGET).is_err());
}

#[test]
fn rotation_independence_dies_early() {
    // Rotation by 1/3 with two arcs of length 0.2: only three distinct
    // translates exist, and the (1,1) combination already fails for any
    // pair of distinct offsets.
    let sys = seqent::ExactRotationSystem::new(vec![q(1, 3)]).unwrap();
    let sets = vec![arc_exact(q(0, 1), q(1, 5)), arc_exact(q(2, 5), q(1, 5))];
    let witness = greedy_independence(&sys, &sets, 4, &naturals_pool(51), BUDGET).unwrap();
    assert!(!witness.complete);
    assert!(witness.elements.len() < 4);
    assert!(witness.elements.len() < 5, "criterion window");
}

#[test]
fn ip_restricted_search_rebuilds_per_level() {
    let sys = full_shift_z();
    let sets = vec![letter_cylinder(0), letter_cylinder(1)];
    let generators = vec![g(&[1]), g(&[10]), g(&[100])];
    let witness = ip_restricted_independence(&sys, &sets, 4, &generators, BUDGET).unwrap();
    assert!(witness.complete);
    assert_eq!(witness.ip_level, Some(3));
    // Every witness element is a subset sum of the generators.
    let fp = seqent::ip_initial_segment(&generators, 3).unwrap();
    for e in &witness.elements {
        assert!(fp.contains(e));
    }
}

#[test]
fn independence_witness_forces_the_cover_count_bound() {
    // A verified witness of length k for disjoint (W_1, W_2) forces
    // N(join of {X\W_1, X\W_2}) >= 2^k, i.e. normalized >= log 2.
    let sys = full_shift_z();
    let sets = vec![letter_cylinder(0), letter_cylinder(1)];
    let witness = greedy_independence(&sys, &sets, 6, &naturals_pool(12), BUDGET).unwrap();
    assert!(witness.complete);
    let cover = Cover::new(vec![letter_cylinder(1), letter_cylinder(0)]).unwrap();
    let subset = SubsetGenerator::ExplicitList {
        elements: witness.elements.clone(),
    };
    let profile = seqent::top_seq_entropy_profile(
        &sys,
        &cover,
        &subset,
        &FolnerSequence::boxes(1),
        &NRange::new(6, 6),
        BUDGET,
        seqent::SolverMode::Exact,
        &seqent::SolverLimits::default(),
    )
    .unwrap();
    let row = &profile.rows[0];
    assert_eq!(row.count, 6);
    assert!(row.normalized >= LN_2 - 1e-9);
}

#[test]
fn bernoulli_entropy_sequence_gains_log_two_every_step() {
    let sys = full_shift_z();
    let alpha = SymbolicPartition::generating(2, 1);
    let seq = greedy_entropy_sequence(&sys, &alpha, 4, &naturals_pool(16), BUDGET).unwrap();
    assert_eq!(seq.elements.len(), 4);
    for gain in &seq.gains {
        assert!((gain - LN_2).abs() < 1e-12);
    }
    // Ties break to the smallest pool index.
    assert_eq!(seq.elements, naturals_pool(4));
}

#[test]
fn single_step_gain_is_the_partition_entropy() {
    let sys = seqent::SymbolicSystem::<f64>::new(
        2,
        1,
        vec![0.2, 0.8],
        vec![seqent::AxisAction::Shift],
    )
    .unwrap();
    let alpha = SymbolicPartition::generating(2, 1);
    let seq = greedy_entropy_sequence(&sys, &alpha, 1, &naturals_pool(8), BUDGET).unwrap();
    let h = seqent::shannon_entropy(&[0.2f64, 0.8]).unwrap();
    assert_eq!(seq.gains.len(), 1);
    assert!((seq.gains[0] - h).abs() < 1e-12);
}

#[test]
fn rotation_gains_decrease_and_telescope() {
    let sys = golden_rotation();
    let part = seqent::CirclePartition::<f64>::halves();
    let seq = greedy_entropy_sequence(&sys, &part, 6, &naturals_pool(32), BUDGET).unwrap();
    assert_eq!(seq.gains.len(), 6);
    assert!(seq.gains.last().unwrap() < &(seq.gains[0] * 0.5));
    for pair in seq.gains.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-9, "gains should not increase: {pair:?}");
    }
    // Chain-rule telescoping: the running average of the gains equals the
    // normalized joint entropy of the constructed set, exactly.
    let total: f64 = seq.gains.iter().sum();
    let joint = join_cells(
        &sys,
        &part,
        &FiniteGroupSet::from_vec(seq.elements.clone()),
        BUDGET,
    )
    .unwrap()
    .entropy();
    assert!((total - joint).abs() < 1e-9);
    let running: f64 = seq.gains[..3].iter().sum::<f64>() / 3.0;
    let joint3 = join_cells(
        &sys,
        &part,
        &FiniteGroupSet::from_vec(seq.elements[..3].to_vec()),
        BUDGET,
    )
    .unwrap()
    .entropy();
    assert!((running - joint3 / 3.0).abs() < 1e-9);
}

#[test]
fn bernoulli_correlations_decay_exactly() {
    let sys = full_shift_z();
    let a = letter_cylinder(0);
    let rows = correlation_profile(
        &sys,
        &a,
        &a,
        &FolnerSequence::boxes(1),
        &NRange::new(1, 12),
        BUDGET,
    )
    .unwrap();
    for row in &rows {
        // Only g = 0 deviates: |mu(A) - mu(A)^2| = 1/4.
        let expect = 0.25 / f64::from(row.n);
        assert!((row.average - expect).abs() < 1e-15, "row {row:?}");
    }
    // Deviations vanish exactly once supports are disjoint, so the profile
    // is monotone nonincreasing.
    for pair in rows.windows(2) {
        assert!(pair[1].average <= pair[0].average + 1e-15);
    }
}

#[test]
fn full_space_has_zero_correlation() {
    let sys = full_shift_z();
    let x = symbolic_full_region(2);
    let b = letter_cylinder(1);
    let rows = correlation_profile(
        &sys,
        &x,
        &b,
        &FolnerSequence::boxes(1),
        &NRange::new(1, 8),
        BUDGET,
    )
    .unwrap();
    for row in &rows {
        assert_eq!(row.average, 0.0);
    }
}

#[test]
fn quarter_rotation_correlations_do_not_vanish() {
    let sys = quarter_rotation();
    let a = arc_exact(q(0, 1), q(1, 4));
    let rows = correlation_profile(
        &sys,
        &a,
        &a,
        &FolnerSequence::boxes(1),
        &NRange::new(1, 16),
        BUDGET,
    )
    .unwrap();
    // Period-4 returns: at multiples of 4 the average is exactly
    // (0.1875 + 3 * 0.0625) / 4.
    let row16 = rows.iter().find(|r| r.n == 16).unwrap();
    assert!((row16.average - 0.09375).abs() < 1e-15);
    assert!(rows.iter().all(|r| r.average >= 0.0625));
}

#[test]
fn se_pairs_localize_on_the_full_shift() {
    let sys = full_shift_z();
    let cover = Cover::new(vec![letter_cylinder(1), letter_cylinder(0)]).unwrap();
    let opts = SePairOptions {
        depth: 3,
        evidence_length: 5,
        pool: naturals_pool(64),
        threshold: 0.6,
        budget: BUDGET,
    };
    let report = se_pair_localize(&sys, &cover, &opts).unwrap();
    assert!(report.conclusive, "report: {report:?}");
    assert_eq!(report.levels.len(), 4);
    for (i, level) in report.levels.iter().enumerate() {
        assert_eq!(level.level, i as u32);
        assert!(level.profile_normalized >= 0.6);
        let expect_diam = 0.5f64.powi(i as i32 + 1);
        assert!((level.diameter_a - expect_diam).abs() < 1e-12);
        assert!((level.diameter_b - expect_diam).abs() < 1e-12);
        if i > 0 {
            // Strict halving against the previous level.
            assert!(level.diameter_a <= report.levels[i - 1].diameter_a / 2.0 + 1e-12);
        }
    }
    // The localized pair differs at the origin coordinate.
    let (pa, pb) = report.pair.unwrap();
    match (pa, pb) {
        (
            PointRep::Pattern {
                coordinates: ca,
                letters: la,
            },
            PointRep::Pattern {
                coordinates: cb,
                letters: lb,
            },
        ) => {
            let at_zero = |coords: &[Vec<i64>], letters: &[u8]| -> u8 {
                coords
                    .iter()
                    .position(|c| c == &vec![0])
                    .map(|i| letters[i])
                    .expect("origin pinned")
            };
            assert_ne!(at_zero(&ca, &la), at_zero(&cb, &lb));
        }
        other => panic!("expected pattern points, got {other:?}"),
    }
}

#[test]
fn se_pairs_are_inconclusive_on_rotations() {
    let sys = golden_rotation();
    let cover = Cover::new(vec![
        ArcSet::new(vec![Arc::new(0.05f64, 0.7).unwrap()]),
        ArcSet::new(vec![Arc::new(0.6f64, 0.55).unwrap()]),
    ])
    .unwrap();
    let opts = SePairOptions {
        depth: 2,
        evidence_length: 5,
        pool: naturals_pool(64),
        threshold: 0.3,
        budget: BUDGET,
    };
    let report = se_pair_localize(&sys, &cover, &opts).unwrap();
    assert!(!report.conclusive);
    assert!(report.failed_level.is_some());
}

#[test]
fn depth_zero_returns_the_level_zero_certificate() {
    let sys = full_shift_z();
    let cover = Cover::new(vec![letter_cylinder(1), letter_cylinder(0)]).unwrap();
    let opts = SePairOptions {
        depth: 0,
        evidence_length: 4,
        pool: naturals_pool(32),
        threshold: 0.5,
        budget: BUDGET,
    };
    let report = se_pair_localize(&sys, &cover, &opts).unwrap();
    assert!(report.conclusive);
    assert_eq!(report.levels.len(), 1);
    assert_eq!(report.levels[0].level, 0);
    assert!(report.pair.is_some());
}

#[test]
fn three_set_witness_forces_the_general_count_bound() {
    // l = 3 disjoint letter cylinders on the ternary full shift: a verified
    // witness of length k forces N(join of {X \ W_i}) >= (l/(l-1))^k, i.e.
    // normalized >= log 3 - log 2.
    let sys = seqent::SymbolicSystem::<f64>::full_shift(3, 1).unwrap();
    let w: Vec<_> = (0..3u8)
        .map(|l| seqent::CylinderUnion::single(seqent::CylinderPattern::at(g(&[0]), l)))
        .collect();
    let witness = greedy_independence(&sys, &w, 3, &naturals_pool(8), BUDGET).unwrap();
    assert!(witness.complete && witness.verified);

    let complements: Vec<seqent::CylinderUnion> = vec![
        seqent::CylinderUnion::new(vec![
            seqent::CylinderPattern::at(g(&[0]), 1),
            seqent::CylinderPattern::at(g(&[0]), 2),
        ]),
        seqent::CylinderUnion::new(vec![
            seqent::CylinderPattern::at(g(&[0]), 0),
            seqent::CylinderPattern::at(g(&[0]), 2),
        ]),
        seqent::CylinderUnion::new(vec![
            seqent::CylinderPattern::at(g(&[0]), 0),
            seqent::CylinderPattern::at(g(&[0]), 1),
        ]),
    ];
    let cover = Cover::new(complements).unwrap();
    let subset = SubsetGenerator::ExplicitList {
        elements: witness.elements.clone(),
    };
    let profile = seqent::top_seq_entropy_profile(
        &sys,
        &cover,
        &subset,
        &FolnerSequence::boxes(1),
        &NRange::new(3, 3),
        BUDGET,
        seqent::SolverMode::Exact,
        &seqent::SolverLimits::default(),
    )
    .unwrap();
    let row = &profile.rows[0];
    assert_eq!(row.count, 3);
    let bound = 3f64.ln() - 2f64.ln();
    assert!(
        row.normalized >= bound - 1e-9,
        "normalized {} below log 3 - log 2",
        row.normalized
    );
}

#[test]
fn density_one_subset_carries_exact_correlation_convergence() {
    // For the full shift and cylinder pair A = B, the deviation
    // |mu(A ∩ g^{-1}B) - mu(A)mu(B)| is nonzero only where the translated
    // supports overlap (here g = 0). Excluding that finite set leaves a
    // density-one subset along which the products match exactly.
    let sys = full_shift_z();
    let a = letter_cylinder(0);
    let zero = GroupElement::zero(1);
    let witness_set = SubsetGenerator::DensityOneComplement {
        dimension: 1,
        excluded: vec![g(&[0])],
    };
    let folner = FolnerSequence::boxes(1);
    let est = seqent::density(&witness_set, &folner, 200).unwrap();
    assert!(est.lower > 0.98, "witness set has density approaching one");

    use seqent::systems::DynamicalSystem;
    let mu_a = sys.region_measure(&a, BUDGET).unwrap();
    let product = mu_a.clone() * mu_a.clone();
    for s in witness_set.intersect_folner(&folner, 32).unwrap().iter() {
        let joint = sys
            .translated_intersection_measure(&a, s, &a, BUDGET)
            .unwrap();
        assert_eq!(joint, product, "deviation must vanish exactly at {s:?}");
    }
    // And at the excluded element the deviation is genuinely nonzero.
    let at_zero = sys
        .translated_intersection_measure(&a, &zero, &a, BUDGET)
        .unwrap();
    assert_ne!(at_zero, product);
}

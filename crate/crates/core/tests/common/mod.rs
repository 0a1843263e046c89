//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use seqent::circle::{Arc, ArcSet};
use seqent::systems::{AxisAction, CylinderPattern, CylinderUnion};
use seqent::{
    Exact, ExactRotationSystem, ExactSymbolicSystem, FloatRotationSystem, GroupElement, Scalar,
    SubsetGenerator, SymbolicSystem,
};

pub fn g(coords: &[i64]) -> GroupElement {
    GroupElement::new(coords.to_vec())
}

pub fn q(n: i64, d: i64) -> Exact {
    Exact::from_ratio(n, d)
}

/// The `Z^2` example system: `T_1 = Id`, `T_2` the two-sided full shift on
/// two symbols with the (1/2, 1/2) product measure.
pub fn example_z2_system() -> ExactSymbolicSystem {
    SymbolicSystem::new(
        2,
        2,
        vec![q(1, 2), q(1, 2)],
        vec![AxisAction::Identity, AxisAction::Shift],
    )
    .unwrap()
}

/// `S = {(0, n)}_{n >= 1}`: the shift column of the example system.
pub fn column_subset() -> SubsetGenerator {
    SubsetGenerator::AxisRay {
        dimension: 2,
        axis: 1,
        start: 1,
    }
}

/// `S` = every point of the orthant (full boxes).
pub fn full_boxes(dimension: usize) -> SubsetGenerator {
    SubsetGenerator::DensityOneComplement {
        dimension,
        excluded: vec![],
    }
}

/// Golden-angle circle rotation, float backend.
pub fn golden_rotation() -> FloatRotationSystem {
    FloatRotationSystem::new(vec![(5f64.sqrt() - 1.0) / 2.0]).unwrap()
}

/// Quarter-turn rotation, exact backend.
pub fn quarter_rotation() -> ExactRotationSystem {
    ExactRotationSystem::new(vec![q(1, 4)]).unwrap()
}

/// Binary full shift on `Z`, exact backend.
pub fn full_shift_z() -> ExactSymbolicSystem {
    SymbolicSystem::full_shift(2, 1).unwrap()
}

/// The letter cylinder `{x : x_0 = letter}` on `Z`.
pub fn letter_cylinder(letter: u8) -> CylinderUnion {
    CylinderUnion::single(CylinderPattern::at(g(&[0]), letter))
}

/// The whole symbolic space as a region (union of the letter cylinders).
pub fn symbolic_full_region(alphabet: u8) -> CylinderUnion {
    CylinderUnion::new(
        (0..alphabet)
            .map(|l| CylinderPattern::at(g(&[0]), l))
            .collect(),
    )
}

pub fn arc_f64(start: f64, length: f64) -> ArcSet<f64> {
    ArcSet::new(vec![Arc::new(start, length).unwrap()])
}

pub fn arc_exact(start: Exact, length: Exact) -> ArcSet<Exact> {
    ArcSet::new(vec![Arc::new(start, length).unwrap()])
}

/// The letter cylinder at the origin of `Z^2`.
pub fn letter_cylinder_z2(letter: u8) -> CylinderUnion {
    CylinderUnion::single(CylinderPattern::at(g(&[0, 0]), letter))
}

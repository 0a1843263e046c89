//! Finite-scale sequence entropy for `Z^d` actions.
//!
//! The library computes measure-theoretic and topological sequence entropy
//! profiles along Følner box sequences and arbitrary infinite subsets `S`
//! of the orthant, for two families of concrete systems:
//!
//! * symbolic full shifts over a finite alphabet with an i.i.d. product
//!   measure, where joins, covers, and intersections are evaluated exactly
//!   on finite configuration windows;
//! * `d`-parameter circle rotations with Lebesgue measure, where the same
//!   computations run on elementary arcs between breakpoints.
//!
//! On top of the profiles sit the constructive searches: greedy
//! independence sequences (plain and IP-restricted), conditional-entropy
//! maximizing sequences, Cesàro correlation profiles, and sequence-entropy
//! pair localization. All outputs are finite-scale evidence with exact
//! per-row values; nothing claims the limiting statements.
//!
//! Core arithmetic is generic over [`scalar::Scalar`]: use `f64` for
//! floating computations with `1e-12` snapping, or [`Exact`] (arbitrary
//! precision rationals) when weights, angles, and breakpoints are rational.
//!
//! ```
//! use seqent::{
//!     seq_entropy_profile, AxisAction, ExactSymbolicSystem, FolnerSequence, NRange, Scalar,
//!     SubsetGenerator, SymbolicPartition, DEFAULT_BUDGET,
//! };
//!
//! // Z^2 acting on the binary full shift with one identity axis: zero
//! // entropy along boxes, log 2 along the shift column.
//! let half = seqent::Exact::from_ratio(1, 2);
//! let sys = ExactSymbolicSystem::new(
//!     2,
//!     2,
//!     vec![half.clone(), half],
//!     vec![AxisAction::Identity, AxisAction::Shift],
//! )?;
//! let alpha = SymbolicPartition::generating(2, 2);
//! let column = SubsetGenerator::AxisRay { dimension: 2, axis: 1, start: 1 };
//! let profile = seq_entropy_profile(
//!     &sys,
//!     &alpha,
//!     &column,
//!     &FolnerSequence::boxes(2),
//!     &NRange::new(1, 6),
//!     DEFAULT_BUDGET,
//! )?;
//! for row in &profile.rows {
//!     assert!((row.normalized - std::f64::consts::LN_2).abs() < 1e-12);
//! }
//! # Ok::<(), seqent::Error>(())
//! ```

pub mod circle;
pub mod cover;
pub mod error;
pub mod group;
pub mod partition;
pub mod profile;
pub mod scalar;
pub mod search;
pub mod systems;

/// Exact rational scalar backend.
pub type Exact = num_rational::BigRational;

pub type FloatSymbolicSystem = systems::SymbolicSystem<f64>;
pub type ExactSymbolicSystem = systems::SymbolicSystem<Exact>;
pub type FloatRotationSystem = systems::RotationSystem<f64>;
pub type ExactRotationSystem = systems::RotationSystem<Exact>;
pub type FloatCirclePartition = partition::CirclePartition<f64>;
pub type ExactCirclePartition = partition::CirclePartition<Exact>;
pub type FloatArcSet = circle::ArcSet<f64>;
pub type ExactArcSet = circle::ArcSet<Exact>;

/// Default enumeration budget: at most `2^24` states per exact carrier.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

pub use error::{Error, Result};
pub use group::{
    density, ip_initial_segment, DensityEstimate, FiniteGroupSet, FolnerSequence, GroupElement,
    SubsetGenerator,
};
pub use partition::{
    conditional_entropy, join_cells, partition_entropy, seq_entropy_profile, shannon_entropy,
    CellDistribution, CirclePartition, SymbolicPartition,
};
pub use profile::{EntropyProfile, EntropyUnit, NRange, ProfileRow};
pub use scalar::Scalar;
pub use systems::{
    act_on_pattern, cylinder_measure, rotate_arc, AxisAction, CylinderPattern, CylinderUnion,
    DynamicalSystem, PointRep, RotationSystem, SymbolicSystem,
};

pub use cover::{
    cover_flags, hitting_times, min_subcover, top_seq_entropy_profile, verify_cover,
    AtomIncidence, Cover, CoverFlags, SolverLimits, SolverMode,
};
pub use search::{
    correlation_profile, greedy_entropy_sequence, greedy_independence,
    ip_restricted_independence, pool_from_generator, se_pair_localize, CorrelationRow,
    EntropySequence, IndependenceWitness, SePairLevel, SePairOptions, SePairReport,
};

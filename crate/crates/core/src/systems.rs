//! Concrete `Z^d` systems with invariant measures: symbolic full shifts
//! over a finite alphabet carrying an i.i.d. product measure, and
//! `d`-parameter circle rotations carrying Lebesgue measure.
//!
//! Every entropy and cover computation reduces to an exact finite carrier:
//! configurations on a finite coordinate window for shifts, elementary
//! arcs between breakpoints for rotations. The [`DynamicalSystem`] trait
//! exposes those carriers to the generic profile and search code.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::circle::{cut_circle, Arc, ArcSet};
use crate::cover::AtomIncidence;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::partition::{CellDistribution, CirclePartition, SymbolicPartition};
use crate::scalar::Scalar;

/// Per-generator behavior of a symbolic system: the generator acts as the
/// coordinate shift along its axis or as the identity map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisAction {
    Shift,
    Identity,
}

/// Full shift over `{0, ..., alphabet-1}` with an i.i.d. product measure,
/// acted on by `Z^d` through `(g x)_t = x_{t - m(g)}` where `m(g)` zeroes
/// the identity axes of `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicSystem<T: Scalar> {
    alphabet: usize,
    dimension: usize,
    weights: Vec<T>,
    axes: Vec<AxisAction>,
}

impl<T: Scalar> SymbolicSystem<T> {
    pub fn new(
        alphabet: usize,
        dimension: usize,
        weights: Vec<T>,
        axes: Vec<AxisAction>,
    ) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::invalid("alphabet must have at least two letters"));
        }
        if alphabet > 256 {
            return Err(Error::invalid("alphabet is limited to 256 letters"));
        }
        if dimension == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        if weights.len() != alphabet {
            return Err(Error::invalid(format!(
                "{} letter weights given for an alphabet of {alphabet}",
                weights.len()
            )));
        }
        if axes.len() != dimension {
            return Err(Error::invalid(format!(
                "{} axis actions given for dimension {dimension}",
                axes.len()
            )));
        }
        let mut total = T::Acc::default();
        for w in &weights {
            if w.is_negative() {
                return Err(Error::invalid(format!("negative letter weight {w}")));
            }
            T::acc_add(&mut total, w);
        }
        let total = T::acc_total(&total).to_f64();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "letter weights sum to {total}, expected 1 within 1e-12"
            )));
        }
        Ok(SymbolicSystem {
            alphabet,
            dimension,
            weights,
            axes,
        })
    }

    /// Uniform Bernoulli shift on one axis per dimension.
    pub fn full_shift(alphabet: usize, dimension: usize) -> Result<Self> {
        let w = T::from_ratio(1, alphabet as i64);
        SymbolicSystem::new(
            alphabet,
            dimension,
            vec![w; alphabet],
            vec![AxisAction::Shift; dimension],
        )
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn axes(&self) -> &[AxisAction] {
        &self.axes
    }

    /// `m(g)`: the translation actually applied, with identity axes zeroed.
    pub fn effective_translation(&self, g: &GroupElement) -> Result<GroupElement> {
        if g.dimension() != self.dimension {
            return Err(Error::invalid(format!(
                "group element {g:?} has dimension {}, system has {}",
                g.dimension(),
                self.dimension
            )));
        }
        let coords = g
            .coords()
            .iter()
            .zip(&self.axes)
            .map(|(&c, axis)| match axis {
                AxisAction::Shift => c,
                AxisAction::Identity => 0,
            })
            .collect();
        Ok(GroupElement::new(coords))
    }

    fn letter_weight(&self, letter: u8) -> Result<&T> {
        self.weights.get(letter as usize).ok_or_else(|| {
            Error::invalid(format!(
                "letter {letter} out of range for alphabet of {}",
                self.alphabet
            ))
        })
    }
}

/// `d`-parameter rotation of the circle of circumference one: generator
/// `i` rotates by `angles[i]`, so `g` acts by `x -> x + Σ g_i angles_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationSystem<T: Scalar> {
    dimension: usize,
    angles: Vec<T>,
}

impl<T: Scalar> RotationSystem<T> {
    pub fn new(angles: Vec<T>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::invalid("rotation needs at least one angle"));
        }
        let dimension = angles.len();
        Ok(RotationSystem {
            dimension,
            angles: angles.into_iter().map(|a| a.mod_one()).collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    /// Total rotation applied by `g`, reduced into `[0, 1)`.
    pub fn offset(&self, g: &GroupElement) -> Result<T> {
        if g.dimension() != self.dimension {
            return Err(Error::invalid(format!(
                "group element {g:?} has dimension {}, rotation has {}",
                g.dimension(),
                self.dimension
            )));
        }
        let mut total = T::zero();
        for (&c, angle) in g.coords().iter().zip(&self.angles) {
            total = total + T::from_int(c) * angle.clone();
        }
        Ok(total.mod_one())
    }
}

/// A cylinder pattern: finitely many coordinates, each pinned to a letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CylinderPattern {
    constraints: Vec<(GroupElement, u8)>,
}

impl CylinderPattern {
    pub fn new(mut constraints: Vec<(GroupElement, u8)>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::invalid("cylinder pattern has no constraints"));
        }
        let d = constraints[0].0.dimension();
        if constraints.iter().any(|(c, _)| c.dimension() != d) {
            return Err(Error::invalid("cylinder coordinates have mixed dimensions"));
        }
        constraints.sort();
        if constraints.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("cylinder pattern repeats a coordinate"));
        }
        Ok(CylinderPattern { constraints })
    }

    /// Single-coordinate cylinder `{x : x_coord = letter}`.
    pub fn at(coord: GroupElement, letter: u8) -> Self {
        CylinderPattern {
            constraints: vec![(coord, letter)],
        }
    }

    pub fn constraints(&self) -> &[(GroupElement, u8)] {
        &self.constraints
    }

    pub fn translate(&self, shift: &GroupElement) -> Result<CylinderPattern> {
        let constraints = self
            .constraints
            .iter()
            .map(|(c, l)| Ok((c.checked_add(shift)?, *l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CylinderPattern { constraints })
    }

    /// Conjunction of two patterns; `None` when they conflict.
    pub fn merge(&self, other: &CylinderPattern) -> Option<CylinderPattern> {
        let mut merged = Vec::with_capacity(self.constraints.len() + other.constraints.len());
        let (mut i, mut j) = (0, 0);
        while i < self.constraints.len() && j < other.constraints.len() {
            match self.constraints[i].0.cmp(&other.constraints[j].0) {
                std::cmp::Ordering::Less => {
                    merged.push(self.constraints[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push(other.constraints[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if self.constraints[i].1 != other.constraints[j].1 {
                        return None;
                    }
                    merged.push(self.constraints[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&self.constraints[i..]);
        merged.extend_from_slice(&other.constraints[j..]);
        Some(CylinderPattern {
            constraints: merged,
        })
    }

    fn matches(&self, space: &ConfigSpace, config: &[u8]) -> bool {
        self.constraints
            .iter()
            .all(|(c, l)| config[space.index_of(c)] == *l)
    }

    fn chebyshev_radius(&self) -> i64 {
        self.constraints
            .iter()
            .flat_map(|(c, _)| c.coords().iter().map(|v| v.abs()))
            .max()
            .unwrap_or(0)
    }
}

/// A finite union of cylinder patterns; the empty union is the empty set.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderUnion {
    patterns: Vec<CylinderPattern>,
}

impl CylinderUnion {
    pub fn empty() -> Self {
        CylinderUnion { patterns: Vec::new() }
    }

    pub fn new(patterns: Vec<CylinderPattern>) -> Self {
        CylinderUnion { patterns }
    }

    pub fn single(pattern: CylinderPattern) -> Self {
        CylinderUnion {
            patterns: vec![pattern],
        }
    }

    pub fn patterns(&self) -> &[CylinderPattern] {
        &self.patterns
    }

    pub fn is_empty_set(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn translate(&self, shift: &GroupElement) -> Result<CylinderUnion> {
        Ok(CylinderUnion {
            patterns: self
                .patterns
                .iter()
                .map(|p| p.translate(shift))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    fn matches(&self, space: &ConfigSpace, config: &[u8]) -> bool {
        self.patterns.iter().any(|p| p.matches(space, config))
    }

    fn domain(&self) -> impl Iterator<Item = &GroupElement> {
        self.patterns.iter().flat_map(|p| p.constraints.iter().map(|(c, _)| c))
    }
}

/// The `g^{-1}`-image of a cylinder set: the pattern shifted by `-m(g)`,
/// letters unchanged. The sign convention `(g x)_t = x_{t - m(g)}` is
/// pinned by the column-independence test below.
pub fn act_on_pattern<T: Scalar>(
    sys: &SymbolicSystem<T>,
    g: &GroupElement,
    pattern: &CylinderPattern,
) -> Result<CylinderPattern> {
    let shift = sys.effective_translation(g)?.checked_neg()?;
    pattern.translate(&shift)
}

/// Product-measure mass of a cylinder pattern.
pub fn cylinder_measure<T: Scalar>(
    sys: &SymbolicSystem<T>,
    pattern: &CylinderPattern,
) -> Result<T> {
    if pattern
        .constraints
        .iter()
        .any(|(c, _)| c.dimension() != sys.dimension)
    {
        return Err(Error::invalid("pattern dimension does not match system"));
    }
    let mut mass = T::one();
    for (_, letter) in &pattern.constraints {
        mass = mass * sys.letter_weight(*letter)?.clone();
    }
    Ok(mass)
}

/// The `g^{-1}`-image of an arc: translated by minus the rotation offset.
pub fn rotate_arc<T: Scalar>(
    sys: &RotationSystem<T>,
    g: &GroupElement,
    arc: &Arc<T>,
) -> Result<Arc<T>> {
    let delta = sys.offset(g)?;
    Ok(arc.translate(&(T::zero() - delta).mod_one()))
}

/// Serializable representative of a localized point.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PointRep {
    Pattern {
        coordinates: Vec<Vec<i64>>,
        letters: Vec<u8>,
    },
    CirclePoint {
        value: String,
        approx: f64,
    },
}

/// Common interface of the concrete systems: exact joins of translated
/// partitions, atom incidences of translated covers, and region-level
/// measure and intersection queries.
pub trait DynamicalSystem<T: Scalar>: Send + Sync {
    type Partition: Clone + PartialEq + Send + Sync;
    type Region: Clone + PartialEq + Send + Sync;

    fn dimension(&self) -> usize;

    /// Exact cell distribution of `⋁ g^{-1} α` over the given
    /// `(g, partition)` pairs. Duplicate effective translations collapse.
    fn join_distribution(
        &self,
        items: &[(GroupElement, &Self::Partition)],
        budget: u64,
    ) -> Result<CellDistribution<T>>;

    /// Atom carrier and incidence of the translated covers; one element
    /// group per distinct effective translation.
    fn cover_atoms(
        &self,
        translates: &[(GroupElement, &[Self::Region])],
        budget: u64,
    ) -> Result<AtomIncidence>;

    /// Is `⋂ g^{-1} R` nonempty (exactly, on the carrier)?
    fn regions_intersect(
        &self,
        items: &[(GroupElement, &Self::Region)],
        budget: u64,
    ) -> Result<bool>;

    fn region_is_empty(&self, region: &Self::Region) -> bool;

    fn region_measure(&self, region: &Self::Region, budget: u64) -> Result<T>;

    /// `μ(A ∩ g^{-1} B)`, exact.
    fn translated_intersection_measure(
        &self,
        a: &Self::Region,
        g: &GroupElement,
        b: &Self::Region,
        budget: u64,
    ) -> Result<T>;

    fn region_complement(&self, region: &Self::Region, budget: u64) -> Result<Self::Region>;

    /// Diameter in the system metric (`2^{-first-disagreement-radius}`
    /// for configurations, arc length capped at 1/2 on the circle).
    fn region_diameter(&self, region: &Self::Region) -> f64;

    /// Closed half-diameter balls covering the region, in deterministic
    /// order; each candidate is a subset of the region.
    fn halving_candidates(
        &self,
        region: &Self::Region,
        budget: u64,
    ) -> Result<Vec<Self::Region>>;

    fn region_point(&self, region: &Self::Region) -> Result<PointRep>;

    fn region_summary(&self, region: &Self::Region) -> String;
}

// ---------------------------------------------------------------------------
// Symbolic enumeration engine
// ---------------------------------------------------------------------------

/// Finite configuration space over a sorted Vec of coordinates.
pub(crate) struct ConfigSpace {
    coords: Vec<GroupElement>,
    alphabet: usize,
    size: u64,
}

impl ConfigSpace {
    pub(crate) fn build(
        mut coords: Vec<GroupElement>,
        alphabet: usize,
        budget: u64,
        what: &str,
    ) -> Result<Self> {
        coords.sort();
        coords.dedup();
        let bits = (coords.len() as f64) * (alphabet as f64).log2();
        if bits > 63.0 {
            return Err(Error::capacity(format!(
                "{what}: domain of {} coordinates cannot be enumerated",
                coords.len()
            )));
        }
        let size = (alphabet as u64).pow(coords.len() as u32);
        if size > budget {
            return Err(Error::capacity(format!(
                "{what}: domain of {} coordinates needs {size} states, budget is {budget}",
                coords.len()
            )));
        }
        Ok(ConfigSpace {
            coords,
            alphabet,
            size,
        })
    }

    pub(crate) fn len(&self) -> u64 {
        self.size
    }


    fn index_of(&self, coord: &GroupElement) -> usize {
        self.coords
            .binary_search(coord)
            .expect("coordinate not in configuration space")
    }

    /// Iterate configurations in lexicographic order (first coordinate most
    /// significant), invoking the callback with the configuration index.
    pub(crate) fn for_each(&self, mut f: impl FnMut(u64, &[u8])) {
        let mut config = vec![0u8; self.coords.len()];
        let mut index = 0u64;
        loop {
            f(index, &config);
            index += 1;
            let mut pos = config.len();
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                config[pos] += 1;
                if (config[pos] as usize) < self.alphabet {
                    break;
                }
                config[pos] = 0;
            }
        }
    }
}

struct TranslatedPartitionReader {
    positions: Vec<usize>,
    powers: Vec<u64>,
    labels: Vec<u32>,
}

impl TranslatedPartitionReader {
    fn label(&self, config: &[u8]) -> u32 {
        let mut idx = 0u64;
        for (pos, pow) in self.positions.iter().zip(&self.powers) {
            idx += u64::from(config[*pos]) * pow;
        }
        self.labels[idx as usize]
    }
}

impl<T: Scalar> SymbolicSystem<T> {
    fn dedup_translations<'a, P: PartialEq>(
        &self,
        items: &'a [(GroupElement, &'a P)],
    ) -> Result<Vec<(GroupElement, &'a P)>> {
        let mut out: Vec<(GroupElement, &P)> = Vec::new();
        for (g, payload) in items {
            let m = self.effective_translation(g)?;
            if !out.iter().any(|(m2, p2)| *m2 == m && *p2 == *payload) {
                out.push((m, payload));
            }
        }
        Ok(out)
    }

    fn config_mass(&self, config: &[u8]) -> T {
        let mut mass = T::one();
        for &letter in config {
            mass = mass * self.weights[letter as usize].clone();
        }
        mass
    }
}

impl<T: Scalar> DynamicalSystem<T> for SymbolicSystem<T> {
    type Partition = SymbolicPartition;
    type Region = CylinderUnion;

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn join_distribution(
        &self,
        items: &[(GroupElement, &Self::Partition)],
        budget: u64,
    ) -> Result<CellDistribution<T>> {
        if items.is_empty() {
            return Err(Error::invalid("join over an empty set of translates"));
        }
        let deduped = self.dedup_translations(items)?;
        let mut domain = Vec::new();
        let mut shifted_windows = Vec::with_capacity(deduped.len());
        for (m, part) in &deduped {
            part.check_alphabet(self.alphabet)?;
            let shift = m.checked_neg()?;
            let window = part
                .window()
                .iter()
                .map(|w| w.checked_add(&shift))
                .collect::<Result<Vec<_>>>()?;
            domain.extend(window.iter().cloned());
            shifted_windows.push(window);
        }
        let space = ConfigSpace::build(domain, self.alphabet, budget, "partition join")?;
        let readers: Vec<TranslatedPartitionReader> = deduped
            .iter()
            .zip(&shifted_windows)
            .map(|((_, part), window)| {
                let positions: Vec<usize> =
                    window.iter().map(|c| space.index_of(c)).collect();
                let mut powers = vec![1u64; positions.len()];
                for i in (0..positions.len().saturating_sub(1)).rev() {
                    powers[i] = powers[i + 1] * self.alphabet as u64;
                }
                TranslatedPartitionReader {
                    positions,
                    powers,
                    labels: part.labels().to_vec(),
                }
            })
            .collect();
        let mut cells: BTreeMap<Vec<u32>, T::Acc> = BTreeMap::new();
        space.for_each(|_, config| {
            let vec: Vec<u32> = readers.iter().map(|r| r.label(config)).collect();
            let mass = self.config_mass(config);
            T::acc_add(cells.entry(vec).or_default(), &mass);
        });
        CellDistribution::from_accumulated(cells)
    }

    fn cover_atoms(
        &self,
        translates: &[(GroupElement, &[Self::Region])],
        budget: u64,
    ) -> Result<AtomIncidence> {
        if translates.is_empty() {
            return Err(Error::invalid("cover join over an empty set of translates"));
        }
        struct Slot<'a> {
            m: GroupElement,
            elements: &'a [CylinderUnion],
        }
        let mut slots: Vec<Slot> = Vec::new();
        for (g, elements) in translates {
            let m = self.effective_translation(g)?;
            if !slots
                .iter()
                .any(|s| s.m == m && s.elements == *elements)
            {
                slots.push(Slot { m, elements });
            }
        }
        let mut domain = Vec::new();
        let mut translated: Vec<Vec<CylinderUnion>> = Vec::with_capacity(slots.len());
        for slot in &slots {
            let shift = slot.m.checked_neg()?;
            let mut elems = Vec::with_capacity(slot.elements.len());
            for e in slot.elements {
                let t = e.translate(&shift)?;
                domain.extend(t.domain().cloned());
                elems.push(t);
            }
            translated.push(elems);
        }
        let space = ConfigSpace::build(domain, self.alphabet, budget, "cover join")?;
        let atom_count = space.len() as usize;
        let element_total: usize = translated.iter().map(Vec::len).sum();
        let bits = (atom_count as u128) * (element_total as u128);
        if bits > (1u128 << 31) {
            return Err(Error::capacity(format!(
                "cover incidence needs {bits} bits ({element_total} elements on {atom_count} atoms)"
            )));
        }
        let flat_elements: Vec<&CylinderUnion> = translated.iter().flatten().collect();
        let mut flat_sets: Vec<FixedBitSet> = (0..element_total)
            .map(|_| FixedBitSet::with_capacity(atom_count))
            .collect();
        space.for_each(|idx, config| {
            for (e_idx, element) in flat_elements.iter().enumerate() {
                if element.matches(&space, config) {
                    flat_sets[e_idx].insert(idx as usize);
                }
            }
        });
        let mut incidence = AtomIncidence::new(atom_count);
        let mut remaining = flat_sets.into_iter();
        for group in &translated {
            incidence.push_group(remaining.by_ref().take(group.len()).collect());
        }
        Ok(incidence)
    }

    fn regions_intersect(
        &self,
        items: &[(GroupElement, &Self::Region)],
        budget: u64,
    ) -> Result<bool> {
        let mut translated: Vec<&CylinderUnion> = Vec::with_capacity(items.len());
        let mut storage: Vec<CylinderUnion> = Vec::with_capacity(items.len());
        for (g, region) in items {
            let shift = self.effective_translation(g)?.checked_neg()?;
            storage.push(region.translate(&shift)?);
        }
        for region in &storage {
            if region.is_empty_set() {
                return Ok(false);
            }
            translated.push(region);
        }
        // DFS over one pattern choice per union, merging constraints; on the
        // full shift a consistent merged pattern is exactly a nonempty
        // intersection witness.
        fn dfs(
            unions: &[&CylinderUnion],
            idx: usize,
            acc: Option<&CylinderPattern>,
            steps: &mut u64,
            budget: u64,
        ) -> Result<bool> {
            if idx == unions.len() {
                return Ok(true);
            }
            for pat in unions[idx].patterns() {
                *steps += 1;
                if *steps > budget {
                    return Err(Error::capacity(
                        "intersection search exceeded the merge budget".to_string(),
                    ));
                }
                let merged = match acc {
                    None => Some(pat.clone()),
                    Some(a) => a.merge(pat),
                };
                if let Some(m) = merged {
                    if dfs(unions, idx + 1, Some(&m), steps, budget)? {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        let mut steps = 0u64;
        dfs(&translated, 0, None, &mut steps, budget)
    }

    fn region_is_empty(&self, region: &Self::Region) -> bool {
        region.is_empty_set()
    }

    fn region_measure(&self, region: &Self::Region, budget: u64) -> Result<T> {
        if region.is_empty_set() {
            return Ok(T::zero());
        }
        if region.patterns().len() == 1 {
            return cylinder_measure(self, &region.patterns()[0]);
        }
        let domain: Vec<GroupElement> = region.domain().cloned().collect();
        let space = ConfigSpace::build(domain, self.alphabet, budget, "region measure")?;
        let mut acc = T::Acc::default();
        space.for_each(|_, config| {
            if region.matches(&space, config) {
                T::acc_add(&mut acc, &self.config_mass(config));
            }
        });
        Ok(T::acc_total(&acc))
    }

    fn translated_intersection_measure(
        &self,
        a: &Self::Region,
        g: &GroupElement,
        b: &Self::Region,
        budget: u64,
    ) -> Result<T> {
        if a.is_empty_set() || b.is_empty_set() {
            return Ok(T::zero());
        }
        let shift = self.effective_translation(g)?.checked_neg()?;
        let tb = b.translate(&shift)?;
        let domain: Vec<GroupElement> = a.domain().chain(tb.domain()).cloned().collect();
        let space = ConfigSpace::build(domain, self.alphabet, budget, "intersection measure")?;
        let mut acc = T::Acc::default();
        space.for_each(|_, config| {
            if a.matches(&space, config) && tb.matches(&space, config) {
                T::acc_add(&mut acc, &self.config_mass(config));
            }
        });
        Ok(T::acc_total(&acc))
    }

    fn region_complement(&self, region: &Self::Region, budget: u64) -> Result<Self::Region> {
        if region.is_empty_set() {
            return Err(Error::invalid("complement of the empty region is X"));
        }
        let domain: Vec<GroupElement> = region.domain().cloned().collect();
        let space = ConfigSpace::build(domain, self.alphabet, budget, "region complement")?;
        let mut patterns = Vec::new();
        space.for_each(|_, config| {
            if !region.matches(&space, config) {
                let constraints = space
                    .coords
                    .iter()
                    .cloned()
                    .zip(config.iter().copied())
                    .collect();
                patterns.push(CylinderPattern { constraints });
            }
        });
        Ok(CylinderUnion { patterns })
    }

    fn region_diameter(&self, region: &Self::Region) -> f64 {
        match self.first_free_radius(region) {
            Some(r) => 0.5f64.powi(r as i32),
            None => 0.0,
        }
    }

    fn halving_candidates(
        &self,
        region: &Self::Region,
        budget: u64,
    ) -> Result<Vec<Self::Region>> {
        let radius = match self.first_free_radius(region) {
            Some(r) => r,
            None => return Ok(Vec::new()),
        };
        let mut box_coords = Vec::new();
        let mut digits = vec![-radius; self.dimension];
        loop {
            box_coords.push(GroupElement::new(digits.clone()));
            let mut pos = self.dimension;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] <= radius {
                    break;
                }
                digits[pos] = -radius;
            }
            if digits.iter().all(|&v| v == -radius) {
                break;
            }
        }
        let ball_space =
            ConfigSpace::build(box_coords, self.alphabet, budget, "halving candidates")?;
        // Subset check runs on the joint domain of the ball and the region.
        let mut joint: Vec<GroupElement> = ball_space.coords.clone();
        joint.extend(region.domain().cloned());
        let joint_space = ConfigSpace::build(joint, self.alphabet, budget, "halving candidates")?;
        let mut candidates = Vec::new();
        ball_space.for_each(|_, ball_config| {
            let ball = CylinderPattern {
                constraints: ball_space
                    .coords
                    .iter()
                    .cloned()
                    .zip(ball_config.iter().copied())
                    .collect(),
            };
            let mut contained = true;
            let mut nonempty = false;
            joint_space.for_each(|_, config| {
                if ball.matches(&joint_space, config) {
                    nonempty = true;
                    if !region.matches(&joint_space, config) {
                        contained = false;
                    }
                }
            });
            if contained && nonempty {
                candidates.push(CylinderUnion::single(ball));
            }
        });
        Ok(candidates)
    }

    fn region_point(&self, region: &Self::Region) -> Result<PointRep> {
        let pattern = region
            .patterns()
            .first()
            .ok_or_else(|| Error::invalid("empty region has no representative point"))?;
        Ok(PointRep::Pattern {
            coordinates: pattern
                .constraints
                .iter()
                .map(|(c, _)| c.coords().to_vec())
                .collect(),
            letters: pattern.constraints.iter().map(|(_, l)| *l).collect(),
        })
    }

    fn region_summary(&self, region: &Self::Region) -> String {
        if region.is_empty_set() {
            return "empty".to_string();
        }
        let parts: Vec<String> = region
            .patterns()
            .iter()
            .map(|p| {
                let cs: Vec<String> = p
                    .constraints
                    .iter()
                    .map(|(c, l)| format!("{c:?}={l}"))
                    .collect();
                format!("[{}]", cs.join(","))
            })
            .collect();
        parts.join(" u ")
    }
}

impl<T: Scalar> SymbolicSystem<T> {
    /// Smallest Chebyshev radius at which two members of the region can
    /// disagree; `None` for regions pinning at most one point per window
    /// (cannot happen on a full shift: some coordinate is always free).
    fn first_free_radius(&self, region: &CylinderUnion) -> Option<i64> {
        if region.is_empty_set() {
            return None;
        }
        let max_radius = region
            .patterns()
            .iter()
            .map(CylinderPattern::chebyshev_radius)
            .max()
            .unwrap_or(0);
        for radius in 0..=max_radius + 1 {
            let mut digits = vec![-radius; self.dimension];
            loop {
                let on_shell = digits.iter().any(|&v| v.abs() == radius);
                if on_shell {
                    let coord = GroupElement::new(digits.clone());
                    let mut letters: Vec<Option<u8>> = Vec::new();
                    for p in region.patterns() {
                        let found = p
                            .constraints
                            .iter()
                            .find(|(c, _)| *c == coord)
                            .map(|(_, l)| *l);
                        letters.push(found);
                    }
                    let rigid = letters.iter().all(|l| l.is_some())
                        && letters.windows(2).all(|w| w[0] == w[1]);
                    if !rigid {
                        return Some(radius);
                    }
                }
                let mut pos = self.dimension;
                let mut done = true;
                while pos > 0 {
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] <= radius {
                        done = false;
                        break;
                    }
                    digits[pos] = -radius;
                }
                if done {
                    break;
                }
            }
        }
        Some(max_radius + 1)
    }
}

// ---------------------------------------------------------------------------
// Rotation engine
// ---------------------------------------------------------------------------

impl<T: Scalar> RotationSystem<T> {
    fn dedup_offsets<'a, P: PartialEq>(
        &self,
        items: &'a [(GroupElement, &'a P)],
    ) -> Result<Vec<(T, &'a P)>> {
        let mut out: Vec<(T, &P)> = Vec::new();
        for (g, payload) in items {
            let delta = self.offset(g)?;
            if !out
                .iter()
                .any(|(d2, p2)| d2.circle_coincides(&delta) && *p2 == *payload)
            {
                out.push((delta, payload));
            }
        }
        Ok(out)
    }
}

impl<T: Scalar> DynamicalSystem<T> for RotationSystem<T> {
    type Partition = CirclePartition<T>;
    type Region = ArcSet<T>;

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn join_distribution(
        &self,
        items: &[(GroupElement, &Self::Partition)],
        _budget: u64,
    ) -> Result<CellDistribution<T>> {
        if items.is_empty() {
            return Err(Error::invalid("join over an empty set of translates"));
        }
        let deduped = self.dedup_offsets(items)?;
        let mut points = Vec::new();
        for (delta, part) in &deduped {
            let neg = (T::zero() - delta.clone()).mod_one();
            for bp in part.breakpoints() {
                points.push((bp.clone() + neg.clone()).mod_one());
            }
        }
        let atoms = cut_circle(&points);
        let mut cells: BTreeMap<Vec<u32>, T::Acc> = BTreeMap::new();
        for atom in &atoms {
            let mid = atom.midpoint();
            let vec: Vec<u32> = deduped
                .iter()
                .map(|(delta, part)| part.label_at(&(mid.clone() + delta.clone()).mod_one()))
                .collect();
            T::acc_add(cells.entry(vec).or_default(), atom.length());
        }
        CellDistribution::from_accumulated(cells)
    }

    fn cover_atoms(
        &self,
        translates: &[(GroupElement, &[Self::Region])],
        budget: u64,
    ) -> Result<AtomIncidence> {
        if translates.is_empty() {
            return Err(Error::invalid("cover join over an empty set of translates"));
        }
        struct Slot<'a, T> {
            delta: T,
            elements: &'a [ArcSet<T>],
        }
        let mut slots: Vec<Slot<T>> = Vec::new();
        for (g, elements) in translates {
            let delta = self.offset(g)?;
            if !slots
                .iter()
                .any(|s| s.delta.circle_coincides(&delta) && s.elements == *elements)
            {
                slots.push(Slot { delta, elements });
            }
        }
        let mut translated: Vec<Vec<ArcSet<T>>> = Vec::with_capacity(slots.len());
        let mut points: Vec<T> = Vec::new();
        for slot in &slots {
            let neg = (T::zero() - slot.delta.clone()).mod_one();
            let mut group = Vec::with_capacity(slot.elements.len());
            for e in slot.elements {
                let t = e.translate(&neg);
                points.extend(t.cut_points());
                group.push(t);
            }
            translated.push(group);
        }
        let atoms = cut_circle(&points);
        let element_total: usize = translated.iter().map(Vec::len).sum();
        let bits = (atoms.len() as u128) * (element_total as u128);
        if bits > (1u128 << 31) || (atoms.len() as u64) > budget {
            return Err(Error::capacity(format!(
                "cover incidence needs {bits} bits ({element_total} elements on {} atoms)",
                atoms.len()
            )));
        }
        let mut incidence = AtomIncidence::new(atoms.len());
        for group in &translated {
            let mut sets = Vec::with_capacity(group.len());
            for element in group {
                let mut bitset = FixedBitSet::with_capacity(atoms.len());
                for (a_idx, atom) in atoms.iter().enumerate() {
                    if element.contains_interior(&atom.midpoint()) {
                        bitset.insert(a_idx);
                    }
                }
                sets.push(bitset);
            }
            incidence.push_group(sets);
        }
        Ok(incidence)
    }

    fn regions_intersect(
        &self,
        items: &[(GroupElement, &Self::Region)],
        _budget: u64,
    ) -> Result<bool> {
        let mut acc = ArcSet::full();
        for (g, region) in items {
            let neg = (T::zero() - self.offset(g)?).mod_one();
            acc = acc.intersect(&region.translate(&neg));
            if acc.is_empty() {
                return Ok(false);
            }
        }
        Ok(!acc.is_empty())
    }

    fn region_is_empty(&self, region: &Self::Region) -> bool {
        region.is_empty()
    }

    fn region_measure(&self, region: &Self::Region, _budget: u64) -> Result<T> {
        Ok(region.measure())
    }

    fn translated_intersection_measure(
        &self,
        a: &Self::Region,
        g: &GroupElement,
        b: &Self::Region,
        _budget: u64,
    ) -> Result<T> {
        let neg = (T::zero() - self.offset(g)?).mod_one();
        Ok(a.intersect(&b.translate(&neg)).measure())
    }

    fn region_complement(&self, region: &Self::Region, _budget: u64) -> Result<Self::Region> {
        Ok(region.complement())
    }

    fn region_diameter(&self, region: &Self::Region) -> f64 {
        if region.is_empty() {
            return 0.0;
        }
        if region.is_full() {
            return 0.5;
        }
        let mut points: Vec<f64> = Vec::new();
        let mut best: f64 = 0.0;
        for arc in region.arcs() {
            let len = arc.length().to_f64();
            best = best.max(len.min(0.5));
            points.push(arc.start().to_f64());
            points.push(arc.end().to_f64());
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let d = (points[i] - points[j]).abs();
                best = best.max(d.min(1.0 - d));
            }
        }
        best
    }

    fn halving_candidates(
        &self,
        region: &Self::Region,
        _budget: u64,
    ) -> Result<Vec<Self::Region>> {
        let mut out = Vec::new();
        for arc in region.arcs() {
            let half = arc.length().half();
            let first = Arc::new(arc.start().clone(), half.clone())?;
            let second = Arc::new((arc.start().clone() + half.clone()).mod_one(), half)?;
            out.push(ArcSet::new(vec![first]));
            out.push(ArcSet::new(vec![second]));
        }
        Ok(out)
    }

    fn region_point(&self, region: &Self::Region) -> Result<PointRep> {
        let arc = region
            .arcs()
            .first()
            .ok_or_else(|| Error::invalid("empty region has no representative point"))?;
        let mid = arc.midpoint();
        Ok(PointRep::CirclePoint {
            value: format!("{mid}"),
            approx: mid.to_f64(),
        })
    }

    fn region_summary(&self, region: &Self::Region) -> String {
        if region.is_empty() {
            return "empty".to_string();
        }
        let parts: Vec<String> = region
            .arcs()
            .iter()
            .map(|a| format!("({}, len {})", a.start(), a.length()))
            .collect();
        parts.join(" u ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::SymbolicPartition;
    use crate::Exact;
    use approx::assert_abs_diff_eq;

    fn g(coords: &[i64]) -> GroupElement {
        GroupElement::new(coords.to_vec())
    }

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn cylinder_measures_are_products() {
        let half = SymbolicSystem::<f64>::full_shift(2, 1).unwrap();
        let one = CylinderPattern::at(g(&[0]), 1);
        assert_eq!(cylinder_measure(&half, &one).unwrap(), 0.5);

        let three = CylinderPattern::new(vec![
            (g(&[0]), 0),
            (g(&[1]), 1),
            (g(&[2]), 0),
        ])
        .unwrap();
        assert_eq!(cylinder_measure(&half, &three).unwrap(), 0.125);

        let skew = SymbolicSystem::<f64>::new(
            2,
            1,
            vec![0.2, 0.8],
            vec![AxisAction::Shift],
        )
        .unwrap();
        let pat = CylinderPattern::new(vec![
            (g(&[0]), 0),
            (g(&[1]), 1),
            (g(&[2]), 1),
        ])
        .unwrap();
        assert_abs_diff_eq!(
            cylinder_measure(&skew, &pat).unwrap(),
            0.128,
            epsilon = 1e-15
        );

        let exact = SymbolicSystem::<Exact>::new(
            2,
            1,
            vec![q(1, 5), q(4, 5)],
            vec![AxisAction::Shift],
        )
        .unwrap();
        assert_eq!(cylinder_measure(&exact, &pat).unwrap(), q(16, 125));
    }

    #[test]
    fn pattern_letters_out_of_range_are_rejected() {
        let sys = SymbolicSystem::<f64>::full_shift(2, 1).unwrap();
        let bad = CylinderPattern::at(g(&[0]), 7);
        assert!(cylinder_measure(&sys, &bad).is_err());
    }

    #[test]
    fn identity_and_identity_axes_fix_patterns() {
        let sys = SymbolicSystem::<f64>::new(
            2,
            2,
            vec![0.5, 0.5],
            vec![AxisAction::Identity, AxisAction::Shift],
        )
        .unwrap();
        let pat = CylinderPattern::at(g(&[0, 0]), 1);
        assert_eq!(act_on_pattern(&sys, &g(&[0, 0]), &pat).unwrap(), pat);
        // The first axis acts as the identity map.
        assert_eq!(act_on_pattern(&sys, &g(&[5, 0]), &pat).unwrap(), pat);
    }

    #[test]
    fn action_is_a_homomorphism_and_preserves_measure() {
        let sys = SymbolicSystem::<f64>::new(2, 1, vec![0.3, 0.7], vec![AxisAction::Shift])
            .unwrap();
        let pat = CylinderPattern::new(vec![(g(&[0]), 1), (g(&[2]), 0)]).unwrap();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let lhs = act_on_pattern(&sys, &g(&[a + b]), &pat).unwrap();
                let rhs =
                    act_on_pattern(&sys, &g(&[a]), &act_on_pattern(&sys, &g(&[b]), &pat).unwrap())
                        .unwrap();
                assert_eq!(lhs, rhs);
            }
            let moved = act_on_pattern(&sys, &g(&[a]), &pat).unwrap();
            assert_eq!(
                cylinder_measure(&sys, &moved).unwrap(),
                cylinder_measure(&sys, &pat).unwrap()
            );
        }
    }

    #[test]
    fn column_independence_pins_the_shift_sign() {
        // Z^2 with T_1 = Id, T_2 = shift: translates along the second axis
        // read distinct coordinates, so the join of the generating
        // partition over a column has 2^k cells of equal mass.
        let sys = SymbolicSystem::<Exact>::new(
            2,
            2,
            vec![q(1, 2), q(1, 2)],
            vec![AxisAction::Identity, AxisAction::Shift],
        )
        .unwrap();
        let alpha = SymbolicPartition::generating(2, 2);
        let column: Vec<(GroupElement, &SymbolicPartition)> = (0..3)
            .map(|j| (g(&[0, j]), &alpha))
            .collect();
        let dist = sys.join_distribution(&column, 1 << 20).unwrap();
        assert_eq!(dist.len(), 8);
        assert!(dist.cells().iter().all(|(_, m)| *m == q(1, 8)));
    }

    #[test]
    fn rotate_arc_examples() {
        let sys = RotationSystem::<f64>::new(vec![0.25]).unwrap();
        let arc = Arc::new(0.0f64, 0.5).unwrap();
        let same = rotate_arc(&sys, &g(&[0]), &arc).unwrap();
        assert_eq!(same.start(), &0.0);

        let wrapped = rotate_arc(&sys, &g(&[1]), &arc).unwrap();
        assert_eq!(wrapped.start(), &0.75);
        assert_eq!(wrapped.length(), &0.5);

        let full_turn = rotate_arc(&sys, &g(&[4]), &arc).unwrap();
        assert!(full_turn.start().coincides(&0.0));
        assert_eq!(full_turn.length(), &0.5);
    }

    #[test]
    fn rational_rotation_has_exact_period() {
        let sys = RotationSystem::<Exact>::new(vec![q(1, 4)]).unwrap();
        let arc = Arc::new(q(1, 10), q(3, 10)).unwrap();
        let back = rotate_arc(&sys, &g(&[4]), &arc).unwrap();
        assert_eq!(back, arc);
        let off = sys.offset(&g(&[-3])).unwrap();
        assert_eq!(off, q(1, 4));
    }

    #[test]
    fn rotation_action_is_a_homomorphism_on_arcs() {
        let sys = RotationSystem::<f64>::new(vec![0.3819660112501051]).unwrap();
        let arc = ArcSet::new(vec![Arc::new(0.2f64, 0.3).unwrap()]);
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                let d_ab = (0.0 - sys.offset(&g(&[a + b])).unwrap()).mod_one();
                let lhs = arc.translate(&d_ab);
                let d_b = (0.0 - sys.offset(&g(&[b])).unwrap()).mod_one();
                let d_a = (0.0 - sys.offset(&g(&[a])).unwrap()).mod_one();
                let rhs = arc.translate(&d_b).translate(&d_a);
                assert!(lhs.arcs()[0].start().circle_coincides(rhs.arcs()[0].start()));
            }
        }
    }

    #[test]
    fn symbolic_diameters_and_halving() {
        let sys = SymbolicSystem::<f64>::full_shift(2, 1).unwrap();
        // Complement pair of the standard cover: diameter 1/2, halving
        // candidates are fully-pinned radius-1 boxes inside the region.
        let region = CylinderUnion::single(CylinderPattern::at(g(&[0]), 0));
        assert_eq!(sys.region_diameter(&region), 0.5);
        let candidates = sys.halving_candidates(&region, 1 << 20).unwrap();
        assert_eq!(candidates.len(), 4);
        for c in &candidates {
            assert_eq!(sys.region_diameter(c), 0.25);
            // Candidate stays inside the region: letter at 0 is pinned to 0.
            let pat = &c.patterns()[0];
            assert!(pat
                .constraints()
                .iter()
                .any(|(coord, l)| coord == &g(&[0]) && *l == 0));
        }
    }

    #[test]
    fn rotation_diameter_caps_at_half() {
        let sys = RotationSystem::<f64>::new(vec![0.25]).unwrap();
        let small = ArcSet::new(vec![Arc::new(0.1f64, 0.2).unwrap()]);
        assert_abs_diff_eq!(sys.region_diameter(&small), 0.2, epsilon = 1e-12);
        let big = ArcSet::new(vec![Arc::new(0.0f64, 0.8).unwrap()]);
        assert_abs_diff_eq!(sys.region_diameter(&big), 0.5, epsilon = 1e-12);
        let halves = sys.halving_candidates(&small, 1 << 20).unwrap();
        assert_eq!(halves.len(), 2);
        assert_abs_diff_eq!(
            sys.region_diameter(&halves[0]),
            0.1,
            epsilon = 1e-12
        );
    }
}
